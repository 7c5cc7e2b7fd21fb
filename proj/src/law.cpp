#include "surrbound/law.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

namespace surrbound {
namespace {

void require_probability(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw Error(ErrorCode::NotAProbability,
                std::string(name) + " = " + std::to_string(v) + " is outside [0,1]");
  }
}

// Builds a 16-entry row from the flat positions 4*i + j of the listed cells.
std::array<double, 16> strong_row(std::initializer_list<int> plus,
                                  std::initializer_list<int> minus = {}) {
  std::array<double, 16> row{};
  for (int k : plus) row[k / 10 * 4 + k % 10] += 1.0;
  for (int k : minus) row[k / 10 * 4 + k % 10] -= 1.0;
  return row;
}

// Sum over i in rows and j in cols of q_{i,j}.
std::array<double, 64> nonstrong_cells(std::initializer_list<int> rows,
                                       std::initializer_list<int> cols,
                                       double sign = 1.0) {
  std::array<double, 64> row{};
  for (int i : rows)
    for (int j : cols) row[i * 4 + j] += sign;
  return row;
}

std::array<double, 64> add(std::array<double, 64> a, const std::array<double, 64>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

template <std::size_t N>
double dot(const std::array<double, N>& coeffs, const std::array<double, N>& cells) {
  double s = 0.0;
  for (std::size_t k = 0; k < N; ++k) s += coeffs[k] * cells[k];
  return s;
}

}  // namespace

ObservedLaw validate_observed(const ObservedLaw& law) {
  require_probability(law.p00, "p00");
  require_probability(law.p10, "p10");
  require_probability(law.p01, "p01");
  require_probability(law.p11, "p11");
  require_probability(law.s1_treated, "s1_treated");
  const double total = law.p00 + law.p10 + law.p01 + law.p11;
  if (std::abs(total - 1.0) > kProbTol) {
    throw Error(ErrorCode::NotNormalized,
                "control cells sum to " + std::to_string(total) + ", expected 1");
  }
  return law;
}

ObservedLaw renormalized(const ObservedLaw& law) {
  const double total = law.p00 + law.p10 + law.p01 + law.p11;
  if (!(total > 0.0)) {
    throw Error(ErrorCode::NotNormalized, "control cells sum to zero");
  }
  ObservedLaw out = law;
  out.p00 /= total;
  out.p10 /= total;
  out.p01 /= total;
  out.p11 /= total;
  return out;
}

std::array<double, 16> QTableStrong::flat() const {
  std::array<double, 16> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = q[i][j];
  return out;
}

QTableStrong QTableStrong::from_flat(std::span<const double> cells) {
  if (cells.size() != 16) {
    throw Error(ErrorCode::InvalidTable, "strong table needs 16 cells");
  }
  QTableStrong t;
  for (int k = 0; k < 16; ++k) t.q[k / 4][k % 4] = cells[k];
  return t;
}

std::array<double, 64> QTableNonStrong::flat() const {
  std::array<double, 64> out{};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = q[i][j];
  return out;
}

QTableNonStrong QTableNonStrong::from_flat(std::span<const double> cells) {
  if (cells.size() != 64) {
    throw Error(ErrorCode::InvalidTable, "non-strong table needs 64 cells");
  }
  QTableNonStrong t;
  for (int k = 0; k < 64; ++k) t.q[k / 4][k % 4] = cells[k];
  return t;
}

void validate_table(std::span<const double> cells) {
  double total = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!std::isfinite(cells[k]) || cells[k] < 0.0) {
      throw Error(ErrorCode::InvalidTable,
                  "cell " + std::to_string(k) + " is negative or not finite");
    }
    total += cells[k];
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw Error(ErrorCode::InvalidTable,
                "cells sum to " + std::to_string(total) + ", expected 1");
  }
}

const std::array<std::array<double, 16>, 6>& strong_constraint_matrix() {
  // Cell q_ij is written as the two-digit literal ij.
  static const std::array<std::array<double, 16>, 6> a = {
      strong_row({0, 1, 10, 11}),
      strong_row({2, 3, 12, 13}),
      strong_row({20, 22, 30, 32}),
      strong_row({0, 1, 20, 21, 2, 3, 22, 23}),
      strong_row({1, 11, 21, 31}, {2, 12, 22, 32}),
      strong_row({0, 1, 2, 3, 10, 11, 12, 13, 20, 21, 22, 23, 30, 31, 32, 33}),
  };
  return a;
}

const std::array<double, 16>& strong_ace_coefficients() {
  static const auto c = strong_row({22, 11}, {12, 21});
  return c;
}

const std::array<double, 16>& strong_treated_risk_coefficients() {
  static const auto c = strong_row({2, 3, 22, 23, 11, 13, 31, 33});
  return c;
}

const std::array<double, 16>& strong_control_risk_coefficients() {
  static const auto c = strong_row({2, 3, 12, 13, 21, 23, 31, 33});
  return c;
}

const std::array<double, 16>& strong_y1_coefficients() {
  static const auto c = strong_row({1, 11, 21, 31, 3, 13, 23, 33});
  return c;
}

const std::array<double, 16>& strong_y0_coefficients() {
  static const auto c = strong_row({2, 12, 22, 32, 3, 13, 23, 33});
  return c;
}

const NonStrongRows& nonstrong_rows() {
  static const NonStrongRows rows = [] {
    NonStrongRows r{};
    r.p00 = nonstrong_cells({0, 1, 2, 3, 4, 5, 6, 7}, {0, 1});
    r.p10 = nonstrong_cells({8, 9, 10, 11, 12, 13, 14, 15}, {0, 1});
    r.p01 = nonstrong_cells({0, 1, 2, 3, 8, 9, 10, 11}, {2, 3});
    r.s0_treated = nonstrong_cells({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
                                   {0, 2});
    r.gamma0 = add(nonstrong_cells({4, 5, 6, 7}, {0, 1, 2, 3}),
                   nonstrong_cells({8, 9, 10, 11}, {0, 1, 2, 3}, -1.0));
    r.gamma1 = add(nonstrong_cells({1, 5, 9, 13}, {0, 1, 2, 3}),
                   nonstrong_cells({2, 6, 10, 14}, {0, 1, 2, 3}, -1.0));
    r.ones = nonstrong_cells({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
                             {0, 1, 2, 3});
    // P(Y=1|T=0) = P(Y00=1, S0=0) + P(Y01=1, S0=1).
    r.py1_control = add(nonstrong_cells({8, 9, 10, 11, 12, 13, 14, 15}, {0, 1}),
                        nonstrong_cells({4, 5, 6, 7, 12, 13, 14, 15}, {2, 3}));
    std::array<double, 64> ace{};
    ace = add(ace, nonstrong_cells({2, 3, 6, 7}, {0}));
    ace = add(ace, nonstrong_cells({8, 9, 12, 13}, {0}, -1.0));
    ace = add(ace, nonstrong_cells({1, 3, 5, 7}, {1}));
    ace = add(ace, nonstrong_cells({8, 10, 12, 14}, {1}, -1.0));
    ace = add(ace, nonstrong_cells({2, 3, 10, 11}, {2}));
    ace = add(ace, nonstrong_cells({4, 5, 12, 13}, {2}, -1.0));
    ace = add(ace, nonstrong_cells({1, 3, 9, 11}, {3}));
    ace = add(ace, nonstrong_cells({4, 6, 12, 14}, {3}, -1.0));
    r.ace = ace;
    return r;
  }();
  return rows;
}

StrongObservables observables_from_qtable_strong(const QTableStrong& q) {
  const auto cells = q.flat();
  validate_table(cells);
  const auto& a = strong_constraint_matrix();
  StrongObservables out;
  out.law.p00 = dot(a[0], cells);
  out.law.p10 = dot(a[1], cells);
  out.law.p01 = dot(a[2], cells);
  out.law.p11 = dot(strong_row({21, 23, 31, 33}), cells);
  out.law.s1_treated = dot(strong_row({10, 11, 12, 13, 30, 31, 32, 33}), cells);
  out.gamma = dot(a[4], cells);
  return out;
}

double ace_from_qtable_strong(const QTableStrong& q) {
  return dot(strong_ace_coefficients(), q.flat());
}

NonStrongEffects effects_from_qtable_nonstrong(const QTableNonStrong& q) {
  const auto cells = q.flat();
  validate_table(cells);
  const auto& r = nonstrong_rows();
  NonStrongEffects out;
  out.ace_ty = dot(r.ace, cells);
  out.gammas.gamma0 = dot(r.gamma0, cells);
  out.gammas.gamma1 = dot(r.gamma1, cells);
  out.law.p00 = dot(r.p00, cells);
  out.law.p10 = dot(r.p10, cells);
  out.law.p01 = dot(r.p01, cells);
  out.law.p11 = dot(nonstrong_cells({4, 5, 6, 7, 12, 13, 14, 15}, {2, 3}), cells);
  out.law.s1_treated = dot(nonstrong_cells({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13,
                                            14, 15},
                                           {1, 3}),
                           cells);
  return out;
}

}  // namespace surrbound
