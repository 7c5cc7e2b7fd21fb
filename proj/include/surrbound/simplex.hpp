#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "surrbound/error.hpp"

namespace surrbound {

using Rational = boost::multiprecision::mpq_rational;

enum class Direction { Min, Max };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/**
 * Equality-form linear program: optimize objective . x + objective_constant
 * subject to eq_matrix x = eq_rhs and x >= 0.
 */
template <class T>
struct LpProblem {
  std::vector<T> objective;
  T objective_constant = T(0);
  Direction direction = Direction::Min;
  std::vector<std::vector<T>> eq_matrix;
  std::vector<T> eq_rhs;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return eq_rhs.size(); }
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  T value = T(0);
  /// Attaining basic feasible solution (Optimal only).
  std::vector<T> point;
  /// Dual certificate y: eq_rhs . y + objective_constant == value, and
  /// eq_matrix^T y <= objective (Min) or >= objective (Max).
  std::vector<T> dual;
  int iterations = 0;
};

template <class T>
struct SimplexTraits;

template <>
struct SimplexTraits<double> {
  static constexpr double pivot_eps = 1e-11;
  static constexpr double cost_eps = 1e-11;
  static constexpr double infeasible = 1e-7;
  static constexpr double ratio_tie = 1e-12;
};

template <>
struct SimplexTraits<Rational> {
  static Rational pivot_eps;
  static Rational cost_eps;
  static Rational infeasible;
  static Rational ratio_tie;
};
inline Rational SimplexTraits<Rational>::pivot_eps = 0;
inline Rational SimplexTraits<Rational>::cost_eps = 0;
inline Rational SimplexTraits<Rational>::infeasible = 0;
inline Rational SimplexTraits<Rational>::ratio_tie = 0;

namespace detail {

template <class T>
T abs_of(const T& x) {
  return x < T(0) ? T(-x) : x;
}

/**
 * Dense two-phase tableau. Columns are the n structural variables, then one
 * artificial per row, then the right-hand side. Artificials never re-enter
 * after phase 1; an artificial that cannot be pivoted out marks a redundant
 * row and stays basic at zero.
 */
template <class T>
class Tableau {
 public:
  using Traits = SimplexTraits<T>;

  Tableau(const LpProblem<T>& p)
      : m_(p.num_rows()), n_(p.num_vars()), width_(n_ + m_ + 1),
        cells_(m_ * width_, T(0)), cost_(width_, T(0)), basis_(m_), sign_(m_, 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      sign_[i] = p.eq_rhs[i] < T(0) ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) {
        at(i, j) = sign_[i] < 0 ? T(-p.eq_matrix[i][j]) : p.eq_matrix[i][j];
      }
      at(i, n_ + i) = T(1);
      rhs(i) = sign_[i] < 0 ? T(-p.eq_rhs[i]) : p.eq_rhs[i];
      basis_[i] = n_ + i;
    }
  }

  /// Minimizes the sum of artificials; returns the phase-1 optimum.
  T phase_one() {
    std::vector<T> c(n_ + m_, T(0));
    for (std::size_t i = 0; i < m_; ++i) c[n_ + i] = T(1);
    price(c);
    run(n_ + m_);
    return T(-cost_[width_ - 1]);
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t best = n_;
      T best_mag = Traits::pivot_eps;
      for (std::size_t j = 0; j < n_; ++j) {
        const T mag = abs_of(at(i, j));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best == n_) continue;
      rhs(i) = T(0);
      pivot(i, best);
    }
  }

  /// Returns false when the objective is unbounded below.
  bool phase_two(const std::vector<T>& min_cost) {
    std::vector<T> c(n_ + m_, T(0));
    for (std::size_t j = 0; j < n_; ++j) c[j] = min_cost[j];
    price(c);
    return run(n_);
  }

  std::vector<T> point() const {
    std::vector<T> x(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rhs(i) < T(0) ? T(0) : rhs(i);
    }
    return x;
  }

  /// Duals of the original rows for the minimization just solved.
  std::vector<T> dual() const {
    std::vector<T> y(m_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const T yi = -cost_[n_ + i];
      y[i] = sign_[i] < 0 ? T(-yi) : yi;
    }
    return y;
  }

  int iterations() const { return iterations_; }

 private:
  T& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }
  T& rhs(std::size_t i) { return cells_[i * width_ + width_ - 1]; }
  const T& rhs(std::size_t i) const { return cells_[i * width_ + width_ - 1]; }

  // Reduced costs d = c - c_B B^{-1} A over every column, objective in the last slot.
  void price(const std::vector<T>& c) {
    for (std::size_t j = 0; j + 1 < width_; ++j) cost_[j] = c[j];
    cost_[width_ - 1] = T(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const T cb = c[basis_[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < width_; ++j) cost_[j] -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    const T inv = T(1) / at(r, e);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) *= inv;
    at(r, e) = T(1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const T f = at(i, e);
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(r, j);
      at(i, e) = T(0);
    }
    const T f = cost_[e];
    if (f != T(0)) {
      for (std::size_t j = 0; j < width_; ++j) cost_[j] -= f * at(r, j);
      cost_[e] = T(0);
    }
    basis_[r] = e;
  }

  // Dantzig pricing for the first 2(m+n) iterations, Bland's rule afterwards.
  bool run(std::size_t enter_limit) {
    const int dantzig_budget = static_cast<int>(2 * (m_ + n_));
    const int max_iter = 50 * static_cast<int>(m_ + n_) + 1000;
    for (int local = 0;; ++local) {
      if (local > max_iter) {
        throw Error(ErrorCode::NumericalBreakdown,
                    "simplex iteration limit reached after " + std::to_string(local) +
                        " pivots");
      }
      const bool bland = local >= dantzig_budget;
      std::size_t e = enter_limit;
      T best = T(-Traits::cost_eps);
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (cost_[j] < best) {
          e = j;
          if (bland) break;
          best = cost_[j];
        }
      }
      if (e == enter_limit) return true;

      std::size_t r = m_;
      T best_ratio = T(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!(at(i, e) > Traits::pivot_eps)) continue;
        const T ratio = rhs(i) / at(i, e);
        if (r == m_ || ratio < best_ratio - Traits::ratio_tie ||
            (abs_of(T(ratio - best_ratio)) <= Traits::ratio_tie && basis_[i] < basis_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == m_) return false;
      pivot(r, e);
      ++iterations_;
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<T> cells_;
  std::vector<T> cost_;
  std::vector<std::size_t> basis_;
  std::vector<int> sign_;
  int iterations_ = 0;
};

}  // namespace detail

template <class T>
void check_problem(const LpProblem<T>& p) {
  if (p.eq_matrix.size() != p.eq_rhs.size()) {
    throw Error(ErrorCode::InvalidTable, "LP row count mismatch");
  }
  for (const auto& row : p.eq_matrix) {
    if (row.size() != p.objective.size()) {
      throw Error(ErrorCode::InvalidTable, "LP column count mismatch");
    }
  }
}

/// Two-phase primal simplex. Deterministic: identical inputs give identical outputs.
template <class T>
LpSolution<T> simplex_solve(const LpProblem<T>& problem) {
  check_problem(problem);
  using Traits = SimplexTraits<T>;
  detail::Tableau<T> tab(problem);
  LpSolution<T> sol;

  if (tab.phase_one() > Traits::infeasible) {
    sol.status = LpStatus::Infeasible;
    sol.iterations = tab.iterations();
    return sol;
  }
  tab.drive_out_artificials();

  const bool maximize = problem.direction == Direction::Max;
  std::vector<T> c = problem.objective;
  if (maximize)
    for (auto& v : c) v = -v;
  if (!tab.phase_two(c)) {
    sol.status = LpStatus::Unbounded;
    sol.iterations = tab.iterations();
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.point = tab.point();
  sol.dual = tab.dual();
  if (maximize)
    for (auto& v : sol.dual) v = -v;
  T value = problem.objective_constant;
  for (std::size_t j = 0; j < sol.point.size(); ++j) value += problem.objective[j] * sol.point[j];
  sol.value = value;
  sol.iterations = tab.iterations();
  return sol;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact copy of a double problem (every finite double is a dyadic rational).
LpProblem<Rational> to_exact(const LpProblem<double>& p);
LpSolution<double> to_double(const LpSolution<Rational>& s);

}  // namespace surrbound
