#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "surrbound/error.hpp"

namespace surrbound {

inline constexpr double kProbTol = 1e-9;

/**
 * Identified part of the trial distribution: the control-arm joint law of
 * (Y, S) and the treated-arm marginal of S.
 *
 * Cell p_ys holds P(Y=y, S=s | T=0), outcome index first.
 */
struct ObservedLaw {
  double p00 = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double p11 = 0.0;
  double s1_treated = 0.0;  ///< P(S=1 | T=1)

  double py1_control() const { return p10 + p11; }
  double py0_control() const { return p00 + p01; }
  double s1_control() const { return p01 + p11; }
  double s0_treated() const { return 1.0 - s1_treated; }
  /// ACE(T->S) = P(S=1|T=1) - P(S=1|T=0).
  double ace_ts() const { return s1_treated - s1_control(); }

  friend bool operator==(const ObservedLaw&, const ObservedLaw&) = default;
};

/// Throws NotAProbability / NotNormalized; returns the law unchanged otherwise.
ObservedLaw validate_observed(const ObservedLaw& law);

/// Rescales the control cells to sum to one. Only used on explicit request.
ObservedLaw renormalized(const ObservedLaw& law);

/**
 * Distribution over the sixteen strong-surrogate potential-outcome types.
 *
 * Row i encodes (S_{T=0}, S_{T=1}) as 2*S0 + S1; column j encodes
 * (Y_{S=0}, Y_{S=1}) as 2*Y0 + Y1. flat() orders cells q00, q01, ..., q33.
 */
struct QTableStrong {
  std::array<std::array<double, 4>, 4> q{};

  double& operator()(int i, int j) { return q[i][j]; }
  double operator()(int i, int j) const { return q[i][j]; }

  std::array<double, 16> flat() const;
  static QTableStrong from_flat(std::span<const double> cells);
};

/**
 * Distribution over the 64 non-strong types. Row i is the 4-bit word
 * Y00*8 + Y01*4 + Y10*2 + Y11; column j encodes (S0, S1) as 2*S0 + S1.
 * flat() orders cells row-major, q_{0,0}, q_{0,1}, ..., q_{15,3}.
 */
struct QTableNonStrong {
  std::array<std::array<double, 4>, 16> q{};

  double& operator()(int i, int j) { return q[i][j]; }
  double operator()(int i, int j) const { return q[i][j]; }

  std::array<double, 64> flat() const;
  static QTableNonStrong from_flat(std::span<const double> cells);
};

/// Throws InvalidTable when a cell is negative or the cells do not sum to one.
void validate_table(std::span<const double> cells);

struct StrongObservables {
  ObservedLaw law;
  double gamma = 0.0;  ///< ACE(S->Y)
};

StrongObservables observables_from_qtable_strong(const QTableStrong& q);
double ace_from_qtable_strong(const QTableStrong& q);

struct NonStrongGammas {
  double gamma0 = 0.0;  ///< P(Y01=1) - P(Y00=1)
  double gamma1 = 0.0;  ///< P(Y11=1) - P(Y10=1)
};

struct NonStrongEffects {
  double ace_ty = 0.0;
  NonStrongGammas gammas;
  ObservedLaw law;
};

NonStrongEffects effects_from_qtable_nonstrong(const QTableNonStrong& q);

// Linear encodings of the maps above.

/// Rows: P(Y=0,S=0|T=0), P(Y=1,S=0|T=0), P(Y=0,S=1|T=0), P(S=0|T=1), gamma, 1.
const std::array<std::array<double, 16>, 6>& strong_constraint_matrix();
const std::array<double, 16>& strong_ace_coefficients();
/// Strong-surrogate P(Y_{T=1}=1) and P(Y_{T=0}=1) as linear forms.
const std::array<double, 16>& strong_treated_risk_coefficients();
const std::array<double, 16>& strong_control_risk_coefficients();
/// P(Y_{S=1}=1) and P(Y_{S=0}=1).
const std::array<double, 16>& strong_y1_coefficients();
const std::array<double, 16>& strong_y0_coefficients();

struct NonStrongRows {
  std::array<double, 64> p00, p10, p01, s0_treated, gamma0, gamma1, ones;
  std::array<double, 64> py1_control;
  std::array<double, 64> ace;
};
const NonStrongRows& nonstrong_rows();

}  // namespace surrbound
