#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surrbound/law.hpp"
#include "surrbound/report.hpp"

namespace surrbound {

/// A bound term intercept + slope * gamma, with its display label.
struct AffineTerm {
  std::string label;
  double intercept = 0.0;
  double slope = 0.0;

  double at(double gamma) const { return intercept + slope * gamma; }
};

/// The seven lower (L1..L7) and upper (U1..U7) strong-surrogate terms as functions of gamma.
std::vector<AffineTerm> strong_lower_affine(const ObservedLaw& law);
std::vector<AffineTerm> strong_upper_affine(const ObservedLaw& law);
/// Three terms each, as functions of gamma1.
std::vector<AffineTerm> nonstrong_lower_affine(double py1_control, double s1_treated);
std::vector<AffineTerm> nonstrong_upper_affine(double py1_control, double s1_treated);

TermList evaluate_terms(const std::vector<AffineTerm>& terms, double gamma);

struct StrongOptions {
  /// Check (law, gamma) with LP phase 1 and throw InfeasibleInputs on failure.
  bool strict_feasibility = false;
  /// Attach LP-attaining latent tables to the report.
  bool with_witness = false;
};

/**
 * Sharp bounds on ACE(T->Y) for a strong surrogate with known gamma.
 * Without strict feasibility, inconsistent inputs can give lower > upper;
 * crossed bounds are reported as they are.
 */
BoundsReport strong_bounds(const ObservedLaw& law, double gamma, StrongOptions opts = {});

struct CriterionResult {
  Verdict verdict = Verdict::NotExcludable;
  double threshold = 0.0;
};

/// min(2 P(Y=1,S=1|T=0) + P(Y=0,S=0|T=0), P(S=0|T=1) + P(Y=1,S=1|T=0)).
double strong_threshold(const ObservedLaw& law);

/// Compares the guaranteed lower end of gamma against strong_threshold.
CriterionResult strong_criterion(const ObservedLaw& law, const GammaSpec& gamma);

/// Range of gamma compatible with the law: [-(p10 + p01), p00 + p11].
struct GammaInterval {
  double lo = 0.0;
  double hi = 0.0;
};
GammaInterval strong_feasible_gamma(const ObservedLaw& law);

/**
 * Union of strong_bounds over gamma in [lo, hi] intersected with the feasible
 * range. hi = nullopt means unbounded above. Throws BadRange for an empty or
 * out-of-range interval and InfeasibleInputs when no feasible gamma remains.
 */
BoundsReport strong_bounds_gamma_range(const ObservedLaw& law, double lo,
                                       std::optional<double> hi);

/// Five-term bounds for a gamma known only to be positive.
BoundsReport sign_only_bounds(const ObservedLaw& law);

/// Dispatches on the form of `gamma` (difference scale only).
BoundsReport strong_bounds_for(const ObservedLaw& law, const GammaSpec& gamma,
                               StrongOptions opts = {});

// Non-strong surrogate: bounds depend on the control arm only through P(Y=1|T=0).

BoundsReport nonstrong_bounds(double py1_control, double s1_treated, double gamma1,
                              bool strict_feasibility = false);
double nonstrong_threshold(double py1_control, double s1_treated);
CriterionResult nonstrong_criterion(double py1_control, double s1_treated,
                                    const GammaSpec& gamma1);
BoundsReport nonstrong_bounds_gamma_range(double py1_control, double s1_treated, double lo,
                                          std::optional<double> hi);
BoundsReport nonstrong_bounds_for(double py1_control, double s1_treated,
                                  const GammaSpec& gamma1);

}  // namespace surrbound
