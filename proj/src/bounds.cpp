#include "surrbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "surrbound/lp.hpp"

namespace surrbound {
namespace {

void check_gamma_difference(double gamma, const char* name) {
  if (!std::isfinite(gamma) || gamma < -1.0 || gamma > 1.0) {
    throw Error(ErrorCode::BadGamma,
                std::string(name) + " = " + std::to_string(gamma) + " outside [-1,1]");
  }
}

void check_unit(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw Error(ErrorCode::NotAProbability,
                std::string(name) + " = " + std::to_string(v) + " is outside [0,1]");
  }
}

struct EnvelopeOpt {
  double gamma = 0.0;
  double value = 0.0;
};

double upper_envelope(const std::vector<AffineTerm>& terms, double g) {
  double v = terms.front().at(g);
  for (const auto& t : terms) v = std::max(v, t.at(g));
  return v;
}

double lower_envelope(const std::vector<AffineTerm>& terms, double g) {
  double v = terms.front().at(g);
  for (const auto& t : terms) v = std::min(v, t.at(g));
  return v;
}

// The envelope is piecewise linear, so its optimum over [a, b] sits at an
// endpoint or at a crossing of two terms with different slopes.
std::vector<double> candidate_gammas(const std::vector<AffineTerm>& terms, double a,
                                     double b) {
  std::vector<double> c{a, b};
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const double ds = terms[i].slope - terms[j].slope;
      if (ds == 0.0) continue;
      const double g = (terms[j].intercept - terms[i].intercept) / ds;
      if (g > a && g < b) c.push_back(g);
    }
  }
  std::sort(c.begin(), c.end());
  return c;
}

EnvelopeOpt minimize_upper_envelope(const std::vector<AffineTerm>& terms, double a, double b) {
  EnvelopeOpt best{a, upper_envelope(terms, a)};
  for (double g : candidate_gammas(terms, a, b)) {
    const double v = upper_envelope(terms, g);
    if (v < best.value) best = {g, v};
  }
  return best;
}

EnvelopeOpt maximize_lower_envelope(const std::vector<AffineTerm>& terms, double a, double b) {
  EnvelopeOpt best{a, lower_envelope(terms, a)};
  for (double g : candidate_gammas(terms, a, b)) {
    const double v = lower_envelope(terms, g);
    if (v > best.value) best = {g, v};
  }
  return best;
}

BoundsReport report_from_terms(TermList lower, TermList upper) {
  BoundsReport r;
  r.scale = Scale::Difference;
  r.lower_terms = std::move(lower);
  r.upper_terms = std::move(upper);
  r.active_lower_term = argmax_term(r.lower_terms);
  r.active_upper_term = argmin_term(r.upper_terms);
  r.lower = r.lower_terms[r.active_lower_term].value;
  r.upper = r.upper_terms[r.active_upper_term].value;
  return r;
}

struct ClippedRange {
  double a;
  double b;
};

ClippedRange clip_range(double lo, std::optional<double> hi, double feasible_lo,
                        double feasible_hi) {
  if (!std::isfinite(lo) || lo < -1.0 || lo > 1.0) {
    throw Error(ErrorCode::BadRange, "gamma-lo must lie in [-1,1]");
  }
  if (hi && (!std::isfinite(*hi) || *hi > 1.0 || !(lo < *hi))) {
    throw Error(ErrorCode::BadRange, "gamma range needs lo < hi <= 1");
  }
  ClippedRange r{std::max(lo, feasible_lo), std::min(hi.value_or(feasible_hi), feasible_hi)};
  if (r.a > r.b + kProbTol) {
    throw Error(ErrorCode::InfeasibleInputs,
                "no gamma in the given range is compatible with the observed law");
  }
  r.b = std::max(r.a, r.b);
  return r;
}

BoundsReport envelope_report(const std::vector<AffineTerm>& lower,
                             const std::vector<AffineTerm>& upper, ClippedRange range) {
  const auto lo = minimize_upper_envelope(lower, range.a, range.b);
  const auto hi = maximize_lower_envelope(upper, range.a, range.b);
  BoundsReport r = report_from_terms(evaluate_terms(lower, lo.gamma),
                                     evaluate_terms(upper, hi.gamma));
  r.gamma_at_lower = lo.gamma;
  r.gamma_at_upper = hi.gamma;
  return r;
}

}  // namespace

std::vector<AffineTerm> strong_lower_affine(const ObservedLaw& l) {
  const double s1 = l.s1_treated;
  const double s0 = l.s0_treated();
  return {
      {"L1", -l.p10 - s0, 0.0},
      {"L2", -(l.p10 + l.p11), 0.0},
      {"L3", -l.p11 - s1, 0.0},
      {"L4", -s1 - l.p10, -1.0},
      {"L5", -l.p01 - 2.0 * l.p10, -1.0},
      {"L6", -2.0 * l.p11 - l.p00, 1.0},
      {"L7", -s0 - l.p11, 1.0},
  };
}

std::vector<AffineTerm> strong_upper_affine(const ObservedLaw& l) {
  const double s1 = l.s1_treated;
  const double s0 = l.s0_treated();
  return {
      {"U1", l.p00 + s0, 0.0},
      {"U2", l.p00 + l.p01, 0.0},
      {"U3", l.p01 + s1, 0.0},
      {"U4", l.p10 + 2.0 * l.p01, 1.0},
      {"U5", l.p01 + s0, 1.0},
      {"U6", 2.0 * l.p00 + l.p11, -1.0},
      {"U7", l.p00 + s1, -1.0},
  };
}

std::vector<AffineTerm> nonstrong_lower_affine(double py1, double s1) {
  return {
      {"L1'", -py1, 0.0},
      {"L2'", -py1 - s1, -1.0},
      {"L3'", -py1 - (1.0 - s1), 1.0},
  };
}

std::vector<AffineTerm> nonstrong_upper_affine(double py1, double s1) {
  const double py0 = 1.0 - py1;
  return {
      {"U1'", py0, 0.0},
      {"U2'", py0 + s1, -1.0},
      {"U3'", py0 + (1.0 - s1), 1.0},
  };
}

TermList evaluate_terms(const std::vector<AffineTerm>& terms, double gamma) {
  TermList out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({t.label, t.at(gamma)});
  return out;
}

double strong_threshold(const ObservedLaw& law) {
  return std::min(2.0 * law.p11 + law.p00, law.s0_treated() + law.p11);
}

GammaInterval strong_feasible_gamma(const ObservedLaw& law) {
  return {-(law.p10 + law.p01), law.p00 + law.p11};
}

BoundsReport strong_bounds(const ObservedLaw& law, double gamma, StrongOptions opts) {
  validate_observed(law);
  check_gamma_difference(gamma, "gamma");
  if (opts.strict_feasibility && !lp_feasible(build_strong_system(law, gamma))) {
    throw Error(ErrorCode::InfeasibleInputs,
                "no latent table reproduces the law with gamma = " + std::to_string(gamma));
  }
  BoundsReport r = report_from_terms(evaluate_terms(strong_lower_affine(law), gamma),
                                     evaluate_terms(strong_upper_affine(law), gamma));
  r.threshold = strong_threshold(law);
  r.criterion = compare_to_threshold(gamma, r.threshold);
  if (opts.with_witness) {
    const auto lp = lp_strong_bounds(law, gamma);
    if (lp.status == LpStatus::Optimal) {
      r.witness_lower = lp.argmin;
      r.witness_upper = lp.argmax;
    }
  }
  return r;
}

CriterionResult strong_criterion(const ObservedLaw& law, const GammaSpec& gamma) {
  validate_observed(law);
  if (gamma.scale() != Scale::Difference) {
    throw Error(ErrorCode::WrongScale, "the ACE criterion needs gamma on the difference scale");
  }
  CriterionResult out;
  out.threshold = strong_threshold(law);
  out.verdict = gamma.form() == GammaForm::SignPositive
                    ? Verdict::NotExcludable
                    : compare_to_threshold(gamma.lo(), out.threshold);
  return out;
}

BoundsReport strong_bounds_gamma_range(const ObservedLaw& law, double lo,
                                       std::optional<double> hi) {
  validate_observed(law);
  const auto feasible = strong_feasible_gamma(law);
  const auto range = clip_range(lo, hi, feasible.lo, feasible.hi);
  BoundsReport r =
      envelope_report(strong_lower_affine(law), strong_upper_affine(law), range);
  r.threshold = strong_threshold(law);
  r.criterion = compare_to_threshold(lo, r.threshold);
  return r;
}

BoundsReport sign_only_bounds(const ObservedLaw& l) {
  validate_observed(l);
  const double s1 = l.s1_treated;
  const double s0 = l.s0_treated();
  TermList lower = {
      {"L1", -l.p10 - s0},
      {"L2", -(l.p10 + l.p11)},
      {"L3", -l.p11 - s1},
      {"L6@0", -2.0 * l.p11 - l.p00},
      {"L7@0", -l.p11 - s0},
  };
  TermList upper = {
      {"U1", l.p00 + s0},
      {"U2", l.p00 + l.p01},
      {"U3", l.p01 + s1},
      {"U6@0", 2.0 * l.p00 + l.p11},
      {"U7@0", l.p00 + s1},
  };
  BoundsReport r = report_from_terms(std::move(lower), std::move(upper));
  r.threshold = strong_threshold(l);
  r.criterion = Verdict::NotExcludable;
  return r;
}

BoundsReport strong_bounds_for(const ObservedLaw& law, const GammaSpec& gamma,
                               StrongOptions opts) {
  if (gamma.scale() != Scale::Difference) {
    throw Error(ErrorCode::WrongScale, "strong ACE bounds need gamma on the difference scale");
  }
  switch (gamma.form()) {
    case GammaForm::Point:
      return strong_bounds(law, gamma.lo(), opts);
    case GammaForm::Interval:
      return strong_bounds_gamma_range(law, gamma.lo(), gamma.hi());
    case GammaForm::SignPositive: {
      BoundsReport r = strong_bounds_gamma_range(law, 0.0, std::nullopt);
      r.criterion = Verdict::NotExcludable;
      return r;
    }
  }
  return strong_bounds(law, gamma.lo(), opts);
}

BoundsReport nonstrong_bounds(double py1, double s1, double gamma1, bool strict_feasibility) {
  check_unit(py1, "P(Y=1|T=0)");
  check_unit(s1, "P(S=1|T=1)");
  check_gamma_difference(gamma1, "gamma1");
  if (strict_feasibility && !lp_feasible(build_reduced_nonstrong_system(py1, s1, gamma1))) {
    throw Error(ErrorCode::InfeasibleInputs, "non-strong inputs are jointly infeasible");
  }
  BoundsReport r = report_from_terms(evaluate_terms(nonstrong_lower_affine(py1, s1), gamma1),
                                     evaluate_terms(nonstrong_upper_affine(py1, s1), gamma1));
  r.threshold = nonstrong_threshold(py1, s1);
  r.criterion = compare_to_threshold(gamma1, r.threshold);
  return r;
}

double nonstrong_threshold(double py1, double s1) { return py1 + (1.0 - s1); }

CriterionResult nonstrong_criterion(double py1, double s1, const GammaSpec& gamma1) {
  check_unit(py1, "P(Y=1|T=0)");
  check_unit(s1, "P(S=1|T=1)");
  if (gamma1.scale() != Scale::Difference) {
    throw Error(ErrorCode::WrongScale, "the non-strong criterion needs the difference scale");
  }
  CriterionResult out;
  out.threshold = nonstrong_threshold(py1, s1);
  out.verdict = gamma1.form() == GammaForm::SignPositive
                    ? Verdict::NotExcludable
                    : compare_to_threshold(gamma1.lo(), out.threshold);
  return out;
}

BoundsReport nonstrong_bounds_gamma_range(double py1, double s1, double lo,
                                          std::optional<double> hi) {
  check_unit(py1, "P(Y=1|T=0)");
  check_unit(s1, "P(S=1|T=1)");
  const auto range = clip_range(lo, hi, -1.0, 1.0);
  BoundsReport r = envelope_report(nonstrong_lower_affine(py1, s1),
                                   nonstrong_upper_affine(py1, s1), range);
  r.threshold = nonstrong_threshold(py1, s1);
  r.criterion = compare_to_threshold(lo, r.threshold);
  return r;
}

BoundsReport nonstrong_bounds_for(double py1, double s1, const GammaSpec& gamma1) {
  if (gamma1.scale() != Scale::Difference) {
    throw Error(ErrorCode::WrongScale, "non-strong bounds need the difference scale");
  }
  switch (gamma1.form()) {
    case GammaForm::Point:
      return nonstrong_bounds(py1, s1, gamma1.lo());
    case GammaForm::Interval:
      return nonstrong_bounds_gamma_range(py1, s1, gamma1.lo(), gamma1.hi());
    case GammaForm::SignPositive: {
      BoundsReport r = nonstrong_bounds_gamma_range(py1, s1, 0.0, std::nullopt);
      r.criterion = Verdict::NotExcludable;
      return r;
    }
  }
  return nonstrong_bounds(py1, s1, gamma1.lo());
}

}  // namespace surrbound
