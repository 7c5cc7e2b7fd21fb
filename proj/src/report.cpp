#include "surrbound/report.hpp"

#include <cmath>
#include <string>

#include "surrbound/error.hpp"

namespace surrbound {

std::string_view to_string(Scale s) {
  return s == Scale::Difference ? "ace" : "crr";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Excluded: return "Excluded";
    case Verdict::NotExcludable: return "NotExcludable";
    case Verdict::Boundary: return "Boundary";
  }
  return "NotExcludable";
}

Verdict compare_to_threshold(double value, double threshold) {
  const double gap = value - threshold;
  if (gap > kVerdictTol) return Verdict::Excluded;
  if (gap >= -kVerdictTol) return Verdict::Boundary;
  return Verdict::NotExcludable;
}

namespace {

void check_admissible(Scale scale, double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::BadGamma, std::string(what) + " is not finite");
  }
  if (scale == Scale::Difference && (v < -1.0 || v > 1.0)) {
    throw Error(ErrorCode::BadGamma,
                std::string(what) + " = " + std::to_string(v) + " outside [-1,1]");
  }
  if (scale == Scale::RelativeRisk && !(v > 0.0)) {
    throw Error(ErrorCode::BadGamma,
                std::string(what) + " = " + std::to_string(v) + " must be positive");
  }
}

}  // namespace

GammaSpec GammaSpec::point(Scale scale, double value) {
  check_admissible(scale, value, "gamma");
  return GammaSpec(scale, GammaForm::Point, value, value);
}

GammaSpec GammaSpec::interval(Scale scale, double lo, std::optional<double> hi) {
  // The relative-risk lower end may sit at 0 (open interval).
  if (scale == Scale::RelativeRisk && lo == 0.0) {
    if (hi) check_admissible(scale, *hi, "gamma-hi");
  } else {
    check_admissible(scale, lo, "gamma-lo");
    if (hi) check_admissible(scale, *hi, "gamma-hi");
  }
  if (hi && !(lo < *hi)) {
    throw Error(ErrorCode::BadRange, "gamma interval needs lo < hi");
  }
  return GammaSpec(scale, GammaForm::Interval, lo, hi);
}

GammaSpec GammaSpec::sign_positive(Scale scale) {
  return GammaSpec(scale, GammaForm::SignPositive,
                   scale == Scale::Difference ? 0.0 : 1.0, std::nullopt);
}

int argmax_term(const TermList& terms) {
  int best = -1;
  for (int k = 0; k < static_cast<int>(terms.size()); ++k) {
    if (best < 0 || terms[k].value > terms[best].value) best = k;
  }
  return best;
}

int argmin_term(const TermList& terms) {
  int best = -1;
  for (int k = 0; k < static_cast<int>(terms.size()); ++k) {
    if (best < 0 || terms[k].value < terms[best].value) best = k;
  }
  return best;
}

std::string BoundsReport::active_lower_label() const {
  if (active_lower_term < 0 || active_lower_term >= static_cast<int>(lower_terms.size()))
    return "lp";
  return lower_terms[active_lower_term].label;
}

std::string BoundsReport::active_upper_label() const {
  if (active_upper_term < 0 || active_upper_term >= static_cast<int>(upper_terms.size()))
    return "lp";
  return upper_terms[active_upper_term].label;
}

}  // namespace surrbound
