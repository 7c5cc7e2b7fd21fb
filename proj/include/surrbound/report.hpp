#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surrbound {

enum class Scale { Difference, RelativeRisk };
enum class Verdict { Excluded, NotExcludable, Boundary };

std::string_view to_string(Scale s);
std::string_view to_string(Verdict v);

/// Gap below which a criterion inequality is treated as an equality.
inline constexpr double kVerdictTol = 1e-12;

/// Three-valued comparison of a guaranteed quantity against its threshold.
Verdict compare_to_threshold(double value, double threshold);

enum class GammaForm { Point, Interval, SignPositive };

/**
 * External knowledge of the surrogate->outcome effect.
 *
 * An interval upper end of std::nullopt stands for +infinity; no floating
 * infinity is ever stored. SignPositive is the interval (0, +inf) on the
 * difference scale and (1, +inf) on the relative-risk scale.
 */
class GammaSpec {
 public:
  static GammaSpec point(Scale scale, double value);
  static GammaSpec interval(Scale scale, double lo, std::optional<double> hi);
  static GammaSpec sign_positive(Scale scale);

  Scale scale() const { return scale_; }
  GammaForm form() const { return form_; }
  /// Point value, or the lower end of an interval.
  double lo() const { return lo_; }
  std::optional<double> hi() const { return hi_; }

 private:
  GammaSpec(Scale scale, GammaForm form, double lo, std::optional<double> hi)
      : scale_(scale), form_(form), lo_(lo), hi_(hi) {}

  Scale scale_;
  GammaForm form_;
  double lo_;
  std::optional<double> hi_;
};

struct Term {
  std::string label;
  double value = 0.0;
};
using TermList = std::vector<Term>;

/// Index of the largest (or smallest) term; ties go to the lowest index.
int argmax_term(const TermList& terms);
int argmin_term(const TermList& terms);

struct BoundsReport {
  Scale scale = Scale::Difference;
  double lower = 0.0;
  double upper = 0.0;
  /// Index into lower_terms / upper_terms, or -1 when the bound came from an LP.
  int active_lower_term = -1;
  int active_upper_term = -1;
  TermList lower_terms;
  TermList upper_terms;
  /// Flat latent tables attaining each end, when computed.
  std::optional<std::vector<double>> witness_lower;
  std::optional<std::vector<double>> witness_upper;
  Verdict criterion = Verdict::NotExcludable;
  double threshold = 0.0;
  /// For interval-valued gamma: the gamma at which each end is attained.
  std::optional<double> gamma_at_lower;
  std::optional<double> gamma_at_upper;

  bool crossed() const { return lower > upper; }
  std::string active_lower_label() const;
  std::string active_upper_label() const;
};

}  // namespace surrbound
