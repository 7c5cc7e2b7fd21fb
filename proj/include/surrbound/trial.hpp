#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "surrbound/law.hpp"
#include "surrbound/lp.hpp"
#include "surrbound/report.hpp"

namespace surrbound {

/// Record counts of both arms.
struct TrialCounts {
  /// Control counts indexed 2*y + s.
  std::array<std::uint64_t, 4> control{};
  /// Treated counts indexed by s.
  std::array<std::uint64_t, 2> treated{};

  std::uint64_t n_control() const;
  std::uint64_t n_treated() const;
  /// Empirical frequencies; throws DegenerateArm when an arm is empty.
  ObservedLaw law() const;
};

struct Ingested {
  ObservedLaw law;
  TrialCounts counts;
};

/// Header "s,y", then one record per line. `source` names the input in errors.
std::array<std::uint64_t, 4> read_control_csv(std::istream& in, const std::string& source);
/// Header "s", then one record per line.
std::array<std::uint64_t, 2> read_treated_csv(std::istream& in, const std::string& source);

Ingested ingest(std::istream& control, std::istream& treated,
                const std::string& control_name = "control",
                const std::string& treated_name = "treated");
Ingested ingest(const std::filesystem::path& control, const std::filesystem::path& treated);

enum class Model { Strong, NonStrong };
std::string_view to_string(Model m);

struct BoundsRequest {
  Model model = Model::Strong;
  GammaSpec gamma = GammaSpec::point(Scale::Difference, 0.0);
  bool strict_feasibility = false;
  bool with_witness = false;
  Arithmetic arithmetic = Arithmetic::Double;
};

/**
 * Bounds for any supported (model, scale, gamma form) combination.
 * Throws WrongScale for combinations without a bound (non-strong CRR,
 * interval or sign-only CRR).
 */
BoundsReport compute_bounds(const ObservedLaw& law, const BoundsRequest& request);

/// Throws InfeasibleInputs when no latent table fits (law, gamma) in the closed form.
void require_closed_form_feasible(const ObservedLaw& law, const BoundsRequest& request);

/// Counts from an external study of S on Y: outcomes among n subjects per surrogate level.
struct ExternalStudyCounts {
  std::uint64_t n_s0 = 0;
  std::uint64_t y1_s0 = 0;
  std::uint64_t n_s1 = 0;
  std::uint64_t y1_s1 = 0;

  /// Point estimate of gamma on the given scale.
  double gamma(Scale scale) const;
};

enum class GammaTreatment { Fixed, ResampledFromCounts };

struct BootstrapConfig {
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  GammaTreatment gamma_treatment = GammaTreatment::Fixed;
  std::optional<ExternalStudyCounts> external;
  unsigned workers = 1;
};

struct UncertaintyRegion {
  double lo = 0.0;
  double hi = 0.0;
  double sd_lower = 0.0;
  double sd_upper = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
  /// Non-empty when more than half of the replicates were skipped.
  std::string warning;
  /// Per-replicate bound ends, in replicate order.
  std::vector<double> lowers;
  std::vector<double> uppers;
};

/// Linear-interpolation (type 7) quantile of an ascending sample.
double quantile_type7(const std::vector<double>& sorted, double p);

/// Region from an existing replicate set.
UncertaintyRegion region_from_replicates(std::vector<double> lowers, std::vector<double> uppers,
                                         double alpha);

/**
 * Nonparametric bootstrap of both bound ends. Replicate r draws from its own
 * stream seeded by (seed, r), so the result does not depend on the worker count.
 * Infeasible replicates are skipped and counted.
 */
UncertaintyRegion bootstrap_region(const TrialCounts& counts, const BoundsRequest& request,
                                   const BootstrapConfig& cfg);

/// Draws n control and treated records from a law; used for synthetic data.
TrialCounts sample_counts(const ObservedLaw& law, std::uint64_t n_control,
                          std::uint64_t n_treated, std::uint64_t seed);

}  // namespace surrbound
