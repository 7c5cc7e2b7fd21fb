#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "surrbound/bounds.hpp"
#include "surrbound/law.hpp"
#include "surrbound/report.hpp"

namespace surrbound {

/// Data-generating process with a discrete confounder U, randomized T and binary S, Y.
struct DgpDiscreteU {
  std::vector<double> p_u;
  double p_t = 0.5;
  /// P(S=1 | U=u, T=t), indexed [u][t].
  std::vector<std::array<double, 2>> s_given;
  /// P(Y=1 | U=u, S=s, T=t), indexed [u][s][t].
  std::vector<std::array<std::array<double, 2>, 2>> y_given;
  bool strong = true;
};

/// Binary-U special case. For strong DGPs y_given does not depend on t.
struct DgpBinaryU {
  double p_u = 0.5;
  double p_t = 0.5;
  std::array<std::array<double, 2>, 2> s_given{};
  std::array<std::array<std::array<double, 2>, 2>, 2> y_given{};
  bool strong = true;

  /// y_us[u][s] = P(Y=1 | U=u, S=s).
  static DgpBinaryU make_strong(double p_u, std::array<std::array<double, 2>, 2> s_ut,
                                std::array<std::array<double, 2>, 2> y_us, double p_t = 0.5);
  static DgpBinaryU make_nonstrong(double p_u, std::array<std::array<double, 2>, 2> s_ut,
                                   std::array<std::array<std::array<double, 2>, 2>, 2> y_ust,
                                   double p_t = 0.5);

  DgpDiscreteU general() const;
};

/// Throws NotAProbability or InvalidTable.
void validate_dgp(const DgpDiscreteU& dgp);

/// U ranges over the sixteen types; each type fixes (Y0, Y1, S0, S1) deterministically.
DgpDiscreteU lift_to_dgp(const QTableStrong& q);

struct TrueEffects {
  double ace_ts = 0.0;
  /// ACE(S->Y); for non-strong DGPs this is gamma1.
  double ace_sy = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double ace_ty = 0.0;
  std::optional<double> crr_sy;
  std::optional<double> crr_ty;
  double risk_treated = 0.0;  ///< P(Y_{T=1}=1)
  double risk_control = 0.0;  ///< P(Y_{T=0}=1)
  ObservedLaw observed;
  bool strong = true;
};

TrueEffects evaluate_dgp(const DgpDiscreteU& dgp);
TrueEffects evaluate_dgp(const DgpBinaryU& dgp);

/// E(Y | S=s, T=t) in the observed population.
double conditional_outcome_mean(const DgpDiscreteU& dgp, int s, int t);

enum class Paradox { A, B, C, D, None };
std::string_view to_string(Paradox p);

/**
 * Sign pattern of (T->S, S->Y, T->Y). On the relative-risk scale the S->Y and
 * T->Y effects are the CRRs compared with 1; undefined CRRs give None.
 */
Paradox classify_paradox(const TrueEffects& effects, Scale scale = Scale::Difference);

struct ParadoxWitness {
  QTableStrong q;
  double value = 0.0;  ///< ACE(T->Y) or CRR(T->Y) of the witness
};

/**
 * Latent table reproducing (law, gamma) with the smallest effect of T on Y.
 * Returns it when that effect is negative (below 1 for CRR), nothing otherwise.
 * Throws PremiseViolated when ACE(T->S) <= 0 or gamma is not positive
 * (not above 1 for CRR), and InfeasibleInputs when no table fits.
 */
std::optional<ParadoxWitness> paradox_witness_search(const ObservedLaw& law, double gamma,
                                                     Scale scale = Scale::Difference);

enum class Region {
  OutOfDomain,
  OutsideTriangle,
  ParadoxRegion,
  NoParadoxNotExcludable,
  ExcludedByCriterion
};
std::string_view to_string(Region r);

struct PartitionConfig {
  double p_u = 0.5;
  double s_effect_u0 = 0.7;
  double s_effect_u1 = 0.2;
  std::array<double, 2> baseline_s{0.15, 0.15};  ///< P(S=1 | T=0, U=u)
  std::array<double, 2> baseline_y{0.10, 0.10};  ///< P(Y=1 | S=0, U=u)
  double delta_min = -1.0;
  double delta_max = 1.0;
  int resolution = 201;
};

struct GridPoint {
  double delta0 = 0.0;
  double delta1 = 0.0;
  double gamma = 0.0;
  double ace_ts = 0.0;
  double ace_ty = 0.0;
  std::optional<double> threshold;
  Region region = Region::OutOfDomain;
};

struct PartitionGrid {
  PartitionConfig config;
  std::vector<GridPoint> points;  ///< row-major, delta1 outer, delta0 inner
  /// Criterion threshold of the DGP at the centre of the scanned square.
  std::optional<double> contour_level;
};

/// Throws BadRange when the configuration is unusable.
void validate_partition_config(const PartitionConfig& cfg);
DgpBinaryU partition_dgp(const PartitionConfig& cfg, double delta0, double delta1);
GridPoint classify_point(const PartitionConfig& cfg, double delta0, double delta1);
PartitionGrid partition_grid(const PartitionConfig& cfg, unsigned workers = 1);
void write_partition_csv(const PartitionGrid& grid, std::ostream& out);

struct ExpectedValues {
  std::optional<double> ace_ts;
  std::optional<double> gamma;
  std::optional<double> ace_ty;
  std::optional<double> threshold;
  std::optional<Verdict> verdict;
  std::optional<double> mean_y_s1_t1;
  std::optional<double> mean_y_s1_t0;
};

struct ExampleEntry {
  std::string name;
  DgpBinaryU dgp;
  ExpectedValues expected;
  /// Stated values do not follow from the stated table; checks are informational.
  bool disputed = false;
  std::string note;
};

const std::vector<ExampleEntry>& builtin_examples();

struct ExampleCheck {
  std::string quantity;
  double expected = 0.0;
  double actual = 0.0;
  bool ok = false;
};

enum class ExampleStatus { Pass, Fail, Disputed };
std::string_view to_string(ExampleStatus s);

struct ExampleResult {
  std::string name;
  ExampleStatus status = ExampleStatus::Pass;
  std::vector<ExampleCheck> checks;
  TrueEffects effects;
  double threshold = 0.0;
  Verdict verdict = Verdict::NotExcludable;
};

ExampleResult run_example(const ExampleEntry& entry, double tol = 1e-4);
std::vector<ExampleResult> run_builtin_examples(double tol = 1e-4);

}  // namespace surrbound
