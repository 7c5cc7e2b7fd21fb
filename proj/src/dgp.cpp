#include "surrbound/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <thread>

#include "surrbound/lp.hpp"

namespace surrbound {
namespace {

void require_unit(double v, const std::string& what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw Error(ErrorCode::NotAProbability, what + " = " + std::to_string(v) + " is outside [0,1]");
  }
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

// P(Y_{T=t}=1) with S drawn from its T=t distribution within each stratum.
double risk(const DgpDiscreteU& d, int t) {
  double r = 0.0;
  for (std::size_t u = 0; u < d.p_u.size(); ++u) {
    const double s1 = d.s_given[u][t];
    r += d.p_u[u] * (s1 * d.y_given[u][1][t] + (1.0 - s1) * d.y_given[u][0][t]);
  }
  return r;
}

double potential_y(const DgpDiscreteU& d, int s, int t) {
  double r = 0.0;
  for (std::size_t u = 0; u < d.p_u.size(); ++u) r += d.p_u[u] * d.y_given[u][s][t];
  return r;
}

std::optional<double> ratio(double num, double den) {
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

int sign_of(double v, double pivot) {
  if (v > pivot) return 1;
  if (v < pivot) return -1;
  return 0;
}

}  // namespace

DgpBinaryU DgpBinaryU::make_strong(double p_u, std::array<std::array<double, 2>, 2> s_ut,
                                   std::array<std::array<double, 2>, 2> y_us, double p_t) {
  DgpBinaryU d;
  d.p_u = p_u;
  d.p_t = p_t;
  d.s_given = s_ut;
  for (int u = 0; u < 2; ++u) {
    for (int s = 0; s < 2; ++s) d.y_given[u][s] = {y_us[u][s], y_us[u][s]};
  }
  d.strong = true;
  return d;
}

DgpBinaryU DgpBinaryU::make_nonstrong(double p_u, std::array<std::array<double, 2>, 2> s_ut,
                                      std::array<std::array<std::array<double, 2>, 2>, 2> y_ust,
                                      double p_t) {
  DgpBinaryU d;
  d.p_u = p_u;
  d.p_t = p_t;
  d.s_given = s_ut;
  d.y_given = y_ust;
  d.strong = false;
  return d;
}

DgpDiscreteU DgpBinaryU::general() const {
  DgpDiscreteU g;
  g.p_u = {1.0 - p_u, p_u};
  g.p_t = p_t;
  g.s_given = {s_given[0], s_given[1]};
  g.y_given = {y_given[0], y_given[1]};
  g.strong = strong;
  return g;
}

void validate_dgp(const DgpDiscreteU& d) {
  const std::size_t k = d.p_u.size();
  if (k == 0 || d.s_given.size() != k || d.y_given.size() != k) {
    throw Error(ErrorCode::InvalidTable, "confounder tables have inconsistent sizes");
  }
  require_unit(d.p_t, "P(T=1)");
  double total = 0.0;
  for (std::size_t u = 0; u < k; ++u) {
    const std::string tag = "[u=" + std::to_string(u) + "]";
    require_unit(d.p_u[u], "P(U)" + tag);
    total += d.p_u[u];
    for (int t = 0; t < 2; ++t) require_unit(d.s_given[u][t], "P(S=1|U,T)" + tag);
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) require_unit(d.y_given[u][s][t], "P(Y=1|U,S,T)" + tag);
      if (d.strong && d.y_given[u][s][0] != d.y_given[u][s][1]) {
        throw Error(ErrorCode::InvalidTable, "strong DGP has an outcome depending on T" + tag);
      }
    }
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw Error(ErrorCode::NotNormalized, "P(U) sums to " + std::to_string(total));
  }
}

DgpDiscreteU lift_to_dgp(const QTableStrong& q) {
  DgpDiscreteU d;
  d.strong = true;
  for (int i = 0; i < 4; ++i) {
    const double s0 = i / 2, s1 = i % 2;
    for (int j = 0; j < 4; ++j) {
      const double y0 = j / 2, y1 = j % 2;
      d.p_u.push_back(q(i, j));
      d.s_given.push_back({s0, s1});
      d.y_given.push_back({{{y0, y0}, {y1, y1}}});
    }
  }
  return d;
}

TrueEffects evaluate_dgp(const DgpDiscreteU& d) {
  validate_dgp(d);
  TrueEffects e;
  e.strong = d.strong;
  double s1_t1 = 0.0, s1_t0 = 0.0;
  ObservedLaw& law = e.observed;
  for (std::size_t u = 0; u < d.p_u.size(); ++u) {
    const double w = d.p_u[u];
    s1_t1 += w * d.s_given[u][1];
    s1_t0 += w * d.s_given[u][0];
    const double ps1 = d.s_given[u][0];
    const double y_s0 = d.y_given[u][0][0];
    const double y_s1 = d.y_given[u][1][0];
    law.p00 += w * (1.0 - ps1) * (1.0 - y_s0);
    law.p10 += w * (1.0 - ps1) * y_s0;
    law.p01 += w * ps1 * (1.0 - y_s1);
    law.p11 += w * ps1 * y_s1;
  }
  law.s1_treated = s1_t1;
  e.ace_ts = s1_t1 - s1_t0;
  e.gamma0 = potential_y(d, 1, 0) - potential_y(d, 0, 0);
  e.gamma1 = potential_y(d, 1, 1) - potential_y(d, 0, 1);
  e.ace_sy = e.gamma1;
  e.risk_treated = risk(d, 1);
  e.risk_control = risk(d, 0);
  e.ace_ty = e.risk_treated - e.risk_control;
  e.crr_sy = ratio(potential_y(d, 1, 1), potential_y(d, 0, 1));
  e.crr_ty = ratio(e.risk_treated, e.risk_control);
  return e;
}

TrueEffects evaluate_dgp(const DgpBinaryU& d) { return evaluate_dgp(d.general()); }

double conditional_outcome_mean(const DgpDiscreteU& d, int s, int t) {
  validate_dgp(d);
  double num = 0.0, den = 0.0;
  for (std::size_t u = 0; u < d.p_u.size(); ++u) {
    const double ps = s == 1 ? d.s_given[u][t] : 1.0 - d.s_given[u][t];
    den += d.p_u[u] * ps;
    num += d.p_u[u] * ps * d.y_given[u][s][t];
  }
  if (!(den > 0.0)) {
    throw Error(ErrorCode::DegenerateDenominator, "P(S=s|T=t) = 0");
  }
  return num / den;
}

std::string_view to_string(Paradox p) {
  switch (p) {
    case Paradox::A: return "ParadoxA";
    case Paradox::B: return "ParadoxB";
    case Paradox::C: return "ParadoxC";
    case Paradox::D: return "ParadoxD";
    case Paradox::None: return "None";
  }
  return "None";
}

Paradox classify_paradox(const TrueEffects& e, Scale scale) {
  int sy = 0, ty = 0;
  const int ts = sign_of(e.ace_ts, 0.0);
  if (scale == Scale::Difference) {
    sy = sign_of(e.ace_sy, 0.0);
    ty = sign_of(e.ace_ty, 0.0);
  } else {
    if (!e.crr_sy || !e.crr_ty) return Paradox::None;
    sy = sign_of(*e.crr_sy, 1.0);
    ty = sign_of(*e.crr_ty, 1.0);
  }
  if (ts > 0 && sy > 0 && ty < 0) return Paradox::A;
  if (ts > 0 && sy < 0 && ty > 0) return Paradox::B;
  if (ts < 0 && sy > 0 && ty > 0) return Paradox::C;
  if (ts < 0 && sy < 0 && ty < 0) return Paradox::D;
  return Paradox::None;
}

std::optional<ParadoxWitness> paradox_witness_search(const ObservedLaw& law, double gamma,
                                                     Scale scale) {
  validate_observed(law);
  if (!(law.ace_ts() > 0.0)) {
    throw Error(ErrorCode::PremiseViolated, "witness search needs ACE(T->S) > 0");
  }
  constexpr double kWitnessTol = 1e-12;
  if (scale == Scale::Difference) {
    if (!(gamma > 0.0) || gamma > 1.0) {
      throw Error(ErrorCode::PremiseViolated, "witness search needs 0 < gamma <= 1");
    }
    LpProblem<double> p = build_strong_system(law, gamma);
    const auto sol = simplex_solve(p);
    if (sol.status != LpStatus::Optimal) {
      throw Error(ErrorCode::InfeasibleInputs,
                  "no latent table reproduces the law with gamma = " + std::to_string(gamma));
    }
    if (!(sol.value < -kWitnessTol)) return std::nullopt;
    return ParadoxWitness{QTableStrong::from_flat(sol.point), sol.value};
  }
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::PremiseViolated, "witness search needs gamma_crr > 1");
  }
  const auto r = crr_bounds(law, gamma);
  if (!(r.lower < 1.0 - kWitnessTol)) return std::nullopt;
  return ParadoxWitness{QTableStrong::from_flat(*r.witness_lower), r.lower};
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::OutOfDomain: return "OutOfDomain";
    case Region::OutsideTriangle: return "OutsideTriangle";
    case Region::ParadoxRegion: return "ParadoxRegion";
    case Region::NoParadoxNotExcludable: return "NoParadoxNotExcludable";
    case Region::ExcludedByCriterion: return "ExcludedByCriterion";
  }
  return "OutOfDomain";
}

void validate_partition_config(const PartitionConfig& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!in_unit(c.p_u)) throw Error(ErrorCode::BadRange, "p_u must lie in [0,1]");
  if (!finite(c.s_effect_u0) || !finite(c.s_effect_u1) || !finite(c.baseline_s[0]) ||
      !finite(c.baseline_s[1]) || !finite(c.baseline_y[0]) || !finite(c.baseline_y[1])) {
    throw Error(ErrorCode::BadRange, "partition baselines and effects must be finite");
  }
  if (!finite(c.delta_min) || !finite(c.delta_max) || !(c.delta_min < c.delta_max)) {
    throw Error(ErrorCode::BadRange, "partition needs delta_min < delta_max");
  }
  if (c.resolution < 2) throw Error(ErrorCode::BadRange, "partition resolution must be >= 2");
}

DgpBinaryU partition_dgp(const PartitionConfig& c, double delta0, double delta1) {
  const std::array<double, 2> effect{c.s_effect_u0, c.s_effect_u1};
  const std::array<double, 2> delta{delta0, delta1};
  std::array<std::array<double, 2>, 2> s{}, y{};
  for (int u = 0; u < 2; ++u) {
    s[u] = {c.baseline_s[u], c.baseline_s[u] + effect[u]};
    y[u] = {c.baseline_y[u], c.baseline_y[u] + delta[u]};
  }
  return DgpBinaryU::make_strong(c.p_u, s, y);
}

GridPoint classify_point(const PartitionConfig& c, double delta0, double delta1) {
  GridPoint g;
  g.delta0 = delta0;
  g.delta1 = delta1;
  const DgpBinaryU d = partition_dgp(c, delta0, delta1);
  const double w1 = c.p_u, w0 = 1.0 - c.p_u;
  g.gamma = w1 * delta1 + w0 * delta0;
  g.ace_ts = w1 * c.s_effect_u1 + w0 * c.s_effect_u0;

  bool valid = true;
  for (int u = 0; u < 2; ++u) {
    for (int t = 0; t < 2; ++t) valid = valid && in_unit(d.s_given[u][t]);
    for (int s = 0; s < 2; ++s) valid = valid && in_unit(d.y_given[u][s][0]);
  }
  if (valid) {
    const TrueEffects e = evaluate_dgp(d);
    g.ace_ty = e.ace_ty;
    g.threshold = strong_threshold(e.observed);
  } else {
    const DgpDiscreteU gen = d.general();
    g.ace_ty = risk(gen, 1) - risk(gen, 0);
  }

  if (!(g.ace_ts > 0.0 && g.gamma > 0.0)) {
    g.region = Region::OutsideTriangle;
  } else if (!valid) {
    g.region = Region::OutOfDomain;
  } else if (g.ace_ty < 0.0) {
    g.region = Region::ParadoxRegion;
  } else if (compare_to_threshold(g.gamma, *g.threshold) == Verdict::Excluded) {
    g.region = Region::ExcludedByCriterion;
  } else {
    g.region = Region::NoParadoxNotExcludable;
  }
  return g;
}

PartitionGrid partition_grid(const PartitionConfig& cfg, unsigned workers) {
  validate_partition_config(cfg);
  const int n = cfg.resolution;
  // Mirror-symmetric coordinates: coord(k) == -coord(n-1-k) for a symmetric range.
  auto coord = [&](int k) {
    return (cfg.delta_min * (n - 1 - k) + cfg.delta_max * k) / (n - 1);
  };
  PartitionGrid grid;
  grid.config = cfg;
  grid.points.resize(static_cast<std::size_t>(n) * n);
  auto run_rows = [&](unsigned w, unsigned stride) {
    for (int r = static_cast<int>(w); r < n; r += static_cast<int>(stride)) {
      for (int k = 0; k < n; ++k) {
        grid.points[static_cast<std::size_t>(r) * n + k] = classify_point(cfg, coord(k), coord(r));
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    run_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_rows, w, workers);
    for (auto& t : pool) t.join();
  }
  const double mid = 0.5 * (cfg.delta_min + cfg.delta_max);
  grid.contour_level = classify_point(cfg, mid, mid).threshold;
  return grid;
}

void write_partition_csv(const PartitionGrid& grid, std::ostream& out) {
  out << "delta0,delta1,gamma,ace_ty,region_label,threshold\n";
  out << std::setprecision(17);
  for (const auto& p : grid.points) {
    out << p.delta0 << ',' << p.delta1 << ',' << p.gamma << ',' << p.ace_ty << ','
        << to_string(p.region) << ',';
    if (p.threshold) out << *p.threshold;
    out << '\n';
  }
}

const std::vector<ExampleEntry>& builtin_examples() {
  static const std::vector<ExampleEntry> registry = [] {
    std::vector<ExampleEntry> r;
    {
      ExampleEntry e;
      e.name = "Example1";
      e.dgp = DgpBinaryU::make_strong(0.7, {{{0.98, 0.79}, {0.02, 0.99}}},
                                      {{{0.00, 0.98}, {0.98, 0.99}}});
      e.expected = {0.6220, 0.3010, -0.0491, 0.3720, Verdict::NotExcludable, {}, {}};
      e.note = "antiarrhythmic drug example; paradox (a)";
      r.push_back(e);
    }
    {
      ExampleEntry e;
      e.name = "Example2";
      e.dgp = DgpBinaryU::make_strong(0.3, {{{0.28, 0.77}, {0.32, 0.65}}},
                                      {{{0.13, 0.87}, {0.33, 0.52}}});
      e.expected = {0.4420, 0.5750, 0.2726, 0.4864, Verdict::Excluded, {}, {}};
      e.note = "criterion holds; paradox excluded";
      r.push_back(e);
    }
    {
      ExampleEntry e;
      e.name = "Example3-Table5";
      e.dgp = DgpBinaryU::make_strong(0.5, {{{0.70, 0.50}, {0.50, 0.90}}},
                                      {{{0.20, 0.80}, {0.28, 0.08}}});
      e.expected = {0.10, 0.20, -0.10, 0.60, Verdict::NotExcludable, {}, {}};
      e.note = "same observables as the first set, with paradox (a)";
      r.push_back(e);
    }
    {
      ExampleEntry e;
      e.name = "TableS1";
      e.dgp = DgpBinaryU::make_strong(0.5, {{{0.40, 0.30}, {0.10, 0.90}}},
                                      {{{0.10, 0.90}, {0.10, 0.90}}});
      e.expected = {{}, 0.8, {}, 0.625, Verdict::Excluded, {}, {}};
      e.note = "excluded although a monotonicity condition fails";
      r.push_back(e);
    }
    {
      ExampleEntry e;
      e.name = "TableS2";
      e.dgp = DgpBinaryU::make_strong(0.3, {{{0.50, 0.90}, {0.60, 0.80}}},
                                      {{{0.10, 0.80}, {0.20, 0.90}}});
      e.expected = {{}, 0.7, {}, 0.572, Verdict::Excluded, 0.828, 0.834};
      e.note = "excluded although E(Y|S=1,T=1) < E(Y|S=1,T=0)";
      r.push_back(e);
    }
    {
      ExampleEntry e;
      e.name = "Example3-Table4";
      e.dgp = DgpBinaryU::make_strong(0.5, {{{0.70, 0.50}, {0.50, 0.90}}},
                                      {{{0.60, 0.40}, {0.40, 0.64}}});
      e.expected = {0.10, 0.20, 0.14, 0.60, {}, {}, {}};
      e.disputed = true;
      e.note = "stated gamma 0.20 and ACE(T->Y) 0.14 do not follow from the table "
               "(it gives gamma 0.02, ACE(T->Y) 0.068, P(Y=1,S=0|T=0) 0.19)";
      r.push_back(e);
    }
    return r;
  }();
  return registry;
}

std::string_view to_string(ExampleStatus s) {
  switch (s) {
    case ExampleStatus::Pass: return "pass";
    case ExampleStatus::Fail: return "fail";
    case ExampleStatus::Disputed: return "disputed";
  }
  return "fail";
}

ExampleResult run_example(const ExampleEntry& entry, double tol) {
  ExampleResult out;
  out.name = entry.name;
  out.effects = evaluate_dgp(entry.dgp);
  out.threshold = strong_threshold(out.effects.observed);
  out.verdict = compare_to_threshold(out.effects.ace_sy, out.threshold);

  // Stated means carry three decimals.
  constexpr double kThreeDecimals = 5e-4;
  auto check = [&](const char* name, const std::optional<double>& want, double got,
                   double t) {
    if (!want) return;
    out.checks.push_back({name, *want, got, std::abs(*want - got) <= t});
  };
  const auto& x = entry.expected;
  check("ace_ts", x.ace_ts, out.effects.ace_ts, tol);
  check("gamma", x.gamma, out.effects.ace_sy, tol);
  check("ace_ty", x.ace_ty, out.effects.ace_ty, tol);
  check("threshold", x.threshold, out.threshold, tol);
  const auto general = entry.dgp.general();
  if (x.mean_y_s1_t1) {
    check("E(Y|S=1,T=1)", x.mean_y_s1_t1, conditional_outcome_mean(general, 1, 1),
          kThreeDecimals);
  }
  if (x.mean_y_s1_t0) {
    check("E(Y|S=1,T=0)", x.mean_y_s1_t0, conditional_outcome_mean(general, 1, 0),
          kThreeDecimals);
  }
  if (x.verdict) {
    out.checks.push_back({"verdict", static_cast<double>(*x.verdict),
                          static_cast<double>(out.verdict), *x.verdict == out.verdict});
  }

  const bool all_ok = std::all_of(out.checks.begin(), out.checks.end(),
                                  [](const ExampleCheck& c) { return c.ok; });
  if (entry.disputed) {
    out.status = ExampleStatus::Disputed;
  } else {
    out.status = all_ok ? ExampleStatus::Pass : ExampleStatus::Fail;
  }
  return out;
}

std::vector<ExampleResult> run_builtin_examples(double tol) {
  std::vector<ExampleResult> out;
  for (const auto& e : builtin_examples()) out.push_back(run_example(e, tol));
  return out;
}

}  // namespace surrbound
