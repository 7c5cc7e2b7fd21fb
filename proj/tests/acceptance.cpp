#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "surrbound/bounds.hpp"
#include "surrbound/derive.hpp"
#include "surrbound/dgp.hpp"
#include "surrbound/lp.hpp"
#include "surrbound/trial.hpp"

using namespace surrbound;

namespace {

const ObservedLaw kExample1{0.0197, 0.6723, 0.0060, 0.3020, 0.93};

// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 20) failures.push_back(what);
    if (!ok && failures.size() == 20) failures.push_back("(further failures suppressed)");
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(10);
  o << v;
  return o.str();
}

struct Pair {
  double lo, hi;
};

Pair solve_both(LpProblem<double> p, Check& c, const std::string& what) {
  p.direction = Direction::Min;
  const auto mn = simplex_solve(p);
  p.direction = Direction::Max;
  const auto mx = simplex_solve(p);
  c.expect(mn.status == LpStatus::Optimal && mx.status == LpStatus::Optimal,
           what + ": oracle LP not optimal");
  return {mn.value, mx.value};
}

// ACE over the 16-cell system built from the definitions. Without a point gamma
// the gamma row becomes a lower-bounded slack row.
Pair oracle_strong_lp(const ObservedLaw& law, std::optional<double> gamma,
                      std::optional<double> gamma_lo, Check& c) {
  const auto rows = oracle::strong_rows();
  const auto rhs = oracle::strong_rhs(law, gamma.value_or(0.0));
  LpProblem<double> p;
  p.objective = oracle::strong_ace_row();
  for (int r = 0; r < 6; ++r) {
    if (r == 4 && !gamma) continue;
    p.eq_matrix.push_back(rows[r]);
    p.eq_rhs.push_back(rhs[r]);
  }
  if (!gamma && gamma_lo) {
    for (auto& row : p.eq_matrix) row.push_back(0.0);
    p.objective.push_back(0.0);
    auto row = rows[4];
    row.push_back(-1.0);
    p.eq_matrix.push_back(row);
    p.eq_rhs.push_back(*gamma_lo);
  }
  return solve_both(std::move(p), c, "strong");
}

// Joint of (Y10, Y11, S1): index 4*y10 + 2*y11 + s1.
Pair oracle_reduced(double py1, double s1, double gamma1, Check& c) {
  LpProblem<double> p;
  p.objective.assign(8, 0.0);
  std::vector<double> s0_row(8), g_row(8), one(8, 1.0);
  for (int k = 0; k < 8; ++k) {
    const int y10 = k >> 2, y11 = (k >> 1) & 1, s = k & 1;
    s0_row[k] = s == 0;
    g_row[k] = y11 - y10;
    p.objective[k] = s ? y11 : y10;
  }
  p.objective_constant = -py1;
  p.eq_matrix = {s0_row, g_row, one};
  p.eq_rhs = {1.0 - s1, gamma1, 1.0};
  return solve_both(std::move(p), c, "reduced");
}

// 64-cell system with the full control law and an optional gamma0 row.
LpProblem<double> full_nonstrong_problem(const oracle::NonStrongSummary& s,
                                         std::optional<double> gamma0) {
  LpProblem<double> p;
  std::vector<std::vector<double>> rows(7, std::vector<double>(64, 0.0));
  p.objective.assign(64, 0.0);
  for (int k = 0; k < 64; ++k) {
    const auto t = oracle::nonstrong_type(k);
    const int yc = t.y(0, t.s0);
    rows[0][k] = yc == 0 && t.s0 == 0;
    rows[1][k] = yc == 1 && t.s0 == 0;
    rows[2][k] = yc == 0 && t.s0 == 1;
    rows[3][k] = t.s1 == 0;
    rows[4][k] = t.y11 - t.y10;
    rows[5][k] = 1.0;
    rows[6][k] = t.y01 - t.y00;
    p.objective[k] = t.y(1, t.s1) - yc;
  }
  const std::vector<double> rhs = {s.p[0][0], s.p[1][0], s.p[0][1], 1.0 - s.s1_treated,
                                   s.gamma1,  1.0,       gamma0.value_or(0.0)};
  for (int r = 0; r < (gamma0 ? 7 : 6); ++r) {
    p.eq_matrix.push_back(rows[r]);
    p.eq_rhs.push_back(rhs[r]);
  }
  return p;
}

ObservedLaw clean(ObservedLaw l) {
  l.s1_treated = std::clamp(l.s1_treated, 0.0, 1.0);
  return renormalized(l);
}

double witness_ace(const std::vector<double>& x) {
  std::array<double, 16> q{};
  std::copy(x.begin(), x.end(), q.begin());
  return oracle::summarize_strong(q).ace;
}

// 1. Worked examples.
void criterion_examples(Check& c) {
  const auto results = run_builtin_examples(1e-4);
  int pass = 0, disputed = 0;
  for (const auto& r : results) {
    if (r.status == ExampleStatus::Pass) ++pass;
    if (r.status == ExampleStatus::Disputed) {
      ++disputed;
      c.note(r.name + " recomputed: gamma=" + fmt(r.effects.ace_sy) +
             " ace_ty=" + fmt(r.effects.ace_ty) + " (disputed, not asserted)");
    }
    if (r.status == ExampleStatus::Fail)
      for (const auto& k : r.checks)
        c.expect(k.ok, r.name + " " + k.quantity + ": expected " + fmt(k.expected) + " got " +
                           fmt(k.actual));
  }
  c.expect(pass == 5, "expected 5 passing examples, got " + std::to_string(pass));
  c.expect(disputed == 1, "expected 1 disputed example");

  // Independent spot checks of the headline values.
  std::map<std::string, const ExampleEntry*> by_name;
  for (const auto& e : builtin_examples()) by_name[e.name] = &e;
  auto near = [&](double a, double b, const std::string& what) {
    c.expect(std::abs(a - b) < 1e-4, what + ": " + fmt(a) + " vs " + fmt(b));
  };
  {
    const auto e = evaluate_dgp(by_name.at("Example1")->dgp);
    near(e.ace_ts, 0.6220, "Example1 ace_ts");
    near(e.ace_sy, 0.3010, "Example1 gamma");
    near(e.ace_ty, -0.0491, "Example1 ace_ty");
    near(strong_threshold(e.observed), 0.3720, "Example1 threshold");
    c.expect(strong_criterion(e.observed, GammaSpec::point(Scale::Difference, e.ace_sy)).verdict ==
                 Verdict::NotExcludable,
             "Example1 verdict");
  }
  {
    const auto e = evaluate_dgp(by_name.at("Example2")->dgp);
    near(e.ace_ts, 0.4420, "Example2 ace_ts");
    near(e.ace_sy, 0.5750, "Example2 gamma");
    near(e.ace_ty, 0.2726, "Example2 ace_ty");
    near(strong_threshold(e.observed), 0.4864, "Example2 threshold");
    c.expect(strong_criterion(e.observed, GammaSpec::point(Scale::Difference, e.ace_sy)).verdict ==
                 Verdict::Excluded,
             "Example2 verdict");
  }
  {
    const auto e = evaluate_dgp(by_name.at("Example3-Table5")->dgp);
    near(e.ace_ts, 0.10, "Table5 ace_ts");
    near(e.ace_sy, 0.20, "Table5 gamma");
    near(e.ace_ty, -0.10, "Table5 ace_ty");
    near(strong_threshold(e.observed), 0.60, "Table5 threshold");
  }
  for (auto [name, g, thr] : {std::tuple{"TableS1", 0.8, 0.625}, std::tuple{"TableS2", 0.7, 0.572}}) {
    const auto e = evaluate_dgp(by_name.at(name)->dgp);
    near(e.ace_sy, g, std::string(name) + " gamma");
    near(strong_threshold(e.observed), thr, std::string(name) + " threshold");
    c.expect(strong_criterion(e.observed, GammaSpec::point(Scale::Difference, e.ace_sy)).verdict ==
                 Verdict::Excluded,
             std::string(name) + " verdict");
  }
}

// 2. Closed forms against LPs, witnesses, exact dyadic subset.
void criterion_sharpness(Check& c) {
  std::mt19937_64 rng(1001);
  const auto rows = oracle::strong_rows();
  for (int it = 0; it < 1000; ++it) {
    const auto s = oracle::summarize_strong(oracle::sparse_dirichlet<16>(rng));
    const auto law = clean(oracle::law_of(s));
    const auto cf = strong_bounds(law, s.gamma, {.strict_feasibility = false, .with_witness = true});
    const auto lp = oracle_strong_lp(law, s.gamma, std::nullopt, c);
    c.expect(std::abs(cf.lower - lp.lo) < 1e-8, "strong lower vs LP at instance " + std::to_string(it));
    c.expect(std::abs(cf.upper - lp.hi) < 1e-8, "strong upper vs LP at instance " + std::to_string(it));
    c.expect(cf.witness_lower && cf.witness_upper, "missing witness");
    if (!cf.witness_lower || !cf.witness_upper) continue;
    const auto rhs = oracle::strong_rhs(law, s.gamma);
    for (const auto* w : {&*cf.witness_lower, &*cf.witness_upper}) {
      c.expect(oracle::residual(rows, rhs, *w) < 1e-9, "witness residual");
      c.expect(oracle::min_entry(*w) > -1e-12, "witness negativity");
    }
    c.expect(std::abs(witness_ace(*cf.witness_lower) - cf.lower) < 1e-9, "witness attains lower");
    c.expect(std::abs(witness_ace(*cf.witness_upper) - cf.upper) < 1e-9, "witness attains upper");
  }

  for (int it = 0; it < 50; ++it) {
    const auto s = oracle::summarize_strong(oracle::dyadic_table(rng));
    const auto law = oracle::law_of(s);
    const auto e = lp_strong_bounds(law, s.gamma, Arithmetic::Exact);
    const auto cf = strong_bounds(law, s.gamma);
    c.expect(e.status == LpStatus::Optimal, "exact LP not optimal");
    c.expect(std::abs(cf.lower - e.lower) < 1e-12 && std::abs(cf.upper - e.upper) < 1e-12,
             "closed form vs exact LP on dyadic table");
  }

  for (int it = 0; it < 100; ++it) {
    auto s = oracle::summarize_nonstrong(oracle::sparse_dirichlet<64>(rng, 0.5));
    s.s1_treated = std::clamp(s.s1_treated, 0.0, 1.0);
    const double py1 = std::clamp(s.p[1][0] + s.p[1][1], 0.0, 1.0);
    const auto cf = nonstrong_bounds(py1, s.s1_treated, s.gamma1);
    const auto red = oracle_reduced(py1, s.s1_treated, s.gamma1, c);
    const auto full = solve_both(full_nonstrong_problem(s, std::nullopt), c, "full");
    c.expect(std::abs(cf.lower - red.lo) < 1e-8 && std::abs(cf.upper - red.hi) < 1e-8,
             "non-strong closed form vs reduced LP");
    c.expect(std::abs(red.lo - full.lo) < 1e-9 && std::abs(red.hi - full.hi) < 1e-9,
             "reduced vs full 64-variable LP");
  }
}

// 3. gamma0 does not move the non-strong bounds.
void criterion_gamma0(Check& c) {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int it = 0; it < 100; ++it) {
    const auto s = oracle::summarize_nonstrong(oracle::sparse_dirichlet<64>(rng, 0.5));
    const auto base = solve_both(full_nonstrong_problem(s, std::nullopt), c, "base");
    auto p = full_nonstrong_problem(s, std::nullopt);
    p.objective.assign(64, 0.0);
    for (int k = 0; k < 64; ++k) {
      const auto t = oracle::nonstrong_type(k);
      p.objective[k] = t.y01 - t.y00;
    }
    const auto range = solve_both(p, c, "gamma0 range");
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double g0 = range.lo + f * (range.hi - range.lo);
      const auto with = solve_both(full_nonstrong_problem(s, g0), c, "with gamma0");
      worst = std::max({worst, std::abs(with.lo - base.lo), std::abs(with.hi - base.hi)});
    }
    // The library's system with the gamma0 row agrees too.
    const ObservedLaw law{s.p[0][0], s.p[1][0], s.p[0][1], s.p[1][1], s.s1_treated};
    const auto lib = lp_bounds(build_nonstrong_system(law, 0.5 * (range.lo + range.hi), s.gamma1));
    worst = std::max({worst, std::abs(lib.lower - base.lo), std::abs(lib.upper - base.hi)});
  }
  c.expect(worst < 1e-9, "largest change " + fmt(worst));
  c.note("largest change over gamma0: " + fmt(worst));
}

// 4. Sign-only bounds.
void criterion_sign_only(Check& c) {
  std::mt19937_64 rng(1003);
  for (int it = 0; it < 1000; ++it) {
    const auto law = clean(oracle::law_of(oracle::summarize_strong(oracle::sparse_dirichlet<16>(rng))));
    const auto r = strong_bounds_for(law, GammaSpec::sign_positive(Scale::Difference));
    const double s0 = law.s0_treated(), s1 = law.s1_treated;
    const double lo = std::max({-law.p10 - s0, -(law.p10 + law.p11), -law.p11 - s1,
                                -2.0 * law.p11 - law.p00, -law.p11 - s0});
    const double hi = std::min({law.p00 + s0, law.p00 + law.p01, law.p01 + s1,
                                2.0 * law.p00 + law.p11, law.p00 + s1});
    c.expect(r.lower <= 0.0 && r.upper >= 0.0, "sign-only bounds exclude zero");
    c.expect(std::abs(r.lower - lo) < 1e-9 && std::abs(r.upper - hi) < 1e-9,
             "sign-only vs five-term stacks");
    const auto lp = oracle_strong_lp(law, std::nullopt, 0.0, c);
    c.expect(std::abs(r.lower - lp.lo) < 1e-9 && std::abs(r.upper - lp.hi) < 1e-9,
             "sign-only vs LP with gamma >= 0");
  }
}

// 5. Symbolic re-derivation.
void criterion_derive(Check& c) {
  const auto strong = strong_symbolic_system();
  const auto poly = dual_of(strong, BoundSide::Lower);
  c.expect(binomial(poly.n(), poly.m()) == 8008, "strong dual is not C(16,6)");
  const auto lower = derive_bounds(strong, BoundSide::Lower);
  const auto upper = derive_bounds(strong, BoundSide::Upper);
  c.note("strong terms: " + std::to_string(lower.terms.size()) + " lower, " +
         std::to_string(upper.terms.size()) + " upper");
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const auto s = oracle::summarize_strong(oracle::sparse_dirichlet<16>(rng));
    const auto law = clean(oracle::law_of(s));
    const auto b = strong_basis_values(law, s.gamma);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& t : strong_lower_affine(law)) lo = std::max(lo, t.at(s.gamma));
    for (const auto& t : strong_upper_affine(law)) hi = std::min(hi, t.at(s.gamma));
    worst = std::max({worst, std::abs(lower.value_at(b) - lo), std::abs(upper.value_at(b) - hi)});
  }
  c.expect(worst < 1e-9, "strong derived vs closed form: " + fmt(worst));

  const auto red = reduced_nonstrong_symbolic_system();
  const auto rlo = derive_bounds(red, BoundSide::Lower);
  const auto rhi = derive_bounds(red, BoundSide::Upper);
  c.expect(rlo.terms.size() == 3 && rhi.terms.size() == 3, "reduced system term count");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_red = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const auto q = oracle::sparse_dirichlet<8>(rng);
    double s0 = 0.0, g1 = 0.0;
    for (int k = 0; k < 8; ++k) {
      const int y10 = k >> 2, y11 = (k >> 1) & 1, s = k & 1;
      s0 += (s == 0) * q[k];
      g1 += (y11 - y10) * q[k];
    }
    const double s1 = std::clamp(1.0 - s0, 0.0, 1.0);
    g1 = std::clamp(g1, -1.0, 1.0);
    const double py1 = unit(rng);
    const auto b = reduced_basis_values(py1, s1, g1);
    // Non-strong closed form written out here.
    const double lo = std::max({-py1, -py1 - s1 - g1, -py1 - (1.0 - s1) + g1});
    const double hi = std::min({1.0 - py1, 1.0 - py1 + s1 - g1, 1.0 - py1 + (1.0 - s1) + g1});
    worst_red = std::max({worst_red, std::abs(rlo.value_at(b) - lo), std::abs(rhi.value_at(b) - hi)});
  }
  c.expect(worst_red < 1e-9, "reduced derived vs closed form: " + fmt(worst_red));
}

// 6. Relative-risk machinery.
void criterion_crr(Check& c) {
  std::mt19937_64 rng(1005);
  int checked = 0;
  for (int it = 0; checked < 100 && it < 2000; ++it) {
    const auto s = oracle::summarize_strong(oracle::sparse_dirichlet<16>(rng, 0.8));
    if (s.y0 < 1e-3 || s.risk0 < 1e-3) continue;
    const auto law = clean(oracle::law_of(s));
    const double g = s.y1 / s.y0;
    // Treated-risk LP over the definitions with P(Y1=1) - g P(Y0=1) = 0.
    const auto rows = oracle::strong_rows();
    LpProblem<double> p;
    for (int r : {0, 1, 2, 3, 5}) p.eq_matrix.push_back(rows[r]);
    p.eq_rhs = {law.p00, law.p10, law.p01, 1.0 - law.s1_treated, 1.0};
    std::vector<double> ratio(16);
    p.objective.assign(16, 0.0);
    for (int k = 0; k < 16; ++k) {
      const auto t = oracle::strong_type(k);
      ratio[k] = t.y1 - g * t.y0;
      p.objective[k] = t.s1 ? t.y1 : t.y0;
    }
    p.eq_matrix.push_back(ratio);
    p.eq_rhs.push_back(0.0);
    const auto num = solve_both(p, c, "treated risk");
    const double py1 = law.py1_control();
    const auto cc_lo = solve_fractional(build_crr_fractional(law, g, Direction::Min));
    const auto cc_hi = solve_fractional(build_crr_fractional(law, g, Direction::Max));
    c.expect(std::abs(cc_lo.value - num.lo / py1) < 1e-9, "Charnes-Cooper min vs numerator LP");
    c.expect(std::abs(cc_hi.value - num.hi / py1) < 1e-9, "Charnes-Cooper max vs numerator LP");
    const auto r = crr_bounds(law, g);
    c.expect(std::abs(r.lower - cc_lo.value) < 1e-9 && std::abs(r.upper - cc_hi.value) < 1e-9,
             "crr_bounds vs Charnes-Cooper");
    const double crr = s.risk1 / s.risk0;
    c.expect(r.lower <= crr + 1e-9 && crr <= r.upper + 1e-9, "true CRR outside bounds");
    ++checked;
  }
  c.expect(checked == 100, "only " + std::to_string(checked) + " CRR instances");

  const auto e = evaluate_dgp(builtin_examples()[0].dgp);
  c.expect(e.crr_ty && e.crr_sy, "Example1 CRR undefined");
  if (e.crr_ty && e.crr_sy) {
    c.expect(std::abs(*e.crr_ty - 0.9496) < 1e-4, "Example1 CRR " + fmt(*e.crr_ty));
    const auto r = crr_bounds(e.observed, *e.crr_sy);
    c.expect(r.lower <= *e.crr_ty && *e.crr_ty <= r.upper, "Example1 CRR outside its bounds");
    c.note("Example1 CRR " + fmt(*e.crr_ty) + " in [" + fmt(r.lower) + ", " + fmt(r.upper) + "]");
  }
  const auto one = crr_bounds({0.6, 0.4, 0.0, 0.0, 0.0}, 1.7);
  c.expect(std::abs(one.lower - 1.0) < 1e-12 && std::abs(one.upper - 1.0) < 1e-12,
           "all-S=0 case is not [1,1]");
}

// 7. Sufficiency and witness construction over random binary-U DGPs.
void criterion_paradox(Check& c) {
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int excluded = 0, witnessed = 0;
  for (int it = 0; it < 10000; ++it) {
    const auto d = DgpBinaryU::make_strong(u(rng), {{{u(rng), u(rng)}, {u(rng), u(rng)}}},
                                           {{{u(rng), u(rng)}, {u(rng), u(rng)}}}, u(rng));
    const auto e = evaluate_dgp(d);
    const auto verdict =
        strong_criterion(e.observed, GammaSpec::point(Scale::Difference, e.ace_sy)).verdict;
    if (verdict == Verdict::Excluded) {
      ++excluded;
      c.expect(classify_paradox(e) != Paradox::A, "Excluded instance shows ParadoxA");
      continue;
    }
    if (verdict != Verdict::NotExcludable) continue;
    if (!(e.observed.ace_ts() > 0.0) || !(e.ace_sy > 0.0)) continue;
    const auto lp = oracle_strong_lp(e.observed, e.ace_sy, std::nullopt, c);
    if (!(lp.lo < 0.0)) continue;
    const auto w = paradox_witness_search(e.observed, e.ace_sy);
    c.expect(w.has_value(), "no witness at instance " + std::to_string(it));
    if (!w) continue;
    const auto flat = w->q.flat();
    const std::vector<double> x(flat.begin(), flat.end());
    c.expect(oracle::residual(oracle::strong_rows(), oracle::strong_rhs(e.observed, e.ace_sy), x) <
                 1e-9,
             "witness does not match observables");
    c.expect(oracle::min_entry(x) > -1e-12, "witness has negative cells");
    c.expect(witness_ace(x) < 0.0, "witness ACE is not negative");
    ++witnessed;
  }
  c.note(std::to_string(excluded) + " excluded, " + std::to_string(witnessed) + " witnessed");
  c.expect(excluded > 0 && witnessed > 0, "degenerate sample");
}

// 8. Structural identities.
void criterion_identities(Check& c) {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 1000; ++it) {
    const double s0 = u(rng), s1 = u(rng), y0 = u(rng), y1 = u(rng);
    const auto d = DgpBinaryU::make_strong(u(rng), {{{s0, s1}, {s0, s1}}}, {{{y0, y1}, {y0, y1}}});
    const auto e = evaluate_dgp(d);
    c.expect(std::abs(e.ace_ty - e.ace_ts * e.ace_sy) < 1e-12, "product identity");
  }
  for (int it = 0; it < 1000; ++it) {
    // gamma = 1 forces Y_{S=s} = s for every unit.
    std::array<double, 4> w{};
    double total = 0.0;
    for (auto& v : w) total += (v = u(rng));
    std::array<double, 16> q{};
    for (int i = 0; i < 4; ++i) q[4 * i + 1] = w[i] / total;
    const auto s = oracle::summarize_strong(q);
    const auto law = clean(oracle::law_of(s));
    const auto r = strong_bounds(law, 1.0);
    c.expect(std::abs(r.lower - law.ace_ts()) < 1e-12 && std::abs(r.upper - law.ace_ts()) < 1e-12,
             "gamma=1 does not identify the effect");
  }
  for (int it = 0; it < 1000; ++it) {
    const auto s = oracle::summarize_strong(oracle::sparse_dirichlet<16>(rng));
    const auto law = clean(oracle::law_of(s));
    const double g = (1.0 + law.p00 + law.p11) / 2.0;
    const auto lo = strong_lower_affine(law);
    const auto hi = strong_upper_affine(law);
    c.expect(lo[6].label == "L7" && hi[6].label == "U7", "term labels");
    c.expect(std::abs(lo[6].at(g) - hi[6].at(g)) < 1e-15, "L7 != U7 at the midpoint");
    const auto st = strong_bounds(law, s.gamma);
    const auto ns = nonstrong_bounds(law.py1_control(), law.s1_treated, s.gamma);
    c.expect(ns.lower <= st.lower + 1e-12 && st.upper <= ns.upper + 1e-12,
             "strong bounds not inside non-strong bounds");
  }
}

// 9. Partition grid.
void criterion_partition(Check& c) {
  const PartitionConfig cfg;
  const auto grid = partition_grid(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.resolution) * cfg.resolution;
  c.expect(cfg.resolution >= 200, "resolution below 200");
  c.expect(grid.points.size() == n, "grid size");
  std::map<Region, std::size_t> count;
  for (const auto& p : grid.points) {
    ++count[p.region];
    const int r = static_cast<int>(p.region);
    c.expect(r >= 0 && r <= static_cast<int>(Region::ExcludedByCriterion), "unknown region");
    c.expect((p.region == Region::OutsideTriangle) == (p.gamma <= 0.0 || p.ace_ts <= 0.0),
             "OutsideTriangle mismatch");
    const bool paradox = p.ace_ts > 0.0 && p.gamma > 0.0 && p.ace_ty < 0.0;
    const bool excluded =
        p.threshold && compare_to_threshold(p.gamma, *p.threshold) == Verdict::Excluded;
    if (p.region != Region::OutOfDomain) c.expect(!(paradox && excluded), "Excluded and paradox");
    c.expect(p.region != Region::ExcludedByCriterion || !paradox, "Excluded label on a paradox");
    c.expect(p.region != Region::ParadoxRegion || !excluded, "Paradox label on an excluded point");
  }
  std::size_t total = 0;
  std::ostringstream o;
  for (const auto& [r, k] : count) {
    total += k;
    o << to_string(r) << '=' << k << ' ';
  }
  c.expect(total == n, "labels are not exhaustive");
  if (grid.contour_level) o << "contour=" << fmt(*grid.contour_level);
  c.note(o.str());
}

// 10. Bootstrap.
void criterion_bootstrap(Check& c) {
  BoundsRequest req;
  req.gamma = GammaSpec::point(Scale::Difference, 0.3010);
  const auto pop = strong_bounds(kExample1, 0.3010);
  c.expect(std::abs(pop.lower + 0.0710) < 1e-4 && std::abs(pop.upper - 0.0257) < 1e-4,
           "population bounds");

  const auto small = sample_counts(kExample1, 2000, 2000, 77);
  BootstrapConfig cfg;
  cfg.replicates = 200;
  cfg.seed = 42;
  const auto ref = bootstrap_region(small, req, cfg);
  for (unsigned w : {2u, 4u}) {
    cfg.workers = w;
    const auto r = bootstrap_region(small, req, cfg);
    c.expect(r.lowers == ref.lowers && r.uppers == ref.uppers && r.lo == ref.lo && r.hi == ref.hi,
             "bootstrap differs with " + std::to_string(w) + " workers");
  }

  const auto counts = sample_counts(kExample1, 10000, 10000, 2024);
  cfg = BootstrapConfig{};
  cfg.replicates = 1000;
  cfg.seed = 42;
  cfg.workers = 2;
  const auto r = bootstrap_region(counts, req, cfg);
  c.expect(r.lo <= pop.lower && pop.upper <= r.hi, "region misses the population bounds");
  c.note("region [" + fmt(r.lo) + ", " + fmt(r.hi) + "], used " + std::to_string(r.used) +
         ", skipped " + std::to_string(r.skipped));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"1 worked-example regression", criterion_examples},
      {"2 closed form vs LP sharpness", criterion_sharpness},
      {"3 gamma0 irrelevance", criterion_gamma0},
      {"4 sign-only bounds", criterion_sign_only},
      {"5 symbolic re-derivation", criterion_derive},
      {"6 CRR machinery", criterion_crr},
      {"7 criterion sufficiency and witnesses", criterion_paradox},
      {"8 structural identities", criterion_identities},
      {"9 partition grid", criterion_partition},
      {"10 bootstrap", criterion_bootstrap},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name.c_str());
    for (const auto& s : c.notes) std::printf("    %s\n", s.c_str());
    for (const auto& s : c.failures) std::printf("    failure: %s\n", s.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
