#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "surrbound/law.hpp"
#include "surrbound/report.hpp"

using namespace surrbound;

namespace {

QTableStrong point_mass(int i, int j) {
  QTableStrong q;
  q(i, j) = 1.0;
  return q;
}

}  // namespace

TEST_CASE("validate_observed accepts valid laws and rejects bad ones") {
  CHECK_NOTHROW(validate_observed({0.25, 0.25, 0.25, 0.25, 0.5}));
  CHECK_NOTHROW(validate_observed({0.0197, 0.6723, 0.0060, 0.3020, 0.93}));
  CHECK_NOTHROW(validate_observed({1.0, 0.0, 0.0, 0.0, 0.0}));

  try {
    validate_observed({0.5, 0.5, 0.5, 0.5, 0.5});
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
  try {
    validate_observed({1.2, -0.2, 0.0, 0.0, 0.5});
    FAIL("expected NotAProbability");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAProbability);
  }
  try {
    validate_observed({0.25, 0.25, 0.25, 0.25, 1.5});
    FAIL("expected NotAProbability");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAProbability);
  }
}

TEST_CASE("normalization tolerance and explicit renormalization") {
  CHECK_NOTHROW(validate_observed({0.25, 0.25, 0.25, 0.25 + 5e-10, 0.5}));
  CHECK_THROWS_AS(validate_observed({0.25, 0.25, 0.25, 0.25 + 1e-8, 0.5}), Error);
  const auto r = renormalized({0.2, 0.2, 0.2, 0.4 + 1e-6, 0.5});
  CHECK(r.p00 + r.p10 + r.p01 + r.p11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.s1_treated == 0.5);
}

TEST_CASE("observed-law helpers") {
  const ObservedLaw l{0.1, 0.2, 0.3, 0.4, 0.9};
  CHECK(l.py1_control() == doctest::Approx(0.6));
  CHECK(l.s1_control() == doctest::Approx(0.7));
  CHECK(l.ace_ts() == doctest::Approx(0.2));
  CHECK(l.s0_treated() == doctest::Approx(0.1));
}

TEST_CASE("strong observables of simple tables") {
  const auto one = observables_from_qtable_strong(point_mass(1, 1));
  CHECK(one.law == ObservedLaw{1.0, 0.0, 0.0, 0.0, 1.0});
  CHECK(one.gamma == 1.0);

  QTableStrong uniform;
  for (auto& row : uniform.q) row.fill(1.0 / 16.0);
  const auto u = observables_from_qtable_strong(uniform);
  CHECK(u.law.p00 == doctest::Approx(0.25));
  CHECK(u.law.p10 == doctest::Approx(0.25));
  CHECK(u.law.p01 == doctest::Approx(0.25));
  CHECK(u.law.p11 == doctest::Approx(0.25));
  CHECK(u.law.s1_treated == doctest::Approx(0.5));
  CHECK(u.gamma == doctest::Approx(0.0));
  CHECK(ace_from_qtable_strong(uniform) == doctest::Approx(0.0));
}

TEST_CASE("ACE of point masses has the expected sign") {
  CHECK(ace_from_qtable_strong(point_mass(1, 1)) == 1.0);
  CHECK(ace_from_qtable_strong(point_mass(2, 2)) == 1.0);
  CHECK(ace_from_qtable_strong(point_mass(1, 2)) == -1.0);
  CHECK(ace_from_qtable_strong(point_mass(2, 1)) == -1.0);
  CHECK(ace_from_qtable_strong(point_mass(0, 1)) == 0.0);
  CHECK(ace_from_qtable_strong(point_mass(3, 2)) == 0.0);
}

TEST_CASE("strong maps match the potential-outcome definitions") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 1000; ++it) {
    const auto q = oracle::sparse_dirichlet<16>(rng);
    const auto ref = oracle::summarize_strong(q);
    const auto t = QTableStrong::from_flat(q);
    const auto obs = observables_from_qtable_strong(t);
    CHECK(obs.law.p00 == doctest::Approx(ref.p[0][0]).epsilon(1e-12));
    CHECK(obs.law.p10 == doctest::Approx(ref.p[1][0]).epsilon(1e-12));
    CHECK(obs.law.p01 == doctest::Approx(ref.p[0][1]).epsilon(1e-12));
    CHECK(obs.law.p11 == doctest::Approx(ref.p[1][1]).epsilon(1e-12));
    CHECK(obs.law.s1_treated == doctest::Approx(ref.s1_treated).epsilon(1e-12));
    CHECK(obs.gamma == doctest::Approx(ref.gamma).epsilon(1e-12));
    CHECK(ace_from_qtable_strong(t) == doctest::Approx(ref.ace).epsilon(1e-12));
    CHECK(obs.law.s1_treated <= 1.0 + 1e-12);
    CHECK(obs.law.s1_treated >= -1e-12);
  }
}

TEST_CASE("strong coefficient arrays match the definitions") {
  const auto rows = oracle::strong_rows();
  const auto& a = strong_constraint_matrix();
  for (int r = 0; r < 6; ++r) {
    for (int k = 0; k < 16; ++k) CHECK(a[r][k] == rows[r][k]);
  }
  const auto ace = oracle::strong_ace_row();
  for (int k = 0; k < 16; ++k) {
    const auto t = oracle::strong_type(k);
    CHECK(strong_ace_coefficients()[k] == ace[k]);
    CHECK(strong_treated_risk_coefficients()[k] == (t.s1 ? t.y1 : t.y0));
    CHECK(strong_control_risk_coefficients()[k] == (t.s0 ? t.y1 : t.y0));
    CHECK(strong_y1_coefficients()[k] == t.y1);
    CHECK(strong_y0_coefficients()[k] == t.y0);
  }
}

TEST_CASE("strong maps are linear") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 200; ++it) {
    const auto a = oracle::sparse_dirichlet<16>(rng);
    const auto b = oracle::sparse_dirichlet<16>(rng);
    const double lam = std::uniform_real_distribution<double>(0, 1)(rng);
    std::array<double, 16> m{};
    for (int k = 0; k < 16; ++k) m[k] = lam * a[k] + (1 - lam) * b[k];
    const auto fa = observables_from_qtable_strong(QTableStrong::from_flat(a));
    const auto fb = observables_from_qtable_strong(QTableStrong::from_flat(b));
    const auto fm = observables_from_qtable_strong(QTableStrong::from_flat(m));
    CHECK(std::abs(fm.law.p11 - (lam * fa.law.p11 + (1 - lam) * fb.law.p11)) < 1e-12);
    CHECK(std::abs(fm.law.s1_treated - (lam * fa.law.s1_treated + (1 - lam) * fb.law.s1_treated)) <
          1e-12);
    CHECK(std::abs(fm.gamma - (lam * fa.gamma + (1 - lam) * fb.gamma)) < 1e-12);
    const double ace_m = ace_from_qtable_strong(QTableStrong::from_flat(m));
    const double ace_mix = lam * ace_from_qtable_strong(QTableStrong::from_flat(a)) +
                           (1 - lam) * ace_from_qtable_strong(QTableStrong::from_flat(b));
    CHECK(std::abs(ace_m - ace_mix) < 1e-12);
  }
}

TEST_CASE("non-strong effects of simple tables") {
  QTableNonStrong uniform;
  for (auto& row : uniform.q) row.fill(1.0 / 64.0);
  const auto u = effects_from_qtable_nonstrong(uniform);
  CHECK(u.ace_ty == doctest::Approx(0.0));
  CHECK(u.gammas.gamma0 == doctest::Approx(0.0));
  CHECK(u.gammas.gamma1 == doctest::Approx(0.0));

  QTableNonStrong responder;
  responder(5, 1) = 1.0;
  const auto r = effects_from_qtable_nonstrong(responder);
  CHECK(r.gammas.gamma0 == 1.0);
  CHECK(r.gammas.gamma1 == 1.0);
  CHECK(r.ace_ty == 1.0);
}

TEST_CASE("non-strong maps match a 64-stratum brute force") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 1000; ++it) {
    const auto q = oracle::sparse_dirichlet<64>(rng, 0.4);
    const auto ref = oracle::summarize_nonstrong(q);
    const auto e = effects_from_qtable_nonstrong(QTableNonStrong::from_flat(q));
    CHECK(e.ace_ty == doctest::Approx(ref.ace).epsilon(1e-12));
    CHECK(e.gammas.gamma0 == doctest::Approx(ref.gamma0).epsilon(1e-12));
    CHECK(e.gammas.gamma1 == doctest::Approx(ref.gamma1).epsilon(1e-12));
    CHECK(e.law.p00 == doctest::Approx(ref.p[0][0]).epsilon(1e-12));
    CHECK(e.law.p10 == doctest::Approx(ref.p[1][0]).epsilon(1e-12));
    CHECK(e.law.p01 == doctest::Approx(ref.p[0][1]).epsilon(1e-12));
    CHECK(e.law.p11 == doctest::Approx(ref.p[1][1]).epsilon(1e-12));
    CHECK(e.law.s1_treated == doctest::Approx(ref.s1_treated).epsilon(1e-12));
  }
}

TEST_CASE("non-strong row encodings match the definitions") {
  const auto& rows = nonstrong_rows();
  for (int k = 0; k < 64; ++k) {
    const auto t = oracle::nonstrong_type(k);
    const int yc = t.y(0, t.s0);
    CHECK(rows.p00[k] == (yc == 0 && t.s0 == 0));
    CHECK(rows.p10[k] == (yc == 1 && t.s0 == 0));
    CHECK(rows.p01[k] == (yc == 0 && t.s0 == 1));
    CHECK(rows.s0_treated[k] == (t.s1 == 0));
    CHECK(rows.gamma0[k] == t.y01 - t.y00);
    CHECK(rows.gamma1[k] == t.y11 - t.y10);
    CHECK(rows.ones[k] == 1.0);
    CHECK(rows.py1_control[k] == yc);
    CHECK(rows.ace[k] == t.y(1, t.s1) - yc);
  }
}

TEST_CASE("table validation") {
  std::array<double, 16> q{};
  q[0] = 1.0;
  CHECK_NOTHROW(validate_table(q));
  q[1] = -0.1;
  q[0] = 1.1;
  CHECK_THROWS_AS(validate_table(q), Error);
  q[1] = 0.0;
  q[0] = 0.9;
  CHECK_THROWS_AS(validate_table(q), Error);
}

TEST_CASE("gamma specifications") {
  CHECK(GammaSpec::point(Scale::Difference, 0.3).form() == GammaForm::Point);
  CHECK_THROWS_AS(GammaSpec::point(Scale::Difference, 1.5), Error);
  CHECK_THROWS_AS(GammaSpec::point(Scale::RelativeRisk, 0.0), Error);
  CHECK_NOTHROW(GammaSpec::point(Scale::RelativeRisk, 3.0));
  CHECK_THROWS_AS(GammaSpec::interval(Scale::Difference, 0.4, 0.2), Error);
  const auto open = GammaSpec::interval(Scale::Difference, 0.2, std::nullopt);
  CHECK_FALSE(open.hi().has_value());
  const auto sign = GammaSpec::sign_positive(Scale::RelativeRisk);
  CHECK(sign.lo() == 1.0);
  CHECK(GammaSpec::sign_positive(Scale::Difference).lo() == 0.0);
}

TEST_CASE("threshold comparison is three-valued") {
  CHECK(compare_to_threshold(0.5, 0.4) == Verdict::Excluded);
  CHECK(compare_to_threshold(0.3, 0.4) == Verdict::NotExcludable);
  CHECK(compare_to_threshold(0.4, 0.4) == Verdict::Boundary);
  CHECK(compare_to_threshold(0.4 + 1e-13, 0.4) == Verdict::Boundary);
}

TEST_CASE("term argmax and argmin break ties to the lowest index") {
  const TermList t{{"a", 1.0}, {"b", 3.0}, {"c", 3.0}, {"d", -1.0}};
  CHECK(argmax_term(t) == 1);
  CHECK(argmin_term(t) == 3);
}
