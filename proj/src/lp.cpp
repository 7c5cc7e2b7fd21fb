#include "surrbound/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace surrbound {

LpProblem<Rational> to_exact(const LpProblem<double>& p) {
  LpProblem<Rational> out;
  out.direction = p.direction;
  out.objective_constant = Rational(p.objective_constant);
  out.objective.assign(p.objective.begin(), p.objective.end());
  out.eq_rhs.assign(p.eq_rhs.begin(), p.eq_rhs.end());
  out.eq_matrix.reserve(p.eq_matrix.size());
  for (const auto& row : p.eq_matrix) out.eq_matrix.emplace_back(row.begin(), row.end());
  return out;
}

LpSolution<double> to_double(const LpSolution<Rational>& s) {
  LpSolution<double> out;
  out.status = s.status;
  out.value = to_double(s.value);
  out.iterations = s.iterations;
  for (const auto& v : s.point) out.point.push_back(to_double(v));
  for (const auto& v : s.dual) out.dual.push_back(to_double(v));
  return out;
}

namespace {

LpSolution<double> solve(const LpProblem<double>& p, Arithmetic arith) {
  if (arith == Arithmetic::Exact) return to_double(simplex_solve(to_exact(p)));
  return simplex_solve(p);
}

template <std::size_t N>
std::vector<double> to_vec(const std::array<double, N>& a) {
  return {a.begin(), a.end()};
}

}  // namespace

LpBounds lp_bounds(const LpProblem<double>& system, Arithmetic arith) {
  LpProblem<double> p = system;
  p.direction = Direction::Min;
  const auto lo = solve(p, arith);
  p.direction = Direction::Max;
  const auto hi = solve(p, arith);

  LpBounds out;
  if (lo.status == LpStatus::Infeasible || hi.status == LpStatus::Infeasible) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  if (lo.status == LpStatus::Unbounded || hi.status == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.lower = lo.value;
  out.upper = hi.value;
  out.argmin = lo.point;
  out.argmax = hi.point;
  return out;
}

bool lp_feasible(const LpProblem<double>& system) {
  LpProblem<double> p = system;
  std::fill(p.objective.begin(), p.objective.end(), 0.0);
  return simplex_solve(p).status != LpStatus::Infeasible;
}

double max_residual(const LpProblem<double>& system, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < system.num_rows(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += system.eq_matrix[i][j] * x[j];
    worst = std::max(worst, std::abs(lhs - system.eq_rhs[i]));
  }
  return worst;
}

LpProblem<double> build_strong_system(const ObservedLaw& law, double gamma) {
  LpProblem<double> p;
  p.objective = to_vec(strong_ace_coefficients());
  for (const auto& row : strong_constraint_matrix()) p.eq_matrix.push_back(to_vec(row));
  p.eq_rhs = {law.p00, law.p10, law.p01, law.s0_treated(), gamma, 1.0};
  return p;
}

namespace {

LpProblem<double> nonstrong_tail(LpProblem<double> p, double s1_treated,
                                 std::optional<double> gamma0, double gamma1) {
  const auto& r = nonstrong_rows();
  p.eq_matrix.push_back(to_vec(r.s0_treated));
  p.eq_rhs.push_back(1.0 - s1_treated);
  if (gamma0) {
    p.eq_matrix.push_back(to_vec(r.gamma0));
    p.eq_rhs.push_back(*gamma0);
  }
  p.eq_matrix.push_back(to_vec(r.gamma1));
  p.eq_rhs.push_back(gamma1);
  p.eq_matrix.push_back(to_vec(r.ones));
  p.eq_rhs.push_back(1.0);
  return p;
}

}  // namespace

LpProblem<double> build_nonstrong_system(double py1_control, double s1_treated,
                                         std::optional<double> gamma0, double gamma1) {
  const auto& r = nonstrong_rows();
  LpProblem<double> p;
  p.objective = to_vec(r.ace);
  p.eq_matrix.push_back(to_vec(r.py1_control));
  p.eq_rhs.push_back(py1_control);
  return nonstrong_tail(std::move(p), s1_treated, gamma0, gamma1);
}

LpProblem<double> build_nonstrong_system(const ObservedLaw& law, std::optional<double> gamma0,
                                         double gamma1) {
  const auto& r = nonstrong_rows();
  LpProblem<double> p;
  p.objective = to_vec(r.ace);
  p.eq_matrix = {to_vec(r.p00), to_vec(r.p10), to_vec(r.p01)};
  p.eq_rhs = {law.p00, law.p10, law.p01};
  return nonstrong_tail(std::move(p), law.s1_treated, gamma0, gamma1);
}

LpProblem<double> build_reduced_nonstrong_system(double py1_control, double s1_treated,
                                                 double gamma1) {
  LpProblem<double> p;
  p.objective.assign(8, 0.0);
  p.objective_constant = -py1_control;
  std::vector<double> s0_row(8, 0.0), gamma_row(8, 0.0), ones(8, 1.0);
  for (int y10 = 0; y10 < 2; ++y10) {
    for (int y11 = 0; y11 < 2; ++y11) {
      for (int s = 0; s < 2; ++s) {
        const int k = reduced_index(y10, y11, s);
        if (s == 0) s0_row[k] = 1.0;
        gamma_row[k] = y11 - y10;
        p.objective[k] = s == 0 ? y10 : y11;
      }
    }
  }
  p.eq_matrix = {s0_row, gamma_row, ones};
  p.eq_rhs = {1.0 - s1_treated, gamma1, 1.0};
  return p;
}

LpProblem<double> build_crr_system(const ObservedLaw& law, double gamma_crr) {
  LpProblem<double> p = build_strong_system(law, 0.0);
  const auto& y1 = strong_y1_coefficients();
  const auto& y0 = strong_y0_coefficients();
  for (int k = 0; k < 16; ++k) p.eq_matrix[4][k] = y1[k] - gamma_crr * y0[k];
  p.eq_rhs[4] = 0.0;
  p.objective = to_vec(strong_treated_risk_coefficients());
  return p;
}

LpBounds lp_strong_bounds(const ObservedLaw& law, double gamma, Arithmetic arith) {
  return lp_bounds(build_strong_system(law, gamma), arith);
}

LpProblem<double> charnes_cooper(const FractionalProblem& fp) {
  const std::size_t n = fp.numerator.size();
  if (fp.denominator.size() != n) {
    throw Error(ErrorCode::InvalidTable, "fractional numerator/denominator size mismatch");
  }

  LpProblem<double> den;
  den.objective = fp.denominator;
  den.objective_constant = fp.denominator_constant;
  den.eq_matrix = fp.eq_matrix;
  den.eq_rhs = fp.eq_rhs;
  const auto dmin = simplex_solve(den);
  if (dmin.status == LpStatus::Infeasible) {
    throw Error(ErrorCode::InfeasibleInputs, "fractional program has no feasible point");
  }
  if (dmin.status == LpStatus::Unbounded || dmin.value <= 1e-12) {
    throw Error(ErrorCode::DegenerateDenominator,
                "denominator reaches a non-positive value on the feasible set");
  }

  LpProblem<double> lp;
  lp.direction = fp.direction;
  lp.objective = fp.numerator;
  lp.objective.push_back(fp.numerator_constant);
  for (std::size_t i = 0; i < fp.eq_matrix.size(); ++i) {
    std::vector<double> row = fp.eq_matrix[i];
    row.push_back(-fp.eq_rhs[i]);
    lp.eq_matrix.push_back(std::move(row));
    lp.eq_rhs.push_back(0.0);
  }
  std::vector<double> norm = fp.denominator;
  norm.push_back(fp.denominator_constant);
  lp.eq_matrix.push_back(std::move(norm));
  lp.eq_rhs.push_back(1.0);
  return lp;
}

FractionalSolution solve_fractional(const FractionalProblem& fp, Arithmetic arith) {
  const auto lp = charnes_cooper(fp);
  const auto sol = solve(lp, arith);
  FractionalSolution out;
  out.status = sol.status;
  if (sol.status != LpStatus::Optimal) return out;
  out.value = sol.value;
  const double t = sol.point.back();
  out.point.resize(fp.numerator.size());
  for (std::size_t j = 0; j < out.point.size(); ++j) {
    out.point[j] = t > 0.0 ? sol.point[j] / t : 0.0;
  }
  return out;
}

FractionalProblem build_crr_fractional(const ObservedLaw& law, double gamma_crr,
                                       Direction direction) {
  const auto sys = build_crr_system(law, gamma_crr);
  FractionalProblem fp;
  fp.numerator = to_vec(strong_treated_risk_coefficients());
  fp.denominator = to_vec(strong_control_risk_coefficients());
  fp.eq_matrix = sys.eq_matrix;
  fp.eq_rhs = sys.eq_rhs;
  fp.direction = direction;
  return fp;
}

BoundsReport crr_bounds(const ObservedLaw& law, double gamma_crr, Arithmetic arith) {
  validate_observed(law);
  if (!(gamma_crr > 0.0) || !std::isfinite(gamma_crr)) {
    throw Error(ErrorCode::BadGamma, "gamma_crr must be a positive finite number");
  }
  if (!(law.py1_control() > 0.0)) {
    throw Error(ErrorCode::ZeroControlRisk, "P(Y=1|T=0) = 0: CRR(T->Y) is undefined");
  }
  const auto lo = solve_fractional(build_crr_fractional(law, gamma_crr, Direction::Min), arith);
  const auto hi = solve_fractional(build_crr_fractional(law, gamma_crr, Direction::Max), arith);
  if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InfeasibleInputs,
                "no latent table reproduces the law with gamma_crr = " +
                    std::to_string(gamma_crr));
  }
  BoundsReport r;
  r.scale = Scale::RelativeRisk;
  r.lower = lo.value;
  r.upper = hi.value;
  r.witness_lower = lo.point;
  r.witness_upper = hi.point;
  r.threshold = 1.0;
  r.criterion = compare_to_threshold(r.lower, r.threshold);
  return r;
}

}  // namespace surrbound
