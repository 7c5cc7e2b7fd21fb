#pragma once

#include <optional>
#include <vector>

#include "surrbound/law.hpp"
#include "surrbound/report.hpp"
#include "surrbound/simplex.hpp"

namespace surrbound {

enum class Arithmetic { Double, Exact };

/// Min and Max of one objective over one constraint system.
struct LpBounds {
  LpStatus status = LpStatus::Infeasible;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> argmin;
  std::vector<double> argmax;
};

LpBounds lp_bounds(const LpProblem<double>& system, Arithmetic arith = Arithmetic::Double);

/// Phase-1 feasibility of the constraint rows (objective ignored).
bool lp_feasible(const LpProblem<double>& system);

/// Largest |A x - b| over the rows.
double max_residual(const LpProblem<double>& system, const std::vector<double>& x);

// Constraint systems. Every builder returns a Min problem whose objective is
// ACE(T->Y) (plus a constant where needed); callers flip direction for Max.

/// 6 x 16 system, rows (p00, p10, p01, P(S=0|T=1), gamma, 1).
LpProblem<double> build_strong_system(const ObservedLaw& law, double gamma);

/**
 * 64-variable non-strong system. With only P(Y=1|T=0) known, one control
 * row is used; with the full control law, the three control-cell rows are
 * used. The gamma0 row is present only when gamma0 is given. Row order:
 * control rows, P(S=0|T=1), [gamma0], gamma1, 1.
 */
LpProblem<double> build_nonstrong_system(double py1_control, double s1_treated,
                                         std::optional<double> gamma0, double gamma1);
LpProblem<double> build_nonstrong_system(const ObservedLaw& law, std::optional<double> gamma0,
                                         double gamma1);

/// Index of cell (Y10, Y11, S1) in the reduced 8-cell joint.
constexpr int reduced_index(int y10, int y11, int s1) { return y10 * 4 + y11 * 2 + s1; }

/**
 * 8-variable system over the joint of (Y10, Y11, S1): rows P(S1=0), gamma1, 1.
 * Objective P(Y10=1,S1=0) + P(Y11=1,S1=1) - P(Y=1|T=0).
 */
LpProblem<double> build_reduced_nonstrong_system(double py1_control, double s1_treated,
                                                 double gamma1);

/// Constraint rows of the relative-risk problem with the gamma_crr row linearized.
LpProblem<double> build_crr_system(const ObservedLaw& law, double gamma_crr);

LpBounds lp_strong_bounds(const ObservedLaw& law, double gamma,
                          Arithmetic arith = Arithmetic::Double);

/**
 * Maximize or minimize (numerator . x + a) / (denominator . x + b) subject to
 * eq_matrix x = eq_rhs, x >= 0.
 */
struct FractionalProblem {
  std::vector<double> numerator;
  double numerator_constant = 0.0;
  std::vector<double> denominator;
  double denominator_constant = 0.0;
  std::vector<std::vector<double>> eq_matrix;
  std::vector<double> eq_rhs;
  Direction direction = Direction::Max;
};

/**
 * Charnes-Cooper reduction. Variables of the returned LP are (y, t), t last:
 * rows A y - beta t = 0 and denominator . y + b t = 1, with t >= 0.
 * Throws DegenerateDenominator when the denominator can reach 0 on the
 * feasible set and InfeasibleInputs when the set is empty.
 */
LpProblem<double> charnes_cooper(const FractionalProblem& fp);

struct FractionalSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> point;  ///< x = y / t
};

FractionalSolution solve_fractional(const FractionalProblem& fp,
                                    Arithmetic arith = Arithmetic::Double);

/// Relative-risk fractional problem for CRR(T->Y) under the strong model.
FractionalProblem build_crr_fractional(const ObservedLaw& law, double gamma_crr,
                                       Direction direction);

/**
 * Sharp bounds on CRR(T->Y) given the observed law and CRR(S->Y).
 * Excluded iff the lower bound exceeds 1. Witnesses are filled.
 */
BoundsReport crr_bounds(const ObservedLaw& law, double gamma_crr,
                        Arithmetic arith = Arithmetic::Double);

}  // namespace surrbound
