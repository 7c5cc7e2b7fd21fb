#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "surrbound/law.hpp"
#include "surrbound/simplex.hpp"

namespace surrbound {

/// {p : a_transpose p <= c}; a_transpose is n x m.
struct DualPolyhedron {
  std::vector<std::vector<double>> a_transpose;
  std::vector<double> c;

  std::size_t n() const { return a_transpose.size(); }
  std::size_t m() const { return a_transpose.empty() ? 0 : a_transpose.front().size(); }
};

/// Affine form coeffs . basis over a named symbolic basis.
struct SymbolicBoundExpr {
  std::vector<double> coeffs;
  /// Exact coordinates when enumerated with rational arithmetic.
  std::optional<std::vector<Rational>> exact;
};

/// Names of the symbolic quantities; render order puts gamma first and 1 last.
struct SymbolicBasis {
  std::vector<std::string> names;
  int gamma_index = -1;
  int constant_index = -1;
};

struct EnumerateOptions {
  std::uint64_t budget = 10'000'000;
  bool exact = false;
  unsigned workers = 1;
  double tolerance = 1e-9;
};

/// Number of m-subsets of n items, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t m);

/**
 * Vertices of the dual polyhedron by basis enumeration over all m-subsets of
 * the n inequalities. Output is deduplicated and sorted lexicographically; it
 * does not depend on the worker count. Throws TooManyCombinations when m > 8
 * or C(n, m) exceeds the budget, InvalidTable when n <= m, EmptyPolyhedron
 * when no vertex exists.
 */
std::vector<SymbolicBoundExpr> enumerate_dual_vertices(const DualPolyhedron& poly,
                                                       const EnumerateOptions& opts = {});

enum class BoundSide { Lower, Upper };

/// Draws one feasible value vector for the basis.
using DomainSampler = std::function<std::vector<double>(std::mt19937_64&)>;

struct PruneOptions {
  std::size_t samples = 100'000;
  std::uint64_t seed = 20240917;
  double tolerance = 1e-9;
};

double evaluate(const SymbolicBoundExpr& expr, const std::vector<double>& basis_values);

/**
 * Drops expressions that never uniquely attain the envelope (max for Lower,
 * min for Upper) on the sampled domain. Survivors are sorted lexicographically.
 */
std::vector<SymbolicBoundExpr> prune_redundant(std::vector<SymbolicBoundExpr> exprs,
                                               const DomainSampler& sampler, BoundSide side,
                                               const PruneOptions& opts = {});

/// Rounds coefficients at 1e-9 and writes "0" for the empty form.
std::string render_expression(const SymbolicBoundExpr& expr, const SymbolicBasis& basis,
                              bool ascii = false);

/**
 * Equality-form LP min/max objective . x + constant over {eq_matrix x = b, x >= 0}
 * with symbolic b. Basis entries past the rows carry the objective constant.
 */
struct SymbolicSystem {
  std::vector<std::vector<double>> eq_matrix;
  std::vector<double> objective;
  std::vector<double> constant_coeffs;
  SymbolicBasis basis;
  DomainSampler sampler;
};

/// Rows (p00, p10, p01, P(S=0|T=1), gamma, 1); samples map random latent tables forward.
SymbolicSystem strong_symbolic_system();
/// Rows (P(S=0|T=1), gamma1, 1) plus P(Y=1|T=0) carrying the constant.
SymbolicSystem reduced_nonstrong_symbolic_system();

std::vector<double> strong_basis_values(const ObservedLaw& law, double gamma);
std::vector<double> reduced_basis_values(double py1_control, double s1_treated, double gamma1);

DualPolyhedron dual_of(const SymbolicSystem& sys, BoundSide side);

struct DeriveOptions {
  EnumerateOptions enumerate;
  PruneOptions prune;
  bool do_prune = true;
};

struct DerivedBounds {
  BoundSide side = BoundSide::Lower;
  SymbolicBasis basis;
  std::vector<SymbolicBoundExpr> vertices;
  std::vector<SymbolicBoundExpr> terms;

  /// Envelope of the terms at the given basis values.
  double value_at(const std::vector<double>& basis_values) const;
};

DerivedBounds derive_bounds(const SymbolicSystem& sys, BoundSide side,
                            const DeriveOptions& opts = {});

}  // namespace surrbound
