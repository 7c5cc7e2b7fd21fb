#include "surrbound/derive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <thread>

#include "surrbound/lp.hpp"

namespace surrbound {
namespace {

constexpr double kSingularPivot = 1e-10;

// Solves M x = r in place; returns false when M is singular.
bool solve_square(std::vector<std::vector<double>>& M, std::vector<double>& r) {
  const std::size_t k = r.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < k; ++i) {
      if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
    }
    if (std::abs(M[piv][col]) < kSingularPivot) return false;
    std::swap(M[piv], M[col]);
    std::swap(r[piv], r[col]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == col) continue;
      const double f = M[i][col] / M[col][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < k; ++j) M[i][j] -= f * M[col][j];
      r[i] -= f * r[col];
    }
  }
  for (std::size_t i = 0; i < k; ++i) r[i] /= M[i][i];
  return true;
}

bool solve_square(std::vector<std::vector<Rational>>& M, std::vector<Rational>& r) {
  const std::size_t k = r.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = k;
    for (std::size_t i = col; i < k; ++i) {
      if (M[i][col] != 0) {
        piv = i;
        break;
      }
    }
    if (piv == k) return false;
    std::swap(M[piv], M[col]);
    std::swap(r[piv], r[col]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == col || M[i][col] == 0) continue;
      const Rational f = M[i][col] / M[col][col];
      for (std::size_t j = col; j < k; ++j) M[i][j] -= f * M[col][j];
      r[i] -= f * r[col];
    }
  }
  for (std::size_t i = 0; i < k; ++i) r[i] /= M[i][i];
  return true;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t m = idx.size();
  std::size_t i = m;
  while (i > 0) {
    --i;
    if (idx[i] < n - m + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

struct Candidate {
  std::vector<double> p;
  std::vector<Rational> exact;
};

std::vector<Candidate> scan(const DualPolyhedron& poly, const EnumerateOptions& opts,
                            unsigned worker, unsigned workers) {
  const std::size_t n = poly.n();
  const std::size_t m = poly.m();
  std::vector<Candidate> out;
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::uint64_t counter = 0;

  std::vector<std::vector<Rational>> a_exact;
  std::vector<Rational> c_exact;
  if (opts.exact) {
    for (const auto& row : poly.a_transpose) a_exact.emplace_back(row.begin(), row.end());
    c_exact.assign(poly.c.begin(), poly.c.end());
  }

  do {
    if (counter++ % workers != worker) continue;
    if (opts.exact) {
      std::vector<std::vector<Rational>> M(m);
      std::vector<Rational> r(m);
      for (std::size_t k = 0; k < m; ++k) {
        M[k] = a_exact[idx[k]];
        r[k] = c_exact[idx[k]];
      }
      if (!solve_square(M, r)) continue;
      bool ok = true;
      for (std::size_t row = 0; row < n && ok; ++row) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < m; ++j) lhs += a_exact[row][j] * r[j];
        ok = lhs <= c_exact[row];
      }
      if (!ok) continue;
      Candidate cand;
      for (const auto& v : r) cand.p.push_back(to_double(v));
      cand.exact = std::move(r);
      out.push_back(std::move(cand));
    } else {
      std::vector<std::vector<double>> M(m);
      std::vector<double> r(m);
      for (std::size_t k = 0; k < m; ++k) {
        M[k] = poly.a_transpose[idx[k]];
        r[k] = poly.c[idx[k]];
      }
      if (!solve_square(M, r)) continue;
      bool ok = true;
      for (std::size_t row = 0; row < n && ok; ++row) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < m; ++j) lhs += poly.a_transpose[row][j] * r[j];
        ok = lhs <= poly.c[row] + opts.tolerance;
      }
      if (!ok) continue;
      for (auto& v : r) {
        if (std::abs(v) < 1e-15) v = 0.0;
      }
      out.push_back({std::move(r), {}});
    }
  } while (next_combination(idx, n));
  return out;
}

bool within(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

bool lex_less(const SymbolicBoundExpr& a, const SymbolicBoundExpr& b) {
  return a.coeffs < b.coeffs;
}

// Keeps the first of every group of coefficient vectors equal within tol.
std::vector<SymbolicBoundExpr> dedupe_sorted(std::vector<SymbolicBoundExpr> in, double tol) {
  std::sort(in.begin(), in.end(), lex_less);
  std::vector<SymbolicBoundExpr> out;
  for (auto& e : in) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const SymbolicBoundExpr& k) {
      if (e.exact && k.exact) return *e.exact == *k.exact;
      return within(e.coeffs, k.coeffs, tol);
    });
    if (!dup) out.push_back(std::move(e));
  }
  return out;
}

std::array<double, 16> sparse_dirichlet16(std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0);
  std::bernoulli_distribution keep(0.6);
  std::array<double, 16> q{};
  double s = 0.0;
  while (s <= 0.0) {
    for (auto& v : q) {
      v = keep(rng) ? g(rng) : 0.0;
      s += v;
    }
  }
  for (auto& v : q) v /= s;
  return q;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t m) {
  if (m > n) return 0;
  m = std::min(m, n - m);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    r = r * (n - m + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<SymbolicBoundExpr> enumerate_dual_vertices(const DualPolyhedron& poly,
                                                       const EnumerateOptions& opts) {
  const std::size_t n = poly.n();
  const std::size_t m = poly.m();
  if (m == 0 || n <= m || poly.c.size() != n) {
    throw Error(ErrorCode::InvalidTable, "dual polyhedron needs n > m > 0 and |c| = n");
  }
  for (const auto& row : poly.a_transpose) {
    if (row.size() != m) throw Error(ErrorCode::InvalidTable, "ragged dual normal matrix");
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidTable, "non-finite dual normal");
    }
  }
  for (double v : poly.c) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidTable, "non-finite dual bound");
  }
  if (m > 8) {
    throw Error(ErrorCode::TooManyCombinations, "vertex enumeration supports m <= 8");
  }
  const std::uint64_t count = binomial(n, m);
  if (count > opts.budget) {
    throw Error(ErrorCode::TooManyCombinations,
                "C(" + std::to_string(n) + "," + std::to_string(m) + ") = " +
                    std::to_string(count) + " exceeds the budget");
  }

  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::vector<Candidate>> parts(workers);
  if (workers == 1) {
    parts[0] = scan(poly, opts, 0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { parts[w] = scan(poly, opts, w, workers); });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<SymbolicBoundExpr> all;
  for (auto& part : parts) {
    for (auto& c : part) {
      SymbolicBoundExpr e;
      e.coeffs = std::move(c.p);
      if (opts.exact) e.exact = std::move(c.exact);
      all.push_back(std::move(e));
    }
  }
  if (all.empty()) throw Error(ErrorCode::EmptyPolyhedron, "dual polyhedron has no vertex");
  if (opts.exact) {
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return *a.exact < *b.exact;
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const auto& a, const auto& b) { return *a.exact == *b.exact; }),
              all.end());
    std::sort(all.begin(), all.end(), lex_less);
    return all;
  }
  return dedupe_sorted(std::move(all), opts.tolerance);
}

double evaluate(const SymbolicBoundExpr& expr, const std::vector<double>& basis_values) {
  double v = 0.0;
  for (std::size_t i = 0; i < expr.coeffs.size(); ++i) v += expr.coeffs[i] * basis_values[i];
  return v;
}

std::vector<SymbolicBoundExpr> prune_redundant(std::vector<SymbolicBoundExpr> exprs,
                                               const DomainSampler& sampler, BoundSide side,
                                               const PruneOptions& opts) {
  if (exprs.empty()) return exprs;
  exprs = dedupe_sorted(std::move(exprs), opts.tolerance);
  const std::size_t E = exprs.size();
  if (E == 1) return exprs;

  // achievers_of[e]: samples where e is within tolerance of the envelope.
  std::vector<std::vector<std::uint32_t>> achievers_of(E);
  std::vector<std::uint32_t> achiever_count(opts.samples, 0);
  std::mt19937_64 rng(opts.seed);
  std::vector<double> vals(E);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    const auto basis = sampler(rng);
    double env = side == BoundSide::Lower ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < E; ++e) {
      vals[e] = evaluate(exprs[e], basis);
      env = side == BoundSide::Lower ? std::max(env, vals[e]) : std::min(env, vals[e]);
    }
    for (std::size_t e = 0; e < E; ++e) {
      if (std::abs(vals[e] - env) <= opts.tolerance) {
        achievers_of[e].push_back(static_cast<std::uint32_t>(s));
        ++achiever_count[s];
      }
    }
  }

  std::vector<bool> keep(E, true);
  for (std::size_t e = 0; e < E; ++e) {
    const bool removable = std::all_of(achievers_of[e].begin(), achievers_of[e].end(),
                                       [&](std::uint32_t s) { return achiever_count[s] >= 2; });
    if (!removable) continue;
    keep[e] = false;
    for (auto s : achievers_of[e]) --achiever_count[s];
  }
  std::vector<SymbolicBoundExpr> out;
  for (std::size_t e = 0; e < E; ++e) {
    if (keep[e]) out.push_back(std::move(exprs[e]));
  }
  return out;
}

std::string render_expression(const SymbolicBoundExpr& expr, const SymbolicBasis& basis,
                              bool ascii) {
  const std::string minus = ascii ? "-" : "−";
  const std::string times = ascii ? "*" : "·";
  std::vector<int> order;
  if (basis.gamma_index >= 0) order.push_back(basis.gamma_index);
  for (int i = 0; i < static_cast<int>(expr.coeffs.size()); ++i) {
    if (i != basis.gamma_index && i != basis.constant_index) order.push_back(i);
  }
  if (basis.constant_index >= 0) order.push_back(basis.constant_index);

  std::string out;
  for (int i : order) {
    if (i >= static_cast<int>(expr.coeffs.size())) continue;
    const double c = std::round(expr.coeffs[i] * 1e9) / 1e9;
    if (c == 0.0) continue;
    const double mag = std::abs(c);
    const bool constant = i == basis.constant_index;
    std::string term;
    if (constant) {
      term = format_number(mag);
    } else if (mag == 1.0) {
      term = basis.names[i];
    } else {
      term = format_number(mag) + times + basis.names[i];
    }
    if (out.empty()) {
      out = (c < 0 ? minus : "") + term;
    } else {
      out += (c < 0 ? " " + minus + " " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

std::vector<double> strong_basis_values(const ObservedLaw& law, double gamma) {
  return {law.p00, law.p10, law.p01, law.s0_treated(), gamma, 1.0};
}

std::vector<double> reduced_basis_values(double py1_control, double s1_treated,
                                         double gamma1) {
  return {1.0 - s1_treated, gamma1, 1.0, py1_control};
}

SymbolicSystem strong_symbolic_system() {
  SymbolicSystem sys;
  for (const auto& row : strong_constraint_matrix()) sys.eq_matrix.emplace_back(row.begin(), row.end());
  const auto& ace = strong_ace_coefficients();
  sys.objective.assign(ace.begin(), ace.end());
  sys.basis.names = {"P(Y=0,S=0|T=0)", "P(Y=1,S=0|T=0)", "P(Y=0,S=1|T=0)",
                     "P(S=0|T=1)",     "γ",         "1"};
  sys.basis.gamma_index = 4;
  sys.basis.constant_index = 5;
  sys.sampler = [](std::mt19937_64& rng) {
    const auto q = sparse_dirichlet16(rng);
    const auto obs = observables_from_qtable_strong(QTableStrong::from_flat(q));
    return strong_basis_values(obs.law, obs.gamma);
  };
  return sys;
}

SymbolicSystem reduced_nonstrong_symbolic_system() {
  const auto lp = build_reduced_nonstrong_system(0.0, 0.0, 0.0);
  SymbolicSystem sys;
  sys.eq_matrix = lp.eq_matrix;
  sys.objective = lp.objective;
  sys.constant_coeffs = {-1.0};
  sys.basis.names = {"P(S=0|T=1)", "γ1", "1", "P(Y=1|T=0)"};
  sys.basis.gamma_index = 1;
  sys.basis.constant_index = 2;
  sys.sampler = [](std::mt19937_64& rng) {
    std::gamma_distribution<double> g(1.0);
    std::bernoulli_distribution keep(0.6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::array<double, 8> q{};
    double s = 0.0;
    while (s <= 0.0) {
      for (auto& v : q) {
        v = keep(rng) ? g(rng) : 0.0;
        s += v;
      }
    }
    double s0 = 0.0, gamma1 = 0.0;
    for (int y10 = 0; y10 < 2; ++y10) {
      for (int y11 = 0; y11 < 2; ++y11) {
        for (int s1 = 0; s1 < 2; ++s1) {
          const double w = q[reduced_index(y10, y11, s1)] / s;
          if (s1 == 0) s0 += w;
          gamma1 += (y11 - y10) * w;
        }
      }
    }
    return std::vector<double>{std::clamp(s0, 0.0, 1.0), std::clamp(gamma1, -1.0, 1.0), 1.0,
                               unit(rng)};
  };
  return sys;
}

DualPolyhedron dual_of(const SymbolicSystem& sys, BoundSide side) {
  const std::size_t m = sys.eq_matrix.size();
  const std::size_t n = sys.objective.size();
  DualPolyhedron poly;
  poly.a_transpose.assign(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) poly.a_transpose[j][i] = sys.eq_matrix[i][j];
  }
  poly.c = sys.objective;
  if (side == BoundSide::Upper) {
    for (auto& v : poly.c) v = -v;
  }
  return poly;
}

double DerivedBounds::value_at(const std::vector<double>& basis_values) const {
  double env = side == BoundSide::Lower ? -std::numeric_limits<double>::infinity()
                                        : std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    const double v = evaluate(t, basis_values);
    env = side == BoundSide::Lower ? std::max(env, v) : std::min(env, v);
  }
  return env;
}

DerivedBounds derive_bounds(const SymbolicSystem& sys, BoundSide side,
                            const DeriveOptions& opts) {
  DerivedBounds out;
  out.side = side;
  out.basis = sys.basis;
  auto vertices = enumerate_dual_vertices(dual_of(sys, side), opts.enumerate);
  const double flip = side == BoundSide::Upper ? -1.0 : 1.0;
  for (auto& v : vertices) {
    for (auto& c : v.coeffs) c = c == 0.0 ? 0.0 : flip * c;
    if (v.exact && side == BoundSide::Upper) {
      for (auto& c : *v.exact) c = -c;
    }
    for (double k : sys.constant_coeffs) {
      v.coeffs.push_back(k);
      if (v.exact) v.exact->push_back(Rational(k));
    }
  }
  std::sort(vertices.begin(), vertices.end(), lex_less);
  out.vertices = vertices;
  out.terms = opts.do_prune ? prune_redundant(std::move(vertices), sys.sampler, side, opts.prune)
                            : std::move(vertices);
  return out;
}

}  // namespace surrbound
