#include "surrbound/trial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "surrbound/bounds.hpp"

namespace surrbound {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(trim(f));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

int parse_binary(const std::string& field, const std::string& source, int line_no,
                 const std::string& column) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw Error(ErrorCode::MalformedRow, source + ":" + std::to_string(line_no) + ": column " +
                                           column + " value '" + field + "' is not 0 or 1");
}

// Returns the data rows of a CSV with the required header, with their line numbers.
std::vector<std::pair<int, std::vector<std::string>>> read_rows(std::istream& in,
                                                                const std::string& source,
                                                                const std::string& header) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!have_header) {
      std::string compact;
      for (char c : t) {
        if (c != ' ' && c != '\t') compact += c;
      }
      if (compact != header) {
        throw Error(ErrorCode::BadHeader, source + ":" + std::to_string(line_no) +
                                              ": expected header '" + header + "', got '" + t +
                                              "'");
      }
      have_header = true;
      continue;
    }
    rows.emplace_back(line_no, split_fields(t));
  }
  if (!have_header || rows.empty()) {
    throw Error(ErrorCode::EmptyFile, source + ": no data rows");
  }
  return rows;
}

std::uint64_t draw_binomial(std::mt19937_64& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::uint64_t> d(n, p);
  return d(rng);
}

// Multinomial draw by a chain of conditional binomials.
template <std::size_t K>
std::array<std::uint64_t, K> draw_multinomial(std::mt19937_64& rng, std::uint64_t n,
                                              const std::array<double, K>& p) {
  std::array<std::uint64_t, K> out{};
  double rest = 1.0;
  std::uint64_t left = n;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double cond = rest > 0.0 ? std::clamp(p[k] / rest, 0.0, 1.0) : 0.0;
    out[k] = draw_binomial(rng, left, cond);
    left -= out[k];
    rest -= p[k];
  }
  out[K - 1] = left;
  return out;
}

template <std::size_t K>
std::array<double, K> frequencies(const std::array<std::uint64_t, K>& c) {
  std::uint64_t n = 0;
  for (auto v : c) n += v;
  std::array<double, K> p{};
  for (std::size_t k = 0; k < K; ++k) p[k] = static_cast<double>(c[k]) / static_cast<double>(n);
  return p;
}

std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t r) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  return std::mt19937_64(seq);
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

bool skippable(ErrorCode c) {
  switch (c) {
    case ErrorCode::InfeasibleInputs:
    case ErrorCode::ZeroControlRisk:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::BadGamma:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::uint64_t TrialCounts::n_control() const {
  return control[0] + control[1] + control[2] + control[3];
}

std::uint64_t TrialCounts::n_treated() const { return treated[0] + treated[1]; }

ObservedLaw TrialCounts::law() const {
  if (n_control() == 0 || n_treated() == 0) {
    throw Error(ErrorCode::DegenerateArm, "an arm has no records");
  }
  const double nc = static_cast<double>(n_control());
  ObservedLaw l;
  l.p00 = static_cast<double>(control[0]) / nc;
  l.p01 = static_cast<double>(control[1]) / nc;
  l.p10 = static_cast<double>(control[2]) / nc;
  l.p11 = static_cast<double>(control[3]) / nc;
  l.s1_treated = static_cast<double>(treated[1]) / static_cast<double>(n_treated());
  return l;
}

std::array<std::uint64_t, 4> read_control_csv(std::istream& in, const std::string& source) {
  std::array<std::uint64_t, 4> c{};
  for (const auto& [line_no, f] : read_rows(in, source, "s,y")) {
    if (f.size() != 2) {
      throw Error(ErrorCode::MalformedRow, source + ":" + std::to_string(line_no) +
                                               ": expected 2 fields, got " +
                                               std::to_string(f.size()));
    }
    const int s = parse_binary(f[0], source, line_no, "s");
    const int y = parse_binary(f[1], source, line_no, "y");
    ++c[2 * y + s];
  }
  return c;
}

std::array<std::uint64_t, 2> read_treated_csv(std::istream& in, const std::string& source) {
  std::array<std::uint64_t, 2> c{};
  for (const auto& [line_no, f] : read_rows(in, source, "s")) {
    if (f.size() != 1) {
      throw Error(ErrorCode::MalformedRow, source + ":" + std::to_string(line_no) +
                                               ": expected 1 field, got " +
                                               std::to_string(f.size()));
    }
    ++c[parse_binary(f[0], source, line_no, "s")];
  }
  return c;
}

Ingested ingest(std::istream& control, std::istream& treated, const std::string& control_name,
                const std::string& treated_name) {
  Ingested out;
  out.counts.control = read_control_csv(control, control_name);
  out.counts.treated = read_treated_csv(treated, treated_name);
  out.law = out.counts.law();
  return out;
}

Ingested ingest(const std::filesystem::path& control, const std::filesystem::path& treated) {
  std::ifstream c(control), t(treated);
  if (!c) throw Error(ErrorCode::FileError, "cannot open " + control.string());
  if (!t) throw Error(ErrorCode::FileError, "cannot open " + treated.string());
  return ingest(c, t, control.string(), treated.string());
}

std::string_view to_string(Model m) { return m == Model::Strong ? "strong" : "nonstrong"; }

BoundsReport compute_bounds(const ObservedLaw& law, const BoundsRequest& req) {
  const GammaSpec& g = req.gamma;
  if (req.model == Model::Strong) {
    if (g.scale() == Scale::Difference) {
      return strong_bounds_for(law, g, {req.strict_feasibility, req.with_witness});
    }
    if (g.form() != GammaForm::Point) {
      throw Error(ErrorCode::WrongScale, "relative-risk bounds need a point gamma_crr");
    }
    return crr_bounds(law, g.lo(), req.arithmetic);
  }
  if (g.scale() != Scale::Difference) {
    throw Error(ErrorCode::WrongScale, "the non-strong model supports the ace scale only");
  }
  validate_observed(law);
  if (g.form() == GammaForm::Point) {
    return nonstrong_bounds(law.py1_control(), law.s1_treated, g.lo(), req.strict_feasibility);
  }
  return nonstrong_bounds_for(law.py1_control(), law.s1_treated, g);
}

void require_closed_form_feasible(const ObservedLaw& law, const BoundsRequest& req) {
  if (req.model != Model::Strong || req.gamma.scale() != Scale::Difference ||
      req.gamma.form() != GammaForm::Point) {
    return;
  }
  const auto range = strong_feasible_gamma(law);
  const double g = req.gamma.lo();
  if (g < range.lo - kVerdictTol || g > range.hi + kVerdictTol) {
    throw Error(ErrorCode::InfeasibleInputs, "gamma outside the range compatible with the law");
  }
}

double ExternalStudyCounts::gamma(Scale scale) const {
  if (n_s0 == 0 || n_s1 == 0 || y1_s0 > n_s0 || y1_s1 > n_s1) {
    throw Error(ErrorCode::DegenerateArm, "external study counts are empty or inconsistent");
  }
  const double r0 = static_cast<double>(y1_s0) / static_cast<double>(n_s0);
  const double r1 = static_cast<double>(y1_s1) / static_cast<double>(n_s1);
  if (scale == Scale::Difference) return r1 - r0;
  if (!(r0 > 0.0)) {
    throw Error(ErrorCode::BadGamma, "external study has no events at S=0; CRR undefined");
  }
  return r1 / r0;
}

double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::BadRange, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

UncertaintyRegion region_from_replicates(std::vector<double> lowers, std::vector<double> uppers,
                                         double alpha) {
  UncertaintyRegion r;
  r.used = lowers.size();
  r.sd_lower = sample_sd(lowers);
  r.sd_upper = sample_sd(uppers);
  r.lowers = lowers;
  r.uppers = uppers;
  std::sort(lowers.begin(), lowers.end());
  std::sort(uppers.begin(), uppers.end());
  r.lo = quantile_type7(lowers, alpha / 2.0);
  r.hi = quantile_type7(uppers, 1.0 - alpha / 2.0);
  return r;
}

UncertaintyRegion bootstrap_region(const TrialCounts& counts, const BoundsRequest& request,
                                   const BootstrapConfig& cfg) {
  if (cfg.replicates < 1) throw Error(ErrorCode::BadRange, "bootstrap needs B >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw Error(ErrorCode::BadRange, "alpha must lie in (0,1)");
  }
  if (counts.n_control() == 0 || counts.n_treated() == 0) {
    throw Error(ErrorCode::DegenerateArm, "bootstrap needs records in both arms");
  }
  const bool resample_gamma = cfg.gamma_treatment == GammaTreatment::ResampledFromCounts;
  if (resample_gamma && (!cfg.external || request.gamma.form() != GammaForm::Point)) {
    throw Error(ErrorCode::BadGamma, "resampled gamma needs external counts and a point gamma");
  }
  if (resample_gamma) cfg.external->gamma(request.gamma.scale());

  const auto pc = frequencies(counts.control);
  const auto pt = frequencies(counts.treated);
  const std::size_t B = cfg.replicates;
  std::vector<double> lo(B), hi(B);
  std::vector<char> ok(B, 0);

  auto one = [&](std::size_t r) {
    auto rng = replicate_stream(cfg.seed, r);
    TrialCounts rc;
    rc.control = draw_multinomial(rng, counts.n_control(), pc);
    rc.treated = draw_multinomial(rng, counts.n_treated(), pt);
    if (rc.n_control() == 0 || rc.n_treated() == 0) {
      throw Error(ErrorCode::DegenerateArm, "resampled arm has no records");
    }
    BoundsRequest req = request;
    req.with_witness = false;
    req.strict_feasibility = false;
    try {
      if (resample_gamma) {
        const auto& e = *cfg.external;
        ExternalStudyCounts x = e;
        x.y1_s0 = draw_binomial(rng, e.n_s0, static_cast<double>(e.y1_s0) / e.n_s0);
        x.y1_s1 = draw_binomial(rng, e.n_s1, static_cast<double>(e.y1_s1) / e.n_s1);
        req.gamma = GammaSpec::point(request.gamma.scale(), x.gamma(request.gamma.scale()));
      }
      const ObservedLaw law = rc.law();
      require_closed_form_feasible(law, req);
      const auto rep = compute_bounds(law, req);
      lo[r] = rep.lower;
      hi[r] = rep.upper;
      ok[r] = 1;
    } catch (const Error& e) {
      if (!skippable(e.code())) throw;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, B));
  if (workers == 1) {
    for (std::size_t r = 0; r < B; ++r) one(r);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < B; r += workers) one(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<double> lowers, uppers;
  for (std::size_t r = 0; r < B; ++r) {
    if (!ok[r]) continue;
    lowers.push_back(lo[r]);
    uppers.push_back(hi[r]);
  }
  if (lowers.empty()) {
    throw Error(ErrorCode::AllReplicatesInfeasible,
                "all " + std::to_string(B) + " bootstrap replicates were infeasible");
  }
  UncertaintyRegion region = region_from_replicates(std::move(lowers), std::move(uppers),
                                                    cfg.alpha);
  region.skipped = B - region.used;
  if (2 * region.skipped > B) {
    region.warning = std::to_string(region.skipped) + " of " + std::to_string(B) +
                     " replicates were infeasible and skipped";
  }
  return region;
}

TrialCounts sample_counts(const ObservedLaw& law, std::uint64_t n_control,
                          std::uint64_t n_treated, std::uint64_t seed) {
  validate_observed(law);
  std::mt19937_64 rng(seed);
  TrialCounts c;
  c.control = draw_multinomial<4>(rng, n_control, {law.p00, law.p01, law.p10, law.p11});
  c.treated = draw_multinomial<2>(rng, n_treated, {law.s0_treated(), law.s1_treated});
  return c;
}

}  // namespace surrbound
