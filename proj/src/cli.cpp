#include "surrbound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "surrbound/bounds.hpp"
#include "surrbound/derive.hpp"
#include "surrbound/dgp.hpp"
#include "surrbound/lp.hpp"
#include "surrbound/trial.hpp"

namespace surrbound {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "surrbound/1";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadGamma:
    case ErrorCode::BadRange:
    case ErrorCode::WrongScale:
    case ErrorCode::TooManyCombinations:
      return kExitUsage;
    case ErrorCode::InfeasibleInputs:
    case ErrorCode::AllReplicatesInfeasible:
      return kExitInfeasible;
    case ErrorCode::NumericalBreakdown:
      return kExitFailure;
    default:
      return kExitData;
  }
}

// Re-raises a library error with the name of the flag that supplied the value.
[[noreturn]] void rethrow_for(const std::string& flag, const Error& e) {
  throw Error(e.code(), flag + ": " + e.what());
}

struct Options {
  std::string control;
  std::string treated;
  std::string law_json;
  bool renormalize = false;
  double gamma = 0.0;
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  bool gamma_sign = false;
  std::string model = "strong";
  std::string scale = "ace";
  bool strict = false;
  bool exact = false;
  bool witness = false;
  std::string format = "text";

  CLI::Option* gamma_opt = nullptr;
  CLI::Option* gamma_lo_opt = nullptr;
  CLI::Option* gamma_hi_opt = nullptr;
};

void add_data_options(CLI::App* app, Options& o) {
  app->add_option("--control", o.control, "control-arm CSV with header s,y");
  app->add_option("--treated", o.treated, "treated-arm CSV with header s");
  app->add_option("--law", o.law_json,
                  "inline JSON law {\"p00\",\"p10\",\"p01\",\"p11\",\"s1\"} or {\"py1\",\"s1\"}");
  app->add_flag("--renormalize", o.renormalize, "rescale control cells to sum to one");
}

void add_gamma_options(CLI::App* app, Options& o) {
  o.gamma_opt = app->add_option("--gamma", o.gamma, "point value of the S->Y effect");
  o.gamma_lo_opt = app->add_option("--gamma-lo", o.gamma_lo, "lower end of a gamma interval");
  o.gamma_hi_opt = app->add_option("--gamma-hi", o.gamma_hi, "upper end (omit for unbounded)");
  app->add_flag("--gamma-sign", o.gamma_sign, "gamma known only to be positive");
  app->add_option("--model", o.model, "strong | nonstrong")
      ->check(CLI::IsMember({"strong", "nonstrong"}));
  app->add_option("--scale", o.scale, "ace | crr")->check(CLI::IsMember({"ace", "crr"}));
}

void add_format_option(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
}

Scale scale_of(const Options& o) { return o.scale == "crr" ? Scale::RelativeRisk : Scale::Difference; }
Model model_of(const Options& o) { return o.model == "nonstrong" ? Model::NonStrong : Model::Strong; }

GammaSpec gamma_spec(const Options& o) {
  const int forms = static_cast<int>(o.gamma_opt->count() > 0) +
                    static_cast<int>(o.gamma_lo_opt->count() > 0) +
                    static_cast<int>(o.gamma_sign);
  if (forms != 1) {
    throw UsageError("give exactly one of --gamma, --gamma-lo [--gamma-hi], --gamma-sign");
  }
  if (o.gamma_hi_opt->count() > 0 && o.gamma_lo_opt->count() == 0) {
    throw UsageError("--gamma-hi needs --gamma-lo");
  }
  const Scale s = scale_of(o);
  try {
    if (o.gamma_opt->count() > 0) return GammaSpec::point(s, o.gamma);
    if (o.gamma_sign) return GammaSpec::sign_positive(s);
    std::optional<double> hi;
    if (o.gamma_hi_opt->count() > 0) hi = o.gamma_hi;
    return GammaSpec::interval(s, o.gamma_lo, hi);
  } catch (const Error& e) {
    rethrow_for(o.gamma_opt->count() > 0 ? "--gamma" : "--gamma-lo/--gamma-hi", e);
  }
}

struct LoadedData {
  ObservedLaw law;
  std::optional<TrialCounts> counts;
  bool py1_only = false;
};

ObservedLaw law_from_json(const std::string& text, bool& py1_only) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("--law: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("--law: expected a JSON object");
  auto num = [&](const char* key) -> double {
    if (!j.contains(key)) throw UsageError(std::string("--law: missing key \"") + key + "\"");
    if (!j[key].is_number()) {
      throw UsageError(std::string("--law: key \"") + key + "\" must be a number");
    }
    return j[key].get<double>();
  };
  ObservedLaw law;
  law.s1_treated = num("s1");
  if (j.contains("py1") && !j.contains("p00")) {
    py1_only = true;
    const double py1 = num("py1");
    law.p10 = py1;
    law.p00 = 1.0 - py1;
    return law;
  }
  law.p00 = num("p00");
  law.p10 = num("p10");
  law.p01 = num("p01");
  law.p11 = num("p11");
  return law;
}

LoadedData load_data(const Options& o, bool need_counts = false) {
  LoadedData d;
  const bool files = !o.control.empty() || !o.treated.empty();
  if (files && !o.law_json.empty()) throw UsageError("use either --law or --control/--treated");
  if (files) {
    if (o.control.empty()) throw UsageError("--treated needs --control");
    if (o.treated.empty()) throw UsageError("--control needs --treated");
    const auto in = ingest(std::filesystem::path(o.control), std::filesystem::path(o.treated));
    d.law = in.law;
    d.counts = in.counts;
  } else if (!o.law_json.empty()) {
    if (need_counts) throw UsageError("this command needs --control and --treated data files");
    d.law = law_from_json(o.law_json, d.py1_only);
  } else {
    throw UsageError("provide --law or --control and --treated");
  }
  try {
    if (o.renormalize) d.law = renormalized(d.law);
    validate_observed(d.law);
  } catch (const Error& e) {
    rethrow_for(files ? o.control : "--law", e);
  }
  if (d.py1_only && model_of(o) == Model::Strong) {
    throw UsageError("--law with py1 only supports --model nonstrong");
  }
  return d;
}

json law_json(const ObservedLaw& l) {
  return {{"p00", l.p00}, {"p10", l.p10}, {"p01", l.p01}, {"p11", l.p11}, {"s1", l.s1_treated}};
}

json gamma_json(const GammaSpec& g) {
  json j;
  j["scale"] = std::string(to_string(g.scale()));
  switch (g.form()) {
    case GammaForm::Point:
      j["form"] = "point";
      j["value"] = g.lo();
      break;
    case GammaForm::Interval:
      j["form"] = "interval";
      j["lo"] = g.lo();
      j["hi"] = g.hi() ? json(*g.hi()) : json(nullptr);
      break;
    case GammaForm::SignPositive:
      j["form"] = "sign_positive";
      break;
  }
  return j;
}

json terms_json(const TermList& t) {
  json a = json::array();
  for (const auto& x : t) a.push_back({{"label", x.label}, {"value", x.value}});
  return a;
}

json report_json(const BoundsReport& r) {
  json j;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["active_lower_term"] = r.active_lower_label();
  j["active_upper_term"] = r.active_upper_label();
  j["lower_terms"] = terms_json(r.lower_terms);
  j["upper_terms"] = terms_json(r.upper_terms);
  j["verdict"] = std::string(to_string(r.criterion));
  j["threshold"] = r.threshold;
  j["crossed"] = r.crossed();
  if (r.gamma_at_lower) j["gamma_at_lower"] = *r.gamma_at_lower;
  if (r.gamma_at_upper) j["gamma_at_upper"] = *r.gamma_at_upper;
  if (r.witness_lower) j["witness_lower"] = *r.witness_lower;
  if (r.witness_upper) j["witness_upper"] = *r.witness_upper;
  return j;
}

json header_json(const char* command, const Options& o, const LoadedData& d,
                 const GammaSpec* g) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["model"] = o.model;
  j["scale"] = o.scale;
  j["law"] = d.py1_only ? json{{"py1", d.law.py1_control()}, {"s1", d.law.s1_treated}}
                        : law_json(d.law);
  if (g) j["gamma"] = gamma_json(*g);
  if (d.counts) {
    j["n_control"] = d.counts->n_control();
    j["n_treated"] = d.counts->n_treated();
  }
  return j;
}

void print_terms(std::ostream& out, const char* title, const TermList& terms, int active) {
  if (terms.empty()) return;
  out << title << '\n';
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out << "  " << std::left << std::setw(6) << terms[i].label << std::right << std::setw(12)
        << terms[i].value << (static_cast<int>(i) == active ? "  *" : "") << '\n';
  }
}

void print_report(std::ostream& out, const BoundsReport& r) {
  out << std::setprecision(6) << std::fixed;
  const char* what = r.scale == Scale::Difference ? "ACE(T->Y)" : "CRR(T->Y)";
  out << what << " lower " << std::setw(10) << r.lower << "  [" << r.active_lower_label()
      << "]\n";
  out << what << " upper " << std::setw(10) << r.upper << "  [" << r.active_upper_label()
      << "]\n";
  if (r.crossed()) out << "warning: lower > upper; inputs are inconsistent\n";
  if (r.gamma_at_lower) out << "gamma at lower " << *r.gamma_at_lower << '\n';
  if (r.gamma_at_upper) out << "gamma at upper " << *r.gamma_at_upper << '\n';
  out << "threshold " << r.threshold << "  verdict " << to_string(r.criterion) << '\n';
  print_terms(out, "lower terms", r.lower_terms, r.active_lower_term);
  print_terms(out, "upper terms", r.upper_terms, r.active_upper_term);
  out.unsetf(std::ios::floatfield);
}

BoundsRequest request_for(const Options& o, const GammaSpec& g) {
  BoundsRequest req;
  req.model = model_of(o);
  req.gamma = g;
  req.strict_feasibility = o.strict;
  req.with_witness = o.witness;
  req.arithmetic = o.exact ? Arithmetic::Exact : Arithmetic::Double;
  return req;
}

BoundsReport bounds_with_context(const ObservedLaw& law, const BoundsRequest& req) {
  try {
    return compute_bounds(law, req);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InfeasibleInputs || e.code() == ErrorCode::BadGamma) {
      rethrow_for("--gamma", e);
    }
    if (e.code() == ErrorCode::WrongScale) rethrow_for("--scale/--model", e);
    throw;
  }
}

int run_bounds(const Options& o, std::ostream& out) {
  const GammaSpec g = gamma_spec(o);
  const LoadedData d = load_data(o);
  const BoundsReport r = bounds_with_context(d.law, request_for(o, g));
  if (o.format == "json") {
    json j = header_json("bounds", o, d, &g);
    j.update(report_json(r));
    out << j.dump(2) << '\n';
  } else {
    print_report(out, r);
  }
  return kExitOk;
}

int run_criteria(const Options& o, std::ostream& out) {
  const GammaSpec g = gamma_spec(o);
  const LoadedData d = load_data(o);
  CriterionResult c;
  std::string quantity;
  try {
    if (g.scale() == Scale::RelativeRisk) {
      const auto r = bounds_with_context(d.law, request_for(o, g));
      c = {r.criterion, r.threshold};
      quantity = "lower CRR(T->Y) bound";
    } else if (model_of(o) == Model::Strong) {
      c = strong_criterion(d.law, g);
      quantity = "gamma";
    } else {
      c = nonstrong_criterion(d.law.py1_control(), d.law.s1_treated, g);
      quantity = "gamma1";
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::WrongScale) rethrow_for("--scale", e);
    throw;
  }
  if (o.format == "json") {
    json j = header_json("criteria", o, d, &g);
    j["verdict"] = std::string(to_string(c.verdict));
    j["threshold"] = c.threshold;
    j["compared_quantity"] = quantity;
    out << j.dump(2) << '\n';
  } else {
    out << std::setprecision(6) << std::fixed << "threshold " << c.threshold << '\n'
        << "verdict " << to_string(c.verdict) << "  (" << quantity << " vs threshold)\n";
    out.unsetf(std::ios::floatfield);
  }
  return kExitOk;
}

struct BootstrapOptions {
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::string gamma_counts;
};

ExternalStudyCounts parse_gamma_counts(const std::string& text) {
  std::vector<std::uint64_t> v;
  std::stringstream ss(text);
  std::string f;
  while (std::getline(ss, f, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoull(f, &used));
      if (used != f.size()) throw std::invalid_argument(f);
    } catch (const std::exception&) {
      throw UsageError("--gamma-counts: '" + f + "' is not a non-negative integer");
    }
  }
  if (v.size() != 4) throw UsageError("--gamma-counts expects n_s0,y1_s0,n_s1,y1_s1");
  return {v[0], v[1], v[2], v[3]};
}

int run_bootstrap(const Options& o, const BootstrapOptions& b, std::ostream& out,
                  std::ostream& err) {
  const GammaSpec g = gamma_spec(o);
  const LoadedData d = load_data(o, true);
  const BoundsRequest req = request_for(o, g);
  BootstrapConfig cfg;
  cfg.replicates = b.replicates;
  cfg.alpha = b.alpha;
  cfg.seed = b.seed;
  cfg.workers = b.workers;
  if (!b.gamma_counts.empty()) {
    cfg.gamma_treatment = GammaTreatment::ResampledFromCounts;
    cfg.external = parse_gamma_counts(b.gamma_counts);
  }
  BoundsRequest point_req = req;
  point_req.with_witness = false;
  const BoundsReport point = bounds_with_context(d.law, point_req);
  UncertaintyRegion region;
  try {
    region = bootstrap_region(*d.counts, req, cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadRange) rethrow_for("--B/--alpha", e);
    throw;
  }
  if (!region.warning.empty()) err << "warning: " << region.warning << '\n';
  if (o.format == "json") {
    json j = header_json("bootstrap", o, d, &g);
    j.update(report_json(point));
    j["uncertainty_region"] = {{"lo", region.lo},
                               {"hi", region.hi},
                               {"sd_lower", region.sd_lower},
                               {"sd_upper", region.sd_upper},
                               {"alpha", cfg.alpha},
                               {"replicates", cfg.replicates},
                               {"seed", cfg.seed},
                               {"gamma_treatment", cfg.external ? "resampled" : "fixed"}};
    j["skipped_replicates"] = region.skipped;
    out << j.dump(2) << '\n';
  } else {
    print_report(out, point);
    out << std::setprecision(6) << std::fixed << "uncertainty region (" << (1.0 - cfg.alpha) * 100
        << "%) [" << region.lo << ", " << region.hi << "]\n"
        << "bootstrap sd lower " << region.sd_lower << "  upper " << region.sd_upper << '\n'
        << "replicates used " << region.used << "  skipped " << region.skipped << '\n';
    out.unsetf(std::ios::floatfield);
  }
  return kExitOk;
}

struct DeriveCliOptions {
  std::string system = "strong";
  std::string direction = "lower";
  bool exact = false;
  bool ascii = false;
  std::size_t samples = 100'000;
  unsigned workers = 1;
  std::string format = "text";
};

int run_derive(const DeriveCliOptions& o, std::ostream& out) {
  const SymbolicSystem sys =
      o.system == "strong" ? strong_symbolic_system() : reduced_nonstrong_symbolic_system();
  const BoundSide side = o.direction == "lower" ? BoundSide::Lower : BoundSide::Upper;
  DeriveOptions opts;
  opts.enumerate.exact = o.exact;
  opts.enumerate.workers = o.workers;
  opts.prune.samples = o.samples;
  const DerivedBounds d = derive_bounds(sys, side, opts);
  if (o.format == "json") {
    json j;
    j["schema"] = kSchema;
    j["command"] = "derive";
    j["system"] = o.system;
    j["direction"] = o.direction;
    j["basis"] = d.basis.names;
    j["vertices"] = d.vertices.size();
    json terms = json::array();
    for (const auto& t : d.terms) {
      terms.push_back({{"coeffs", t.coeffs}, {"text", render_expression(t, d.basis, o.ascii)}});
    }
    j["terms"] = terms;
    out << j.dump(2) << '\n';
  } else {
    out << (side == BoundSide::Lower ? "lower = max of" : "upper = min of") << " ("
        << d.terms.size() << " terms from " << d.vertices.size() << " vertices)\n";
    for (const auto& t : d.terms) out << "  " << render_expression(t, d.basis, o.ascii) << '\n';
  }
  return kExitOk;
}

int run_witness(const Options& o, std::ostream& out) {
  const GammaSpec g = gamma_spec(o);
  if (g.form() != GammaForm::Point) throw UsageError("witness needs a point --gamma");
  const LoadedData d = load_data(o);
  if (model_of(o) != Model::Strong) throw UsageError("witness search supports --model strong");
  std::optional<ParadoxWitness> w;
  try {
    w = paradox_witness_search(d.law, g.lo(), g.scale());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PremiseViolated || e.code() == ErrorCode::InfeasibleInputs) {
      rethrow_for("--gamma/--law", e);
    }
    throw;
  }
  if (o.format == "json") {
    json j = header_json("witness", o, d, &g);
    j["found"] = w.has_value();
    if (w) {
      const auto f = w->q.flat();
      j["value"] = w->value;
      j["q"] = std::vector<double>(f.begin(), f.end());
      const auto obs = observables_from_qtable_strong(w->q);
      j["reproduced_law"] = law_json(obs.law);
      j["reproduced_gamma"] = obs.gamma;
    }
    out << j.dump(2) << '\n';
  } else if (!w) {
    out << "no paradox witness: every latent table fitting the data has a non-negative effect\n";
  } else {
    out << std::setprecision(6) << std::fixed << "paradox witness with effect " << w->value
        << '\n'
        << "q rows (S0,S1) = 00,01,10,11; columns (Y0,Y1) = 00,01,10,11\n";
    for (int i = 0; i < 4; ++i) {
      out << " ";
      for (int j = 0; j < 4; ++j) out << ' ' << std::setw(9) << w->q(i, j);
      out << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }
  return kExitOk;
}

PartitionConfig partition_config_from(const std::string& path) {
  PartitionConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileError, "--config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidTable, "--config " + path + ": invalid JSON: " + e.what());
  }
  try {
    c.p_u = j.value("p_u", c.p_u);
    c.s_effect_u0 = j.value("s_effect_u0", c.s_effect_u0);
    c.s_effect_u1 = j.value("s_effect_u1", c.s_effect_u1);
    if (j.contains("baseline_s")) c.baseline_s = j["baseline_s"].get<std::array<double, 2>>();
    if (j.contains("baseline_y")) c.baseline_y = j["baseline_y"].get<std::array<double, 2>>();
    c.delta_min = j.value("delta_min", c.delta_min);
    c.delta_max = j.value("delta_max", c.delta_max);
    c.resolution = j.value("resolution", c.resolution);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidTable, "--config " + path + ": " + e.what());
  }
  return c;
}

struct PartitionCliOptions {
  std::string config;
  int resolution = 0;
  std::string out;
  unsigned workers = 1;
  std::string format = "text";
};

int run_partition(const PartitionCliOptions& o, std::ostream& out) {
  PartitionConfig cfg = partition_config_from(o.config);
  if (o.resolution > 0) cfg.resolution = o.resolution;
  PartitionGrid grid;
  try {
    grid = partition_grid(cfg, o.workers);
  } catch (const Error& e) {
    rethrow_for(o.config.empty() ? "--resolution" : "--config", e);
  }
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorCode::FileError, "--out: cannot write " + o.out);
    write_partition_csv(grid, f);
  }
  std::array<std::size_t, 5> counts{};
  for (const auto& p : grid.points) ++counts[static_cast<int>(p.region)];
  if (o.format == "json") {
    json j;
    j["schema"] = kSchema;
    j["command"] = "partition";
    j["resolution"] = cfg.resolution;
    j["contour_level"] = grid.contour_level ? json(*grid.contour_level) : json(nullptr);
    json c;
    for (int r = 0; r < 5; ++r) c[std::string(to_string(static_cast<Region>(r)))] = counts[r];
    j["region_counts"] = c;
    if (!o.out.empty()) j["csv"] = o.out;
    out << j.dump(2) << '\n';
  } else {
    out << "grid " << cfg.resolution << " x " << cfg.resolution << '\n';
    for (int r = 0; r < 5; ++r) {
      out << "  " << std::left << std::setw(24) << to_string(static_cast<Region>(r)) << std::right
          << counts[r] << '\n';
    }
    if (grid.contour_level) out << "contour level (centre threshold) " << *grid.contour_level << '\n';
    if (!o.out.empty()) out << "wrote " << o.out << '\n';
  }
  return kExitOk;
}

int run_examples(const std::string& format, std::ostream& out) {
  const auto results = run_builtin_examples();
  bool all_ok = true;
  json arr = json::array();
  for (const auto& r : results) {
    if (r.status == ExampleStatus::Fail) all_ok = false;
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"quantity", c.quantity},
                        {"expected", c.expected},
                        {"actual", c.actual},
                        {"ok", c.ok}});
    }
    arr.push_back({{"name", r.name},
                   {"status", std::string(to_string(r.status))},
                   {"threshold", r.threshold},
                   {"verdict", std::string(to_string(r.verdict))},
                   {"checks", checks}});
  }
  if (format == "json") {
    out << json{{"schema", kSchema}, {"command", "examples"}, {"all_passed", all_ok},
                {"examples", arr}}
               .dump(2)
        << '\n';
  } else {
    for (const auto& r : results) {
      out << std::left << std::setw(18) << r.name << std::right << ' ' << to_string(r.status)
          << '\n';
      for (const auto& c : r.checks) {
        if (c.quantity == "verdict") {
          out << "    verdict " << to_string(static_cast<Verdict>(static_cast<int>(c.actual)))
              << (c.ok ? "" : "  (expected " +
                                  std::string(to_string(
                                      static_cast<Verdict>(static_cast<int>(c.expected)))) +
                                  ")")
              << '\n';
          continue;
        }
        out << "    " << std::left << std::setw(14) << c.quantity << std::right
            << " stated " << std::setw(9) << c.expected << "  computed " << std::setw(9)
            << c.actual << (c.ok ? "" : "  MISMATCH") << '\n';
      }
    }
    out << (all_ok ? "all examples passed\n" : "some examples failed\n");
  }
  return all_ok ? kExitOk : kExitFailure;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp bounds and paradox criteria for surrogate-endpoint trials", "surrbound"};
  app.require_subcommand(1);

  Options bo, co, so, wo;
  BootstrapOptions bs;
  DeriveCliOptions dopt;
  PartitionCliOptions popt;
  std::string examples_format = "text";

  auto* bounds = app.add_subcommand("bounds", "bounds on the effect of T on Y");
  add_data_options(bounds, bo);
  add_gamma_options(bounds, bo);
  bounds->add_flag("--strict-feasibility", bo.strict, "reject (law, gamma) with no latent table");
  bounds->add_flag("--witness", bo.witness, "attach attaining latent tables (point gamma)");
  bounds->add_flag("--exact", bo.exact, "exact rational LP for the crr scale");
  add_format_option(bounds, bo);

  auto* criteria = app.add_subcommand("criteria", "paradox exclusion criterion");
  add_data_options(criteria, co);
  add_gamma_options(criteria, co);
  add_format_option(criteria, co);

  auto* boot = app.add_subcommand("bootstrap", "bootstrap uncertainty region for the bounds");
  add_data_options(boot, so);
  add_gamma_options(boot, so);
  add_format_option(boot, so);
  boot->add_option("--B", bs.replicates, "number of replicates")->check(CLI::PositiveNumber);
  boot->add_option("--alpha", bs.alpha, "one minus the coverage level");
  boot->add_option("--seed", bs.seed, "master seed");
  boot->add_option("--workers", bs.workers, "worker threads")->check(CLI::PositiveNumber);
  boot->add_option("--gamma-counts", bs.gamma_counts,
                   "external study n_s0,y1_s0,n_s1,y1_s1; resamples gamma per replicate");

  auto* derive = app.add_subcommand("derive", "re-derive bound terms by dual vertex enumeration");
  derive->add_option("--system", dopt.system, "strong | nonstrong-reduced")
      ->check(CLI::IsMember({"strong", "nonstrong-reduced"}));
  derive->add_option("--direction", dopt.direction, "lower | upper")
      ->check(CLI::IsMember({"lower", "upper"}));
  derive->add_flag("--exact", dopt.exact, "rational vertex arithmetic");
  derive->add_flag("--ascii", dopt.ascii, "ASCII operators in rendered terms");
  derive->add_option("--samples", dopt.samples, "pruning samples")->check(CLI::PositiveNumber);
  derive->add_option("--workers", dopt.workers, "worker threads")->check(CLI::PositiveNumber);
  derive->add_option("--format", dopt.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* witness = app.add_subcommand("witness", "search for a latent table with the paradox");
  add_data_options(witness, wo);
  add_gamma_options(witness, wo);
  add_format_option(witness, wo);

  auto* partition = app.add_subcommand("partition", "classify a grid of (delta0, delta1)");
  partition->add_option("--config", popt.config, "JSON configuration file");
  partition->add_option("--resolution", popt.resolution, "points per axis")
      ->check(CLI::Range(2, 100000));
  partition->add_option("--out", popt.out, "CSV output file");
  partition->add_option("--workers", popt.workers, "worker threads")->check(CLI::PositiveNumber);
  partition->add_option("--format", popt.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* examples = app.add_subcommand("examples", "check the built-in example registry");
  examples->add_option("--format", examples_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::ostringstream buf;
    int code = kExitOk;
    if (*bounds) code = run_bounds(bo, buf);
    else if (*criteria) code = run_criteria(co, buf);
    else if (*boot) code = run_bootstrap(so, bs, buf, err);
    else if (*derive) code = run_derive(dopt, buf);
    else if (*witness) code = run_witness(wo, buf);
    else if (*partition) code = run_partition(popt, buf);
    else if (*examples) code = run_examples(examples_format, buf);
    out << buf.str();
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace surrbound
