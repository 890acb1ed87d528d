#include "qpoly/report.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qpoly {

namespace {

constexpr std::uint64_t kTagCli = 0x636c69ULL;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "entropy", "ccq-verify", "roof", "uq", "scan", "theorem1", "monogamy"};
  return names;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Tsallis-q entropies, roof-extended entanglement and polygamy checks"};
  app.set_config("--config", "", "config file; command-line flags override its values");

  app.add_option("command", cfg.command, "one of: entropy ccq-verify roof uq scan theorem1 monogamy")
      ->required();
  app.add_option("--q", cfg.q_values, "entropic parameter grid")->delimiter(',');
  app.add_option("--dims", cfg.dims, "subsystem dimensions, e.g. 2,2,2")->delimiter(',');
  app.add_option("--samples", cfg.samples, "number of random instances");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--tolerance", cfg.tolerance, "verdict tolerance");
  app.add_option("--restarts", cfg.budget.restarts, "optimizer restarts");
  app.add_option("--samples-per-restart", cfg.budget.samples_per_restart,
                 "independent climbs per restart");
  app.add_option("--refine-steps", cfg.budget.refine_steps, "climb steps");
  auto* budget_seed =
      app.add_option("--budget-seed", cfg.budget.seed,
                     "optimizer seed (defaults to the master seed)");
  app.add_option("--check", cfg.check, "scan check name");
  app.add_option("--measure", cfg.measure, "monogamy measure: tsallis | renyi");
  app.add_option("--input", cfg.input_state, "state file (dims/re/im record)");
  app.add_option("--out", cfg.out, "report file (JSON, written atomically)");
  app.add_option("--table", cfg.table, "table file (csv or json-lines)");
  app.add_option("--format", cfg.format, "table format: json-lines | csv");

  std::vector<const char*> argv;
  argv.push_back("qpoly");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  if (std::find(command_names().begin(), command_names().end(), cfg.command) ==
      command_names().end()) {
    throw std::invalid_argument("command: unknown command '" + cfg.command + "'");
  }
  for (double q : cfg.q_values) {
    if (!(q > 0.0)) {
      throw std::invalid_argument("q_values: every q must be positive");
    }
  }
  if (cfg.q_values.empty()) {
    throw std::invalid_argument("q_values: must be nonempty");
  }
  if (cfg.samples < 1) {
    throw std::invalid_argument("samples: must be >= 1");
  }
  if (!(cfg.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance: must be positive");
  }
  if (cfg.format != "json-lines" && cfg.format != "csv") {
    throw std::invalid_argument("format: must be json-lines or csv");
  }
  if (cfg.measure != "tsallis" && cfg.measure != "renyi") {
    throw std::invalid_argument("measure: must be tsallis or renyi");
  }
  if (cfg.command == "scan" && cfg.check.empty()) {
    throw std::invalid_argument("check: scan requires --check");
  }
  if (budget_seed->count() == 0) {
    cfg.budget.seed = cfg.seed;
  }
  return cfg;
}

int ReportRecord::exit_code() const {
  bool any_violated = false;
  bool any_inconclusive = false;
  for (const auto& row : rows) {
    if (row.verdict == "violated") any_violated = true;
    if (row.verdict == "inconclusive") any_inconclusive = true;
  }
  if (any_violated) return 2;
  if (any_inconclusive) return 3;
  return 0;
}

namespace {

int dims_product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

DensityMatrix instance_state(const RunConfig& cfg, int sample) {
  if (!cfg.input_state.empty()) {
    return load_state_file(cfg.input_state);
  }
  const DimVector dims(cfg.dims);
  Rng rng = Rng::stream(cfg.seed, kTagCli, static_cast<std::uint64_t>(sample));
  return random_density(dims, dims.total(), rng);
}

PureState instance_pure(const RunConfig& cfg, int sample) {
  if (!cfg.input_state.empty()) {
    return pure_from_density(load_state_file(cfg.input_state));
  }
  const DimVector dims(cfg.dims);
  Rng rng = Rng::stream(cfg.seed, kTagCli, static_cast<std::uint64_t>(sample));
  return haar_random_pure(dims, rng);
}

int effective_samples(const RunConfig& cfg) {
  return cfg.input_state.empty() ? cfg.samples : 1;
}

void run_entropy(const RunConfig& cfg, ReportRecord& rec) {
  const int n = effective_samples(cfg);
  for (int s = 0; s < n; ++s) {
    const DensityMatrix rho = instance_state(cfg, s);
    for (double qv : cfg.q_values) {
      const EntropicParameter q(qv);
      ReportRow row;
      row.check = "entropy";
      row.q = qv;
      row.d = rho.total();
      row.sample_index = s;
      row.gap = tsallis_quantum(rho, q);
      row.seed = cfg.seed;
      row.extra = json{{"tsallis", row.gap},
                       {"renyi", renyi_entropy(rho, q)},
                       {"von_neumann", von_neumann(rho)}};
      rec.rows.push_back(std::move(row));
    }
  }
}

void run_ccq_verify(const RunConfig& cfg, ReportRecord& rec) {
  const int n = effective_samples(cfg);
  double max_dev = 0.0;
  for (int s = 0; s < n; ++s) {
    const DensityMatrix rho = instance_state(cfg, s);
    for (double qv : cfg.q_values) {
      const EntropicParameter q(qv);
      const double dev = verify_closed_forms(rho, q);
      const IqTriple iq = closed_form_iq(rho, q);
      max_dev = std::max(max_dev, dev);
      ReportRow row;
      row.check = "ccq-verify";
      row.q = qv;
      row.d = rho.total();
      row.sample_index = s;
      row.gap = cfg.tolerance - dev;
      row.verdict = dev <= cfg.tolerance ? "verified" : "violated";
      row.seed = cfg.seed;
      row.extra = json{{"deviation", dev},
                       {"iq_xy_ab", iq.xy_ab},
                       {"iq_x_ab", iq.x_ab},
                       {"iq_y_ab", iq.y_ab},
                       {"subadd_gap", iq.xy_ab - iq.x_ab - iq.y_ab}};
      rec.rows.push_back(std::move(row));
    }
  }
  rec.summary["max_deviation"] = max_dev;
}

void run_roof(const RunConfig& cfg, ReportRecord& rec) {
  const int n = effective_samples(cfg);
  for (int s = 0; s < n; ++s) {
    const DensityMatrix rho = instance_state(cfg, s);
    for (double qv : cfg.q_values) {
      const PureFunctional f = PureFunctional::tsallis(qv);
      auto add = [&](const char* name, const RoofResult& r) {
        ReportRow row;
        row.check = name;
        row.q = qv;
        row.d = rho.total();
        row.sample_index = s;
        row.gap = r.value;
        row.seed = cfg.budget.seed;
        row.extra = json{{"value", r.value},
                         {"bound_direction",
                          r.bound_direction == BoundDirection::upper ? "upper" : "lower"},
                         {"converged", r.converged},
                         {"restarts_used", r.restarts_used}};
        rec.rows.push_back(std::move(row));
      };
      add("roof-convex", convex_roof(rho, {0}, f, cfg.budget));
      add("roof-concave", concave_roof(rho, {0}, f, cfg.budget));
    }
  }
}

void run_uq(const RunConfig& cfg, ReportRecord& rec) {
  const int n = effective_samples(cfg);
  for (int s = 0; s < n; ++s) {
    const DensityMatrix rho = instance_state(cfg, s);
    for (double qv : cfg.q_values) {
      const EntropicParameter q(qv);
      const RoofResult uq = unlocalizable_q_entanglement(rho, q, cfg.budget);
      const double split = qb_split_chi_average(rho, q);
      const InequalityVerdict v =
          decide_leq("uq-le-qbsplit", uq.value, BoundKind::upper, split,
                     BoundKind::exact, cfg.tolerance);
      ReportRow row;
      row.check = "uq";
      row.q = qv;
      row.d = rho.total();
      row.sample_index = s;
      row.gap = v.gap;
      row.verdict = to_string(v.verdict);
      row.seed = cfg.budget.seed;
      row.extra = json{{"uq_upper", uq.value},
                       {"qb_split_average", split},
                       {"converged", uq.converged}};
      rec.rows.push_back(std::move(row));
    }
  }
}

void run_scan(const RunConfig& cfg, ReportRecord& rec) {
  ScanConfig sc;
  sc.check = cfg.check;
  sc.dims = cfg.dims;
  sc.q_values = cfg.q_values;
  sc.samples = cfg.samples;
  sc.seed = cfg.seed;
  sc.budget = cfg.budget;
  sc.tolerance = cfg.tolerance;
  const ScanReport sr = scan(sc);

  const int d = dims_product(cfg.dims);
  for (const ScanRow& r : sr.rows) {
    ReportRow row;
    row.check = cfg.check;
    row.q = r.q;
    row.d = d;
    row.sample_index = r.sample;
    row.gap = r.gap;
    row.verdict = to_string(r.verdict);
    row.seed = r.replay_seed;
    rec.rows.push_back(std::move(row));
  }
  json worst = json::array();
  for (const WorstCase& w : sr.worst) {
    worst.push_back(json{{"q", w.q},
                         {"sample", w.sample},
                         {"replay_seed", w.replay_seed},
                         {"gap", w.gap},
                         {"verdict", to_string(w.verdict)},
                         {"state", state_to_json(w.state)}});
  }
  rec.summary = json{{"counts",
                      json{{"verified", sr.verified},
                           {"violated", sr.violated},
                           {"inconclusive", sr.inconclusive}}},
                     {"gap_stats", json{{"min", sr.min_gap}, {"max", sr.max_gap}}},
                     {"worst_cases", std::move(worst)}};
}

void run_theorem1(const RunConfig& cfg, ReportRecord& rec) {
  const int n = effective_samples(cfg);
  for (int s = 0; s < n; ++s) {
    const PureState psi = instance_pure(cfg, s);
    for (double qv : cfg.q_values) {
      const EntropicParameter q(qv);
      const Theorem1Result r = theorem1_check(psi, q, cfg.budget, cfg.tolerance);
      ReportRow row;
      row.check = "theorem1";
      row.q = qv;
      row.d = psi.total();
      row.sample_index = s;
      row.gap = r.rhs_lower - r.lhs;
      row.verdict = to_string(r.verdict.verdict);
      row.seed = cfg.seed;
      row.extra = json{{"lhs", r.lhs},
                       {"rhs_lower", r.rhs_lower},
                       {"rhs_upper", r.rhs_upper},
                       {"gap_ab", r.gap_ab},
                       {"gap_ac", r.gap_ac},
                       {"condition_holds", r.condition_holds}};
      rec.rows.push_back(std::move(row));
    }
  }
}

void run_monogamy(const RunConfig& cfg, ReportRecord& rec) {
  const int n = effective_samples(cfg);
  for (int s = 0; s < n; ++s) {
    const PureState psi = instance_pure(cfg, s);
    for (double qv : cfg.q_values) {
      const PureFunctional f = cfg.measure == "renyi"
                                   ? PureFunctional::renyi(qv)
                                   : PureFunctional::tsallis(qv);
      const MonogamyResult r =
          monogamy_check_multiqubit(psi.projector(), f, cfg.budget, cfg.tolerance);
      ReportRow row;
      row.check = "monogamy-" + cfg.measure;
      row.q = qv;
      row.d = psi.total();
      row.sample_index = s;
      row.gap = r.lhs - r.rhs_upper;
      row.verdict = to_string(r.verdict.verdict);
      row.seed = cfg.seed;
      row.extra = json{{"lhs", r.lhs}, {"rhs_upper", r.rhs_upper}};
      rec.rows.push_back(std::move(row));
    }
  }
}

}  // namespace

ReportRecord run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ReportRecord rec;
  rec.config = config;
  rec.summary = json::object();

  if (config.command == "entropy") {
    run_entropy(config, rec);
  } else if (config.command == "ccq-verify") {
    run_ccq_verify(config, rec);
  } else if (config.command == "roof") {
    run_roof(config, rec);
  } else if (config.command == "uq") {
    run_uq(config, rec);
  } else if (config.command == "scan") {
    run_scan(config, rec);
  } else if (config.command == "theorem1") {
    run_theorem1(config, rec);
  } else if (config.command == "monogamy") {
    run_monogamy(config, rec);
  } else {
    throw std::invalid_argument("command: unknown command '" + config.command + "'");
  }

  if (!rec.summary.contains("counts")) {
    int verified = 0, violated = 0, inconclusive = 0;
    for (const auto& row : rec.rows) {
      if (row.verdict == "verified") ++verified;
      if (row.verdict == "violated") ++violated;
      if (row.verdict == "inconclusive") ++inconclusive;
    }
    rec.summary["counts"] = json{{"verified", verified},
                                 {"violated", violated},
                                 {"inconclusive", inconclusive}};
  }

  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  if (!config.out.empty()) {
    write_file_atomic(config.out, report_to_json(rec).dump(2) + "\n");
  }
  if (!config.table.empty()) {
    write_file_atomic(config.table, emit_table(rec, config.format));
  }
  return rec;
}

json report_to_json(const ReportRecord& record, bool include_timing) {
  json cfg{{"command", record.config.command},
           {"q_values", record.config.q_values},
           {"dims", record.config.dims},
           {"samples", record.config.samples},
           {"seed", record.config.seed},
           {"tolerance", record.config.tolerance},
           {"budget",
            json{{"restarts", record.config.budget.restarts},
                 {"samples_per_restart", record.config.budget.samples_per_restart},
                 {"refine_steps", record.config.budget.refine_steps},
                 {"seed", record.config.budget.seed}}},
           {"check", record.config.check},
           {"measure", record.config.measure},
           {"input_state", record.config.input_state},
           {"format", record.config.format}};
  json rows = json::array();
  for (const auto& row : record.rows) {
    json r{{"check", row.check},     {"q", row.q},
           {"d", row.d},             {"sample_index", row.sample_index},
           {"gap", row.gap},         {"verdict", row.verdict},
           {"seed", row.seed}};
    if (!row.extra.is_null()) r["extra"] = row.extra;
    rows.push_back(std::move(r));
  }
  json out{{"config", std::move(cfg)},
           {"rows", std::move(rows)},
           {"summary", record.summary},
           {"version", record.version},
           {"master_seed", record.config.seed}};
  if (include_timing) {
    out["wall_time_ms"] = record.wall_time_ms;
  }
  return out;
}

std::string emit_table(const ReportRecord& record, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    os << "check,q,d,sample_index,gap,verdict,seed\n";
    for (const auto& row : record.rows) {
      os << row.check << ',' << format_number(row.q) << ',' << row.d << ','
         << row.sample_index << ',' << format_number(row.gap) << ','
         << row.verdict << ',' << row.seed << '\n';
    }
  } else if (format == "json-lines") {
    for (const auto& row : record.rows) {
      os << "{\"check\":\"" << row.check << "\",\"q\":" << format_number(row.q)
         << ",\"d\":" << row.d << ",\"sample_index\":" << row.sample_index
         << ",\"gap\":" << format_number(row.gap) << ",\"verdict\":\""
         << row.verdict << "\",\"seed\":" << row.seed << "}\n";
    }
  } else {
    throw std::invalid_argument("format: must be json-lines or csv");
  }
  return os.str();
}

}  // namespace qpoly
