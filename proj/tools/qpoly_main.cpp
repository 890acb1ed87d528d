// Command-line front end: parse flags (or a config file), dispatch to the
// library, write reports/tables, and encode verdicts in the exit status
// (0 all verified, 2 any violated, 3 any inconclusive, 1 error).

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "qpoly/report.hpp"

namespace {

void print_usage() {
  std::cout <<
      "usage: qpoly <command> [options]\n"
      "\n"
      "commands:\n"
      "  entropy     Tsallis/Renyi/von Neumann entropies of a state\n"
      "  ccq-verify  closed-form ccq mutual entropies vs direct evaluation\n"
      "  roof        convex/concave Tsallis-q roofs across the first cut\n"
      "  uq          one-way unlocalizable q-entanglement upper bounds\n"
      "  scan        random-instance inequality scans (--check <name>)\n"
      "  theorem1    conditional three-party polygamy check\n"
      "  monogamy    multi-qubit monogamy check (--measure tsallis|renyi)\n"
      "\n"
      "common options:\n"
      "  --q 1,2,3            entropic parameter grid\n"
      "  --dims 2,2,2         subsystem dimensions\n"
      "  --samples N          random instances (ignored with --input)\n"
      "  --seed S             master seed\n"
      "  --tolerance T        verdict tolerance\n"
      "  --restarts / --samples-per-restart / --refine-steps / --budget-seed\n"
      "  --check NAME         scan check: subadd ccq-general xi theorem1\n"
      "                       polygamy monogamy-tsallis monogamy-renyi ue-chain\n"
      "  --input FILE         state file {dims, re, im}\n"
      "  --out FILE           full JSON report (atomic write)\n"
      "  --table FILE         plot-ready table (atomic write)\n"
      "  --format F           json-lines | csv (default json-lines)\n"
      "  --config FILE        read options from a config file; flags override\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args) {
    if (a == "-h" || a == "--help") {
      print_usage();
      return 0;
    }
  }
  if (args.empty()) {
    print_usage();
    return 1;
  }
  try {
    const qpoly::RunConfig cfg = qpoly::parse_config(args);
    const qpoly::ReportRecord rec = qpoly::run(cfg);
    if (cfg.table.empty() && cfg.out.empty()) {
      std::cout << qpoly::emit_table(rec, cfg.format);
    }
    const auto& counts = rec.summary.at("counts");
    std::cerr << "qpoly " << cfg.command << ": " << rec.rows.size()
              << " rows, verified=" << counts.at("verified").get<int>()
              << " violated=" << counts.at("violated").get<int>()
              << " inconclusive=" << counts.at("inconclusive").get<int>()
              << " (" << rec.wall_time_ms << " ms)\n";
    return rec.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
