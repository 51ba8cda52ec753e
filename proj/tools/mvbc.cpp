// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

// Scenario runner: executes scenario files, audits every run, writes
// transcripts and complexity reports.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvbc/error.hpp"
#include "mvbc/explain.hpp"
#include "mvbc/metrics.hpp"
#include "mvbc/simulator.hpp"
#include "mvbc/strategies.hpp"

namespace fs = std::filesystem;
using namespace mvbc;

namespace {

  enum Exit { kOk = 0, kFailed = 1, kBadInput = 2 };

  struct RunArgs {
    std::vector<std::string> scenarios;
    std::string out_dir;
    std::size_t sweep_seeds = 1;
    bool validate_complexity = false;
    std::string strategy;
    bool emit_csv = false;
    bool quiet = false;
    bool verbose = false;
    bool no_messages = false;
  };

  std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
  }

  int run_command(const RunArgs &args) {
    std::vector<sim::Scenario> loaded;
    for (const auto &path : args.scenarios) {
      try {
        auto sc = sim::load_scenario(path);
        if (!args.strategy.empty()) {
          sc.strategy = sim::StrategySpec{args.strategy, {}};
          sc.validate();
        }
        loaded.push_back(std::move(sc));
      } catch (const ParseError &e) {
        std::cerr << path << ": parse error: " << e.what() << "\n";
        return kBadInput;
      } catch (const ConfigError &e) {
        std::cerr << path << ": invalid scenario: " << e.what() << "\n";
        return kBadInput;
      }
    }
    if (!args.out_dir.empty()) fs::create_directories(args.out_dir);

    std::size_t runs = 0, failed = 0;
    for (const auto &base : loaded) {
      for (std::size_t i = 0; i < args.sweep_seeds; ++i) {
        auto sc = base;
        sc.seed = base.seed + i;
        const auto stem = args.sweep_seeds > 1 ? sc.name + "_seed" + std::to_string(sc.seed) : sc.name;

        sim::RunOptions options;
        options.record_messages = !args.no_messages;
        sim::ScenarioResult res;
        try {
          res = sim::run_scenario(sc, options);
        } catch (const ConfigError &e) {
          std::cerr << sc.name << ": invalid scenario: " << e.what() << "\n";
          return kBadInput;
        }
        ++runs;
        bool ok = res.ok();

        std::optional<metrics::ValidationReport> report;
        if (args.validate_complexity) {
          report = metrics::validate(res.transcript, res.config);
          ok = ok && report->passed();
        }
        failed += ok ? 0 : 1;

        if (!args.out_dir.empty()) {
          auto transcript = res.transcript;
          transcript.set_meta({{"tool", "mvbc"}, {"timestamp", utc_timestamp()}});
          transcript.write(fs::path(args.out_dir) / (stem + ".jsonl"));
          if (report) {
            write_text(fs::path(args.out_dir) / (stem + ".report.txt"), report->to_table());
            write_text(fs::path(args.out_dir) / (stem + ".report.json"), report->to_json().dump(2) + "\n");
            if (args.emit_csv) write_text(fs::path(args.out_dir) / (stem + ".csv"), report->to_csv());
          }
        }

        if (!args.quiet) {
          std::cout << (ok ? "PASS " : "FAIL ") << stem << ": strategy=" << sc.strategy.name
                    << " agreement=" << (res.agreement ? "yes" : "no")
                    << " validity=" << (res.validity ? "yes" : "no") << " diagnosis=" << res.diagnosis_count
                    << "/" << res.config.t * (res.config.t + 1) << " generations=" << res.stats.generations()
                    << " bits=" << res.stats.data_bits_matching() + res.stats.bsb_bits_total() << "\n";
          for (const auto &v : res.violations) std::cout << "  violation: " << v << "\n";
          if (report && (args.verbose || args.sweep_seeds == 1)) std::cout << report->to_table();
          if (report && args.emit_csv && args.out_dir.empty()) std::cout << report->to_csv();
          if (args.verbose) std::cout << sim::explain(res.transcript);
        } else if (!ok) {
          std::cerr << "FAIL " << stem << "\n";
          for (const auto &v : res.violations) std::cerr << "  violation: " << v << "\n";
          if (report) {
            for (const auto &f : report->failures) std::cerr << "  complexity: " << f << "\n";
          }
        }
      }
    }
    if (!args.quiet) std::cout << runs - failed << "/" << runs << " runs passed\n";
    return failed == 0 ? kOk : kFailed;
  }

  int explain_command(const std::string &path) {
    try {
      std::cout << sim::explain(Transcript::read(path));
      return kOk;
    } catch (const Error &e) {
      std::cerr << path << ": " << e.what() << "\n";
      return kBadInput;
    }
  }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Error-free multi-valued Byzantine consensus simulator"};
  app.require_subcommand(0, 1);

  std::string explain_path;
  app.add_option("--explain", explain_path, "Render a transcript as a narrative and exit");

  RunArgs args;
  auto *run = app.add_subcommand("run", "Run scenario files and audit every run");
  run->add_option("--scenario", args.scenarios, "Scenario file (.toml key/value or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", args.out_dir, "Directory for transcripts and reports");
  run->add_option("--sweep-seeds", args.sweep_seeds, "Run seeds seed, seed+1, ..., seed+k-1")
      ->check(CLI::PositiveNumber);
  run->add_flag("--validate-complexity", args.validate_complexity,
                "Compare measured costs with the cost formulas");
  run->add_option("--strategy", args.strategy, "Override the scenario's adversary strategy")
      ->check(CLI::IsMember(sim::builtin_strategies()));
  run->add_flag("--emit-csv", args.emit_csv, "Write per-generation cost rows as CSV");
  run->add_flag("--no-messages", args.no_messages, "Omit individual data-channel messages from transcripts");
  auto *quiet = run->add_flag("--quiet", args.quiet, "Only report failures");
  run->add_flag("--verbose", args.verbose, "Print reports and a narrative of each run")->excludes(quiet);

  std::string explain_arg;
  auto *explain = app.add_subcommand("explain", "Render a transcript as a narrative");
  explain->add_option("transcript", explain_arg, "Transcript file (.jsonl)")->required();

  auto *list = app.add_subcommand("strategies", "List the built-in adversary strategies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // Help and version requests exit 0; usage errors count as bad input.
    return app.exit(e) == 0 ? 0 : kBadInput;
  }

  if (!explain_path.empty()) return explain_command(explain_path);
  if (*explain) return explain_command(explain_arg);
  if (*list) {
    for (const auto &s : sim::builtin_strategies()) std::cout << s << "\n";
    return kOk;
  }
  if (*run) {
    try {
      return run_command(args);
    } catch (const Error &e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFailed;
    }
  }
  std::cout << app.help();
  return kBadInput;
}
