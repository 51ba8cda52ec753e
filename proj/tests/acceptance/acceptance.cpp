// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/bsb_check.hpp"
#include "../unit/oracles.hpp"
#include "mvbc/consensus.hpp"
#include "mvbc/metrics.hpp"
#include "mvbc/rs_code.hpp"
#include "mvbc/simulator.hpp"
#include "mvbc/strategies.hpp"

using namespace mvbc;
using namespace mvbc::sim;

namespace {

  using Clock = std::chrono::steady_clock;

  double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }

  struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> problems;

    void fail(const std::string &what) {
      pass = false;
      if (problems.size() < 5) problems.push_back(what);
    }
  };

  std::vector<ProcessorId> pick_faulty(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 2654435761ULL + n);
    std::vector<ProcessorId> all(n);
    for (ProcessorId p = 0; p < n; ++p) all[p] = p;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
  }

  std::string label(const Scenario &sc) {
    std::ostringstream out;
    out << sc.strategy.name << " n=" << sc.n << " t=" << sc.t << " L=" << sc.L << " seed=" << sc.seed
        << " inputs=" << sc.inputs.spec;
    return out.str();
  }

  // ------------------------------------------------------------------------
  // Sweep shared by the correctness and soundness criteria.

  struct SweepTotals {
    std::size_t runs = 0;
    std::size_t identical_runs = 0;
    std::size_t split_runs = 0;
    std::size_t default_runs = 0;
    std::size_t diagnosis_runs = 0;
    std::size_t edge_events = 0;
    std::size_t stage_boundaries = 0;
    double elapsed = 0;
    Outcome correctness;
    Outcome soundness;
  };

  std::vector<Scenario> sweep_scenarios() {
    struct Shape {
      std::size_t n, t;
    };
    const std::vector<Shape> shapes{{4, 1}, {7, 1}, {7, 2}};
    const std::vector<std::string> input_kinds{"random_same", "all_same:0x2A5", "split:0x1234,0x4321",
                                               "random"};
    std::vector<Scenario> out;
    for (const auto &strategy : builtin_strategies()) {
      for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        for (const auto &shape : shapes) {
          const std::size_t unit = (shape.n - 2 * shape.t) * field_bits_for(shape.n);
          for (bool long_input : {false, true}) {
            Scenario sc;
            sc.n = shape.n;
            sc.t = shape.t;
            sc.seed = seed;
            sc.name = strategy;
            sc.strategy.name = strategy;
            if (long_input) {
              sc.L = 4096;
            } else {
              sc.L = 3 * unit;
              sc.D = unit;
            }
            sc.inputs.spec = input_kinds[(seed + (long_input ? 1 : 0)) % input_kinds.size()];
            // Mostly a full faulty set; every fifth seed one fewer.
            const std::size_t count = seed % 5 == 0 ? shape.t - 1 : shape.t;
            if (strategy != "adaptive") sc.faulty = pick_faulty(shape.n, count, seed);
            if (strategy == "corrupt_bsb") {
              static const char *modes[] = {"random", "flip", "split"};
              sc.strategy.params["mode"] = modes[seed % 3];
            }
            if (strategy == "randomized") sc.strategy.params["rate"] = std::to_string(10 + seed % 60);
            if (strategy == "persistent") sc.strategy.params["pace"] = seed % 2 ? "slow" : "fast";
            if (strategy == "equivocate_matching") sc.strategy.params["victims"] = std::to_string(1 + seed % 2);
            if (strategy == "frame") {
              // Target a fault-free processor.
              for (ProcessorId p = 0; p < shape.n; ++p) {
                if (std::find(sc.faulty.begin(), sc.faulty.end(), p) == sc.faulty.end() &&
                    seed % shape.n <= p) {
                  sc.strategy.params["target"] = std::to_string(p + 1);
                  break;
                }
              }
            }
            if (strategy == "adaptive") sc.strategy.params["at"] = std::to_string(1 + seed % 3);
            out.push_back(std::move(sc));
          }
        }
      }
    }
    return out;
  }

  void audit_run(const ScenarioResult &r, SweepTotals &totals) {
    const auto &sc = r.scenario;
    const auto name = label(sc);
    const auto &summary = r.transcript.summary();

    // Termination: every processor produced an L-bit output.
    if (!summary.value("completed", false)) totals.correctness.fail(name + ": run did not complete");
    if (r.outputs.size() != sc.n) totals.correctness.fail(name + ": missing outputs");

    // Consistency, checked directly on the outputs.
    std::optional<BitString> common;
    for (ProcessorId p = 0; p < sc.n; ++p) {
      if (r.faulty[p]) continue;
      if (r.outputs[p].value.size() != sc.L) totals.correctness.fail(name + ": output length");
      if (common && *common != r.outputs[p].value) totals.correctness.fail(name + ": outputs differ");
      common = r.outputs[p].value;
    }

    // Validity, with identical inputs judged from the ground truth.
    std::optional<BitString> shared_input;
    bool identical = true;
    for (ProcessorId p = 0; p < sc.n; ++p) {
      if (r.faulty[p]) continue;
      if (shared_input && *shared_input != r.inputs[p]) identical = false;
      shared_input = r.inputs[p];
    }
    if (identical) {
      ++totals.identical_runs;
      if (common != shared_input) totals.correctness.fail(name + ": output differs from the common input");
    }
    if (sc.inputs.spec.rfind("split:", 0) == 0) ++totals.split_runs;
    if (r.terminated_default) ++totals.default_runs;
    if (r.diagnosis_count > 0) ++totals.diagnosis_runs;
    if (r.diagnosis_count > sc.t * (sc.t + 1)) totals.correctness.fail(name + ": diagnosis bound exceeded");
    for (const auto &v : r.violations) totals.correctness.fail(name + ": " + v);

    // Soundness: removed edges always touch a faulty processor, fault-free
    // processors are never isolated and stay pairwise connected.
    for (const auto *e : r.transcript.of_type("edge_removed")) {
      ++totals.edge_events;
      const auto i = e->at("i").get<std::size_t>() - 1;
      const auto j = e->at("j").get<std::size_t>() - 1;
      if (!r.faulty[i] && !r.faulty[j]) {
        totals.soundness.fail(name + ": removed edge between fault-free P" + std::to_string(i + 1) + " and P" +
                              std::to_string(j + 1));
      }
    }
    for (const auto *s : r.transcript.of_type("stage")) {
      ++totals.stage_boundaries;
      if (!s->contains("isolated")) continue;
      for (const auto &id : s->at("isolated")) {
        if (!r.faulty[id.get<std::size_t>() - 1]) totals.soundness.fail(name + ": fault-free processor isolated");
      }
    }
    for (const auto &v : r.violations) {
      if (v.find("edge") != std::string::npos || v.find("clique") != std::string::npos ||
          v.find("isolated") != std::string::npos) {
        totals.soundness.fail(name + ": " + v);
      }
    }
    if (!r.final_graph) {
      totals.soundness.fail(name + ": no final graph");
    } else {
      for (ProcessorId a = 0; a < sc.n; ++a) {
        for (ProcessorId b = a + 1; b < sc.n; ++b) {
          if (!r.faulty[a] && !r.faulty[b] && !r.final_graph->trusts(a, b)) {
            totals.soundness.fail(name + ": fault-free pair lost trust");
          }
        }
      }
    }
  }

  SweepTotals run_sweep() {
    SweepTotals totals;
    const auto start = Clock::now();
    RunOptions options;
    options.record_messages = false;
    for (const auto &sc : sweep_scenarios()) {
      ++totals.runs;
      try {
        audit_run(run_scenario(sc, options), totals);
      } catch (const std::exception &e) {
        totals.correctness.fail(label(sc) + ": threw " + e.what());
      }
    }
    totals.elapsed = seconds_since(start);
    return totals;
  }

  Outcome criterion_correctness(const SweepTotals &s) {
    Outcome o = s.correctness;
    if (s.runs < 500) o.fail("only " + std::to_string(s.runs) + " runs");
    if (s.identical_runs == 0 || s.split_runs == 0) o.fail("sweep lacks identical or split inputs");
    if (s.elapsed >= 120.0) o.fail("sweep took " + std::to_string(s.elapsed) + " s");
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu runs, %zu with identical inputs, %zu split, %zu default decisions, %zu with diagnosis, "
                  "%.1f s",
                  s.runs, s.identical_runs, s.split_runs, s.default_runs, s.diagnosis_runs, s.elapsed);
    o.detail = buf;
    return o;
  }

  Outcome criterion_soundness(const SweepTotals &s) {
    Outcome o = s.soundness;
    if (s.edge_events == 0) o.fail("sweep produced no edge removals to examine");
    o.detail = std::to_string(s.edge_events) + " edge removals and " + std::to_string(s.stage_boundaries) +
               " stage boundaries over " + std::to_string(s.runs) + " runs";
    return o;
  }

  // ------------------------------------------------------------------------

  Outcome criterion_diagnosis_bound() {
    Outcome o;
    std::size_t max_diag = 0, total_diag = 0;
    std::size_t last_max = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Scenario sc;
      sc.name = "persistent";
      sc.n = 7;
      sc.t = 2;
      sc.L = 450;
      sc.D = 9;
      sc.seed = seed;
      sc.faulty = pick_faulty(7, 2, seed + 1000);
      sc.strategy.name = "persistent";
      sc.inputs.spec = seed % 2 ? "random_same" : "all_same:0x" + std::to_string(seed);
      const auto r = run_scenario(sc);
      const auto name = label(sc);
      if (r.config.generations() < 50) o.fail(name + ": fewer than 50 generations");
      if (!r.ok()) o.fail(name + ": run not ok");
      max_diag = std::max(max_diag, r.diagnosis_count);
      total_diag += r.diagnosis_count;
      last_max = std::max(last_max, r.last_diagnosis_generation);
      if (r.diagnosis_count > 6) o.fail(name + ": " + std::to_string(r.diagnosis_count) + " diagnosis stages");
      if (!r.final_graph) {
        o.fail(name + ": no final graph");
        continue;
      }
      for (auto p : sc.faulty) {
        if (!r.final_graph->isolated(p)) o.fail(name + ": faulty P" + std::to_string(p + 1) + " not isolated");
      }
      // After the last diagnosis stage faulty processors neither enter a
      // match set nor reach a fault-free processor.
      const auto last = r.last_diagnosis_generation;
      auto faulty_id = [&](const json &id) { return r.faulty[id.get<std::size_t>() - 1]; };
      for (const auto *s : r.transcript.of_type("stage")) {
        if (s->at("g").get<std::size_t>() <= last || !s->contains("p_match")) continue;
        for (const auto &id : s->at("p_match")) {
          if (faulty_id(id)) o.fail(name + ": faulty processor in P_match after isolation");
        }
      }
      for (const auto *m : r.transcript.of_type("message")) {
        if (m->at("g").get<std::size_t>() > last && faulty_id(m->at("from")) && !faulty_id(m->at("to"))) {
          o.fail(name + ": message from an isolated processor delivered");
        }
      }
      for (const auto *e : r.transcript.of_type("edge_removed")) {
        if (e->at("g").get<std::size_t>() > last) o.fail(name + ": edge removed after the last diagnosis");
      }
    }
    o.detail = "100 seeds, 50 generations each, max " + std::to_string(max_diag) +
               " diagnosis stages (bound 6), mean " + std::to_string(total_diag / 100.0).substr(0, 4) +
               ", last diagnosis by generation " + std::to_string(last_max);
    return o;
  }

  // ------------------------------------------------------------------------

  Scenario complexity_scenario(std::string strategy, std::size_t L, std::optional<std::size_t> D,
                               std::vector<ProcessorId> faulty) {
    Scenario sc;
    sc.name = strategy;
    sc.n = 7;
    sc.t = 2;
    sc.L = L;
    sc.D = D;
    sc.faulty = std::move(faulty);
    sc.strategy.name = std::move(strategy);
    sc.inputs.spec = "random_same";
    sc.seed = 1;
    return sc;
  }

  Outcome criterion_fault_free_cost() {
    Outcome o;
    const std::uint64_t n = 7, t = 2;
    std::size_t generations = 0;
    for (auto [L, D] : {std::pair<std::size_t, std::optional<std::size_t>>{4096, std::nullopt},
                        {450, 9}, {1800, 90}}) {
      const auto r = run_scenario(complexity_scenario("honest", L, D, {}));
      const auto &cfg = r.config;
      const std::uint64_t s = cfg.D / (n - 2 * t);
      const std::uint64_t B = bsb::PhaseKingBroadcast(n, t).fault_free_bits();
      if (B != cfg.measured_B) o.fail("measured B differs from the fault-free instance cost");
      const std::uint64_t per_gen_data = n * (n - 1) * s;
      const std::uint64_t per_gen_invocations = n * (n - 1) + t;
      for (const auto &row : r.stats.per_generation) {
        const auto &tr = row.traffic;
        if (tr.data_bits != per_gen_data) o.fail("generation data bits " + std::to_string(tr.data_bits));
        if (tr.bsb_invocations_total() != per_gen_invocations) o.fail("generation broadcast count");
        if (tr.bsb_bits_total() != per_gen_invocations * B) o.fail("generation broadcast bits");
      }
      const std::uint64_t first_term = (per_gen_data + per_gen_invocations * B) * cfg.generations();
      const std::uint64_t measured = r.stats.total.data_bits + r.stats.total.bsb_bits_total();
      if (measured != first_term) o.fail("total " + std::to_string(measured) + " != " + std::to_string(first_term));
      if (r.diagnosis_count != 0) o.fail("diagnosis ran in a fault-free run");
      const auto rep = metrics::validate(r.transcript, cfg);
      if (!rep.passed()) o.fail("metrics validation failed");
      const auto pred = metrics::predict_per_generation(n, t, cfg.D, B);
      if (pred.matching.total() + pred.checking.total() != per_gen_data + per_gen_invocations * B) {
        o.fail("library prediction disagrees with the closed form");
      }
      generations += cfg.generations();
      if (L == 4096) {
        o.detail = "L=4096 D=" + std::to_string(cfg.D) + ": " + std::to_string(per_gen_data) + " data bits + " +
                   std::to_string(per_gen_invocations) + " broadcasts x B=" + std::to_string(B) +
                   " per generation, total " + std::to_string(measured) + " bits";
      }
    }
    o.detail += "; " + std::to_string(generations) + " generations checked over 3 lengths";
    return o;
  }

  Outcome criterion_diagnosis_cost() {
    Outcome o;
    const std::uint64_t n = 7, t = 2;
    std::string detail;
    // P6 and P7 stay outside the match set and raise false detections.
    for (std::size_t D : {9, 18, 45}) {
      const auto r = run_scenario(complexity_scenario("false_detect", D * 3, D, {5, 6}));
      const std::uint64_t s = D / (n - 2 * t);
      const std::uint64_t expected = n * (n - 1) + t + (n - t) * s + n * (n - t);
      std::size_t diagnosed = 0;
      for (const auto &row : r.stats.per_generation) {
        if (!row.diagnosed) continue;
        ++diagnosed;
        const auto got = row.traffic.bsb_invocations_total();
        if (got != expected) {
          o.fail("D=" + std::to_string(D) + ": " + std::to_string(got) + " broadcasts, expected " +
                 std::to_string(expected));
        }
        const auto B = r.config.measured_B;
        if (row.traffic.bsb_bits_total() > expected * B) o.fail("broadcast bits exceed the prediction");
      }
      if (diagnosed != 1) o.fail("D=" + std::to_string(D) + ": " + std::to_string(diagnosed) + " diagnosis stages");
      if (!r.ok()) o.fail("run not ok");
      if (D == 9) {
        detail = "symbol " + std::to_string(s) + " bits: " + std::to_string(expected) + " broadcasts measured";
      }
    }
    o.detail = detail + "; also exact at 6- and 15-bit symbols";
    return o;
  }

  // ------------------------------------------------------------------------

  Outcome criterion_rs_oracle() {
    Outcome o;
    const auto start = Clock::now();
    constexpr std::size_t n = 7, k = 3;
    constexpr std::uint32_t poly = 0x13;
    const rs::CodeSpec code(n, k, gf::FieldSpec(4));

    std::vector<std::vector<std::uint32_t>> codewords;
    std::set<std::vector<std::uint32_t>> codeword_set;
    std::size_t round_trips = 0;
    for (std::uint32_t idx = 0; idx < 4096; ++idx) {
      const std::vector<std::uint32_t> data{idx & 15U, (idx >> 4) & 15U, (idx >> 8) & 15U};
      rs::DataBlock block;
      for (auto v : data) block.symbols.emplace_back(v);
      const auto cw = code.encode(block);
      std::vector<std::uint32_t> raw;
      for (auto e : cw.symbols) raw.push_back(e.value());
      if (raw != oracle::rs_encode(data, n, poly, 4)) o.fail("encoding differs from the oracle");
      codewords.push_back(raw);
      codeword_set.insert(raw);
      for (unsigned mask = 0; mask < (1U << n); ++mask) {
        if (__builtin_popcount(mask) != static_cast<int>(k)) continue;
        auto view = rs::PartialView::unknown(n);
        for (std::size_t j = 0; j < n; ++j) {
          if (mask & (1U << j)) view.slots[j] = cw.symbols[j];
        }
        ++round_trips;
        if (code.erasure_decode(view) != block) o.fail("round trip failed");
      }
    }
    if (codeword_set.size() != 4096) o.fail("encoding is not injective");

    std::size_t min_distance = n;
    for (std::size_t a = 0; a < codewords.size(); ++a) {
      for (std::size_t b = a + 1; b < codewords.size(); ++b) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < n; ++j) d += codewords[a][j] != codewords[b][j];
        min_distance = std::min(min_distance, d);
      }
    }
    if (min_distance != 5) o.fail("minimum distance " + std::to_string(min_distance));

    std::size_t views = 0;
    for (const auto &cw : codewords) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::uint32_t e = 0; e < 16; ++e) {
          auto word = cw;
          word[j] ^= e;
          rs::PartialView view = rs::PartialView::unknown(n);
          for (std::size_t i = 0; i < n; ++i) view.slots[i] = rs::FieldElement(word[i]);
          const bool expected = codeword_set.count(word) != 0;
          ++views;
          if (code.is_consistent(view) != expected) o.fail("is_consistent disagrees with the codeword oracle");
        }
      }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 60.0) o.fail("took " + std::to_string(elapsed) + " s");
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu round trips, min distance %zu, %zu views checked, %.1f s", round_trips,
                  min_distance, views, elapsed);
    o.detail = buf;
    return o;
  }

  // ------------------------------------------------------------------------

  Outcome criterion_bsb() {
    Outcome o;
    std::uint64_t leaves = 0, states = 0;
    for (ProcessorId f = 0; f < 4; ++f) {
      std::vector<bool> faulty(4, false);
      faulty[f] = true;
      check::BsbModelChecker checker(4, 1, faulty);
      for (ProcessorId source = 0; source < 4; ++source) {
        for (bool bit : {false, true}) {
          const auto r = checker.run(source, bit);
          leaves += r.leaves;
          states += r.states;
          if (r.violations != 0) o.fail("model check: " + r.first_violation);
          if (r.leaves == 0) o.fail("model check explored nothing");
        }
      }
    }
    const auto sweep = check::random_bsb_sweep(7, 2, 1000);
    if (sweep.runs != 1000) o.fail("sweep ran " + std::to_string(sweep.runs) + " executions");
    if (sweep.violations != 0) o.fail("random sweep: " + sweep.first_violation);
    o.detail = "n=4: " + std::to_string(leaves) + " executions over " + std::to_string(states) +
               " states; n=7 t=2: " + std::to_string(sweep.runs) + " seeds, " + std::to_string(sweep.violations) +
               " violations";
    return o;
  }

  // ------------------------------------------------------------------------

  Outcome criterion_determinism() {
    Outcome o;
    std::size_t pairs = 0;
    for (const auto &strategy : builtin_strategies()) {
      for (std::uint64_t seed : {3, 41}) {
        for (auto [n, t] : {std::pair<std::size_t, std::size_t>{4, 1}, {7, 2}}) {
          Scenario sc;
          sc.name = strategy;
          sc.n = n;
          sc.t = t;
          sc.L = 200;
          sc.seed = seed;
          sc.strategy.name = strategy;
          sc.inputs.spec = "random";
          if (strategy != "adaptive") sc.faulty = pick_faulty(n, t, seed);
          const auto a = run_scenario(sc).transcript;
          auto b = run_scenario(sc).transcript;
          b.set_meta({{"timestamp", "differs"}});
          ++pairs;
          if (a.to_jsonl(false) != b.to_jsonl(false)) o.fail(label(sc) + ": transcripts differ");
          if (Transcript::from_jsonl(b.to_jsonl()).to_jsonl(false) != a.to_jsonl(false)) {
            o.fail(label(sc) + ": replayed transcript differs");
          }
        }
      }
    }
    o.detail = std::to_string(pairs) + " scenario pairs byte-identical";
    return o;
  }

  bool report(int number, const std::string &title, const Outcome &o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << number << "] " << title << ": " << o.detail << '\n';
    for (const auto &p : o.problems) std::cout << "    " << p << '\n';
    std::cout.flush();
    return o.pass;
  }

  Outcome guarded(const std::function<Outcome()> &fn) {
    try {
      return fn();
    } catch (const std::exception &e) {
      Outcome o;
      o.fail(std::string("exception: ") + e.what());
      return o;
    }
  }

}  // namespace

int main() {
  bool ok = true;
  const auto sweep = run_sweep();
  ok &= report(1, "termination, consistency and validity sweep", criterion_correctness(sweep));
  ok &= report(2, "diagnosis bound under a persistent adversary", guarded(criterion_diagnosis_bound));
  ok &= report(3, "diagnosis graph soundness", criterion_soundness(sweep));
  ok &= report(4, "fault-free communication cost", guarded(criterion_fault_free_cost));
  ok &= report(5, "diagnosis generation broadcast count", guarded(criterion_diagnosis_cost));
  ok &= report(6, "Reed-Solomon oracle equivalence", guarded(criterion_rs_oracle));
  ok &= report(7, "single-bit broadcast contract", guarded(criterion_bsb));
  ok &= report(8, "deterministic replay", guarded(criterion_determinism));
  std::cout << (ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << '\n';
  return ok ? 0 : 1;
}
