// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/simulator.hpp"

#include <algorithm>

#include "mvbc/bsb.hpp"
#include "mvbc/error.hpp"
#include "mvbc/strategies.hpp"

namespace mvbc::sim {

  std::uint64_t measured_bsb_cost(std::size_t n, std::size_t t) {
    bsb::PhaseKingBroadcast protocol(n, t);
    return bsb::measure_fault_free_bits(protocol, n);
  }

  ConsensusConfig scenario_config(const Scenario &sc) {
    return choose_parameters(sc.n, sc.t, sc.L, measured_bsb_cost(sc.n, sc.t), sc.D);
  }

  BitString ScenarioResult::agreed_output() const {
    if (!agreement) return {};
    for (std::size_t p = 0; p < outputs.size(); ++p) {
      if (!faulty[p]) return outputs[p].value;
    }
    return {};
  }

  namespace {

    json ids(const std::vector<ProcessorId> &set) {
      json out = json::array();
      for (auto p : set) out.push_back(p + 1);
      return out;
    }

    json ids_of(const std::vector<bool> &mask) {
      json out = json::array();
      for (std::size_t p = 0; p < mask.size(); ++p) {
        if (mask[p]) out.push_back(p + 1);
      }
      return out;
    }

    std::string label(ProcessorId p) { return "P" + std::to_string(p + 1); }

    /// Writes the transcript and checks the protocol's invariants at every
    /// boundary the engine reports.
    class Auditor final : public RunObserver {
    public:
      Auditor(const ConsensusConfig &config, const std::vector<BitString> &padded_inputs, const Network &net,
              Transcript &transcript, std::vector<std::string> &violations, const RunOptions &options)
          : config_(config),
            inputs_(padded_inputs),
            net_(net),
            transcript_(transcript),
            violations_(violations),
            options_(options) {}

      void attach(const ConsensusEngine *engine) { engine_ = engine; }

      void violation(const std::string &what) {
        const auto text = "generation " + std::to_string(g_ + 1) + ": " + what;
        transcript_.add({{"type", "violation"}, {"g", g_ + 1}, {"what", what}});
        violations_.push_back(text);
      }

      void on_generation_begin(std::size_t g) override {
        g_ = g;
        edges_this_generation_ = 0;
        matched_ = false;
        transcript_.add({{"type", "generation_begin"}, {"g", g + 1}, {"faulty", ids_of(net_.faulty_mask())}});
      }

      void on_symbols(std::size_t g, const Outbox<rs::WideSymbol> &delivered) override {
        const auto procs = engine_->processors();
        const auto &code = engine_->code();
        for (ProcessorId from = 0; from < config_.n; ++from) {
          for (ProcessorId to = 0; to < config_.n; ++to) {
            if (from == to) continue;
            const auto &msg = delivered.at(from, to);
            if (!net_.is_faulty(from)) {
              // Channel integrity: fault-free traffic arrives untouched.
              const auto &ps = procs[from];
              const bool sends = ps.diag.trusts(from, to);
              if (sends != msg.has_value() || (msg && *msg != ps.gen.my_codeword[from])) {
                violation("symbol from fault-free " + label(from) + " to " + label(to) + " was altered");
              }
            }
            if (options_.record_messages && msg) {
              std::string payload;
              try {
                payload = code.symbol_to_bits(*msg).to_hex();
              } catch (const Error &) {
                payload = "malformed";
              }
              transcript_.add({{"type", "message"}, {"g", g + 1}, {"from", from + 1}, {"to", to + 1},
                               {"payload", payload}});
            }
          }
        }
      }

      void on_bsb_batch(std::size_t g, BroadcastKind kind, std::span<const bsb::Request> requests,
                        const bsb::BatchResult &result) override {
        std::string inputs, outputs;
        json sources = json::array();
        bool agree = true;
        for (std::size_t i = 0; i < requests.size(); ++i) {
          const auto &req = requests[i];
          if (sources.empty() || sources.back()[0] != req.source + 1) {
            sources.push_back({req.source + 1, 0});
          }
          sources.back()[1] = sources.back()[1].get<std::size_t>() + 1;
          inputs.push_back(req.bit ? '1' : '0');
          std::optional<bool> common;
          for (ProcessorId p = 0; p < config_.n; ++p) {
            if (net_.is_faulty(p)) continue;
            const bool out = result.outputs[i][p];
            if (common && *common != out) agree = false;
            common = out;
          }
          outputs.push_back(common.value_or(false) ? '1' : '0');
          if (!agree) {
            violation(std::string("broadcast agreement failed in a ") + std::string(to_string(kind)) +
                      " instance from " + label(req.source));
            agree = true;
          }
          if (!net_.is_faulty(req.source) && common && *common != req.bit) {
            violation(std::string("broadcast validity failed in a ") + std::string(to_string(kind)) +
                      " instance from " + label(req.source));
          }
        }
        transcript_.add({{"type", "bsb"},
                         {"g", g + 1},
                         {"kind", to_string(kind)},
                         {"instances", requests.size()},
                         {"sources", sources},
                         {"inputs", inputs},
                         {"outputs", outputs},
                         {"rounds", result.rounds},
                         {"bits", result.total_bits()}});
      }

      void on_stage_end(std::size_t g, Stage stage, std::span<const ProcessorState> procs) override {
        const auto ref = engine_->reference();
        const auto &r = procs[ref];
        json record = {{"type", "stage"}, {"g", g + 1}, {"stage", to_string(stage)}};
        auto same_everywhere = [&](const char *what, auto get) {
          for (const auto &ps : procs) {
            if (!net_.is_faulty(ps.id) && !(get(ps) == get(r))) {
              violation(std::string("fault-free processors disagree on ") + what + " (" + label(ps.id) +
                        " vs " + label(ref) + ")");
              return;
            }
          }
        };

        switch (stage) {
          case Stage::matching: {
            same_everywhere("the match matrix", [](const ProcessorState &ps) { return ps.gen.match_matrix; });
            same_everywhere("P_match", [](const ProcessorState &ps) { return ps.gen.p_match; });
            matched_ = r.gen.p_match.has_value();
            record["p_match"] = matched_ ? ids(*r.gen.p_match) : json(nullptr);
            if (matched_) check_match_set(*r.gen.p_match, r.diag);
            break;
          }
          case Stage::checking: {
            same_everywhere("detection flags", [](const ProcessorState &ps) { return ps.gen.detected; });
            record["detected"] = ids_of(r.gen.detected);
            break;
          }
          case Stage::diagnosis: {
            same_everywhere("R#", [](const ProcessorState &ps) { return ps.gen.rsharp; });
            same_everywhere("trust vectors", [](const ProcessorState &ps) { return ps.gen.trust.rows; });
            same_everywhere("the diagnosis graph", [](const ProcessorState &ps) { return ps.diag; });
            same_everywhere("P_decide", [](const ProcessorState &ps) { return ps.gen.p_decide; });
            record["p_decide"] = r.gen.p_decide ? ids(*r.gen.p_decide) : json(nullptr);
            record["edges_removed"] = edges_this_generation_;
            json isolated = json::array();
            for (ProcessorId p = 0; p < config_.n; ++p) {
              if (r.diag.isolated(p)) isolated.push_back(p + 1);
            }
            record["isolated"] = isolated;
            if (edges_this_generation_ == 0) violation("diagnosis stage removed no edge");
            break;
          }
        }
        check_graph(r.diag);
        transcript_.add(std::move(record));
      }

      void on_edges_removed(std::span<const EdgeRemovalEvent> events) override {
        for (const auto &e : events) {
          ++edges_this_generation_;
          if (!net_.is_faulty(e.i) && !net_.is_faulty(e.j)) {
            violation("edge " + label(e.i) + "-" + label(e.j) + " between fault-free processors removed (" +
                      std::string(to_string(e.cause)) + ")");
          }
          transcript_.add({{"type", "edge_removed"},
                           {"g", e.generation + 1},
                           {"i", e.i + 1},
                           {"j", e.j + 1},
                           {"cause", to_string(e.cause)}});
        }
      }

      void on_decision(std::size_t g, DecisionPath path, std::span<const ProcessorState> procs) override {
        const auto ref = engine_->reference();
        const auto &decision = *procs[ref].gen.decision;
        for (const auto &ps : procs) {
          if (!net_.is_faulty(ps.id) && ps.gen.decision != procs[ref].gen.decision) {
            violation("fault-free " + label(ps.id) + " decided differently from " + label(ref));
          }
        }
        if (path != DecisionPath::default_value) {
          for (auto j : *procs[ref].gen.p_match) {
            if (!net_.is_faulty(j) && decision != inputs_[j].slice(g * config_.D, config_.D)) {
              violation("decision differs from the input of fault-free match-set member " + label(j));
              break;
            }
          }
        }
        transcript_.add({{"type", "decision"}, {"g", g + 1}, {"path", to_string(path)}, {"value", decision.to_hex()}});
      }

      void on_generation_end(std::size_t g, const Traffic &delta, bool diagnosed) override {
        if (diagnosed) {
          ++diagnosis_count_;
          last_diagnosis_ = g + 1;
          if (diagnosis_count_ > config_.t * (config_.t + 1)) {
            violation("diagnosis stage count " + std::to_string(diagnosis_count_) + " exceeds t(t+1)");
          }
        }
        metrics::GenerationStats row{g, matched_, diagnosed, delta};
        transcript_.add(metrics::generation_stats_record(row));
        stats_.per_generation.push_back(row);
      }

      std::size_t last_diagnosis() const { return last_diagnosis_; }

    private:
      void check_match_set(const std::vector<ProcessorId> &members, const DiagGraph &graph) {
        std::optional<BitString> shared;
        for (auto j : members) {
          if (graph.isolated(j)) violation("isolated " + label(j) + " is in P_match");
          if (net_.is_faulty(j)) continue;
          auto value = inputs_[j].slice(g_ * config_.D, config_.D);
          if (shared && *shared != value) {
            violation("fault-free members of P_match hold different inputs");
            return;
          }
          shared = std::move(value);
        }
      }

      void check_graph(const DiagGraph &graph) {
        for (ProcessorId a = 0; a < config_.n; ++a) {
          if (net_.is_faulty(a)) continue;
          if (graph.isolated(a)) violation("fault-free " + label(a) + " is isolated");
          for (ProcessorId b = a + 1; b < config_.n; ++b) {
            if (!net_.is_faulty(b) && !graph.trusts(a, b)) {
              violation("fault-free " + label(a) + " and " + label(b) + " no longer trust each other");
            }
          }
        }
      }

      const ConsensusConfig &config_;
      const std::vector<BitString> &inputs_;
      const Network &net_;
      Transcript &transcript_;
      std::vector<std::string> &violations_;
      const RunOptions &options_;
      const ConsensusEngine *engine_ = nullptr;
      std::size_t g_ = 0;
      std::size_t edges_this_generation_ = 0;
      std::size_t diagnosis_count_ = 0;
      std::size_t last_diagnosis_ = 0;
      bool matched_ = false;

    public:
      metrics::CommStats stats_;
    };

  }  // namespace

  ScenarioResult run_scenario(const Scenario &scenario, const RunOptions &options) {
    scenario.validate();
    ScenarioResult res;
    res.scenario = scenario;
    res.config = scenario_config(scenario);
    res.inputs = scenario.resolve_inputs();
    const auto &cfg = res.config;

    auto adversary = make_strategy(scenario);
    Network net(cfg.n, scenario.faulty_mask(), adversary.get());
    bsb::PhaseKingBroadcast broadcast(cfg.n, cfg.t);

    std::vector<BitString> padded;
    for (const auto &v : res.inputs) padded.push_back(v.resized(cfg.padded_L));

    res.transcript.add({{"type", "scenario"},
                        {"scenario", scenario.to_json()},
                        {"config",
                         {{"n", cfg.n},
                          {"t", cfg.t},
                          {"k", cfg.k()},
                          {"L", cfg.L},
                          {"padded_L", cfg.padded_L},
                          {"D", cfg.D},
                          {"c", cfg.c},
                          {"stripes", cfg.stripes},
                          {"symbol_bits", cfg.symbol_bits()},
                          {"generations", cfg.generations()},
                          {"B", cfg.measured_B}}}});

    Auditor auditor(cfg, padded, net, res.transcript, res.violations, options);
    ConsensusEngine engine(cfg, net, broadcast, adversary.get(), &auditor);
    auditor.attach(&engine);
    bool completed = false;
    try {
      res.outputs = engine.run(res.inputs);
      completed = true;
    } catch (const InvariantViolation &e) {
      auditor.violation(std::string("engine: ") + e.what());
    } catch (const UsageError &e) {
      auditor.violation(std::string("adversary broke the channel model: ") + e.what());
    }

    res.faulty = net.faulty_mask();
    res.diagnosis_count = engine.diagnosis_count();
    res.last_diagnosis_generation = auditor.last_diagnosis();
    res.final_graph = engine.processors()[engine.reference()].diag;

    res.stats = auditor.stats_;
    for (const auto &row : res.stats.per_generation) {
      res.stats.total.data_bits += row.traffic.data_bits;
      res.stats.total.rounds += row.traffic.rounds;
      for (std::size_t i = 0; i < kBroadcastKinds; ++i) {
        res.stats.total.bsb_invocations[i] += row.traffic.bsb_invocations[i];
        res.stats.total.bsb_bits[i] += row.traffic.bsb_bits[i];
      }
      res.stats.diagnosis_stage_count += row.diagnosed ? 1 : 0;
    }

    // Final properties over the processors that stayed fault-free.
    std::optional<BitString> common_input;
    res.identical_inputs = true;
    for (ProcessorId p = 0; p < cfg.n; ++p) {
      if (res.faulty[p]) continue;
      if (common_input && *common_input != res.inputs[p]) res.identical_inputs = false;
      if (!common_input) common_input = res.inputs[p];
    }
    res.agreement = completed;
    std::optional<BitString> agreed;
    if (completed) {
      for (ProcessorId p = 0; p < cfg.n; ++p) {
        if (res.faulty[p]) continue;
        if (agreed && *agreed != res.outputs[p].value) res.agreement = false;
        if (!agreed) agreed = res.outputs[p].value;
        res.terminated_default = res.outputs[p].terminated_default;
      }
    }
    res.validity = !res.identical_inputs || (res.agreement && agreed == common_input);
    if (completed && !res.agreement) res.violations.push_back("final outputs of fault-free processors differ");
    if (completed && !res.validity) res.violations.push_back("output differs from the common fault-free input");

    for (ProcessorId p = 0; p < res.outputs.size(); ++p) {
      res.transcript.add({{"type", "output"},
                          {"processor", p + 1},
                          {"faulty", static_cast<bool>(res.faulty[p])},
                          {"terminated_default", res.outputs[p].terminated_default},
                          {"value", res.outputs[p].value.to_hex()}});
    }
    json isolated = json::array();
    for (ProcessorId p = 0; p < cfg.n; ++p) {
      if (res.final_graph->isolated(p)) isolated.push_back(p + 1);
    }
    const bool nominal = scenario.strategy.name == "honest" ||
                         std::none_of(res.faulty.begin(), res.faulty.end(), [](bool f) { return f; });
    res.transcript.add({{"type", "summary"},
                        {"ok", res.ok()},
                        {"nominal", nominal},
                        {"completed", completed},
                        {"agreement", res.agreement},
                        {"validity", res.validity},
                        {"identical_inputs", res.identical_inputs},
                        {"terminated_default", res.terminated_default},
                        {"diagnosis_stage_count", res.diagnosis_count},
                        {"diagnosis_bound", cfg.t * (cfg.t + 1)},
                        {"generations", res.stats.generations()},
                        {"faulty", ids_of(res.faulty)},
                        {"isolated", isolated},
                        {"violations", res.violations},
                        {"stats", res.stats.to_json()}});
    return res;
  }

}  // namespace mvbc::sim
