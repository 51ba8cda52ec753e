// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mvbc {

  std::string_view to_string(Stage stage) {
    switch (stage) {
      case Stage::matching:
        return "matching";
      case Stage::checking:
        return "checking";
      case Stage::diagnosis:
        return "diagnosis";
    }
    return "unknown";
  }

  std::string_view to_string(DecisionPath path) {
    switch (path) {
      case DecisionPath::checking:
        return "checking";
      case DecisionPath::diagnosis:
        return "diagnosis";
      case DecisionPath::default_value:
        return "default";
    }
    return "unknown";
  }

  // ---------------------------------------------------------------------------
  // Parameters

  unsigned field_bits_for(std::size_t n) {
    unsigned c = 0;
    while ((std::size_t{1} << c) < n + 1) ++c;
    return std::max(c, 2U);
  }

  void ConsensusConfig::validate() const {
    auto fail = [](const std::string &what) { throw ConfigError(what); };
    if (3 * t >= n) fail("need 3t < n, got n=" + std::to_string(n) + " t=" + std::to_string(t));
    if (n < 4) fail("need n >= 4, got n=" + std::to_string(n));
    if (c < 2 || c > 16) fail("field width must be in [2, 16]");
    if (n > (std::size_t{1} << c) - 1) fail("n exceeds 2^c - 1");
    if (stripes == 0 || D != k() * c * stripes) fail("D must equal (n-2t) * c * stripes");
    if (L == 0) fail("L must be positive");
    if (padded_L < L || padded_L % D != 0) fail("padded L must be a multiple of D");
  }

  rs::InterleavedCode ConsensusConfig::code() const {
    return rs::InterleavedCode(rs::CodeSpec(n, k(), gf::FieldSpec(c)), stripes);
  }

  ConsensusConfig choose_parameters(std::size_t n, std::size_t t, std::size_t L,
                                    std::uint64_t measured_B, std::optional<std::size_t> d_override) {
    if (3 * t >= n) {
      throw ConfigError("need 3t < n, got n=" + std::to_string(n) + " t=" + std::to_string(t));
    }
    if (L == 0) throw ConfigError("L must be positive");
    ConsensusConfig cfg;
    cfg.n = n;
    cfg.t = t;
    cfg.L = L;
    cfg.c = field_bits_for(n);
    cfg.measured_B = measured_B;
    const std::size_t unit = cfg.k() * cfg.c;
    auto round_up = [unit](std::size_t x) { return (x + unit - 1) / unit * unit; };

    if (d_override) {
      if (*d_override == 0 || *d_override % unit != 0) {
        throw ConfigError("D=" + std::to_string(*d_override) + " is not a positive multiple of (n-2t)*c=" +
                          std::to_string(unit));
      }
      cfg.D = *d_override;
    } else {
      const std::size_t cap = round_up(L);
      if (t == 0) {
        cfg.D = cap;
      } else {
        const double num = static_cast<double>(n * n - n + t) * static_cast<double>(n - 2 * t) *
                           static_cast<double>(L);
        const double den = static_cast<double>(t * (t + 1) * (n - t));
        const auto d = static_cast<std::size_t>(std::ceil(std::sqrt(num / den)));
        cfg.D = std::min(round_up(std::max<std::size_t>(d, 1)), cap);
      }
    }
    cfg.stripes = cfg.D / unit;
    cfg.padded_L = (L + cfg.D - 1) / cfg.D * cfg.D;
    cfg.validate();
    return cfg;
  }

  // ---------------------------------------------------------------------------
  // Set selection

  namespace {
    bool extend_clique(std::span<const ProcessorId> candidates, std::size_t size, std::size_t from,
                       std::vector<ProcessorId> &chosen,
                       const std::function<bool(ProcessorId, ProcessorId)> &adjacent) {
      if (chosen.size() == size) return true;
      for (std::size_t i = from; i < candidates.size(); ++i) {
        if (candidates.size() - i < size - chosen.size()) return false;
        const auto v = candidates[i];
        if (!std::all_of(chosen.begin(), chosen.end(), [&](ProcessorId u) { return adjacent(u, v); })) {
          continue;
        }
        chosen.push_back(v);
        if (extend_clique(candidates, size, i + 1, chosen, adjacent)) return true;
        chosen.pop_back();
      }
      return false;
    }
  }  // namespace

  std::optional<std::vector<ProcessorId>> find_clique(
      std::span<const ProcessorId> candidates, std::size_t size,
      const std::function<bool(ProcessorId, ProcessorId)> &adjacent) {
    std::vector<ProcessorId> chosen;
    chosen.reserve(size);
    if (extend_clique(candidates, size, 0, chosen, adjacent)) return chosen;
    return std::nullopt;
  }

  std::optional<std::vector<ProcessorId>> find_match_set(const BoolMatrix &match, std::size_t n,
                                                         std::size_t t) {
    if (match.size() != n) throw UsageError("match matrix needs n rows");
    std::vector<ProcessorId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return find_clique(all, n - t, [&](ProcessorId a, ProcessorId b) {
      return match[a].at(b) && match[b].at(a);
    });
  }

  std::optional<std::vector<ProcessorId>> find_decide_set(const DiagGraph &graph,
                                                          std::span<const ProcessorId> match_set,
                                                          std::size_t size) {
    return find_clique(match_set, size,
                       [&](ProcessorId a, ProcessorId b) { return graph.trusts(a, b); });
  }

  // ---------------------------------------------------------------------------
  // Engine

  namespace {
    bool contains(const std::vector<ProcessorId> &set, ProcessorId p) {
      return std::binary_search(set.begin(), set.end(), p);
    }

    bool well_formed(const rs::InterleavedCode &code, const rs::WideSymbol &s) {
      if (s.size() != code.stripes()) return false;
      const auto &field = code.code().field();
      return std::all_of(s.begin(), s.end(), [&](auto e) { return field.contains(e); });
    }

    rs::WideView restrict_to(const rs::WideView &view, const std::vector<ProcessorId> &members) {
      rs::WideView out(view.size());
      for (auto m : members) out[m] = view[m];
      return out;
    }
  }  // namespace

  ConsensusEngine::ConsensusEngine(ConsensusConfig config, Network &net,
                                   bsb::BroadcastProtocol &broadcast, Adversary *adversary,
                                   RunObserver *observer)
      : config_(std::move(config)),
        code_(config_.code()),
        net_(net),
        broadcast_(broadcast),
        adversary_(adversary),
        observer_(observer) {
    config_.validate();
    if (net_.size() != config_.n) throw UsageError("network size does not match n");
    if (broadcast_.fault_bound() < config_.t) {
      throw ConfigError("broadcast primitive tolerates fewer than t faults");
    }
    processors_.reserve(config_.n);
    for (ProcessorId p = 0; p < config_.n; ++p) {
      processors_.push_back(ProcessorState{p, DiagGraph::init_complete(config_.n), {}, {}, false});
    }
    world_.config = &config_;
    world_.code = &code_;
    world_.network = &net_;
    world_.processors = processors_;
    if (adversary_ != nullptr) adversary_->attach(&world_);
  }

  ProcessorId ConsensusEngine::reference() const {
    for (ProcessorId p = 0; p < config_.n; ++p) {
      if (!net_.is_faulty(p)) return p;
    }
    throw InvariantViolation("no fault-free processor");
  }

  void ConsensusEngine::set_stage(Stage stage) { world_.stage = stage; }

  void ConsensusEngine::adopt_reference_outputs(bsb::BatchResult &result) const {
    // The adversary knows every broadcast outcome; faulty processors act on
    // the fault-free view.
    const auto ref = reference();
    for (auto &row : result.outputs) {
      for (ProcessorId p = 0; p < config_.n; ++p) {
        if (net_.is_faulty(p)) row[p] = row[ref];
      }
    }
  }

  void ConsensusEngine::record_events(ProcessorId p, const std::vector<EdgeRemovalEvent> &events) {
    if (observer_ != nullptr && p == reference() && !events.empty()) {
      observer_->on_edges_removed(events);
    }
  }

  void ConsensusEngine::begin_generation(std::size_t g) {
    if (adversary_ != nullptr) {
      for (auto p : adversary_->corrupt_now()) {
        if (p < config_.n && !net_.is_faulty(p) && net_.faulty_count() < config_.t) net_.corrupt(p);
      }
    }
    world_.generation = g;
    set_stage(Stage::matching);
    for (auto &ps : processors_) {
      ps.gen = GenerationState{};
      ps.gen.g = g;
      ps.gen.my_codeword = code_.encode(inputs_[ps.id].slice(g * config_.D, config_.D));
    }
    if (observer_ != nullptr) observer_->on_generation_begin(g);
  }

  bool ConsensusEngine::matching_stage() {
    const auto n = config_.n;
    const auto g = world_.generation;
    set_stage(Stage::matching);

    // Each processor sends its own coded symbol to the processors it trusts.
    Outbox<rs::WideSymbol> box(n);
    for (const auto &ps : processors_) {
      for (ProcessorId q = 0; q < n; ++q) {
        if (q != ps.id && ps.diag.trusts(ps.id, q)) box.at(ps.id, q) = ps.gen.my_codeword[ps.id];
      }
    }
    auto delivered = net_.exchange_symbols(g, std::move(box), code_.symbol_bits());
    if (observer_ != nullptr) observer_->on_symbols(g, delivered);

    std::vector<bsb::Request> requests;
    requests.reserve(n * (n - 1));
    for (auto &ps : processors_) {
      auto &gen = ps.gen;
      gen.received.assign(n, std::nullopt);
      gen.match_vector.assign(n, false);
      for (ProcessorId p = 0; p < n; ++p) {
        if (p == ps.id) {
          gen.received[p] = gen.my_codeword[p];
          gen.match_vector[p] = true;
          continue;
        }
        // Untrusted senders and malformed payloads read as unknown.
        const auto &msg = delivered.at(p, ps.id);
        if (ps.diag.trusts(ps.id, p) && msg && well_formed(code_, *msg)) gen.received[p] = *msg;
        gen.match_vector[p] = gen.received[p] && *gen.received[p] == gen.my_codeword[p];
      }
      if (adversary_ != nullptr && net_.is_faulty(ps.id)) {
        adversary_->match_vector(ps.id, gen.match_vector);
        gen.match_vector.resize(n, false);
      }
      for (ProcessorId q = 0; q < n; ++q) {
        if (q != ps.id) requests.push_back({ps.id, static_cast<bool>(gen.match_vector[q])});
      }
    }

    auto result = broadcast_.run_batch(net_, BroadcastKind::match_vector, requests);
    if (observer_ != nullptr) observer_->on_bsb_batch(g, BroadcastKind::match_vector, requests, result);
    adopt_reference_outputs(result);

    for (auto &ps : processors_) {
      auto &m = ps.gen.match_matrix;
      m.assign(n, std::vector<bool>(n, false));
      std::size_t idx = 0;
      for (ProcessorId src = 0; src < n; ++src) {
        m[src][src] = true;
        for (ProcessorId q = 0; q < n; ++q) {
          if (q != src) m[src][q] = result.outputs[idx++][ps.id];
        }
      }
      ps.gen.p_match = find_match_set(m, n, config_.t);
    }
    if (observer_ != nullptr) observer_->on_stage_end(g, Stage::matching, processors_);

    if (processors_[reference()].gen.p_match) return true;

    for (auto &ps : processors_) {
      ps.gen.decision = config_.default_value();
      ps.gen.path = DecisionPath::default_value;
      ps.decisions.push_back(*ps.gen.decision);
      ps.terminated_default = true;
    }
    if (observer_ != nullptr) observer_->on_decision(g, DecisionPath::default_value, processors_);
    return false;
  }

  void ConsensusEngine::decide(ProcessorState &ps, const rs::WideView &view, DecisionPath path) {
    try {
      ps.gen.decision = code_.decode(view);
    } catch (const Error &e) {
      if (!net_.is_faulty(ps.id)) {
        throw InvariantViolation("fault-free P" + std::to_string(ps.id + 1) +
                                 " cannot decode in generation " +
                                 std::to_string(ps.gen.g + 1) + ": " + e.what());
      }
      ps.gen.decision = config_.default_value();
    }
    ps.gen.path = path;
    ps.decisions.push_back(*ps.gen.decision);
  }

  bool ConsensusEngine::checking_stage() {
    const auto n = config_.n;
    const auto g = world_.generation;
    set_stage(Stage::checking);
    const auto members = *processors_[reference()].gen.p_match;

    std::vector<ProcessorId> outsiders;
    for (ProcessorId p = 0; p < n; ++p) {
      if (!contains(members, p)) outsiders.push_back(p);
    }

    // Outsiders test what they received from the match set; entries from
    // members they do not trust are already unknown.
    std::vector<bsb::Request> requests;
    for (auto j : outsiders) {
      auto &ps = processors_[j];
      bool flag = !code_.is_consistent(restrict_to(ps.gen.received, members));
      if (adversary_ != nullptr && net_.is_faulty(j)) adversary_->detected_flag(j, flag);
      requests.push_back({j, flag});
    }
    auto result = broadcast_.run_batch(net_, BroadcastKind::detected, requests);
    if (observer_ != nullptr) observer_->on_bsb_batch(g, BroadcastKind::detected, requests, result);
    adopt_reference_outputs(result);

    bool any = false;
    for (auto &ps : processors_) {
      ps.gen.detected.assign(n, false);
      for (std::size_t i = 0; i < outsiders.size(); ++i) {
        const auto j = outsiders[i];
        // Isolated processors are no longer listened to.
        ps.gen.detected[j] = result.outputs[i][ps.id] && !ps.diag.isolated(j);
      }
      if (ps.id == reference()) {
        any = std::find(ps.gen.detected.begin(), ps.gen.detected.end(), true) != ps.gen.detected.end();
      }
    }
    if (observer_ != nullptr) observer_->on_stage_end(g, Stage::checking, processors_);
    if (any) return false;

    for (auto &ps : processors_) decide(ps, restrict_to(ps.gen.received, members), DecisionPath::checking);
    if (observer_ != nullptr) observer_->on_decision(g, DecisionPath::checking, processors_);
    return true;
  }

  void ConsensusEngine::diagnosis_stage() {
    const auto n = config_.n;
    const auto g = world_.generation;
    const auto s = code_.symbol_bits();
    set_stage(Stage::diagnosis);
    ++diagnosis_count_;
    const auto members = *processors_[reference()].gen.p_match;

    // Members broadcast their own coded symbol, one instance per bit.
    std::vector<bsb::Request> requests;
    requests.reserve(members.size() * s);
    for (auto j : members) {
      auto symbol = processors_[j].gen.my_codeword[j];
      if (adversary_ != nullptr && net_.is_faulty(j)) {
        adversary_->diagnosis_symbol(j, symbol);
        if (!well_formed(code_, symbol)) symbol = processors_[j].gen.my_codeword[j];
      }
      const auto bits = code_.symbol_to_bits(symbol);
      for (std::size_t b = 0; b < s; ++b) requests.push_back({j, bits.get(b)});
    }
    auto sym_result = broadcast_.run_batch(net_, BroadcastKind::symbol, requests);
    if (observer_ != nullptr) observer_->on_bsb_batch(g, BroadcastKind::symbol, requests, sym_result);
    adopt_reference_outputs(sym_result);

    for (auto &ps : processors_) {
      auto &gen = ps.gen;
      gen.diagnosed = true;
      gen.rsharp.assign(n, std::nullopt);
      for (std::size_t m = 0; m < members.size(); ++m) {
        BitString bits(s);
        for (std::size_t b = 0; b < s; ++b) bits.set(b, sym_result.outputs[m * s + b][ps.id]);
        gen.rsharp[members[m]] = code_.bits_to_symbol(bits);
      }
    }

    // Trust verdicts over the match set.
    std::vector<bsb::Request> trust_requests;
    trust_requests.reserve(n * members.size());
    for (auto &ps : processors_) {
      const auto &gen = ps.gen;
      std::vector<bool> row(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) {
        const auto j = members[m];
        if (j == ps.id) {
          row[m] = gen.my_codeword[j] == *gen.rsharp[j];
        } else {
          row[m] = ps.diag.trusts(ps.id, j) && gen.received[j] && *gen.received[j] == *gen.rsharp[j];
        }
      }
      if (adversary_ != nullptr && net_.is_faulty(ps.id)) {
        adversary_->trust_vector(ps.id, row);
        row.resize(members.size(), true);
      }
      for (std::size_t m = 0; m < members.size(); ++m) trust_requests.push_back({ps.id, row[m]});
    }
    auto trust_result = broadcast_.run_batch(net_, BroadcastKind::trust, trust_requests);
    if (observer_ != nullptr) {
      observer_->on_bsb_batch(g, BroadcastKind::trust, trust_requests, trust_result);
    }
    adopt_reference_outputs(trust_result);

    for (auto &ps : processors_) {
      auto &gen = ps.gen;
      gen.trust.members = members;
      gen.trust.rows.assign(n, std::vector<bool>(members.size()));
      std::vector<bool> ignored(n);
      for (ProcessorId src = 0; src < n; ++src) {
        ignored[src] = ps.diag.isolated(src);
        for (std::size_t m = 0; m < members.size(); ++m) {
          gen.trust.rows[src][m] = trust_result.outputs[src * members.size() + m][ps.id];
        }
      }
      auto removed = ps.diag.apply_trust_vectors(gen.trust, g, ignored);
      const bool consistent = code_.is_consistent(gen.rsharp);
      auto accusers = ps.diag.isolate_false_accusers(consistent, gen.detected, members, removed, g);
      auto degree = ps.diag.apply_degree_rule(config_.t, g);
      removed.insert(removed.end(), accusers.begin(), accusers.end());
      removed.insert(removed.end(), degree.begin(), degree.end());
      record_events(ps.id, removed);

      gen.p_decide = find_decide_set(ps.diag, members, config_.k());
      if (!gen.p_decide) {
        if (!net_.is_faulty(ps.id)) {
          throw InvariantViolation("no decide set in generation " + std::to_string(g + 1));
        }
        gen.decision = config_.default_value();
        gen.path = DecisionPath::diagnosis;
        ps.decisions.push_back(*gen.decision);
        continue;
      }
      decide(ps, restrict_to(gen.rsharp, *gen.p_decide), DecisionPath::diagnosis);
    }
    if (observer_ != nullptr) {
      observer_->on_stage_end(g, Stage::diagnosis, processors_);
      observer_->on_decision(g, DecisionPath::diagnosis, processors_);
    }
  }

  std::vector<ConsensusOutput> ConsensusEngine::run(std::span<const BitString> inputs) {
    if (inputs.size() != config_.n) throw UsageError("need one input per processor");
    inputs_.clear();
    for (const auto &v : inputs) {
      if (v.size() != config_.L) {
        throw UsageError("input has " + std::to_string(v.size()) + " bits, expected L=" +
                         std::to_string(config_.L));
      }
      inputs_.push_back(v.resized(config_.padded_L));
    }
    world_.inputs = inputs_;

    for (std::size_t g = 0; g < config_.generations(); ++g) {
      const auto before = net_.traffic();
      begin_generation(g);
      bool diagnosed = false;
      const bool matched = matching_stage();
      if (matched && !checking_stage()) {
        diagnosis_stage();
        diagnosed = true;
      }
      if (observer_ != nullptr) observer_->on_generation_end(g, net_.traffic() - before, diagnosed);
      if (!matched) break;
    }

    std::vector<ConsensusOutput> outputs;
    outputs.reserve(config_.n);
    for (const auto &ps : processors_) {
      ConsensusOutput out;
      out.per_generation = ps.decisions;
      out.terminated_default = ps.terminated_default;
      if (ps.terminated_default) {
        out.value = BitString(config_.L);
      } else {
        BitString all;
        for (const auto &d : ps.decisions) all.append(d);
        out.value = all.resized(config_.L);
      }
      outputs.push_back(std::move(out));
    }
    return outputs;
  }

  ConsensusRun run_consensus(const ConsensusConfig &config, std::span<const BitString> inputs,
                             const std::vector<bool> &faulty, Adversary *adversary,
                             RunObserver *observer) {
    Network net(config.n, faulty, adversary);
    bsb::PhaseKingBroadcast broadcast(config.n, config.t);
    ConsensusEngine engine(config, net, broadcast, adversary, observer);
    ConsensusRun run;
    run.outputs = engine.run(inputs);
    run.traffic = net.traffic();
    run.diagnosis_count = engine.diagnosis_count();
    return run;
  }

}  // namespace mvbc
