// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_CONSENSUS_HPP
#define MVBC_CONSENSUS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvbc/bits.hpp"
#include "mvbc/bsb.hpp"
#include "mvbc/diagnosis_graph.hpp"
#include "mvbc/interleaved.hpp"
#include "mvbc/network.hpp"

namespace mvbc {

  /**
   * Parameters of one L-bit consensus run. A generation agrees on D bits,
   * coded as k = n - 2t data symbols of D/k bits each. A symbol is
   * `stripes` elements of GF(2^c), so D = k * c * stripes.
   */
  struct ConsensusConfig {
    std::size_t n = 0;
    std::size_t t = 0;
    std::size_t L = 0;         // caller's input length
    std::size_t padded_L = 0;  // L rounded up to a multiple of D
    std::size_t D = 0;
    unsigned c = 0;            // field width
    std::size_t stripes = 0;
    std::uint64_t measured_B = 0;

    std::size_t k() const noexcept { return n - 2 * t; }
    std::size_t symbol_bits() const noexcept { return D / k(); }
    std::size_t generations() const noexcept { return D == 0 ? 0 : padded_L / D; }
    /// Decision used when no match set exists.
    BitString default_value() const { return BitString(D); }

    /// Throws ConfigError when an invariant does not hold.
    void validate() const;
    rs::InterleavedCode code() const;
  };

  /// max(ceil(log2(n + 1)), 2): the narrowest field with n nonzero points.
  unsigned field_bits_for(std::size_t n);

  /**
   * D = sqrt((n^2-n+t)(n-2t)L / (t(t+1)(n-t))) rounded up to a multiple of
   * k*c, and capped at L rounded up to that multiple (t = 0 uses the cap).
   * `d_override`, when given, must itself be a positive multiple of k*c.
   */
  ConsensusConfig choose_parameters(std::size_t n, std::size_t t, std::size_t L,
                                    std::uint64_t measured_B,
                                    std::optional<std::size_t> d_override = std::nullopt);

  using BoolMatrix = std::vector<std::vector<bool>>;

  /// Lexicographically smallest `size`-subset of `candidates` (sorted
  /// ascending) in which every pair satisfies `adjacent`.
  std::optional<std::vector<ProcessorId>> find_clique(
      std::span<const ProcessorId> candidates, std::size_t size,
      const std::function<bool(ProcessorId, ProcessorId)> &adjacent);

  /// Smallest n-t set with M[j][k] and M[k][j] TRUE for all members.
  std::optional<std::vector<ProcessorId>> find_match_set(const BoolMatrix &match, std::size_t n,
                                                         std::size_t t);

  /// Smallest n-2t subset of `match_set` that is pairwise trusting in `graph`.
  std::optional<std::vector<ProcessorId>> find_decide_set(const DiagGraph &graph,
                                                          std::span<const ProcessorId> match_set,
                                                          std::size_t size);

  enum class Stage { matching, checking, diagnosis };
  std::string_view to_string(Stage stage);

  enum class DecisionPath { checking, diagnosis, default_value };
  std::string_view to_string(DecisionPath path);

  /// One processor's state within a generation.
  struct GenerationState {
    std::size_t g = 0;
    std::vector<rs::WideSymbol> my_codeword;  // S_i
    rs::WideView received;                    // R_i; own slot holds S_i[i]
    std::vector<bool> match_vector;           // M_i
    BoolMatrix match_matrix;                  // every M_j as delivered
    std::optional<std::vector<ProcessorId>> p_match;
    std::vector<bool> detected;               // by processor; FALSE inside P_match
    bool diagnosed = false;
    rs::WideView rsharp;                      // R#, slots of P_match only
    TrustMatrix trust;
    std::optional<std::vector<ProcessorId>> p_decide;
    std::optional<BitString> decision;
    DecisionPath path = DecisionPath::checking;
  };

  struct ProcessorState {
    ProcessorId id = 0;
    DiagGraph diag;
    GenerationState gen;
    std::vector<BitString> decisions;
    bool terminated_default = false;
  };

  struct ConsensusOutput {
    BitString value;                     // L bits
    std::vector<BitString> per_generation;
    bool terminated_default = false;
  };

  /// Everything an omniscient adversary may look at.
  struct WorldView {
    const ConsensusConfig *config = nullptr;
    const rs::InterleavedCode *code = nullptr;
    std::span<const BitString> inputs;  // padded to padded_L
    std::span<const ProcessorState> processors;
    const Network *network = nullptr;
    std::size_t generation = 0;
    Stage stage = Stage::matching;

    bool is_faulty(ProcessorId p) const { return network->is_faulty(p); }
    /// Codeword an honest p computes this generation.
    const std::vector<rs::WideSymbol> &codeword(ProcessorId p) const {
      return processors[p].gen.my_codeword;
    }
  };

  /**
   * Byzantine behaviour of the faulty processors. Message-level hooks come
   * from RoundInterceptor; the hooks here rewrite the values a faulty
   * processor feeds into broadcasts, starting from what an honest processor
   * in its position would use.
   */
  class Adversary : public RoundInterceptor {
  public:
    virtual std::string name() const = 0;

    void attach(const WorldView *world) noexcept { world_ = world; }

    /// Processors to take over at the start of a generation (capped at t).
    virtual std::vector<ProcessorId> corrupt_now() { return {}; }
    virtual void match_vector(ProcessorId /*p*/, std::vector<bool> & /*m*/) {}
    virtual void detected_flag(ProcessorId /*p*/, bool & /*flag*/) {}
    virtual void diagnosis_symbol(ProcessorId /*p*/, rs::WideSymbol & /*symbol*/) {}
    virtual void trust_vector(ProcessorId /*p*/, std::vector<bool> & /*row*/) {}

  protected:
    const WorldView &world() const { return *world_; }

  private:
    const WorldView *world_ = nullptr;
  };

  /// Fault-free behaviour.
  class HonestAdversary final : public Adversary {
  public:
    std::string name() const override { return "honest"; }
  };

  /// Callbacks at protocol boundaries, used for transcripts and checks.
  class RunObserver {
  public:
    virtual ~RunObserver() = default;
    virtual void on_generation_begin(std::size_t /*g*/) {}
    virtual void on_symbols(std::size_t /*g*/, const Outbox<rs::WideSymbol> & /*delivered*/) {}
    virtual void on_bsb_batch(std::size_t /*g*/, BroadcastKind /*kind*/,
                              std::span<const bsb::Request> /*requests*/,
                              const bsb::BatchResult & /*result*/) {}
    virtual void on_stage_end(std::size_t /*g*/, Stage /*stage*/,
                              std::span<const ProcessorState> /*processors*/) {}
    virtual void on_edges_removed(std::span<const EdgeRemovalEvent> /*events*/) {}
    virtual void on_decision(std::size_t /*g*/, DecisionPath /*path*/,
                             std::span<const ProcessorState> /*processors*/) {}
    virtual void on_generation_end(std::size_t /*g*/, const Traffic & /*delta*/, bool /*diagnosed*/) {}
  };

  /**
   * The per-generation protocol and its L/D-generation driver. Every
   * processor's local computation runs against its own state; faulty
   * processors compute the honest result, which the adversary may then
   * rewrite. Control flow follows the (identical) view of the fault-free
   * processors.
   */
  class ConsensusEngine {
  public:
    ConsensusEngine(ConsensusConfig config, Network &net, bsb::BroadcastProtocol &broadcast,
                    Adversary *adversary = nullptr, RunObserver *observer = nullptr);

    /// Runs all generations; `inputs` holds one L-bit value per processor.
    std::vector<ConsensusOutput> run(std::span<const BitString> inputs);

    /// Loads generation g's inputs and clears per-generation state.
    void begin_generation(std::size_t g);
    /// Returns false when no match set exists (default decision taken).
    bool matching_stage();
    /// Returns true when no detection was reported and every processor decided.
    bool checking_stage();
    void diagnosis_stage();

    const ConsensusConfig &config() const noexcept { return config_; }
    const rs::InterleavedCode &code() const noexcept { return code_; }
    std::span<const ProcessorState> processors() const noexcept { return processors_; }
    std::size_t diagnosis_count() const noexcept { return diagnosis_count_; }
    /// Lowest-indexed fault-free processor; its view drives control flow.
    ProcessorId reference() const;

  private:
    void set_stage(Stage stage);
    void adopt_reference_outputs(bsb::BatchResult &result) const;
    void record_events(ProcessorId p, const std::vector<EdgeRemovalEvent> &events);
    void decide(ProcessorState &ps, const rs::WideView &view, DecisionPath path);

    ConsensusConfig config_;
    rs::InterleavedCode code_;
    Network &net_;
    bsb::BroadcastProtocol &broadcast_;
    Adversary *adversary_;
    RunObserver *observer_;
    std::vector<BitString> inputs_;
    std::vector<ProcessorState> processors_;
    WorldView world_;
    std::size_t diagnosis_count_ = 0;
  };

  struct ConsensusRun {
    std::vector<ConsensusOutput> outputs;
    Traffic traffic;
    std::size_t diagnosis_count = 0;
  };

  /// Convenience driver: fresh network, phase-king broadcast, given adversary.
  ConsensusRun run_consensus(const ConsensusConfig &config, std::span<const BitString> inputs,
                             const std::vector<bool> &faulty, Adversary *adversary = nullptr,
                             RunObserver *observer = nullptr);

}  // namespace mvbc

#endif  // MVBC_CONSENSUS_HPP
