// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_SIMULATOR_HPP
#define MVBC_SIMULATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "mvbc/consensus.hpp"
#include "mvbc/metrics.hpp"
#include "mvbc/scenario.hpp"
#include "mvbc/transcript.hpp"

namespace mvbc::sim {

  struct RunOptions {
    /// Log every delivered data-channel symbol (the bulk of a transcript).
    bool record_messages = true;
  };

  struct ScenarioResult {
    Scenario scenario;
    ConsensusConfig config;
    std::vector<BitString> inputs;
    std::vector<ConsensusOutput> outputs;
    std::vector<bool> faulty;       // final faulty set, including adaptive takeovers
    Transcript transcript;
    metrics::CommStats stats;
    std::vector<std::string> violations;
    std::optional<DiagGraph> final_graph;  // reference processor's view
    bool agreement = false;
    bool validity = false;          // vacuously true without identical fault-free inputs
    bool identical_inputs = false;  // among fault-free processors
    bool terminated_default = false;
    std::size_t diagnosis_count = 0;
    std::size_t last_diagnosis_generation = 0;  // 1-based; 0 when none ran

    bool ok() const noexcept { return violations.empty() && agreement && validity; }
    /// Output shared by the fault-free processors (empty without agreement).
    BitString agreed_output() const;
  };

  /**
   * Runs one scenario under its strategy while auditing every protocol
   * invariant, and returns the full transcript. Throws ConfigError for an
   * invalid scenario. Invariant failures are reported in `violations`.
   */
  ScenarioResult run_scenario(const Scenario &scenario, const RunOptions &options = {});

  /// Broadcast cost B measured on a fault-free network of n processors.
  std::uint64_t measured_bsb_cost(std::size_t n, std::size_t t);

  /// Parameters the simulator uses for a scenario.
  ConsensusConfig scenario_config(const Scenario &scenario);

}  // namespace mvbc::sim

#endif  // MVBC_SIMULATOR_HPP
