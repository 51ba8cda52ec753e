// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_STRATEGIES_HPP
#define MVBC_STRATEGIES_HPP

#include <memory>
#include <string>
#include <vector>

#include "mvbc/consensus.hpp"
#include "mvbc/scenario.hpp"

namespace mvbc::sim {

  /**
   * Built-in adversaries. All of them only act through faulty processors
   * and draw randomness from the scenario seed alone.
   *
   *   honest               faulty processors follow the protocol
   *   silent               faulty processors send nothing at all
   *   equivocate_matching  each faulty processor sends a wrong symbol to
   *                        `victims` (default 1) fault-free peers
   *   false_detect         faulty processors outside the match set claim
   *                        a detection
   *   corrupt_bsb          faulty processors lie inside broadcast
   *                        instances; `mode` is random, flip or split
   *   randomized           random deviations everywhere; `rate` is a
   *                        percentage (default 30)
   *   persistent           misbehaves every generation until isolated;
   *                        `pace` slow (one processor at a time) or fast
   *   frame                faulty processors collude against `target`
   *                        (1-based, default the lowest fault-free id)
   *   adaptive             takes over processors at generation `at`
   *                        (default 2), up to t in total, then acts as
   *                        persistent; `targets` lists 1-based ids
   */
  std::vector<std::string> builtin_strategies();

  /// Throws ConfigError for an unknown name or bad parameter.
  std::unique_ptr<Adversary> make_strategy(const Scenario &scenario);

}  // namespace mvbc::sim

#endif  // MVBC_STRATEGIES_HPP
