// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_SCENARIO_HPP
#define MVBC_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvbc/bits.hpp"
#include "mvbc/network.hpp"
#include "mvbc/transcript.hpp"

namespace mvbc::sim {

  /// Adversary strategy name plus free-form parameters.
  struct StrategySpec {
    std::string name = "honest";
    std::map<std::string, std::string> params;

    std::optional<std::string> param(const std::string &key) const;
    std::uint64_t param_uint(const std::string &key, std::uint64_t fallback) const;
  };

  /**
   * Input generators. `spec` is one of
   *   0x<hex>                  literal value
   *   all_same:0x<hex>         the literal, for every processor
   *   random[:seed]            independent uniform values per processor
   *   random_same[:seed]       one uniform value shared by all
   *   split:0x<a>,0x<b>        first ceil(n/2) processors get a, the rest b
   * Seeds default to the scenario seed.
   */
  struct InputSpec {
    std::string spec = "all_same:0x0";
    std::map<ProcessorId, std::string> overrides;  // per processor, 0-based
  };

  struct Scenario {
    std::string name = "scenario";
    std::size_t n = 4;
    std::size_t t = 1;
    std::size_t L = 0;
    std::optional<std::size_t> D;
    std::vector<ProcessorId> faulty;  // 0-based
    InputSpec inputs;
    StrategySpec strategy;
    std::uint64_t seed = 0;

    /// Throws ConfigError on a violated invariant.
    void validate() const;
    /// One L-bit value per processor.
    std::vector<BitString> resolve_inputs() const;
    std::vector<bool> faulty_mask() const;

    /// JSON form with 1-based processor ids (the file format).
    json to_json() const;
  };

  /// Flat key/value format; see the README for the grammar.
  Scenario parse_scenario_text(std::string_view text);
  Scenario parse_scenario_json(std::string_view text);
  Scenario scenario_from_json(const json &j);
  /// Dispatches on the extension: ".json" is JSON, anything else key/value.
  Scenario load_scenario(const std::filesystem::path &path);

}  // namespace mvbc::sim

#endif  // MVBC_SCENARIO_HPP
