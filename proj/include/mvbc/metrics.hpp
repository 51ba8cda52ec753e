// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_METRICS_HPP
#define MVBC_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mvbc/consensus.hpp"
#include "mvbc/network.hpp"
#include "mvbc/transcript.hpp"

namespace mvbc::metrics {

  struct GenerationStats {
    std::size_t g = 0;
    bool matched = true;
    bool diagnosed = false;
    Traffic traffic;
  };

  /// Payload-bit accounting of a run. Totals equal the sum of the rows.
  struct CommStats {
    Traffic total;
    std::vector<GenerationStats> per_generation;
    std::size_t diagnosis_stage_count = 0;

    std::size_t generations() const noexcept { return per_generation.size(); }
    std::uint64_t data_bits_matching() const noexcept { return total.data_bits; }
    std::uint64_t bsb_bits_total() const noexcept { return total.bsb_bits_total(); }
    std::uint64_t invocations_matching() const noexcept;
    std::uint64_t invocations_checking() const noexcept;
    std::uint64_t invocations_diagnosis() const noexcept;

    json to_json() const;
    static CommStats from_transcript(const Transcript &transcript);
  };

  json generation_stats_record(const GenerationStats &row);

  struct StageCost {
    std::uint64_t data_bits = 0;
    std::uint64_t bsb_invocations = 0;
    std::uint64_t bsb_bits = 0;
    std::uint64_t total() const noexcept { return data_bits + bsb_bits; }
    friend bool operator==(const StageCost &, const StageCost &) = default;
  };

  struct GenerationPrediction {
    StageCost matching;
    StageCost checking;
    StageCost diagnosis;
  };

  /**
   * Stage costs of one generation with B the per-instance broadcast cost:
   * matching n(n-1)D/(n-2t) data bits and n(n-1) broadcasts, checking t
   * broadcasts, diagnosis (n-t)D/(n-2t) + n(n-t) broadcasts.
   * Throws ConfigError if (n-2t) does not divide D.
   */
  GenerationPrediction predict_per_generation(std::size_t n, std::size_t t, std::size_t D,
                                              std::uint64_t B);

  /// C_con(L): L/D generations of matching + checking plus t(t+1) diagnosis
  /// stages. L must be a multiple of D.
  std::uint64_t predict_total(std::size_t n, std::size_t t, std::size_t L, std::size_t D,
                              std::uint64_t B);

  struct ValidationRow {
    std::size_t g = 0;
    bool diagnosed = false;
    bool matched = true;
    StageCost measured_matching, predicted_matching;
    StageCost measured_checking, predicted_checking;
    StageCost measured_diagnosis, predicted_diagnosis;
  };

  struct ValidationReport {
    std::size_t n = 0, t = 0, L = 0, D = 0;
    std::uint64_t B = 0;
    bool nominal = false;  // no misbehaving processor: costs must match exactly
    std::vector<ValidationRow> rows;
    std::size_t diagnosis_stage_count = 0;
    std::uint64_t measured_total = 0;
    std::uint64_t predicted_total = 0;
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
    double ratio() const noexcept {
      return predicted_total == 0 ? 0.0
                                  : static_cast<double>(measured_total) /
                                        static_cast<double>(predicted_total);
    }
    json to_json() const;
    std::string to_table() const;
    std::string to_csv() const;
  };

  /**
   * Compares a completed transcript with the cost formulas. Broadcast
   * invocation counts must match exactly in every generation. Bit counts
   * must match exactly when the run is nominal and never exceed the
   * prediction otherwise. Diagnosis stages are bounded by t(t+1) and the
   * total by C_con(L).
   */
  ValidationReport validate(const Transcript &transcript, const ConsensusConfig &config);

}  // namespace mvbc::metrics

#endif  // MVBC_METRICS_HPP
