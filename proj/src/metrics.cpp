// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "mvbc/error.hpp"

namespace mvbc::metrics {

  namespace {
    constexpr BroadcastKind kKinds[] = {BroadcastKind::match_vector, BroadcastKind::detected,
                                        BroadcastKind::symbol, BroadcastKind::trust};

    std::size_t idx(BroadcastKind k) { return static_cast<std::size_t>(k); }

    json per_kind(const std::array<std::uint64_t, kBroadcastKinds> &values) {
      json out = json::object();
      for (auto k : kKinds) out[std::string(to_string(k))] = values[idx(k)];
      return out;
    }

    std::array<std::uint64_t, kBroadcastKinds> read_per_kind(const json &j) {
      std::array<std::uint64_t, kBroadcastKinds> out{};
      for (auto k : kKinds) out[idx(k)] = j.at(std::string(to_string(k))).get<std::uint64_t>();
      return out;
    }

    StageCost matching_cost(const Traffic &t) {
      return {t.data_bits, t.bsb_invocations[idx(BroadcastKind::match_vector)],
              t.bsb_bits[idx(BroadcastKind::match_vector)]};
    }

    StageCost checking_cost(const Traffic &t) {
      return {0, t.bsb_invocations[idx(BroadcastKind::detected)],
              t.bsb_bits[idx(BroadcastKind::detected)]};
    }

    StageCost diagnosis_cost(const Traffic &t) {
      return {0,
              t.bsb_invocations[idx(BroadcastKind::symbol)] + t.bsb_invocations[idx(BroadcastKind::trust)],
              t.bsb_bits[idx(BroadcastKind::symbol)] + t.bsb_bits[idx(BroadcastKind::trust)]};
    }

    json cost_json(const StageCost &c) {
      return {{"data_bits", c.data_bits}, {"bsb_invocations", c.bsb_invocations}, {"bsb_bits", c.bsb_bits}};
    }
  }  // namespace

  std::uint64_t CommStats::invocations_matching() const noexcept {
    return total.bsb_invocations[idx(BroadcastKind::match_vector)];
  }
  std::uint64_t CommStats::invocations_checking() const noexcept {
    return total.bsb_invocations[idx(BroadcastKind::detected)];
  }
  std::uint64_t CommStats::invocations_diagnosis() const noexcept {
    return total.bsb_invocations[idx(BroadcastKind::symbol)] +
           total.bsb_invocations[idx(BroadcastKind::trust)];
  }

  json CommStats::to_json() const {
    return {
        {"data_bits_matching", data_bits_matching()},
        {"bsb_invocations_by_stage",
         {{"matching", invocations_matching()},
          {"checking", invocations_checking()},
          {"diagnosis", invocations_diagnosis()}}},
        {"bsb_invocations", per_kind(total.bsb_invocations)},
        {"bsb_bits", per_kind(total.bsb_bits)},
        {"bsb_bits_total", bsb_bits_total()},
        {"rounds", total.rounds},
        {"diagnosis_stage_count", diagnosis_stage_count},
        {"generations", generations()},
    };
  }

  json generation_stats_record(const GenerationStats &row) {
    return {
        {"type", "generation_stats"},
        {"g", row.g + 1},
        {"matched", row.matched},
        {"diagnosed", row.diagnosed},
        {"data_bits", row.traffic.data_bits},
        {"rounds", row.traffic.rounds},
        {"bsb_invocations", per_kind(row.traffic.bsb_invocations)},
        {"bsb_bits", per_kind(row.traffic.bsb_bits)},
    };
  }

  CommStats CommStats::from_transcript(const Transcript &transcript) {
    CommStats stats;
    try {
      for (const auto *r : transcript.of_type("generation_stats")) {
        GenerationStats row;
        row.g = r->at("g").get<std::size_t>() - 1;
        row.matched = r->at("matched").get<bool>();
        row.diagnosed = r->at("diagnosed").get<bool>();
        row.traffic.data_bits = r->at("data_bits").get<std::uint64_t>();
        row.traffic.rounds = r->at("rounds").get<std::uint64_t>();
        row.traffic.bsb_invocations = read_per_kind(r->at("bsb_invocations"));
        row.traffic.bsb_bits = read_per_kind(r->at("bsb_bits"));
        stats.total.data_bits += row.traffic.data_bits;
        stats.total.rounds += row.traffic.rounds;
        for (std::size_t i = 0; i < kBroadcastKinds; ++i) {
          stats.total.bsb_invocations[i] += row.traffic.bsb_invocations[i];
          stats.total.bsb_bits[i] += row.traffic.bsb_bits[i];
        }
        stats.diagnosis_stage_count += row.diagnosed ? 1 : 0;
        stats.per_generation.push_back(row);
      }
    } catch (const json::exception &e) {
      throw ParseError(std::string("malformed generation_stats record: ") + e.what(), 0);
    }
    return stats;
  }

  GenerationPrediction predict_per_generation(std::size_t n, std::size_t t, std::size_t D,
                                              std::uint64_t B) {
    const std::size_t k = n - 2 * t;
    if (3 * t >= n || D % k != 0) {
      throw ConfigError("D must be a multiple of n-2t with 3t < n");
    }
    const std::uint64_t s = D / k;
    GenerationPrediction p;
    p.matching.data_bits = n * (n - 1) * s;
    p.matching.bsb_invocations = n * (n - 1);
    p.matching.bsb_bits = p.matching.bsb_invocations * B;
    p.checking.bsb_invocations = t;
    p.checking.bsb_bits = t * B;
    p.diagnosis.bsb_invocations = (n - t) * s + n * (n - t);
    p.diagnosis.bsb_bits = p.diagnosis.bsb_invocations * B;
    return p;
  }

  std::uint64_t predict_total(std::size_t n, std::size_t t, std::size_t L, std::size_t D,
                              std::uint64_t B) {
    if (D == 0 || L % D != 0) throw ConfigError("L must be a multiple of D");
    const auto p = predict_per_generation(n, t, D, B);
    const std::uint64_t generations = L / D;
    return (p.matching.total() + p.checking.total()) * generations +
           static_cast<std::uint64_t>(t * (t + 1)) * p.diagnosis.total();
  }

  ValidationReport validate(const Transcript &transcript, const ConsensusConfig &config) {
    ValidationReport rep;
    rep.n = config.n;
    rep.t = config.t;
    rep.L = config.padded_L;
    rep.D = config.D;
    rep.B = config.measured_B;
    const auto &summary = transcript.summary();
    rep.nominal = summary.value("nominal", false);

    const auto stats = CommStats::from_transcript(transcript);
    const auto pred = predict_per_generation(config.n, config.t, config.D, config.measured_B);
    auto fail = [&rep](std::size_t g, const std::string &what) {
      rep.failures.push_back("generation " + std::to_string(g + 1) + ": " + what);
    };
    auto compare = [&](std::size_t g, const char *stage, const StageCost &got, const StageCost &want,
                       bool exact_bits) {
      if (got.bsb_invocations != want.bsb_invocations) {
        fail(g, std::string(stage) + " broadcasts " + std::to_string(got.bsb_invocations) +
                    " != predicted " + std::to_string(want.bsb_invocations));
      }
      auto check_bits = [&](const char *what, std::uint64_t a, std::uint64_t b) {
        if (exact_bits ? a != b : a > b) {
          fail(g, std::string(stage) + " " + what + " " + std::to_string(a) +
                      (exact_bits ? " != " : " > ") + "predicted " + std::to_string(b));
        }
      };
      check_bits("data bits", got.data_bits, want.data_bits);
      check_bits("broadcast bits", got.bsb_bits, want.bsb_bits);
    };

    for (const auto &g : stats.per_generation) {
      ValidationRow row;
      row.g = g.g;
      row.matched = g.matched;
      row.diagnosed = g.diagnosed;
      row.measured_matching = matching_cost(g.traffic);
      row.measured_checking = checking_cost(g.traffic);
      row.measured_diagnosis = diagnosis_cost(g.traffic);
      row.predicted_matching = pred.matching;
      row.predicted_checking = g.matched ? pred.checking : StageCost{};
      row.predicted_diagnosis = g.diagnosed ? pred.diagnosis : StageCost{};
      compare(g.g, "matching", row.measured_matching, row.predicted_matching, rep.nominal);
      compare(g.g, "checking", row.measured_checking, row.predicted_checking, rep.nominal);
      compare(g.g, "diagnosis", row.measured_diagnosis, row.predicted_diagnosis, rep.nominal);
      rep.measured_total += row.measured_matching.total() + row.measured_checking.total() +
                            row.measured_diagnosis.total();
      rep.rows.push_back(row);
    }
    rep.diagnosis_stage_count = stats.diagnosis_stage_count;
    if (rep.diagnosis_stage_count > config.t * (config.t + 1)) {
      rep.failures.push_back("diagnosis stage ran " + std::to_string(rep.diagnosis_stage_count) +
                             " times, bound t(t+1) = " + std::to_string(config.t * (config.t + 1)));
    }
    rep.predicted_total = predict_total(config.n, config.t, config.padded_L, config.D, config.measured_B);
    if (rep.measured_total > rep.predicted_total) {
      rep.failures.push_back("total " + std::to_string(rep.measured_total) + " bits exceeds C_con(L) = " +
                             std::to_string(rep.predicted_total));
    }
    return rep;
  }

  json ValidationReport::to_json() const {
    json rows_json = json::array();
    for (const auto &r : rows) {
      rows_json.push_back({{"g", r.g + 1},
                           {"matched", r.matched},
                           {"diagnosed", r.diagnosed},
                           {"measured", {{"matching", cost_json(r.measured_matching)},
                                         {"checking", cost_json(r.measured_checking)},
                                         {"diagnosis", cost_json(r.measured_diagnosis)}}},
                           {"predicted", {{"matching", cost_json(r.predicted_matching)},
                                          {"checking", cost_json(r.predicted_checking)},
                                          {"diagnosis", cost_json(r.predicted_diagnosis)}}}});
    }
    return {{"n", n},
            {"t", t},
            {"L", L},
            {"D", D},
            {"B", B},
            {"nominal", nominal},
            {"passed", passed()},
            {"failures", failures},
            {"diagnosis_stage_count", diagnosis_stage_count},
            {"diagnosis_bound", t * (t + 1)},
            {"measured_total_bits", measured_total},
            {"predicted_total_bits", predicted_total},
            {"ratio", ratio()},
            {"generations", rows_json}};
  }

  std::string ValidationReport::to_table() const {
    std::ostringstream out;
    out << "n=" << n << " t=" << t << " L(padded)=" << L << " D=" << D << " B=" << B
        << (nominal ? " (nominal: exact match required)" : " (adversarial: upper bounds)") << '\n';
    out << std::setw(5) << "gen" << std::setw(6) << "diag" << std::setw(12) << "data"
        << std::setw(12) << "data*" << std::setw(8) << "bsb" << std::setw(8) << "bsb*"
        << std::setw(12) << "bsb_bits" << std::setw(12) << "bsb_bits*" << '\n';
    for (const auto &r : rows) {
      const auto inv = r.measured_matching.bsb_invocations + r.measured_checking.bsb_invocations +
                       r.measured_diagnosis.bsb_invocations;
      const auto inv_p = r.predicted_matching.bsb_invocations + r.predicted_checking.bsb_invocations +
                         r.predicted_diagnosis.bsb_invocations;
      const auto bits = r.measured_matching.bsb_bits + r.measured_checking.bsb_bits +
                        r.measured_diagnosis.bsb_bits;
      const auto bits_p = r.predicted_matching.bsb_bits + r.predicted_checking.bsb_bits +
                          r.predicted_diagnosis.bsb_bits;
      out << std::setw(5) << r.g + 1 << std::setw(6) << (r.diagnosed ? "yes" : "-")
          << std::setw(12) << r.measured_matching.data_bits << std::setw(12)
          << r.predicted_matching.data_bits << std::setw(8) << inv << std::setw(8) << inv_p
          << std::setw(12) << bits << std::setw(12) << bits_p << '\n';
    }
    out << "(* = predicted)\n";
    out << "diagnosis stages: " << diagnosis_stage_count << " (bound " << t * (t + 1) << ")\n";
    out << "total bits: " << measured_total << " / C_con(L) = " << predicted_total << " (ratio "
        << std::fixed << std::setprecision(4) << ratio() << ")\n";
    out << (passed() ? "PASS" : "FAIL") << '\n';
    for (const auto &f : failures) out << "  " << f << '\n';
    return out.str();
  }

  std::string ValidationReport::to_csv() const {
    std::ostringstream out;
    out << "g,matched,diagnosed,data_bits,data_bits_pred,match_bsb,match_bsb_pred,check_bsb,"
           "check_bsb_pred,diag_bsb,diag_bsb_pred,bsb_bits,bsb_bits_pred\n";
    for (const auto &r : rows) {
      out << r.g + 1 << ',' << r.matched << ',' << r.diagnosed << ','
          << r.measured_matching.data_bits << ',' << r.predicted_matching.data_bits << ','
          << r.measured_matching.bsb_invocations << ',' << r.predicted_matching.bsb_invocations << ','
          << r.measured_checking.bsb_invocations << ',' << r.predicted_checking.bsb_invocations << ','
          << r.measured_diagnosis.bsb_invocations << ',' << r.predicted_diagnosis.bsb_invocations << ','
          << r.measured_matching.bsb_bits + r.measured_checking.bsb_bits + r.measured_diagnosis.bsb_bits
          << ','
          << r.predicted_matching.bsb_bits + r.predicted_checking.bsb_bits +
                 r.predicted_diagnosis.bsb_bits
          << '\n';
    }
    return out.str();
  }

}  // namespace mvbc::metrics
