// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/explain.hpp"

#include <set>
#include <sstream>
#include <vector>

#include "mvbc/error.hpp"

namespace mvbc::sim {

  namespace {
    std::string set_text(const json &ids) {
      if (ids.is_null()) return "none";
      std::string out = "{";
      for (std::size_t i = 0; i < ids.size(); ++i) {
        out += (i ? "," : "") + std::string("P") + std::to_string(ids[i].get<std::size_t>());
      }
      return out + "}";
    }

    std::string cause_text(const std::string &cause) {
      if (cause == "trust_vector") return "trust-vector mismatch";
      if (cause == "false_accuser") return "false accusation";
      if (cause == "degree_rule") return "more than t removed edges";
      return cause;
    }
  }  // namespace

  std::string explain(const Transcript &transcript) {
    if (transcript.empty()) throw ParseError("transcript has no records", 0);
    std::ostringstream out;
    try {
      const auto scen = transcript.of_type("scenario");
      if (scen.empty()) throw ParseError("transcript has no scenario record", 0);
      const auto &sc = scen.front()->at("scenario");
      const auto &cfg = scen.front()->at("config");
      out << "scenario " << sc.at("name").get<std::string>() << ": n=" << cfg.at("n") << " t=" << cfg.at("t")
          << " L=" << cfg.at("L") << " D=" << cfg.at("D") << " (" << cfg.at("generations")
          << " generations, " << cfg.at("symbol_bits") << "-bit symbols, B=" << cfg.at("B") << ")\n";
      out << "strategy " << sc.at("strategy").at("name").get<std::string>() << ", faulty "
          << set_text(sc.at("faulty")) << ", seed " << sc.at("seed") << "\n";

      std::string line;
      std::vector<std::string> details;
      std::set<std::size_t> isolated_before;
      auto flush = [&] {
        if (!line.empty()) out << line << "\n";
        for (const auto &d : details) out << d << "\n";
        line.clear();
        details.clear();
      };
      for (const auto &r : transcript.records()) {
        const auto type = r.at("type").get<std::string>();
        if (type == "generation_begin") {
          flush();
          line = "generation " + std::to_string(r.at("g").get<std::size_t>()) + ":";
        } else if (type == "stage") {
          const auto stage = r.at("stage").get<std::string>();
          if (stage == "matching") {
            if (r.at("p_match").is_null()) {
              line += " no match set";
            } else {
              line += " P_match=" + set_text(r.at("p_match"));
            }
          } else if (stage == "checking") {
            if (r.at("detected").empty()) {
              line += ", no detection";
            } else {
              line += ", detection by " + set_text(r.at("detected"));
            }
          } else if (stage == "diagnosis") {
            line += ", diagnosis removed " + std::to_string(r.at("edges_removed").get<std::size_t>()) +
                    " edge(s)";
            json fresh = json::array();
            for (const auto &id : r.at("isolated")) {
              if (isolated_before.insert(id.get<std::size_t>()).second) fresh.push_back(id);
            }
            if (!fresh.empty()) line += ", isolated " + set_text(fresh);
            line += ", P_decide=" + set_text(r.at("p_decide"));
          }
        } else if (type == "edge_removed") {
          details.push_back("  edge P" + r.at("i").dump() + "-P" + r.at("j").dump() +
                            " removed: " + cause_text(r.at("cause").get<std::string>()));
        } else if (type == "decision") {
          const auto path = r.at("path").get<std::string>();
          if (path == "default") {
            line += ", default decision, run terminated";
          } else {
            line += ", decided " + r.at("value").get<std::string>();
          }
        } else if (type == "violation") {
          details.push_back("  VIOLATION: " + r.at("what").get<std::string>());
        }
      }
      flush();

      const auto &s = transcript.summary();
      out << "summary: " << (s.at("ok").get<bool>() ? "ok" : "FAILED")
          << ", agreement=" << (s.at("agreement").get<bool>() ? "yes" : "no")
          << ", validity=" << (s.at("validity").get<bool>() ? "yes" : "no")
          << ", diagnosis stages " << s.at("diagnosis_stage_count") << "/" << s.at("diagnosis_bound")
          << ", isolated " << set_text(s.at("isolated")) << "\n";
      for (const auto *o : transcript.of_type("output")) {
        out << "  P" << o->at("processor") << (o->at("faulty").get<bool>() ? " (faulty)" : "") << " output "
            << o->at("value").get<std::string>() << "\n";
      }
    } catch (const json::exception &e) {
      throw ParseError(std::string("malformed transcript: ") + e.what(), 0);
    }
    return out.str();
  }

}  // namespace mvbc::sim
