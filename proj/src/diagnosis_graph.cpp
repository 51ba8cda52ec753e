// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/diagnosis_graph.hpp"

#include <algorithm>
#include <string>

namespace mvbc {

  std::string_view to_string(RemovalCause cause) {
    switch (cause) {
      case RemovalCause::trust_vector:
        return "trust_vector";
      case RemovalCause::false_accuser:
        return "false_accuser";
      case RemovalCause::degree_rule:
        return "degree_rule";
    }
    return "unknown";
  }

  DiagGraph::DiagGraph(std::size_t n)
      : n_(n), adjacency_(n * n, true), removed_(n, 0), isolated_(n, false) {
    for (std::size_t i = 0; i < n; ++i) adjacency_[i * n + i] = false;
  }

  DiagGraph DiagGraph::init_complete(std::size_t n) {
    if (n < 4) {
      throw ConfigError("diagnosis graph needs n >= 4, got " + std::to_string(n));
    }
    return DiagGraph(n);
  }

  void DiagGraph::check_pair(ProcessorId i, ProcessorId j) const {
    if (i >= n_ || j >= n_) throw UsageError("processor id out of range");
    if (i == j) throw UsageError("the diagnosis graph has no self-loops");
  }

  bool DiagGraph::trusts(ProcessorId i, ProcessorId j) const {
    check_pair(i, j);
    return adjacency_[i * n_ + j];
  }

  std::size_t DiagGraph::degree(ProcessorId p) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n_; ++j) d += adjacency_[p * n_ + j] ? 1 : 0;
    return d;
  }

  std::size_t DiagGraph::edge_count() const {
    return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), true)) / 2;
  }

  std::optional<EdgeRemovalEvent> DiagGraph::remove_edge(ProcessorId i, ProcessorId j,
                                                         std::size_t generation,
                                                         RemovalCause cause) {
    check_pair(i, j);
    if (!adjacency_[i * n_ + j]) return std::nullopt;
    adjacency_[i * n_ + j] = false;
    adjacency_[j * n_ + i] = false;
    ++removed_[i];
    ++removed_[j];
    return EdgeRemovalEvent{generation, std::min(i, j), std::max(i, j), cause};
  }

  std::vector<EdgeRemovalEvent> DiagGraph::isolate(ProcessorId p, std::size_t generation,
                                                   RemovalCause cause) {
    std::vector<EdgeRemovalEvent> events;
    for (ProcessorId j = 0; j < n_; ++j) {
      if (j == p) continue;
      if (auto e = remove_edge(p, j, generation, cause)) events.push_back(*e);
    }
    isolated_.at(p) = true;
    return events;
  }

  std::vector<EdgeRemovalEvent> DiagGraph::apply_trust_vectors(const TrustMatrix &trust,
                                                               std::size_t generation,
                                                               const std::vector<bool> &skip) {
    if (trust.rows.size() != n_) throw UsageError("trust matrix needs one row per processor");
    const auto &members = trust.members;
    auto verdict = [&](ProcessorId from, std::size_t m) -> bool {
      if (!skip.empty() && skip.at(from)) return true;
      return trust.rows[from].at(m);
    };
    std::vector<EdgeRemovalEvent> events;
    for (ProcessorId j = 0; j < n_; ++j) {
      for (ProcessorId k = j + 1; k < n_; ++k) {
        if (!adjacency_[j * n_ + k]) continue;
        bool accuse = false;
        for (std::size_t m = 0; m < members.size() && !accuse; ++m) {
          if (members[m] == k && !verdict(j, m)) accuse = true;
          if (members[m] == j && !verdict(k, m)) accuse = true;
        }
        if (accuse) {
          if (auto e = remove_edge(j, k, generation, RemovalCause::trust_vector)) events.push_back(*e);
        }
      }
    }
    return events;
  }

  std::vector<EdgeRemovalEvent> DiagGraph::isolate_false_accusers(
      bool rsharp_consistent, const std::vector<bool> &detected,
      const std::vector<ProcessorId> &members,
      const std::vector<EdgeRemovalEvent> &removals_this_stage, std::size_t generation) {
    std::vector<EdgeRemovalEvent> events;
    if (!rsharp_consistent) return events;
    for (ProcessorId j = 0; j < n_; ++j) {
      if (!detected.at(j)) continue;
      if (std::find(members.begin(), members.end(), j) != members.end()) continue;
      const bool touched = std::any_of(removals_this_stage.begin(), removals_this_stage.end(),
                                       [j](const auto &e) { return e.i == j || e.j == j; });
      if (touched) continue;
      auto removed = isolate(j, generation, RemovalCause::false_accuser);
      events.insert(events.end(), removed.begin(), removed.end());
    }
    return events;
  }

  std::vector<EdgeRemovalEvent> DiagGraph::apply_degree_rule(std::size_t t, std::size_t generation) {
    std::vector<EdgeRemovalEvent> events;
    bool changed = true;
    while (changed) {
      changed = false;
      for (ProcessorId p = 0; p < n_; ++p) {
        if (isolated_[p] || removed_[p] < t + 1) continue;
        auto removed = isolate(p, generation, RemovalCause::degree_rule);
        events.insert(events.end(), removed.begin(), removed.end());
        changed = true;
      }
    }
    return events;
  }

}  // namespace mvbc
