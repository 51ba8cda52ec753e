// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_DIAGNOSIS_GRAPH_HPP
#define MVBC_DIAGNOSIS_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mvbc/network.hpp"

namespace mvbc {

  enum class RemovalCause {
    trust_vector,   // a FALSE entry in a broadcast trust vector
    false_accuser,  // accuser with no incident trust-vector removal
    degree_rule,    // vertex lost at least t+1 edges
  };
  std::string_view to_string(RemovalCause cause);

  struct EdgeRemovalEvent {
    std::size_t generation;
    ProcessorId i;  // i < j
    ProcessorId j;
    RemovalCause cause;
    friend bool operator==(const EdgeRemovalEvent &, const EdgeRemovalEvent &) = default;
  };

  /// Trust vectors over a match set: row r belongs to processor r, and
  /// entry [r][m] is its verdict on members[m].
  struct TrustMatrix {
    std::vector<ProcessorId> members;
    std::vector<std::vector<bool>> rows;
  };

  /**
   * Undirected trust graph on n processors. Starts complete; edges are only
   * ever removed. A vertex is isolated once the graph has proven it faulty,
   * after which it has no edges.
   */
  class DiagGraph {
  public:
    /// Complete graph; throws ConfigError if n < 4.
    static DiagGraph init_complete(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    /// Throws UsageError for i == j or out-of-range ids.
    bool trusts(ProcessorId i, ProcessorId j) const;
    bool isolated(ProcessorId p) const { return isolated_.at(p); }
    std::size_t removed_count(ProcessorId p) const { return removed_.at(p); }
    std::size_t degree(ProcessorId p) const;
    std::size_t edge_count() const;

    /// Removes edge (i, j) if present; returns the event, or nothing when
    /// the edge was already gone.
    std::optional<EdgeRemovalEvent> remove_edge(ProcessorId i, ProcessorId j, std::size_t generation,
                                                RemovalCause cause);

    /// Removes every edge at p and marks it isolated.
    std::vector<EdgeRemovalEvent> isolate(ProcessorId p, std::size_t generation, RemovalCause cause);

    /// Removes (j, k) whenever either direction of the trust verdict is
    /// FALSE. Rows of `skip` processors are ignored.
    std::vector<EdgeRemovalEvent> apply_trust_vectors(const TrustMatrix &trust, std::size_t generation,
                                                      const std::vector<bool> &skip = {});

    /**
     * When `rsharp_consistent`, isolates every processor outside `members`
     * that raised `detected` but lost no edge in `removals_this_stage`.
     */
    std::vector<EdgeRemovalEvent> isolate_false_accusers(
        bool rsharp_consistent, const std::vector<bool> &detected,
        const std::vector<ProcessorId> &members,
        const std::vector<EdgeRemovalEvent> &removals_this_stage, std::size_t generation);

    /// Isolates every vertex with at least t+1 removed edges, repeating
    /// until no further vertex crosses the threshold.
    std::vector<EdgeRemovalEvent> apply_degree_rule(std::size_t t, std::size_t generation);

    friend bool operator==(const DiagGraph &, const DiagGraph &) = default;

  private:
    explicit DiagGraph(std::size_t n);
    void check_pair(ProcessorId i, ProcessorId j) const;

    std::size_t n_;
    std::vector<bool> adjacency_;  // n*n, symmetric
    std::vector<std::size_t> removed_;
    std::vector<bool> isolated_;
  };

}  // namespace mvbc

#endif  // MVBC_DIAGNOSIS_GRAPH_HPP
