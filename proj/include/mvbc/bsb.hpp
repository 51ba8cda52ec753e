// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_BSB_HPP
#define MVBC_BSB_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mvbc/network.hpp"

namespace mvbc::bsb {

  /**
   * One instance of the reference single-bit broadcast: the source sends
   * its bit to everyone, then t+1 phase-king phases run agreement on the
   * received bits. Each phase has three rounds:
   *
   *  - exchange: everyone sends its value; a processor seeing some bit at
   *    least n-t times (own value included) proposes it;
   *  - propose: proposers send their proposal; a processor seeing more
   *    than t proposals for a bit adopts it and remembers that count;
   *  - king: the phase king (processor `phase`) sends its value; every
   *    processor whose remembered count is below n-t takes the king's bit.
   *
   * Missing messages read as 0 in the source and king rounds and as "no
   * vote" elsewhere. Tolerates t < n/3 Byzantine processors.
   */
  class PhaseKing {
  public:
    /// Throws ConfigError unless 3t < n and source < n.
    PhaseKing(std::size_t n, std::size_t t, ProcessorId source, bool source_bit);

    std::size_t size() const noexcept { return n_; }
    std::size_t fault_bound() const noexcept { return t_; }
    ProcessorId source() const noexcept { return source_; }
    std::size_t rounds() const noexcept { return 1 + 3 * (t_ + 1); }

    Step step(std::size_t round) const;
    /// King of the phase containing `round` (only meaningful for phase rounds).
    ProcessorId king(std::size_t round) const;
    /// Whether receivers read a message from `p` in `round`.
    bool expected_sender(ProcessorId p, std::size_t round) const;

    /// Bit an honest `p` sends to every other processor in `round`, if any.
    std::optional<bool> outgoing(ProcessorId p, std::size_t round) const;

    /// Delivers round `round`; `inbox.at(from, to)` is what `to` received.
    /// Rounds must be delivered in order.
    void deliver(std::size_t round, const Outbox<bool> &inbox);

    std::size_t next_round() const noexcept { return next_round_; }
    bool finished() const noexcept { return next_round_ == rounds(); }

    /// Current value of processor p (its output once finished()).
    bool value(ProcessorId p) const { return values_.at(p) != 0; }
    std::optional<bool> proposal(ProcessorId p) const;
    std::size_t support(ProcessorId p) const { return support_.at(p); }

    /// Packed per-processor state, for state-space exploration.
    std::vector<std::uint8_t> snapshot() const;

    /// Point-to-point bits of a run in which every processor is fault-free.
    static std::uint64_t fault_free_bits(std::size_t n, std::size_t t);

  private:
    std::size_t n_;
    std::size_t t_;
    ProcessorId source_;
    std::size_t next_round_ = 0;
    std::vector<std::uint8_t> values_;
    std::vector<std::int8_t> proposals_;  // -1: none
    std::vector<std::size_t> support_;
  };

  /// One logical broadcast: `source` disseminates `bit`.
  struct Request {
    ProcessorId source;
    bool bit;
  };

  struct BatchResult {
    /// outputs[instance][processor]
    std::vector<std::vector<bool>> outputs;
    /// Point-to-point bits per instance.
    std::vector<std::uint64_t> bits;
    std::size_t rounds = 0;

    std::uint64_t total_bits() const noexcept;
  };

  /**
   * Error-free single-bit Byzantine broadcast. For every execution with at
   * most fault_bound() faulty processors, all fault-free processors output
   * the same bit (agreement), equal to the source's bit when the source is
   * fault-free (validity), after a round count fixed by (n, t).
   */
  class BroadcastProtocol {
  public:
    virtual ~BroadcastProtocol() = default;
    virtual std::string name() const = 0;
    virtual std::size_t fault_bound() const noexcept = 0;
    virtual std::size_t rounds() const noexcept = 0;
    /// Cost B of one instance in which nobody misbehaves.
    virtual std::uint64_t fault_free_bits() const = 0;

    /// Runs all requests in lockstep over `net`; each counts as a separate
    /// invocation.
    virtual BatchResult run_batch(Network &net, BroadcastKind kind,
                                  std::span<const Request> requests) = 0;
  };

  class PhaseKingBroadcast final : public BroadcastProtocol {
  public:
    /// Throws ConfigError unless 3t < n.
    PhaseKingBroadcast(std::size_t n, std::size_t t);

    std::string name() const override { return "phase_king"; }
    std::size_t fault_bound() const noexcept override { return t_; }
    std::size_t rounds() const noexcept override { return 1 + 3 * (t_ + 1); }
    std::uint64_t fault_free_bits() const override { return PhaseKing::fault_free_bits(n_, t_); }

    BatchResult run_batch(Network &net, BroadcastKind kind,
                          std::span<const Request> requests) override;

  private:
    std::size_t n_;
    std::size_t t_;
  };

  /// Single broadcast from `source`; returns each processor's output.
  std::vector<bool> bsb_broadcast(BroadcastProtocol &protocol, Network &net, ProcessorId source,
                                  bool bit, BroadcastKind kind = BroadcastKind::detected);

  /// B measured by running one instance on a network without faults.
  std::uint64_t measure_fault_free_bits(BroadcastProtocol &protocol, std::size_t n);

}  // namespace mvbc::bsb

#endif  // MVBC_BSB_HPP
