// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_NETWORK_HPP
#define MVBC_NETWORK_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mvbc/error.hpp"
#include "mvbc/interleaved.hpp"

namespace mvbc {

  /// 0-based processor index. Files and rendered text use index + 1.
  using ProcessorId = std::size_t;

  /// What a group of broadcast instances carries.
  enum class BroadcastKind : std::size_t {
    match_vector = 0,  // M_i bits, matching stage
    detected = 1,      // Detected_j flags, checking stage
    symbol = 2,        // bits of S_j[j], diagnosis stage
    trust = 3,         // Trust_i bits, diagnosis stage
  };
  inline constexpr std::size_t kBroadcastKinds = 4;
  std::string_view to_string(BroadcastKind kind);

  /**
   * One synchronous round of point-to-point traffic: slot (from, to) holds
   * what `from` sends to `to`, or nothing. Slots on the diagonal are unused.
   */
  template <class T>
  class Outbox {
  public:
    explicit Outbox(std::size_t n) : n_(n), slots_(n * n) {}

    std::size_t size() const noexcept { return n_; }
    std::optional<T> &at(ProcessorId from, ProcessorId to) { return slots_[from * n_ + to]; }
    const std::optional<T> &at(ProcessorId from, ProcessorId to) const {
      return slots_[from * n_ + to];
    }
    void clear() {
      for (auto &s : slots_) s.reset();
    }

  private:
    std::size_t n_;
    std::vector<std::optional<T>> slots_;
  };

  /// The adversary's handle on a round: it may read every slot (it is
  /// rushing) but write only rows of faulty senders.
  template <class T>
  class FaultyOutbox {
  public:
    FaultyOutbox(Outbox<T> &box, const std::vector<bool> &faulty) : box_(box), faulty_(faulty) {}

    std::size_t size() const noexcept { return box_.size(); }
    bool is_faulty(ProcessorId p) const { return faulty_.at(p); }
    const std::optional<T> &get(ProcessorId from, ProcessorId to) const { return box_.at(from, to); }

    void set(ProcessorId from, ProcessorId to, std::optional<T> value) {
      if (!faulty_.at(from)) {
        throw UsageError("adversary attempted to forge a message from a fault-free processor");
      }
      box_.at(from, to) = std::move(value);
    }

    void silence(ProcessorId from) {
      for (ProcessorId to = 0; to < size(); ++to) set(from, to, std::nullopt);
    }

  private:
    Outbox<T> &box_;
    const std::vector<bool> &faulty_;
  };

  namespace bsb {
    class PhaseKing;
    enum class Step { source, exchange, propose, king };
  }  // namespace bsb

  /// Context handed to the adversary for one round of one broadcast instance.
  struct BsbRoundView {
    BroadcastKind kind;
    std::size_t instance;    // index within the batch
    ProcessorId source;
    std::size_t round;       // round within the instance
    bsb::Step step;
    const bsb::PhaseKing *state;
  };

  /// Hook through which faulty processors' outgoing traffic is chosen.
  /// Rows of faulty senders arrive pre-filled with what an honest
  /// processor in their position would send.
  class RoundInterceptor {
  public:
    virtual ~RoundInterceptor() = default;
    virtual void on_symbols(std::size_t /*generation*/, FaultyOutbox<rs::WideSymbol> & /*box*/) {}
    virtual void on_bsb(const BsbRoundView & /*view*/, FaultyOutbox<bool> & /*box*/) {}
  };

  /// Exact payload-bit counters, excluding framing.
  struct Traffic {
    std::uint64_t data_bits = 0;
    std::array<std::uint64_t, kBroadcastKinds> bsb_invocations{};
    std::array<std::uint64_t, kBroadcastKinds> bsb_bits{};
    std::uint64_t rounds = 0;

    std::uint64_t bsb_invocations_total() const noexcept;
    std::uint64_t bsb_bits_total() const noexcept;
    Traffic operator-(const Traffic &earlier) const;
  };

  /**
   * Lockstep synchronous network with authenticated channels. Every
   * exchange is one round: messages written in round r are handed to their
   * recipients as the return value, i.e. visible at round r + 1. Faulty
   * rows pass through the interceptor; fault-free rows are never altered.
   */
  class Network {
  public:
    Network(std::size_t n, std::vector<bool> faulty, RoundInterceptor *interceptor = nullptr);

    std::size_t size() const noexcept { return n_; }
    bool is_faulty(ProcessorId p) const { return faulty_.at(p); }
    const std::vector<bool> &faulty_mask() const noexcept { return faulty_; }
    std::size_t faulty_count() const noexcept;
    void corrupt(ProcessorId p);

    /// One round of symbol traffic; `symbol_bits` is the payload width.
    Outbox<rs::WideSymbol> exchange_symbols(std::size_t generation, Outbox<rs::WideSymbol> box,
                                            std::size_t symbol_bits);

    /// Lets the adversary rewrite faulty rows of one broadcast instance's round.
    void intercept_bsb(const BsbRoundView &view, Outbox<bool> &box);

    /// Books traffic of broadcast rounds. The broadcast driver calls this
    /// once per batch round.
    void record_bsb_round(BroadcastKind kind, std::uint64_t bits);
    void record_bsb_invocations(BroadcastKind kind, std::uint64_t count);

    const Traffic &traffic() const noexcept { return traffic_; }

  private:
    std::size_t n_;
    std::vector<bool> faulty_;
    RoundInterceptor *interceptor_;
    Traffic traffic_;
  };

}  // namespace mvbc

#endif  // MVBC_NETWORK_HPP
