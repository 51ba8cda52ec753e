// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/bsb.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

namespace mvbc::bsb {

  namespace {
    void check_bound(std::size_t n, std::size_t t) {
      if (3 * t >= n) {
        throw ConfigError("broadcast needs n > 3t, got n=" + std::to_string(n) +
                          " t=" + std::to_string(t));
      }
    }
  }  // namespace

  PhaseKing::PhaseKing(std::size_t n, std::size_t t, ProcessorId source, bool source_bit)
      : n_(n), t_(t), source_(source), values_(n, 0), proposals_(n, -1), support_(n, 0) {
    check_bound(n, t);
    if (source >= n) {
      throw ConfigError("broadcast source " + std::to_string(source) + " out of range");
    }
    values_[source] = source_bit ? 1 : 0;
  }

  Step PhaseKing::step(std::size_t round) const {
    if (round == 0) return Step::source;
    switch ((round - 1) % 3) {
      case 0:
        return Step::exchange;
      case 1:
        return Step::propose;
      default:
        return Step::king;
    }
  }

  ProcessorId PhaseKing::king(std::size_t round) const {
    return round == 0 ? source_ : (round - 1) / 3;
  }

  bool PhaseKing::expected_sender(ProcessorId p, std::size_t round) const {
    switch (step(round)) {
      case Step::source:
        return p == source_;
      case Step::king:
        return p == king(round);
      default:
        return true;
    }
  }

  std::optional<bool> PhaseKing::outgoing(ProcessorId p, std::size_t round) const {
    if (!expected_sender(p, round)) return std::nullopt;
    if (step(round) == Step::propose) return proposal(p);
    return values_[p] != 0;
  }

  std::optional<bool> PhaseKing::proposal(ProcessorId p) const {
    auto v = proposals_.at(p);
    if (v < 0) return std::nullopt;
    return v != 0;
  }

  void PhaseKing::deliver(std::size_t round, const Outbox<bool> &inbox) {
    if (round != next_round_ || round >= rounds()) {
      throw UsageError("broadcast rounds must be delivered in order");
    }
    switch (step(round)) {
      case Step::source:
        for (ProcessorId q = 0; q < n_; ++q) {
          if (q == source_) continue;
          const auto &m = inbox.at(source_, q);
          values_[q] = (m && *m) ? 1 : 0;
        }
        break;
      case Step::exchange:
        for (ProcessorId q = 0; q < n_; ++q) {
          std::array<std::size_t, 2> count{};
          ++count[values_[q]];
          for (ProcessorId p = 0; p < n_; ++p) {
            if (p == q) continue;
            if (const auto &m = inbox.at(p, q)) ++count[*m ? 1 : 0];
          }
          proposals_[q] = -1;
          for (int b = 0; b < 2; ++b) {
            if (count[b] >= n_ - t_) proposals_[q] = static_cast<std::int8_t>(b);
          }
        }
        break;
      case Step::propose:
        for (ProcessorId q = 0; q < n_; ++q) {
          std::array<std::size_t, 2> count{};
          if (proposals_[q] >= 0) ++count[proposals_[q]];
          for (ProcessorId p = 0; p < n_; ++p) {
            if (p == q) continue;
            if (const auto &m = inbox.at(p, q)) ++count[*m ? 1 : 0];
          }
          // Fault-free proposals never conflict; under attack prefer the
          // larger count, then 0.
          int adopt = -1;
          if (count[0] > t_ || count[1] > t_) adopt = count[1] > count[0] ? 1 : 0;
          if (adopt >= 0) values_[q] = static_cast<std::uint8_t>(adopt);
          support_[q] = count[values_[q]];
        }
        break;
      case Step::king: {
        const auto k = king(round);
        for (ProcessorId q = 0; q < n_; ++q) {
          if (support_[q] >= n_ - t_) continue;
          if (q == k) continue;
          const auto &m = inbox.at(k, q);
          values_[q] = (m && *m) ? 1 : 0;
        }
        std::fill(proposals_.begin(), proposals_.end(), std::int8_t{-1});
        std::fill(support_.begin(), support_.end(), std::size_t{0});
        break;
      }
    }
    ++next_round_;
  }

  std::vector<std::uint8_t> PhaseKing::snapshot() const {
    std::vector<std::uint8_t> s;
    s.reserve(3 * n_);
    for (ProcessorId p = 0; p < n_; ++p) {
      s.push_back(values_[p]);
      s.push_back(static_cast<std::uint8_t>(proposals_[p] + 1));
      s.push_back(static_cast<std::uint8_t>(support_[p]));
    }
    return s;
  }

  std::uint64_t PhaseKing::fault_free_bits(std::size_t n, std::size_t t) {
    // source round + per phase (exchange + propose + king)
    return (n - 1) * (1 + (t + 1) * (2 * n + 1));
  }

  std::uint64_t BatchResult::total_bits() const noexcept {
    return std::accumulate(bits.begin(), bits.end(), std::uint64_t{0});
  }

  PhaseKingBroadcast::PhaseKingBroadcast(std::size_t n, std::size_t t) : n_(n), t_(t) {
    check_bound(n, t);
  }

  BatchResult PhaseKingBroadcast::run_batch(Network &net, BroadcastKind kind,
                                            std::span<const Request> requests) {
    if (net.size() != n_) {
      throw UsageError("network size does not match the broadcast configuration");
    }
    std::vector<PhaseKing> instances;
    instances.reserve(requests.size());
    for (const auto &r : requests) instances.emplace_back(n_, t_, r.source, r.bit);

    BatchResult result;
    result.bits.assign(requests.size(), 0);
    result.rounds = rounds();
    net.record_bsb_invocations(kind, requests.size());
    if (requests.empty()) return result;

    Outbox<bool> box(n_);
    for (std::size_t round = 0; round < rounds(); ++round) {
      std::uint64_t round_bits = 0;
      for (std::size_t i = 0; i < instances.size(); ++i) {
        auto &inst = instances[i];
        box.clear();
        for (ProcessorId p = 0; p < n_; ++p) {
          auto bit = inst.outgoing(p, round);
          if (!bit) continue;
          for (ProcessorId q = 0; q < n_; ++q) {
            if (q != p) box.at(p, q) = *bit;
          }
        }
        const BsbRoundView view{kind, i, inst.source(), round, inst.step(round), &inst};
        net.intercept_bsb(view, box);
        // Receivers only listen to expected senders; anything else is dropped.
        for (ProcessorId p = 0; p < n_; ++p) {
          const bool expected = inst.expected_sender(p, round);
          for (ProcessorId q = 0; q < n_; ++q) {
            auto &slot = box.at(p, q);
            if (!slot) continue;
            if (!expected || p == q) {
              slot.reset();
            } else {
              ++result.bits[i];
              ++round_bits;
            }
          }
        }
        inst.deliver(round, box);
      }
      net.record_bsb_round(kind, round_bits);
    }

    result.outputs.reserve(instances.size());
    for (const auto &inst : instances) {
      std::vector<bool> out(n_);
      for (ProcessorId p = 0; p < n_; ++p) out[p] = inst.value(p);
      result.outputs.push_back(std::move(out));
    }
    return result;
  }

  std::vector<bool> bsb_broadcast(BroadcastProtocol &protocol, Network &net, ProcessorId source,
                                  bool bit, BroadcastKind kind) {
    const Request req{source, bit};
    auto result = protocol.run_batch(net, kind, std::span<const Request>(&req, 1));
    return result.outputs.front();
  }

  std::uint64_t measure_fault_free_bits(BroadcastProtocol &protocol, std::size_t n) {
    Network net(n, std::vector<bool>(n, false));
    const Request req{0, true};
    return protocol.run_batch(net, BroadcastKind::detected, std::span<const Request>(&req, 1))
        .total_bits();
  }

}  // namespace mvbc::bsb
