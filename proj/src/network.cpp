// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mvbc {

  std::string_view to_string(BroadcastKind kind) {
    switch (kind) {
      case BroadcastKind::match_vector:
        return "match_vector";
      case BroadcastKind::detected:
        return "detected";
      case BroadcastKind::symbol:
        return "symbol";
      case BroadcastKind::trust:
        return "trust";
    }
    return "unknown";
  }

  std::uint64_t Traffic::bsb_invocations_total() const noexcept {
    return std::accumulate(bsb_invocations.begin(), bsb_invocations.end(), std::uint64_t{0});
  }

  std::uint64_t Traffic::bsb_bits_total() const noexcept {
    return std::accumulate(bsb_bits.begin(), bsb_bits.end(), std::uint64_t{0});
  }

  Traffic Traffic::operator-(const Traffic &earlier) const {
    Traffic d;
    d.data_bits = data_bits - earlier.data_bits;
    for (std::size_t i = 0; i < kBroadcastKinds; ++i) {
      d.bsb_invocations[i] = bsb_invocations[i] - earlier.bsb_invocations[i];
      d.bsb_bits[i] = bsb_bits[i] - earlier.bsb_bits[i];
    }
    d.rounds = rounds - earlier.rounds;
    return d;
  }

  Network::Network(std::size_t n, std::vector<bool> faulty, RoundInterceptor *interceptor)
      : n_(n), faulty_(std::move(faulty)), interceptor_(interceptor) {
    if (faulty_.size() != n_) {
      throw UsageError("faulty mask has " + std::to_string(faulty_.size()) + " entries for " +
                       std::to_string(n_) + " processors");
    }
  }

  std::size_t Network::faulty_count() const noexcept {
    return static_cast<std::size_t>(std::count(faulty_.begin(), faulty_.end(), true));
  }

  void Network::corrupt(ProcessorId p) { faulty_.at(p) = true; }

  Outbox<rs::WideSymbol> Network::exchange_symbols(std::size_t generation,
                                                   Outbox<rs::WideSymbol> box,
                                                   std::size_t symbol_bits) {
    if (interceptor_ != nullptr) {
      FaultyOutbox<rs::WideSymbol> view(box, faulty_);
      interceptor_->on_symbols(generation, view);
    }
    for (ProcessorId from = 0; from < n_; ++from) {
      box.at(from, from).reset();
      for (ProcessorId to = 0; to < n_; ++to) {
        if (box.at(from, to)) traffic_.data_bits += symbol_bits;
      }
    }
    ++traffic_.rounds;
    return box;
  }

  void Network::intercept_bsb(const BsbRoundView &view, Outbox<bool> &box) {
    if (interceptor_ == nullptr) return;
    FaultyOutbox<bool> guarded(box, faulty_);
    interceptor_->on_bsb(view, guarded);
  }

  void Network::record_bsb_round(BroadcastKind kind, std::uint64_t bits) {
    traffic_.bsb_bits[static_cast<std::size_t>(kind)] += bits;
    ++traffic_.rounds;
  }

  void Network::record_bsb_invocations(BroadcastKind kind, std::uint64_t count) {
    traffic_.bsb_invocations[static_cast<std::size_t>(kind)] += count;
  }

}  // namespace mvbc
