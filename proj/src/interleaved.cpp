// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/interleaved.hpp"

#include <string>
#include <utility>

#include "mvbc/error.hpp"

namespace mvbc::rs {

  InterleavedCode::InterleavedCode(CodeSpec code, std::size_t stripes)
      : code_(std::move(code)), stripes_(stripes) {
    if (stripes == 0) {
      throw ConfigError("interleaved code needs at least one stripe");
    }
  }

  std::vector<WideSymbol> InterleavedCode::encode(const BitString &value) const {
    if (value.size() != value_bits()) {
      throw UsageError("value has " + std::to_string(value.size()) + " bits, expected " +
                       std::to_string(value_bits()));
    }
    const auto c = code_.field().bits();
    const auto s = symbol_bits();
    const auto n = length();
    const auto k = dimension();
    std::vector<WideSymbol> out(n, WideSymbol(stripes_));
    DataBlock data;
    data.symbols.resize(k);
    for (std::size_t e = 0; e < stripes_; ++e) {
      for (std::size_t i = 0; i < k; ++i) {
        data.symbols[i] = FieldElement(static_cast<std::uint32_t>(value.read(i * s + e * c, c)));
      }
      auto cw = code_.encode(data);
      for (std::size_t j = 0; j < n; ++j) out[j][e] = cw.symbols[j];
    }
    return out;
  }

  PartialView InterleavedCode::stripe_view(const WideView &view, std::size_t stripe) const {
    if (view.size() != length()) {
      throw UsageError("wide view has " + std::to_string(view.size()) + " slots, code length is " +
                       std::to_string(length()));
    }
    PartialView pv = PartialView::unknown(length());
    for (std::size_t j = 0; j < view.size(); ++j) {
      if (!view[j]) continue;
      if (view[j]->size() != stripes_) {
        throw UsageError("wide symbol has the wrong number of stripes");
      }
      pv.slots[j] = (*view[j])[stripe];
    }
    return pv;
  }

  bool InterleavedCode::is_consistent(const WideView &view) const {
    for (std::size_t e = 0; e < stripes_; ++e) {
      if (!code_.is_consistent(stripe_view(view, e))) return false;
    }
    return true;
  }

  BitString InterleavedCode::decode(const WideView &view) const {
    const auto c = code_.field().bits();
    const auto s = symbol_bits();
    BitString out(value_bits());
    for (std::size_t e = 0; e < stripes_; ++e) {
      auto data = code_.erasure_decode(stripe_view(view, e));
      for (std::size_t i = 0; i < dimension(); ++i) {
        out.write(i * s + e * c, c, data.symbols[i].value());
      }
    }
    return out;
  }

  BitString InterleavedCode::symbol_to_bits(const WideSymbol &symbol) const {
    const auto c = code_.field().bits();
    BitString out(symbol_bits());
    for (std::size_t e = 0; e < stripes_; ++e) out.write(e * c, c, symbol.at(e).value());
    return out;
  }

  WideSymbol InterleavedCode::bits_to_symbol(const BitString &bits) const {
    const auto c = code_.field().bits();
    if (bits.size() != symbol_bits()) {
      throw UsageError("symbol payload has the wrong width");
    }
    WideSymbol out(stripes_);
    for (std::size_t e = 0; e < stripes_; ++e) {
      out[e] = FieldElement(static_cast<std::uint32_t>(bits.read(e * c, c)));
    }
    return out;
  }

}  // namespace mvbc::rs
