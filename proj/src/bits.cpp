// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/bits.hpp"

#include <algorithm>

#include "mvbc/error.hpp"

namespace mvbc {

  namespace {
    int hex_value(char ch) {
      if (ch >= '0' && ch <= '9') return ch - '0';
      if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
      if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
      return -1;
    }
  }  // namespace

  BitString BitString::from_hex(std::string_view hex, std::size_t size) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) {
      hex.remove_prefix(2);
    }
    if (hex.empty()) {
      throw UsageError("empty hex string");
    }
    // Expand digits into a bit vector, then right-align into `size` bits.
    std::vector<std::uint8_t> raw;
    raw.reserve(hex.size() * 4);
    for (char ch : hex) {
      if (ch == '_') continue;
      int v = hex_value(ch);
      if (v < 0) {
        throw UsageError(std::string("invalid hex digit '") + ch + "'");
      }
      for (int b = 3; b >= 0; --b) {
        raw.push_back(static_cast<std::uint8_t>((v >> b) & 1));
      }
    }
    auto first_one = std::find(raw.begin(), raw.end(), 1);
    auto significant = static_cast<std::size_t>(raw.end() - first_one);
    if (significant > size) {
      throw UsageError("hex value " + std::string(hex) + " does not fit in " +
                       std::to_string(size) + " bits");
    }
    BitString out(size);
    std::copy(first_one, raw.end(),
              out.bits_.begin() + static_cast<std::ptrdiff_t>(size - significant));
    return out;
  }

  BitString BitString::from_uint(std::uint64_t value, std::size_t size) {
    BitString out(size);
    for (std::size_t i = 0; i < size && i < 64; ++i) {
      out.bits_[size - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
    }
    return out;
  }

  std::uint64_t BitString::read(std::size_t offset, std::size_t width) const {
    if (width > 64 || offset + width > bits_.size()) {
      throw UsageError("bit range out of bounds");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v = (v << 1) | bits_[offset + i];
    }
    return v;
  }

  void BitString::write(std::size_t offset, std::size_t width, std::uint64_t value) {
    if (width > 64 || offset + width > bits_.size()) {
      throw UsageError("bit range out of bounds");
    }
    for (std::size_t i = 0; i < width; ++i) {
      bits_[offset + width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
    }
  }

  BitString BitString::slice(std::size_t offset, std::size_t width) const {
    if (offset + width > bits_.size()) {
      throw UsageError("bit slice out of bounds");
    }
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                     bits_.begin() + static_cast<std::ptrdiff_t>(offset + width));
    return out;
  }

  void BitString::append(const BitString &other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

  BitString BitString::resized(std::size_t size) const {
    BitString out = *this;
    out.bits_.resize(size, 0);
    return out;
  }

  bool BitString::all_zero() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](auto b) { return b == 0; });
  }

  std::string BitString::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::size_t digits = (bits_.size() + 3) / 4;
    std::size_t pad = digits * 4 - bits_.size();
    std::string out = "0x";
    out.reserve(2 + digits);
    unsigned acc = 0;
    std::size_t filled = pad;
    for (auto b : bits_) {
      acc = (acc << 1) | b;
      if (++filled == 4) {
        out.push_back(kDigits[acc]);
        acc = 0;
        filled = 0;
      }
    }
    if (digits == 0) out.push_back('0');
    return out;
  }

}  // namespace mvbc
