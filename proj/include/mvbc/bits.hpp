// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_BITS_HPP
#define MVBC_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mvbc {

  /**
   * Fixed-length bit string, bit 0 first (most significant when rendered
   * as hex). Used for L-bit inputs, D-bit generation values and symbol
   * payloads on the wire.
   */
  class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t size) : bits_(size, 0) {}

    /// Parses a hexadecimal integer (optional 0x prefix) into `size` bits.
    /// Throws UsageError if the value does not fit.
    static BitString from_hex(std::string_view hex, std::size_t size);

    /// Lowest `size` bits of `value`, most significant first.
    static BitString from_uint(std::uint64_t value, std::size_t size);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    bool get(std::size_t i) const { return bits_.at(i) != 0; }
    void set(std::size_t i, bool v) { bits_.at(i) = v ? 1 : 0; }

    /// Bits [offset, offset + width) as an unsigned integer (width <= 64).
    std::uint64_t read(std::size_t offset, std::size_t width) const;
    void write(std::size_t offset, std::size_t width, std::uint64_t value);

    BitString slice(std::size_t offset, std::size_t width) const;
    void append(const BitString &other);

    /// Copy resized to `size`, zero-filled or truncated at the tail.
    BitString resized(std::size_t size) const;

    bool all_zero() const noexcept;

    /// "0x" followed by ceil(size/4) hex digits.
    std::string to_hex() const;

    friend bool operator==(const BitString &, const BitString &) = default;

  private:
    std::vector<std::uint8_t> bits_;
  };

}  // namespace mvbc

#endif  // MVBC_BITS_HPP
