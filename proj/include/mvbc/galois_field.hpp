// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_GALOIS_FIELD_HPP
#define MVBC_GALOIS_FIELD_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <vector>

namespace mvbc::gf {

  /// An element of GF(2^c), stored as its polynomial-basis bit pattern.
  class FieldElement {
  public:
    constexpr FieldElement() = default;
    constexpr explicit FieldElement(std::uint32_t value) : value_(value) {}

    constexpr std::uint32_t value() const noexcept { return value_; }
    constexpr bool is_zero() const noexcept { return value_ == 0; }

    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

  private:
    std::uint32_t value_ = 0;
  };

  /// Degree-c reduction polynomial from the built-in table, as a (c+1)-bit mask.
  std::uint32_t default_polynomial(unsigned c);

  /**
   * GF(2^c) for 2 <= c <= 16. Arithmetic is carry-less multiplication
   * reduced by the field polynomial; log/antilog tables are built once per
   * spec and shared between copies.
   */
  class FieldSpec {
  public:
    /// Uses default_polynomial(c).
    explicit FieldSpec(unsigned c);
    /// Throws ConfigError unless `polynomial` has degree c and is irreducible.
    FieldSpec(unsigned c, std::uint32_t polynomial);

    unsigned bits() const noexcept { return c_; }
    std::uint32_t polynomial() const noexcept { return poly_; }
    /// 2^c.
    std::uint32_t order() const noexcept { return 1U << c_; }

    FieldElement element(std::uint32_t value) const;
    bool contains(FieldElement a) const noexcept { return a.value() < order(); }

    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const;
    FieldElement pow(FieldElement a, std::uint64_t e) const;

    /// Multiplication by shift-and-reduce, bypassing the tables.
    FieldElement mul_slow(FieldElement a, FieldElement b) const;

    friend bool operator==(const FieldSpec &a, const FieldSpec &b) noexcept {
      return a.c_ == b.c_ && a.poly_ == b.poly_;
    }

  private:
    struct Tables {
      std::vector<std::uint32_t> exp;  // length 2 * (order - 1)
      std::vector<std::uint32_t> log;  // log[0] unused
    };

    void check(FieldElement a) const;
    FieldElement mul_unchecked(FieldElement a, FieldElement b) const noexcept;

    unsigned c_;
    std::uint32_t poly_;
    std::shared_ptr<const Tables> tables_;
  };

  /// True iff the polynomial mask of degree `degree` has no factor of
  /// degree 1..degree/2 over GF(2) (trial division).
  bool is_irreducible(std::uint32_t polynomial, unsigned degree);

}  // namespace mvbc::gf

#endif  // MVBC_GALOIS_FIELD_HPP
