// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/galois_field.hpp"

#include <array>
#include <string>

#include "mvbc/error.hpp"

namespace mvbc::gf {

  namespace {
    // Index c holds a degree-c irreducible polynomial over GF(2).
    constexpr std::array<std::uint32_t, 17> kPolynomials = {
        0,       0,
        0x7,      // x^2+x+1
        0xB,      // x^3+x+1
        0x13,     // x^4+x+1
        0x25,     // x^5+x^2+1
        0x43,     // x^6+x+1
        0x83,     // x^7+x+1
        0x11B,    // x^8+x^4+x^3+x+1
        0x211,    // x^9+x^4+1
        0x409,    // x^10+x^3+1
        0x805,    // x^11+x^2+1
        0x1053,   // x^12+x^6+x^4+x+1
        0x201B,   // x^13+x^4+x^3+x+1
        0x4443,   // x^14+x^10+x^6+x+1
        0x8003,   // x^15+x+1
        0x1100B,  // x^16+x^12+x^3+x+1
    };

    unsigned degree_of(std::uint64_t p) {
      unsigned d = 0;
      while (p >>= 1) ++d;
      return d;
    }

    std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
      unsigned dm = degree_of(m);
      while (a != 0 && degree_of(a) >= dm) {
        a ^= m << (degree_of(a) - dm);
      }
      return a;
    }

    std::uint32_t shift_mul(std::uint32_t a, std::uint32_t b, unsigned c, std::uint32_t poly) {
      std::uint32_t r = 0;
      const std::uint32_t top = 1U << c;
      while (b != 0) {
        if (b & 1U) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= poly;
      }
      return r;
    }
  }  // namespace

  bool is_irreducible(std::uint32_t polynomial, unsigned degree) {
    if (degree_of(polynomial) != degree || degree == 0) return false;
    for (std::uint64_t f = 2; degree_of(f) <= degree / 2; ++f) {
      if (poly_mod(polynomial, f) == 0) return false;
    }
    return true;
  }

  std::uint32_t default_polynomial(unsigned c) {
    if (c < 2 || c > 16) {
      throw ConfigError("field width must be in [2, 16], got " + std::to_string(c));
    }
    return kPolynomials[c];
  }

  FieldSpec::FieldSpec(unsigned c) : FieldSpec(c, default_polynomial(c)) {}

  FieldSpec::FieldSpec(unsigned c, std::uint32_t polynomial) : c_(c), poly_(polynomial) {
    if (c < 2 || c > 16) {
      throw ConfigError("field width must be in [2, 16], got " + std::to_string(c));
    }
    if (!is_irreducible(polynomial, c)) {
      throw ConfigError("reduction polynomial is not an irreducible polynomial of degree " +
                        std::to_string(c));
    }
    // The multiplicative group is cyclic; find the smallest generator and
    // tabulate its powers. x itself is not primitive for every table entry
    // (e.g. the c = 8 polynomial), hence the search.
    const std::uint32_t q1 = order() - 1;
    auto tables = std::make_shared<Tables>();
    for (std::uint32_t g = 2; g < order(); ++g) {
      tables->exp.assign(2 * static_cast<std::size_t>(q1), 0);
      tables->log.assign(order(), 0);
      std::uint32_t x = 1;
      bool primitive = true;
      for (std::uint32_t i = 0; i < q1; ++i) {
        if (i > 0 && x == 1) {
          primitive = false;
          break;
        }
        tables->exp[i] = x;
        tables->exp[i + q1] = x;
        tables->log[x] = i;
        x = shift_mul(x, g, c_, poly_);
      }
      if (primitive) break;
    }
    tables_ = std::move(tables);
  }

  FieldElement FieldSpec::element(std::uint32_t value) const {
    FieldElement e(value);
    check(e);
    return e;
  }

  void FieldSpec::check(FieldElement a) const {
    if (!contains(a)) {
      throw UsageError("element " + std::to_string(a.value()) + " is not in GF(2^" +
                       std::to_string(c_) + ")");
    }
  }

  FieldElement FieldSpec::add(FieldElement a, FieldElement b) const {
    check(a);
    check(b);
    return FieldElement(a.value() ^ b.value());
  }

  FieldElement FieldSpec::mul_unchecked(FieldElement a, FieldElement b) const noexcept {
    if (a.is_zero() || b.is_zero()) return FieldElement(0);
    const auto &t = *tables_;
    return FieldElement(t.exp[t.log[a.value()] + t.log[b.value()]]);
  }

  FieldElement FieldSpec::mul(FieldElement a, FieldElement b) const {
    check(a);
    check(b);
    return mul_unchecked(a, b);
  }

  FieldElement FieldSpec::mul_slow(FieldElement a, FieldElement b) const {
    check(a);
    check(b);
    return FieldElement(shift_mul(a.value(), b.value(), c_, poly_));
  }

  FieldElement FieldSpec::inv(FieldElement a) const {
    check(a);
    if (a.is_zero()) {
      throw DomainError("zero has no multiplicative inverse");
    }
    const auto &t = *tables_;
    const std::uint32_t q1 = order() - 1;
    return FieldElement(t.exp[(q1 - t.log[a.value()]) % q1]);
  }

  FieldElement FieldSpec::div(FieldElement a, FieldElement b) const {
    return mul(a, inv(b));
  }

  FieldElement FieldSpec::pow(FieldElement a, std::uint64_t e) const {
    check(a);
    FieldElement result(1);
    FieldElement base = a;
    while (e != 0) {
      if (e & 1U) result = mul_unchecked(result, base);
      base = mul_unchecked(base, base);
      e >>= 1;
    }
    return result;
  }

}  // namespace mvbc::gf
