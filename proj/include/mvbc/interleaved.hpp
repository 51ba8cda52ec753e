// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_INTERLEAVED_HPP
#define MVBC_INTERLEAVED_HPP

#include <optional>
#include <vector>

#include "mvbc/bits.hpp"
#include "mvbc/rs_code.hpp"

namespace mvbc::rs {

  /// One coded position of an interleaved codeword: one field element per stripe.
  using WideSymbol = std::vector<FieldElement>;

  /// Slot j holds the symbol known for position j, or nothing.
  using WideView = std::vector<std::optional<WideSymbol>>;

  /**
   * `stripes` independent copies of an (n, k) code applied position-wise.
   * A position carries stripes * c bits, and the result is again MDS with
   * the same n, k and distance, now over the alphabet GF(2^c)^stripes. With
   * one stripe it is exactly the underlying code.
   *
   * Bit layout of a value of k * stripes * c bits: data symbol i occupies
   * bits [i*s, (i+1)*s) with s = stripes * c, and within it stripe e
   * occupies c bits starting at e*c.
   */
  class InterleavedCode {
  public:
    InterleavedCode(CodeSpec code, std::size_t stripes);

    const CodeSpec &code() const noexcept { return code_; }
    std::size_t stripes() const noexcept { return stripes_; }
    std::size_t length() const noexcept { return code_.length(); }
    std::size_t dimension() const noexcept { return code_.dimension(); }
    std::size_t symbol_bits() const noexcept { return stripes_ * code_.field().bits(); }
    std::size_t value_bits() const noexcept { return symbol_bits() * dimension(); }

    /// The n wide symbols of the codeword for `value` (value_bits() bits).
    std::vector<WideSymbol> encode(const BitString &value) const;

    bool is_consistent(const WideView &view) const;

    /// Throws InsufficientInformation or Inconsistency like CodeSpec::erasure_decode.
    BitString decode(const WideView &view) const;

    BitString symbol_to_bits(const WideSymbol &symbol) const;
    WideSymbol bits_to_symbol(const BitString &bits) const;

  private:
    PartialView stripe_view(const WideView &view, std::size_t stripe) const;

    CodeSpec code_;
    std::size_t stripes_;
  };

}  // namespace mvbc::rs

#endif  // MVBC_INTERLEAVED_HPP
