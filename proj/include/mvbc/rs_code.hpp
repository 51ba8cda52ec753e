// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_RS_CODE_HPP
#define MVBC_RS_CODE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mvbc/galois_field.hpp"

namespace mvbc::rs {

  using gf::FieldElement;
  using gf::FieldSpec;

  /// k data symbols, read as the coefficients of a degree-(k-1) polynomial
  /// (index 0 is the constant term).
  struct DataBlock {
    std::vector<FieldElement> symbols;
    friend bool operator==(const DataBlock &, const DataBlock &) = default;
  };

  /// n coded symbols; position j holds p(alpha_j).
  struct Codeword {
    std::vector<FieldElement> symbols;
    friend bool operator==(const Codeword &, const Codeword &) = default;
  };

  /// n slots, each a symbol or unknown (nullopt).
  struct PartialView {
    std::vector<std::optional<FieldElement>> slots;

    static PartialView unknown(std::size_t n) { return PartialView{std::vector<std::optional<FieldElement>>(n)}; }
    static PartialView of(const Codeword &cw);

    std::size_t known_count() const noexcept;
    friend bool operator==(const PartialView &, const PartialView &) = default;
  };

  /**
   * The (n, k) Reed-Solomon code in evaluation form. Position j (0-based)
   * is evaluated at alpha_j = j + 1, the (j+1)-th nonzero field element in
   * integer order, so any k positions determine the data (MDS) and distinct
   * codewords differ in at least n - k + 1 positions.
   */
  class CodeSpec {
  public:
    /// Throws ConfigError unless 1 <= k < n <= 2^c - 1.
    CodeSpec(std::size_t n, std::size_t k, FieldSpec field);

    std::size_t length() const noexcept { return n_; }
    std::size_t dimension() const noexcept { return k_; }
    const FieldSpec &field() const noexcept { return field_; }
    FieldElement evaluation_point(std::size_t j) const { return points_.at(j); }

    Codeword encode(const DataBlock &data) const;

    /// True iff some codeword agrees with every known slot. With at most k
    /// known slots this is vacuously true; otherwise the lowest-indexed k
    /// known slots are interpolated and the rest are checked.
    bool is_consistent(const PartialView &view) const;

    /// Data block whose encoding agrees with every known slot. Throws
    /// InsufficientInformation (< k known) or Inconsistency.
    DataBlock erasure_decode(const PartialView &view) const;

    /// encode(erasure_decode(view)).
    Codeword reconstruct(const PartialView &view) const;

  private:
    void check_view(const PartialView &view) const;
    std::vector<std::size_t> known_positions(const PartialView &view) const;
    bool interpolation_holds(const PartialView &view, std::span<const std::size_t> known) const;

    std::size_t n_;
    std::size_t k_;
    FieldSpec field_;
    std::vector<FieldElement> points_;
  };

}  // namespace mvbc::rs

#endif  // MVBC_RS_CODE_HPP
