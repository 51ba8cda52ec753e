// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/rs_code.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "mvbc/error.hpp"

namespace mvbc::rs {

  PartialView PartialView::of(const Codeword &cw) {
    PartialView v;
    v.slots.assign(cw.symbols.begin(), cw.symbols.end());
    return v;
  }

  std::size_t PartialView::known_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(slots.begin(), slots.end(), [](const auto &s) { return s.has_value(); }));
  }

  CodeSpec::CodeSpec(std::size_t n, std::size_t k, FieldSpec field)
      : n_(n), k_(k), field_(std::move(field)) {
    if (k < 1 || k >= n) {
      throw ConfigError("code needs 1 <= k < n, got n=" + std::to_string(n) +
                        " k=" + std::to_string(k));
    }
    if (n > field_.order() - 1) {
      throw ConfigError("GF(2^" + std::to_string(field_.bits()) + ") has only " +
                        std::to_string(field_.order() - 1) + " nonzero evaluation points, n=" +
                        std::to_string(n));
    }
    points_.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      points_.emplace_back(static_cast<std::uint32_t>(j + 1));
    }
  }

  Codeword CodeSpec::encode(const DataBlock &data) const {
    if (data.symbols.size() != k_) {
      throw UsageError("data block has " + std::to_string(data.symbols.size()) +
                       " symbols, code dimension is " + std::to_string(k_));
    }
    Codeword cw;
    cw.symbols.reserve(n_);
    for (auto x : points_) {
      FieldElement acc;
      for (auto it = data.symbols.rbegin(); it != data.symbols.rend(); ++it) {
        acc = field_.add(field_.mul(acc, x), *it);
      }
      cw.symbols.push_back(acc);
    }
    return cw;
  }

  void CodeSpec::check_view(const PartialView &view) const {
    if (view.slots.size() != n_) {
      throw UsageError("partial view has " + std::to_string(view.slots.size()) +
                       " slots, code length is " + std::to_string(n_));
    }
  }

  std::vector<std::size_t> CodeSpec::known_positions(const PartialView &view) const {
    std::vector<std::size_t> known;
    for (std::size_t j = 0; j < n_; ++j) {
      if (view.slots[j]) known.push_back(j);
    }
    return known;
  }

  bool CodeSpec::interpolation_holds(const PartialView &view,
                                     std::span<const std::size_t> known) const {
    if (known.size() <= k_) return true;
    auto basis = known.first(k_);
    // Barycentric weights w_i = 1 / prod_{j != i} (x_i - x_j).
    std::vector<FieldElement> weights(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      FieldElement d(1);
      for (std::size_t j = 0; j < k_; ++j) {
        if (i != j) d = field_.mul(d, field_.add(points_[basis[i]], points_[basis[j]]));
      }
      weights[i] = field_.inv(d);
    }
    for (auto pos : known.subspan(k_)) {
      const auto x = points_[pos];
      FieldElement value;
      for (std::size_t i = 0; i < k_; ++i) {
        FieldElement term = field_.mul(*view.slots[basis[i]], weights[i]);
        for (std::size_t j = 0; j < k_; ++j) {
          if (i != j) term = field_.mul(term, field_.add(x, points_[basis[j]]));
        }
        value = field_.add(value, term);
      }
      if (value != *view.slots[pos]) return false;
    }
    return true;
  }

  bool CodeSpec::is_consistent(const PartialView &view) const {
    check_view(view);
    auto known = known_positions(view);
    return interpolation_holds(view, known);
  }

  DataBlock CodeSpec::erasure_decode(const PartialView &view) const {
    check_view(view);
    auto known = known_positions(view);
    if (known.size() < k_) {
      throw InsufficientInformation("need " + std::to_string(k_) + " known symbols, have " +
                                    std::to_string(known.size()));
    }
    if (!interpolation_holds(view, known)) {
      throw Inconsistency("known symbols do not lie on a common codeword");
    }
    // Solve the k x k Vandermonde system V c = y by Gauss-Jordan elimination.
    std::vector<std::vector<FieldElement>> a(k_, std::vector<FieldElement>(k_ + 1));
    for (std::size_t r = 0; r < k_; ++r) {
      FieldElement xp(1);
      for (std::size_t col = 0; col < k_; ++col) {
        a[r][col] = xp;
        xp = field_.mul(xp, points_[known[r]]);
      }
      a[r][k_] = *view.slots[known[r]];
    }
    for (std::size_t col = 0; col < k_; ++col) {
      std::size_t pivot = col;
      while (a[pivot][col].is_zero()) ++pivot;  // Vandermonde on distinct points is nonsingular
      std::swap(a[pivot], a[col]);
      const auto scale = field_.inv(a[col][col]);
      for (auto &e : a[col]) e = field_.mul(e, scale);
      for (std::size_t r = 0; r < k_; ++r) {
        if (r == col || a[r][col].is_zero()) continue;
        const auto f = a[r][col];
        for (std::size_t c = col; c <= k_; ++c) {
          a[r][c] = field_.add(a[r][c], field_.mul(f, a[col][c]));
        }
      }
    }
    DataBlock out;
    out.symbols.reserve(k_);
    for (std::size_t r = 0; r < k_; ++r) out.symbols.push_back(a[r][k_]);
    return out;
  }

  Codeword CodeSpec::reconstruct(const PartialView &view) const {
    return encode(erasure_decode(view));
  }

}  // namespace mvbc::rs
