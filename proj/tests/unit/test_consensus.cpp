// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mvbc/consensus.hpp"
#include "mvbc/error.hpp"

using namespace mvbc;

namespace {
  constexpr std::uint64_t kB = 57;  // placeholder broadcast cost for parameter tests

  // Brute force over all bitmasks in increasing lexicographic order of the
  // sorted member list.
  std::optional<std::vector<ProcessorId>> brute_match_set(const BoolMatrix &m, std::size_t n,
                                                          std::size_t size) {
    std::vector<std::vector<ProcessorId>> found;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<ProcessorId> s;
      for (ProcessorId p = 0; p < n; ++p) {
        if (mask & (1U << p)) s.push_back(p);
      }
      bool ok = true;
      for (auto a : s) {
        for (auto b : s) {
          if (a != b && !(m[a][b] && m[b][a])) ok = false;
        }
      }
      if (ok) found.push_back(s);
    }
    if (found.empty()) return std::nullopt;
    return *std::min_element(found.begin(), found.end());
  }

  BoolMatrix full(std::size_t n, bool v) { return BoolMatrix(n, std::vector<bool>(n, v)); }

  std::vector<BitString> same_inputs(const ConsensusConfig &cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BitString v(cfg.L);
    for (std::size_t i = 0; i < cfg.L; ++i) v.set(i, (rng() & 1U) != 0);
    return std::vector<BitString>(cfg.n, v);
  }

  std::vector<bool> mask(std::size_t n, std::vector<ProcessorId> ids) {
    std::vector<bool> m(n, false);
    for (auto p : ids) m[p] = true;
    return m;
  }

  // Faulty processors send a corrupted symbol to one fixed victim every
  // generation in which they still may.
  class SymbolCorrupter final : public Adversary {
  public:
    explicit SymbolCorrupter(ProcessorId victim) : victim_(victim) {}
    std::string name() const override { return "test_corrupter"; }
    void on_symbols(std::size_t, FaultyOutbox<rs::WideSymbol> &box) override {
      for (ProcessorId p = 0; p < box.size(); ++p) {
        if (!box.is_faulty(p)) continue;
        auto s = box.get(p, victim_);
        if (!s) continue;
        (*s)[0] = rs::FieldElement((*s)[0].value() ^ 1U);
        box.set(p, victim_, s);
      }
    }

  private:
    ProcessorId victim_;
  };

  // Faulty processors claim a detection in the first generation only.
  class FalseAccuser final : public Adversary {
  public:
    std::string name() const override { return "test_accuser"; }
    void detected_flag(ProcessorId, bool &flag) override {
      if (world().generation == 0) flag = true;
    }
  };

  struct Recorder final : RunObserver {
    std::vector<EdgeRemovalEvent> events;
    std::vector<std::vector<bool>> detected;  // reference view after each checking stage
    std::vector<std::optional<std::vector<ProcessorId>>> p_match;
    std::vector<rs::WideView> outsider_view;
    ProcessorId outsider = 0;

    void on_edges_removed(std::span<const EdgeRemovalEvent> ev) override {
      events.insert(events.end(), ev.begin(), ev.end());
    }
    void on_stage_end(std::size_t, Stage stage, std::span<const ProcessorState> ps) override {
      if (stage == Stage::checking) {
        detected.push_back(ps[0].gen.detected);
        p_match.push_back(ps[0].gen.p_match);
        outsider_view.push_back(ps[outsider].gen.received);
      }
    }
  };
}  // namespace

TEST_CASE("field width for n") {
  CHECK(field_bits_for(3) == 2);
  CHECK(field_bits_for(4) == 3);
  CHECK(field_bits_for(7) == 3);
  CHECK(field_bits_for(8) == 4);
  CHECK(field_bits_for(15) == 4);
  CHECK(field_bits_for(16) == 5);
}

TEST_CASE("choose_parameters follows the square-root rule") {
  SUBCASE("n=7 t=2 L=1e6") {
    const auto cfg = choose_parameters(7, 2, 1'000'000, kB);
    // Independent arithmetic: (49-7+2)*3*1e6 / (2*3*5) = 4.4e6.
    const double raw = std::sqrt(4.4e6);
    CHECK(raw == doctest::Approx(2097.617).epsilon(1e-6));
    const std::size_t unit = 3 * 3;
    const auto expected = static_cast<std::size_t>(std::ceil(raw / unit)) * unit;
    CHECK(expected == 2106);
    CHECK(cfg.D == expected);
    CHECK(cfg.c == 3);
    CHECK(cfg.k() == 3);
    CHECK(cfg.stripes == 2106 / 9);
    CHECK(cfg.padded_L % cfg.D == 0);
    CHECK(cfg.padded_L >= cfg.L);
    CHECK(cfg.padded_L - cfg.L < cfg.D);
  }
  SUBCASE("D is a multiple of k*c for a range of inputs") {
    for (std::size_t n : {4, 5, 7, 10, 13}) {
      for (std::size_t t = 0; 3 * t < n; ++t) {
        for (std::size_t L : {1, 7, 64, 4096, 100'000}) {
          const auto cfg = choose_parameters(n, t, L, kB);
          CHECK(cfg.D % (cfg.k() * cfg.c) == 0);
          CHECK(cfg.generations() * cfg.D == cfg.padded_L);
          CHECK(cfg.n <= (std::size_t{1} << cfg.c) - 1);
        }
      }
    }
  }
  SUBCASE("two generations when L = 2D") {
    const auto cfg = choose_parameters(4, 1, 24, kB, 12);
    CHECK(cfg.generations() == 2);
    CHECK(cfg.padded_L == 24);
  }
  SUBCASE("small L caps D") {
    const auto cfg = choose_parameters(7, 2, 5, kB);
    CHECK(cfg.D == 9);
    CHECK(cfg.generations() == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(choose_parameters(6, 2, 100, kB), ConfigError);
    CHECK_THROWS_AS(choose_parameters(4, 1, 0, kB), ConfigError);
    CHECK_THROWS_AS(choose_parameters(4, 1, 100, kB, 10), ConfigError);
    CHECK_THROWS_AS(choose_parameters(4, 1, 100, kB, 0), ConfigError);
  }
}

TEST_CASE("find_match_set picks the smallest qualifying set") {
  CHECK(find_match_set(full(4, true), 4, 1) == std::vector<ProcessorId>{0, 1, 2});

  auto m = full(4, false);
  for (ProcessorId a : {0, 1, 3}) {
    for (ProcessorId b : {0, 1, 3}) m[a][b] = true;
  }
  CHECK(brute_match_set(m, 4, 3) == std::vector<ProcessorId>{0, 1, 3});
  CHECK(find_match_set(m, 4, 1) == std::vector<ProcessorId>{0, 1, 3});

  auto none = full(4, true);
  none[0][1] = none[2][3] = false;
  none[1][2] = false;
  CHECK_FALSE(brute_match_set(none, 4, 3).has_value());
  CHECK_FALSE(find_match_set(none, 4, 1).has_value());

  SUBCASE("random matrices agree with brute force") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = trial % 2 ? 7 : 5;
      const std::size_t t = n == 7 ? 2 : 1;
      BoolMatrix r(n, std::vector<bool>(n));
      for (auto &row : r) {
        for (std::size_t j = 0; j < n; ++j) row[j] = rng() % 5 != 0;
      }
      REQUIRE(find_match_set(r, n, t) == brute_match_set(r, n, n - t));
    }
  }
}

TEST_CASE("find_decide_set respects the graph") {
  auto g = DiagGraph::init_complete(7);
  const std::vector<ProcessorId> pm{0, 1, 2, 4, 6};
  CHECK(find_decide_set(g, pm, 3) == std::vector<ProcessorId>{0, 1, 2});
  g.remove_edge(0, 1, 0, RemovalCause::trust_vector);
  CHECK(find_decide_set(g, pm, 3) == std::vector<ProcessorId>{0, 2, 4});
  g.isolate(0, 0, RemovalCause::degree_rule);
  CHECK(find_decide_set(g, pm, 3) == std::vector<ProcessorId>{1, 2, 4});
}

TEST_CASE("fault-free run with identical inputs") {
  for (auto [n, t, L] : {std::tuple{4, 1, 64}, std::tuple{7, 2, 200}, std::tuple{7, 1, 99}}) {
    const auto cfg = choose_parameters(n, t, L, kB);
    const auto in = same_inputs(cfg, n * 100 + L);
    Recorder rec;
    const auto run = run_consensus(cfg, in, std::vector<bool>(n, false), nullptr, &rec);
    CHECK(run.diagnosis_count == 0);
    CHECK(rec.events.empty());
    for (const auto &out : run.outputs) {
      CHECK(out.value == in[0]);
      CHECK(out.value.size() == static_cast<std::size_t>(L));
      CHECK(out.per_generation.size() == cfg.generations());
      CHECK_FALSE(out.terminated_default);
    }
    for (const auto &pm : rec.p_match) CHECK(pm == std::vector<ProcessorId>(rec.p_match[0].value()));
  }
}

TEST_CASE("padding is truncated from the output") {
  const auto cfg = choose_parameters(4, 1, 13, kB, 6);
  CHECK(cfg.padded_L == 18);
  const auto in = same_inputs(cfg, 5);
  const auto run = run_consensus(cfg, in, std::vector<bool>(4, false));
  for (const auto &out : run.outputs) CHECK(out.value == in[0]);
}

TEST_CASE("faulty member of P_match corrupting an outsider triggers detection") {
  // n=4, t=1, P0 faulty. P3 receives a corrupted symbol from P0, so M_3[0]
  // is FALSE and P_match = {0,1,2}; P3 is the outsider.
  const auto cfg = choose_parameters(4, 1, 6, kB, 6);
  const auto in = same_inputs(cfg, 3);
  SymbolCorrupter adv(3);
  Recorder rec;
  rec.outsider = 3;
  const auto run = run_consensus(cfg, in, mask(4, {0}), &adv, &rec);
  REQUIRE(rec.p_match.size() == 1);
  CHECK(rec.p_match[0] == std::vector<ProcessorId>{0, 1, 2});

  // The outsider's view restricted to P_match is not a codeword.
  auto view = rec.outsider_view[0];
  view[3].reset();
  CHECK_FALSE(cfg.code().is_consistent(view));

  CHECK(rec.detected[0][3]);
  CHECK(run.diagnosis_count == 1);
  REQUIRE_FALSE(rec.events.empty());
  for (const auto &e : rec.events) CHECK((e.i == 0 || e.j == 0));
  for (ProcessorId p = 1; p < 4; ++p) CHECK(run.outputs[p].value == in[0]);
}

TEST_CASE("persistent equivocator at n=4 stays within the diagnosis bound") {
  const auto cfg = choose_parameters(4, 1, 60, kB, 6);
  const auto in = same_inputs(cfg, 9);
  for (ProcessorId faulty = 0; faulty < 4; ++faulty) {
    for (ProcessorId victim = 0; victim < 4; ++victim) {
      if (victim == faulty) continue;
      SymbolCorrupter adv(victim);
      Recorder rec;
      const auto run = run_consensus(cfg, in, mask(4, {faulty}), &adv, &rec);
      CHECK(run.diagnosis_count <= 2);
      for (ProcessorId p = 0; p < 4; ++p) {
        if (p != faulty) CHECK(run.outputs[p].value == in[0]);
      }
      for (const auto &e : rec.events) CHECK((e.i == faulty || e.j == faulty));
    }
  }
}

TEST_CASE("false accuser outside P_match is isolated") {
  const auto cfg = choose_parameters(4, 1, 12, kB, 6);
  const auto in = same_inputs(cfg, 4);
  FalseAccuser adv;
  Recorder rec;
  const auto run = run_consensus(cfg, in, mask(4, {3}), &adv, &rec);
  CHECK(run.diagnosis_count == 1);
  REQUIRE(rec.events.size() == 3);
  for (const auto &e : rec.events) {
    CHECK(e.j == 3);
    CHECK(e.cause == RemovalCause::false_accuser);
  }
  for (ProcessorId p = 0; p < 3; ++p) CHECK(run.outputs[p].value == in[0]);
}

TEST_CASE("differing inputs still yield agreement") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cfg = choose_parameters(7, 2, 90, kB);
    std::vector<BitString> in;
    for (std::size_t p = 0; p < 7; ++p) {
      BitString v(cfg.L);
      for (std::size_t i = 0; i < cfg.L; ++i) v.set(i, (rng() & 1U) != 0);
      in.push_back(v);
    }
    // Some trials give two processors the same value as the first.
    if (trial % 2) in[1] = in[2] = in[0];
    SymbolCorrupter adv(static_cast<ProcessorId>(trial % 5));
    const auto faulty = mask(7, {5, 6});
    const auto run = run_consensus(cfg, in, faulty, &adv);
    for (ProcessorId p = 1; p < 5; ++p) CHECK(run.outputs[p].value == run.outputs[0].value);
    if (run.outputs[0].terminated_default) CHECK(run.outputs[0].value.all_zero());
  }
}

TEST_CASE("split inputs with no faults take the default and terminate") {
  const auto cfg = choose_parameters(4, 1, 24, kB, 6);
  std::vector<BitString> in{BitString::from_uint(1, 24), BitString::from_uint(1, 24),
                            BitString::from_uint(2, 24), BitString::from_uint(2, 24)};
  const auto run = run_consensus(cfg, in, std::vector<bool>(4, false));
  for (const auto &out : run.outputs) {
    CHECK(out.terminated_default);
    CHECK(out.value == BitString(24));
  }
}
