// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/strategies.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "mvbc/error.hpp"

namespace mvbc::sim {

  namespace {

    std::uint64_t salt_of(const std::string &name) {
      // FNV-1a, so each strategy draws from its own stream.
      std::uint64_t h = 1469598103934665603ULL;
      for (unsigned char ch : name) {
        h ^= ch;
        h *= 1099511628211ULL;
      }
      return h;
    }

    class Strategy : public Adversary {
    public:
      Strategy(std::string name, const Scenario &sc) : name_(std::move(name)), spec_(sc.strategy), t_(sc.t) {
        const auto salt = salt_of(name_);
        std::seed_seq seq{static_cast<std::uint32_t>(sc.seed), static_cast<std::uint32_t>(sc.seed >> 32),
                          static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
        rng_.seed(seq);
      }

      std::string name() const override { return name_; }

    protected:
      std::size_t n() const { return world().config->n; }
      bool faulty(ProcessorId p) const { return world().is_faulty(p); }

      ProcessorId reference() const {
        for (ProcessorId p = 0; p < n(); ++p) {
          if (!faulty(p)) return p;
        }
        return 0;
      }
      const ProcessorState &ref_state() const { return world().processors[reference()]; }
      const DiagGraph &ref_graph() const { return ref_state().diag; }

      /// Faulty and not yet exposed.
      bool active(ProcessorId p) const { return faulty(p) && !ref_graph().isolated(p); }

      std::vector<ProcessorId> match_set() const {
        const auto &pm = ref_state().gen.p_match;
        return pm ? *pm : std::vector<ProcessorId>{};
      }

      unsigned field_bits() const { return world().config->c; }

      /// Adds `delta` (nonzero) to the first stripe.
      rs::WideSymbol shifted(const rs::WideSymbol &s, std::uint32_t delta) const {
        auto out = s;
        const auto mask = (std::uint32_t{1} << field_bits()) - 1;
        delta &= mask;
        if (delta == 0) delta = 1;
        out.at(0) = rs::FieldElement(out[0].value() ^ delta);
        return out;
      }

      rs::WideSymbol random_symbol() {
        rs::WideSymbol s(world().config->stripes);
        const auto mask = (std::uint32_t{1} << field_bits()) - 1;
        for (auto &e : s) e = rs::FieldElement(static_cast<std::uint32_t>(rng_()) & mask);
        return s;
      }

      bool chance(unsigned percent) { return rng_() % 100 < percent; }
      std::size_t pick(std::size_t bound) { return bound == 0 ? 0 : rng_() % bound; }

      std::string name_;
      StrategySpec spec_;
      std::size_t t_;
      std::mt19937_64 rng_;
    };

    class Honest final : public Strategy {
    public:
      explicit Honest(const Scenario &sc) : Strategy("honest", sc) {}
    };

    class Silent final : public Strategy {
    public:
      explicit Silent(const Scenario &sc) : Strategy("silent", sc) {}

      void on_symbols(std::size_t, FaultyOutbox<rs::WideSymbol> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (box.is_faulty(p)) box.silence(p);
        }
      }
      void on_bsb(const BsbRoundView &, FaultyOutbox<bool> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (box.is_faulty(p)) box.silence(p);
        }
      }
    };

    class EquivocateMatching final : public Strategy {
    public:
      explicit EquivocateMatching(const Scenario &sc)
          : Strategy("equivocate_matching", sc), victims_(spec_.param_uint("victims", 1)) {}

      void on_symbols(std::size_t g, FaultyOutbox<rs::WideSymbol> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (!active(p)) continue;
          // The match set is the lexicographically smallest clique, so a
          // victim above p leaves p inside it and the victim outside.
          std::vector<ProcessorId> peers, above;
          for (ProcessorId q = 0; q < box.size(); ++q) {
            if (q != p && !faulty(q) && box.get(p, q)) peers.push_back(q);
            if (q > p && !faulty(q) && box.get(p, q)) above.push_back(q);
          }
          if (above.size() >= victims_) peers = above;
          if (peers.empty()) continue;
          const auto start = (g + pick(peers.size())) % peers.size();
          const auto count = std::min<std::size_t>(victims_, peers.size());
          for (std::size_t i = 0; i < count; ++i) {
            const auto q = peers[(start + i) % peers.size()];
            box.set(p, q, shifted(*box.get(p, q), static_cast<std::uint32_t>(i + 1)));
          }
        }
      }

    private:
      std::uint64_t victims_;
    };

    class FalseDetect final : public Strategy {
    public:
      explicit FalseDetect(const Scenario &sc) : Strategy("false_detect", sc) {}

      void detected_flag(ProcessorId p, bool &flag) override {
        if (active(p)) flag = true;
      }
    };

    class CorruptBsb final : public Strategy {
    public:
      explicit CorruptBsb(const Scenario &sc)
          : Strategy("corrupt_bsb", sc), mode_(spec_.param("mode").value_or("random")) {
        if (mode_ != "random" && mode_ != "flip" && mode_ != "split") {
          throw ConfigError("corrupt_bsb mode must be random, flip or split");
        }
      }

      void on_bsb(const BsbRoundView &, FaultyOutbox<bool> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (!box.is_faulty(p)) continue;
          for (ProcessorId q = 0; q < box.size(); ++q) {
            if (q == p) continue;
            const auto honest = box.get(p, q);
            bool bit = false;
            if (mode_ == "random") {
              bit = (rng_() & 1) != 0;
            } else if (mode_ == "flip") {
              bit = !honest.value_or(false);
            } else {
              bit = q % 2 == 0;
            }
            box.set(p, q, bit);
          }
        }
      }

    private:
      std::string mode_;
    };

    class Randomized final : public Strategy {
    public:
      explicit Randomized(const Scenario &sc)
          : Strategy("randomized", sc), rate_(static_cast<unsigned>(spec_.param_uint("rate", 30))) {
        if (rate_ > 100) throw ConfigError("randomized rate is a percentage");
      }

      void on_symbols(std::size_t, FaultyOutbox<rs::WideSymbol> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (!box.is_faulty(p)) continue;
          for (ProcessorId q = 0; q < box.size(); ++q) {
            if (q == p || !chance(rate_)) continue;
            if (chance(50)) {
              box.set(p, q, std::nullopt);
            } else {
              box.set(p, q, random_symbol());
            }
          }
        }
      }

      void match_vector(ProcessorId p, std::vector<bool> &m) override {
        for (std::size_t q = 0; q < m.size(); ++q) {
          if (q != p && chance(rate_)) m[q] = !m[q];
        }
      }

      void detected_flag(ProcessorId, bool &flag) override {
        if (chance(rate_)) flag = !flag;
      }

      void diagnosis_symbol(ProcessorId, rs::WideSymbol &symbol) override {
        if (chance(rate_)) symbol = random_symbol();
      }

      void trust_vector(ProcessorId, std::vector<bool> &row) override {
        for (std::size_t m = 0; m < row.size(); ++m) {
          if (chance(rate_)) row[m] = !row[m];
        }
      }

      void on_bsb(const BsbRoundView &, FaultyOutbox<bool> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (!box.is_faulty(p)) continue;
          for (ProcessorId q = 0; q < box.size(); ++q) {
            if (q == p || !chance(rate_ / 2)) continue;
            const auto r = pick(3);
            box.set(p, q, r == 2 ? std::optional<bool>{} : std::optional<bool>{r == 1});
          }
        }
      }

    private:
      unsigned rate_;
    };

    /// Forces a diagnosis stage in every generation while any faulty
    /// processor remains unexposed. With pace "slow" (the default) only the
    /// lowest unexposed faulty processor acts, so each diagnosis costs the
    /// adversary a single edge; "fast" lets all of them act at once.
    class Persistent : public Strategy {
    public:
      explicit Persistent(const Scenario &sc, std::string name = "persistent")
          : Strategy(std::move(name), sc), fast_(spec_.param("pace").value_or("slow") == "fast") {
        const auto pace = spec_.param("pace").value_or("slow");
        if (pace != "slow" && pace != "fast") throw ConfigError("persistent pace must be slow or fast");
      }

      void on_symbols(std::size_t g, FaultyOutbox<rs::WideSymbol> &box) override {
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (!acting(p)) continue;
          std::vector<ProcessorId> peers;
          for (ProcessorId q = 0; q < box.size(); ++q) {
            if (q != p && !faulty(q) && box.get(p, q)) peers.push_back(q);
          }
          if (peers.empty()) continue;
          const auto q = peers[(g + p + pick(peers.size())) % peers.size()];
          box.set(p, q, shifted(*box.get(p, q), 1));
        }
      }

      void match_vector(ProcessorId p, std::vector<bool> &m) override {
        if (acting(p)) std::fill(m.begin(), m.end(), true);
      }

      void detected_flag(ProcessorId p, bool &flag) override {
        if (acting(p)) flag = true;
      }

      void trust_vector(ProcessorId p, std::vector<bool> &row) override {
        if (!acting(p)) return;
        const auto members = match_set();
        // A detecting outsider must accuse someone or be exposed at once.
        const bool outsider = std::find(members.begin(), members.end(), p) == members.end();
        if (!fast_ && !outsider) return;
        std::vector<std::size_t> accusable;
        for (std::size_t m = 0; m < members.size(); ++m) {
          const auto j = members[m];
          if (j != p && !faulty(j) && ref_graph().trusts(p, j)) accusable.push_back(m);
        }
        std::fill(row.begin(), row.end(), true);
        if (!accusable.empty()) row[accusable[pick(accusable.size())]] = false;
      }

    protected:
      bool acting(ProcessorId p) const {
        if (!active(p)) return false;
        if (fast_) return true;
        for (ProcessorId q = 0; q < p; ++q) {
          if (active(q)) return false;
        }
        return true;
      }

    private:
      bool fast_;
    };

    class Frame final : public Strategy {
    public:
      explicit Frame(const Scenario &sc) : Strategy("frame", sc) {
        if (auto v = spec_.param("target")) {
          const auto id = spec_.param_uint("target", 0);
          if (id == 0 || id > sc.n) throw ConfigError("frame target '" + *v + "' out of range");
          target_ = static_cast<ProcessorId>(id - 1);
          const auto mask = sc.faulty_mask();
          if (mask[*target_]) throw ConfigError("frame target must be fault-free");
        }
      }

      void match_vector(ProcessorId p, std::vector<bool> &m) override {
        if (!active(p)) return;
        std::fill(m.begin(), m.end(), true);
        m[target()] = false;
      }

      void detected_flag(ProcessorId p, bool &flag) override {
        if (active(p)) flag = true;
      }

      void trust_vector(ProcessorId p, std::vector<bool> &row) override {
        if (!active(p)) return;
        const auto members = match_set();
        for (std::size_t m = 0; m < members.size(); ++m) row[m] = members[m] != target();
      }

      void on_bsb(const BsbRoundView &view, FaultyOutbox<bool> &box) override {
        // Misreport the target's broadcasts while relaying them.
        if (view.source != target() || view.step == bsb::Step::source) return;
        for (ProcessorId p = 0; p < box.size(); ++p) {
          if (!box.is_faulty(p)) continue;
          for (ProcessorId q = 0; q < box.size(); ++q) {
            if (q != p && box.get(p, q)) box.set(p, q, !*box.get(p, q));
          }
        }
      }

    private:
      ProcessorId target() const {
        if (target_) return *target_;
        return reference();
      }

      std::optional<ProcessorId> target_;
    };

    class Adaptive final : public Persistent {
    public:
      explicit Adaptive(const Scenario &sc) : Persistent(sc, "adaptive"), at_(spec_.param_uint("at", 2)) {
        if (at_ == 0) throw ConfigError("adaptive 'at' is a 1-based generation");
        if (auto list = spec_.param("targets")) {
          std::stringstream in(*list);
          std::string item;
          while (std::getline(in, item, ',')) {
            const auto id = std::stoull(item);
            if (id == 0 || id > sc.n) throw ConfigError("adaptive target " + item + " out of range");
            targets_.push_back(static_cast<ProcessorId>(id - 1));
          }
        } else {
          const auto mask = sc.faulty_mask();
          for (ProcessorId p = sc.n; p-- > 0 && targets_.size() + sc.faulty.size() < sc.t;) {
            if (!mask[p]) targets_.push_back(p);
          }
        }
      }

      std::vector<ProcessorId> corrupt_now() override {
        ++calls_;
        return calls_ == at_ ? targets_ : std::vector<ProcessorId>{};
      }

    private:
      std::uint64_t at_;
      std::uint64_t calls_ = 0;
      std::vector<ProcessorId> targets_;
    };

  }  // namespace

  std::vector<std::string> builtin_strategies() {
    return {"honest",      "silent",     "equivocate_matching", "false_detect", "corrupt_bsb",
            "randomized",  "persistent", "frame",               "adaptive"};
  }

  std::unique_ptr<Adversary> make_strategy(const Scenario &sc) {
    const auto &name = sc.strategy.name;
    if (name == "honest") return std::make_unique<Honest>(sc);
    if (name == "silent") return std::make_unique<Silent>(sc);
    if (name == "equivocate_matching") return std::make_unique<EquivocateMatching>(sc);
    if (name == "false_detect") return std::make_unique<FalseDetect>(sc);
    if (name == "corrupt_bsb") return std::make_unique<CorruptBsb>(sc);
    if (name == "randomized") return std::make_unique<Randomized>(sc);
    if (name == "persistent") return std::make_unique<Persistent>(sc);
    if (name == "frame") return std::make_unique<Frame>(sc);
    if (name == "adaptive") return std::make_unique<Adaptive>(sc);
    throw ConfigError("unknown strategy '" + name + "'");
  }

}  // namespace mvbc::sim
