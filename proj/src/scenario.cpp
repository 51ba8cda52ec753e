// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "mvbc/error.hpp"

namespace mvbc::sim {

  std::optional<std::string> StrategySpec::param(const std::string &key) const {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
  }

  std::uint64_t StrategySpec::param_uint(const std::string &key, std::uint64_t fallback) const {
    auto v = param(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
      throw ConfigError("strategy parameter '" + key + "' must be a non-negative integer, got '" + *v + "'");
    }
    return out;
  }

  namespace {
    std::string pid(ProcessorId p) { return "P" + std::to_string(p + 1); }

    bool starts_with(std::string_view s, std::string_view prefix) {
      return s.substr(0, prefix.size()) == prefix;
    }

    std::uint64_t parse_seed(std::string_view s, std::uint64_t fallback) {
      if (s.empty()) return fallback;
      std::uint64_t out = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("bad generator seed '" + std::string(s) + "'");
      }
      return out;
    }

    BitString random_value(std::uint64_t seed, std::uint64_t stream, std::size_t bits) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
      std::mt19937_64 rng(seq);
      BitString out(bits);
      for (std::size_t off = 0; off < bits; off += 64) {
        const auto w = std::min<std::size_t>(64, bits - off);
        const auto word = rng();
        out.write(off, w, w == 64 ? word : word & ((std::uint64_t{1} << w) - 1));
      }
      return out;
    }

    BitString literal(std::string_view hex, std::size_t bits) {
      try {
        return BitString::from_hex(hex, bits);
      } catch (const UsageError &e) {
        throw ConfigError("input '" + std::string(hex) + "': " + e.what());
      }
    }

    // Value of processor p under generator `spec`.
    BitString generate(std::string_view spec, ProcessorId p, std::size_t n, std::size_t bits,
                       std::uint64_t scenario_seed) {
      if (starts_with(spec, "0x") || starts_with(spec, "0X")) return literal(spec, bits);
      if (starts_with(spec, "all_same:")) return literal(spec.substr(9), bits);
      if (spec == "random" || starts_with(spec, "random:")) {
        const auto seed = parse_seed(spec.size() > 7 ? spec.substr(7) : "", scenario_seed);
        return random_value(seed, p + 1, bits);
      }
      if (spec == "random_same" || starts_with(spec, "random_same:")) {
        const auto seed = parse_seed(spec.size() > 12 ? spec.substr(12) : "", scenario_seed);
        return random_value(seed, 0, bits);
      }
      if (starts_with(spec, "split:")) {
        const auto rest = spec.substr(6);
        const auto comma = rest.find(',');
        if (comma == std::string_view::npos) throw ConfigError("split needs two values: split:0xA,0xB");
        const auto half = (n + 1) / 2;
        return literal(p < half ? rest.substr(0, comma) : rest.substr(comma + 1), bits);
      }
      throw ConfigError("unknown input generator '" + std::string(spec) + "'");
    }
  }  // namespace

  void Scenario::validate() const {
    if (n < 4) throw ConfigError("need n >= 4, got n=" + std::to_string(n));
    if (3 * t >= n) throw ConfigError("need 3t < n, got n=" + std::to_string(n) + " t=" + std::to_string(t));
    if (L == 0) throw ConfigError("L must be positive");
    if (faulty.size() > t) {
      throw ConfigError("faulty set has " + std::to_string(faulty.size()) + " processors, t=" + std::to_string(t));
    }
    std::vector<bool> seen(n);
    for (auto p : faulty) {
      if (p >= n) throw ConfigError("faulty processor " + pid(p) + " out of range");
      if (seen[p]) throw ConfigError("faulty processor " + pid(p) + " listed twice");
      seen[p] = true;
    }
    for (const auto &[p, _] : inputs.overrides) {
      if (p >= n) throw ConfigError("input override for " + pid(p) + " out of range");
    }
    if (D && *D == 0) throw ConfigError("D must be positive");
    resolve_inputs();
  }

  std::vector<BitString> Scenario::resolve_inputs() const {
    std::vector<BitString> out;
    out.reserve(n);
    for (ProcessorId p = 0; p < n; ++p) {
      auto it = inputs.overrides.find(p);
      const std::string &spec = it == inputs.overrides.end() ? inputs.spec : it->second;
      out.push_back(generate(spec, p, n, L, seed));
    }
    return out;
  }

  std::vector<bool> Scenario::faulty_mask() const {
    std::vector<bool> mask(n);
    for (auto p : faulty) mask.at(p) = true;
    return mask;
  }

  json Scenario::to_json() const {
    json j;
    j["name"] = name;
    j["n"] = n;
    j["t"] = t;
    j["L"] = L;
    if (D) j["D"] = *D;
    j["seed"] = seed;
    json ids = json::array();
    for (auto p : faulty) ids.push_back(p + 1);
    j["faulty"] = ids;
    json strat = {{"name", strategy.name}};
    for (const auto &[k, v] : strategy.params) strat[k] = v;
    j["strategy"] = strat;
    json in = {{"default", inputs.spec}};
    for (const auto &[p, v] : inputs.overrides) in[std::to_string(p + 1)] = v;
    j["inputs"] = in;
    return j;
  }

  // ---------------------------------------------------------------------------
  // Key/value format

  namespace {
    struct Value {
      enum class Kind { integer, string, boolean, array } kind;
      std::uint64_t integer = 0;
      std::string text;
      bool boolean = false;
      std::vector<std::uint64_t> items;

      std::string as_param() const {
        switch (kind) {
          case Kind::integer:
            return std::to_string(integer);
          case Kind::boolean:
            return boolean ? "true" : "false";
          case Kind::string:
            return text;
          case Kind::array: {
            std::string s;
            for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + std::to_string(items[i]);
            return s;
          }
        }
        return {};
      }
    };

    std::string_view trim(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    }

    std::string_view strip_comment(std::string_view line) {
      bool quoted = false;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
      }
      return line;
    }

    std::uint64_t parse_uint(std::string_view s, std::size_t line) {
      s = trim(s);
      std::uint64_t out = 0;
      int base = 10;
      if (starts_with(s, "0x") || starts_with(s, "0X")) {
        s.remove_prefix(2);
        base = 16;
      }
      std::string digits;
      for (char ch : s) {
        if (ch != '_') digits.push_back(ch);
      }
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line);
      }
      return out;
    }

    Value parse_value(std::string_view s, std::size_t line) {
      s = trim(s);
      if (s.empty()) throw ParseError("missing value", line);
      Value v{};
      if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ParseError("unterminated string", line);
        v.kind = Value::Kind::string;
        v.text = std::string(s.substr(1, s.size() - 2));
        if (v.text.find('"') != std::string::npos) throw ParseError("stray quote in string", line);
        return v;
      }
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("unterminated array", line);
        v.kind = Value::Kind::array;
        auto body = trim(s.substr(1, s.size() - 2));
        while (!body.empty()) {
          const auto comma = body.find(',');
          v.items.push_back(parse_uint(body.substr(0, comma), line));
          if (comma == std::string_view::npos) break;
          body = trim(body.substr(comma + 1));
          if (body.empty()) break;  // trailing comma
        }
        return v;
      }
      if (s == "true" || s == "false") {
        v.kind = Value::Kind::boolean;
        v.boolean = s == "true";
        return v;
      }
      v.kind = Value::Kind::integer;
      v.integer = parse_uint(s, line);
      return v;
    }

    std::size_t need_int(const Value &v, const std::string &key, std::size_t line) {
      if (v.kind != Value::Kind::integer) throw ParseError("'" + key + "' must be an integer", line);
      return static_cast<std::size_t>(v.integer);
    }

    std::string need_string(const Value &v, const std::string &key, std::size_t line) {
      if (v.kind != Value::Kind::string) throw ParseError("'" + key + "' must be a quoted string", line);
      return v.text;
    }

    ProcessorId processor_key(const std::string &key, std::size_t line) {
      const auto id = parse_uint(key, line);
      if (id == 0) throw ParseError("processor ids start at 1", line);
      return static_cast<ProcessorId>(id - 1);
    }
  }  // namespace

  Scenario parse_scenario_text(std::string_view text) {
    Scenario sc;
    bool has_n = false, has_t = false, has_l = false;
    std::string section;
    std::map<std::string, std::size_t> seen;  // "section.key" -> line
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      auto s = trim(strip_comment(raw));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("unterminated section header", line);
        section = std::string(trim(s.substr(1, s.size() - 2)));
        if (section != "strategy" && section != "inputs") {
          throw ParseError("unknown section [" + section + "]", line);
        }
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line);
      const std::string key(trim(s.substr(0, eq)));
      if (key.empty()) throw ParseError("missing key", line);
      const auto value = parse_value(s.substr(eq + 1), line);
      const auto full = section + "." + key;
      if (auto it = seen.find(full); it != seen.end()) {
        throw ParseError("duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")",
                         line);
      }
      seen[full] = line;

      if (section.empty()) {
        if (key == "name") {
          sc.name = need_string(value, key, line);
        } else if (key == "n") {
          sc.n = need_int(value, key, line);
          has_n = true;
        } else if (key == "t") {
          sc.t = need_int(value, key, line);
          has_t = true;
        } else if (key == "L") {
          sc.L = need_int(value, key, line);
          has_l = true;
        } else if (key == "D") {
          sc.D = need_int(value, key, line);
        } else if (key == "seed") {
          sc.seed = need_int(value, key, line);
        } else if (key == "faulty") {
          if (value.kind != Value::Kind::array) throw ParseError("'faulty' must be an array of ids", line);
          for (auto id : value.items) {
            if (id == 0) throw ParseError("processor ids start at 1", line);
            sc.faulty.push_back(static_cast<ProcessorId>(id - 1));
          }
        } else if (key == "strategy") {
          sc.strategy.name = need_string(value, key, line);
        } else if (key == "inputs") {
          sc.inputs.spec = need_string(value, key, line);
        } else {
          throw ParseError("unknown key '" + key + "'", line);
        }
      } else if (section == "strategy") {
        if (key == "name") {
          sc.strategy.name = need_string(value, key, line);
        } else {
          sc.strategy.params[key] = value.as_param();
        }
      } else {
        const auto spec = need_string(value, key, line);
        if (key == "default") {
          sc.inputs.spec = spec;
        } else {
          sc.inputs.overrides[processor_key(key, line)] = spec;
        }
      }
    }
    if (!has_n) throw ParseError("missing required key 'n'", 0);
    if (!has_t) throw ParseError("missing required key 't'", 0);
    if (!has_l) throw ParseError("missing required key 'L'", 0);
    sc.validate();
    return sc;
  }

  Scenario scenario_from_json(const json &j) {
    Scenario sc;
    try {
      if (!j.is_object()) throw ParseError("scenario must be a JSON object", 0);
      static const std::vector<std::string> known = {"name", "n", "t", "L", "D", "seed",
                                                     "faulty", "strategy", "inputs"};
      for (const auto &[k, _] : j.items()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
          throw ParseError("unknown key '" + k + "'", 0);
        }
      }
      for (const char *k : {"n", "t", "L"}) {
        if (!j.contains(k)) throw ParseError(std::string("missing required key '") + k + "'", 0);
      }
      sc.name = j.value("name", sc.name);
      sc.n = j.at("n").get<std::size_t>();
      sc.t = j.at("t").get<std::size_t>();
      sc.L = j.at("L").get<std::size_t>();
      if (j.contains("D")) sc.D = j.at("D").get<std::size_t>();
      sc.seed = j.value("seed", std::uint64_t{0});
      if (j.contains("faulty")) {
        for (const auto &id : j.at("faulty")) {
          const auto v = id.get<std::size_t>();
          if (v == 0) throw ParseError("processor ids start at 1", 0);
          sc.faulty.push_back(v - 1);
        }
      }
      if (j.contains("strategy")) {
        const auto &s = j.at("strategy");
        if (s.is_string()) {
          sc.strategy.name = s.get<std::string>();
        } else {
          for (const auto &[k, v] : s.items()) {
            if (k == "name") {
              sc.strategy.name = v.get<std::string>();
            } else {
              sc.strategy.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
          }
        }
      }
      if (j.contains("inputs")) {
        const auto &in = j.at("inputs");
        if (in.is_string()) {
          sc.inputs.spec = in.get<std::string>();
        } else {
          for (const auto &[k, v] : in.items()) {
            if (k == "default") {
              sc.inputs.spec = v.get<std::string>();
            } else {
              sc.inputs.overrides[processor_key(k, 0)] = v.get<std::string>();
            }
          }
        }
      }
    } catch (const json::exception &e) {
      throw ParseError(std::string("invalid scenario field: ") + e.what(), 0);
    }
    sc.validate();
    return sc;
  }

  Scenario parse_scenario_json(std::string_view text) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error &e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
      throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    return scenario_from_json(j);
  }

  Scenario load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read scenario file " + path.string(), 0);
    std::stringstream buf;
    buf << in.rdbuf();
    auto sc = path.extension() == ".json" ? parse_scenario_json(buf.str()) : parse_scenario_text(buf.str());
    if (sc.name == "scenario") sc.name = path.stem().string();
    return sc;
  }

}  // namespace mvbc::sim
