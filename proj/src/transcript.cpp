// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvbc/transcript.hpp"

#include <fstream>
#include <sstream>

#include "mvbc/error.hpp"

namespace mvbc {

  std::vector<const json *> Transcript::of_type(std::string_view type) const {
    std::vector<const json *> out;
    for (const auto &r : records_) {
      if (r.value("type", "") == type) out.push_back(&r);
    }
    return out;
  }

  const json &Transcript::summary() const {
    for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
      if (it->value("type", "") == "summary") return *it;
    }
    throw ParseError("transcript has no summary record", 0);
  }

  std::string Transcript::to_jsonl(bool include_meta) const {
    std::string out;
    if (include_meta && !meta_.is_null()) {
      json m = meta_;
      m["type"] = "meta";
      out += m.dump();
      out += '\n';
    }
    for (const auto &r : records_) {
      out += r.dump();
      out += '\n';
    }
    return out;
  }

  Transcript Transcript::from_jsonl(std::string_view text) {
    Transcript t;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json record;
      try {
        record = json::parse(line);
      } catch (const json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
      }
      if (!record.is_object() || !record.contains("type")) {
        throw ParseError("record without a \"type\" field", line_no);
      }
      if (record["type"] == "meta") {
        record.erase("type");
        t.meta_ = std::move(record);
      } else {
        t.records_.push_back(std::move(record));
      }
    }
    if (t.records_.empty()) throw ParseError("transcript is empty", 0);
    return t;
  }

  void Transcript::write(const std::filesystem::path &path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << to_jsonl();
  }

  Transcript Transcript::read(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_jsonl(buf.str());
  }

}  // namespace mvbc
