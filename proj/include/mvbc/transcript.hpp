// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_TRANSCRIPT_HPP
#define MVBC_TRANSCRIPT_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mvbc {

  using json = nlohmann::json;

  /**
   * Ordered event log of one run, serialized as JSON lines. The optional
   * "meta" record (tool name, wall-clock timestamp) is the only
   * non-deterministic part and is kept apart from the event records.
   */
  class Transcript {
  public:
    void set_meta(json meta) { meta_ = std::move(meta); }
    const json &meta() const noexcept { return meta_; }

    void add(json record) { records_.push_back(std::move(record)); }
    const std::vector<json> &records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }

    /// Records whose "type" equals `type`, in order.
    std::vector<const json *> of_type(std::string_view type) const;
    /// The final summary record; throws ParseError if absent.
    const json &summary() const;

    std::string to_jsonl(bool include_meta = true) const;
    static Transcript from_jsonl(std::string_view text);

    void write(const std::filesystem::path &path) const;
    static Transcript read(const std::filesystem::path &path);

  private:
    json meta_;
    std::vector<json> records_;
  };

}  // namespace mvbc

#endif  // MVBC_TRANSCRIPT_HPP
