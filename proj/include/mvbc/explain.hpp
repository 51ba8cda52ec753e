// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_EXPLAIN_HPP
#define MVBC_EXPLAIN_HPP

#include <string>

#include "mvbc/transcript.hpp"

namespace mvbc::sim {

  /**
   * Plain-text narrative of a run: one paragraph per generation with the
   * match set, detections, edge removals and the decision. Deterministic.
   * Throws ParseError for an empty or malformed transcript.
   */
  std::string explain(const Transcript &transcript);

}  // namespace mvbc::sim

#endif  // MVBC_EXPLAIN_HPP
