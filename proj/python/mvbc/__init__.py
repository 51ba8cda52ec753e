# Copyright 2026 The mvbc Authors
# SPDX-License-Identifier: Apache-2.0
"""Error-free multi-valued Byzantine consensus: library and simulator."""

from __future__ import annotations

import json
from typing import Any, Mapping, Optional, Sequence

from . import _mvbc
from ._mvbc import (
    ConfigError,
    DomainError,
    Error,
    Field,
    Inconsistency,
    InsufficientInformation,
    InvariantViolation,
    ParseError,
    UsageError,
    bsb_cost,
    builtin_strategies,
    predict_total,
    rs_decode,
    rs_encode,
    rs_is_consistent,
)

__all__ = [
    "ConfigError", "DomainError", "Error", "Field", "Inconsistency",
    "InsufficientInformation", "InvariantViolation", "ParseError", "UsageError",
    "bsb_cost", "builtin_strategies", "choose_parameters", "explain",
    "parse_scenario", "predict_per_generation", "predict_total", "rs_decode",
    "rs_encode", "rs_is_consistent", "run_scenario",
]


def choose_parameters(n: int, t: int, L: int, D: Optional[int] = None) -> dict:
    """Generation size and code parameters for an L-bit run."""
    return json.loads(_mvbc.choose_parameters_json(n, t, L, D))


def predict_per_generation(n: int, t: int, D: int, B: int) -> dict:
    """Predicted matching/checking/diagnosis costs of one generation."""
    return json.loads(_mvbc.predict_per_generation_json(n, t, D, B))


def parse_scenario(text: str, is_json: bool = False) -> dict:
    """Parses a scenario file body into its JSON form (1-based ids)."""
    return json.loads(_mvbc.parse_scenario_json(text, is_json))


def run_scenario(scenario: Mapping[str, Any] | str, record_messages: bool = True) -> dict:
    """Runs and audits one scenario.

    `scenario` is a dict or JSON text in the scenario file format. The
    result holds the audit verdicts, outputs (hex), cost statistics, the
    complexity report and the transcript as a list of records.
    """
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    result = json.loads(_mvbc.run_scenario_json(text, record_messages))
    lines: Sequence[str] = result.pop("transcript").splitlines()
    result["transcript"] = [json.loads(line) for line in lines]
    return result


def explain(transcript: Sequence[Mapping[str, Any]] | str) -> str:
    """Narrative of a run from its transcript records or JSONL text."""
    if not isinstance(transcript, str):
        transcript = "\n".join(json.dumps(r) for r in transcript)
    return _mvbc.explain(transcript)
