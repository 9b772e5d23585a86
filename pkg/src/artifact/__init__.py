"""Workbench for distributed decision protocols under hybrid round schedules.

The package simulates synchronous protocols over labeled graphs where each
round is one of three kinds — unbounded neighbor messages, bandwidth-capped
neighbor messages, or a single bandwidth-capped broadcast — and verifies the
protocol suite against ground-truth membership oracles, round-schedule
transformations, two-party reductions, and the numeric lower-bound toolkit.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .graphs import Label, LabeledGraph
from .engine import RoundKind, Schedule, Verdict, run

__all__ = [
    "Label",
    "LabeledGraph",
    "RoundKind",
    "Schedule",
    "Verdict",
    "run",
    "__version__",
]
