"""Synchronous round-based execution of node protocols over labeled graphs.

A schedule is an ordered list of round kinds:

* ``L`` — every node may send one message of unbounded size to each neighbor;
* ``C`` — one message per neighbor, each capped at ``bandwidth(n)`` bits;
* ``B`` — one broadcast of at most ``bandwidth(n)`` bits, delivered to every
  node in the graph (the sender included), so all nodes see the identical
  multiset of broadcasts.

Timing contract: messages sent in round r are delivered at the *end* of round
r, so the inbox passed to ``Protocol.round`` for round r+1 holds round r's
deliveries (round 1 sees an empty inbox), and the final round's deliveries are
handed to ``Protocol.decide``. Inbox entries are (sender id, payload) pairs
sorted by sender; sender identity rides free and is not metered. A node that
sends nothing to some neighbor simply does not appear in that inbox — an
explicit empty-string message does.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Mapping

from ._rng import Tape
from .graphs import Label, LabeledGraph

Inbox = tuple[tuple[int, str], ...]


class RoundKind(Enum):
    LOCAL = "L"
    BCC = "B"
    CONGEST = "C"

    @staticmethod
    def from_char(c: str) -> "RoundKind":
        try:
            return _KIND_BY_CHAR[c]
        except KeyError:
            raise ValueError(f"unknown round kind {c!r}") from None

    @property
    def char(self) -> str:
        return self.value


_KIND_BY_CHAR = {k.value: k for k in RoundKind}


def default_bandwidth(n: int) -> int:
    """4 * ceil(log2(max(n, 2))) bits — enough for a handful of id-width fields."""
    return 4 * (max(n, 2) - 1).bit_length()


@dataclass(frozen=True)
class Schedule:
    """Ordered round kinds plus the bit budget for capped rounds."""

    kinds: tuple[RoundKind, ...]
    bandwidth: Callable[[int], int] = field(default=default_bandwidth, compare=False)

    def __len__(self) -> int:
        return len(self.kinds)

    def __iter__(self) -> Iterator[RoundKind]:
        return iter(self.kinds)

    def count(self, kind: RoundKind) -> int:
        return sum(1 for k in self.kinds if k is kind)

    @property
    def text(self) -> str:
        """Canonical text form, run-length encoded: 'L,B', 'B^3'."""
        if not self.kinds:
            return ""
        parts = []
        run_kind, run_len = self.kinds[0], 1
        for k in self.kinds[1:]:
            if k is run_kind:
                run_len += 1
            else:
                parts.append(run_kind.char if run_len == 1 else f"{run_kind.char}^{run_len}")
                run_kind, run_len = k, 1
        parts.append(run_kind.char if run_len == 1 else f"{run_kind.char}^{run_len}")
        return ",".join(parts)

    @staticmethod
    def parse(text: str, bandwidth: Callable[[int], int] = default_bandwidth) -> "Schedule":
        """Parse 'L,B', 'B^3', 'C,C,B^2' style schedule text."""
        kinds: list[RoundKind] = []
        stripped = text.strip()
        if stripped:
            for token in stripped.split(","):
                token = token.strip()
                base, _, exp = token.partition("^")
                reps = 1
                if exp:
                    if not exp.isdigit() or int(exp) < 1:
                        raise ValueError(f"bad repetition in schedule token {token!r}")
                    reps = int(exp)
                kinds.extend([RoundKind.from_char(base)] * reps)
        return Schedule(tuple(kinds), bandwidth)

    def with_bandwidth(self, bandwidth: Callable[[int], int]) -> "Schedule":
        return Schedule(self.kinds, bandwidth)


def schedule_cost(schedule: Schedule, a: float, b: float, c: float) -> float:
    """Weighted round count: a per L round, b per B round, c per C round."""
    return (
        a * schedule.count(RoundKind.LOCAL)
        + b * schedule.count(RoundKind.BCC)
        + c * schedule.count(RoundKind.CONGEST)
    )


class EngineError(Exception):
    pass


class BandwidthViolationError(EngineError):
    def __init__(self, round_index: int, sender: int, size: int, limit: int):
        self.round_index = round_index
        self.sender = sender
        self.size = size
        self.limit = limit
        super().__init__(
            f"round {round_index}: node {sender} sent {size} bits (limit {limit})"
        )


class ProtocolContractError(EngineError):
    pass


@dataclass(frozen=True)
class NodeView:
    """What a node knows at wake-up: its id, the graph size n, the id-space
    bound N, its sorted neighbor ids, its label, and a private random tape."""

    node: int
    n: int
    big_n: int
    neighbors: tuple[int, ...]
    label: Label
    tape: Tape


class Protocol:
    """Node-protocol interface; see the module docstring for inbox timing."""

    def init(self, view: NodeView):
        raise NotImplementedError

    def round(self, state, index: int, kind: RoundKind, inbox: Inbox):
        """Return (new state, outbox). Outbox: for B a single bit string; for
        L/C a dict neighbor-id -> bit string (missing neighbors stay silent)."""
        raise NotImplementedError

    def decide(self, state, inbox: Inbox) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class TranscriptEvent:
    round_index: int
    kind: str
    sender: int
    receiver: int | None  # None = broadcast to all
    bits: int
    payload: str


class Transcript:
    """Byte-exact record of everything sent: events plus per-kind bit totals.

    Broadcast messages appear once per sender. With record=False only the
    totals are kept (events list stays empty) — the cheap mode for sweeps.
    """

    def __init__(self, record: bool = True):
        self.record = record
        self.events: list[TranscriptEvent] = []
        self.totals: dict[str, int] = {"L": 0, "B": 0, "C": 0}
        self.max_bits: dict[str, int] = {"L": 0, "B": 0, "C": 0}

    def _add(self, round_index: int, kind: str, sender: int, receiver: int | None, payload: str):
        nbits = len(payload)
        self.totals[kind] += nbits
        if nbits > self.max_bits[kind]:
            self.max_bits[kind] = nbits
        if self.record:
            self.events.append(
                TranscriptEvent(round_index, kind, sender, receiver, nbits, payload)
            )

    @property
    def total_bits(self) -> int:
        return sum(self.totals.values())

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(
            {
                "totals": self.totals,
                "events": [
                    {
                        "round": e.round_index,
                        "kind": e.kind,
                        "sender": e.sender,
                        "receiver": e.receiver,
                        "bits": e.bits,
                        "payload": e.payload,
                    }
                    for e in self.events
                ],
            },
            indent=indent,
        )

    def to_csv(self) -> str:
        lines = ["round,kind,sender,receiver,bits"]
        for e in self.events:
            recv = "" if e.receiver is None else str(e.receiver)
            lines.append(f"{e.round_index},{e.kind},{e.sender},{recv},{e.bits}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Verdict:
    per_node: Mapping[int, bool]

    @property
    def accept(self) -> bool:
        """Global acceptance: every single node accepted."""
        return all(self.per_node.values())

    @property
    def rejectors(self) -> tuple[int, ...]:
        return tuple(v for v, ok in sorted(self.per_node.items()) if not ok)


@dataclass
class RunResult:
    verdict: Verdict
    transcript: Transcript
    states: dict[int, object]
    final_inboxes: dict[int, Inbox]

    def __iter__(self):
        # allow `verdict, transcript = run(...)`
        return iter((self.verdict, self.transcript))


def make_views(graph: LabeledGraph, seed: int) -> dict[int, NodeView]:
    n, big_n = graph.n, graph.big_n
    return {
        v: NodeView(v, n, big_n, graph.neighbors(v), graph.label(v), Tape(seed, v))
        for v in graph.nodes
    }


def _check_payload(payload, round_index: int, sender: int):
    if not isinstance(payload, str) or payload.strip("01"):
        raise ProtocolContractError(
            f"round {round_index}: node {sender} produced a non-bit payload {payload!r}"
        )


def run(
    protocol: Protocol,
    graph: LabeledGraph,
    schedule: Schedule,
    seed: int = 0,
    record: bool = True,
) -> RunResult:
    """Execute the protocol once; deterministic given (protocol, graph,
    schedule, seed). Returns a RunResult that unpacks to (verdict, transcript).
    """
    nodes = graph.nodes
    views = make_views(graph, seed)
    states = {v: protocol.init(views[v]) for v in nodes}
    inboxes: dict[int, Inbox] = {v: () for v in nodes}
    transcript = Transcript(record)
    bw = schedule.bandwidth(graph.n)

    for round_index, kind in enumerate(schedule.kinds, start=1):
        outs: dict[int, object] = {}
        for v in nodes:
            result = protocol.round(states[v], round_index, kind, inboxes[v])
            if not isinstance(result, tuple) or len(result) != 2:
                raise ProtocolContractError(
                    f"round {round_index}: node {v} round() must return (state, outbox)"
                )
            states[v], outs[v] = result

        if kind is RoundKind.BCC:
            for v in nodes:
                payload = outs[v]
                _check_payload(payload, round_index, v)
                if len(payload) > bw:
                    raise BandwidthViolationError(round_index, v, len(payload), bw)
                transcript._add(round_index, "B", v, None, payload)
            shared: Inbox = tuple((v, outs[v]) for v in nodes)
            inboxes = {v: shared for v in nodes}
        else:
            kind_char = kind.char
            capped = kind is RoundKind.CONGEST
            buckets: dict[int, list[tuple[int, str]]] = {v: [] for v in nodes}
            for v in nodes:
                outbox = outs[v]
                if not isinstance(outbox, dict):
                    raise ProtocolContractError(
                        f"round {round_index}: node {v} must return a neighbor->bits dict"
                    )
                nbrs = set(graph.neighbors(v))
                for u, payload in outbox.items():
                    if u not in nbrs:
                        raise ProtocolContractError(
                            f"round {round_index}: node {v} addressed non-neighbor {u}"
                        )
                    _check_payload(payload, round_index, v)
                    if capped and len(payload) > bw:
                        raise BandwidthViolationError(round_index, v, len(payload), bw)
                    transcript._add(round_index, kind_char, v, u, payload)
                    buckets[u].append((v, payload))
            inboxes = {v: tuple(sorted(buckets[v])) for v in nodes}

    per_node = {v: bool(protocol.decide(states[v], inboxes[v])) for v in nodes}
    return RunResult(Verdict(per_node), transcript, states, inboxes)
