"""Schedule transformations.

Two constructions live here:

* an exact rewrite that swaps an adjacent broadcast/unbounded round pair
  (B then L becomes L then B) while preserving every verdict, plus its
  closure that bubbles every broadcast round behind the unbounded ones;
* a reduction that decides triangle-freeness by padding the graph with
  virtual pendant leaves until all degrees match and running a broadcast-only
  decider for the max-degree-triangle property on the padded graph.

The swap works by deferral: in the new early unbounded round each node ships
its whole pre-round state (and pending deliveries) to its neighbors, then
everyone replays the displaced rounds of every neighbor locally. Verdicts are
preserved exactly because the replay feeds the inner protocol byte-identical
inboxes; it costs one round of full-state traffic, which an unbounded round
permits.
"""

from __future__ import annotations

import math
import pickle
from dataclasses import dataclass

from ._bits import (
    bits_to_bytes,
    bytes_to_bits,
    count_width as _count_width,
    decode_int,
    encode_int,
)
from .engine import (
    NodeView,
    Protocol,
    RoundKind,
    Schedule,
    default_bandwidth,
)
from .protocols import NamedProtocol


class UnsupportedScheduleError(ValueError):
    """The rewrite does not apply to the given schedule position."""


def _obj_to_bits(obj) -> str:
    return bytes_to_bits(pickle.dumps(obj, protocol=4))


def _bits_to_obj(bits: str):
    return pickle.loads(bits_to_bytes(bits))


class _SwappedProtocol(Protocol):
    """Runs `inner` (written for `kinds`, with B at position t and L at t+1)
    under the swapped schedule (L at t, B at t+1)."""

    def __init__(self, inner: Protocol, kinds: tuple[RoundKind, ...], t: int):
        self.inner = inner
        self.kinds = kinds
        self.t = t

    def init(self, view: NodeView):
        return {
            "me": view.node,
            "nbrs": view.neighbors,
            "inner": self.inner.init(view),
            "stash": None,      # inbox the displaced B round should consume
            "payloads": None,   # neighbors' (state, inbox) pairs
            "state_t": None,    # own inner state after the displaced B round
        }

    def _replay_neighbors(self, state, bcast_inbox):
        """Recompute each neighbor's displaced B and L rounds and collect the
        unbounded-round messages they would have addressed to this node."""
        t, me = self.t, state["me"]
        got = []
        for sender, (st_u, inbox_u) in state["payloads"].items():
            st_u, _ = self.inner.round(st_u, t, RoundKind.BCC, inbox_u)
            _, out_u = self.inner.round(st_u, t + 1, RoundKind.LOCAL, bcast_inbox)
            if me in out_u:
                got.append((sender, out_u[me]))
        return tuple(sorted(got))

    def round(self, state, index, kind, inbox):
        t = self.t
        if index < t or index > t + 2:
            inner_state, out = self.inner.round(
                state["inner"], index, self.kinds[index - 1], inbox
            )
            return dict(state, inner=inner_state), out
        if index == t:
            # the new unbounded round: ship full state + pending deliveries
            payload = _obj_to_bits((state["inner"], inbox))
            return dict(state, stash=inbox), {u: payload for u in state["nbrs"]}
        if index == t + 1:
            # the displaced broadcast, computed from the stashed inbox
            payloads = {u: _bits_to_obj(msg) for u, msg in inbox}
            state_t, out_b = self.inner.round(
                state["inner"], t, RoundKind.BCC, state["stash"]
            )
            return dict(state, payloads=payloads, state_t=state_t), out_b
        # index == t + 2: replay the displaced unbounded round, then resume
        state_t1, _ = self.inner.round(
            state["state_t"], t + 1, RoundKind.LOCAL, inbox
        )
        inner_inbox = self._replay_neighbors(state, inbox)
        inner_state, out = self.inner.round(
            state_t1, t + 2, self.kinds[t + 1], inner_inbox
        )
        return dict(state, inner=inner_state, payloads=None), out

    def decide(self, state, inbox):
        if len(self.kinds) == self.t + 1:
            # the swapped pair was the tail of the schedule
            state_t1, _ = self.inner.round(
                state["state_t"], self.t + 1, RoundKind.LOCAL, inbox
            )
            return self.inner.decide(state_t1, self._replay_neighbors(state, inbox))
        return self.inner.decide(state["inner"], inbox)


def swap_bl_to_lb(
    protocol: Protocol, schedule: Schedule, t: int
) -> tuple[Protocol, Schedule]:
    """Exchange the broadcast round at position t (1-based) with the unbounded
    round right after it, returning an equivalent protocol for the swapped
    schedule. Raises UnsupportedScheduleError unless kinds[t-1:t+1] == (B, L).
    """
    kinds = tuple(schedule.kinds)
    if not 1 <= t < len(kinds):
        raise UnsupportedScheduleError(f"position {t} out of range")
    if kinds[t - 1] is not RoundKind.BCC or kinds[t] is not RoundKind.LOCAL:
        raise UnsupportedScheduleError(
            f"rounds {t},{t + 1} are {kinds[t - 1].char}{kinds[t].char}, need BL"
        )
    new_kinds = kinds[: t - 1] + (RoundKind.LOCAL, RoundKind.BCC) + kinds[t + 1 :]
    return _SwappedProtocol(protocol, kinds, t), Schedule(new_kinds, schedule.bandwidth)


def normalize_lb(protocol: Protocol, schedule: Schedule) -> tuple[Protocol, Schedule]:
    """Bubble every broadcast round behind every unbounded round by repeated
    swaps (rightmost adjacent B,L pair first). Capped rounds are not handled.
    """
    if any(k is RoundKind.CONGEST for k in schedule.kinds):
        raise UnsupportedScheduleError("schedules with capped rounds are not supported")
    while True:
        kinds = schedule.kinds
        spots = [
            t
            for t in range(1, len(kinds))
            if kinds[t - 1] is RoundKind.BCC and kinds[t] is RoundKind.LOCAL
        ]
        if not spots:
            return protocol, schedule
        protocol, schedule = swap_bl_to_lb(protocol, schedule, spots[-1])


# ---------------------------------------------------------------------------
# triangle-freeness by degree-padding reduction


def _pendant_assignment(degrees: dict[int, int]) -> dict[int, tuple[int, ...]]:
    """Deterministically name the virtual pendant leaves: each node gets
    (max degree - own degree) of them, drawn from the smallest positive
    integers not used as real ids, in sorted host order."""
    delta = max(degrees.values())
    used = set(degrees)
    fresh = (i for i in range(1, len(degrees) * (delta + 1) + 2) if i not in used)
    out = {}
    for v in sorted(degrees):
        out[v] = tuple(next(fresh) for _ in range(delta - degrees[v]))
    return out


def _chunks(bits: str, size: int) -> list[str]:
    return [bits[i : i + size] for i in range(0, len(bits), size)] or [""]


class TomdfBccDecider(Protocol):
    """Broadcast-only decider for the no-triangle-on-max-degree property:
    degrees first, then everyone's adjacency row (over rank order) in
    bandwidth-sized chunks. Runs under tomdf_bcc_schedule(n)."""

    def init(self, view: NodeView):
        return {
            "me": view.node,
            "nbrs": set(view.neighbors),
            "n": view.n,
            "ranks": None,
            "rows": {},
        }

    def round(self, state, index, kind, inbox):
        n = state["n"]
        bw = default_bandwidth(n)
        if index == 1:
            return state, encode_int(len(state["nbrs"]), _count_width(n))
        if index == 2:
            state = dict(state, ranks=tuple(sorted(v for v, _ in inbox)))
        row = "".join("1" if u in state["nbrs"] else "0" for u in state["ranks"])
        pieces = _chunks(row, bw)
        chunk = pieces[index - 2] if index - 2 < len(pieces) else ""
        for v, msg in inbox if index > 2 else ():
            state["rows"][v] = state["rows"].get(v, "") + msg
        return state, chunk

    def decide(self, state, inbox):
        for v, msg in inbox:
            state["rows"][v] = state["rows"].get(v, "") + msg
        ranks = state["ranks"]
        rows = state["rows"]
        if ranks is None or any(len(rows.get(v, "")) != len(ranks) for v in ranks):
            return False
        adj = {
            v: {ranks[i] for i, b in enumerate(rows[v]) if b == "1"} for v in ranks
        }
        delta = max(len(adj[v]) for v in ranks)
        mine = sorted(adj[state["me"]])
        if len(mine) != delta:
            return True
        return not any(
            b in adj[a] for i, a in enumerate(mine) for b in mine[i + 1 :]
        )


def tomdf_bcc_schedule(n: int) -> Schedule:
    """Broadcast rounds needed by TomdfBccDecider on an n-node graph."""
    rounds = 1 + math.ceil(n / default_bandwidth(n))
    return Schedule.parse(f"B^{rounds}" if rounds > 1 else "B")


def tomdf_bcc_decider(n: int) -> NamedProtocol:
    return NamedProtocol(
        "tomdf-bcc", TomdfBccDecider(), tomdf_bcc_schedule(n), "tomdf", "tomdf"
    )


class TriangleFreeViaTomdf(Protocol):
    """Decides triangle-freeness by padding: after a degree exchange, every
    node knows the virtual pendant layout that equalizes all degrees, and the
    remaining broadcast rounds ship adjacency rows of the padded graph. Each
    real node answers for itself and for its own pendants. Pendant rows are
    public knowledge, so only real rows travel."""

    def init(self, view: NodeView):
        return {
            "me": view.node,
            "nbrs": set(view.neighbors),
            "n": view.n,
            "plan": None,  # (pendants per host, padded rank order)
            "rows": {},
        }

    def round(self, state, index, kind, inbox):
        n = state["n"]
        if index == 1:
            return state, encode_int(len(state["nbrs"]), _count_width(n))
        bw = composed_bandwidth(n)
        if index == 2:
            wd = _count_width(n)
            degrees = {}
            for v, msg in inbox:
                if len(msg) != wd:
                    return state, ""
                degrees[v] = decode_int(msg)
            pendants = _pendant_assignment(degrees)
            padded = sorted(set(degrees) | {p for ps in pendants.values() for p in ps})
            state = dict(state, plan=(pendants, tuple(padded)))
        if state["plan"] is None:
            return state, ""
        pendants, padded = state["plan"]
        mine = state["nbrs"] | set(pendants[state["me"]])
        row = "".join("1" if u in mine else "0" for u in padded)
        pieces = _chunks(row, bw)
        chunk = pieces[index - 2] if index - 2 < len(pieces) else ""
        for v, msg in inbox if index > 2 else ():
            state["rows"][v] = state["rows"].get(v, "") + msg
        return state, chunk

    def decide(self, state, inbox):
        if state["plan"] is None:
            return False
        for v, msg in inbox:
            state["rows"][v] = state["rows"].get(v, "") + msg
        pendants, padded = state["plan"]
        rows = state["rows"]
        real = sorted(pendants)
        if any(len(rows.get(v, "")) != len(padded) for v in real):
            return False
        adj = {v: {padded[i] for i, b in enumerate(rows[v]) if b == "1"} for v in real}
        for host, ps in pendants.items():
            for p in ps:
                adj[p] = {host}
        delta = max(len(s) for s in adj.values())

        def ok(v: int) -> bool:
            mine = sorted(adj[v])
            if len(mine) != delta:
                return True
            return not any(
                b in adj[a] for i, a in enumerate(mine) for b in mine[i + 1 :]
            )

        return ok(state["me"]) and all(ok(p) for p in pendants[state["me"]])


def composed_bandwidth(n: int) -> int:
    """Bandwidth of the composed schedule: twice the default cap."""
    return 8 * (max(n, 2) - 1).bit_length()


def triangle_freeness_via_tomdf(n: int) -> NamedProtocol:
    """Broadcast-only triangle-freeness protocol for n-node graphs. The round
    count is fixed from n alone via the worst-case padded size n**2."""
    padded_max = max(n * n, 1)
    rounds = 1 + math.ceil(padded_max / composed_bandwidth(n))
    schedule = Schedule(
        (RoundKind.BCC,) * rounds, bandwidth=lambda m: composed_bandwidth(m)
    )
    return NamedProtocol(
        "triangle-freeness-via-tomdf",
        TriangleFreeViaTomdf(),
        schedule,
        "triangle-freeness",
        "triangle-freeness",
    )
