import pytest

from artifact.engine import RoundKind, Schedule, run
from artifact.graphs import all_graphs, random_labeled_graph
from artifact.languages import membership
from artifact.protocols import FullStateStressProtocol, proto_registry
from artifact.transforms import (
    UnsupportedScheduleError,
    composed_bandwidth,
    normalize_lb,
    swap_bl_to_lb,
    tomdf_bcc_decider,
    tomdf_bcc_schedule,
    triangle_freeness_via_tomdf,
)


def verdicts_match(proto_a, sched_a, proto_b, sched_b, graph, seed=0):
    a = run(proto_a, graph, sched_a, seed=seed, record=False).verdict
    b = run(proto_b, graph, sched_b, seed=seed, record=False).verdict
    return a.accept == b.accept and a.rejectors == b.rejectors


# ---------------------------------------------------------------------------
# broadcast/unbounded round exchange


def test_swap_produces_lb_schedule():
    named = proto_registry("tomdf")
    swapped, sched = swap_bl_to_lb(named.protocol, named.schedule, 1)
    assert [k.char for k in sched] == ["L", "B"]


def test_swap_preserves_tomdf_verdicts_small():
    named = proto_registry("tomdf")
    swapped, sched = swap_bl_to_lb(named.protocol, named.schedule, 1)
    for n in range(1, 5):
        for g in all_graphs(n):
            assert verdicts_match(named.protocol, named.schedule, swapped, sched, g)


def test_swap_rejects_wrong_positions():
    named = proto_registry("tomdf")
    with pytest.raises(UnsupportedScheduleError):
        swap_bl_to_lb(named.protocol, named.schedule, 2)
    with pytest.raises(UnsupportedScheduleError):
        swap_bl_to_lb(named.protocol, Schedule.parse("L,B"), 1)


def test_normalize_moves_all_broadcasts_last():
    proto = FullStateStressProtocol()
    norm, sched = normalize_lb(proto, Schedule.parse("B,L,B,L"))
    assert sched.text == "L^2,B^2"


def test_normalize_is_identity_on_sorted_schedules():
    proto = FullStateStressProtocol()
    norm, sched = normalize_lb(proto, Schedule.parse("L,B"))
    assert norm is proto
    assert sched.text == "L,B"


def test_normalize_rejects_capped_rounds():
    with pytest.raises(UnsupportedScheduleError):
        normalize_lb(FullStateStressProtocol(), Schedule.parse("B,C,L"))


@pytest.mark.parametrize("text", ["B,L", "B,L,B,L"])
def test_normalize_preserves_stress_verdicts(text):
    sched = Schedule.parse(text)
    proto = FullStateStressProtocol()
    norm, nsched = normalize_lb(proto, sched)
    for seed in range(10):
        g = random_labeled_graph(2 + seed % 5, seed)
        assert verdicts_match(proto, sched, norm, nsched, g, seed=seed)


def test_normalize_preserves_tomdf_on_its_native_schedule():
    named = proto_registry("tomdf")
    norm, nsched = normalize_lb(named.protocol, named.schedule)
    assert nsched.text == "L,B"
    for g in all_graphs(4):
        assert verdicts_match(named.protocol, named.schedule, norm, nsched, g)


# ---------------------------------------------------------------------------
# broadcast-only decider and the degree-padding reduction


def test_tomdf_bcc_schedule_is_broadcast_only():
    for n in (1, 4, 9, 30):
        sched = tomdf_bcc_schedule(n)
        assert all(k is RoundKind.BCC for k in sched)
        assert len(sched) >= 2


def test_tomdf_bcc_decider_matches_oracle():
    for n in range(1, 5):
        named = tomdf_bcc_decider(n)
        for g in all_graphs(n):
            got = run(named.protocol, g, named.schedule, record=False).verdict.accept
            assert got == membership("tomdf", g), g


def test_composed_bandwidth_is_twice_default():
    from artifact.engine import default_bandwidth

    for n in (2, 5, 16, 33):
        assert composed_bandwidth(n) == 2 * default_bandwidth(n)


def test_triangle_freeness_via_tomdf_matches_oracle():
    for n in range(1, 5):
        named = triangle_freeness_via_tomdf(n)
        assert all(k is RoundKind.BCC for k in named.schedule)
        for g in all_graphs(n):
            got = run(named.protocol, g, named.schedule, record=False).verdict.accept
            assert got == membership("triangle-freeness", g), g
