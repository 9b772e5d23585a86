from fractions import Fraction

import pytest

from artifact.graphs import build_clique_bridge, build_xor_index_path
from artifact.protocols import proto_registry
from artifact.twoparty import (
    CutConfig,
    OneRoundProtocol,
    SearchTooLargeError,
    TwoPartyInstance,
    bruteforce_min_error,
    cut_communication,
    eval_protocol_error,
    pointer_chase,
    pointer_chasing_protocol,
    search_result_json,
    trivial_xor_index_protocol,
    xor_index_value,
)


def constant_protocol(n, bit):
    return OneRoundProtocol(
        n=n, k_a=0, k_b=0,
        alice_msg=lambda x, i, rho: "",
        bob_msg=lambda y, j, rho: "",
        alice_out=lambda x, i, mb, j: bit,
        bob_out=lambda y, j, ma, i: bit,
    )


# ---------------------------------------------------------------------------
# instances and the target function


def test_instance_validation():
    TwoPartyInstance("xor-index", 2, ("10", 1), ("01", 2))
    with pytest.raises(ValueError):
        TwoPartyInstance("xor-index", 2, ("1", 1), ("01", 2))
    with pytest.raises(ValueError):
        TwoPartyInstance("xor-index", 2, ("10", 0), ("01", 2))
    with pytest.raises(ValueError):
        TwoPartyInstance("parity", 2, "10", "01")
    with pytest.raises(ValueError):
        TwoPartyInstance("pointer-chasing", 4, (0, 1, 2, 3), (0, 1, 2, 3), k=0)


def test_xor_index_value():
    assert xor_index_value(TwoPartyInstance("xor-index", 2, ("10", 1), ("01", 2))) == 0
    assert xor_index_value(TwoPartyInstance("xor-index", 2, ("10", 1), ("00", 1))) == 1
    assert xor_index_value(TwoPartyInstance("xor-index", 1, ("1", 1), ("1", 1))) == 0


# ---------------------------------------------------------------------------
# protocol evaluation (exact rationals)


def test_trivial_protocol_zero_error():
    for n in (1, 2, 3):
        proto = trivial_xor_index_protocol(n)
        assert eval_protocol_error(proto, n) == 0


def test_trivial_protocol_budget():
    proto = trivial_xor_index_protocol(4)
    assert proto.k_a == proto.k_b == 4 + 2  # n bits plus the free-rider index
    msg = proto.alice_msg("1010", 3, 0)
    assert len(msg) == proto.k_a


def test_constant_protocols_err_half():
    # always-accept errs exactly on tuples with target 0, always-reject on 1s
    assert eval_protocol_error(constant_protocol(1, 1), 1) == Fraction(1, 2)
    assert eval_protocol_error(constant_protocol(1, 0), 1) == Fraction(1, 2)


def test_eval_rejects_over_budget_messages():
    cheat = OneRoundProtocol(
        n=1, k_a=0, k_b=0,
        alice_msg=lambda x, i, rho: x,  # 1 bit against a 0-bit budget
        bob_msg=lambda y, j, rho: "",
        alice_out=lambda x, i, mb, j: 1,
        bob_out=lambda y, j, ma, i: 1,
    )
    with pytest.raises(ValueError):
        eval_protocol_error(cheat, 1)


# ---------------------------------------------------------------------------
# brute force


def test_bruteforce_zero_budget_quarter():
    error, witness = bruteforce_min_error(1, 0, 0)
    assert error == Fraction(1, 4)
    assert eval_protocol_error(witness, 1) == error


def test_bruteforce_one_bit_suffices_at_n1():
    error, witness = bruteforce_min_error(1, 1, 1)
    assert error == 0
    assert eval_protocol_error(witness, 1) == 0


def test_bruteforce_monotone_in_budget_and_n():
    e_n1_k0 = bruteforce_min_error(1, 0, 0)[0]
    e_n1_k1 = bruteforce_min_error(1, 1, 1)[0]
    assert e_n1_k1 <= e_n1_k0
    e_n2_k0 = bruteforce_min_error(2, 0, 0)[0]
    assert e_n2_k0 >= e_n1_k0
    assert e_n2_k0 > 0


def test_bruteforce_budget_guard():
    with pytest.raises(SearchTooLargeError):
        bruteforce_min_error(2, 2, 2)


def test_search_result_json_round_trips_the_fraction():
    import json

    error, witness = bruteforce_min_error(1, 0, 0)
    blob = json.loads(search_result_json(1, 0, 0, error, witness))
    assert blob["min_error"] == "1/4"
    assert blob["n"] == 1 and blob["kA"] == 0
    assert set(blob["witness"]) == {"alice_msg", "bob_msg", "alice_out", "bob_out"}


# ---------------------------------------------------------------------------
# cut communication


def test_cut_requires_a_partition():
    g = build_xor_index_path(2, "10", "01", 1, 2)
    with pytest.raises(ValueError):
        CutConfig(frozenset({1, 2}), frozenset({2, 3}), frozenset({1}))
    with pytest.raises(ValueError):
        cut_communication(
            proto_registry("xor-index-path"),
            g,
            CutConfig(frozenset({1}), frozenset({2}), frozenset({1})),
        )


def test_cut_on_the_index_path():
    n = 8
    g = build_xor_index_path(n, "10110010", "01100101", 3, 6)
    named = proto_registry("xor-index-path")
    alice = frozenset(range(1, n + 2))
    bob = frozenset(range(n + 2, 2 * n + 2))
    accounted = frozenset({1, n - 1, n, n + 1, n + 2, n + 3, 2 * n + 1})
    report, result = cut_communication(named, g, CutConfig(alice, bob, accounted))
    # the metered endpoints exchange a bounded number of capped messages
    from artifact.engine import default_bandwidth

    assert report.total <= 8 * default_bandwidth(2 * n + 1)
    assert report.total <= result.transcript.total_bits
    assert len(report.per_round) == len(named.schedule)
    assert report.total == sum(report.alice_to_bob) + sum(report.bob_to_alice)


def test_cut_empty_accounted_is_zero():
    g = build_xor_index_path(2, "10", "01", 1, 2)
    named = proto_registry("xor-index-path")
    cfg = CutConfig(frozenset({1, 2, 3}), frozenset({4, 5}), frozenset())
    report, _ = cut_communication(named, g, cfg)
    assert report.total == 0


def test_cut_grows_gently_on_clique_bridge():
    named = proto_registry("one-marked-edge")
    totals = {}
    for n in (4, 6, 8):
        m = n * (n - 1) // 2
        g = build_clique_bridge(n, "1" + "0" * (m - 1), "0" * (m - 1) + "1", 1, m)
        alice = frozenset(list(range(1, n + 1)) + [2 * n + 1, 2 * n + 2])
        bob = frozenset(set(g.nodes) - alice)
        report, _ = cut_communication(named, g, CutConfig(alice, bob, frozenset(g.nodes)))
        totals[n] = report.total
    from artifact.engine import default_bandwidth

    for n, total in totals.items():
        assert total <= 2 * (n + 2) * default_bandwidth(2 * n + 4)


# ---------------------------------------------------------------------------
# pointer chasing


def test_pointer_chase_example():
    f = (2, 3, 1, 0)
    inst = TwoPartyInstance("pointer-chasing", 4, f, f, k=2)
    run = pointer_chasing_protocol(2).run(inst)
    assert run.transcript == (2, 1)
    assert run.pointer == 1
    assert run.output == 1
    assert run.bits == 2 * 2  # two rounds of 2-bit pointers


def test_pointer_chase_alternates_sides():
    f_a = (2, 3, 1, 0)
    f_b = (1, 0, 3, 2)
    assert pointer_chase(f_a, f_b, 1) == f_a[0]
    assert pointer_chase(f_a, f_b, 2) == f_b[f_a[0]]
    assert pointer_chase(f_a, f_b, 3) == f_a[f_b[f_a[0]]]


def test_single_round_outputs_first_hop_parity():
    for f0 in range(4):
        f = (f0, 0, 0, 0)
        inst = TwoPartyInstance("pointer-chasing", 4, f, f, k=1)
        run = pointer_chasing_protocol(1).run(inst)
        assert run.output == bin(f0).count("1") % 2
        assert run.bits == 2


def test_pointer_protocol_validates_instance():
    inst = TwoPartyInstance("xor-index", 1, ("1", 1), ("1", 1))
    with pytest.raises(ValueError):
        pointer_chasing_protocol(1).run(inst)
    good = TwoPartyInstance("pointer-chasing", 2, (1, 0), (1, 0), k=2)
    with pytest.raises(ValueError):
        pointer_chasing_protocol(1).run(good)  # k mismatch
