"""Topology validation, kernel recursion, simulation, decode, coalition view."""

import json
import random

import pytest

from ncauth import (
    CycleError,
    Field,
    Intervention,
    Matrix,
    Network,
    accept_map,
    butterfly,
    coalition_view,
    combine,
    compute_global_kernels,
    decode,
    diamond,
    fan,
    keygen,
    line,
    load_network,
    network_from_dict,
    simulate,
    tag,
)
from support import make_instance

BUTTERFLY_KERNELS = {
    "e1": (1, 0),
    "e2": (0, 1),
    "e3": (1, 0),
    "e4": (1, 0),
    "e5": (0, 1),
    "e6": (0, 1),
    "e7": (1, 1),
    "e8": (1, 1),
    "e9": (1, 1),
}


def scheme_for(net, rng, l=3, k=3, M=2):
    """Params/keys sized for a given topology (enough seats and messages)."""
    seats = len(net.verifiers)
    params, skey, vkeys, messages, packets = make_instance(
        rng, net.q, l, k, M, V=max(seats, 1), n=net.n
    )
    return params, skey, vkeys, messages, packets


def test_butterfly_global_kernels_hand_computed():
    gk = compute_global_kernels(butterfly(2))
    assert gk.n == 2
    assert gk.vectors == BUTTERFLY_KERNELS


def test_line_and_diamond_kernels():
    gk = compute_global_kernels(line(3, hops=3))
    assert all(v == (1,) for v in gk.vectors.values())
    gk2 = compute_global_kernels(diamond(5))
    assert gk2.vectors["e3"] == (1, 0) and gk2.vectors["e4"] == (0, 1)


def test_zero_kernel_propagates_zero():
    net = Network(
        2,
        "s",
        ("s", "a", "t"),
        [("e1", "s", "a"), ("e2", "a", "t")],
        {"a": [[0]]},
        {},
        ("t",),
    )
    gk = compute_global_kernels(net)
    assert gk.vectors["e2"] == (0,)


def test_cycle_rejected():
    with pytest.raises(CycleError):
        Network(
            2,
            "s",
            ("s", "a", "b"),
            [("e1", "s", "a"), ("e2", "a", "b"), ("e3", "b", "a")],
            {"a": [[1], [1]], "b": [[1]]},
        )


def test_network_validation_errors():
    with pytest.raises(ValueError):
        Network(4, "s", ("s", "t"), [("e1", "s", "t")], {})  # q not prime
    with pytest.raises(ValueError):
        Network(2, "s", ("s", "t"), [("e1", "t", "s")], {})  # source has in-edge
    with pytest.raises(ValueError):
        Network(2, "s", ("s", "t"), [("e1", "s", "x")], {})  # unknown node
    with pytest.raises(ValueError):
        Network(2, "s", ("s", "a", "t"), [("e1", "s", "a"), ("e2", "a", "t")], {})  # no kernel
    with pytest.raises(ValueError):
        Network(
            2, "s", ("s", "a", "t"),
            [("e1", "s", "a"), ("e2", "a", "t")],
            {"a": [[2]]},  # entry out of range
        )
    with pytest.raises(ValueError):
        butterfly(2, verifiers={"t1": 0, "t2": 0})  # shared seat


def test_honest_flow_matches_global_kernels():
    # oracle: flat edge value must equal f_e applied to the stacked sources
    rng = random.Random(31)
    for net in (butterfly(2), diamond(3), line(5, hops=3)):
        params, skey, vkeys, messages, packets = scheme_for(net, rng)
        flow = simulate(net, packets)
        base = Field(net.q, 1)
        x = Matrix(base, [p.flatten() for p in packets], cols=len(packets[0].flatten()))
        for e, f in flow.kernels.vectors.items():
            fe = Matrix(base, [f], cols=net.n)
            expect = (fe @ x).row(0)
            assert tuple(v.coeffs[0] for v in expect) == flow.edge_packets[e].flatten()


def test_identity_substitution_changes_nothing():
    rng = random.Random(7)
    net = butterfly(2)
    params, skey, vkeys, messages, packets = scheme_for(net, rng)
    honest = simulate(net, packets)
    same = simulate(net, packets, [Intervention("m", "e4", (1, 0))])
    assert same.edge_packets == honest.edge_packets
    assert same.log[0].changed is False


def test_substitution_validation():
    rng = random.Random(8)
    net = butterfly(2)
    params, skey, vkeys, messages, packets = scheme_for(net, rng)
    with pytest.raises(ValueError):
        simulate(net, packets, [Intervention("m", "e4", (1, 1))])  # sum 0 mod 2
    with pytest.raises(ValueError):
        simulate(net, packets, [Intervention("m", "e3", (0, 1))])  # not an in-edge
    with pytest.raises(ValueError):
        simulate(net, packets, [Intervention("nope", "e4", (0, 1))])


def test_polluted_butterfly_accepts_everywhere_but_decodes_wrong():
    rng = random.Random(11)
    diverged = 0
    for trial in range(10):
        net = butterfly(2)
        params, skey, vkeys, messages, packets = scheme_for(net, rng)
        flow = simulate(net, packets, [Intervention("m", "e4", (0, 1))])
        keys_by_node = {node: vkeys[i] for node, i in net.verifiers.items()}
        accepts = accept_map(flow, keys_by_node)
        assert all(all(edges.values()) for edges in accepts.values())
        changed = flow.log[0].changed
        for sink in net.sinks:
            res = decode(flow, sink)
            assert res.ok
            if res.payloads != tuple(messages):
                diverged += 1
                assert changed  # only a real substitution may corrupt decoding
    assert diverged > 0


def test_decode_honest_and_rank_deficient():
    rng = random.Random(3)
    net = diamond(3)
    params, skey, vkeys, messages, packets = scheme_for(net, rng)
    flow = simulate(net, packets)
    res = decode(flow, "t")
    assert res.ok and res.rank == 2
    assert res.payloads == tuple(messages)
    assert res.packets == tuple(packets)

    crippled = Network(
        3,
        "s",
        ("s", "a", "t"),
        [("e1", "s", "a"), ("e2", "s", "a"), ("e3", "a", "t")],
        {"a": [[0], [0]]},
        {},
        ("t",),
    )
    params2, skey2, vkeys2, messages2, packets2 = scheme_for(crippled, rng)
    res2 = decode(simulate(crippled, packets2), "t")
    assert not res2.ok and res2.rank == 0 and res2.reason == "insufficient rank"
    with pytest.raises(ValueError):
        decode(flow, "zz")


def test_coalition_view_rows_and_packets():
    rng = random.Random(21)
    net = butterfly(2)
    params, skey, vkeys, messages, packets = scheme_for(net, rng)
    flow = simulate(net, packets)
    view = coalition_view(flow, ("m", "t1"))
    assert view.row_counts == (2, 2) and view.h_total == 4
    assert view.h_rows == (
        BUTTERFLY_KERNELS["e4"],
        BUTTERFLY_KERNELS["e5"],
        BUTTERFLY_KERNELS["e3"],
        BUTTERFLY_KERNELS["e8"],
    )
    assert view.packets[0] == flow.received["m"][0]
    base = Field(2, 1)
    assert view.h_matrix(base).rank() == 2
    with pytest.raises(ValueError):
        coalition_view(flow, ())
    with pytest.raises(ValueError):
        coalition_view(flow, ("m", "m"))


def test_interventions_affect_only_the_intervened_view():
    rng = random.Random(14)
    net = butterfly(2)
    params, skey, vkeys, messages, packets = scheme_for(net, rng)
    flow = simulate(net, packets, [Intervention("m", "e4", (0, 1))])
    # emitted value on e4 stays honest; only m's received copy changes
    assert flow.edge_packets["e4"] == packets[0]
    assert flow.received["m"][0] == flow.received["m"][1] == packets[1]


def test_fan_topology_shape():
    rng = random.Random(5)
    net = fan(3, 2, (2, 0, 1), rng)
    assert net.n == 2
    assert net.in_edges("r0") == ("o0_0", "o0_1")
    assert net.in_edges("r1") == ()
    assert net.in_edges("r2") == ("o2_0",)
    assert net.verifiers == {"r0": 0, "r1": 1, "r2": 2}
    gk = compute_global_kernels(net)
    assert all(len(v) == 2 for v in gk.vectors.values())


def test_topology_document_roundtrip(tmp_path):
    doc = {
        "version": 1,
        "q": 2,
        "source": "s",
        "nodes": ["s", "a", "t"],
        "edges": [
            {"id": "e1", "tail": "s", "head": "a"},
            {"id": "e2", "tail": "a", "head": "t"},
        ],
        "kernels": {"a": [[1]]},
        "verifiers": {"a": 0},
        "sinks": ["t"],
    }
    net = network_from_dict(doc)
    assert net.n == 1 and net.sinks == ("t",)
    path = tmp_path / "top.json"
    path.write_text(json.dumps(doc))
    assert load_network(path).edges == net.edges

    bad = dict(doc, extra=1)
    with pytest.raises(ValueError, match="unknown fields"):
        network_from_dict(bad)
    with pytest.raises(ValueError, match="version"):
        network_from_dict(dict(doc, version=2))
    missing = dict(doc)
    del missing["edges"]
    with pytest.raises(ValueError, match="edges"):
        network_from_dict(missing)
    bad_edge = dict(doc, edges=[{"id": "e1", "tail": "s", "head": "a", "w": 9}])
    with pytest.raises(ValueError, match="edges"):
        network_from_dict(bad_edge)


def test_simulate_input_validation():
    rng = random.Random(1)
    net = diamond(2)
    params, skey, vkeys, messages, packets = scheme_for(net, rng)
    with pytest.raises(ValueError):
        simulate(net, packets[:1])
    wrong_field = make_instance(rng, 3, 1, 2, 2, V=1, n=2)[4]
    with pytest.raises(ValueError):
        simulate(net, wrong_field)
