"""Single-source multicast simulation for linear network coding on DAGs.

The source's n outgoing edges are the virtual message edges: edge i carries
source packet i and the i-th unit global kernel.  Every other node emits,
on each outgoing edge, the F_q-linear combination of its incoming traffic
given by the matching column of its local kernel matrix.  Global kernels
follow the same recursion over unit vectors, so absent interference the
flat value on edge e is exactly f_e applied to the stacked source packets.

Adversarial substitutions model a relay that replaces its own view of one
incoming edge by a coefficient-sum-one combination of everything it
received; downstream nodes process the altered value, upstream traffic is
untouched.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .field import Field, is_prime
from .linalg import Matrix, solve
from .scheme import TaggedPacket, VerifierKey, combine, verify, zero_packet

__all__ = [
    "Edge",
    "Network",
    "GlobalKernels",
    "Intervention",
    "InterventionRecord",
    "FlowState",
    "DecodeResult",
    "CoalitionView",
    "CycleError",
    "compute_global_kernels",
    "simulate",
    "decode",
    "coalition_view",
    "accept_map",
    "butterfly",
    "line",
    "diamond",
    "fan",
    "network_from_dict",
    "load_network",
]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


class Network:
    """A validated coding topology: DAG, local kernels, verifier seats, sinks."""

    def __init__(self, q, source, nodes, edges, kernels, verifiers=None, sinks=()):
        if not is_prime(int(q)):
            raise ValueError(f"kernel field size must be prime, got {q!r}")
        self.q = int(q)
        self.nodes = tuple(str(n) for n in nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node names")
        self.source = str(source)
        if self.source not in self.nodes:
            raise ValueError(f"unknown source node {self.source!r}")

        parsed = []
        for e in edges:
            e = Edge(*e) if not isinstance(e, Edge) else e
            if e.tail not in self.nodes or e.head not in self.nodes:
                raise ValueError(f"edge {e.id!r} references unknown node")
            parsed.append(e)
        self.edges = tuple(parsed)
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge ids")
        self._by_id = {e.id: e for e in self.edges}

        self._in: dict[str, list[str]] = {n: [] for n in self.nodes}
        self._out: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.edges:
            self._out[e.tail].append(e.id)
            self._in[e.head].append(e.id)

        if self._in[self.source]:
            raise ValueError("source must not have incoming edges")
        if not self._out[self.source]:
            raise ValueError("source needs at least one outgoing message edge")

        ts = TopologicalSorter({n: set() for n in self.nodes})
        for e in self.edges:
            ts.add(e.head, e.tail)
        self.topo_order = tuple(ts.static_order())  # raises CycleError on cycles

        self.kernels: dict[str, tuple[tuple[int, ...], ...]] = {}
        kernels = dict(kernels or {})
        for node, rows in kernels.items():
            if node not in self.nodes:
                raise ValueError(f"kernel for unknown node {node!r}")
            rows = tuple(tuple(int(v) for v in r) for r in rows)
            want_r, want_c = len(self._in[node]), len(self._out[node])
            if len(rows) != want_r or any(len(r) != want_c for r in rows):
                raise ValueError(
                    f"kernel of {node!r} must be {want_r}x{want_c} (in-degree x out-degree)"
                )
            if any(not 0 <= v < self.q for r in rows for v in r):
                raise ValueError(f"kernel entries of {node!r} must lie in [0, {self.q})")
            self.kernels[node] = rows
        for node in self.nodes:
            if node == self.source or not self._out[node]:
                continue
            if self._in[node] and node not in self.kernels:
                raise ValueError(f"missing kernel for relay node {node!r}")

        verifiers = dict(verifiers or {})
        for node, idx in verifiers.items():
            if node not in self.nodes:
                raise ValueError(f"verifier seat on unknown node {node!r}")
            if not isinstance(idx, int) or idx < 0:
                raise ValueError(f"verifier index of {node!r} must be a nonnegative int")
        if len(set(verifiers.values())) != len(verifiers):
            raise ValueError("two nodes share one verifier index")
        self.verifiers = verifiers

        self.sinks = tuple(str(s) for s in sinks)
        for s in self.sinks:
            if s not in self.nodes:
                raise ValueError(f"unknown sink node {s!r}")

    @property
    def n(self) -> int:
        """Number of source messages = source out-degree."""
        return len(self._out[self.source])

    def in_edges(self, node: str) -> tuple[str, ...]:
        return tuple(self._in[node])

    def out_edges(self, node: str) -> tuple[str, ...]:
        return tuple(self._out[node])

    def edge(self, edge_id: str) -> Edge:
        return self._by_id[edge_id]

    def kernel(self, node: str) -> tuple[tuple[int, ...], ...]:
        return self.kernels.get(node, ())

    def with_verifiers(self, verifiers) -> "Network":
        return Network(
            self.q, self.source, self.nodes, self.edges, self.kernels, verifiers, self.sinks
        )


@dataclass(frozen=True)
class GlobalKernels:
    n: int
    vectors: dict[str, tuple[int, ...]]


def compute_global_kernels(net: Network) -> GlobalKernels:
    """Per-edge combination of the source messages, in topological order."""
    n, q = net.n, net.q
    vec: dict[str, tuple[int, ...]] = {}
    for i, e in enumerate(net.out_edges(net.source)):
        vec[e] = tuple(1 if t == i else 0 for t in range(n))
    for node in net.topo_order:
        if node == net.source:
            continue
        outs = net.out_edges(node)
        if not outs:
            continue
        ins = net.in_edges(node)
        kern = net.kernel(node)
        for c, e in enumerate(outs):
            f = [0] * n
            for r, d in enumerate(ins):
                w = kern[r][c]
                if w:
                    fd = vec[d]
                    for t in range(n):
                        f[t] = (f[t] + w * fd[t]) % q
            vec[e] = tuple(f)
    return GlobalKernels(n, vec)


@dataclass(frozen=True)
class Intervention:
    """Replace `node`'s view of incoming `edge` by a sum-one mix of its inputs."""

    node: str
    edge: str
    coeffs: tuple[int, ...]


@dataclass(frozen=True)
class InterventionRecord:
    node: str
    edge: str
    coeffs: tuple[int, ...]
    honest: tuple[int, ...]
    injected: tuple[int, ...]

    @property
    def changed(self) -> bool:
        return self.honest != self.injected


@dataclass(frozen=True)
class FlowState:
    network: Network
    kernels: GlobalKernels
    edge_packets: dict[str, TaggedPacket]
    received: dict[str, tuple[TaggedPacket, ...]]
    log: tuple[InterventionRecord, ...]


def simulate(net: Network, packets, interventions=()) -> FlowState:
    """Run the coding network on `packets`, applying any substitutions."""
    packets = list(packets)
    if len(packets) != net.n:
        raise ValueError(f"need {net.n} source packets, got {len(packets)}")
    fld = packets[0].m.field
    k = len(packets[0].tag)
    if any(p.m.field != fld or len(p.tag) != k for p in packets):
        raise ValueError("source packets disagree on field or tag length")
    if fld.q != net.q:
        raise ValueError(f"packet symbols mod {fld.q} but network kernels mod {net.q}")

    by_node: dict[str, list[Intervention]] = {}
    for iv in interventions:
        if iv.node not in net.nodes:
            raise ValueError(f"intervention at unknown node {iv.node!r}")
        ins = net.in_edges(iv.node)
        if iv.edge not in ins:
            raise ValueError(f"edge {iv.edge!r} does not enter node {iv.node!r}")
        if len(iv.coeffs) != len(ins):
            raise ValueError(
                f"intervention at {iv.node!r} needs {len(ins)} coefficients, got {len(iv.coeffs)}"
            )
        if sum(iv.coeffs) % net.q != 1:
            raise ValueError("substitution coefficients must sum to 1 mod q")
        by_node.setdefault(iv.node, []).append(iv)

    gk = compute_global_kernels(net)
    values: dict[str, TaggedPacket] = {}
    received: dict[str, tuple[TaggedPacket, ...]] = {}
    log: list[InterventionRecord] = []

    for e, p in zip(net.out_edges(net.source), packets):
        values[e] = p
    for node in net.topo_order:
        if node == net.source:
            received[node] = ()
            continue
        ins = net.in_edges(node)
        honest = [values[d] for d in ins]
        current = list(honest)
        for iv in by_node.get(node, ()):
            injected = combine(honest, iv.coeffs)
            idx = ins.index(iv.edge)
            log.append(
                InterventionRecord(
                    node, iv.edge, tuple(iv.coeffs), honest[idx].flatten(), injected.flatten()
                )
            )
            current[idx] = injected
        received[node] = tuple(current)
        outs = net.out_edges(node)
        if not outs:
            continue
        kern = net.kernel(node)
        for c, e in enumerate(outs):
            if current:
                values[e] = combine(current, [kern[r][c] for r in range(len(ins))])
            else:
                values[e] = zero_packet(fld, k)
    return FlowState(net, gk, values, received, tuple(log))


@dataclass(frozen=True)
class DecodeResult:
    ok: bool
    rank: int
    packets: tuple[TaggedPacket, ...] | None
    payloads: tuple | None
    reason: str | None = None


def decode(flow: FlowState, sink: str) -> DecodeResult:
    """Invert the sink's global kernels; failure is reported, not raised."""
    net = flow.network
    if sink not in net.nodes:
        raise ValueError(f"unknown sink node {sink!r}")
    ins = net.in_edges(sink)
    if not ins:
        return DecodeResult(False, 0, None, None, "sink has no incoming edges")
    base = Field(net.q, 1)
    fmat = Matrix(base, [flow.kernels.vectors[e] for e in ins], cols=flow.kernels.n)
    rank = fmat.rank()
    if rank < flow.kernels.n:
        return DecodeResult(False, rank, None, None, "insufficient rank")
    obs = flow.received[sink]
    fld = obs[0].m.field
    k = len(obs[0].tag)
    y = Matrix(base, [p.flatten() for p in obs], cols=1 + fld.l * (1 + k))
    x = solve(fmat, y)
    if x is None:
        return DecodeResult(False, rank, None, None, "observations are inconsistent")
    pkts = tuple(
        TaggedPacket.from_flat(fld, k, [e.coeffs[0] for e in x.row(i)]) for i in range(x.rows)
    )
    return DecodeResult(True, rank, pkts, tuple(p.m for p in pkts))


@dataclass(frozen=True)
class CoalitionView:
    """What a set of conspiring verifier nodes saw: kernels and packets, stacked."""

    nodes: tuple[str, ...]
    row_counts: tuple[int, ...]
    h_rows: tuple[tuple[int, ...], ...]
    packets: tuple[TaggedPacket, ...]

    @property
    def h_total(self) -> int:
        return len(self.h_rows)

    def h_matrix(self, fld: Field) -> Matrix:
        n = len(self.h_rows[0]) if self.h_rows else 0
        return Matrix(fld, self.h_rows, cols=n)


def coalition_view(flow: FlowState, coalition) -> CoalitionView:
    coalition = tuple(coalition)
    if not coalition:
        raise ValueError("empty coalition")
    if len(set(coalition)) != len(coalition):
        raise ValueError("duplicate coalition node")
    net = flow.network
    rows, pkts, counts = [], [], []
    for node in coalition:
        if node not in net.nodes:
            raise ValueError(f"unknown coalition node {node!r}")
        ins = net.in_edges(node)
        counts.append(len(ins))
        for e, p in zip(ins, flow.received[node]):
            rows.append(flow.kernels.vectors[e])
            pkts.append(p)
    return CoalitionView(coalition, tuple(counts), tuple(rows), tuple(pkts))


def accept_map(flow: FlowState, keys_by_node: dict[str, VerifierKey]):
    """Per-verifier, per-incoming-edge verification outcomes."""
    net = flow.network
    out: dict[str, dict[str, bool]] = {}
    for node in sorted(keys_by_node):
        vkey = keys_by_node[node]
        out[node] = {
            e: verify(vkey, p) for e, p in zip(net.in_edges(node), flow.received[node])
        }
    return out


# ---------------------------------------------------------------------------
# built-in topologies


def butterfly(q: int, verifiers=None) -> Network:
    """The two-message crossover network; its middle edge mixes both messages."""
    edges = [
        ("e1", "s", "u1"),
        ("e2", "s", "u2"),
        ("e3", "u1", "t1"),
        ("e4", "u1", "m"),
        ("e5", "u2", "m"),
        ("e6", "u2", "t2"),
        ("e7", "m", "w"),
        ("e8", "w", "t1"),
        ("e9", "w", "t2"),
    ]
    kernels = {
        "u1": [[1, 1]],
        "u2": [[1, 1]],
        "m": [[1], [1]],
        "w": [[1, 1]],
    }
    if verifiers is None:
        verifiers = {"u1": 0, "u2": 1, "m": 2, "w": 3, "t1": 4, "t2": 5}
    return Network(
        q, "s", ("s", "u1", "u2", "m", "w", "t1", "t2"), edges, kernels, verifiers, ("t1", "t2")
    )


def line(q: int, hops: int = 2, verifiers=None) -> Network:
    """One message relayed along a chain of `hops` unit-weight nodes."""
    if hops < 1:
        raise ValueError("line needs at least one hop")
    nodes = ["s"] + [f"v{i}" for i in range(1, hops + 1)]
    edges = [(f"e{i}", nodes[i], nodes[i + 1]) for i in range(hops)]
    kernels = {f"v{i}": [[1]] for i in range(1, hops)}
    if verifiers is None:
        verifiers = {f"v{i}": i - 1 for i in range(1, hops + 1)}
    return Network(q, "s", nodes, edges, kernels, verifiers, (nodes[-1],))


def diamond(q: int, verifiers=None) -> Network:
    """Two disjoint unit-weight paths meeting at one sink."""
    edges = [("e1", "s", "a"), ("e2", "s", "b"), ("e3", "a", "t"), ("e4", "b", "t")]
    kernels = {"a": [[1]], "b": [[1]]}
    if verifiers is None:
        verifiers = {"a": 0, "b": 1, "t": 2}
    return Network(q, "s", ("s", "a", "b", "t"), edges, kernels, verifiers, ("t",))


def fan(q: int, n: int, edge_counts, rng: random.Random) -> Network:
    """Source feeds one mixing hub; member node i taps edge_counts[i] hub outputs.

    Hub kernel entries are drawn uniformly from rng, so member i observes
    edge_counts[i] random combinations of the n messages.
    """
    edge_counts = tuple(int(c) for c in edge_counts)
    if not edge_counts or any(c < 0 for c in edge_counts):
        raise ValueError("edge_counts must be nonnegative and nonempty")
    members = [f"r{i}" for i in range(len(edge_counts))]
    nodes = ["s", "hub"] + members
    edges = [(f"m{j}", "s", "hub") for j in range(n)]
    for i, cnt in enumerate(edge_counts):
        edges += [(f"o{i}_{j}", "hub", members[i]) for j in range(cnt)]
    total = sum(edge_counts)
    kernels = {}
    if total:
        kernels["hub"] = [[rng.randrange(q) for _ in range(total)] for _ in range(n)]
    verifiers = {m: i for i, m in enumerate(members)}
    return Network(q, "s", nodes, edges, kernels, verifiers, ())


# ---------------------------------------------------------------------------
# topology documents

TOPOLOGY_VERSION = 1
_TOP_KEYS = {"version", "q", "source", "nodes", "edges", "kernels", "verifiers", "sinks"}
_EDGE_KEYS = {"id", "tail", "head"}


def network_from_dict(doc: dict) -> Network:
    if not isinstance(doc, dict):
        raise ValueError("topology: document must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ValueError(f"topology: unknown fields {sorted(unknown)}")
    if doc.get("version") != TOPOLOGY_VERSION:
        raise ValueError(f"topology.version: expected {TOPOLOGY_VERSION}, got {doc.get('version')!r}")
    for required in ("q", "source", "nodes", "edges"):
        if required not in doc:
            raise ValueError(f"topology.{required}: missing")
    edges = []
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, dict) or set(e) != _EDGE_KEYS:
            raise ValueError(f"topology.edges[{i}]: must have exactly id/tail/head")
        edges.append((str(e["id"]), str(e["tail"]), str(e["head"])))
    return Network(
        doc["q"],
        doc["source"],
        doc["nodes"],
        edges,
        doc.get("kernels", {}),
        doc.get("verifiers", {}),
        doc.get("sinks", ()),
    )


def load_network(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return network_from_dict(json.load(fh))
