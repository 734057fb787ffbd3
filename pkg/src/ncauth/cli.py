"""Scenario runner, parameter sweeps and the command-line front end.

A scenario document binds field parameters, a topology, payloads and an
optional attack into one experiment.  All randomness is derived from the
scenario seed through named substreams, and reports are emitted as
sorted-key JSON, so rerunning a scenario byte-reproduces its report.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .attacks import (
    BRUTE_FORCE_GUARD,
    ForgerySpec,
    brute_force_count,
    build_recovery_system,
    forge,
    gauss_count,
    h_condition_report,
    predicted_count,
    predicted_rank,
    solve_target_coeffs,
)
from .field import Field, Fel, GuardError
from .netsim import (
    Intervention,
    Network,
    accept_map,
    butterfly,
    coalition_view,
    decode,
    diamond,
    fan,
    line,
    network_from_dict,
    simulate,
)
from .scheme import SystemParams, keygen, tag, verify

SCHEMA_VERSION = 1
REPORT_VERSION = 1
FLAT_LAYOUT = "v1:header|payload|tag"

_SCENARIO_KEYS = {"version", "seed", "params", "topology", "verifiers", "messages", "adversaries", "attack"}
_PARAM_KEYS = {"q", "l", "k", "M", "V", "n", "public_points", "allow_excess_messages"}
_ATTACK_KEYS = {
    "none": {"type"},
    "forge": {"type", "coeffs", "target"},
    "pollute": {"type", "node", "edge", "coeffs"},
    "recover": {"type"},
}
_BUILTIN_TOPOLOGIES = {"butterfly": butterfly, "line": line, "diamond": diamond}


class ConfigError(ValueError):
    """A scenario document failed validation; `field` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _substream(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}/{name}")


def _require(doc, key, kind, where):
    if key not in doc:
        raise ConfigError(f"{where}.{key}", "missing")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{where}.{key}", f"expected {kind.__name__}")
    return value


def _coerce_element(field: Field, value, where: str) -> Fel:
    try:
        if isinstance(value, int):
            return field.embed(value)
        return field.from_vector(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(where, str(exc)) from exc


def _sample_points(field: Field, count: int, rng: random.Random, where: str):
    if field.order - 1 < count:
        raise ConfigError(
            where, f"needs {count} distinct nonzero points but the field has {field.order - 1}"
        )
    pts: list[Fel] = []
    seen = set()
    while len(pts) < count:
        x = field.random_element(rng)
        if x.is_zero() or x in seen:
            continue
        seen.add(x)
        pts.append(x)
    return tuple(pts)


def _sum_one_coeffs(q: int, count: int, rng: random.Random) -> tuple[int, ...]:
    head = [rng.randrange(q) for _ in range(count - 1)]
    return tuple(head + [(1 - sum(head)) % q])


@dataclass
class Scenario:
    raw: dict
    seed: int
    params: SystemParams
    network: Network
    messages: tuple[Fel, ...]
    adversaries: tuple[str, ...]
    attack: dict


def load_scenario(doc: dict, seed: int | None = None, unsafe: bool = False) -> Scenario:
    """Validate a scenario document and bind every object it references."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario", "document must be an object")
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ConfigError("scenario", f"unknown fields {sorted(unknown)}")
    if doc.get("version") != SCHEMA_VERSION:
        raise ConfigError("version", f"expected {SCHEMA_VERSION}, got {doc.get('version')!r}")
    eff_seed = seed if seed is not None else doc.get("seed", 0)
    if not isinstance(eff_seed, int):
        raise ConfigError("seed", "must be an integer")

    pdoc = _require(doc, "params", dict, "scenario")
    unknown = set(pdoc) - _PARAM_KEYS
    if unknown:
        raise ConfigError("params", f"unknown fields {sorted(unknown)}")
    q = _require(pdoc, "q", int, "params")
    l = _require(pdoc, "l", int, "params")
    try:
        field = Field(q, l)
    except ValueError as exc:
        raise ConfigError("params", str(exc)) from exc
    k = _require(pdoc, "k", int, "params")
    m_count = _require(pdoc, "M", int, "params")
    v_count = _require(pdoc, "V", int, "params")
    n_count = _require(pdoc, "n", int, "params")
    allow_excess = bool(pdoc.get("allow_excess_messages", False)) or unsafe

    if "public_points" in pdoc:
        pts = tuple(
            _coerce_element(field, p, f"params.public_points[{i}]")
            for i, p in enumerate(pdoc["public_points"])
        )
    else:
        pts = _sample_points(field, v_count, _substream(eff_seed, "points"), "params.V")
    try:
        params = SystemParams(field, k, m_count, v_count, n_count, pts, allow_excess)
    except ValueError as exc:
        raise ConfigError("params", str(exc)) from exc

    top = doc.get("topology")
    if isinstance(top, str):
        if top not in _BUILTIN_TOPOLOGIES:
            raise ConfigError("topology", f"unknown builtin {top!r}")
        net = _BUILTIN_TOPOLOGIES[top](q)
    elif isinstance(top, dict):
        try:
            net = network_from_dict(top)
        except ValueError as exc:
            raise ConfigError("topology", str(exc)) from exc
        if net.q != q:
            raise ConfigError("topology.q", f"kernel modulus {net.q} but params.q is {q}")
    else:
        raise ConfigError("topology", "must be a builtin name or an inline document")
    if "verifiers" in doc:
        vmap = _require(doc, "verifiers", dict, "scenario")
        try:
            net = net.with_verifiers({str(k_): int(v) for k_, v in vmap.items()})
        except ValueError as exc:
            raise ConfigError("verifiers", str(exc)) from exc
    for node, idx in net.verifiers.items():
        if idx >= params.V:
            raise ConfigError("verifiers", f"node {node!r} wants seat {idx} but V={params.V}")
    if net.n != params.n:
        raise ConfigError("params.n", f"must equal the source out-degree ({net.n})")

    if "messages" in doc:
        raw_msgs = _require(doc, "messages", list, "scenario")
        if len(raw_msgs) != params.n:
            raise ConfigError("messages", f"expected {params.n} payloads, got {len(raw_msgs)}")
        messages = tuple(
            _coerce_element(field, s, f"messages[{i}]") for i, s in enumerate(raw_msgs)
        )
    else:
        rng = _substream(eff_seed, "messages")
        messages = tuple(field.random_element(rng) for _ in range(params.n))

    adversaries = tuple(str(a) for a in doc.get("adversaries", ()))
    for a in adversaries:
        if a not in net.nodes:
            raise ConfigError("adversaries", f"unknown node {a!r}")
    if len(set(adversaries)) != len(adversaries):
        raise ConfigError("adversaries", "duplicate node")

    adoc = doc.get("attack", {"type": "none"})
    if not isinstance(adoc, dict):
        raise ConfigError("attack", "must be an object")
    kind = adoc.get("type", "none")
    if kind not in _ATTACK_KEYS:
        raise ConfigError("attack.type", f"unknown attack {kind!r}")
    unknown = set(adoc) - _ATTACK_KEYS[kind]
    if unknown:
        raise ConfigError("attack", f"unknown fields {sorted(unknown)} for type {kind!r}")
    attack: dict = {"type": kind}
    if kind == "forge":
        if "coeffs" in adoc and "target" in adoc:
            raise ConfigError("attack", "give either coeffs or target, not both")
        if "coeffs" in adoc:
            coeffs = tuple(int(a) for a in adoc["coeffs"])
            if len(coeffs) != params.n:
                raise ConfigError("attack.coeffs", f"expected {params.n} coefficients")
            if sum(coeffs) % q != 1:
                raise ConfigError("attack.coeffs", "must sum to 1 mod q")
            attack["coeffs"] = coeffs
        elif "target" in adoc:
            attack["target"] = _coerce_element(field, adoc["target"], "attack.target")
        else:
            attack["coeffs"] = _sum_one_coeffs(q, params.n, _substream(eff_seed, "forge"))
    elif kind == "pollute":
        node = str(_require(adoc, "node", str, "attack"))
        if node not in net.nodes:
            raise ConfigError("attack.node", f"unknown node {node!r}")
        ins = net.in_edges(node)
        if not ins:
            raise ConfigError("attack.node", f"node {node!r} has no incoming edges")
        edge = str(adoc.get("edge", ins[0]))
        if edge not in ins:
            raise ConfigError("attack.edge", f"edge {edge!r} does not enter {node!r}")
        coeffs = tuple(int(a) for a in _require(adoc, "coeffs", list, "attack"))
        if len(coeffs) != len(ins):
            raise ConfigError("attack.coeffs", f"expected {len(ins)} coefficients")
        if sum(coeffs) % q != 1:
            raise ConfigError("attack.coeffs", "must sum to 1 mod q")
        attack.update(node=node, edge=edge, coeffs=coeffs)
    elif kind == "recover":
        if not adversaries:
            raise ConfigError("adversaries", "recover needs at least one adversary node")
        for a in adversaries:
            if a not in net.verifiers:
                raise ConfigError("adversaries", f"node {a!r} holds no verifier seat")

    echo = dict(doc)
    echo["seed"] = eff_seed
    return Scenario(echo, eff_seed, params, net, messages, adversaries, attack)


def run_scenario(
    doc: dict,
    seed: int | None = None,
    guard: int = BRUTE_FORCE_GUARD,
    unsafe: bool = False,
) -> dict:
    """Execute one scenario end to end and return its report document."""
    sc = load_scenario(doc, seed=seed, unsafe=unsafe)
    params, net = sc.params, sc.network
    field = params.field
    skey, vkeys = keygen(params, _substream(sc.seed, "keys").getrandbits(64))
    packets = [tag(skey, s) for s in sc.messages]

    interventions = []
    if sc.attack["type"] == "pollute":
        interventions.append(
            Intervention(sc.attack["node"], sc.attack["edge"], sc.attack["coeffs"])
        )
    flow = simulate(net, packets, interventions)

    keys_by_node = {node: vkeys[idx] for node, idx in net.verifiers.items()}
    accepts = accept_map(flow, keys_by_node)
    non_informative = sorted(
        [node, e]
        for node in keys_by_node
        for e, p in zip(net.in_edges(node), flow.received[node])
        if p.is_zero()
    )

    decodes = {}
    for sink in net.sinks:
        res = decode(flow, sink)
        decodes[sink] = {
            "ok": res.ok,
            "rank": res.rank,
            "reason": res.reason,
            "payloads": [list(p.coeffs) for p in res.payloads] if res.ok else None,
            "diverged": (res.payloads != sc.messages) if res.ok else None,
        }

    report = {
        "report_version": REPORT_VERSION,
        "flat_layout": FLAT_LAYOUT,
        "seed": sc.seed,
        "scenario": sc.raw,
        "modulus": list(field.modulus),
        "public_points": [list(p.coeffs) for p in params.public_points],
        "messages": [list(s.coeffs) for s in sc.messages],
        "accepts": accepts,
        "non_informative": non_informative,
        "decodes": decodes,
        "attack": {"type": sc.attack["type"]},
    }
    out = report["attack"]

    if sc.attack["type"] == "forge":
        spec = None
        if "coeffs" in sc.attack:
            spec = ForgerySpec(field.q, sc.attack["coeffs"])
        else:
            out["target"] = list(sc.attack["target"].coeffs)
            spec = solve_target_coeffs(sc.messages, sc.attack["target"])
        out["reachable"] = spec is not None
        if spec is not None:
            forged = forge(packets, spec)
            accepts_vec = [verify(vk, forged) for vk in vkeys]
            out.update(
                coeffs=list(spec.coeffs),
                payload=list(forged.m.coeffs),
                packet=list(forged.flatten()),
                verifier_accepts=accepts_vec,
                accepted_by_all=all(accepts_vec),
                matches_direct_tag=forged == tag(skey, forged.m),
            )
        if sc.adversaries:
            base = Field(net.q, 1)
            view = coalition_view(flow, sc.adversaries)
            out["coalition_can_decode"] = (
                view.h_total > 0 and view.h_matrix(base).rank() >= net.n
            )
    elif sc.attack["type"] == "pollute":
        out.update(
            node=sc.attack["node"],
            edge=sc.attack["edge"],
            coeffs=list(sc.attack["coeffs"]),
            records=[
                {
                    "node": r.node,
                    "edge": r.edge,
                    "coeffs": list(r.coeffs),
                    "honest": list(r.honest),
                    "injected": list(r.injected),
                    "changed": r.changed,
                }
                for r in flow.log
            ],
            any_divergence=any(d["ok"] and d["diverged"] for d in decodes.values()),
        )
    elif sc.attack["type"] == "recover":
        view = coalition_view(flow, sc.adversaries)
        keys = [vkeys[net.verifiers[a]] for a in sc.adversaries]
        system = build_recovery_system(params, view, keys, sc.messages)
        meta = system.meta
        consistent, gcount = gauss_count(system)
        rank = system.coeff.rank()
        try:
            brute = brute_force_count(system, guard=guard)
            skipped = False
        except GuardError:
            brute, skipped = None, True
        counts = {"predicted": predicted_count(meta), "gauss": gcount, "brute": brute}
        cond = h_condition_report(meta)
        out.update(
            coalition=list(sc.adversaries),
            K=meta.K,
            r0=meta.r0,
            h_total=meta.h_total,
            rank=rank,
            predicted_rank=predicted_rank(meta),
            rank_match=rank == predicted_rank(meta),
            consistent=consistent,
            counts=counts,
            brute_skipped=skipped,
            count_match=(
                None
                if skipped
                else counts["predicted"] == gcount == brute
            ),
            condition_held=cond.condition_held,
        )
    return report


def keygen_report(doc: dict, seed: int | None = None, unsafe: bool = False) -> dict:
    """Generate and dump one key generation (lab tool: secrets included)."""
    sc = load_scenario(doc, seed=seed, unsafe=unsafe)
    skey, vkeys = keygen(sc.params, _substream(sc.seed, "keys").getrandbits(64))
    return {
        "report_version": REPORT_VERSION,
        "seed": sc.seed,
        "modulus": list(sc.params.field.modulus),
        "params": {
            "q": sc.params.field.q,
            "l": sc.params.field.l,
            "k": sc.params.k,
            "M": sc.params.M,
            "V": sc.params.V,
            "n": sc.params.n,
        },
        "source_key": [
            [list(skey.matrix[t, j].coeffs) for j in range(sc.params.k)]
            for t in range(sc.params.M + 1)
        ],
        "verifier_keys": [
            {
                "index": vk.index,
                "point": list(vk.point.coeffs),
                "evals": [list(e.coeffs) for e in vk.evals],
            }
            for vk in vkeys
        ],
    }


# ---------------------------------------------------------------------------
# sweep over coalition-count instances


@dataclass(frozen=True)
class SweepRow:
    q: int
    l: int
    k: int
    M: int
    K: int
    n: int
    edge_counts: tuple[int, ...]
    seed: int
    candidates: int
    skipped: bool
    h_total: int
    r0: int
    rank: int
    predicted_rank: int
    rank_match: bool
    consistent: bool
    predicted: int
    gauss: int
    brute: int | None
    count_match: bool | None
    condition_held: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    summary: dict


def lemma_sweep(
    qs,
    ls,
    ks,
    Ms,
    Ks,
    reps: int = 2,
    seed: int = 0,
    guard: int = BRUTE_FORCE_GUARD,
    family: str = "fan",
) -> SweepResult:
    """Check predicted key counts against elimination and brute force.

    Instances with more candidate keys than `guard` are marked skipped
    rather than failing the sweep.  Combinations that violate the closed
    form's hypotheses (coalition size at least k, or more members than
    available nonzero points) are not generated at all.
    """
    if family not in ("fan", "line"):
        raise ValueError(f"unknown topology family {family!r}")
    rows = []
    idx = 0
    for q in qs:
        for l in ls:
            for k in ks:
                for m_count in Ms:
                    for coalition_size in Ks:
                        if coalition_size > k - 1:
                            continue
                        field = Field(q, l)
                        if field.order - 1 < coalition_size:
                            continue
                        for _ in range(reps):
                            rows.append(
                                _sweep_instance(
                                    field, k, m_count, coalition_size, seed, idx, guard, family
                                )
                            )
                            idx += 1
    checked = [r for r in rows if not r.skipped]
    mismatches = sum(
        1 for r in checked if r.count_match is not True or not r.rank_match or not r.consistent
    )
    summary = {
        "rows": len(rows),
        "checked": len(checked),
        "skipped": len(rows) - len(checked),
        "mismatches": mismatches,
        "h_exceeds_bound": sum(1 for r in checked if not r.condition_held),
    }
    return SweepResult(tuple(rows), summary)


def _sweep_instance(field, k, m_count, coalition_size, master_seed, idx, guard, family):
    rng = _substream(master_seed, f"sweep:{idx}")
    q, l = field.q, field.l
    if family == "line":
        n = 1
        edge_counts = (1,) * coalition_size
        net = line(q, hops=coalition_size)
        coalition = tuple(f"v{i}" for i in range(1, coalition_size + 1))
    else:
        n = rng.randint(1, m_count)
        edge_counts = tuple(rng.randint(0, 3) for _ in range(coalition_size))
        net = fan(q, n, edge_counts, rng)
        coalition = tuple(f"r{i}" for i in range(coalition_size))
    points = _sample_points(field, coalition_size, rng, "sweep")
    params = SystemParams(field, k, m_count, coalition_size, n, points)
    messages = [field.random_element(rng) for _ in range(n)]
    if n >= 2 and rng.random() < 0.3:
        messages[-1] = messages[0]  # exercise repeated payloads
    skey, vkeys = keygen(params, rng.getrandbits(64))
    flow = simulate(net, [tag(skey, s) for s in messages])
    view = coalition_view(flow, coalition)
    system = build_recovery_system(params, view, vkeys, messages)
    meta = system.meta
    candidates = field.order ** (k * (m_count + 1))
    consistent, gcount = gauss_count(system)
    rank = system.coeff.rank()
    prank = predicted_rank(meta)
    pred = predicted_count(meta)
    skipped = candidates > guard
    brute = None if skipped else brute_force_count(system, guard=guard)
    return SweepRow(
        q=q,
        l=l,
        k=k,
        M=m_count,
        K=coalition_size,
        n=n,
        edge_counts=edge_counts,
        seed=idx,
        candidates=candidates,
        skipped=skipped,
        h_total=meta.h_total,
        r0=meta.r0,
        rank=rank,
        predicted_rank=prank,
        rank_match=rank == prank,
        consistent=consistent,
        predicted=pred,
        gauss=gcount,
        brute=brute,
        count_match=None if skipped else (pred == gcount == brute),
        condition_held=h_condition_report(meta).condition_held,
    )


def render_sweep(result: SweepResult) -> str:
    cols = [
        "q", "l", "k", "M", "K", "n", "edges", "h_total", "r0", "rank", "pred_rank",
        "rank_ok", "consistent", "predicted", "gauss", "brute", "count_ok", "h_le_M", "skipped",
    ]
    lines = ["\t".join(cols)]
    for r in result.rows:
        lines.append(
            "\t".join(
                str(v)
                for v in (
                    r.q, r.l, r.k, r.M, r.K, r.n,
                    ",".join(map(str, r.edge_counts)) or "-",
                    r.h_total, r.r0, r.rank, r.predicted_rank, r.rank_match, r.consistent,
                    r.predicted, r.gauss,
                    "-" if r.brute is None else r.brute,
                    "-" if r.count_match is None else r.count_match,
                    r.condition_held, r.skipped,
                )
            )
        )
    s = result.summary
    lines.append(
        f"# rows={s['rows']} checked={s['checked']} skipped={s['skipped']} "
        f"mismatches={s['mismatches']} h_exceeds_bound={s['h_exceeds_bound']}"
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# command line


def _demo_doc(seed: int) -> dict:
    return {
        "version": 1,
        "seed": seed,
        "params": {"q": 2, "l": 3, "k": 3, "M": 2, "V": 6, "n": 2},
        "topology": "butterfly",
        "attack": {"type": "pollute", "node": "m", "edge": "e4", "coeffs": [0, 1]},
    }


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "config", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncauth",
        description="Authentication-tagged network coding lab: simulate, attack, count keys.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="scenario JSON document")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--guard", type=int, default=BRUTE_FORCE_GUARD,
                       help="brute-force candidate budget")
        p.add_argument("--unsafe-n-gt-m", action="store_true", dest="unsafe",
                       help="permit more payloads per generation than M")
        return p

    scenario_command("keygen", "generate and dump keys for a scenario")
    scenario_command("simulate", "run a scenario without any attack")
    scenario_command("forge", "run a scenario with a forgery attack")
    scenario_command("pollute", "run a scenario with an in-network substitution")
    scenario_command("recover", "run a coalition key-recovery analysis")

    sweep = sub.add_parser("lemma-sweep", help="sweep instances and check key-count formulas")
    sweep.add_argument("--q", type=_int_list, default=(2, 3))
    sweep.add_argument("--l", type=_int_list, default=(1, 2))
    sweep.add_argument("--k", type=_int_list, default=(2, 3))
    sweep.add_argument("--M", type=_int_list, default=(1, 2))
    sweep.add_argument("--K", type=_int_list, default=(1, 2))
    sweep.add_argument("--reps", type=int, default=2)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--guard", type=int, default=BRUTE_FORCE_GUARD)
    sweep.add_argument("--family", choices=("fan", "line"), default="fan")
    sweep.add_argument("--out", default=None)

    demo = sub.add_parser("demo", help="run the built-in butterfly pollution demo")
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--out", default=None)
    return parser


_EXPECTED_ATTACK = {"simulate": "none", "forge": "forge", "pollute": "pollute", "recover": "recover"}


def _dispatch(args) -> str:
    if args.command == "lemma-sweep":
        result = lemma_sweep(
            args.q, args.l, args.k, args.M, args.K,
            reps=args.reps, seed=args.seed, guard=args.guard, family=args.family,
        )
        return render_sweep(result)
    if args.command == "demo":
        report = run_scenario(_demo_doc(args.seed))
        decoded = {s: d["diverged"] for s, d in report["decodes"].items()}
        all_ok = all(all(v.values()) for v in report["accepts"].values())
        lines = [
            "butterfly pollution demo",
            f"all verifier checks passed: {all_ok}",
            f"sink decode diverged: {json.dumps(decoded, sort_keys=True)}",
        ]
        return "\n".join(lines) + "\n" + _dump(report)
    doc = _load_config(args.config)
    if args.command == "keygen":
        return _dump(keygen_report(doc, seed=args.seed, unsafe=args.unsafe))
    expected = _EXPECTED_ATTACK[args.command]
    declared = doc.get("attack", {"type": "none"})
    declared = declared.get("type", "none") if isinstance(declared, dict) else None
    if declared != expected:
        raise ConfigError("attack.type", f"subcommand {args.command!r} expects {expected!r}, got {declared!r}")
    return _dump(run_scenario(doc, seed=args.seed, guard=args.guard, unsafe=args.unsafe))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = _dispatch(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
