"""Affine-combination forgery and coalition key-recovery analysis.

Two ways to beat the tagged-packet code without touching the secrets:

* forge: any F_q combination of fresh source packets whose coefficients sum
  to one is itself a perfectly formed packet for the combined payload, so it
  passes every verifier while carrying a payload nobody sent.

* recover: verifiers that pool their keys and observations can write one
  linear system for the secret coefficient matrix.  The solution set is an
  affine subspace whose exact size this module predicts, computes by
  elimination, and (for small instances) confirms by exhaustive enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .field import Field, GuardError
from .linalg import Matrix, solve, solve_count
from .netsim import CoalitionView
from .scheme import SystemParams, TaggedPacket, VerifierKey, combine, moore_matrix

BRUTE_FORCE_GUARD = 1 << 24
_TABLE_LIMIT = 1 << 20  # build index tables only while order^2 stays below this


@dataclass(frozen=True)
class ForgerySpec:
    """Combination coefficients a_1..a_n over F_q with sum(a_i) = 1."""

    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("forgery needs at least one coefficient")
        if any(not 0 <= a < self.q for a in self.coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.q})")
        if sum(self.coeffs) % self.q != 1:
            raise ValueError("forgery coefficients must sum to 1 mod q")


def forge(packets, spec: ForgerySpec) -> TaggedPacket:
    """Mix fresh source packets into a forged-but-valid packet."""
    packets = list(packets)
    if len(packets) != len(spec.coeffs):
        raise ValueError(f"{len(packets)} packets but {len(spec.coeffs)} coefficients")
    if any(p.c != 1 for p in packets):
        raise ValueError("forgery expects freshly tagged packets (header 1)")
    if packets[0].m.field.q != spec.q:
        raise ValueError("coefficient modulus does not match the packet field")
    return combine(packets, spec.coeffs)


def solve_target_coeffs(messages, target) -> ForgerySpec | None:
    """Sum-one coefficients steering the forged payload to `target`, if any.

    Solves the l+1 base-field constraints (one for the coefficient sum, one
    per coordinate of the payload) for a_1..a_n; returns None when the target
    lies outside the affine span of the observed payloads.
    """
    fld = target.field
    messages = [fld(s) for s in messages]
    if not messages:
        raise ValueError("no payloads to combine")
    base = Field(fld.q, 1)
    n = len(messages)
    rows = [[1] * n]
    rhs = [[1]]
    for c in range(fld.l):
        rows.append([s.coeffs[c] for s in messages])
        rhs.append([target.coeffs[c]])
    x = solve(Matrix(base, rows, cols=n), Matrix(base, rhs, cols=1))
    if x is None:
        return None
    return ForgerySpec(fld.q, tuple(x[i, 0].coeffs[0] for i in range(n)))


@dataclass(frozen=True)
class RecoveryMeta:
    """Shape summary of one coalition instance."""

    q: int
    l: int
    k: int
    M: int
    K: int
    n: int
    r0: int  # rank of the stacked per-member H_i x (message power matrix)
    h_total: int  # total incoming edges across the coalition


@dataclass(frozen=True)
class RecoverySystem:
    """Linear constraints on the k(M+1) secret coefficients, column-major order."""

    coeff: Matrix
    rhs: Matrix
    meta: RecoveryMeta


def build_recovery_system(
    params: SystemParams, view: CoalitionView, keys, messages
) -> RecoverySystem:
    """Stack everything a coalition knows into one system in the secrets.

    Unknown order is column-major over the secret matrix: all M+1 entries of
    column j precede those of column j+1.  Each observed edge contributes k
    rows (one per unknown column), equating the member's mixed message powers
    against the observed tag coefficient; each pooled private key contributes
    M+1 rows tying whole columns together through plain powers of its public
    point.  The true key always satisfies the system, so it is consistent by
    construction when the observations come from an honest run.
    """
    fld = params.field
    k, M = params.k, params.M
    keys = list(keys)
    messages = [fld(s) for s in messages]
    if len(view.nodes) != len(keys):
        raise ValueError("need exactly one private key per coalition member")
    if view.h_rows and any(len(h) != len(messages) for h in view.h_rows):
        raise ValueError("observation width disagrees with the message count")
    if len(view.packets) != view.h_total:
        raise ValueError("one observed packet per coalition edge required")
    if any(len(p.tag) != k for p in view.packets):
        raise ValueError("observed tag length disagrees with k")

    powers_matrix = moore_matrix(fld, messages, M)  # n x (M+1)
    zero = fld.zero
    width = k * (M + 1)

    mixed_rows = []  # H_i rows times the message power matrix, coalition order
    for h in view.h_rows:
        acc = [zero] * (M + 1)
        for j, w in enumerate(h):
            if w:
                wf = fld.embed(w)
                srow = powers_matrix.row(j)
                acc = [a + wf * sv for a, sv in zip(acc, srow)]
        mixed_rows.append(acc)

    crows, crhs = [], []
    offset = 0
    for cnt in view.row_counts:
        for j in range(k):
            for r in range(offset, offset + cnt):
                row = [zero] * width
                row[j * (M + 1) : (j + 1) * (M + 1)] = mixed_rows[r]
                crows.append(row)
                crhs.append([view.packets[r].tag[j]])
        offset += cnt
    for key in keys:
        powers = [fld.one]
        for _ in range(k - 1):
            powers.append(powers[-1] * key.point)
        for t in range(M + 1):
            row = [zero] * width
            for j in range(k):
                row[j * (M + 1) + t] = powers[j]
            crows.append(row)
            crhs.append([key.evals[t]])

    r0 = Matrix(fld, mixed_rows, cols=M + 1).rank()
    meta = RecoveryMeta(
        q=fld.q,
        l=fld.l,
        k=k,
        M=M,
        K=len(keys),
        n=len(messages),
        r0=r0,
        h_total=view.h_total,
    )
    return RecoverySystem(Matrix(fld, crows, cols=width), Matrix(fld, crhs, cols=1), meta)


def _check_coalition_bound(meta: RecoveryMeta):
    if meta.K >= meta.k:
        raise ValueError(
            f"closed form needs coalition size below k (K={meta.K}, k={meta.k})"
        )


def predicted_count(meta: RecoveryMeta) -> int:
    """Closed-form number of secret matrices consistent with the coalition view."""
    _check_coalition_bound(meta)
    return meta.q ** (meta.l * (meta.M + 1 - meta.r0) * (meta.k - meta.K))


def predicted_rank(meta: RecoveryMeta) -> int:
    """Closed-form rank of the stacked coefficient matrix."""
    _check_coalition_bound(meta)
    return meta.r0 * meta.k + (meta.M + 1 - meta.r0) * meta.K


def gauss_count(system: RecoverySystem) -> tuple[bool, int]:
    """Consistency and solution count via elimination."""
    return solve_count(system.coeff, system.rhs)


def brute_force_count(system: RecoverySystem, guard: int = BRUTE_FORCE_GUARD) -> int:
    """Count solutions by enumerating every candidate secret vector.

    Deliberately independent of the elimination path: candidates run in
    element-enumeration order and each is checked against the raw equations.
    """
    fld = system.coeff.field
    unknowns = system.coeff.cols
    total = fld.order**unknowns
    if total > guard:
        raise GuardError(f"{total} candidates exceed the guard of {guard}")
    elems = fld.elements()
    size = len(elems)
    if size * size <= _TABLE_LIMIT:
        return _brute_force_tabled(system, elems)
    count = 0
    rows = [
        (
            tuple((c, v) for c, v in enumerate(system.coeff.row(r)) if v),
            system.rhs[r, 0],
        )
        for r in range(system.coeff.rows)
    ]
    zero = fld.zero
    for cand in itertools.product(elems, repeat=unknowns):
        if all(
            sum((v * cand[c] for c, v in entries), zero) == want for entries, want in rows
        ):
            count += 1
    return count


def _brute_force_tabled(system: RecoverySystem, elems) -> int:
    """Same enumeration, but over integer indices with precomputed op tables."""
    index = {e: i for i, e in enumerate(elems)}
    add = [[index[a + b] for b in elems] for a in elems]
    mul = [[index[a * b] for b in elems] for a in elems]
    rows = []
    for r in range(system.coeff.rows):
        entries = tuple(
            (c, mul[index[v]]) for c, v in enumerate(system.coeff.row(r)) if v
        )
        rows.append((entries, index[system.rhs[r, 0]]))
    count = 0
    for cand in itertools.product(range(len(elems)), repeat=system.coeff.cols):
        ok = True
        for entries, want in rows:
            acc = 0
            for c, mrow in entries:
                acc = add[acc][mrow[cand[c]]]
            if acc != want:
                ok = False
                break
        if ok:
            count += 1
    return count


@dataclass(frozen=True)
class HConditionReport:
    """Whether the coalition's total edge count stays within the tag dimension."""

    h_total: int
    M: int
    condition_held: bool


def h_condition_report(meta: RecoveryMeta) -> HConditionReport:
    return HConditionReport(meta.h_total, meta.M, meta.h_total <= meta.M)
