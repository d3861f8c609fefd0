"""Scheme builders: partite leaf constructions, the threshold overlay, the
sparse and dense end-to-end pipelines, and share-size reporting.

The sparse leaf gives every front-part vertex its vanishing-space basis
plus one unit row, and every last-part vertex of positive degree a single
row (1, 0..0, z); the target is (1,..,1, 0). Acceptance of a one-per-part
tuple then comes down to z lying in the sum of the chosen vanishing
spaces; for k = 2 that sum is a single space and acceptance matches the
edge set exactly. The dense leaf works on the complement family, gives
last-part vertices two rows, and completes the target with a vector w kept
outside every vanishing space.

Pipelines: random partite cover, degree bucketing on the last part (on the
complement for the dense path), optional block partition when the sizing
condition holds, one leaf per piece, OR-composition, and a (k+1)-of-n
threshold overlay so every set larger than k is accepted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .decompose import (
    bucket_by_degree,
    plan_partition,
    random_block_partition,
    random_partite_cover,
)
from .errors import FieldTooSmallError, TargetSelectionError
from .field import GF, Matrix, smallest_prime_at_least
from .hypergraph import (
    COMPLEMENT_CAP,
    Hypergraph,
    KUniformAccessStructure,
    PartiteEdgeStructure,
    PartiteHypergraph,
    complement_partite,
)
from .msp import MonotoneSpanProgram, or_compose, threshold_msp
from .polygadget import (
    EvalPoints,
    MonomialIndex,
    in_vanishing_space,
    root_product_vector,
    vanishing_basis,
)
from .randomness import RandomTape

TARGET_RETRY_CAP = 64


@dataclass(frozen=True)
class LeafInfo:
    """Where one leaf came from and how big it is."""

    cover: int
    bucket: int | None
    combo: tuple[int, ...] | None
    rows: int
    degree: int
    bound: int


@dataclass(frozen=True)
class Provenance:
    path: str
    seed: int | None
    k: int
    n: int
    beta: float | None
    leaves: tuple[LeafInfo, ...] = ()
    cover_count: int = 0
    overlay_rows: tuple[int, int] | None = None


@dataclass(frozen=True)
class SchemeReport:
    """Exact share counts next to the closed-form bounds they must respect."""

    per_participant: dict[int, int]
    total_rows: int
    field_modulus: int
    bound_formulas: dict[str, float]
    condition_flags: dict[str, bool]

    def __post_init__(self):
        if self.total_rows != sum(self.per_participant.values()):
            raise ValueError("total_rows must equal the per-participant sum")

    def to_text(self, provenance: Provenance | None = None) -> str:
        lines = ["# scheme report"]
        if provenance is not None:
            lines.append(
                f"# path={provenance.path} k={provenance.k} n={provenance.n}"
                + (f" beta={provenance.beta}" if provenance.beta is not None else "")
                + (f" seed={provenance.seed}" if provenance.seed is not None else "")
            )
        lines.append(f"participants={len(self.per_participant)}")
        lines.append(f"field={self.field_modulus}")
        lines.append(f"total_rows={self.total_rows}")
        lines.append("")
        lines.append("rows per participant:")
        for p in sorted(self.per_participant):
            lines.append(f"  {p}: {self.per_participant[p]}")
        lines.append("")
        lines.append("[values]")
        if provenance is not None:
            lines.append(f"path={provenance.path}")
            lines.append(f"k={provenance.k}")
            lines.append(f"n={provenance.n}")
            if provenance.beta is not None:
                lines.append(f"beta={provenance.beta}")
            if provenance.seed is not None:
                lines.append(f"seed={provenance.seed}")
            lines.append(f"covers={provenance.cover_count}")
            lines.append(f"leaves={len(provenance.leaves)}")
            if provenance.overlay_rows is not None:
                lines.append(
                    f"overlay_rows={provenance.overlay_rows[0]}:{provenance.overlay_rows[1]}"
                )
        lines.append(f"field={self.field_modulus}")
        lines.append(f"total_rows={self.total_rows}")
        for name in sorted(self.bound_formulas):
            lines.append(f"bound.{name}={self.bound_formulas[name]}")
        for name, ok in self.condition_flags.items():
            lines.append(f"flag.{name}={'true' if ok else 'false'}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BuiltScheme:
    msp: MonotoneSpanProgram
    structure: object
    report: SchemeReport
    provenance: Provenance

    def __post_init__(self):
        if self.report.total_rows != self.msp.total_rows:
            raise ValueError("report total disagrees with the span program")


def share_size_report(scheme: BuiltScheme) -> SchemeReport:
    """Recount rows per participant; must agree with the stored report."""
    counts = {p: scheme.msp.row_count(p) for p in scheme.msp.participants}
    fresh = SchemeReport(
        per_participant=counts,
        total_rows=scheme.msp.total_rows,
        field_modulus=scheme.msp.field.q,
        bound_formulas=dict(scheme.report.bound_formulas),
        condition_flags=dict(scheme.report.condition_flags),
    )
    if fresh.per_participant != scheme.report.per_participant:
        raise ValueError("stored report is stale")
    return fresh


def sparse_leaf_bound(k: int, d: int, front_sum: int, m_k: int) -> int:
    return m_k + (d + 1) ** (k - 1) * front_sum


def dense_leaf_bound(k: int, d: int, front_max: int, m_k: int) -> int:
    return 2 * m_k + (d + 1) ** (k - 1) * (k - 1) * front_max


def pipeline_expression(k: int, n: int, beta: float) -> float:
    """Headline share-size expression; recorded for comparison only."""
    kk = k * k - 2 * k + 2
    exponent = (k * k - 3 * k + 2) / kk + ((k * k - 3 * k + 3) / kk) * beta
    return n**exponent * math.log2(max(n, 2)) ** (k + 1)


def _leaf_report(msp, bounds, flags):
    counts = {p: msp.row_count(p) for p in msp.participants}
    return SchemeReport(
        per_participant=counts,
        total_rows=msp.total_rows,
        field_modulus=msp.field.q,
        bound_formulas=bounds,
        condition_flags=flags,
    )


def build_sparse_partite(h: PartiteHypergraph, gf: GF) -> BuiltScheme:
    """Leaf scheme for a partite edge family with bounded last-part degree.

    Total rows never exceed m_k + (d+1)^(k-1) (m_1 + ... + m_(k-1)); the
    vanishing bases have d (d+1)^(k-2) rows each, so the per-vertex count
    is below the (d+1)^(k-1) the bound allows.
    """
    k = h.k
    front_sum = sum(len(p) for p in h.parts[:-1])
    if gf.q < front_sum:
        raise FieldTooSmallError(
            f"field GF({gf.q}) too small for {front_sum} evaluation points"
        )
    d = h.max_degree_last_part()
    idx = MonomialIndex(k, d)
    pts = EvalPoints(gf, [len(p) for p in h.parts[:-1]])
    width = idx.size
    ncols = width + k
    rows: list[tuple[int, ...]] = []
    labels: list[int] = []
    for j in range(1, k):
        for i, v in enumerate(h.parts[j - 1], start=1):
            space = vanishing_basis(j, pts.alpha(j, i), idx, gf)
            for b in space.basis.rows:
                rows.append((0,) * k + b)
                labels.append(v)
            unit = [0] * ncols
            unit[k - j] = 1
            rows.append(tuple(unit))
            labels.append(v)
    local = [{v: i for i, v in enumerate(part, start=1)} for part in h.parts]
    incident: dict[int, list] = {}
    for e in h.edges:
        incident.setdefault(e[-1], []).append(e)
    for v in h.parts[-1]:
        inc = incident.get(v)
        if not inc:
            continue  # zero-degree last-part vertices carry no gadget rows
        roots = [
            [pts.alpha(j, local[j - 1][e[j - 1]]) for e in inc] for j in range(1, k)
        ]
        z = root_product_vector(roots, idx, gf)
        rows.append((1,) + (0,) * (k - 1) + z)
        labels.append(v)
    target = (1,) * k + (0,) * width
    msp = MonotoneSpanProgram(
        gf, Matrix(gf, rows, ncols), labels, target, participants=h.vertices()
    )
    bound = sparse_leaf_bound(k, d, front_sum, len(h.parts[-1]))
    report = _leaf_report(
        msp,
        bounds={"leaf": float(bound), "ratio": msp.total_rows / bound},
        flags={},
    )
    prov = Provenance(
        path="sparse-partite", seed=None, k=k, n=len(h.vertices()), beta=None,
        leaves=(LeafInfo(0, None, None, msp.total_rows, d, bound),),
    )
    return BuiltScheme(msp, PartiteEdgeStructure(h), report, prov)


def build_dense_partite(
    h: PartiteHypergraph,
    gf: GF,
    tape: RandomTape | None = None,
    cap: int = COMPLEMENT_CAP,
) -> BuiltScheme:
    """Leaf scheme for a nearly complete partite family.

    Works on the complement family: every last-part vertex may miss at most
    d tuples. Last-part vertices get two rows each and the target ends in a
    vector w that avoids every vanishing space; the constant-1 vector is
    tried first and random retries are capped. Total rows stay within
    2 m_k + (d+1)^(k-1) (k-1) max(m_1..m_(k-1)).
    """
    k = h.k
    front_sum = sum(len(p) for p in h.parts[:-1])
    if gf.q < front_sum:
        raise FieldTooSmallError(
            f"field GF({gf.q}) too small for {front_sum} evaluation points"
        )
    if tape is None:
        tape = RandomTape(0, "dense-target")
    comp = complement_partite(h, cap)
    d = comp.max_degree_last_part()
    idx = MonomialIndex(k, d)
    pts = EvalPoints(gf, [len(p) for p in h.parts[:-1]])
    width = idx.size
    ncols = width + k
    space_by: dict[tuple[int, int], object] = {}
    rows: list[tuple[int, ...]] = []
    labels: list[int] = []
    for j in range(1, k):
        for i, v in enumerate(h.parts[j - 1], start=1):
            space = vanishing_basis(j, pts.alpha(j, i), idx, gf)
            space_by[(j, v)] = space
            for b in space.basis.rows:
                rows.append((0,) * k + b)
                labels.append(v)
            unit = [0] * ncols
            unit[k - j] = 1
            rows.append(tuple(unit))
            labels.append(v)
    local = [{v: i for i, v in enumerate(part, start=1)} for part in h.parts]
    missing: dict[int, list] = {}
    for e in comp.edges:
        missing.setdefault(e[-1], []).append(e)
    zs: dict[int, tuple[int, ...]] = {}
    for v in h.parts[-1]:
        inc = missing.get(v, [])
        roots = [
            [pts.alpha(j, local[j - 1][e[j - 1]]) for e in inc] for j in range(1, k)
        ]
        z = root_product_vector(roots, idx, gf)
        zs[v] = z
        rows.append((0,) * k + z)
        labels.append(v)
        head = [0] * ncols
        head[0] = 1
        rows.append(tuple(head))
        labels.append(v)
    matrix = Matrix(gf, rows, ncols)
    msp = None
    for w in _target_candidates(h, gf, width, space_by, zs, tape):
        if not any(w):
            continue
        if any(in_vanishing_space(w, sp) for sp in space_by.values()):
            continue
        target = (1,) * k + w
        cand = MonotoneSpanProgram(gf, matrix, labels, target, participants=h.vertices())
        if all(cand.accepts(set(e)) for e in h.edges):
            msp = cand
            break
    if msp is None:
        raise TargetSelectionError(
            f"no verified target completion in {TARGET_RETRY_CAP} tries"
        )
    front_max = max(len(p) for p in h.parts[:-1])
    bound = dense_leaf_bound(k, d, front_max, len(h.parts[-1]))
    report = _leaf_report(
        msp,
        bounds={"leaf": float(bound), "ratio": msp.total_rows / bound},
        flags={},
    )
    prov = Provenance(
        path="dense-partite", seed=tape.seed, k=k, n=len(h.vertices()), beta=None,
        leaves=(LeafInfo(0, None, None, msp.total_rows, d, bound),),
    )
    return BuiltScheme(msp, PartiteEdgeStructure(h), report, prov)


def _target_candidates(h, gf, width, space_by, zs, tape):
    """Target completions to try: constant 1 first, then uniform draws from
    the intersection of the per-edge spans.

    An edge is accepted exactly when the completion lies in the span of its
    z vector and its two-sided vanishing spaces, so any workable completion
    lies in the intersection of those spans; sampling there instead of all
    of F^width keeps the retry cap meaningful for k >= 3, where valid
    completions can be a thin slice of the full space.
    """
    k = h.k
    yield tuple(1 if p == 0 else 0 for p in range(width))
    constraint_rows: list[tuple[int, ...]] = []
    for e in h.edges:
        span_rows = [zs[e[-1]]]
        for j in range(1, k):
            span_rows.extend(space_by[(j, e[j - 1])].basis.rows)
        constraint_rows.extend(Matrix(gf, span_rows, width).nullspace().rows)
    basis = Matrix(gf, constraint_rows, width).nullspace().rows
    if not basis:
        return
    q = gf.q
    if q ** len(basis) <= TARGET_RETRY_CAP:
        # the whole candidate subspace fits inside the retry budget, so an
        # exhaustive sweep settles existence exactly
        sweep = itertools.product(range(q), repeat=len(basis))
        draws = (c for c in sweep if any(c))
    else:
        draws = (
            tuple(gf.rand(tape) for _ in basis) for _ in range(TARGET_RETRY_CAP - 1)
        )
    for coeffs in draws:
        yield tuple(
            sum(c * b[i] for c, b in zip(coeffs, basis)) % q for i in range(width)
        )


def uniform_overlay(
    base: MonotoneSpanProgram | None, k: int, n: int, gf: GF
) -> MonotoneSpanProgram:
    """OR the base with a (k+1)-of-n threshold so every large set is accepted."""
    if k + 1 > n:
        if base is None:
            raise ValueError("nothing to overlay: no base and no (k+1)-sets")
        return base
    thr = threshold_msp(k + 1, n, gf)
    if base is None:
        return thr
    return or_compose([base, thr])


def pipeline_field(n: int) -> GF:
    """Default modulus rule: smallest prime at least n + 2.

    Front-part evaluation points never need more than n values, and the
    threshold overlay needs q > n, so this one prime serves every leaf.
    """
    return GF(smallest_prime_at_least(n + 2))


def build_sparse_uniform(
    h: Hypergraph, beta: float, tape: RandomTape, gf: GF | None = None
) -> BuiltScheme:
    """End-to-end scheme for a sparse k-uniform access structure."""
    return _build_uniform(h, beta, tape, gf, dense=False)


def build_dense_uniform(
    h: Hypergraph, beta: float, tape: RandomTape, gf: GF | None = None
) -> BuiltScheme:
    """End-to-end scheme for a dense k-uniform access structure."""
    return _build_uniform(h, beta, tape, gf, dense=True)


def _build_uniform(h, beta, tape, gf, dense):
    k, n = h.k, h.n
    if gf is None:
        gf = pipeline_field(n)
    if gf.q <= n:
        raise FieldTooSmallError(f"pipeline over GF({gf.q}) needs q > n = {n}")
    flags: dict[str, bool] = {}
    density = len(h.edges)
    budget = n ** (1 + beta)
    if dense:
        flags["density_ok"] = density >= math.comb(n, k) - budget
    else:
        flags["density_ok"] = density <= budget
    covers = random_partite_cover(h, tape.split("cover")) if h.edges else []
    leaf_msps: list[MonotoneSpanProgram] = []
    leaf_infos: list[LeafInfo] = []
    bound_sum = 0
    for ci, sub in enumerate(covers):
        comp_edges = complement_partite(sub).edges if dense else None
        buckets = bucket_by_degree(sub, within=comp_edges)
        m1 = len(sub.parts[0])
        items: list[tuple[int | None, tuple[int, ...]]] = list(buckets.buckets.items())
        if dense and buckets.zero:
            # complement-degree-0 vertices sit in every tuple; they need a
            # (complete) leaf of their own, unlike the sparse zero bucket
            items.append((None, buckets.zero))
        for s, verts in items:
            vset = set(verts)
            bucket_edges = tuple(e for e in sub.edges if e[-1] in vset)
            if not bucket_edges:
                continue
            if dense:
                bucket_within = tuple(e for e in comp_edges if e[-1] in vset)
            else:
                bucket_within = bucket_edges
            dcount = 0
            counts: dict[int, int] = {}
            for e in bucket_within:
                counts[e[-1]] = counts.get(e[-1], 0) + 1
            if counts:
                dcount = max(counts.values())
            plan = None
            if s is not None and dcount >= 1:
                plan = plan_partition(n=m1, d=dcount, ak_size=len(verts), k=k)
                flags[f"partition_condition.cover{ci}.bucket{s}"] = plan.condition_met
            if plan is not None and plan.condition_met:
                control = PartiteHypergraph(sub.parts[:-1] + (verts,), bucket_within)
                blocks = random_block_partition(
                    control, plan, tape.split(f"blocks.{ci}.{s}")
                )
                for combo in itertools.product(*[range(len(b)) for b in blocks]):
                    chosen = [set(blocks[j][combo[j]]) for j in range(k - 1)]
                    leaf_edges = tuple(
                        e
                        for e in bucket_edges
                        if all(e[j] in chosen[j] for j in range(k - 1))
                    )
                    if not leaf_edges:
                        continue
                    parts = tuple(blocks[j][combo[j]] for j in range(k - 1)) + (verts,)
                    built = _build_leaf(
                        PartiteHypergraph(parts, leaf_edges),
                        gf,
                        dense,
                        tape.split(f"target.{ci}.{s}." + "-".join(map(str, combo))),
                    )
                    leaf_msps.append(built.msp)
                    info = built.provenance.leaves[0]
                    leaf_infos.append(
                        LeafInfo(ci, s, combo, built.msp.total_rows, info.degree, info.bound)
                    )
                    bound_sum += info.bound
            else:
                built = _build_leaf(
                    PartiteHypergraph(sub.parts[:-1] + (verts,), bucket_edges),
                    gf,
                    dense,
                    tape.split(f"target.{ci}.{s}"),
                )
                leaf_msps.append(built.msp)
                info = built.provenance.leaves[0]
                leaf_infos.append(
                    LeafInfo(ci, s, None, built.msp.total_rows, info.degree, info.bound)
                )
                bound_sum += info.bound
    base = or_compose(leaf_msps) if leaf_msps else None
    final = uniform_overlay(base, k, n, gf)
    overlay = None
    if k + 1 <= n:
        overlay = (final.total_rows - n, final.total_rows)
    counts = {p: final.row_count(p) for p in final.participants}
    path = "dense-uniform" if dense else "sparse-uniform"
    expression = pipeline_expression(k, n, beta)
    total_bound = bound_sum + (n if overlay else 0)
    bounds = {
        "leaf_sum": float(bound_sum),
        "leaf_sum_plus_overlay": float(total_bound),
        "pipeline_expression": expression,
        "ratio_vs_leaf_bounds": final.total_rows / total_bound if total_bound else 0.0,
        "ratio_vs_expression": final.total_rows / expression,
    }
    report = SchemeReport(
        per_participant=counts,
        total_rows=final.total_rows,
        field_modulus=gf.q,
        bound_formulas=bounds,
        condition_flags=flags,
    )
    prov = Provenance(
        path=path,
        seed=tape.seed,
        k=k,
        n=n,
        beta=beta,
        leaves=tuple(leaf_infos),
        cover_count=len(covers),
        overlay_rows=overlay,
    )
    return BuiltScheme(final, KUniformAccessStructure(h), report, prov)


def _build_leaf(leaf: PartiteHypergraph, gf, dense, tape):
    if dense:
        return build_dense_partite(leaf, gf, tape)
    return build_sparse_partite(leaf, gf)
