"""Randomized hypergraph combinatorics: partite covers, degree bucketing,
and block partitions with per-block degree control.

All real-valued sizing formulas (n^alpha, ln n) are evaluated in double
precision and then ceiled; correctness never depends on them, only sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoverFailureError, PartitionFailureError
from .hypergraph import Hypergraph, PartiteHypergraph
from .randomness import RandomTape


def cover_coloring_cap(n: int, k: int) -> int:
    """Hard cap on colorings drawn before a cover attempt gives up."""
    return math.ceil(3 * (k**k / math.factorial(k)) * k * math.log(n + 1)) + 16


def random_partite_cover(h: Hypergraph, tape: RandomTape) -> list[PartiteHypergraph]:
    """Cover every edge of h with k-partite sub-hypergraphs from random colorings.

    Colorings are drawn one at a time; a coloring is kept only if it makes
    at least one not-yet-covered edge rainbow (all k colors distinct). Parts
    of each kept sub-hypergraph are the color classes of the full vertex
    set. Raises CoverFailureError once the coloring cap is hit.
    """
    if not h.edges:
        raise ValueError("cover requires a nonempty edge set")
    k, n = h.k, h.n
    cap = cover_coloring_cap(n, k)
    uncovered = set(h.edges)
    out = []
    for _ in range(cap):
        coloring = [tape.randbelow(k) for _ in range(n)]
        part_lists = [[] for _ in range(k)]
        for v in range(1, n + 1):
            part_lists[coloring[v - 1]].append(v)
        kept_edges = []
        newly = []
        for e in h.edges:
            colors = [coloring[v - 1] for v in e]
            if len(set(colors)) != k:
                continue
            ordered = tuple(v for _, v in sorted(zip(colors, e)))
            kept_edges.append(ordered)
            if e in uncovered:
                newly.append(e)
        if not newly:
            continue
        uncovered.difference_update(newly)
        out.append(
            PartiteHypergraph(
                parts=tuple(tuple(p) for p in part_lists),
                edges=tuple(kept_edges),
            )
        )
        if not uncovered:
            return out
    raise CoverFailureError(
        f"{len(uncovered)} edges still uncovered after {cap} colorings"
    )


@dataclass(frozen=True)
class DegreeBuckets:
    """Partition of the last part by degree scale.

    Bucket s holds vertices v with s = min(floor(log2(n / deg(v))),
    ceil(log2 n) - 1), n being the first part's size. Degree-0 vertices
    land in `zero`; sparse-side construction gives them no gadget rows.
    """

    buckets: dict[int, tuple[int, ...]]
    zero: tuple[int, ...]


def bucket_index(n: int, deg: int) -> int:
    if deg < 1:
        raise ValueError("bucket_index needs degree >= 1")
    s = (n // deg).bit_length() - 1 if n >= deg else 0
    cap = max((n - 1).bit_length() - 1, 0)
    return min(s, cap)


def bucket_by_degree(h: PartiteHypergraph, within=None) -> DegreeBuckets:
    """Bucket the last part's vertices by their degree in `within` (default E)."""
    edges = h.edges if within is None else tuple(within)
    n = len(h.parts[0])
    deg = {v: 0 for v in h.parts[-1]}
    for e in edges:
        deg[e[-1]] += 1
    buckets: dict[int, list[int]] = {}
    zero = []
    for v in h.parts[-1]:
        if deg[v] == 0:
            zero.append(v)
        else:
            buckets.setdefault(bucket_index(n, deg[v]), []).append(v)
    return DegreeBuckets(
        buckets={s: tuple(vs) for s, vs in sorted(buckets.items())},
        zero=tuple(zero),
    )


@dataclass(frozen=True)
class PartitionPlan:
    """Sizing for a block partition of the first k-1 parts.

    alpha = lam/(k^2-2k+2) - (k-1) tau/(k^2-2k+2) + (k^2-2k+1)/(k^2-2k+2)
    with tau = log_n d and lam = log_n ak_size. Blocks have size
    ceil(n^alpha), there are ceil(2 n^(1-alpha) ln n) of them per part, and
    every last-part vertex may keep at most ceil(2 n^((k-1)alpha + tau - k + 1))
    edges inside any block combination. condition_met records whether
    d * ak_size^(k-1) >= n^(k-1) * (log2 n)^(k^2-2k+2).
    """

    n: int
    k: int
    d: int
    ak_size: int
    tau: float
    lam: float
    alpha: float
    block_size: int
    block_count: int
    degree_cap: int
    condition_met: bool


def plan_partition(n: int, d: int, ak_size: int, k: int) -> PartitionPlan:
    """Evaluate the block-partition sizing formulas for one bucket."""
    if n < 1 or d < 1 or ak_size < 1:
        raise ValueError("plan_partition needs n, d, ak_size >= 1")
    if k < 2:
        raise ValueError("k must be at least 2")
    kk = k * k - 2 * k + 2
    if n == 1:
        tau = lam = 0.0
        alpha = 1.0
    else:
        tau = math.log(d, n)
        lam = math.log(ak_size, n)
        alpha = lam / kk - (k - 1) * tau / kk + (k * k - 2 * k + 1) / kk
    block_size = max(1, math.ceil(n**alpha))
    block_count = max(1, math.ceil(2 * n ** (1 - alpha) * math.log(n)))
    degree_cap = max(1, math.ceil(2 * n ** ((k - 1) * alpha + tau - k + 1)))
    condition_met = d * ak_size ** (k - 1) >= n ** (k - 1) * math.log2(max(n, 2)) ** kk
    return PartitionPlan(
        n=n,
        k=k,
        d=d,
        ak_size=ak_size,
        tau=tau,
        lam=lam,
        alpha=alpha,
        block_size=block_size,
        block_count=block_count,
        degree_cap=degree_cap,
        condition_met=condition_met,
    )


def retry_cap(n: int) -> int:
    return 64 * max(1, math.ceil(math.log2(max(n, 2))))


def random_block_partition(
    h: PartiteHypergraph, plan: PartitionPlan, tape: RandomTape
) -> list[list[tuple[int, ...]]]:
    """Blocks for each of the first k-1 parts, resampled until valid.

    Valid means: each part is covered by its blocks, and for every block
    combination every last-part vertex has at most plan.degree_cap edges
    whose first k-1 vertices all lie in the chosen blocks. A part no larger
    than the block size keeps a single block (itself). Full resample on any
    violation; PartitionFailureError after the retry cap.
    """
    k = h.k
    cap = retry_cap(plan.n)
    for _ in range(cap):
        blocks = []
        for j in range(k - 1):
            part = h.parts[j]
            if plan.block_size >= len(part):
                blocks.append([tuple(part)])
            else:
                drawn = [
                    tuple(sorted(tape.sample(part, plan.block_size)))
                    for _ in range(plan.block_count)
                ]
                blocks.append(drawn)
        if not _covers_parts(h, blocks):
            continue
        if _degree_caps_ok(h, blocks, plan.degree_cap):
            return blocks
    raise PartitionFailureError(f"no valid block partition in {cap} resamples")


def _covers_parts(h, blocks):
    for j in range(h.k - 1):
        union = set()
        for b in blocks[j]:
            union |= set(b)
        if union != set(h.parts[j]):
            return False
    return True


def _degree_caps_ok(h, blocks, degree_cap):
    # membership[j][v] = indices of part-j blocks containing v
    membership = []
    for j in range(h.k - 1):
        m = {v: [] for v in h.parts[j]}
        for bi, b in enumerate(blocks[j]):
            for v in b:
                m[v].append(bi)
        membership.append(m)
    counts: dict[tuple, int] = {}
    for e in h.edges:
        combos = [()]
        for j in range(h.k - 1):
            hits = membership[j][e[j]]
            combos = [c + (bi,) for c in combos for bi in hits]
            if not combos:
                break
        for c in combos:
            key = (c, e[-1])
            counts[key] = counts.get(key, 0) + 1
            if counts[key] > degree_cap:
                return False
    return True
