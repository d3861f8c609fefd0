"""Shared generators and oracles for seeded random test instances."""

import itertools

from hypershare import (
    EvalPoints,
    Hypergraph,
    MonomialIndex,
    PartiteHypergraph,
    RandomTape,
    root_product_vector,
    vanishing_basis,
)
from hypershare.field import Matrix


def random_uniform_hypergraph(n, k, edge_count, tape: RandomTape) -> Hypergraph:
    """edge_count distinct k-edges on 1..n, drawn uniformly."""
    edges = set()
    while len(edges) < edge_count:
        edges.add(tuple(sorted(tape.sample(range(1, n + 1), k))))
    return Hypergraph(n=n, k=k, edges=tuple(sorted(edges)))


def random_partite(sizes, edge_count, tape: RandomTape) -> PartiteHypergraph:
    """Partite instance with consecutive vertex ids and random distinct edges."""
    parts = []
    start = 1
    for m in sizes:
        parts.append(tuple(range(start, start + m)))
        start += m
    universe = list(itertools.product(*parts))
    edge_count = min(edge_count, len(universe))
    edges = tuple(sorted(tape.sample(universe, edge_count)))
    return PartiteHypergraph(parts=tuple(parts), edges=edges)


def all_subsets(universe, max_size=None):
    universe = tuple(universe)
    top = len(universe) if max_size is None else min(max_size, len(universe))
    for size in range(0, top + 1):
        yield from itertools.combinations(universe, size)


def consecutive_parts(sizes):
    parts = []
    start = 1
    for m in sizes:
        parts.append(tuple(range(start, start + m)))
        start += m
    return tuple(parts)


def sum_membership_predicate(h, gf, tup):
    """z of the last vertex against the sum of the chosen vanishing spaces.

    Rank test on the stacked bases; this is the acceptance the sparse leaf
    construction actually provides for one-per-part tuples.
    """
    k = h.k
    d = h.max_degree_last_part()
    idx = MonomialIndex(k, d)
    pts = EvalPoints(gf, [len(p) for p in h.parts[:-1]])
    local = [{v: i for i, v in enumerate(part, start=1)} for part in h.parts]
    inc = [e for e in h.edges if e[-1] == tup[-1]]
    if not inc:
        return False
    roots = [[pts.alpha(j, local[j - 1][e[j - 1]]) for e in inc] for j in range(1, k)]
    z = root_product_vector(roots, idx, gf)
    stacked_rows = []
    for j in range(1, k):
        space = vanishing_basis(j, pts.alpha(j, local[j - 1][tup[j - 1]]), idx, gf)
        stacked_rows.extend(space.basis.rows)
    stacked = Matrix(gf, stacked_rows, idx.size)
    return stacked.solve_left(z) is not None
