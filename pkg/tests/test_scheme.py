"""Leaf constructions, overlay, pipelines, and share-size accounting."""

import itertools

import pytest

from hypershare import (
    GF,
    FieldTooSmallError,
    Hypergraph,
    KUniformAccessStructure,
    PartiteHypergraph,
    RandomTape,
    build_dense_partite,
    build_dense_uniform,
    build_sparse_partite,
    build_sparse_uniform,
    complement_partite,
    parse_msp,
    serialize_msp,
    share_size_report,
    smallest_prime_at_least,
    uniform_overlay,
)
from hypershare.scheme import dense_leaf_bound, pipeline_field, sparse_leaf_bound
from conftest import (
    all_subsets,
    consecutive_parts,
    random_partite,
    random_uniform_hypergraph,
    sum_membership_predicate,
)


def regular_bipartite(m1, m2, d, shift=0):
    """Every last-part vertex in exactly d edges."""
    parts = consecutive_parts((m1, m2))
    edges = []
    for i, v in enumerate(parts[1]):
        for t in range(d):
            edges.append((parts[0][(i + t + shift) % m1], v))
    return PartiteHypergraph(parts=parts, edges=tuple(sorted(set(edges))))


# ---------------------------------------------------------------- sparse leaf


def test_sparse_bound_equality_regular_k2():
    h = regular_bipartite(4, 4, 2)
    built = build_sparse_partite(h, GF(7))
    assert built.msp.total_rows == 16  # m_2 + (d+1) m_1 = 4 + 3*4


def test_sparse_bound_grid():
    tape = RandomTape(71)
    for k in (2, 3):
        for sizes in itertools.product((1, 2, 3, 5), repeat=k):
            h = random_partite(sizes, 1 + tape.randbelow(6), tape)
            gf = GF(smallest_prime_at_least(max(7, sum(sizes[:-1]) + 1)))
            built = build_sparse_partite(h, gf)
            d = h.max_degree_last_part()
            bound = sparse_leaf_bound(k, d, sum(sizes[:-1]), sizes[-1])
            assert built.msp.total_rows <= bound
            assert built.report.bound_formulas["leaf"] == bound


def test_sparse_bound_equality_all_degrees_equal():
    for m1, m2, d in ((3, 3, 1), (4, 4, 2), (5, 3, 3), (4, 2, 4)):
        h = regular_bipartite(m1, m2, d)
        built = build_sparse_partite(h, GF(11))
        assert built.msp.total_rows == sparse_leaf_bound(2, d, m1, m2)


def test_sparse_k3_instance_bound():
    h = random_partite((3, 3, 3), 3, RandomTape(5))
    d = h.max_degree_last_part()
    assert d == 1 or d == 2
    built = build_sparse_partite(h, GF(7))
    if d == 1:
        assert built.msp.total_rows <= 27  # 3 + 4 * 6
    assert built.msp.total_rows <= sparse_leaf_bound(3, d, 6, 3)


def test_sparse_empty_edges_accepts_no_k_set():
    h = PartiteHypergraph(parts=consecutive_parts((2, 2)), edges=())
    built = build_sparse_partite(h, GF(7))
    for s in all_subsets((1, 2, 3, 4), 2):
        assert not built.msp.accepts(s)


def test_sparse_leaf_field_too_small():
    h = regular_bipartite(4, 2, 1)
    with pytest.raises(FieldTooSmallError):
        build_sparse_partite(h, GF(3))


def test_sparse_k2_leaf_accepts_exactly_edges():
    tape = RandomTape(83)
    for trial in range(20):
        sizes = (1 + tape.randbelow(5), 1 + tape.randbelow(5))
        h = random_partite(sizes, 1 + tape.randbelow(sizes[0] * sizes[1]), tape)
        built = build_sparse_partite(h, GF(11))
        for a in h.parts[0]:
            for b in h.parts[1]:
                expect = (a, b) in h.edge_set
                assert built.msp.accepts({a, b}) == expect
                assert built.msp.privacy_rank_check({a, b}) == (not expect)
        # same-part pairs are never qualified
        for pair in itertools.combinations(h.parts[0], 2):
            assert not built.msp.accepts(pair)


def test_sparse_leaf_round_trip():
    h = regular_bipartite(4, 3, 2)
    built = build_sparse_partite(h, GF(11))
    bundle = built.msp.distribute(6, RandomTape(4))
    for e in h.edges:
        assert built.msp.reconstruct(set(e), bundle) == 6


def test_sparse_k3_acceptance_equals_sum_predicate():
    # the leaf accepts a one-per-part tuple exactly when z lies in the SUM
    # of the two chosen vanishing spaces; edges always satisfy that, other
    # tuples may too (the known overshoot for k >= 3)
    tape = RandomTape(97)
    gf = GF(13)
    for trial in range(15):
        sizes = tuple(1 + tape.randbelow(4) for _ in range(3))
        h = random_partite(sizes, 1 + tape.randbelow(6), tape)
        built = build_sparse_partite(h, gf)
        for tup in itertools.product(*h.parts):
            accepted = built.msp.accepts(set(tup))
            predicted = sum_membership_predicate(h, gf, tup)
            assert accepted == predicted, (h, tup)
            if tup in h.edge_set:
                assert accepted


# ----------------------------------------------------------------- dense leaf


def test_dense_bound_example_k2():
    # parts 4+4, complement degree 1: bound 2*4 + 2*1*4 = 16
    parts = consecutive_parts((4, 4))
    comp_edges = tuple((parts[0][i], parts[1][i]) for i in range(4))
    universe = set(itertools.product(*parts))
    h = PartiteHypergraph(parts, tuple(sorted(universe - set(comp_edges))))
    built = build_dense_partite(h, GF(11))
    assert dense_leaf_bound(2, 1, 4, 4) == 16
    assert built.msp.total_rows <= 16


def test_dense_bound_grid():
    tape = RandomTape(19)
    for k in (2, 3):
        for n in (2, 3, 4, 5):
            if k == 3 and n > 3:
                continue
            sizes = (n,) * (k - 1) + (1 + tape.randbelow(n),)
            universe = list(itertools.product(*consecutive_parts(sizes)))
            missing = tape.randbelow(min(len(universe), 2 * n) + 1)
            removed = set(tape.sample(universe, missing))
            h = PartiteHypergraph(
                consecutive_parts(sizes),
                tuple(sorted(set(universe) - removed)),
            )
            gf = GF(max(11, sum(sizes[:-1]) + 1))
            built = build_dense_partite(h, gf)
            d = complement_partite(h).max_degree_last_part()
            assert built.msp.total_rows <= dense_leaf_bound(k, d, n, sizes[-1])


def test_dense_complete_accepts_every_tuple():
    for sizes in ((2, 3), (3, 3), (2, 2, 2)):
        parts = consecutive_parts(sizes)
        h = PartiteHypergraph(parts, tuple(itertools.product(*parts)))
        built = build_dense_partite(h, GF(11))
        for tup in itertools.product(*parts):
            assert built.msp.accepts(set(tup))


def test_dense_empty_complement_z_is_constant_one():
    parts = consecutive_parts((2, 2))
    h = PartiteHypergraph(parts, tuple(itertools.product(*parts)))
    built = build_dense_partite(h, GF(7))
    # complement degree 0: width 1, z rows read (0,..,0,1)
    zrows = [
        row
        for label, row in zip(built.msp.labels, built.msp.matrix.rows)
        if label in parts[1] and any(row[built.msp.matrix.ncols - 1 :])
    ]
    assert len(zrows) == 2
    assert all(row[-1] == 1 for row in zrows)


def test_dense_k2_leaf_accepts_exactly_edges():
    tape = RandomTape(29)
    for trial in range(15):
        n = 2 + tape.randbelow(3)
        mk = 1 + tape.randbelow(n)
        parts = consecutive_parts((n, mk))
        universe = list(itertools.product(*parts))
        removed = set(tape.sample(universe, tape.randbelow(len(universe) + 1)))
        h = PartiteHypergraph(parts, tuple(sorted(set(universe) - removed)))
        built = build_dense_partite(h, GF(11))
        for tup in universe:
            assert built.msp.accepts(set(tup)) == (tup in h.edge_set)


def test_dense_k3_target_can_be_impossible():
    # complement {(1,3,5), (1,4,6)}: exhaustive enumeration over GF(7) and
    # GF(11) shows NO completion w satisfies every edge while avoiding all
    # vanishing spaces, so the construction must fail loudly
    parts = consecutive_parts((2, 2, 2))
    universe = set(itertools.product(*parts))
    h = PartiteHypergraph(
        parts, tuple(sorted(universe - {(1, 3, 5), (1, 4, 6)}))
    )
    from hypershare import TargetSelectionError

    with pytest.raises(TargetSelectionError):
        build_dense_partite(h, GF(7))


def test_dense_k3_thin_target_slice_found():
    # complement {(2,4,5)}: only ~0.7% of F^4 works as a completion, but the
    # edge-span intersection pins it down and the build succeeds
    parts = consecutive_parts((2, 2, 2))
    universe = set(itertools.product(*parts))
    h = PartiteHypergraph(parts, tuple(sorted(universe - {(2, 4, 5)})))
    built = build_dense_partite(h, GF(11))
    for tup in itertools.product(*parts):
        if tup == (2, 4, 5):
            continue
        assert built.msp.accepts(set(tup))


def test_dense_leaf_round_trip():
    parts = consecutive_parts((3, 3))
    universe = list(itertools.product(*parts))
    h = PartiteHypergraph(parts, tuple(sorted(universe[1:])))
    built = build_dense_partite(h, GF(11))
    bundle = built.msp.distribute(8, RandomTape(10))
    for e in h.edges:
        assert built.msp.reconstruct(set(e), bundle) == 8


# -------------------------------------------------------------------- overlay


def test_overlay_accepts_large_sets_with_empty_base():
    gf = GF(11)
    overlaid = uniform_overlay(None, 2, 6, gf)
    for s in itertools.combinations(range(1, 7), 3):
        assert overlaid.accepts(s)
    for s in itertools.combinations(range(1, 7), 2):
        assert not overlaid.accepts(s)


def test_overlay_leaves_k_sets_alone():
    gf = GF(11)
    h = random_partite((3, 3), 4, RandomTape(61))
    base = build_sparse_partite(h, gf).msp
    over = uniform_overlay(base, 2, 6, gf)
    for s in all_subsets(range(1, 7), 2):
        assert over.accepts(s) == base.accepts(s)
    for s in itertools.combinations(range(1, 7), 3):
        assert over.accepts(s)


def test_overlay_adds_exactly_n_rows():
    gf = GF(11)
    h = random_partite((3, 3), 4, RandomTape(62))
    base = build_sparse_partite(h, gf).msp
    assert uniform_overlay(base, 2, 6, gf).total_rows == base.total_rows + 6


# ------------------------------------------------------------------ pipelines


def test_sparse_pipeline_small_full_oracle():
    tape = RandomTape(201)
    for trial in range(8):
        n = 5 + tape.randbelow(4)  # n in 5..8
        h = random_uniform_hypergraph(n, 2, 1 + tape.randbelow(2 * n), tape.split(f"h{trial}"))
        built = build_sparse_uniform(h, 0.5, tape.split(f"b{trial}"))
        acc = KUniformAccessStructure(h)
        for s in all_subsets(range(1, n + 1)):
            assert built.msp.accepts(s) == acc.is_qualified(s), (h.edges, s)


def test_sparse_pipeline_edges_reconstruct():
    tape = RandomTape(202)
    h = random_uniform_hypergraph(10, 2, 14, tape.split("h"))
    built = build_sparse_uniform(h, 0.25, tape.split("b"))
    bundle = built.msp.distribute(3, tape.split("deal"))
    for e in h.edges:
        assert built.msp.reconstruct(set(e), bundle) == 3


def test_sparse_pipeline_k3_edges_and_overlay():
    tape = RandomTape(203)
    h = random_uniform_hypergraph(9, 3, 8, tape.split("h"))
    built = build_sparse_uniform(h, 0.25, tape.split("b"))
    for e in h.edges:
        assert built.msp.accepts(set(e))
    for s in itertools.combinations(range(1, 10), 4):
        assert built.msp.accepts(s)


def test_sparse_pipeline_empty_structure():
    h = Hypergraph(n=5, k=2, edges=())
    built = build_sparse_uniform(h, 0.0, RandomTape(1))
    for s in all_subsets(range(1, 6), 2):
        assert not built.msp.accepts(s)
    for s in itertools.combinations(range(1, 6), 3):
        assert built.msp.accepts(s)


def test_dense_pipeline_complete_structures():
    for n, k in ((5, 2), (6, 2), (6, 3), (7, 3)):
        h = Hypergraph(n=n, k=k, edges=tuple(itertools.combinations(range(1, n + 1), k)))
        built = build_dense_uniform(h, 0.25, RandomTape(10 + n))
        for e in h.edges:
            assert built.msp.accepts(set(e)), (n, k, e)
        for s in itertools.combinations(range(1, n + 1), k + 1):
            assert built.msp.accepts(s)


def test_dense_pipeline_k2_zero_violations():
    tape = RandomTape(204)
    for trial in range(5):
        n = 6 + tape.randbelow(3)
        all_edges = list(itertools.combinations(range(1, n + 1), 2))
        removed = set(tape.sample(all_edges, tape.randbelow(n)))
        h = Hypergraph(n=n, k=2, edges=tuple(e for e in all_edges if e not in removed))
        built = build_dense_uniform(h, 0.25, tape.split(f"b{trial}"))
        acc = KUniformAccessStructure(h)
        for s in all_subsets(range(1, n + 1)):
            assert built.msp.accepts(s) == acc.is_qualified(s)


def test_dense_pipeline_edges_reconstruct():
    tape = RandomTape(205)
    all_edges = list(itertools.combinations(range(1, 9), 2))
    removed = set(tape.sample(all_edges, 6))
    h = Hypergraph(n=8, k=2, edges=tuple(e for e in all_edges if e not in removed))
    built = build_dense_uniform(h, 0.25, tape.split("b"))
    bundle = built.msp.distribute(4, tape.split("deal"))
    for e in h.edges:
        assert built.msp.reconstruct(set(e), bundle) == 4


# -------------------------------------------------------------------- reports


def test_report_total_matches_rows():
    h = random_partite((3, 3), 5, RandomTape(301))
    built = build_sparse_partite(h, GF(11))
    rep = share_size_report(built)
    assert rep.total_rows == built.msp.total_rows
    assert sum(rep.per_participant.values()) == rep.total_rows


def test_report_leaf_ratio_at_most_one():
    tape = RandomTape(302)
    for _ in range(10):
        h = random_partite((4, 4), 1 + tape.randbelow(12), tape)
        built = build_sparse_partite(h, GF(11))
        assert built.report.bound_formulas["ratio"] <= 1.0


def test_pipeline_report_records_expression():
    h = random_uniform_hypergraph(12, 2, 18, RandomTape(303))
    built = build_sparse_uniform(h, 0.25, RandomTape(304))
    rep = built.report
    assert rep.bound_formulas["pipeline_expression"] > 0
    assert rep.bound_formulas["ratio_vs_leaf_bounds"] <= 1.0
    assert rep.condition_flags["density_ok"] in (True, False)
    text = rep.to_text(built.provenance)
    assert "[values]" in text and "total_rows=" in text


def test_pipeline_determinism():
    h = random_uniform_hypergraph(12, 2, 18, RandomTape(305))
    a = build_sparse_uniform(h, 0.25, RandomTape(99))
    b = build_sparse_uniform(h, 0.25, RandomTape(99))
    assert serialize_msp(a.msp) == serialize_msp(b.msp)
    assert a.report.to_text(a.provenance) == b.report.to_text(b.provenance)


def test_pipeline_field_rule():
    assert pipeline_field(16).q == 19
    assert pipeline_field(5).q == 7


def test_pipeline_scheme_parses_back():
    h = random_uniform_hypergraph(8, 2, 10, RandomTape(306))
    built = build_sparse_uniform(h, 0.25, RandomTape(307))
    again = parse_msp(serialize_msp(built.msp))
    assert again.matrix == built.msp.matrix
    assert again.target == built.msp.target
