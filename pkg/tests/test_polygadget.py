"""Monomial indexing, vanishing spaces, and root-product vectors."""

import itertools

import pytest

from hypershare import (
    GF,
    DegreeOverflowError,
    EvalPoints,
    FieldTooSmallError,
    MonomialIndex,
    RandomTape,
    in_vanishing_space,
    root_product_vector,
    vanishing_basis,
)


def eval_coeff_vector(vec, idx, point, q):
    """Independent evaluation oracle: sum coefficients times monomials."""
    total = 0
    for pos, c in enumerate(vec):
        ex = idx.exponents(pos)
        term = c
        for x, e in zip(point, ex):
            term = term * pow(x, e, q) % q
        total = (total + term) % q
    return total


def poly_multiply(vec_a, vec_b, idx, q):
    """Independent dense multiplication in the truncated monomial basis."""
    out = [0] * idx.size
    for pa, ca in enumerate(vec_a):
        if not ca:
            continue
        ea = idx.exponents(pa)
        for pb, cb in enumerate(vec_b):
            if not cb:
                continue
            eb = idx.exponents(pb)
            es = tuple(x + y for x, y in zip(ea, eb))
            if any(e > idx.d for e in es):
                raise ValueError("product leaves the degree window")
            out[idx.position(es)] = (out[idx.position(es)] + ca * cb) % q
    return tuple(out)


def test_monomial_index_bijection():
    for k in (2, 3, 4):
        for d in (0, 1, 2, 3):
            idx = MonomialIndex(k, d)
            assert idx.size == (d + 1) ** (k - 1)
            seen = set()
            for pos in range(idx.size):
                ex = idx.exponents(pos)
                assert idx.position(ex) == pos
                seen.add(ex)
            assert len(seen) == idx.size


def test_monomial_index_lexicographic():
    idx = MonomialIndex(3, 2)
    tuples = [idx.exponents(p) for p in range(idx.size)]
    assert tuples == sorted(tuples)
    assert tuples[0] == (0, 0)
    assert tuples[1] == (0, 1)


def test_eval_points_assignment():
    gf = GF(11)
    pts = EvalPoints(gf, (3, 4))
    values = [pts.alpha(1, i) for i in (1, 2, 3)] + [pts.alpha(2, i) for i in (1, 2, 3, 4)]
    assert values == [1, 2, 3, 4, 5, 6, 7]
    with pytest.raises(FieldTooSmallError):
        EvalPoints(GF(5), (3, 4))


def test_vanishing_basis_univariate_example():
    # k=2, d=2, alpha=1 over GF(5): (X-1) and (X-1)X in coordinates 1, X, X^2
    idx = MonomialIndex(2, 2)
    space = vanishing_basis(1, 1, idx, GF(5))
    assert space.basis.rows == ((4, 1, 0), (0, 4, 1))
    assert space.dimension == 2


def test_vanishing_dimension_formula():
    for k in (2, 3):
        for d in (0, 1, 2, 3):
            idx = MonomialIndex(k, d)
            space = vanishing_basis(1, 2, idx, GF(13))
            assert space.dimension == d * (d + 1) ** (k - 2)
            assert space.basis.rank() == space.dimension


def test_vanishing_rows_vanish_on_hyperplane():
    gf = GF(13)
    for k, d in ((2, 3), (3, 2)):
        idx = MonomialIndex(k, d)
        space = vanishing_basis(1, 5, idx, gf)
        grid = list(itertools.product(range(0, 13, 3), repeat=k - 1))
        for row in space.basis.rows:
            for point in grid:
                pt = (5,) + point[1:]
                assert eval_coeff_vector(row, idx, pt, 13) == 0


def test_vanishing_membership_of_products():
    # (X_j - alpha) * Q always lies in the span, for random Q
    gf = GF(11)
    idx = MonomialIndex(3, 2)
    space = vanishing_basis(2, 4, idx, gf)
    factor = [0] * idx.size
    factor[idx.position((0, 1))] = 1
    factor[idx.position((0, 0))] = (-4) % 11
    tape = RandomTape(3)
    for _ in range(10):
        qvec = [0] * idx.size
        for ex in itertools.product(range(idx.d), repeat=idx.nvars):
            # keep Q inside the window so the product stays representable
            qvec[idx.position(ex)] = gf.rand(tape)
        prod = poly_multiply(factor, qvec, idx, 11)
        assert in_vanishing_space(prod, space)


def test_constant_one_never_vanishes():
    gf = GF(7)
    for d in (0, 1, 2):
        idx = MonomialIndex(2, d)
        one = tuple(1 if p == 0 else 0 for p in range(idx.size))
        for alpha in range(7):
            assert not in_vanishing_space(one, vanishing_basis(1, alpha, idx, gf))


def test_root_product_constant():
    idx = MonomialIndex(3, 2)
    vec = root_product_vector([[], []], idx, GF(7))
    assert vec[idx.position((0, 0))] == 1
    assert sum(map(bool, vec)) == 1


def test_root_product_univariate_example():
    # (X-2)(X-3) = X^2 + 2X + 6 over GF(7) -> (6, 2, 1) in order 1, X, X^2
    idx = MonomialIndex(2, 2)
    assert root_product_vector([[2, 3]], idx, GF(7)) == (6, 2, 1)


def test_root_product_evaluation_oracle():
    gf = GF(13)
    idx = MonomialIndex(3, 3)
    tape = RandomTape(9)
    for _ in range(10):
        roots = [[gf.rand(tape) for _ in range(2)], [gf.rand(tape) for _ in range(2)]]
        vec = root_product_vector(roots, idx, gf)
        for point in itertools.product(range(0, 13, 4), repeat=2):
            direct = 1
            for j, rs in enumerate(roots):
                for r in rs:
                    direct = direct * (point[j] - r) % 13
            assert eval_coeff_vector(vec, idx, point, 13) == direct


def test_root_product_degree_overflow():
    idx = MonomialIndex(2, 1)
    with pytest.raises(DegreeOverflowError):
        root_product_vector([[1, 2]], idx, GF(7))


def test_membership_characterizes_roots():
    # z lies in the vanishing space at alpha iff alpha is a variable-j root
    gf = GF(11)
    idx = MonomialIndex(3, 2)
    roots = [[1, 3], [2, 2]]
    z = root_product_vector(roots, idx, gf)
    for j in (1, 2):
        for alpha in range(7):
            space = vanishing_basis(j, alpha, idx, gf)
            assert in_vanishing_space(z, space) == (alpha in roots[j - 1])
