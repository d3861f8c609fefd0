"""Polynomial gadget for partite constructions.

Multivariate polynomials in k-1 variables with per-variable degree at most
d are flattened to coefficient vectors in F^((d+1)^(k-1)). Each vertex of a
front part gets the space of polynomials vanishing on its hyperplane; each
vertex of the last part gets the coefficient vector of a product of linear
factors, one factor per incident edge per variable. Membership of that
vector in a vanishing space then decides edge incidence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeOverflowError, FieldTooSmallError
from .field import GF, Matrix


@dataclass(frozen=True)
class MonomialIndex:
    """Bijection between exponent tuples in [0,d]^(k-1) and coordinates.

    Order is lexicographic with the first variable most significant, so
    for one variable the coordinates read 1, X, X^2, ...
    """

    k: int
    d: int

    def __post_init__(self):
        if self.k < 2 or self.d < 0:
            raise ValueError("need k >= 2 and d >= 0")

    @property
    def nvars(self) -> int:
        return self.k - 1

    @property
    def size(self) -> int:
        return (self.d + 1) ** (self.k - 1)

    def position(self, exponents) -> int:
        pos = 0
        if len(exponents) != self.nvars:
            raise ValueError("wrong number of exponents")
        for e in exponents:
            if not 0 <= e <= self.d:
                raise ValueError(f"exponent {e} outside [0, {self.d}]")
            pos = pos * (self.d + 1) + e
        return pos

    def exponents(self, position: int) -> tuple[int, ...]:
        if not 0 <= position < self.size:
            raise ValueError("position out of range")
        out = []
        for _ in range(self.nvars):
            out.append(position % (self.d + 1))
            position //= self.d + 1
        return tuple(reversed(out))

    def all_exponents(self):
        return [self.exponents(p) for p in range(self.size)]


class EvalPoints:
    """Field points for front-part vertices: 1, 2, ... across parts in order."""

    __slots__ = ("field", "part_sizes", "_offsets")

    def __init__(self, field: GF, part_sizes):
        part_sizes = tuple(int(m) for m in part_sizes)
        if any(m < 1 for m in part_sizes):
            raise ValueError("part sizes must be positive")
        total = sum(part_sizes)
        if field.q < total:
            raise FieldTooSmallError(
                f"need field size >= {total} for {total} distinct points, got {field.q}"
            )
        offsets = []
        acc = 0
        for m in part_sizes:
            offsets.append(acc)
            acc += m
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "part_sizes", part_sizes)
        object.__setattr__(self, "_offsets", tuple(offsets))

    def __setattr__(self, name, value):
        raise AttributeError("EvalPoints is immutable")

    def alpha(self, j: int, i: int) -> int:
        """Point for vertex i of part j (both 1-based)."""
        if not 1 <= j <= len(self.part_sizes):
            raise ValueError(f"part {j} out of range")
        if not 1 <= i <= self.part_sizes[j - 1]:
            raise ValueError(f"index {i} out of range for part {j}")
        return (self._offsets[j - 1] + i) % self.field.q


@dataclass(frozen=True)
class VanishingSpace:
    """Row basis of the polynomials vanishing identically on X_j = alpha."""

    part: int
    alpha: int
    index: MonomialIndex
    basis: Matrix

    @property
    def dimension(self) -> int:
        return self.basis.nrows


def vanishing_basis(j: int, alpha: int, idx: MonomialIndex, gf: GF) -> VanishingSpace:
    """Basis of {P : (X_j - alpha) divides P}, dimension d (d+1)^(k-2).

    Basis polynomials are (X_j - alpha) X^e over all exponent tuples e with
    e_j <= d-1, taken in coordinate order.
    """
    if not 1 <= j <= idx.nvars:
        raise ValueError(f"variable index {j} out of range")
    alpha = alpha % gf.q
    rows = []
    for e in idx.all_exponents():
        if e[j - 1] > idx.d - 1:
            continue
        row = [0] * idx.size
        shifted = list(e)
        shifted[j - 1] += 1
        row[idx.position(shifted)] = 1
        row[idx.position(e)] = (-alpha) % gf.q
        rows.append(row)
    return VanishingSpace(part=j, alpha=alpha, index=idx, basis=Matrix(gf, rows, idx.size))


def root_product_vector(roots_per_variable, idx: MonomialIndex, gf: GF) -> tuple[int, ...]:
    """Coefficient vector of prod_j prod_t (X_j - root_{j,t}).

    roots_per_variable lists, per variable, the points whose linear factors
    multiply in; an empty list everywhere gives the constant polynomial 1.
    DegreeOverflowError when any variable would exceed degree d.
    """
    if len(roots_per_variable) != idx.nvars:
        raise ValueError("one root list per variable required")
    for j, roots in enumerate(roots_per_variable, start=1):
        if len(roots) > idx.d:
            raise DegreeOverflowError(
                f"variable {j} gets {len(roots)} factors, degree bound is {idx.d}"
            )
    q = gf.q
    coeffs = {(0,) * idx.nvars: 1}
    for j, roots in enumerate(roots_per_variable):
        for r in roots:
            nxt: dict[tuple, int] = {}
            for e, c in coeffs.items():
                up = list(e)
                up[j] += 1
                up = tuple(up)
                nxt[up] = (nxt.get(up, 0) + c) % q
                nxt[e] = (nxt.get(e, 0) - r * c) % q
            coeffs = nxt
    vec = [0] * idx.size
    for e, c in coeffs.items():
        vec[idx.position(e)] = c
    return tuple(vec)


def in_vanishing_space(vec, space: VanishingSpace) -> bool:
    """Exact membership test via left-solve against the basis rows."""
    return space.basis.solve_left(vec) is not None
