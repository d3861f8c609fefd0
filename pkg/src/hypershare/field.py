"""Exact arithmetic and linear algebra over prime fields GF(q).

Field elements are plain ints in [0, q). Matrices carry their field and do
exact elimination; when (q-1)^2 fits in int64 the heavy loops run on numpy,
otherwise a pure-Python big-int path is used. Moduli are capped at 2^61.
"""

from __future__ import annotations

import numpy as np

from .errors import FieldMismatchError, NotPrimeError

MAX_MODULUS = 1 << 61
# largest q with (q-1)^2 still representable in int64 during elimination
_NUMPY_MAX_Q = 3037000499

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 2^64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_prime_at_least(b: int) -> int:
    """Least prime p with p >= b."""
    p = max(int(b), 2)
    if p <= 2:
        return 2
    if p % 2 == 0:
        p += 1
    while not is_prime(p):
        p += 2
    return p


class GF:
    """Prime field GF(q). Immutable; safe for concurrent use."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        q = int(q)
        if q < 2 or q > MAX_MODULUS:
            raise NotPrimeError(f"modulus {q} outside supported range [2, 2^61]")
        if not is_prime(q):
            raise NotPrimeError(f"modulus {q} is not prime")
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("GF is immutable")

    def __eq__(self, other):
        return isinstance(other, GF) and self.q == other.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"GF({self.q})"

    def reduce(self, a: int) -> int:
        return a % self.q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.q - 2, self.q)

    def rand(self, tape) -> int:
        return tape.randbelow(self.q)


def make_field(q: int) -> GF:
    """Field with verified-prime modulus q."""
    return GF(q)


class Matrix:
    """Immutable row-major matrix over a prime field."""

    __slots__ = ("field", "rows", "ncols", "_np_cache")

    def __init__(self, field: GF, rows, ncols: int | None = None):
        q = field.q
        norm = tuple(tuple(int(x) % q for x in row) for row in rows)
        if norm:
            widths = {len(r) for r in norm}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row width")
            ncols = width
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", norm)
        object.__setattr__(self, "ncols", int(ncols))
        object.__setattr__(self, "_np_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _wrap(cls, field: GF, rows: tuple, ncols: int) -> "Matrix":
        """Internal: rows are trusted to be canonical tuples mod q already."""
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "ncols", ncols)
        object.__setattr__(m, "_np_cache", None)
        return m

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.q, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix(GF({self.field.q}), {self.nrows}x{self.ncols})"

    def _array(self):
        """Cached int64 view; None when the modulus needs big ints."""
        if self.field.q > _NUMPY_MAX_Q:
            return None
        cached = self._np_cache
        if cached is None:
            cached = np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)
            cached.setflags(write=False)
            object.__setattr__(self, "_np_cache", cached)
        return cached

    def submatrix(self, row_indices) -> "Matrix":
        return Matrix._wrap(
            self.field, tuple(self.rows[i] for i in row_indices), self.ncols
        )

    def stack(self, other: "Matrix") -> "Matrix":
        if other.field != self.field:
            raise FieldMismatchError("cannot stack matrices over different fields")
        if other.ncols != self.ncols:
            raise ValueError("column count mismatch")
        return Matrix._wrap(self.field, self.rows + other.rows, self.ncols)

    def with_row(self, row) -> "Matrix":
        q = self.field.q
        return Matrix._wrap(
            self.field, self.rows + (tuple(int(x) % q for x in row),), self.ncols
        )

    def rank(self) -> int:
        """Row rank via exact elimination."""
        if self.nrows == 0 or self.ncols == 0:
            return 0
        a = self._array()
        if a is not None:
            _, pivots = _echelon_np(a.copy(), self.field.q, full=False)
        else:
            _, pivots = _rref_py([list(r) for r in self.rows], self.field.q)
        return len(pivots)

    def mul_vec(self, r) -> tuple:
        """Matrix-vector product M r, exact mod q."""
        if len(r) != self.ncols:
            raise ValueError("vector length must equal column count")
        q = self.field.q
        a = self._array()
        if a is not None and self.nrows:
            vec = np.array([x % q for x in r], dtype=np.int64)
            out = ((a * vec[None, :]) % q).sum(axis=1) % q
            return tuple(int(x) for x in out)
        return tuple(sum(mi * ri for mi, ri in zip(row, r)) % q for row in self.rows)

    def solve_left(self, target) -> tuple | None:
        """Canonical v with v M = target, or None when target is not in the rowspan.

        Canonical means: reduced-row-echelon back-substitution with free
        variables set to 0, so repeated calls are deterministic.
        """
        if len(target) != self.ncols:
            raise ValueError("target length must equal column count")
        q = self.field.q
        t = [x % q for x in target]
        if self.nrows == 0:
            return () if not any(t) else None
        a = self._array()
        if a is not None:
            return solve_left_array(a, np.array(t, dtype=np.int64), q)
        # columns where every row is zero force the matching target entry to 0
        live = [c for c in range(self.ncols) if any(row[c] for row in self.rows)]
        livemask = set(live)
        if any(t[c] for c in range(self.ncols) if c not in livemask):
            return None
        aug = [[self.rows[i][c] for i in range(self.nrows)] + [t[c]] for c in live]
        red, pivots = _rref_py(aug, q)
        return _read_solution(red, pivots, self.nrows, q)

    def nullspace(self) -> "Matrix":
        """Basis (as rows) of {x : M x = 0}, canonical from RREF."""
        q = self.field.q
        n = self.ncols
        if self.nrows == 0:
            return Matrix(self.field, [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)], n)
        a = self._array()
        if a is not None:
            red, pivots = _echelon_np(a.copy(), q, full=True)
            red = red.tolist()
        else:
            red, pivots = _rref_py([list(r) for r in self.rows], q)
        pivot_cols = set(pivots)
        free = [c for c in range(n) if c not in pivot_cols]
        basis = []
        for f in free:
            vec = [0] * n
            vec[f] = 1
            for i, pc in enumerate(pivots):
                vec[pc] = (-red[i][f]) % q
            basis.append(tuple(vec))
        return Matrix(self.field, basis, n)


def identity_matrix(field: GF, n: int) -> Matrix:
    return Matrix(field, [[1 if j == i else 0 for j in range(n)] for i in range(n)], n)


def _augmented_system(a, t):
    """Transposed system [M^T | t] with all-zero columns of M pruned.

    Zero columns only assert 0 = t_c; returns None when that fails.
    """
    nrows = a.shape[0]
    live = np.nonzero(a.any(axis=0))[0]
    dead = np.ones(a.shape[1], dtype=bool)
    dead[live] = False
    if t[dead].any():
        return None
    aug = np.empty((live.size, nrows + 1), dtype=np.int64)
    aug[:, :nrows] = a[:, live].T
    aug[:, nrows] = t[live]
    return aug


def solve_left_array(a, t, q: int) -> tuple | None:
    """solve_left on a raw int64 array (entries already reduced mod q).

    Shared by Matrix.solve_left and the span-program hot path, so repeated
    subset queries skip Matrix construction entirely.
    """
    nrows = a.shape[0]
    if nrows == 0:
        return () if not t.any() else None
    aug = _augmented_system(a, t)
    if aug is None:
        return None
    red, pivots = _echelon_np(aug, q, full=True)
    return _read_solution(red, pivots, nrows, q)


def spans_array(a, t, q: int) -> bool:
    """True iff t is in the rowspan of a; forward elimination only.

    A pivot landing in the constant column of the transposed augmented
    system is exactly an inconsistent equation.
    """
    nrows = a.shape[0]
    if nrows == 0:
        return not t.any()
    aug = _augmented_system(a, t)
    if aug is None:
        return False
    _, pivots = _echelon_np(aug, q, full=False)
    return not (pivots and pivots[-1] == nrows)


def _echelon_np(a, q, full: bool):
    """In-place elimination of an int64 array mod q; (array, pivot columns).

    full=True clears above the pivots too (RREF); full=False leaves an
    echelon form, enough for rank and consistency questions at half the
    work. Intermediate products stay below q^2 and fit in int64.
    """
    a %= q
    r, c = a.shape
    pivots = []
    row = 0
    for col in range(c):
        if row == r:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            a[[row, p]] = a[[p, row]]
        inv = pow(int(a[row, col]), q - 2, q)
        a[row] = a[row] * inv % q
        if full:
            factors = a[:, col].copy()
            factors[row] = 0
            if factors.any():
                a -= np.outer(factors, a[row])
                a %= q
        else:
            below = a[row + 1 :, col]
            if below.any():
                a[row + 1 :] -= np.outer(below, a[row])
                a[row + 1 :] %= q
        pivots.append(col)
        row += 1
    return a, pivots


def _rref_py(a, q):
    """Pure-Python RREF for moduli beyond the int64-safe range."""
    r = len(a)
    c = len(a[0]) if r else 0
    pivots = []
    row = 0
    for col in range(c):
        if row == r:
            break
        p = next((i for i in range(row, r) if a[i][col] % q), None)
        if p is None:
            continue
        a[row], a[p] = a[p], a[row]
        inv = pow(a[row][col], q - 2, q)
        a[row] = [x * inv % q for x in a[row]]
        for i in range(r):
            if i != row and a[i][col] % q:
                f = a[i][col] % q
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    return a, pivots


def _read_solution(red, pivots, nvars, q):
    """Extract the canonical solution of a reduced augmented system.

    The augmented system has nvars variable columns plus one constant
    column; pivots in the constant column mean inconsistency.
    """
    sol = [0] * nvars
    for i, col in enumerate(pivots):
        if col == nvars:
            return None
        sol[col] = int(red[i][nvars]) % q
    return tuple(sol)
