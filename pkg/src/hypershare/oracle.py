"""Brute-force ground truth: subset audits, exhaustive share-distribution
counting, and direct Lagrange reconstruction.

Privacy is never scored with entropy arithmetic; for uniform randomness,
perfect privacy is exactly "the multiset of a set's share tuples is the
same for every secret", which these oracles check by exact counting.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePointError, EnumerationTooLargeError
from .msp import MonotoneSpanProgram

ENUMERATION_CAP = 1 << 22
# matmul sums ncols products of size < q^2; q <= 2^21 keeps that in int64
_NUMPY_PRIVACY_MAX_Q = 1 << 21


@dataclass(frozen=True)
class AuditReport:
    """Outcome of comparing a span program against its access predicate."""

    universe: tuple[int, ...]
    max_size: int
    subsets_examined: int
    correctness_failures: tuple[tuple[int, ...], ...]
    privacy_violations: tuple[tuple[int, ...], ...]

    @property
    def clean(self) -> bool:
        return not self.correctness_failures and not self.privacy_violations

    def to_text(self) -> str:
        lines = [
            "# audit report",
            f"universe={len(self.universe)}",
            f"max_size={self.max_size}",
            f"subsets_examined={self.subsets_examined}",
            f"correctness_failures={len(self.correctness_failures)}",
            f"privacy_violations={len(self.privacy_violations)}",
        ]
        for s in self.correctness_failures:
            lines.append("qualified-but-rejected " + " ".join(map(str, s)))
        for s in self.privacy_violations:
            lines.append("unqualified-but-accepted " + " ".join(map(str, s)))
        return "\n".join(lines) + "\n"


def subset_budget(n: int, max_size: int) -> int:
    return sum(math.comb(n, i) for i in range(0, min(max_size, n) + 1))


def audit_acceptance(
    msp: MonotoneSpanProgram,
    structure,
    max_size: int,
    cap: int = ENUMERATION_CAP,
) -> AuditReport:
    """Classify every subset up to max_size by predicate and by acceptance.

    Records qualified-but-rejected sets (correctness failures) and
    unqualified-but-accepted sets (privacy violations; by linearity these
    are exactly the sets failing the rank privacy check).
    """
    universe = tuple(structure.universe())
    n = len(universe)
    budget = subset_budget(n, max_size)
    if budget > cap:
        raise EnumerationTooLargeError(
            f"audit needs {budget} subsets, cap is {cap}"
        )
    bad_correct = []
    bad_private = []
    examined = 0
    for size in range(0, min(max_size, n) + 1):
        for subset in itertools.combinations(universe, size):
            examined += 1
            qualified = structure.is_qualified(subset)
            accepted = msp.accepts(subset)
            if qualified and not accepted:
                bad_correct.append(subset)
            elif accepted and not qualified:
                bad_private.append(subset)
    return AuditReport(
        universe=universe,
        max_size=max_size,
        subsets_examined=examined,
        correctness_failures=tuple(bad_correct),
        privacy_violations=tuple(bad_private),
    )


def audit_scheme(built, max_size: int, cap: int = ENUMERATION_CAP) -> AuditReport:
    return audit_acceptance(built.msp, built.structure, max_size, cap)


@dataclass(frozen=True)
class PrivacyCount:
    """Share-tuple multisets per secret for one subset."""

    subset: tuple[int, ...]
    per_secret: dict[int, Counter]

    @property
    def passed(self) -> bool:
        first = None
        for c in self.per_secret.values():
            if first is None:
                first = c
            elif c != first:
                return False
        return True


def exhaustive_privacy_count(
    msp: MonotoneSpanProgram,
    subset,
    secrets=None,
    cap: int = ENUMERATION_CAP,
) -> PrivacyCount:
    """Enumerate every randomness vector and tally the subset's share tuples.

    The scheme is perfectly private for the subset iff the tallies agree
    for every secret; for linear schemes this matches the rank check.
    """
    q = msp.field.q
    free = msp.randomness_dim
    total = q**free
    if total > cap:
        raise EnumerationTooLargeError(
            f"privacy count needs {total} randomness vectors, cap is {cap}"
        )
    if secrets is None:
        secrets = range(q)
    subset = tuple(sorted(set(subset)))
    rows = msp.rows_of(subset)
    sub = msp.matrix.submatrix(rows)
    pivot = next(i for i, t in enumerate(msp.target) if t)
    inv_p = msp.field.inv(msp.target[pivot])
    per_secret: dict[int, Counter] = {}
    use_np = q <= _NUMPY_PRIVACY_MAX_Q and sub.nrows > 0
    if use_np:
        frees = np.array(
            list(itertools.product(range(q), repeat=free)), dtype=np.int64
        ).reshape(total, free)
        coeff = np.array(
            [t for i, t in enumerate(msp.target) if i != pivot], dtype=np.int64
        )
        dot = (frees * coeff[None, :]) % q
        partial = dot.sum(axis=1) % q
        a = np.array(sub.rows, dtype=np.int64).reshape(sub.nrows, sub.ncols)
        free_cols = [i for i in range(sub.ncols) if i != pivot]
        for s in secrets:
            s = s % q
            pivot_vals = (s - partial) * inv_p % q
            r = np.empty((total, sub.ncols), dtype=np.int64)
            r[:, pivot] = pivot_vals
            r[:, free_cols] = frees
            shares = (r @ a.T) % q
            tally = Counter(map(tuple, shares.tolist()))
            per_secret[s] = tally
    else:
        for s in secrets:
            s = s % q
            tally: Counter = Counter()
            for combo in itertools.product(range(q), repeat=free):
                r = list(combo[:pivot]) + [0] + list(combo[pivot:])
                acc = sum(t * r[i] for i, t in enumerate(msp.target)) % q
                r[pivot] = (s - acc) * inv_p % q
                tally[sub.mul_vec(r)] += 1
            per_secret[s] = tally
    return PrivacyCount(subset=subset, per_secret=per_secret)


def lagrange_reconstruct(points, q: int) -> int:
    """P(0) for the unique interpolating polynomial through the points.

    Uses the closed-form product of x_j / (x_j - x_l) factors; x values
    must be distinct and nonzero.
    """
    xs = [x % q for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicatePointError("interpolation points share an x coordinate")
    if any(x == 0 for x in xs):
        raise ValueError("evaluation points must be nonzero")
    total = 0
    for l, (xl, yl) in enumerate(points):
        num = 1
        den = 1
        for j, (xj, _) in enumerate(points):
            if j == l:
                continue
            num = num * xj % q
            den = den * (xj - xl) % q
        total = (total + yl * num * pow(den, q - 2, q)) % q
    return total
