"""Monotone span programs and the linear secret sharing they induce.

A span program is a field, a labeled matrix M, and a nonzero target vector.
A set X is accepted when the rows labeled by X span the target. Sharing a
secret draws r uniformly from {r : <target, r> = secret} and hands every
participant their labeled slice of M r; any accepted set recombines those
slices linearly back into the secret, and for any rejected set the joint
share distribution is identical for every secret.

Text formats (UTF-8, LF):

  msp <q> <rows> <cols>
  target <cols values>
  row <participant-id> <values...>     one line per row, in row order

  shares <q>
  p <id> <values...>                   one line per participant
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    FieldMismatchError,
    FieldTooSmallError,
    FormatError,
    NotQualifiedError,
)
from .field import GF, Matrix, solve_left_array, spans_array
from .randomness import RandomTape


@dataclass(frozen=True)
class ShareBundle:
    """Per-participant share vectors, in that participant's row order."""

    field: GF
    shares: dict[int, tuple[int, ...]]

    def restricted(self, subset) -> "ShareBundle":
        keep = set(subset)
        return ShareBundle(self.field, {p: v for p, v in self.shares.items() if p in keep})


class MonotoneSpanProgram:
    """Immutable span program; all query/share operations are pure."""

    __slots__ = ("field", "matrix", "labels", "target", "participants", "_rows_by_pid")

    def __init__(self, field: GF, matrix: Matrix, labels, target, participants=None):
        labels = tuple(int(p) for p in labels)
        if matrix.field != field:
            raise FieldMismatchError("matrix field differs from program field")
        if len(labels) != matrix.nrows:
            raise ValueError("need exactly one label per row")
        target = tuple(int(x) % field.q for x in target)
        if len(target) != matrix.ncols:
            raise ValueError("target length must equal column count")
        if not any(target):
            raise ValueError("target must be nonzero")
        if participants is None:
            participants = sorted(set(labels))
        participants = tuple(sorted(set(int(p) for p in participants)))
        if not set(labels) <= set(participants):
            raise ValueError("labels must come from the participant universe")
        rows_by_pid: dict[int, list[int]] = {p: [] for p in participants}
        for i, p in enumerate(labels):
            rows_by_pid[p].append(i)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "participants", participants)
        object.__setattr__(
            self, "_rows_by_pid", {p: tuple(r) for p, r in rows_by_pid.items()}
        )

    def __setattr__(self, name, value):
        raise AttributeError("MonotoneSpanProgram is immutable")

    def __repr__(self):
        return (
            f"MonotoneSpanProgram(GF({self.field.q}), "
            f"{self.matrix.nrows}x{self.matrix.ncols}, "
            f"{len(self.participants)} participants)"
        )

    @property
    def total_rows(self) -> int:
        return self.matrix.nrows

    @property
    def randomness_dim(self) -> int:
        return self.matrix.ncols - 1

    def rows_of(self, subset) -> tuple[int, ...]:
        """Row indices labeled by the subset, ascending."""
        out = []
        for p in sorted(set(subset)):
            out.extend(self._rows_by_pid.get(p, ()))
        return tuple(sorted(out))

    def row_count(self, participant: int) -> int:
        return len(self._rows_by_pid.get(participant, ()))

    def submatrix(self, subset) -> Matrix:
        return self.matrix.submatrix(self.rows_of(subset))

    def _subarray(self, rows):
        a = self.matrix._array()
        if a is None:
            return None
        return a[np.asarray(rows, dtype=np.intp)] if rows else a[:0]

    def _solve_for(self, subset) -> tuple | None:
        """Recombination coefficients for the subset's rows, or None."""
        rows = self.rows_of(subset)
        sub = self._subarray(rows)
        if sub is None:
            return self.matrix.submatrix(rows).solve_left(self.target)
        return solve_left_array(
            sub, np.array(self.target, dtype=np.int64), self.field.q
        )

    def accepts(self, subset) -> bool:
        """True iff the subset's rows span the target."""
        rows = self.rows_of(subset)
        sub = self._subarray(rows)
        if sub is None:
            return self.matrix.submatrix(rows).solve_left(self.target) is not None
        return spans_array(sub, np.array(self.target, dtype=np.int64), self.field.q)

    def privacy_rank_check(self, subset) -> bool:
        """True iff the target is outside the subset's rowspan (linear privacy)."""
        return not self.accepts(subset)

    def sample_input_vector(self, secret: int, tape: RandomTape) -> tuple[int, ...]:
        """Uniform r with <target, r> = secret: free coordinates are drawn
        uniformly and the first nonzero target coordinate is solved for."""
        q = self.field.q
        secret = secret % q
        pivot = next(i for i, t in enumerate(self.target) if t)
        r = [0] * len(self.target)
        acc = 0
        for i, t in enumerate(self.target):
            if i == pivot:
                continue
            r[i] = tape.randbelow(q)
            acc = (acc + t * r[i]) % q
        r[pivot] = (secret - acc) * self.field.inv(self.target[pivot]) % q
        return tuple(r)

    def distribute(self, secret: int, tape: RandomTape) -> ShareBundle:
        """Shares M r for a uniform r consistent with the secret."""
        r = self.sample_input_vector(secret, tape)
        values = self.matrix.mul_vec(r)
        shares = {
            p: tuple(values[i] for i in rows)
            for p, rows in self._rows_by_pid.items()
        }
        return ShareBundle(self.field, shares)

    def reconstruct(self, subset, bundle: ShareBundle) -> int:
        """Recover the secret from an accepted subset's shares."""
        rows = self.rows_of(subset)
        v = self._solve_for(subset)
        if v is None:
            raise NotQualifiedError(f"set {sorted(set(subset))} is not qualified")
        flat = []
        for p in sorted(set(subset)):
            vals = bundle.shares.get(p)
            own = self._rows_by_pid.get(p, ())
            if vals is None or len(vals) != len(own):
                raise ValueError(f"missing or malformed shares for participant {p}")
            flat.extend(vals)
        # rows_of sorts ascending; realign the concatenated shares to match
        by_pid_order = []
        for p in sorted(set(subset)):
            by_pid_order.extend(self._rows_by_pid.get(p, ()))
        pos = {ri: i for i, ri in enumerate(by_pid_order)}
        q = self.field.q
        return sum(v[j] * flat[pos[rows[j]]] for j in range(len(rows))) % q


def threshold_msp(t: int, n: int, gf: GF) -> MonotoneSpanProgram:
    """Vandermonde program accepting exactly the sets of size >= t."""
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    if gf.q <= n:
        raise FieldTooSmallError(f"threshold over GF({gf.q}) supports at most {gf.q - 1} participants")
    rows = [[pow(j, e, gf.q) for e in range(t)] for j in range(1, n + 1)]
    target = [1] + [0] * (t - 1)
    return MonotoneSpanProgram(
        gf, Matrix(gf, rows), labels=range(1, n + 1), target=target,
        participants=range(1, n + 1),
    )


def normalize_target(msp: MonotoneSpanProgram) -> MonotoneSpanProgram:
    """Equivalent program with target e_1, via an invertible column change.

    Column 1 of the change-of-basis matrix maps the target to 1 and the
    remaining columns to 0, so acceptance is preserved on every subset.
    """
    q = msp.field.q
    ncols = msp.matrix.ncols
    e1 = (1,) + (0,) * (ncols - 1)
    if msp.target == e1:
        return msp
    pivot = next(i for i, t in enumerate(msp.target) if t)
    inv_p = msp.field.inv(msp.target[pivot])
    others = [i for i in range(ncols) if i != pivot]
    # columns of the transform: first sends target to 1, the rest to 0
    cols = [[0] * ncols for _ in range(ncols)]
    for r in range(ncols):
        cols[0][r] = inv_p if r == pivot else 0
    for cidx, i in enumerate(others, start=1):
        for r in range(ncols):
            if r == i:
                cols[cidx][r] = 1
            elif r == pivot:
                cols[cidx][r] = (-msp.target[i] * inv_p) % q
    new_rows = []
    for row in msp.matrix.rows:
        new_rows.append(tuple(sum(row[r] * col[r] for r in range(ncols)) % q for col in cols))
    return MonotoneSpanProgram(
        msp.field,
        Matrix(msp.field, new_rows, ncols),
        msp.labels,
        e1,
        msp.participants,
    )


def or_compose(msps) -> MonotoneSpanProgram:
    """Program accepting a set iff some constituent accepts it.

    Constituents are first normalized to target e_1; their first columns
    are shared and the remaining randomness columns are placed in disjoint
    blocks, so total rows add up.
    """
    msps = [normalize_target(m) for m in msps]
    if not msps:
        raise ValueError("or_compose needs at least one program")
    gf = msps[0].field
    if any(m.field != gf for m in msps):
        raise FieldMismatchError("all programs must share one field")
    if len(msps) == 1:
        return msps[0]
    tail_widths = [m.matrix.ncols - 1 for m in msps]
    ncols = 1 + sum(tail_widths)
    rows = []
    labels = []
    offset = 1
    for m, width in zip(msps, tail_widths):
        for row in m.matrix.rows:
            new = [row[0]] + [0] * (ncols - 1)
            new[offset : offset + width] = row[1:]
            rows.append(tuple(new))
        labels.extend(m.labels)
        offset += width
    participants = sorted(set(p for m in msps for p in m.participants))
    target = (1,) + (0,) * (ncols - 1)
    return MonotoneSpanProgram(
        gf, Matrix(gf, rows, ncols), labels, target, participants
    )


def serialize_msp(msp: MonotoneSpanProgram) -> str:
    lines = [f"msp {msp.field.q} {msp.matrix.nrows} {msp.matrix.ncols}"]
    lines.append("target " + " ".join(str(x) for x in msp.target))
    for label, row in zip(msp.labels, msp.matrix.rows):
        lines.append(f"row {label} " + " ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_msp(text: str) -> MonotoneSpanProgram:
    lines = [
        (i, s.strip())
        for i, s in enumerate(text.splitlines(), start=1)
        if s.strip() and not s.strip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty span program file")
    ln, header = lines[0]
    f = header.split()
    if len(f) != 4 or f[0] != "msp":
        raise FormatError("header must be 'msp <q> <rows> <cols>'", line=ln)
    try:
        q, nrows, ncols = int(f[1]), int(f[2]), int(f[3])
    except ValueError:
        raise FormatError("non-integer header fields", line=ln) from None
    gf = GF(q)
    if len(lines) != 2 + nrows:
        raise FormatError(f"expected target plus {nrows} row lines", line=ln)
    tln, tline = lines[1]
    tf = tline.split()
    if tf[0] != "target" or len(tf) != 1 + ncols:
        raise FormatError(f"target line needs {ncols} values", line=tln)
    target = [int(x) for x in tf[1:]]
    rows = []
    labels = []
    for rln, rline in lines[2:]:
        rf = rline.split()
        if rf[0] != "row" or len(rf) != 2 + ncols:
            raise FormatError(f"row line needs a label and {ncols} values", line=rln)
        labels.append(int(rf[1]))
        rows.append([int(x) for x in rf[2:]])
    return MonotoneSpanProgram(gf, Matrix(gf, rows, ncols), labels, target)


def serialize_shares(bundle: ShareBundle) -> str:
    lines = [f"shares {bundle.field.q}"]
    for p in sorted(bundle.shares):
        lines.append(f"p {p} " + " ".join(str(x) for x in bundle.shares[p]))
    return "\n".join(lines) + "\n"


def parse_shares(text: str) -> ShareBundle:
    lines = [
        (i, s.strip())
        for i, s in enumerate(text.splitlines(), start=1)
        if s.strip() and not s.strip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty shares file")
    ln, header = lines[0]
    f = header.split()
    if len(f) != 2 or f[0] != "shares":
        raise FormatError("header must be 'shares <q>'", line=ln)
    gf = GF(int(f[1]))
    shares = {}
    for pln, pline in lines[1:]:
        pf = pline.split()
        if len(pf) < 2 or pf[0] != "p":
            raise FormatError("expected 'p <id> <values...>'", line=pln)
        pid = int(pf[1])
        if pid in shares:
            raise FormatError(f"duplicate participant {pid}", line=pln)
        shares[pid] = tuple(int(x) % gf.q for x in pf[2:])
    return ShareBundle(gf, shares)
