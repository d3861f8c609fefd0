"""k-uniform hypergraphs, k-partite hypergraphs, and the access predicate.

Vertices are 1-based integers. Edges are stored in canonical sorted order
so equality, hashing, and serialization are stable.

Text formats (UTF-8, LF, comment lines start with '#'):

  kuniform <k> <n> <m>      header, then m lines of k ascending vertex ids
  kpartite <k> <m>          header, then k lines 'part <i> <size> <ids...>',
                            then m edge lines of k ids, one per part in order
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import FormatError, SizeOverflowError, VertexRangeError

COMPLEMENT_CAP = 1 << 24


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform hypergraph on vertices 1..n."""

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("uniformity k must be at least 2")
        if self.n < 1:
            raise ValueError("vertex count must be positive")
        canon = []
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != self.k or len(set(e)) != self.k:
                raise ValueError(f"edge {e} does not have {self.k} distinct vertices")
            if e[0] < 1 or e[-1] > self.n:
                raise VertexRangeError(f"edge {e} has a vertex outside 1..{self.n}")
            canon.append(e)
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))


@dataclass(frozen=True)
class PartiteHypergraph:
    """k-partite k-uniform hypergraph; every edge takes one vertex per part."""

    parts: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(v) for v in p)) for p in self.parts)
        if len(parts) < 2:
            raise ValueError("need at least 2 parts")
        seen = set()
        for p in parts:
            if not p:
                raise ValueError("parts must be nonempty")
            if seen & set(p):
                raise ValueError("parts must be pairwise disjoint")
            seen |= set(p)
        part_sets = [set(p) for p in parts]
        canon = []
        for e in self.edges:
            e = tuple(int(v) for v in e)
            if len(e) != len(parts):
                raise ValueError(f"edge {e} must have one vertex per part")
            for j, v in enumerate(e):
                if v not in part_sets[j]:
                    raise ValueError(f"edge {e}: vertex {v} not in part {j + 1}")
            canon.append(e)
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for p in self.parts for v in p))

    def part_of(self, v: int) -> int:
        """1-based part index of vertex v."""
        for j, p in enumerate(self.parts, start=1):
            if v in p:
                return j
        raise VertexRangeError(f"vertex {v} is in no part")

    def degree(self, v: int, within=None) -> int:
        """Number of edges containing v, optionally in a replacement family."""
        edges = self.edges if within is None else within
        return sum(1 for e in edges if v in e)

    def max_degree_last_part(self, within=None) -> int:
        edges = self.edges if within is None else tuple(within)
        if not edges:
            return 0
        counts = {}
        for e in edges:
            counts[e[-1]] = counts.get(e[-1], 0) + 1
        return max(counts.values())

    def tuple_universe(self, cap: int = COMPLEMENT_CAP):
        """All one-per-part tuples; SizeOverflowError beyond cap."""
        total = 1
        for p in self.parts:
            total *= len(p)
        if total > cap:
            raise SizeOverflowError(
                f"partite universe has {total} tuples, cap is {cap}"
            )
        out = [()]
        for p in self.parts:
            out = [t + (v,) for t in out for v in p]
        return out


def complement_partite(h: PartiteHypergraph, cap: int = COMPLEMENT_CAP) -> PartiteHypergraph:
    """Same parts, edge family replaced by its complement in the universe."""
    universe = h.tuple_universe(cap)
    present = h.edge_set
    return PartiteHypergraph(h.parts, tuple(t for t in universe if t not in present))


@dataclass(frozen=True)
class KUniformAccessStructure:
    """Qualified: supersets of an edge, or any set of size >= k+1."""

    base: Hypergraph
    kind: str = dc_field(default="k-uniform")

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n

    def universe(self) -> tuple[int, ...]:
        return self.base.vertices()

    def is_qualified(self, subset) -> bool:
        s = set(subset)
        if any(v < 1 or v > self.base.n for v in s):
            raise VertexRangeError("subset contains out-of-range vertices")
        if len(s) >= self.k + 1:
            return True
        if len(s) < self.k:
            return False
        return tuple(sorted(s)) in self.base.edge_set


@dataclass(frozen=True)
class PartiteEdgeStructure:
    """Leaf-level predicate: qualified = supersets of an edge tuple or size >= k+1.

    Leaf span programs realize this only up to sets of size k; sets of
    size >= k+1 become qualified after the threshold overlay.
    """

    base: PartiteHypergraph

    @property
    def k(self) -> int:
        return self.base.k

    def universe(self) -> tuple[int, ...]:
        return self.base.vertices()

    def is_qualified(self, subset) -> bool:
        s = set(subset)
        if len(s) >= self.k + 1:
            return True
        if len(s) < self.k:
            return False
        return any(set(e) == s for e in self.base.edges)


@dataclass(frozen=True)
class ThresholdStructure:
    """Qualified: any set of at least t of the n participants."""

    t: int
    n: int

    def universe(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def is_qualified(self, subset) -> bool:
        return len(set(subset)) >= self.t


def serialize(h) -> str:
    """Canonical text form; parse(serialize(h)) == h."""
    if isinstance(h, Hypergraph):
        lines = [f"kuniform {h.k} {h.n} {len(h.edges)}"]
        lines += [" ".join(str(v) for v in e) for e in h.edges]
    elif isinstance(h, PartiteHypergraph):
        lines = [f"kpartite {h.k} {len(h.edges)}"]
        for i, p in enumerate(h.parts, start=1):
            lines.append(f"part {i} {len(p)} " + " ".join(str(v) for v in p))
        lines += [" ".join(str(v) for v in e) for e in h.edges]
    else:
        raise TypeError(f"cannot serialize {type(h).__name__}")
    return "\n".join(lines) + "\n"


def parse(text: str):
    """Parse either text format; FormatError carries the offending line."""
    numbered = [
        (i, line.strip())
        for i, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not numbered:
        raise FormatError("empty input")
    ln, header = numbered[0]
    fields = header.split()
    if fields[0] == "kuniform":
        return _parse_uniform(fields, ln, numbered[1:])
    if fields[0] == "kpartite":
        return _parse_partite(fields, ln, numbered[1:])
    raise FormatError(f"unknown header {fields[0]!r}", line=ln)


def _ints(fields, ln):
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise FormatError(f"expected integers, got {fields!r}", line=ln) from None


def _parse_uniform(fields, ln, body):
    if len(fields) != 4:
        raise FormatError("header must be 'kuniform <k> <n> <m>'", line=ln)
    k, n, m = _ints(fields[1:], ln)
    if len(body) != m:
        raise FormatError(f"expected {m} edge lines, found {len(body)}", line=ln)
    edges = []
    seen = set()
    for eln, line in body:
        vs = _ints(line.split(), eln)
        if len(vs) != k:
            raise FormatError(f"edge needs {k} vertices", line=eln)
        if vs != sorted(vs) or len(set(vs)) != k:
            raise FormatError("edge vertices must be distinct and ascending", line=eln)
        if vs[0] < 1 or vs[-1] > n:
            raise VertexRangeError(f"line {eln}: vertex outside 1..{n}")
        t = tuple(vs)
        if t in seen:
            raise FormatError(f"duplicate edge {t}", line=eln)
        seen.add(t)
        edges.append(t)
    return Hypergraph(n=n, k=k, edges=tuple(edges))


def _parse_partite(fields, ln, body):
    if len(fields) != 3:
        raise FormatError("header must be 'kpartite <k> <m>'", line=ln)
    k, m = _ints(fields[1:], ln)
    if len(body) != k + m:
        raise FormatError(f"expected {k} part lines and {m} edge lines", line=ln)
    parts = []
    for idx in range(k):
        pln, line = body[idx]
        pf = line.split()
        if len(pf) < 3 or pf[0] != "part":
            raise FormatError("expected 'part <i> <size> <ids...>'", line=pln)
        vals = _ints(pf[1:], pln)
        i, size, ids = vals[0], vals[1], vals[2:]
        if i != idx + 1:
            raise FormatError(f"parts must appear in order, got part {i}", line=pln)
        if len(ids) != size:
            raise FormatError(f"part {i} declares {size} ids, lists {len(ids)}", line=pln)
        parts.append(tuple(ids))
    part_sets = [set(p) for p in parts]
    edges = []
    seen = set()
    for eln, line in body[k:]:
        vs = _ints(line.split(), eln)
        if len(vs) != k:
            raise FormatError(f"edge needs {k} vertices", line=eln)
        for j, v in enumerate(vs):
            if v not in part_sets[j]:
                raise VertexRangeError(f"line {eln}: vertex {v} not in part {j + 1}")
        t = tuple(vs)
        if t in seen:
            raise FormatError(f"duplicate edge {t}", line=eln)
        seen.add(t)
        edges.append(t)
    return PartiteHypergraph(parts=tuple(parts), edges=tuple(edges))
