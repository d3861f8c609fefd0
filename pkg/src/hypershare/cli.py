"""Batch command-line front end.

Commands: gen, build, share, reconstruct, audit, report. Every randomized
command takes --seed and is reproducible: identical invocations write
byte-identical files. Outputs are written atomically (temp file + rename).

Exit codes: 0 success, 1 audit violations or unexpected failure, 2 format
error, 3 not qualified, 4 cover failure, 5 partition failure, 6 enumeration
too large, 7 field too small, 8 target selection failure, 9 infeasible
count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile

from . import hypergraph as hg
from .errors import (
    EnumerationTooLargeError,
    FormatError,
    HyperShareError,
    InfeasibleCountError,
)
from .field import GF
from .msp import parse_msp, parse_shares, serialize_msp, serialize_shares
from .oracle import audit_acceptance
from .randomness import RandomTape
from .scheme import build_dense_uniform, build_sparse_uniform, pipeline_field


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> str:
    with open(path, "r") as f:
        return f.read()


def _parse_subset(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise FormatError(f"bad subset spec {text!r}; expected e.g. 1,4,7") from None


def _field_for(args, n: int) -> GF:
    if args.field == "auto":
        return pipeline_field(n)
    return GF(int(args.field))


def _sample_edges(n: int, k: int, count: int, tape: RandomTape):
    total = math.comb(n, k)
    if count > total:
        raise InfeasibleCountError(
            f"requested {count} edges but only {total} {k}-subsets of {n} exist"
        )
    if 2 * count > total:
        if total > (1 << 24):
            raise EnumerationTooLargeError(
                f"dense draw needs enumerating {total} k-sets"
            )
        import itertools

        universe = list(itertools.combinations(range(1, n + 1), k))
        return sorted(tape.sample(universe, count))
    chosen = set()
    while len(chosen) < count:
        pick = tuple(sorted(tape.sample(range(1, n + 1), k)))
        chosen.add(pick)
    return sorted(chosen)


def cmd_gen(args) -> int:
    n, k = args.n, args.k
    tape = RandomTape(args.seed, "gen")
    count = int(math.floor(n ** (1 + args.beta)))
    if args.mode == "sparse":
        edges = _sample_edges(n, k, count, tape)
    else:
        removed = set(_sample_edges(n, k, count, tape))
        import itertools

        if math.comb(n, k) > (1 << 24):
            raise EnumerationTooLargeError("dense generation needs k-set enumeration")
        edges = [
            e for e in itertools.combinations(range(1, n + 1), k) if e not in removed
        ]
    h = hg.Hypergraph(n=n, k=k, edges=tuple(edges))
    _write_atomic(args.out, hg.serialize(h))
    return 0


def cmd_build(args) -> int:
    h = hg.parse(_read(args.infile))
    if not isinstance(h, hg.Hypergraph):
        raise FormatError("build expects a kuniform hypergraph file")
    gf = _field_for(args, h.n)
    tape = RandomTape(args.seed, "build")
    if args.mode == "sparse":
        built = build_sparse_uniform(h, args.beta, tape, gf)
    else:
        built = build_dense_uniform(h, args.beta, tape, gf)
    _write_atomic(args.out + ".msp", serialize_msp(built.msp))
    _write_atomic(args.out + ".report", built.report.to_text(built.provenance))
    return 0


def cmd_share(args) -> int:
    msp = parse_msp(_read(args.infile))
    tape = RandomTape(args.seed, "share")
    bundle = msp.distribute(args.secret, tape)
    _write_atomic(args.out, serialize_shares(bundle))
    return 0


def cmd_reconstruct(args) -> int:
    msp = parse_msp(_read(args.infile))
    bundle = parse_shares(_read(args.shares))
    subset = _parse_subset(args.subset)
    secret = msp.reconstruct(subset, bundle)
    print(secret)
    return 0


def cmd_audit(args) -> int:
    h = hg.parse(_read(args.infile))
    if not isinstance(h, hg.Hypergraph):
        raise FormatError("audit expects a kuniform hypergraph file")
    msp = parse_msp(_read(args.scheme))
    structure = hg.KUniformAccessStructure(h)
    report = audit_acceptance(msp, structure, args.max_size)
    text = report.to_text()
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if not report.clean and h.k == 2:
        return 1
    return 0


def cmd_report(args) -> int:
    text = _read(args.infile)
    if "[values]" not in text:
        raise FormatError("not a scheme report (missing [values] section)")
    sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hypershare",
        description="linear secret sharing for k-uniform hypergraph access structures",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance file")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--beta", type=float, default=0.0)
    g.add_argument("--mode", choices=["sparse", "dense"], required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build a scheme from a hypergraph file")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--mode", choices=["sparse", "dense"], required=True)
    b.add_argument("--beta", type=float, default=0.0)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--field", default="auto", help="auto or an explicit prime")
    b.add_argument("--out", required=True, help="prefix for .msp and .report files")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("share", help="deal shares of a secret")
    s.add_argument("--in", dest="infile", required=True, help="scheme .msp file")
    s.add_argument("--secret", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_share)

    r = sub.add_parser("reconstruct", help="recover the secret from shares")
    r.add_argument("--in", dest="infile", required=True, help="scheme .msp file")
    r.add_argument("--shares", required=True)
    r.add_argument("--subset", required=True, help="comma-separated participant ids")
    r.set_defaults(func=cmd_reconstruct)

    a = sub.add_parser("audit", help="brute-force audit of scheme vs predicate")
    a.add_argument("--in", dest="infile", required=True, help="hypergraph file")
    a.add_argument("--scheme", required=True, help="scheme .msp file")
    a.add_argument("--max-size", type=int, default=3)
    a.add_argument("--out")
    a.set_defaults(func=cmd_audit)

    rp = sub.add_parser("report", help="print a stored scheme report")
    rp.add_argument("--in", dest="infile", required=True)
    rp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HyperShareError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ZeroDivisionError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
