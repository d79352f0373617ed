"""Command-line front end.

    freeinv ball --rank 2 --radius 2
    freeinv fseq --system sys.json --partition canonical --nmax 1
    freeinv invariance --system sys.json
    freeinv owfactor --radius 1 --format json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any

from .factor import identity_map, ornstein_weiss_map, verify_equivariance, verify_pushforward
from .finvariant import DEFAULT_BERNOULLI_NMAX, f_estimate, f_sequence, invariance_check
from .freegroup import ball, ball_size, generators, identity, parse_word
from .jsonio import (
    certificate_to_json,
    load_system,
    pushforward_to_json,
    resolve_partition,
    window_map_from_json,
)
from .partitions import conditional_entropy, entropy, point_partition, rokhlin_distance, to_unit
from .splittings import connected_split, find_equivalence, replay
from .systems import DEFAULT_BUDGET, BernoulliSystem, BudgetExceeded, FiniteSystem

FORMATS = ("table", "csv", "json")


def num(x: float) -> str:
    return format(x, ".12g")


class Output:
    """Collects one command's result and renders it once."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.rows: list[list[Any]] = []
        self.header: list[str] = []
        self.data: dict = {}
        self.lines: list[str] = []

    def render(self) -> str:
        if self.fmt == "json":
            return json.dumps(self.data, indent=2) + "\n"
        if self.fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.header:
                w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        out = list(self.lines)
        if self.rows:
            table = [self.header] + [[str(c) for c in r] for r in self.rows]
            widths = [max(len(str(r[i])) for r in table) for i in range(len(self.header))]
            for r in table:
                out.append("  ".join(str(c).ljust(wd) for c, wd in zip(r, widths)).rstrip())
        return "\n".join(out) + "\n"


def _load(args):
    if not args.system:
        raise ValueError("--system FILE is required")
    return load_system(args.system, budget=args.budget)


def _partitions(args, system, named, count=None, default=None):
    selectors = args.partition or default or []
    if count is not None and len(selectors) != count:
        raise ValueError(f"expected {count} --partition selector(s), got {len(selectors)}")
    return [(s, resolve_partition(system, named, s)) for s in selectors]


def cmd_ball(args, out: Output) -> None:
    if args.rank is None or args.rank < 1:
        raise ValueError("--rank must be a positive integer")
    b = ball(args.rank, args.radius)
    words = [str(w) for w in b.elements]
    out.data = {"rank": args.rank, "radius": args.radius, "size": len(words), "closed_form": ball_size(args.rank, args.radius), "words": words}
    out.header = ["word"]
    out.rows = [[w] for w in words]
    out.lines = [f"|B(e,{args.radius})| = {len(words)} (rank {args.rank})"]


def cmd_entropy(args, out: Output) -> None:
    system, named = _load(args)
    parts = _partitions(args, system, named, default=list(named) or ["trivial"])
    out.header = ["partition", "atoms", "entropy"]
    for name, p in parts:
        out.rows.append([name, p.n_atoms, num(entropy(p, args.unit))])
    out.data = {"unit": args.unit, "entropies": {n: float(h) for n, _, h in out.rows}}


def cmd_rokhlin(args, out: Output) -> None:
    system, named = _load(args)
    (na, a), (nb, b) = _partitions(args, system, named, count=2)
    hab, hba = conditional_entropy(a, b, args.unit), conditional_entropy(b, a, args.unit)
    d = rokhlin_distance(a, b, args.unit)
    out.data = {"unit": args.unit, "a": na, "b": nb, "H(a|b)": float(num(hab)), "H(b|a)": float(num(hba)), "distance": float(num(d))}
    out.header = ["quantity", "value"]
    out.rows = [["H(a|b)", num(hab)], ["H(b|a)", num(hba)], ["d(a,b)", num(d)]]


def cmd_fseq(args, out: Output) -> None:
    system, named = _load(args)
    [(name, p)] = _partitions(args, system, named, count=1)
    n_max = args.nmax
    if n_max is None and isinstance(system, BernoulliSystem):
        n_max = DEFAULT_BERNOULLI_NMAX
    seq = f_sequence(p, n_max)
    est = f_estimate(p, n_max)
    last = seq.values[-1][0]
    out.header = ["n", "F_value", "stabilized"]
    out.rows = [[n, num(to_unit(v, args.unit)), str(seq.stabilized and n == last).lower()] for n, v in seq.values]
    out.data = {
        "partition": name,
        "sequence": [{"n": n, "F": float(num(to_unit(v, args.unit)))} for n, v in seq.values],
        "stabilized": seq.stabilized,
        "budget_exceeded": seq.budget_exceeded,
        "summary": {**est.as_dict(args.unit), "f": float(num(to_unit(est.value, args.unit)))},
    }
    out.lines = [f"f <= {num(to_unit(est.value, args.unit))} {args.unit} (exact: {str(est.exact).lower()})"]
    if seq.budget_exceeded:
        out.lines.append("enumeration budget reached; sequence truncated")


def cmd_invariance(args, out: Output) -> None:
    system, named = _load(args)
    if not isinstance(system, FiniteSystem):
        raise ValueError("invariance needs a finite system")
    if args.partition:
        parts = dict(_partitions(args, system, named))
    else:
        parts = {"points": point_partition(system), **named}
    rep = invariance_check(system, parts, args.nmax)
    out.header = ["partition", "f", "n_reached", "exact", "status"]
    for name in parts:
        if name in rep.values:
            e = rep.values[name]
            out.rows.append([name, num(to_unit(e.value, args.unit)), e.n_reached, str(e.exact).lower(), "ok"])
        else:
            out.rows.append([name, "", "", "", f"excluded: {rep.excluded[name]}"])
    verdict = "PASS" if rep.passed else "FAIL"
    out.lines = [f"{verdict}: max discrepancy {num(to_unit(rep.discrepancy, args.unit))} {args.unit}"]
    out.data = {
        "unit": args.unit,
        "values": {n: {"f": float(num(to_unit(e.value, args.unit))), "n_reached": e.n_reached, "exact": e.exact} for n, e in rep.values.items()},
        "excluded": rep.excluded,
        "discrepancy": float(num(to_unit(rep.discrepancy, args.unit))),
        "passed": rep.passed,
    }


def cmd_split(args, out: Output) -> None:
    system, named = _load(args)
    (na, a), (nb, b) = _partitions(args, system, named, count=2)
    if args.words:
        words = [parse_word(t, system.rank) for t in args.words.split(",")]
    else:
        words = ball(system.rank, args.radius).elements
    cert = connected_split(a, b, words)
    check = replay(cert)
    out.data = {"certificate": certificate_to_json(cert), "valid": check.valid}
    out.header = ["step", "s", "merge"]
    out.rows = [[i, str(st.s), " ".join(f"{k}->{v}" for k, v in sorted(st.merge.items()))] for i, st in enumerate(cert.steps)]
    out.lines = [f"{len(cert.steps)} simple splittings from {na} to {na} v F^-1 {nb}; replay valid: {str(check.valid).lower()}"]


def cmd_equiv(args, out: Output) -> None:
    system, named = _load(args)
    (na, a), (nb, b) = _partitions(args, system, named, count=2)
    w = find_equivalence(a, b, args.max_radius)
    if w is None:
        out.data = {"found": False, "max_radius": args.max_radius}
        out.lines = [f"no witness up to radius {args.max_radius} (inconclusive)"]
    else:
        out.data = {"found": True, "l": w.l, "m": w.m}
        out.lines = [f"{na} <= {nb}^{w.l} and {nb} <= {na}^{w.m}"]
        out.header = ["l", "m"]
        out.rows = [[w.l, w.m]]


def cmd_owfactor(args, out: Output) -> None:
    if args.map == "ow":
        wmap = ornstein_weiss_map()
    elif args.map == "identity":
        wmap = identity_map((0, 1), 2)
    else:
        with open(args.map) as fh:
            wmap = window_map_from_json(json.load(fh))
    k_in, k_out = len(wmap.input_alphabet), len(wmap.output_alphabet)
    source = BernoulliSystem(wmap.input_alphabet, [f"1/{k_in}"] * k_in, wmap.rank, budget=args.budget)
    target = BernoulliSystem(wmap.output_alphabet, [f"1/{k_out}"] * k_out, wmap.rank, budget=args.budget)
    window = ball(wmap.rank, args.radius).elements
    rep = verify_pushforward(wmap, source, target, window)
    e = [identity(wmap.rank)]
    equi = {str(s): verify_equivariance(wmap, s, e, budget=args.budget) for s in generators(wmap.rank)[::2]}
    out.data = {"pushforward": pushforward_to_json(rep), "equivariance": equi}
    out.lines = [
        f"output window B(e,{args.radius}): {len(window)} coordinates, {rep.n_inputs} inputs enumerated",
        f"pushforward equals target product measure: {str(rep.exact_match).lower()}",
    ] + [f"equivariant under {s} on W={{e}}: {str(v).lower()}" for s, v in equi.items()]
    out.header = ["check", "result"]
    out.rows = [["pushforward", str(rep.exact_match).lower()]] + [[f"equivariance_{s}", str(v).lower()] for s, v in equi.items()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", metavar="FILE")
    common.add_argument("--partition", metavar="NAME|INDEX", action="append")
    common.add_argument("--nmax", type=int)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--unit", choices=("nats", "bits"), default="nats")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--out", metavar="FILE")

    parser = argparse.ArgumentParser(prog="freeinv", description="f-invariant toolkit for free-group actions")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ball", parents=[common], help="list the ball B(e, n)")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_ball)
    sub.add_parser("entropy", parents=[common], help="entropy of partitions").set_defaults(func=cmd_entropy)
    sub.add_parser("rokhlin", parents=[common], help="Rokhlin distance of two partitions").set_defaults(func=cmd_rokhlin)
    sub.add_parser("fseq", parents=[common], help="the sequence F(alpha^n)").set_defaults(func=cmd_fseq)
    sub.add_parser("invariance", parents=[common], help="compare f over generating partitions").set_defaults(func=cmd_invariance)
    p = sub.add_parser("split", parents=[common], help="splitting certificate for alpha v F^-1 beta")
    p.add_argument("--words", help="comma-separated connected set F containing 1")
    p.add_argument("--radius", type=int, default=1, help="use F = B(e, radius) when --words is absent")
    p.set_defaults(func=cmd_split)
    p = sub.add_parser("equiv", parents=[common], help="search for a combinatorial-equivalence witness")
    p.add_argument("--max-radius", type=int, default=3)
    p.set_defaults(func=cmd_equiv)
    p = sub.add_parser("owfactor", parents=[common], help="verify the Ornstein-Weiss factor map on a window")
    p.add_argument("--radius", type=int, default=0)
    p.add_argument("--map", default="ow", help="ow, identity, or a window-map JSON file")
    p.set_defaults(func=cmd_owfactor)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.nmax is not None and args.nmax < 0:
        print("error: --nmax must be nonnegative", file=sys.stderr)
        return 2
    if args.budget < 1:
        print("error: --budget must be at least 1", file=sys.stderr)
        return 2
    out = Output(args.format)
    try:
        args.func(args, out)
    except (ValueError, TypeError, BudgetExceeded, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = out.render()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
