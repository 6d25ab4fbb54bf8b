"""Command-line entry point: ``rfgrow <subcommand> [flags]``.

Exit codes: 0 success, 1 refusal (theorem hypotheses not met), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

from . import __version__
from .depth import (
    DEFAULT_MAX_DEGREE,
    DEFAULT_N_MAX,
    HypothesisRefusal,
    case_audit,
    depth_interval,
    rf_growth,
    theorem_verify,
)
from .finite import (
    FiniteGroupError,
    OrderCapExceeded,
    closure,
    derived_series,
    fitting_subgroup,
    fitting_via_cores,
    is_prime_power,
    is_solvable,
    lemma31_check,
    lower_central_series,
    parse_perms,
)
from .groups import GroupError, evaluate_word, format_element, parse_spec
from .metrics import ball, default_schedule, distortion_profile, word_length_bounds, word_length_exact
from .numtheory import witness_exponent


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"2..5"`` -> [2, 3, 4, 5]; ``"3"`` -> [3]."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected N or A..B") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def _positive(name: str, value):
    if value is not None and value < 1:
        raise UsageError(f"--{name} must be positive")
    return value


def _group(args):
    if not args.group:
        raise UsageError("--group is required")
    return parse_spec(args.group)


def _element(spec, args, required=True):
    if args.element is None:
        if required:
            raise UsageError("--element is required")
        return None
    return evaluate_word(spec, args.element)


# ---------------------------------------------------------------- handlers
# each returns (payload, rows) where rows feeds csv/table output

def cmd_ball(args):
    spec = _group(args)
    radius = _positive("radius", args.radius if args.radius is not None else 5)
    table = ball(spec, radius)
    rows = [{"radius": r, "sphere": table.counts[r] - (table.counts[r - 1] if r else 0), "ball": table.counts[r]}
            for r in range(len(table.counts))]
    return {"group": spec.label(), "radius": radius, "size": len(table), "complete": table.complete,
            "stopped_by": table.stopped_by, "counts": rows}, rows


def cmd_wordlen(args):
    spec = _group(args)
    g = _element(spec, args)
    iv = word_length_bounds(spec, g)
    exact = None
    if not iv.exact:
        exact = word_length_exact(spec, g, radius_cap=args.radius or 8, node_cap=500_000)
    out = dict(iv.to_dict(), group=spec.label(), element=format_element(spec, g),
               exact=iv.exact or exact is not None, bfs_length=exact)
    if exact is not None:
        out["lower"] = out["upper"] = exact
    return out, [{k: out[k] for k in ("lower", "upper", "exact", "upper_witness")}]


def cmd_distortion(args):
    spec = _group(args)
    g = _element(spec, args)
    k_max = _positive("k-max", args.k_max if args.k_max is not None else 2**64)
    ks = [k for k in default_schedule(max(k_max.bit_length(), 1)) if k <= k_max]
    prof = distortion_profile(spec, g, ks)
    return prof.to_dict(), prof.to_rows()


def cmd_depth(args):
    spec = _group(args)
    g = _element(spec, args)
    d = depth_interval(spec, g, args.budget, args.nmax, args.jobs)
    out = d.to_dict()
    out = {"lower": out["lower"], "upper": out["upper"], "exact": out["exact"], "group": spec.label(),
           "element": args.element, "budget": args.budget, "nmax": args.nmax,
           "certificates": out["certificates"]}
    return out, [{k: out[k] for k in ("lower", "upper", "exact")}]


def cmd_growth(args):
    spec = _group(args)
    radius = _positive("radius", args.radius if args.radius is not None else 2)
    table = rf_growth(spec, radius, args.budget, args.nmax, args.jobs)
    out = table.to_dict()
    return out, out["entries"]


def cmd_witness(args):
    if args.i is None:
        raise UsageError("--i is required")
    m = _positive("m", args.m if args.m is not None else 1)
    rows = []
    for i in parse_range(args.i):
        w = witness_exponent(i, m)
        rows.append({"i": i, "m": m, "p": w.prime, "alpha": str(w.value), "bound": w.claimed_depth_bound})
    if len(rows) == 1:
        return rows[0], rows
    return {"m": m, "witnesses": rows}, rows


def cmd_finite(args):
    if not args.perms:
        raise UsageError("--perms is required")
    try:
        gens = parse_perms(args.perms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    G = closure(gens)
    lcs = lower_central_series(G)
    ds = derived_series(G)
    out = {"order": G.order, "degree": G.degree, "abelian": G.is_abelian(),
           "nilpotent": lcs.terminates, "nilpotency_class": lcs.length if lcs.terminates else None,
           "lower_central_orders": [len(t) for t in lcs.terms],
           "solvable": ds.terminates, "derived_length": ds.length if ds.terminates else None,
           "derived_orders": [len(t) for t in ds.terms]}
    if is_solvable(G):
        F = fitting_subgroup(G)
        out["fitting_order"] = F.order
        out["fitting_agrees_with_cores"] = F.members == fitting_via_cores(G).members
    p = is_prime_power(G.order)
    if p is not None and G.order > 1:
        rep = lemma31_check(G)
        out["prime"] = p
        out["lemma31"] = {"step_length": rep.step_length, "bound": rep.bound, "holds": rep.holds}
    rows = [{"key": k, "value": json.dumps(v)} for k, v in out.items()]
    return out, rows


def cmd_theorem_verify(args):
    spec = _group(args)
    if args.element is not None:
        g = evaluate_word(spec, args.element)
        if g != spec.metadata().distinguished_element:
            raise HypothesisRefusal("no declared distorted element")
    i_range = parse_range(args.i or "2..8")
    rep = theorem_verify(spec, i_range)
    out = rep.to_dict()
    rows = [{k: v for k, v in p.items() if k != "alpha"} for p in out["points"]]
    return out, rows


def cmd_case_audit(args):
    spec = _group(args)
    x = _element(spec, args, required=False)
    if args.i is None:
        raise UsageError("--i is required")
    rows, reports = [], []
    for i in parse_range(args.i):
        rep = case_audit(spec, x, i, args.m, args.budget, args.jobs)
        d = rep.to_dict()
        reports.append(d)
        rows.append({k: d[k] for k in ("i", "p", "bound", "covered_below", "complete", "homs_checked",
                                        "passed")} | {"survivors": len(d["survivors"])})
    out = reports[0] if len(reports) == 1 else {"audits": reports}
    return out, rows


COMMANDS = {
    "ball": (cmd_ball, "BFS ball sizes"),
    "wordlen": (cmd_wordlen, "certified word-length interval"),
    "distortion": (cmd_distortion, "length profile of powers of an element"),
    "depth": (cmd_depth, "depth interval of an element"),
    "growth": (cmd_growth, "residual finiteness growth table"),
    "witness": (cmd_witness, "witness exponents alpha_i"),
    "finite-analyze": (cmd_finite, "series and Fitting subgroup of a permutation group"),
    "theorem-verify": (cmd_theorem_verify, "desk-scale check of the growth lower bound"),
    "case-audit": (cmd_case_audit, "exhaustive check of small quotients"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfgrow", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rfgrow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--group", help="group spec, e.g. bs:1:2, sol:2,1,1,1, ut3lamp:2, heis, z:3")
        p.add_argument("--element", help='word such as "t a t^-1"')
        p.add_argument("--radius", type=int)
        p.add_argument("--k-max", type=int, dest="k_max")
        p.add_argument("--budget", type=int, default=DEFAULT_MAX_DEGREE, help="max degree B for hom search")
        p.add_argument("--nmax", type=int, default=DEFAULT_N_MAX, help="largest congruence modulus")
        p.add_argument("--i", help="index or range A..B")
        p.add_argument("--m", type=int)
        p.add_argument("--perms", help='generators such as "(0 1 2);(0 1)"')
        p.add_argument("--format", choices=["json", "csv", "table"], default="json")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--reproducible", action="store_true", help="omit the timestamp")
        p.add_argument("--jobs", type=int, default=1)
    return parser


def _render_rows(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    fields = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    cells = [[str(f) for f in fields]] + [["" if r[f] is None else str(r[f]) for f in fields] for r in rows]
    widths = [max(len(c[j]) for c in cells) for j in range(len(fields))]
    return "\n".join("  ".join(c[j].rjust(widths[j]) for j in range(len(fields))) for c in cells) + "\n"


def render(payload: dict, rows: list[dict], fmt: str, reproducible: bool) -> str:
    if fmt == "json":
        if not reproducible:
            payload = dict(payload, generated=datetime.now(timezone.utc).isoformat(timespec="seconds"))
        return json.dumps(payload, indent=2) + "\n"
    return _render_rows(rows, fmt)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = COMMANDS[args.command][0]
    try:
        _positive("budget", args.budget)
        _positive("nmax", args.nmax)
        _positive("jobs", args.jobs)
        payload, rows = handler(args)
    except HypothesisRefusal as exc:
        print(f"rfgrow: refused: {exc.reason}", file=sys.stderr)
        if args.format == "json":
            _emit(json.dumps({"refused": True, "reason": exc.reason}, indent=2) + "\n", args.output)
        return 1
    except (UsageError, GroupError, FiniteGroupError, OrderCapExceeded, ValueError) as exc:
        print(f"rfgrow {args.command}: error: {exc}", file=sys.stderr)
        return 2
    _emit(render(payload, rows, args.format, args.reproducible), args.output)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
