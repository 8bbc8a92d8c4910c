"""Command-line front end.

Exit codes: 0 all assertions passed, 1 a mathematical assertion failed,
2 usage or input error.  Results go to stdout, progress to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import bott_complex as bc
from . import git_stability as gs
from . import invariants as inv
from .graph_calc import Tableau, enumerate_standard, straighten
from .polyring import Multidegree

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("bottgit")


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    """Published JSON schema for the ``--json`` output of a subcommand (e.g. "bott_report")."""
    from importlib.resources import files

    return json.loads(files("bottgit").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8"))


def default_cache_dir() -> Path:
    env = os.environ.get(inv.CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_DATA_HOME") or os.path.join(os.path.expanduser("~"), ".local", "share")
    return Path(base) / "bottgit"


def _degrees(text: str) -> tuple[int, ...]:
    try:
        d = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    return d


def _polarization(d: tuple[int, ...], min_n: int = 1) -> gs.Polarization:
    if any(x < 1 for x in d):
        raise UsageError(f"degrees must be positive integers, got {','.join(map(str, d))}")
    if len(d) < min_n:
        raise UsageError(f"need at least {min_n} factors, got {len(d)}")
    return gs.Polarization(d)


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# -- subcommands ---------------------------------------------------------------------

def cmd_stability(args) -> int:
    p = _polarization(args.d)
    witness = gs.balanced_subset(p)
    out = {
        "d": list(p.d),
        "n": p.n,
        "sum": p.total,
        "strictly_semistable": witness is not None,
        "balanced_subset": list(witness) if witness is not None else None,
        "empty_quotient": gs.quotient_is_empty(p),
    }
    if args.json:
        _emit_json(out)
    elif witness is not None:
        print(f"d={p}: strictly semistable locus present (I = {{{','.join(map(str, witness))}}} balances)")
    else:
        note = " (every point unstable: empty quotient)" if out["empty_quotient"] else ""
        print(f"d={p}: stable, no strictly semistable locus{note}")
    return EXIT_OK


def cmd_strata(args) -> int:
    p = _polarization(args.d)
    rows = gs.strata(p)
    if args.json:
        _emit_json({"d": list(p.d), "strata": [s.to_dict() for s in rows]})
        return EXIT_OK
    print(f"{'heavy set':<24} {'mu':>4} {'eta':>4}")
    for s in rows:
        print(f"{'{' + ','.join(map(str, s.heavy_set)) + '}':<24} {s.mu:>4} {s.eta:>4}")
    return EXIT_OK


def cmd_dims(args) -> int:
    if any(x < 0 for x in args.l) or args.sym < 0 or args.v0 < 0:
        raise UsageError("grades must be nonnegative")
    l = Multidegree(args.sym, args.v0, args.l)
    dim = inv.invariant_dim(l)
    basis = inv.invariant_basis(l)
    out = {"degree": l.key(), "invariant_dim": dim, "basis_size": basis.dim}
    if args.sym == 0:
        out["standard_tableaux"] = len(enumerate_standard(l))
    if args.json:
        _emit_json(out)
    else:
        print(f"{l}: invariant_dim={dim} basis_size={basis.dim}", end="")
        print(f" standard_tableaux={out['standard_tableaux']}" if "standard_tableaux" in out else "")
    agree = dim == basis.dim and out.get("standard_tableaux", dim) == dim
    return EXIT_OK if agree else EXIT_FAIL


def cmd_straighten(args) -> int:
    try:
        t = Tableau.parse(args.tableau, args.form)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = straighten(t)
    if args.json:
        _emit_json({
            "input": t.to_text(args.form),
            "terms": [{"coefficient": str(c), "tableau": s.to_text(args.form)} for s, c in g.sorted_terms()],
        })
    else:
        print(g.to_text(args.form))
    return EXIT_OK


def cmd_complex(args) -> int:
    p = _polarization(args.d, 3)
    if args.j < 0:
        raise UsageError("j must be nonnegative")
    bc._require_valid(p)
    c = bc.build_Fbar(p, args.j) if args.bar else bc.build_F(p, args.j)
    h = bc.cohomology_dims(c)
    out = {
        "d": list(p.d),
        "j": args.j,
        "kind": c.kind,
        "term_dims": c.dims,
        "cohomology_dims": h,
        "euler": c.euler(),
    }
    if args.json:
        _emit_json(out)
    else:
        print(f"{c.kind}(d={p}, j={args.j})")
        print(f"  term dims       {c.dims}")
        print(f"  cohomology dims {h}")
        print(f"  euler           {c.euler()}")
    return EXIT_OK


def cmd_verify_bott(args) -> int:
    p = _polarization(args.d, 3)
    report = bc.verify_bott(p, j_max=args.jmax, progress=None if args.quiet else _progress)
    if args.json:
        _emit_json(report.to_dict(timing=args.timing))
    else:
        print(f"d={p}  n={report.n}  dim Y={report.dim_y}")
        for r in report.per_j:
            tag = "exact" if r.expect_exact else "H^i>0 vanish"
            print(
                f"  j={r.j}: terms {r.term_dims}  H {r.cohomology_dims}  euler {r.euler}  "
                f"[{tag}: {'ok' if r.ok else 'FAIL'}]"
            )
        print(f"verdict: {'true' if report.verdict else 'false'}")
        if args.timing:
            print(f"wall clock: {report.wall_clock_ms:.0f} ms")
    return EXIT_OK if report.verdict else EXIT_FAIL


def cmd_scan_claim(args) -> int:
    if args.nmax < 1 or args.dmax < 1:
        raise UsageError("--nmax and --dmax must be positive")
    report = gs.scan_degree_claim(args.nmax, args.dmax)
    sys.stdout.write(report.to_csv(include_unstable=args.all))
    bad = report.counterexamples
    if not args.quiet:
        _progress(f"checked {report.checked} stable even-sum vectors, {len(bad)} counterexamples")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_weights(args) -> int:
    p = _polarization(args.d)
    if args.j < 0:
        raise UsageError("j must be nonnegative")
    report = gs.fixed_point_weight_report(p, args.j)
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(f"d={p}  j={args.j}")
        print(f"{'heavy set':<20} {'mu':>4} {'eta':>4} {'L wt':>5} {'max term':>8} {'total':>6}  below eta")
        for s in report.strata:
            hs = "{" + ",".join(map(str, s.stratum.heavy_set)) + "}"
            print(
                f"{hs:<20} {s.stratum.mu:>4} {s.stratum.eta:>4} {s.line_bundle_weight:>5} "
                f"{str(s.max_term_weight):>8} {str(s.total_max):>6}  {'yes' if s.below_eta else 'no (diagnostic)'}"
            )
    return EXIT_OK if report.all_line_bundle_negative else EXIT_FAIL


def cmd_cache(args) -> int:
    d = inv.cache_dir()
    if args.clear:
        removed = inv.clear_disk_cache()
        print(f"removed {removed} cached bases from {d}")
    else:
        stats = inv.cache_stats()
        if args.json:
            _emit_json(stats)
        else:
            for k, v in stats.items():
                print(f"{k}: {v}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bottgit", description=__doc__.splitlines()[0])
    ap.add_argument("--cache-dir", help=f"invariant-basis cache (default: ${inv.CACHE_ENV} or ~/.local/share/bottgit)")
    ap.add_argument("--no-cache", action="store_true", help="do not read or write the on-disk cache")
    ap.add_argument("-q", "--quiet", action="store_true", help="no progress output on stderr")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("stability", cmd_stability, "strictly semistable test")
    sp.add_argument("--d", type=_degrees, required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("strata", cmd_strata, "unstable strata (heavy sets, mu, eta)")
    sp.add_argument("--d", type=_degrees, required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("dims", cmd_dims, "invariant dimension and basis size")
    sp.add_argument("--l", type=_degrees, required=True, help="factor degrees")
    sp.add_argument("--sym", type=int, default=0, help="degree in X0, Y0, Z0")
    sp.add_argument("--v0", type=int, default=0, help="degree in the vertex-0 slot")
    sp.add_argument("--json", action="store_true")

    sp = add("straighten", cmd_straighten, "standard expansion of a tableau")
    sp.add_argument("--tableau", required=True, help='edge list "[[1,3],[2,4]]" (or 2 x m rows, see --form)')
    sp.add_argument(
        "--form", choices=("edges", "rows"), default="edges",
        help='input and output layout: edge pairs, or "[[sources],[targets]]"',
    )
    sp.add_argument("--json", action="store_true")

    sp = add("complex", cmd_complex, "term and cohomology dimensions of F or Fbar")
    sp.add_argument("--d", type=_degrees, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--bar", action="store_true", help="the partial complex Fbar")
    sp.add_argument("--json", action="store_true")

    sp = add("verify-bott", cmd_verify_bott, "cohomology of F(j) for j = 0..n-2")
    sp.add_argument("--d", type=_degrees, required=True)
    sp.add_argument("--jmax", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--timing", action="store_true", help="include wall-clock times (output no longer reproducible)")

    sp = add("scan-claim", cmd_scan_claim, "check sum(d) >= 2n over stable even-sum d (CSV)")
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--dmax", type=int, required=True)
    sp.add_argument("--all", action="store_true", help="also list strictly semistable vectors")

    sp = add("weights", cmd_weights, "fixed-point weight report")
    sp.add_argument("--d", type=_degrees, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("cache", cmd_cache, "manage the invariant-basis cache")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--clear", action="store_true")
    g.add_argument("--stats", action="store_true")
    sp.add_argument("--json", action="store_true")
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.no_cache:
        inv.set_cache_dir(None)
    else:
        inv.set_cache_dir(Path(args.cache_dir) if args.cache_dir else default_cache_dir())
    try:
        return args.func(args)
    except (UsageError, gs.StrictlySemistableError, bc.OddDegreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except bc.VerificationError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
