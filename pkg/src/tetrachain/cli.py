"""Command-line front door: build chains, measure gaps, search, export meshes.

Every command is deterministic for a fixed configuration: rerunning writes
identical bytes.  Output files are written atomically (temp file + rename).

Exit codes: 0 success, 2 bad configuration, 3 precision failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from mpmath import mp, mpf

from . import __version__
from .bary import chain_matrix
from .embedding import verify_embedded
from .geometry import invisible_t0, realize_printed
from .metrics import gap_report, loop_gap_report, spectral_norm
from .motion import (
    closed_form_gap,
    decompose_motion,
    k_formula,
    leg_axis_cosines,
    motion_residuals,
)
from .precision import Constants, PrecisionError, RealCtx, make_constants, reduce_theta_multiple
from .search import babai_lll_search, continued_fraction_convergents, fixup_negative_x, lattice_table
from .strings import format_string, make_chain, parse_string


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _nstr(x, digits: int) -> str:
    with mp.workdps(digits + 5):
        return mp.nstr(mpf(x), digits, strip_zeros=True)


def _chain_spec(args):
    if getattr(args, "string", None):
        s = parse_string(args.string)
        return None, s
    if not args.kind:
        raise ValueError("either --string or --kind is required")
    spec = make_chain(args.kind, args.L)
    return spec, spec.string


# --- build --------------------------------------------------------------------


def _obj_mesh(chain) -> str:
    lines = ["# face-to-face tetrahedron chain", f"# tetrahedra: {len(chain.tetrahedra)}"]
    offset = 0
    for n, tet in enumerate(chain.tetrahedra, start=1):
        lines.append(f"o tet_{n:04d}")
        for v in tet.vertices:
            lines.append("v " + " ".join("%.17g" % float(x) for x in v))
        for a, b, c3 in ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)):
            lines.append(f"f {offset + a} {offset + b} {offset + c3}")
        offset += 4
    return "\n".join(lines) + "\n"


def cmd_build(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    spec, s = _chain_spec(args)
    chain = realize_printed(s, c)
    summary = {
        "kind": spec.kind if spec else "string",
        "param": spec.param if spec else None,
        "string": format_string(s),
        "length": len(s),
        "tetrahedra": len(chain.tetrahedra),
    }
    if spec and spec.kind == "preset540":
        loop = loop_gap_report(s, c)
        summary["gap_report"] = loop.best.to_json_dict()
        summary["loop"] = loop.to_json_dict()
    else:
        summary["gap_report"] = gap_report(s, c).to_json_dict()
    if args.format == "obj":
        out = args.out or f"{summary['kind']}_{summary['param'] or len(s)}.obj"
        _write_atomic(out, _obj_mesh(chain))
        summary["mesh"] = out
        sys.stdout.write(_json_text(summary))
    else:
        _emit(_json_text(summary), args.out)
    return 0


# --- gap ----------------------------------------------------------------------


def cmd_gap(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    spec, s = _chain_spec(args)
    if args.loop:
        loop = loop_gap_report(s, c)
        payload = {"string": format_string(s), "length": len(s), "loop": loop.to_json_dict()}
        _emit(_json_text(payload), args.out)
        return 0
    rep = gap_report(s, c, r0=args.r0)
    if args.format == "csv":
        text = rep.CSV_HEADER + "\n" + rep.to_csv_row() + "\n"
    else:
        payload = {"string": format_string(s), "length": len(s), "gap_report": rep.to_json_dict()}
        text = _json_text(payload)
    _emit(text, args.out)
    return 0


# --- tables -------------------------------------------------------------------


def _convergent_rows(c: Constants, L_max: int):
    count = 25
    while True:
        convs = continued_fraction_convergents(c, count)
        if convs[-1].q - 1 > L_max:
            break
        count += 15
    rows = []
    seen = set()
    for conv in convs:
        L = conv.q - 1
        if L < 1 or L > L_max or L in seen:
            continue
        seen.add(L)
        rows.append(L)
    return rows


def cmd_table1(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    lines = ["L,k,delta_bar,gap"]
    for L in _convergent_rows(c, args.L_max):
        if L <= args.exact_threshold:
            delta_bar, k = reduce_theta_multiple(L + 1, ctx)
            rep = gap_report(make_chain("quadrahelix", L).string, c)
            gap = rep.gap
        else:
            cf = closed_form_gap(L, ctx, c)
            delta_bar, k, gap = cf.delta_bar, cf.k, cf.gap
        lines.append(f"{L},{k},{_nstr(delta_bar, 8)},{_nstr(gap, 8)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_table2(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    sols = lattice_table(c, ctx)
    lines = ["X,x,y,err,log10_err,kronecker_ok"]
    with ctx.work():
        for twice_i, sol in zip(range(4, 14), sols):
            X = mp.power(10, mpf(twice_i) / 2)
            lines.append(
                f"{_nstr(X, 6)},{sol.x},{sol.y},{_nstr(sol.err, 8)},"
                f"{_nstr(mp.log10(sol.err), 6)},{sol.kronecker_ok}"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# --- searches -----------------------------------------------------------------


def cmd_search_cf(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    convs = continued_fraction_convergents(c, args.count)
    if args.format == "json":
        payload = [
            {"k": conv.k, "q": conv.q, "L": conv.L, "err": float(conv.err)}
            for conv in convs
        ]
        _emit(_json_text(payload), args.out)
    else:
        lines = ["k,q,L,err"]
        for conv in convs:
            lines.append(f"{conv.k},{conv.q},{conv.L},{_nstr(conv.err, 8)}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_search_lll(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    with ctx.work():
        X = mpf(args.X)
        gamma = c.gamma_plus if args.target == "gamma_plus" else c.gamma_minus
        sol = babai_lll_search(c.theta, c.two_pi, gamma, X, ctx, target=args.target)
        if sol.x < 0:
            sol = fixup_negative_x(sol, c)
        payload = {
            "X": float(X),
            "x": sol.x,
            "y": sol.y,
            "err": float(sol.err),
            "log10_err": float(mp.log10(sol.err)) if sol.err > 0 else None,
            "kronecker_ok": sol.kronecker_ok,
            "target": sol.target,
        }
    _emit(_json_text(payload), args.out)
    return 0


# --- verification and scans ----------------------------------------------------


def cmd_verify_embed(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    spec, s = _chain_spec(args)
    chain = realize_printed(s, c)
    eps = mpf(args.eps) if args.eps is not None else None
    verdict = verify_embedded(chain, eps=eps, ctx=ctx)
    payload = {"string": format_string(s), "length": len(s)}
    payload.update(verdict.to_json_dict())
    _emit(_json_text(payload), args.out)
    return 0 if verdict.embedded and verdict.adjacency_ok else 4


def cmd_scan_ratio(args) -> int:
    ctx = RealCtx(digits=args.digits)
    lines = ["L,delta_bar,norm_gap,ratio"]
    with ctx.work():
        for L in range(4, args.L_max + 1):
            delta_bar, _ = reduce_theta_multiple(L + 1, ctx)
            K = k_formula(L, ctx, delta_bar=delta_bar)
            diff = [[K[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
            norm = spectral_norm(diff, ctx)
            ratio = norm / (mpf(L) * delta_bar**2)
            lines.append(
                f"{L},{_nstr(delta_bar, 8)},{_nstr(norm, 8)},{_nstr(ratio, 8)}"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_motion(args) -> int:
    ctx = RealCtx(digits=args.digits)
    c = make_constants(ctx)
    spec, s = _chain_spec(args)
    if spec and spec.kind == "quadrahelix":
        K = k_formula(spec.param, ctx)
    else:
        K = chain_matrix(s).to_mpf(ctx)
    with ctx.work():
        motion = decompose_motion(K, invisible_t0(c), ctx)
        res = motion_residuals(motion, ctx)
        d = ctx.digits
        payload = {
            "string": format_string(s),
            "R": [[_nstr(x, d) for x in row] for row in motion.R],
            "t": [_nstr(x, d) for x in motion.t],
            "w": None if motion.w is None else [_nstr(x, d) for x in motion.w],
            "u": None if motion.u is None else [_nstr(x, d) for x in motion.u],
            "angle": _nstr(motion.angle, d),
            "residuals": {k: float(v) for k, v in res.items()},
        }
        if spec and spec.kind in ("quadrahelix", "octahelix") and len(s) <= 5000:
            chain = realize_printed(s, c)
            payload["leg_axis_cosines"] = [
                _nstr(x, 12) for x in leg_axis_cosines(chain, c)
            ]
    _emit(_json_text(payload), args.out)
    return 0


# --- argument plumbing ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, chain: bool = False) -> None:
    p.add_argument("--digits", type=int, default=40, help="working precision (>= 30)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    if chain:
        p.add_argument(
            "--kind",
            choices=["tetrahelix", "quadrahelix", "octahelix", "preset540"],
            default=None,
        )
        p.add_argument("--L", type=int, default=None, help="chain parameter (m for tetrahelix)")
        p.add_argument("--string", default=None, help="explicit digit string, e.g. 1234")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tetrachain",
        description="Face-to-face tetrahedron chains: build, measure, search, verify.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="realize a chain, write a mesh and a JSON summary")
    _add_common(p, chain=True)
    p.add_argument("--format", choices=["obj", "json"], default="obj")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("gap", help="closure metrics of a chain")
    _add_common(p, chain=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--r0", type=int, default=None, help="pin the free leading face")
    p.add_argument("--loop", action="store_true", help="scan all cyclic cut points")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("table1", help="closure survey over convergent denominators")
    _add_common(p)
    p.add_argument("--L-max", dest="L_max", type=int, default=6163435)
    p.add_argument(
        "--exact-threshold",
        dest="exact_threshold",
        type=int,
        default=4000,
        help="largest L evaluated by exact products (closed form above)",
    )
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("table2", help="lattice-reduction solutions for X = 10^2 .. 10^6.5")
    _add_common(p)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("search-cf", help="continued-fraction convergents of the turn angle")
    _add_common(p)
    p.add_argument("--count", type=int, default=21)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_search_cf)

    p = sub.add_parser("search-lll", help="one Babai/LLL approximation at scale X")
    _add_common(p)
    p.add_argument("--X", required=True, help="scale parameter, e.g. 1e4")
    p.add_argument(
        "--target", choices=["gamma_plus", "gamma_minus"], default="gamma_plus"
    )
    p.set_defaults(func=cmd_search_lll)

    p = sub.add_parser("verify-embed", help="certify pairwise-disjoint interiors")
    _add_common(p, chain=True)
    p.add_argument("--eps", default=None, help="separation tolerance")
    p.set_defaults(func=cmd_verify_embed)

    p = sub.add_parser("scan-ratio", help="norm-gap / (L delta^2) ratio sweep")
    _add_common(p)
    p.add_argument("--L-max", dest="L_max", type=int, default=200)
    p.set_defaults(func=cmd_scan_ratio)

    p = sub.add_parser("motion", help="rotation/translation/axis of the chain map")
    _add_common(p, chain=True)
    p.set_defaults(func=cmd_motion)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PrecisionError as e:
        print(f"precision failure: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
