"""Command-line front end: ``sqrt-atlas analyze|sqrt|certify``."""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import report as rp
from .errors import CertificationFailure, ParseError, SqrtAtlasError
from .numkit import DEFAULT_TOL, Tolerances

TOL_ENV = "SQRT_ATLAS_TOL"


def read_matrix(path: str) -> np.ndarray:
    """Read a JSON ``{"n", "rows"}`` file or whitespace-delimited text (``-`` is stdin)."""
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc.strerror}") from exc
    return parse_matrix(text)


def parse_matrix(text: str) -> np.ndarray:
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty matrix file")
    try:
        if stripped.startswith("{"):
            obj = json.loads(stripped)
            rows = obj["rows"]
            n = int(obj.get("n", len(rows)))
        else:
            rows = [line.split() for line in stripped.splitlines() if line.strip()]
            n = len(rows)
        A = np.array(rows, dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed matrix: {exc}") from exc
    if A.ndim != 2 or A.shape != (n, n) or n == 0:
        raise ParseError(f"expected a square {n}x{n} matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise ParseError("matrix has non-finite entries")
    return A


def matrix_json(A) -> dict:
    A = np.asarray(A)
    return {"n": A.shape[0], "rows": rp.matrix_rows(A)}


def _tolerances(flag: float | None) -> Tolerances:
    value = flag
    if value is None and os.environ.get(TOL_ENV):
        try:
            value = float(os.environ[TOL_ENV])
        except ValueError as exc:
            raise ParseError(f"{TOL_ENV} is not a number") from exc
    if value is None:
        return DEFAULT_TOL
    if not value > 0:
        raise ParseError("tolerance must be positive")
    return Tolerances.from_resid(value)


def _grid(text: str | None):
    if text is None:
        return rp.geo.DEFAULT_GRID
    try:
        grid = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ParseError(f"malformed geodesic grid {text!r}") from exc
    if not grid:
        raise ParseError("empty geodesic grid")
    return grid


def _fmt_index(d: dict) -> str:
    u = ",".join(map(str, d["u"]))
    mu = "/".join(",".join(map(str, g)) for g in d["mu"])
    return f"u=({u})" + (f" mu=({mu})" if mu else "")


def _table(title, rows, cols):
    out = [title]
    widths = [max(len(c), *(len(str(r[i])) for r in rows)) if rows else len(c) for i, c in enumerate(cols)]
    out.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
    out += ["  ".join(str(v).ljust(w) for v, w in zip(r, widths)) for r in rows]
    return out


def pretty_analysis(r: dict) -> str:
    lines = [f"order {r['input']['order']}  |M|_F {r['input']['frobeniusNorm']:.6g}  det {r['input']['det']:.6g}",
             f"mode {r['mode']}  {r['summary']}"]
    g = r["general"]
    rows = [(_fmt_index(b["index"]), b["dimension"], "yes" if b["principal"] else "",
             b["componentCount"] if b["componentCount"] is not None else "-", f"{b['residual']:.2e}")
            for b in g["branches"]]
    lines += _table(f"general branches ({g['branchCount']}, principal components {g['psrComponents']})",
                    rows, ("index", "dim", "principal", "components", "residual"))
    if "symmetric" in r:
        s = r["symmetric"]
        rows = [(_fmt_index(b["index"]), b["dimension"], tuple(b["signature"]), f"{b['residual']:.2e}")
                for b in s["branches"]]
        lines += _table(f"symmetric branches (components {s['componentCount']})", rows,
                        ("index", "dim", "signature", "residual"))
    if "orthogonal" in r:
        o = r["orthogonal"]
        rows = [(_fmt_index(b["index"]), b["dimension"], b["detSign"], b["componentCount"], f"{b['residual']:.2e}")
                for b in o["branches"]]
        lines += _table("orthogonal branches", rows, ("index", "dim", "det", "components", "residual"))
    c = r["certifications"]
    lines.append(f"fixed point {c['fixedPoint']}  oracle dimension {c['oracleDimension']}  "
                 f"totally geodesic {c['totallyGeodesic']}")
    return "\n".join(lines)


def pretty_certify(r: dict) -> str:
    rows = [(_fmt_index(c["index"]), c["restriction"], c["at"], c["dimension"], c["oracleDimension"],
             f"{c['geodesicMaxResidual']:.2e}", "ok" if c["passed"] else "FAIL") for c in r["checks"]]
    lines = _table(f"mode {r['mode']}  budget {r['budget']:.2e}", rows,
                   ("index", "restriction", "at", "dim", "oracle", "geodesic", "status"))
    if "principalVsIteration" in r:
        lines.append(f"principal root vs iteration: {r['principalVsIteration']['relativeError']:.2e}")
    for p in r.get("pfaffianComponents", []):
        comps = "  ".join(f"{k}: {v['pfaffianSigns']}" for k, v in p["components"].items())
        lines.append(f"pfaffian signs {_fmt_index(p['index'])}  {comps}")
    lines.append("PASSED" if r["passed"] else f"FAILED; worst: {r['worst']}")
    return "\n".join(lines)


def _emit(obj, pretty_text, args):
    if args.pretty:
        print(pretty_text)
    else:
        print(json.dumps(obj, sort_keys=True))


def _cmd_analyze(args):
    M = read_matrix(args.path)
    r = rp.analyze(M, _tolerances(args.tol), args.seed, args.mode)
    _emit(r, pretty_analysis(r) if args.pretty else None, args)
    return 0


def _cmd_sqrt(args):
    M = read_matrix(args.path)
    tol = _tolerances(args.tol)
    kind = args.kind
    index = rp.parse_index(args.index) if args.index is not None else None
    seed = args.sample_seed if args.sample_seed is not None else args.seed
    Y, res = rp.compute_root(M, kind, index, seed, tol, args.mode)
    out = matrix_json(Y)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(out, fh)
            fh.write("\n")
    elif args.pretty:
        for row in out["rows"]:
            print(" ".join(repr(x) for x in row))
    else:
        print(json.dumps(out))
    print(f"residual {res!r}")
    return 0


def _cmd_certify(args):
    M = read_matrix(args.path)
    tol = _tolerances(args.tol)
    try:
        r = rp.certify(M, tol, args.seed, args.seeds, _grid(args.geodesic_grid), args.mode)
    except CertificationFailure as exc:
        r = getattr(exc, "report", None)
        if r is not None:
            _emit(r, pretty_certify(r) if args.pretty else None, args)
        raise
    _emit(r, pretty_certify(r) if args.pretty else None, args)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="residual tolerance (relative)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mode", choices=rp.MODES, default="auto")
    common.add_argument("--pretty", action="store_true", help="human-readable tables instead of JSON")

    p = _Parser(prog="sqrt-atlas", description="Real square roots of semisimple matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="classify and enumerate branches")
    a.add_argument("path")
    a.set_defaults(func=_cmd_analyze)

    s = sub.add_parser("sqrt", parents=[common], help="emit one square root")
    s.add_argument("path")
    s.add_argument("kind", choices=("principal", "branch", "sample"))
    s.add_argument("index", nargs="?", help='branch index, e.g. "u=0,1;mu=1" or JSON')
    s.add_argument("sample_seed", nargs="?", type=int)
    s.add_argument("--out", help="write the root to this file instead of stdout")
    s.set_defaults(func=_cmd_sqrt)

    c = sub.add_parser("certify", parents=[common], help="run all numerical certificates")
    c.add_argument("path")
    c.add_argument("--geodesic-grid", help="comma-separated t values")
    c.add_argument("--seeds", type=int, default=3, help="samples per branch")
    c.set_defaults(func=_cmd_certify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SqrtAtlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError, OverflowError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return SqrtAtlasError.exit_code


if __name__ == "__main__":
    sys.exit(main())
