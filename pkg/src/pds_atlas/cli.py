"""Command-line front end: ``pds-atlas <command> [options]``.

Human-readable summaries go to stdout; any failure is reported as a JSON
object on stderr with a nonzero exit status (1 = verification failure,
2 = invalid input).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, checks, region, spectra
from .classify import ClassificationError, classify
from .symbolic import format_rational


class VerificationFailure(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _matrix_json(m) -> list:
    rows = m.tolist() if hasattr(m, "tolist") else m
    return [[format_rational(v) if isinstance(v, Fraction) else float(v) for v in r] for r in rows]


def _spectrum_json(spec) -> list:
    return [[float(z.real), float(z.imag)] for z in spec]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _number(text: str):
    """Exact rational for inputs like 1/2 or 0.25, float for anything else (e.g. 1e-3)."""
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    cat = classify(args.n, workers=args.workers)
    text = cat.dumps()
    if args.out:
        _write(args.out, text)
    print(f"n={cat.n}: {len(cat)} classes; discarded trivial={cat.discarded['trivial']}, "
          f"subsumed={cat.discarded['subsumed']}" + (f"; wrote {args.out}" if args.out else ""))
    return 0


def cmd_spectra_verify(args) -> int:
    ids = list(spectra.CLOSED_FORMS) if args.class_id == "all" else [args.class_id]
    reports = [spectra.verify_class(cid, args.samples, args.tol, seed=args.seed) for cid in ids]
    payload = {"tol": args.tol, "samples": args.samples, "seed": args.seed,
               "reports": [r.to_json() for r in reports]}
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    bad = [r.class_id for r in reports if not r.passed]
    if bad:
        raise VerificationFailure(f"closed forms deviate for {bad}", {"failed": bad})
    return 0


def cmd_region(args) -> int:
    cat = classify(args.n)
    if args.random is not None:
        strategy, density = "random", args.random
    else:
        strategy, density = "grid", args.grid
    clouds = region.region_clouds(args.class_id, strategy, density, seed=args.seed, catalog=cat)
    total = sum(len(c) for c in clouds)
    if args.out:
        region.write_region_csv(args.out, clouds)
    if args.svg:
        _write(args.svg, region.region_svg(clouds))
    outs = [p for p in (args.out, args.svg) if p]
    print(f"{total} eigenvalues from {len(clouds)} classes ({strategy}, density {density})"
          + (f"; wrote {', '.join(outs)}" if outs else ""))
    return 0


def cmd_witness(args) -> int:
    if args.kind == "ds":
        m = region.ds_witness(_number(args.sigma), _number(args.tau))
        info = {"kind": "ds", "sigma": args.sigma, "tau": args.tau}
    elif args.kind == "realline":
        m = region.real_line_witness(args.order, _number(args.a))
        info = {"kind": "realline", "n": args.order, "a": args.a}
    else:
        coeffs = [_number(v) for v in args.coeffs.split(",")]
        m = region.circulant_embed_witness(args.order, args.m if args.m else args.order, coeffs, args.trace_zero)
        info = {"kind": "circulant", "n": args.order, "m": args.m or args.order, "coeffs": args.coeffs}
    spec = spectra.eigenvalues(m)
    info.update(matrix=_matrix_json(m), spectrum=_spectrum_json(spec),
                doubly_stochastic=spectra.is_doubly_stochastic(m), permutative=region.is_permutative(m))
    sys.stdout.write(json.dumps(info, indent=2) + "\n")
    return 0


def cmd_boundary(args) -> int:
    kwargs = {}
    if args.extended:
        kwargs = {"t_range": region.EXTENDED_SCAN, "s_range": region.EXTENDED_SCAN}
    curves = region.boundary_curves(args.steps, args.steps, **kwargs)
    text = region.boundary_csv(curves)
    if args.out:
        _write(args.out, text)
        gaps = {k: sum(p.eigenvalue is None for p in v) for k, v in curves.items()}
        print(f"wrote {args.out}: {args.steps} steps per curve, points without a non-real eigenvalue {gaps}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify_all(args) -> int:
    if args.n != 4:
        raise ValueError("verify-all covers the order-4 catalog (and its order-2/3 checks); use --n 4")

    def progress(res):
        print(res.line(), flush=True)

    results = checks.run_all(tol=args.tol, seed=args.seed, progress=progress)
    failed = [r.key for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if args.out:
        _write(args.out, json.dumps([r.to_json() for r in results], indent=2, default=str) + "\n")
    if failed:
        raise VerificationFailure(f"{len(failed)} checks failed", {"failed": failed})
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for the counter-based generator (default 0)")

    p = argparse.ArgumentParser(prog="pds-atlas", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="enumerate cogredient classes")
    c.add_argument("--n", type=int, default=4, choices=(2, 3, 4))
    c.add_argument("--out", help="catalog JSON path")
    c.add_argument("--workers", type=int, default=None)
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("spectra-verify", parents=[common], help="closed forms versus the eigensolver")
    s.add_argument("--class", dest="class_id", default="all")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectra_verify)

    r = sub.add_parser("region", parents=[common], help="sample eigenvalue regions")
    r.add_argument("--class", dest="class_id", default="all")
    r.add_argument("--n", type=int, default=4, choices=(3, 4))
    g = r.add_mutually_exclusive_group()
    g.add_argument("--grid", type=int, default=41, help="grid points per parameter axis")
    g.add_argument("--random", type=int, default=None, help="random samples per class")
    r.add_argument("--out", help="CSV path")
    r.add_argument("--svg", help="SVG path")
    r.set_defaults(func=cmd_region)

    w = sub.add_parser("witness", parents=[common], help="explicit witness matrices")
    wsub = w.add_subparsers(dest="kind", required=True)
    wd = wsub.add_parser("ds", parents=[common])
    wd.add_argument("--sigma", required=True)
    wd.add_argument("--tau", required=True)
    wr = wsub.add_parser("realline", parents=[common])
    wr.add_argument("--n", dest="order", type=int, required=True)
    wr.add_argument("--a", required=True)
    wc = wsub.add_parser("circulant", parents=[common])
    wc.add_argument("--n", dest="order", type=int, required=True)
    wc.add_argument("--m", type=int, default=None, help="first block order (default: single circulant)")
    wc.add_argument("--coeffs", required=True, help="comma-separated, e.g. 0,1,0,0")
    wc.add_argument("--trace-zero", action="store_true")
    for sp in (wd, wr, wc):
        sp.set_defaults(func=cmd_witness)

    b = sub.add_parser("boundary", parents=[common], help="the conjectured boundary curves")
    b.add_argument("--steps", type=int, default=500)
    b.add_argument("--extended", action="store_true", help="scan [0.75, 1] for both curves")
    b.add_argument("--out", help="CSV path (default stdout)")
    b.set_defaults(func=cmd_boundary)

    v = sub.add_parser("verify-all", parents=[common], help="run every acceptance check")
    v.add_argument("--n", type=int, default=4)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--out", help="JSON report path")
    v.set_defaults(func=cmd_verify_all)
    return p


def _fail(kind: str, message: str, code: int, **extra) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0:
        return _fail("invalid-argument", "--tol must be positive", 2)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        return _fail("verification-failure", str(exc), 1, **exc.payload)
    except ClassificationError as exc:
        return _fail("catalog-mismatch", str(exc), 1)
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        return _fail("invalid-argument", str(msg), 2)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
