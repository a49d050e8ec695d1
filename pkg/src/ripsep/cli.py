"""Command-line interface.

Subcommands: sample, barcode, entropy, separate, bottleneck, gh,
stability.  Every command is deterministic given its flags and input
files, and all numeric output uses the shortest round-trip decimal
representation, so outputs are byte-identical across runs.

Exit codes: 0 success, 1 usage error, 2 input/format error, 3 resource
budget exceeded, 4 verification assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .compare import bottleneck_distance, diagram_from_barcode, gh_distortion, \
    identity_distortion, stability_report
from .entropy import persistent_entropy, relative_entropy
from .errors import BudgetError, StabilityError, ValidationError
from .filtration import DEFAULT_SIMPLEX_BUDGET, build_vr_filtration
from .persistence import Barcode, compute_barcode, restrict_dim
from .pointcloud import format_points, load_points, sample_circle, sample_torus
from .separation import render_trace, separate_features

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(payload: str | bytes, out: str | None) -> None:
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _read_barcode(path: str) -> Barcode:
    with open(path, "r", encoding="utf-8") as fh:
        return Barcode.from_json(fh.read())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ripsep", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="write a synthetic point cloud as CSV")
    p.add_argument("kind", choices=["circle", "torus"])
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--radius", type=float, default=1.0, help="circle radius")
    p.add_argument("--jitter", type=float, default=0.0, help="circle noise bound")
    p.add_argument("--R", type=float, default=2.0, help="torus tube-center radius")
    p.add_argument("--rho", type=float, default=0.5, help="torus tube radius")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("barcode", help="compute the Vietoris-Rips barcode of a CSV cloud")
    p.add_argument("points")
    p.add_argument("--dim-cap", type=int, default=2,
                   help="largest simplex dimension; bars appear in dimensions "
                        "up to dim-cap minus 1 (use 3 to see dimension-2 bars)")
    p.add_argument("--t-max", type=float, default=None,
                   help="filtration cutoff; default is the stopping scale "
                        "min_i max_j d(v_i, v_j)")
    p.add_argument("--budget", type=int, default=DEFAULT_SIMPLEX_BUDGET)
    p.add_argument("--out", default=None)

    p = sub.add_parser("entropy", help="persistent entropy of a barcode JSON")
    p.add_argument("barcode")
    p.add_argument("--dims", type=int, default=None,
                   help="restrict to bars of this dimension first")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("separate", help="split a barcode into features and noise")
    p.add_argument("barcode")
    p.add_argument("--dims", type=int, default=None)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("bottleneck", help="bottleneck distance between two barcodes")
    p.add_argument("barcode_a")
    p.add_argument("barcode_b")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("gh", help="finite Gromov-Hausdorff distortion of two CSV clouds")
    p.add_argument("points_a")
    p.add_argument("points_b")
    p.add_argument("--identity", action="store_true",
                   help="identity-correspondence upper bound (equal sizes, any count)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("stability", help="perturbation stability report for a CSV cloud")
    p.add_argument("points")
    p.add_argument("--deltas", required=True,
                   help="comma-separated perturbation radii, sorted increasing")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim-cap", type=int, default=2)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None)

    return parser


def _cmd_sample(args) -> int:
    if args.kind == "circle":
        pts = sample_circle(args.n, radius=args.radius, jitter=args.jitter,
                            seed=args.seed)
    else:
        pts = sample_torus(args.n, R=args.R, rho=args.rho, seed=args.seed)
    _emit(format_points(pts), args.out)
    return EXIT_OK


def _cmd_barcode(args) -> int:
    pts = load_points(args.points)
    filt = build_vr_filtration(pts, dim_cap=args.dim_cap, t_max=args.t_max,
                               simplex_budget=args.budget)
    barcode = compute_barcode(filt)
    _emit(barcode.to_json() + "\n", args.out)
    return EXIT_OK


def _entropy_record(barcode: Barcode) -> dict:
    lengths = barcode.lengths()
    if not lengths:
        raise ValidationError("barcode has no bars in the requested dimension")
    T, r = max(lengths), min(lengths)
    return {
        "n": len(lengths),
        "T": T,
        "r": r,
        "alpha": r / T,
        "entropy": persistent_entropy(lengths),
        "relative_entropy": relative_entropy(lengths, T, r),
    }


def _cmd_entropy(args) -> int:
    barcode = _read_barcode(args.barcode)
    if args.dims is not None:
        barcode = restrict_dim(barcode, args.dims)
    record = _entropy_record(barcode)
    if args.format == "json":
        _emit(json.dumps(record, indent=2) + "\n", args.out)
    else:
        _emit(repr(record["entropy"]) + "\n", args.out)
    return EXIT_OK


def _cmd_separate(args) -> int:
    barcode = _read_barcode(args.barcode)
    if args.dims is not None:
        barcode = restrict_dim(barcode, args.dims)
    result = separate_features(barcode)
    _emit(render_trace(result, format=args.format), args.out)
    return EXIT_OK


def _cmd_bottleneck(args) -> int:
    a = diagram_from_barcode(_read_barcode(args.barcode_a), args.dim)
    b = diagram_from_barcode(_read_barcode(args.barcode_b), args.dim)
    _emit(repr(bottleneck_distance(a, b)) + "\n", args.out)
    return EXIT_OK


def _cmd_gh(args) -> int:
    a = load_points(args.points_a)
    b = load_points(args.points_b)
    value = identity_distortion(a, b) if args.identity else gh_distortion(a, b)
    _emit(repr(value) + "\n", args.out)
    return EXIT_OK


def _cmd_stability(args) -> int:
    pts = load_points(args.points)
    try:
        deltas = [float(x) for x in args.deltas.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad --deltas value: {exc}") from None
    report = stability_report(pts, deltas, seed=args.seed, dim_cap=args.dim_cap)
    if args.format == "json":
        _emit(report.to_json() + "\n", args.out)
    else:
        _emit(report.to_text(), args.out)
    if not report.entropy_trend_ok:
        print("warning: entropy gap did not shrink with delta", file=sys.stderr)
    return EXIT_OK


_HANDLERS = {
    "sample": _cmd_sample,
    "barcode": _cmd_barcode,
    "entropy": _cmd_entropy,
    "separate": _cmd_separate,
    "bottleneck": _cmd_bottleneck,
    "gh": _cmd_gh,
    "stability": _cmd_stability,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValidationError, OSError) as exc:
        print(f"ripsep: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"ripsep: resource budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except StabilityError as exc:
        print(f"ripsep: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
