"""Command-line entry point: count, enumerate, export and report.

Exit codes: 0 success, 2 invalid request, 3 real-count precondition violated,
4 enumeration cap exceeded without --force.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .counting import WeightTable, build_weight_table, convergence_report, dp_count
from .model import (Ambient, DegreeSpec, SignVector, build_sign_vector, dumps, frac_str,
                    special_theta)
from .surface_floorplans import (RealPreconditionError, check_real_preconditions,
                                 enumerate_surface_floorplans, surface_mult_complex,
                                 surface_mult_real, total_counts)

EXIT_USAGE, EXIT_PRECONDITION, EXIT_CAP = 2, 3, 4
DEFAULT_CAP = 100_000
STREAM_LIMIT = 10_000  # stream when lattice_points ** delta stays below this


class UsageError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RunRequest:
    command: str
    spec: DegreeSpec
    delta: int
    field: str
    signs: str | None
    fmt: str
    cache_dir: Path | None


# ---------------------------------------------------------------------------
# cache


def cache_key(payload: dict) -> str:
    body = dict(payload, version=__version__)
    return hashlib.sha256(dumps(body).encode()).hexdigest()


def cached_table(spec: DegreeSpec, field: str, signs: SignVector | None,
                 cache_dir: Path | None) -> WeightTable:
    """Weight table, read from or appended to the on-disk cache when enabled."""
    if cache_dir is None:
        return build_weight_table(spec, field, signs)
    key = cache_key({"kind": "weight_table", "ambient": spec.ambient.value,
                     "params": list(spec.params), "field": field,
                     "signs": signs.kind if signs is not None else None})
    path = cache_dir / f"{key}.json"
    if path.exists():
        return WeightTable.from_json(json.loads(path.read_text()))
    table = build_weight_table(spec, field, signs)
    cache_dir.mkdir(parents=True, exist_ok=True)
    # write-then-rename keeps concurrent writers idempotent
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(dumps(table.to_json()))
    os.replace(tmp, path)
    return table


# ---------------------------------------------------------------------------
# request parsing


def _spec_from_args(args) -> DegreeSpec:
    amb = Ambient(args.ambient)
    given = [args.d, args.e, args.f][:amb.arity]
    if any(p is None for p in given):
        raise UsageError(f"{amb.value} needs {' '.join(['-d', '-e', '-f'][:amb.arity])}")
    extra = [flag for flag, v in zip(["-d", "-e", "-f"], [args.d, args.e, args.f])
             if v is not None][amb.arity:]
    if extra:
        raise UsageError(f"{amb.value} does not take {' '.join(extra)}")
    try:
        return DegreeSpec(amb, tuple(given))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def to_request(args) -> RunRequest:
    """Validated request; surface reports take their size from the grid."""
    if args.command == "report":
        amb = Ambient(args.ambient)
        spec = DegreeSpec(amb, (1,) * amb.arity)
    else:
        spec = _spec_from_args(args)
    return RunRequest(args.command, spec, args.delta, args.field, args.signs, args.format,
                      _cache_dir(args))


def _default_signs(spec: DegreeSpec) -> str:
    if spec.is_curve:
        return "bertrand"
    return "special" if spec.ambient is Ambient.P1P1P1 else "all-plus"


KIND_NAMES = {"all-plus": "all_plus", "bertrand": "bertrand_curve_blocks",
              "special": "p1p1p1_special"}


def sign_vector(spec: DegreeSpec, field: str, kind: str | None, delta: int = 1):
    """The sign vector of a real request (None for complex requests).

    Surface weights only read the kind (and theta), so surfaces get a light
    vector without per-point signs.
    """
    if field != "real":
        return None
    kind = kind or _default_signs(spec)
    if not spec.is_curve:
        theta = special_theta(spec.e, spec.f) if spec.ambient is Ambient.P1P1P1 else None
        signs = SignVector((), KIND_NAMES[kind], theta)
        check_real_preconditions(spec, signs)
        return signs
    try:
        return build_sign_vector(spec, delta, kind)
    except ValueError as exc:
        raise RealPreconditionError(str(exc)) from exc


def parse_grid(text: str) -> list[int]:
    try:
        a, b, s = (int(t) for t in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"grid must look like a:b:s, got {text!r}") from exc
    if a < 1 or b < a or s < 1:
        raise UsageError(f"bad grid {text!r}")
    return list(range(a, b + 1, s))


def _cache_dir(args) -> Path | None:
    env = os.environ.get("FLOORCOUNT_CACHE")
    if env:
        return Path(env)
    return Path(args.cache_dir) if args.cache_dir else None


# ---------------------------------------------------------------------------
# output helpers


def _emit(out, fmt: str, record: dict, header: list[str] | None = None):
    if fmt == "json":
        out.write(dumps(record) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        w.writerow([record[h] if not isinstance(record[h], (list, dict)) else dumps(record[h])
                    for h in (header or list(record))])
    else:
        out.write(" ".join(f"{k}={v}" for k, v in record.items()) + "\n")


def _capped(records, cap: int, force: bool):
    """Yield records; without ``force`` refuse (before any output) beyond ``cap``."""
    if force:
        yield from records
        return
    head = list(itertools.islice(records, cap + 1))
    if len(head) > cap:
        raise CapExceeded(f"more than {cap} records; raise --cap or pass --force")
    yield from head


# ---------------------------------------------------------------------------
# commands


def cmd_count(args, out) -> int:
    spec = _spec_from_args(args)
    delta = args.delta
    if delta < 0:
        raise UsageError("delta must be nonnegative")
    if spec.is_curve:
        from .curve_floorplans import count_1nodal_curves
        from .real_phase import count_real_1nodal

        if delta != 1:
            raise UsageError("curve counts are 1-nodal; use --delta 1")
        if args.field == "complex":
            count = count_1nodal_curves(spec)
        else:
            count = count_real_1nodal(spec, sign_vector(spec, "real", args.signs))
        method = "stream"
    else:
        signs = sign_vector(spec, args.field, args.signs, delta)
        method = args.method
        if method == "auto":
            method = "stream" if spec.lattice_point_count() ** delta <= STREAM_LIMIT else "dp"
        if method == "stream":
            count = total_counts(spec, delta, args.field, signs)
        else:
            count = dp_count(cached_table(spec, args.field, signs, _cache_dir(args)), delta)
    rec = {"ambient": spec.ambient.value, "params": list(spec.params), "delta": delta,
           "field": args.field, "count": count, "method": method}
    if args.format == "text":
        out.write(f"{count} (method={method})\n")
    else:
        _emit(out, args.format, rec, list(rec) if args.format == "csv" else None)
    return 0


def _curve_records(spec: DegreeSpec, args, geometry: bool):
    from .curve_floorplans import compose_curve, curve_mult_complex, enumerate_curve_floorplans
    from .plane_curves import default_points
    from .real_phase import DecorationError, assign_real_structure, mu_curve, plan_marks

    signs = sign_vector(spec, "real", args.signs) if args.labels else None
    points = default_points(spec, spec.point_count())
    for plan in enumerate_curve_floorplans(spec):
        rec = plan.to_json()
        if geometry or args.labels:
            curve = compose_curve(plan, points)
            if geometry:
                rec["geometry"] = curve.to_json()
            if args.labels:
                try:
                    dec = assign_real_structure(curve, plan_marks(plan, points, signs))
                    rec["decoration"] = dec.to_json()["edges"]
                    rec["real_multiplicity"] = mu_curve(dec)
                except DecorationError:
                    rec["decoration"] = None
                    rec["real_multiplicity"] = 0
        else:
            rec["multiplicity"] = curve_mult_complex(plan)
        yield rec


def _surface_records(spec: DegreeSpec, args, geometry: bool):
    from .surface_floorplans import certify_surface, compose_surface

    delta = args.delta
    signs = sign_vector(spec, args.field, args.signs, delta)
    cache: dict = {}
    for plan in enumerate_surface_floorplans(spec, delta):
        rec = plan.to_json()
        rec["multiplicity"] = surface_mult_complex(plan)
        if args.field == "real":
            rec["real_multiplicity"] = surface_mult_real(plan, signs)
        if geometry:
            surf = compose_surface(plan, cache=cache)
            rep = certify_surface(surf)
            rec["geometry"] = surf.to_json()
            rec["certified"] = rep.ok
        yield rec


def cmd_enumerate(args, out) -> int:
    spec = _spec_from_args(args)
    if spec.is_curve or args.curves:
        if not spec.is_curve:
            raise UsageError("--curves needs a curve ambient (p2 or p1p1)")
        records = _curve_records(spec, args, geometry=False)
    else:
        records = _surface_records(spec, args, geometry=False)
    header = ["index", "record"] if args.format == "csv" else None
    for n, rec in enumerate(_capped(records, args.cap, args.force)):
        if args.format == "csv":
            _emit(out, "csv", {"index": n, "record": rec}, header if n == 0 else ["index", "record"])
            header = None
        elif args.format == "text":
            mult = rec.get("real_multiplicity", rec.get("multiplicity"))
            out.write(f"{n} multiplicity={mult} {dumps(rec.get('defect', rec.get('germs')))}\n")
        else:
            out.write(dumps(rec) + "\n")
    return 0


def cmd_export(args, out) -> int:
    spec = _spec_from_args(args)
    if args.smooth:
        if spec.is_curve:
            from .curve_floorplans import compose_curve

            geom = compose_curve(spec).to_json()
        else:
            from .surface_floorplans import SurfaceFloorPlan, compose_surface

            geom = compose_surface(SurfaceFloorPlan(spec, 0, (), ())).to_json()
        out.write(dumps(geom) + "\n")
        return 0
    if spec.is_curve:
        records = _curve_records(spec, args, geometry=True)
    else:
        records = _surface_records(spec, args, geometry=True)
    for rec in _capped(records, args.cap, args.force):
        out.write(dumps(rec) + "\n")
    return 0


def cmd_report(args, out) -> int:
    amb = Ambient(args.ambient)
    if amb.is_curve:
        raise UsageError("reports cover surface ambients only")
    if args.grid is None:
        raise UsageError("report needs --grid a:b:s")
    grid = parse_grid(args.grid)
    fixed = [args.e, args.f][:amb.arity - 1]
    if any(v is not None for v in fixed) and any(v is None for v in fixed):
        raise UsageError("give every fixed parameter or none")
    params_fn = (lambda n: (n, *fixed)) if fixed and fixed[0] is not None else None
    cache_dir = _cache_dir(args)

    def table_fn(spec, field):
        signs = sign_vector(spec, field, args.signs, args.delta)
        return cached_table(spec, field, signs, cache_dir)

    try:
        rep = convergence_report(amb, args.field, args.delta, grid, params_fn, table_fn)
    except ValueError as exc:
        if isinstance(exc, RealPreconditionError):
            raise
        raise UsageError(str(exc)) from exc
    names = ["d", "e", "f"][:amb.arity]
    header = ["ambient", "field", "delta", *names, "count", "leading", "ratio"]
    if args.format == "json":
        for r in rep.rows:
            out.write(dumps({"ambient": amb.value, "field": args.field, "delta": args.delta,
                             "params": list(r.params), "count": r.count,
                             "leading": frac_str(r.leading), "ratio": frac_str(r.ratio)}) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rep.to_csv_rows():
            w.writerow(row)
    return 0


# ---------------------------------------------------------------------------
# argument parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ambient", required=True, choices=[a.value for a in Ambient])
    common.add_argument("-d", type=int)
    common.add_argument("-e", type=int)
    common.add_argument("-f", type=int)
    common.add_argument("--delta", type=int, default=1)
    common.add_argument("--field", choices=["complex", "real"], default="complex")
    common.add_argument("--signs", choices=["all-plus", "bertrand", "special"])
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--cache-dir")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP)
    common.add_argument("--force", action="store_true")

    parser = argparse.ArgumentParser(prog="floorcount", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="total multiplicity of floor plans")
    p.add_argument("--method", choices=["auto", "stream", "dp"], default="auto")
    p.set_defaults(run=cmd_count, default_format="text")

    p = sub.add_parser("enumerate", parents=[common], help="stream plans as NDJSON")
    p.add_argument("--curves", action="store_true", help="curve plans of a plane ambient")
    p.add_argument("--labels", action="store_true", help="attach real sign labels (curves)")
    p.set_defaults(run=cmd_enumerate, default_format="json")

    p = sub.add_parser("export", parents=[common], help="write tropical geometry as JSON")
    p.add_argument("--smooth", action="store_true", help="the smooth floor-composed member")
    p.add_argument("--curves", action="store_true")
    p.add_argument("--labels", action="store_true", help="attach real sign labels (curves)")
    p.set_defaults(run=cmd_export, default_format="json")

    p = sub.add_parser("report", parents=[common], help="CSV convergence report")
    p.add_argument("--grid")
    p.set_defaults(run=cmd_report, default_format="csv")
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format = args.format or args.default_format
    if args.cap < 0:
        print("error: --cap must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        to_request(args)
        return args.run(args, out)
    except RealPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
