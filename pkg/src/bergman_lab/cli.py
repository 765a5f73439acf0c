"""Command-line interface.

Exit status: 0 on success, 2 for an inconclusive probe verdict, 1 on errors
and 64 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cache import cache_root, cached_gram
from .catalog import BUILTINS, resolve
from .domains import (BalancedDomainSpec, Disc, DomainError, HartogsDomainSpec, contains_many,
                      LaurentHartogsSpec, PlanarDomainSpec, spec_hash, to_document)
from .integration import PlanarBasis, _radial_shape

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
GRID_BOUNDARY_GAP = 1e-8

log = logging.getLogger("bergman_lab")


class ConfigError(DomainError):
    """Invalid job parameters (reported as a usage error)."""


@dataclasses.dataclass
class JobConfig:
    """Validated job parameters (also loadable from a JSON file via ``--config``)."""

    command: str
    domain: str | None = None
    degree: int = 60
    tol: float = 1e-10
    grid: int = 64
    seed: int = 0
    nu_max: int = 40
    stages: int = 5
    bound: float = 2.0
    metric_bound: float | None = None
    margin: float = 0.2
    out: str | None = None
    cache_dir: str | None = None

    RANGES = {"degree": (1, 20000), "tol": (1e-16, 1e-2), "grid": (4, 4096),
              "seed": (0, 2 ** 32 - 1), "nu_max": (0, 200), "stages": (0, 40),
              "bound": (1e-12, math.inf), "metric_bound": (1e-12, math.inf),
              "margin": (0.0, 0.99)}

    def __post_init__(self):
        for name, (lo, hi) in self.RANGES.items():
            v = getattr(self, name)
            if v is not None and not lo <= v <= hi:
                raise ConfigError(f"{name}={v} outside [{lo}, {hi}]")

    @classmethod
    def from_dict(cls, d: dict):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cx(text: str) -> complex:
    """``"x"``, ``"x,y"`` or a Python complex literal such as ``"0.5+0.2j"``."""
    text = text.strip()
    if "," in text:
        a, b = text.split(",")
        return complex(float(a), float(b))
    return complex(text.replace(" ", ""))


def _point(text: str):
    """``"z"`` or ``"z;w"`` (each as in :func:`_cx`)."""
    parts = [_cx(p) for p in text.split(";")]
    return parts[0] if len(parts) == 1 else np.array(parts)


def parse_points(text: str, spec):
    """``grid:h`` (planar), ``list:p1|p2|...`` or ``file:path.csv``."""
    kind, _, body = text.partition(":")
    if kind == "grid":
        if not isinstance(spec, PlanarDomainSpec):
            raise DomainError("grid points are available for planar domains only")
        h = float(body)
        x = np.arange(-1.0, 1.0 + h / 2, h)
        z = (x[None, :] + 1j * x[:, None]).ravel()
        z = z[spec.inside(z)]
        # drop lattice points that sit on the boundary up to rounding
        return z[spec.distance(z) > GRID_BOUNDARY_GAP]
    if kind == "list":
        pts = [_point(p) for p in body.split("|") if p.strip()]
    elif kind == "file":
        with open(body, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
        if rows and not _is_number(rows[0][0]):
            rows = rows[1:]
        vals = np.array([[float(v) for v in r] for r in rows])
        pts = vals[:, 0::2] + 1j * vals[:, 1::2]
        pts = list(pts[:, 0]) if pts.shape[1] == 1 else list(pts)
    else:
        raise DomainError(f"unknown point source {text!r}")
    pts = np.array(pts, dtype=complex)
    pts = pts.ravel() if spec.dim == 1 else np.atleast_2d(pts)
    if isinstance(spec, (_Scalar, _Outside)):
        return pts
    if pts.ndim == 2 and pts.shape[1] != spec.dim:
        raise DomainError(f"points need {spec.dim} coordinates")
    outside = ~contains_many(spec, pts)
    if outside.any():
        raise DomainError(f"{int(outside.sum())} point(s) outside the domain, "
                          f"first {pts[np.argmax(outside)]}")
    return pts


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _coord_columns(dim):
    if dim == 1:
        return ["z_re", "z_im"]
    return [c for i in range(1, dim + 1) for c in (f"z{i}_re", f"z{i}_im")]


def _coords(p):
    p = np.atleast_1d(p)
    return [x for c in p for x in (c.real, c.imag)]


def write_csv(path, header, rows):
    text = ",".join(header) + "\n" + "".join(",".join(_fmt(v) for v in r) + "\n" for r in rows)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# kernel systems


def _planar_kernel(spec, pts, degree, cache_dir):
    from .kernel import _degree_for, converged_kernel, default_planar_basis, orthonormalize

    radial = _radial_shape(spec) is not None
    if cache_root(cache_dir) is None or radial:
        deg = max(degree, _degree_for(pts, degree, cap=20000 if radial else 800))
        vals, deg, inc = converged_kernel(spec, pts, degree=deg,
                                          max_degree=20000 if radial else max(deg, 800))
        return vals, deg, inc
    basis = PlanarBasis(default_planar_basis(spec, degree))
    gm, hit = cached_gram(spec, basis, cache_dir=cache_dir)
    log.info("gram cache %s", "hit" if hit else "miss")
    sys_ = orthonormalize(gm, degree=degree)
    return sys_.kernel(pts), degree, math.nan


def kernel_table(spec, pts, degree=60, nu_max=40, cache_dir=None):
    """Rows ``coords + [kernel, degree, increment]``."""
    from .balanced import balanced_system
    from .hartogs import hartogs_system

    if isinstance(spec, PlanarDomainSpec):
        vals, deg, inc = _planar_kernel(spec, pts, degree, cache_dir)
    elif isinstance(spec, (HartogsDomainSpec, LaurentHartogsSpec)):
        vals, deg, inc = hartogs_system(spec, nu_max, degree).kernel(pts), degree, math.nan
    elif isinstance(spec, BalancedDomainSpec):
        deg = degree if getattr(spec, "reinhardt", False) else min(degree, 12)
        vals, inc = balanced_system(spec, deg).kernel(pts), math.nan
    else:
        raise DomainError("unsupported domain")
    return [_coords(p) + [v, deg, inc] for p, v in zip(pts, vals)]


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(args, cfg):
    rows = []
    for name in BUILTINS:
        spec = resolve(f"builtin:{name}")
        rows.append({"name": name, "family": spec.family, "dim": spec.dim,
                     "id": spec_hash(spec)})
    text = json.dumps(rows, indent=2) if args.json else \
        "".join(f"{r['name']:18s} {r['family']:20s} dim={r['dim']} id={r['id']}\n" for r in rows)
    _emit(text, cfg.out)
    return EXIT_OK


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def cmd_kernel(args, cfg):
    spec = resolve(cfg.domain)
    pts = parse_points(args.points, spec)
    rows = kernel_table(spec, pts, cfg.degree, cfg.nu_max, cfg.cache_dir)
    write_csv(cfg.out, _coord_columns(spec.dim) + ["kernel", "degree", "increment"], rows)
    return EXIT_OK


def cmd_metric(args, cfg):
    from .metric import default_system, metric_values

    spec = resolve(cfg.domain)
    pts = parse_points(args.points, spec)
    X = _point(args.direction)
    system = default_system(spec, pts if spec.dim == 1 else None,
                            None if spec.dim == 1 else cfg.degree)
    beta = metric_values(system, pts, X)
    write_csv(cfg.out, _coord_columns(spec.dim) + ["beta"],
              [_coords(p) + [b] for p, b in zip(pts, beta)])
    return EXIT_OK


def cmd_distance(args, cfg):
    from .metric import bergman_distance

    spec = resolve(cfg.domain)
    res = bergman_distance(spec, _cx(args.p), _cx(args.q), seed=cfg.seed)
    summary = res.summary()
    if cfg.out is None:
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    else:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "distance.json").write_text(json.dumps(summary, indent=2) + "\n")
        write_csv(out / "trace.csv", ["level", "nodes", "bound", "mesh_length"], res.trace)
        write_csv(out / "path.csv", ["z_re", "z_im"], [[z.real, z.imag] for z in res.polyline])
    return EXIT_OK


def _disc_arg(text):
    c, r = text.rsplit(":", 1) if ":" in text else (None, None)
    if c is None:
        raise DomainError("discs are given as CENTER:RADIUS, e.g. 1,0:0.5")
    return Disc(_cx(c), float(r))


def cmd_probe(args, cfg):
    from . import probes

    spec = resolve(cfg.domain)
    at = _point(args.at) if args.at else None
    name = args.probe
    if name == "exhaustion":
        kw = {"q": args.q, "steps": args.steps, "start": args.start}
        if args.direction:
            kw["direction"] = _point(args.direction)
        rep = probes.exhaustion_probe(spec, at, bound=args.bound, margin=cfg.margin, **kw)
    elif name == "outer-cone":
        ext = parse_points(args.points, _Outside(spec)) if args.points else None
        if ext is None:
            raise DomainError("outer-cone needs --points with exterior points")
        eps = args.eps if args.eps is not None else probes.cone_exponent(args.delta)
        rep = probes.outer_cone_check(spec, at, args.r, eps, ext, seed=cfg.seed)
    elif name == "monotonicity":
        outer = resolve(args.outer)
        pts = parse_points(args.points, spec)
        rep = probes.monotonicity_check(spec, outer, pts)
    elif name == "radial":
        t = np.linspace(0, 1, args.steps + 1)
        rep = probes.radial_monotone_check(spec, at, t)
    elif name == "localization":
        rep = probes.localization_ratio(spec, at, _disc_arg(args.u1), _disc_arg(args.u2),
                                        seed=cfg.seed)
    elif name == "slice":
        pts = parse_points(args.points, _Scalar())
        rep = probes.slice_ratio(spec, pts, _point(args.direction) if args.direction else None)
    elif name == "completeness":
        pts = parse_points(args.points, spec)
        rep = probes.completeness_probe(spec, at, pts, mode=args.mode)
    else:
        raise DomainError(f"unknown probe {name!r}")
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.csv").write_text(rep.to_csv())
    (out / "verdict.json").write_text(rep.to_json() + "\n")
    print(f"{rep.probe}: {rep.verdict}")
    return EXIT_INCONCLUSIVE if rep.verdict == "inconclusive" else EXIT_OK


class _Scalar:
    dim = 1


class _Outside:
    def __init__(self, spec):
        self.dim = spec.dim


def cmd_construct(args, cfg):
    from . import constructions as C

    if args.name == "builtin":
        spec = C.build_builtin(args.family)
        _emit(json.dumps(to_document(spec), indent=2) + "\n", cfg.out)
        return EXIT_OK
    params = C.ZalcmanParams(stages=cfg.stages, grid=cfg.grid, bound=cfg.bound,
                             metric_bound=cfg.metric_bound, margin=cfg.margin,
                             degree=cfg.degree)
    if args.name == "zalcman-radii":
        sched = C.build_zalcman_radii(params)
    else:
        if args.prior:
            prior = C.Schedule.from_json(Path(args.prior).read_text())
        else:
            prior = C.build_zalcman_radii(params)
        if args.name == "zalcman-refined":
            sched = C.refine_zalcman_schedule(prior, cfg.stages, params)
        elif args.name == "metric-bounded":
            sched = C.build_metric_bounded_schedule(prior, params, cfg.stages)
        else:
            raise DomainError(f"unknown construction {args.name!r}")
    _emit(sched.to_json() + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(args, cfg):
    from .acceptance import run_all

    results = run_all()
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_ERROR


COMMANDS = {"catalog": cmd_catalog, "kernel": cmd_kernel, "metric": cmd_metric,
            "distance": cmd_distance, "probe": cmd_probe, "construct": cmd_construct,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bergman-lab",
                description="Bergman kernels, metrics and probes on planar and "
                            "two-dimensional model domains.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    common = _Parser(add_help=False)
    common.add_argument("--domain", help="builtin:<name> or a JSON spec file")
    common.add_argument("--degree", type=int, default=60)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--grid", type=int, default=64)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--nu-max", type=int, default=40)
    common.add_argument("--stages", type=int, default=5)
    common.add_argument("--bound", type=float, default=2.0)
    common.add_argument("--metric-bound", type=float, default=None)
    common.add_argument("--margin", type=float, default=0.2)
    common.add_argument("--out", help="output file or directory")
    common.add_argument("--cache-dir", help="cache root (default $BERGMAN_LAB_CACHE)")
    common.add_argument("--config", help="JSON file with job parameters")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", parents=[common], help="list built-in domains")
    c.add_argument("--json", action="store_true")

    k = sub.add_parser("kernel", parents=[common], help="kernel values at points")
    k.add_argument("--points", required=True, help="grid:H | list:P1|P2 | file:PATH")

    m = sub.add_parser("metric", parents=[common], help="Bergman metric at points")
    m.add_argument("--points", required=True)
    m.add_argument("--direction", default="1")

    d = sub.add_parser("distance", parents=[common], help="distance upper bound (planar)")
    d.add_argument("p")
    d.add_argument("q")

    pr = sub.add_parser("probe", parents=[common], help="run a probe")
    pr.add_argument("probe", choices=["exhaustion", "outer-cone", "monotonicity", "radial",
                                      "localization", "slice", "completeness"])
    pr.add_argument("--at", help="boundary point, base point or ray point ('z' or 'z;w')")
    pr.add_argument("--points")
    pr.add_argument("--direction")
    pr.add_argument("--q", type=float, default=0.5)
    pr.add_argument("--steps", type=int, default=8)
    pr.add_argument("--start", type=float, default=0.5)
    pr.add_argument("--r", type=float, default=0.5)
    pr.add_argument("--eps", type=float)
    pr.add_argument("--delta", type=float, default=1.0)
    pr.add_argument("--outer")
    pr.add_argument("--u1", help="CENTER:RADIUS")
    pr.add_argument("--u2", help="CENTER:RADIUS")
    pr.add_argument("--mode", choices=["segment", "mesh"], default="segment")

    co = sub.add_parser("construct", parents=[common], help="build schedules or example domains")
    co.add_argument("name", choices=["zalcman-radii", "zalcman-refined", "metric-bounded",
                                     "builtin"])
    co.add_argument("--family", default="hartogs-triangle")
    co.add_argument("--prior", help="kernel-radii or refined schedule JSON")

    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return p


def _config(args) -> JobConfig:
    fields = {f.name for f in dataclasses.fields(JobConfig)}
    d = {k: v for k, v in vars(args).items() if k in fields}
    if getattr(args, "config", None):
        extra = json.loads(Path(args.config).read_text())
        unknown = set(extra) - fields
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        d.update(extra)
    return JobConfig(**d)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
    except ConfigError as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {exc}\n")
    try:
        if args.command in ("kernel", "metric", "distance", "probe") and not cfg.domain:
            parser.error(f"{args.command} needs --domain")
        return COMMANDS[args.command](args, cfg)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:
        log.debug("failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
