"""Command-line front end.

Four subcommands over a single strict JSON config:

    canal4d generate   --config job.json [--out points.csv]
    canal4d curvature  --config job.json [--no-oracle] [--out curv.csv]
    canal4d verify     [--config job.json] [--all-types] [--inject-fault]
    canal4d export-obj --config job.json --slice u=0.5 [--out mesh.obj]

Unknown config keys are rejected with their field path.  Exit codes:
0 success, 1 verification failure, 2 configuration error.  Numbers are
written in shortest round-trip decimal form, so identical configs give
byte-identical output, including under multi-worker sweeps (nodes are
chunked, computed independently, and written back in index order).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import closedform, diffgeo, families, verify
from .canal import CanalSurface, RadiusProfile, TypeTables
from .errors import ConfigError, DomainError, GeometryError
from .minkowski import Vec4, ParallelFrame
from .spine import CurvatureFunctions, SpineCurve

_TOP_KEYS = {"type", "spine", "radius", "grid", "surface", "derivative_mode",
             "fd_step", "workers", "tolerances", "oracle_counts", "projection",
             "output"}
_SPINE_KEYS = {"mode", "k", "gamma0", "frame0", "step", "renorm_every", "interval"}
_RADIUS_KEYS = {"family", "value", "c1", "c2", "coeffs", "r0", "dr0", "step"}
_GRID_KEYS = {"u", "v", "w"}
_SURFACE_KEYS = {"u_interval", "v_interval", "w_interval"}
_PROJECTION_KEYS = {"drop", "matrix"}


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        name = sorted(unknown)[0]
        raise ConfigError(f"{path}.{name}" if path else name, "unknown key")


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required key")
    return obj[key]


def _floats(value, count: int, path: str) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or len(value) != count:
        raise ConfigError(path, f"expected a list of {count} numbers")
    try:
        return tuple(float(x) for x in value)
    except (TypeError, ValueError):
        raise ConfigError(path, "entries must be numbers") from None


@dataclass
class GridAxis:
    lo: float
    hi: float
    count: int

    def values(self) -> list[float]:
        return verify.linspace(self.lo, self.hi, self.count)


@dataclass
class JobConfig:
    m: int
    surface: CanalSurface
    grid: dict[str, GridAxis]
    derivative_mode: str
    fd_step: float
    workers: int
    tolerances: dict[str, float]
    oracle_counts: tuple[int, int, int]
    projection: dict
    output: Optional[str]


def _parse_axis(grid: dict, key: str, path: str) -> GridAxis:
    spec = _need(grid, key, path)
    if not isinstance(spec, (list, tuple)) or len(spec) != 3:
        raise ConfigError(f"{path}.{key}", "expected [min, max, count]")
    lo, hi = float(spec[0]), float(spec[1])
    count = spec[2]
    if not isinstance(count, int) or count < 1:
        raise ConfigError(f"{path}.{key}", "count must be a positive integer")
    if count > 1 and not lo < hi:
        raise ConfigError(f"{path}.{key}", "min must be below max")
    return GridAxis(lo, hi, count)


def _build_spine(cfg: dict, kind, grid_u: Optional[GridAxis]) -> SpineCurve:
    _reject_unknown(cfg, _SPINE_KEYS, "spine")
    mode = cfg.get("mode", "line")
    gamma0 = Vec4(*_floats(cfg["gamma0"], 4, "spine.gamma0")) if "gamma0" in cfg \
        else Vec4(0.0, 0.0, 0.0, 0.0)
    frame0 = None
    if "frame0" in cfg:
        rows = cfg["frame0"]
        if not isinstance(rows, list) or len(rows) != 4:
            raise ConfigError("spine.frame0", "expected 4 rows of 4 numbers")
        vecs = [Vec4(*_floats(row, 4, f"spine.frame0[{i}]"))
                for i, row in enumerate(rows)]
        frame0 = ParallelFrame(vecs[0], vecs[1], vecs[2], vecs[3], kind.signature)
    if mode == "line":
        return SpineCurve.line(kind, gamma0, frame0)
    k = _floats(_need(cfg, "k", "spine"), 3, "spine.k")
    if mode == "constant_k":
        return SpineCurve.constant_curvature(kind, k, gamma0, frame0)
    if mode == "integrated":
        if "interval" in cfg:
            interval = _floats(cfg["interval"], 2, "spine.interval")
        elif grid_u is not None:
            pad = 0.1 * max(1.0, abs(grid_u.lo), abs(grid_u.hi))
            interval = (min(grid_u.lo, 0.0) - pad, max(grid_u.hi, 0.0) + pad)
        else:
            raise ConfigError("spine.interval", "required for integrated mode")
        return SpineCurve.integrated(kind, CurvatureFunctions.constant(*k),
                                     interval, gamma0, frame0,
                                     step=float(cfg.get("step", 1e-3)),
                                     renorm_every=int(cfg.get("renorm_every", 16)))
    raise ConfigError("spine.mode", f"unknown mode {mode!r}")


def _build_radius(cfg: dict, m: int) -> RadiusProfile:
    _reject_unknown(cfg, _RADIUS_KEYS, "radius")
    family = _need(cfg, "family", "radius")
    try:
        if family == "constant":
            value = float(_need(cfg, "value", "radius"))
            return families.linear_radius(m, 0.0, value)
        if family == "linear":
            return families.linear_radius(m, float(_need(cfg, "c1", "radius")),
                                          float(_need(cfg, "c2", "radius")))
        if family == "polynomial":
            coeffs = _need(cfg, "coeffs", "radius")
            return RadiusProfile.polynomial(tuple(float(c) for c in coeffs))
        if family == "flat_root":
            return families.flat_root_radius(m, float(_need(cfg, "c1", "radius")),
                                             float(_need(cfg, "c2", "radius")))
        if family == "minimal_root":
            return families.minimal_root_radius(m, float(_need(cfg, "c1", "radius")),
                                                float(_need(cfg, "c2", "radius")))
        if family == "minimal_quadrature":
            r0 = float(_need(cfg, "r0", "radius"))
            dr0 = float(_need(cfg, "dr0", "radius"))
            return families.minimal_quadrature_radius(
                m, r0, dr0, interval=(-2.0, 2.0),
                step=float(cfg.get("step", 1e-4)))
    except DomainError as exc:
        raise ConfigError("radius", str(exc)) from exc
    raise ConfigError("radius.family", f"unknown family {family!r}")


def parse_config(doc: dict) -> JobConfig:
    if not isinstance(doc, dict):
        raise ConfigError("", "config root must be an object")
    _reject_unknown(doc, _TOP_KEYS, "")
    m = _need(doc, "type", "")
    if not isinstance(m, int) or not 1 <= m <= 8:
        raise ConfigError("type", "must be an integer in 1..8")
    grid_cfg = doc.get("grid")
    grid: dict[str, GridAxis] = {}
    if grid_cfg is not None:
        _reject_unknown(grid_cfg, _GRID_KEYS, "grid")
        for key in ("u", "v", "w"):
            grid[key] = _parse_axis(grid_cfg, key, "grid")
    tables = TypeTables.for_type(m)
    spine = _build_spine(doc.get("spine", {"mode": "line"}), tables.spine_kind,
                         grid.get("u"))
    radius = _build_radius(_need(doc, "radius", ""), m)
    fd_step = float(doc.get("fd_step", 1e-4))
    surface_cfg = doc.get("surface", {})
    _reject_unknown(surface_cfg, _SURFACE_KEYS, "surface")

    def interval_for(axis: str) -> Optional[tuple[float, float]]:
        key = f"{axis}_interval"
        if key in surface_cfg:
            return _floats(surface_cfg[key], 2, f"surface.{key}")
        if axis in grid:
            ax = grid[axis]
            pad = 8.0 * fd_step * max(1.0, abs(ax.lo), abs(ax.hi))
            return (ax.lo - pad, ax.hi + pad)
        return None

    u_iv = interval_for("u")
    if u_iv is None:
        raise ConfigError("surface.u_interval", "required when no u grid is given")
    try:
        surface = CanalSurface(m, spine, radius, u_iv,
                               v_interval=interval_for("v"),
                               w_interval=interval_for("w"))
    except DomainError as exc:
        raise ConfigError("surface", str(exc)) from exc
    mode = doc.get("derivative_mode", "fd")
    if mode not in ("fd", "analytic"):
        raise ConfigError("derivative_mode", f"must be 'fd' or 'analytic', got {mode!r}")
    workers = doc.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers", "must be a positive integer")
    tolerances = doc.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances", "must be an object of name -> bound")
    counts = doc.get("oracle_counts", [6, 6, 6])
    counts_t = tuple(int(c) for c in _floats(counts, 3, "oracle_counts"))
    projection = doc.get("projection", {"drop": "x1"})
    _reject_unknown(projection, _PROJECTION_KEYS, "projection")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "must be a string path")
    return JobConfig(m=m, surface=surface, grid=grid, derivative_mode=mode,
                     fd_step=fd_step, workers=workers,
                     tolerances={str(k): float(v) for k, v in tolerances.items()},
                     oracle_counts=counts_t, projection=projection, output=output)


def load_config(path: str) -> JobConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from exc
    return parse_config(doc)


def _fmt(x: float) -> str:
    return repr(float(x))


def _nodes(job: JobConfig) -> list[tuple[float, float, float]]:
    if not job.grid:
        raise ConfigError("grid", "this command needs a grid")
    us = job.grid["u"].values()
    vs = job.grid["v"].values()
    ws = job.grid["w"].values()
    return [(u, v, w) for u in us for v in vs for w in ws]


def _chunked(n: int, chunks: int) -> list[range]:
    size = max(1, (n + chunks - 1) // chunks)
    return [range(i, min(i + size, n)) for i in range(0, n, size)]


def _sweep(job: JobConfig, row_fn) -> list[str]:
    nodes = _nodes(job)
    if job.workers == 1:
        return [row_fn(node) for node in nodes]
    pieces = _chunked(len(nodes), job.workers * 4)
    with ThreadPoolExecutor(max_workers=job.workers) as pool:
        done = pool.map(lambda rng: [row_fn(nodes[i]) for i in rng], pieces)
        out: list[str] = []
        for block in done:
            out.extend(block)
        return out


def cmd_generate(job: JobConfig, out) -> int:
    def row(node):
        u, v, w = node
        p = job.surface.evaluate(u, v, w)
        return ",".join([_fmt(u), _fmt(v), _fmt(w),
                         _fmt(p.x1), _fmt(p.x2), _fmt(p.x3), _fmt(p.x4)])

    out.write("u,v,w,x1,x2,x3,x4\n")
    for line in _sweep(job, row):
        out.write(line + "\n")
    return 0


_CURVATURE_HEADER = ("u,v,w,x1,x2,x3,x4,K_closed,H_closed,c1,c2,c3,"
                     "K_num,H_num,identity_residual,membership_residual,error")


def cmd_curvature(job: JobConfig, out, no_oracle: bool = False) -> int:
    surface = job.surface

    def row(node):
        u, v, w = node
        cells = [_fmt(u), _fmt(v), _fmt(w)]
        error = ""
        try:
            p = surface.evaluate(u, v, w)
            cells += [_fmt(p.x1), _fmt(p.x2), _fmt(p.x3), _fmt(p.x4)]
            inv = closedform.invariants_closed(surface, u, v, w)
            cells += [_fmt(inv.gaussian), _fmt(inv.mean),
                      _fmt(inv.principal[0]), _fmt(inv.principal[1]),
                      _fmt(inv.principal[2])]
            if no_oracle:
                cells += ["", ""]
            else:
                cur, forms, _ = diffgeo.surface_invariants(
                    surface, u, v, w, mode=job.derivative_mode, step=job.fd_step)
                sign = closedform.orientation_sign(surface, u, v, w,
                                                   forms.normal, forms.epsilon)
                cells += [_fmt(sign * cur.gaussian), _fmt(sign * cur.mean)]
            cells += [_fmt(inv.identity_residual),
                      _fmt(surface.membership_residual(u, v, w))]
        except GeometryError as exc:
            error = str(exc).replace(",", ";").replace("\n", " ")
            cells += [""] * (16 - len(cells))
        cells.append(error)
        return ",".join(cells)

    out.write(_CURVATURE_HEADER + "\n")
    for line in _sweep(job, row):
        out.write(line + "\n")
    return 0


def cmd_verify(job: Optional[JobConfig], out, fault: bool = False) -> int:
    tolerances = job.tolerances if job else None
    counts = job.oracle_counts if job else (6, 6, 6)
    try:
        result = verify.run_battery(tolerances=tolerances, counts=counts,
                                    fault=fault)
    except KeyError as exc:
        raise ConfigError("tolerances", str(exc)) from exc
    for line in result.lines:
        cmp = "<" if line.direction == "max" else ">"
        status = "PASS" if line.ok else "FAIL"
        out.write(f"{line.name:28s} {line.value:12.4e} {cmp} {line.tol:8.1e}  "
                  f"{status}\n")
    out.write(f"battery {'PASS' if result.ok else 'FAIL'} "
              f"({result.seconds:.1f}s)\n")
    return 0 if result.ok else 1


def _project(point: Vec4, projection: dict) -> tuple[float, float, float]:
    if "matrix" in projection:
        rows = projection["matrix"]
        if not isinstance(rows, list) or len(rows) != 3:
            raise ConfigError("projection.matrix", "expected 3 rows of 4 numbers")
        mat = [_floats(r, 4, f"projection.matrix[{i}]") for i, r in enumerate(rows)]
        return tuple(sum(m[i] * point[i] for i in range(4)) for m in mat)  # type: ignore[return-value]
    drop = projection.get("drop", "x1")
    keep = [i for i, name in enumerate(("x1", "x2", "x3", "x4")) if name != drop]
    if len(keep) != 3:
        raise ConfigError("projection.drop", f"unknown coordinate {drop!r}")
    return (point[keep[0]], point[keep[1]], point[keep[2]])


def cmd_export_obj(job: JobConfig, out, slice_axis: str, slice_value: float) -> int:
    if slice_axis not in ("u", "v", "w"):
        raise ConfigError("slice", f"axis must be u, v or w, got {slice_axis!r}")
    axis = job.grid.get(slice_axis)
    if axis is None:
        raise ConfigError("grid", "this command needs a grid")
    if axis.count < 2 or not (axis.lo <= slice_value <= axis.hi):
        raise ConfigError(
            "slice", f"value {slice_value} outside the {slice_axis} interval "
                     f"[{axis.lo}, {axis.hi}]")
    remaining = [a for a in ("u", "v", "w") if a != slice_axis]
    rows_axis, cols_axis = job.grid[remaining[0]], job.grid[remaining[1]]
    if rows_axis.count < 2 or cols_axis.count < 2:
        raise ConfigError("grid", "sliced mesh needs at least 2 points per axis")
    rows = rows_axis.values()
    cols = cols_axis.values()

    def point(a: float, b: float) -> Vec4:
        coords = {slice_axis: slice_value, remaining[0]: a, remaining[1]: b}
        return job.surface.evaluate(coords["u"], coords["v"], coords["w"])

    for a in rows:
        for b in cols:
            x, y, z = _project(point(a, b), job.projection)
            out.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    nc = len(cols)
    for i in range(len(rows) - 1):
        for j in range(nc - 1):
            topleft = i * nc + j + 1
            out.write(f"f {topleft} {topleft + nc} {topleft + nc + 1}\n")
            out.write(f"f {topleft} {topleft + nc + 1} {topleft + 1}\n")
    return 0


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="canal4d",
        description="Canal hypersurfaces in Minkowski 4-space: generation, "
                    "curvature sweeps, verification, mesh export.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("generate", "curvature", "verify", "export-obj"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to the JSON job config",
                       required=name != "verify")
        p.add_argument("--out", help="output path (default: stdout)")
        if name == "curvature":
            p.add_argument("--no-oracle", action="store_true",
                           help="skip the numeric K/H columns")
        if name == "verify":
            p.add_argument("--all-types", action="store_true",
                           help="run the built-in battery (default when no "
                                "config is given)")
            p.add_argument("--inject-fault", action="store_true",
                           help="perturb the closed forms; the battery must fail")
        if name == "export-obj":
            p.add_argument("--slice", required=True,
                           help="axis=value, e.g. --slice u=0.5")
    args = parser.parse_args(argv)
    try:
        job = load_config(args.config) if args.config else None
        if args.command != "verify" and job is None:
            raise ConfigError("config", "required")
        out_path = args.out or (job.output if job else None)
        out, close = _open_out(out_path)
        try:
            if args.command == "generate":
                return cmd_generate(job, out)
            if args.command == "curvature":
                return cmd_curvature(job, out, no_oracle=args.no_oracle)
            if args.command == "verify":
                return cmd_verify(job, out, fault=args.inject_fault)
            slice_axis, _, raw = args.slice.partition("=")
            if not raw:
                raise ConfigError("slice", "expected axis=value")
            try:
                slice_value = float(raw)
            except ValueError:
                raise ConfigError("slice", f"bad value {raw!r}") from None
            return cmd_export_obj(job, out, slice_axis.strip(), slice_value)
        finally:
            if close:
                out.close()
    except ConfigError as exc:
        print(f"config error at {exc.field or '<root>'}: {exc.message}",
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
