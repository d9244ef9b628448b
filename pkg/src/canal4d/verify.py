"""Built-in verification battery shared by the CLI and the test suite.

One standard configuration per canal type: a constant-curvature spine
with (k1, k2, k3) = (0.3, 0.2, 0.1) and a linear radius, r = 1.5 + 0.2 u
for types with radial parity s = +1 and r = 0.2 + 1.5 u (slope above 1,
as validity requires) for types with s = -1.  The sweep windows keep the
denominator core of the curvature fields bounded away from zero, so
every closed-form/numeric comparison happens on well-conditioned points.
"""

from __future__ import annotations

import math
import random
import time
from typing import NamedTuple, Optional

from . import closedform, diffgeo, families
from .canal import CanalSurface, RadiusProfile, TypeTables
from .minkowski import inner
from .spine import CurvatureFunctions, FrameKind, SpineCurve

BATTERY_CURVATURES = (0.3, 0.2, 0.1)
U_WINDOW = (0.4, 0.7)
HYPERBOLIC_VW = ((-0.35, 0.35), (-0.35, 0.35))
CIRCULAR_VW = ((0.3, 5.9), (-0.35, 0.35))
SURFACE_U_INTERVAL = (0.0, 1.3)


def linspace(a: float, b: float, n: int) -> list[float]:
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def battery_radius(m: int) -> RadiusProfile:
    if TypeTables.for_type(m).s > 0:
        return families.linear_radius(m, 0.2, 1.5)
    return families.linear_radius(m, 1.5, 0.2)


def battery_surface(m: int, spine_mode: str = "constant_k") -> CanalSurface:
    tables = TypeTables.for_type(m)
    if spine_mode == "constant_k":
        spine = SpineCurve.constant_curvature(tables.spine_kind, BATTERY_CURVATURES)
    elif spine_mode == "line":
        spine = SpineCurve.line(tables.spine_kind)
    elif spine_mode == "integrated":
        spine = SpineCurve.integrated(
            tables.spine_kind, CurvatureFunctions.constant(*BATTERY_CURVATURES),
            interval=(-0.1, 1.4))
    else:
        raise ValueError(f"unknown spine mode {spine_mode!r}")
    return CanalSurface(m, spine, battery_radius(m), SURFACE_U_INTERVAL)


def battery_windows(m: int) -> tuple[tuple[float, float], tuple[float, float],
                                     tuple[float, float]]:
    vw = CIRCULAR_VW if TypeTables.for_type(m).circular else HYPERBOLIC_VW
    return U_WINDOW, vw[0], vw[1]


def battery_grid(m: int, counts: tuple[int, int, int]) -> tuple[list[float],
                                                                list[float],
                                                                list[float]]:
    uw, vw, ww = battery_windows(m)
    return (linspace(*uw, counts[0]), linspace(*vw, counts[1]),
            linspace(*ww, counts[2]))


def random_battery_points(m: int, n: int, rng: random.Random) -> list[tuple[float, float, float]]:
    uw, vw, ww = battery_windows(m)
    return [(rng.uniform(*uw), rng.uniform(*vw), rng.uniform(*ww))
            for _ in range(n)]


class OracleReport(NamedTuple):
    max_rel_gaussian: float
    max_rel_mean: float
    max_principal_dist: float
    orientation: int
    n_points: int
    seconds: float


def oracle_sweep(surface: CanalSurface, us, vs, ws, mode: str = "fd",
                 step: float = 1e-4, fault_scale: float = 0.0) -> OracleReport:
    """Compare closed-form K, H and principal curvatures to the numeric
    engine over a grid; the numeric normal's global orientation sign is
    recorded at the first node and must stay constant."""
    t0 = time.perf_counter()
    worst_k = worst_h = worst_p = 0.0
    orientation: Optional[int] = None
    n = 0
    for u in us:
        for v in vs:
            for w in ws:
                closed = closedform.invariants_closed(surface, u, v, w)
                cur, forms, _ = diffgeo.surface_invariants(surface, u, v, w,
                                                           mode=mode, step=step)
                sign = closedform.orientation_sign(surface, u, v, w,
                                                   forms.normal, forms.epsilon)
                if orientation is None:
                    orientation = sign
                elif sign != orientation:
                    raise AssertionError(
                        f"orientation sign flipped inside one domain at "
                        f"({u}, {v}, {w})")
                k_closed = closed.gaussian * (1.0 + fault_scale)
                h_closed = closed.mean * (1.0 + fault_scale)
                worst_k = max(worst_k, abs(k_closed - sign * cur.gaussian)
                              / (1.0 + abs(k_closed)))
                worst_h = max(worst_h, abs(h_closed - sign * cur.mean)
                              / (1.0 + abs(h_closed)))
                pc = sorted(closed.principal)
                pn = sorted(sign * x for x in cur.principal)
                worst_p = max(worst_p, max(abs(a - b) for a, b in zip(pc, pn)))
                n += 1
    return OracleReport(worst_k, worst_h, worst_p, orientation or 0, n,
                        time.perf_counter() - t0)


class PointwiseReport(NamedTuple):
    max_identity: float
    max_membership: float
    max_orthogonality: float
    n_points: int


def pointwise_sweep(ms, n_per_type: int, seed: int = 20250808) -> PointwiseReport:
    """Scaled identity, membership and radial-orthogonality residuals on
    random valid points."""
    rng = random.Random(seed)
    worst_i = worst_m = worst_o = 0.0
    n = 0
    for m in ms:
        surface = battery_surface(m)
        r2sign = surface.tables.membership_sign
        for u, v, w in random_battery_points(m, n_per_type, rng):
            inv = closedform.invariants_closed(surface, u, v, w)
            r = surface.radius.r(u)
            scale_i = 1.0 + abs(inv.mean) + r * r * abs(inv.gaussian)
            worst_i = max(worst_i, abs(inv.identity_residual) / scale_i)
            member = surface.membership_residual(u, v, w)
            worst_m = max(worst_m, abs(member) / (1.0 + r * r))
            worst_o = max(worst_o, abs(surface.tangent_radial_orthogonality(u, v, w)))
            n += 1
    return PointwiseReport(worst_i, worst_m, worst_o, n)


class SpecializationReport(NamedTuple):
    max_rel_gaussian: float
    max_rel_mean: float
    max_rel_principal: float
    n_points: int


def _guarded_rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def specialization_sweep(n_per_type: int = 500, seed: int = 31415) -> SpecializationReport:
    """General formulas vs the explicit two-type transcriptions (types 1, 2)."""
    rng = random.Random(seed)
    worst_k = worst_h = worst_p = 0.0
    n = 0
    for m in (1, 2):
        surface = battery_surface(m)
        for u, v, w in random_battery_points(m, n_per_type, rng):
            k_gen = closedform.gaussian_closed(surface, u, v, w)
            h_gen = closedform.mean_closed(surface, u, v, w)
            p_gen = closedform.principal_closed(surface, u, v, w)
            k_12 = closedform.gaussian_closed_12(surface, u, v, w)
            h_12 = closedform.mean_closed_12(surface, u, v, w)
            p_12 = closedform.principal_closed_12(surface, u, v, w)
            worst_k = max(worst_k, _guarded_rel(k_gen, k_12))
            worst_h = max(worst_h, _guarded_rel(h_gen, h_12))
            worst_p = max(worst_p, max(_guarded_rel(a, b)
                                       for a, b in zip(p_gen, p_12)))
            n += 1
    return SpecializationReport(worst_k, worst_h, worst_p, n)


class WeingartenReport(NamedTuple):
    max_vw: float
    max_uv_zero_case: float
    min_uw_nonzero_case: float
    max_straight: float
    max_proof_rel: float


def weingarten_sweep(n_per_type: int = 25, seed: int = 2718) -> WeingartenReport:
    """Jacobian-residual structure of the (H, K) pair.

    vw-residuals vanish for every type; with k = (0, 1, 0) the uv-residual
    vanishes while the uw one does not; straight spines kill all three;
    and for types 1, 2 the finite-difference uv-residual must match its
    explicit closed form.
    """
    rng = random.Random(seed)
    max_vw = max_straight = max_proof = 0.0
    # vw-residual across all types on random points
    for m in range(1, 9):
        surface = battery_surface(m)
        for u, v, w in random_battery_points(m, n_per_type, rng):
            _, _, r_vw = closedform.weingarten_residuals(surface, u, v, w)
            max_vw = max(max_vw, abs(r_vw))
    # k = (0, 1, 0): uv vanishes, uw does not
    tables = TypeTables.for_type(1)
    spine = SpineCurve.constant_curvature(tables.spine_kind, (0.0, 1.0, 0.0))
    special = CanalSurface(1, spine, battery_radius(1), SURFACE_U_INTERVAL)
    max_uv_zero = 0.0
    min_uw = math.inf
    for u, v, w in random_battery_points(1, n_per_type, rng):
        r_uv, r_uw, _ = closedform.weingarten_residuals(special, u, v, w)
        max_uv_zero = max(max_uv_zero, abs(r_uv))
        min_uw = min(min_uw, abs(r_uw))
    # straight spine: all three residuals vanish
    for m in (2, 7):
        surface = battery_surface(m, spine_mode="line")
        for u, v, w in random_battery_points(m, 10, rng):
            res = closedform.weingarten_residuals(surface, u, v, w)
            max_straight = max(max_straight, max(abs(x) for x in res))
    # explicit uv/uw residual expressions for types 1, 2; both closed
    # fields have zero loci inside the window, so the relative measure
    # is floored at 1e-4 absolute
    for m in (1, 2):
        surface = battery_surface(m)
        for u, v, w in random_battery_points(m, 10, rng):
            r_uv, r_uw, _ = closedform.weingarten_residuals(surface, u, v, w)
            c_uv = closedform.weingarten_uv_closed_12(surface, u, v, w)
            c_uw = closedform.weingarten_uw_closed_12(surface, u, v, w)
            max_proof = max(max_proof,
                            abs(r_uv - c_uv) / max(1e-4, abs(c_uv)),
                            abs(r_uw - c_uw) / max(1e-4, abs(c_uw)))
    return WeingartenReport(max_vw, max_uv_zero, min_uw, max_straight, max_proof)


class FrameReport(NamedTuple):
    gram_long_run: float
    integrated_vs_exact: float


def frame_integrity(step: float = 1e-3) -> FrameReport:
    """Integrated frames: Gram drift over u in [0, 10] and deviation from
    the constant-curvature closed form over [0, 1]."""
    worst_gram = 0.0
    worst_dev = 0.0
    for kind in FrameKind:
        curv = CurvatureFunctions.constant(*BATTERY_CURVATURES)
        long_run = SpineCurve.integrated(kind, curv, (0.0, 10.0), step=step)
        report = long_run.frame_residuals(linspace(0.0, 10.0, 201))
        worst_gram = max(worst_gram, report.gram_max)
        short = SpineCurve.integrated(kind, curv, (0.0, 1.0), step=step)
        exact = SpineCurve.constant_curvature(kind, BATTERY_CURVATURES)
        for u in linspace(0.0, 1.0, 101):
            gi, fi = short.frame_at(u)
            ge, fe = exact.frame_at(u)
            dev = max(max(abs(c) for c in (a - b))
                      for a, b in zip((gi, *fi.vectors), (ge, *fe.vectors)))
            worst_dev = max(worst_dev, dev)
    return FrameReport(worst_gram, worst_dev)


class FamilyBatteryReport(NamedTuple):
    flat_linear_max: float
    minimal_quadrature_max: float
    quadrature_mismatch: float
    negative_control_flat: float
    negative_control_minimal: float
    root_family_singular: bool
    root_family_ode: float


def family_battery() -> FamilyBatteryReport:
    us = linspace(0.5, 1.5, 21)
    flat = families.verify_family(families.linear_radius(2, 0.5, 1.0), 2, us)
    quad_profile = families.minimal_quadrature_radius(7, 1.0, -0.5, (-0.05, 0.35))
    quad = families.verify_family(quad_profile, 7, linspace(0.0, 0.3, 21))
    mismatch = families.quadrature_mismatch(quad_profile, 7, 0.0,
                                            linspace(0.02, 0.3, 11))
    neg_flat = families.verify_family(RadiusProfile.polynomial((0.0, 0.0, 1.0)),
                                      2, us)
    neg_min = families.verify_family(
        RadiusProfile(lambda u: 1.0, lambda u: 0.0, lambda u: 0.0,
                      lambda u: 0.0, family="minimal_control"), 2, us)
    root = families.verify_family(families.flat_root_radius(1, 0.0, 0.0), 1,
                                  linspace(1.2, 3.0, 21))
    return FamilyBatteryReport(
        flat_linear_max=flat.grid_max if flat.grid_max is not None else math.inf,
        minimal_quadrature_max=quad.grid_max if quad.grid_max is not None else math.inf,
        quadrature_mismatch=mismatch,
        negative_control_flat=neg_flat.grid_max or 0.0,
        negative_control_minimal=neg_min.grid_max or 0.0,
        root_family_singular=root.degenerate,
        root_family_ode=root.ode_residuals["degenerate_envelope"])


class BatteryLine(NamedTuple):
    name: str
    value: float
    tol: float
    # comparison direction: residuals must sit under tol, negative
    # controls must sit above it
    direction: str
    ok: bool


class BatteryResult(NamedTuple):
    lines: list[BatteryLine]
    ok: bool
    seconds: float


DEFAULT_TOLERANCES: dict[str, float] = {
    "oracle_gaussian": 1e-6,
    "oracle_mean": 1e-6,
    "oracle_principal": 1e-6,
    "identity": 1e-10,
    "membership": 1e-9,
    "radial_orthogonality": 1e-7,
    "specialization": 1e-12,
    "weingarten_vw": 1e-9,
    "weingarten_uv_zero": 1e-8,
    "weingarten_uw_nonzero": 1e-4,
    "weingarten_straight": 1e-8,
    "weingarten_proof": 1e-4,
    "frame_gram": 1e-9,
    "frame_vs_exact": 1e-8,
    "flat_linear": 1e-9,
    "minimal_quadrature": 1e-7,
    "quadrature_mismatch": 1e-6,
    "negative_control_flat": 1e-2,
    "negative_control_minimal": 1e-2,
}


def run_battery(tolerances: Optional[dict[str, float]] = None,
                counts: tuple[int, int, int] = (6, 6, 6),
                n_random: int = 200, fault: bool = False) -> BatteryResult:
    """Run every residual class and compare against tolerances.

    ``fault`` injects a 1e-3 relative perturbation into the closed-form
    curvatures inside the oracle comparison; a healthy battery must then
    fail, which keeps the harness falsifiable.
    """
    t0 = time.perf_counter()
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise KeyError(f"unknown tolerance names: {sorted(unknown)}")
        tol.update(tolerances)
    lines: list[BatteryLine] = []

    def add(name: str, value: float, direction: str = "max") -> None:
        bound = tol[name]
        ok = value < bound if direction == "max" else value > bound
        lines.append(BatteryLine(name, value, bound, direction, ok))

    fault_scale = 1e-3 if fault else 0.0
    worst_k = worst_h = worst_p = 0.0
    for m in range(1, 9):
        surface = battery_surface(m)
        us, vs, ws = battery_grid(m, counts)
        rep = oracle_sweep(surface, us, vs, ws, fault_scale=fault_scale)
        worst_k = max(worst_k, rep.max_rel_gaussian)
        worst_h = max(worst_h, rep.max_rel_mean)
        worst_p = max(worst_p, rep.max_principal_dist)
    add("oracle_gaussian", worst_k)
    add("oracle_mean", worst_h)
    add("oracle_principal", worst_p)

    pw = pointwise_sweep(range(1, 9), n_random)
    add("identity", pw.max_identity)
    add("membership", pw.max_membership)
    add("radial_orthogonality", pw.max_orthogonality)

    spec = specialization_sweep(n_per_type=max(50, n_random // 2))
    add("specialization", max(spec.max_rel_gaussian, spec.max_rel_mean,
                              spec.max_rel_principal))

    wg = weingarten_sweep()
    add("weingarten_vw", wg.max_vw)
    add("weingarten_uv_zero", wg.max_uv_zero_case)
    add("weingarten_uw_nonzero", wg.min_uw_nonzero_case, direction="min")
    add("weingarten_straight", wg.max_straight)
    add("weingarten_proof", wg.max_proof_rel)

    fr = frame_integrity()
    add("frame_gram", fr.gram_long_run)
    add("frame_vs_exact", fr.integrated_vs_exact)

    fb = family_battery()
    add("flat_linear", fb.flat_linear_max)
    add("minimal_quadrature", fb.minimal_quadrature_max)
    add("quadrature_mismatch", fb.quadrature_mismatch)
    add("negative_control_flat", fb.negative_control_flat, direction="min")
    add("negative_control_minimal", fb.negative_control_minimal, direction="min")

    return BatteryResult(lines, all(line.ok for line in lines),
                         time.perf_counter() - t0)
