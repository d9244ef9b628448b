"""Radius families from the flatness and minimality classifications.

Over a straight spine the curvature numerators factor through three
scalar equations in r:

    flat family:        r'' = 0                    (linear radius)
    degenerate family:  s + r'^2 + r r'' = 0       (square-root radius)
    minimal family:     2s + 2r'^2 + 3 r r'' = 0   (quadrature radius)

The square-root family r = sqrt(s (e^(2 c1) - (u + c2)^2)) annihilates
both curvature numerators, but it also annihilates the shared
denominator core D = r r'' + s + r'^2, which is the square-rooted factor
of det(g): on that family the canal map degenerates (C_u = 0, det g = 0
identically, the envelope collapses onto a single pseudosphere slice)
and the curvature quotients are 0/0.  Construction therefore classifies
every profile by the equation it actually satisfies, and verify_family
reports singular points instead of inventing curvature values.

The quadrature family conserves c3 = r (s + r'^2)^(3/4), equivalently
integral dr / sqrt((c3/r)^(4/3) - s) = +/- u + c4, which an independent
adaptive quadrature cross-checks against the integrated trajectory.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from typing import Callable, NamedTuple, Optional

from .canal import CanalSurface, RadiusProfile, TypeTables
from .errors import DomainError, SingularPointError
from .spine import SpineCurve
from . import closedform


def straight_spine(m: int) -> SpineCurve:
    """Straight-line spine of the kind required by canal type m."""
    return SpineCurve.line(TypeTables.for_type(m).spine_kind)


def ode_residuals(profile: RadiusProfile, m: int, us) -> dict[str, float]:
    """Max residuals of the three classification equations over a grid."""
    s = float(TypeTables.for_type(m).s)
    flat = degenerate = minimal = 0.0
    for u in us:
        r, dr, d2r, _ = profile.jet(u)
        flat = max(flat, abs(d2r))
        degenerate = max(degenerate, abs(s + dr * dr + r * d2r))
        minimal = max(minimal, abs(2.0 * s + 2.0 * dr * dr + 3.0 * r * d2r))
    return {"flat": flat, "degenerate_envelope": degenerate, "minimal": minimal}


def _sample(interval: tuple[float, float], n: int = 33) -> list[float]:
    lo, hi = interval
    return [lo + (hi - lo) * (i + 1) / (n + 1) for i in range(n)]


def _assert_ode(profile: RadiusProfile, m: int, key: str, what: str) -> None:
    us = _sample(profile.interval)
    res = ode_residuals(profile, m, us)
    scale = 1.0 + max(abs(profile.r(u)) for u in us)
    if res[key] > 1e-10 * scale:
        raise DomainError(f"{what} radius does not satisfy its defining "
                          f"equation (residual {res[key]:.3e})")


def linear_radius(m: int, c1: float, c2: float) -> RadiusProfile:
    """r(u) = c1 u + c2, valid for type m when s + c1^2 > 0."""
    s = TypeTables.for_type(m).s
    if s + c1 * c1 <= 0.0:
        raise DomainError(
            f"linear radius needs s + c1^2 > 0; type {m} has s = {s:+d} "
            f"and c1 = {c1}")
    if c1 == 0.0:
        if c2 <= 0.0:
            raise DomainError("constant radius must be positive")
        interval = (-math.inf, math.inf)
    elif c1 > 0.0:
        interval = (-c2 / c1, math.inf)
    else:
        interval = (-math.inf, -c2 / c1)
    zero = lambda u: 0.0
    return RadiusProfile(lambda u: c1 * u + c2, lambda u: c1, zero, zero,
                         family="linear", interval=interval)


def _root_radius(m: int, c1: float, c2: float, sign: int, family: str) -> RadiusProfile:
    if sign != 1:
        raise DomainError("the negative square-root branch is not a radius")
    s = TypeTables.for_type(m).s
    e2c1 = math.exp(2.0 * c1)
    root = math.sqrt(e2c1)
    if s > 0:
        interval = (-c2 - root, -c2 + root)
    else:
        # the radicand -(e^(2 c1) - q^2) is positive on |q| > e^c1; keep the
        # right branch by convention
        interval = (-c2 + root, math.inf)

    def r(u: float) -> float:
        q = u + c2
        rad = s * (e2c1 - q * q)
        if rad <= 0.0:
            raise DomainError(f"square-root radius undefined at u = {u}")
        return math.sqrt(rad)

    def dr(u: float) -> float:
        return -s * (u + c2) / r(u)

    def d2r(u: float) -> float:
        return -e2c1 / r(u) ** 3

    def d3r(u: float) -> float:
        return -3.0 * e2c1 * s * (u + c2) / r(u) ** 5

    profile = RadiusProfile(r, dr, d2r, d3r, family=family, interval=interval)
    _assert_ode(profile, m, "degenerate_envelope", family)
    return profile


def flat_root_radius(m: int, c1: float, c2: float, sign: int = 1) -> RadiusProfile:
    """Square-root radius branch of the flatness classification."""
    return _root_radius(m, c1, c2, sign, "flat_root")


def minimal_root_radius(m: int, c1: float, c2: float, sign: int = 1) -> RadiusProfile:
    """Square-root radius branch of the minimality classification.

    Algebraically the same family as flat_root_radius; both satisfy the
    degenerate-envelope equation s + r'^2 + r r'' = 0.
    """
    return _root_radius(m, c1, c2, sign, "minimal_root")


class _DenseODE(NamedTuple):
    us: list[float]
    rs: list[float]
    ps: list[float]
    r2s: list[float]


def minimal_quadrature_radius(m: int, r0: float, dr0: float,
                              interval: tuple[float, float], step: float = 1e-4,
                              u0: float = 0.0) -> RadiusProfile:
    """Radius solving 2s + 2r'^2 + 3 r r'' = 0 by fixed-step RK4.

    Second and third derivatives are read off the equation itself, so
    the returned profile satisfies it to rounding at every point of the
    dense output.
    """
    s = float(TypeTables.for_type(m).s)
    if r0 <= 0.0:
        raise DomainError("initial radius must be positive")
    if s + dr0 * dr0 <= 0.0:
        raise DomainError("initial slope violates s + r'^2 > 0")
    lo, hi = float(interval[0]), float(interval[1])
    if not (lo <= u0 <= hi):
        raise DomainError("u0 must lie inside the integration interval")

    def accel(r: float, p: float) -> float:
        return -(2.0 * s + 2.0 * p * p) / (3.0 * r)

    def march(u_end: float) -> list[tuple[float, float, float]]:
        out = []
        u, r, p = u0, r0, dr0
        if u_end == u0:
            return out
        direction = 1.0 if u_end > u0 else -1.0
        h = step * direction
        while (u_end - u) * direction > 1e-14 * max(1.0, abs(u_end)):
            remaining = u_end - u
            hh = remaining if abs(remaining) <= abs(h) * (1.0 + 1e-9) else h
            k1r, k1p = p, accel(r, p)
            k2r, k2p = p + 0.5 * hh * k1p, accel(r + 0.5 * hh * k1r, p + 0.5 * hh * k1p)
            k3r, k3p = p + 0.5 * hh * k2p, accel(r + 0.5 * hh * k2r, p + 0.5 * hh * k2p)
            k4r, k4p = p + hh * k3p, accel(r + hh * k3r, p + hh * k3p)
            r = r + hh * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
            p = p + hh * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
            u = u + hh
            if r <= 0.0:
                raise DomainError(f"quadrature radius hit r <= 0 at u = {u}")
            if s + p * p <= 0.0:
                raise DomainError(f"quadrature radius left validity at u = {u}")
            out.append((u, r, p))
        return out

    backward = march(lo)
    forward = march(hi)
    knots = list(reversed(backward)) + [(u0, r0, dr0)] + forward
    dense = _DenseODE(us=[k[0] for k in knots], rs=[k[1] for k in knots],
                      ps=[k[2] for k in knots],
                      r2s=[accel(k[1], k[2]) for k in knots])

    def locate(u: float) -> tuple[int, float, float]:
        i = bisect_right(dense.us, u)
        i = min(max(i, 1), len(dense.us) - 1)
        ua, ub = dense.us[i - 1], dense.us[i]
        return i, ua, ub

    def hermite(u: float, ya: float, yb: float, da: float, db: float,
                ua: float, ub: float) -> float:
        h = ub - ua
        t = (u - ua) / h
        t2, t3 = t * t, t * t * t
        return (ya * (2.0 * t3 - 3.0 * t2 + 1.0) + da * h * (t3 - 2.0 * t2 + t)
                + yb * (-2.0 * t3 + 3.0 * t2) + db * h * (t3 - t2))

    def r_of(u: float) -> float:
        i, ua, ub = locate(u)
        return hermite(u, dense.rs[i - 1], dense.rs[i], dense.ps[i - 1],
                       dense.ps[i], ua, ub)

    def dr_of(u: float) -> float:
        i, ua, ub = locate(u)
        return hermite(u, dense.ps[i - 1], dense.ps[i], dense.r2s[i - 1],
                       dense.r2s[i], ua, ub)

    def d2r_of(u: float) -> float:
        return accel(r_of(u), dr_of(u))

    def d3r_of(u: float) -> float:
        # differentiating the equation gives r''' = -(7/3) r' r'' / r
        r = r_of(u)
        p = dr_of(u)
        return -(7.0 / 3.0) * p * accel(r, p) / r

    profile = RadiusProfile(r_of, dr_of, d2r_of, d3r_of,
                            family="minimal_quadrature", interval=(lo, hi))
    _assert_ode(profile, m, "minimal", "quadrature")
    return profile


def quadrature_constant(profile: RadiusProfile, m: int, u: float) -> float:
    """Conserved constant c3 = r (s + r'^2)^(3/4) of the minimal family."""
    s = float(TypeTables.for_type(m).s)
    r = profile.r(u)
    return r * (s + profile.dr(u) ** 2) ** 0.75


def _adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                      tol: float) -> float:
    def simpson(x0: float, x2: float, f0: float, f1: float, f2: float) -> float:
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, tol_, depth):
        xm = 0.5 * (x0 + x2)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        fl, fr = f(xl), f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol_:
            return left + right + (left + right - whole) / 15.0
        return (recurse(x0, xm, f0, fl, f1, left, 0.5 * tol_, depth - 1)
                + recurse(xm, x2, f1, fr, f2, right, 0.5 * tol_, depth - 1))

    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 40)


def quadrature_mismatch(profile: RadiusProfile, m: int, u_ref: float, us) -> float:
    """Max |u - u_recovered| over us, recovering u from the dr-integral.

    Requires r to be strictly monotone between u_ref and each sample (no
    turning point of r'): the integral form inverts r only piecewise.
    """
    s = float(TypeTables.for_type(m).s)
    c3 = quadrature_constant(profile, m, u_ref)
    r_ref = profile.r(u_ref)

    def integrand(r: float) -> float:
        rad = (c3 / r) ** (4.0 / 3.0) - s
        if rad <= 0.0:
            raise DomainError("quadrature integrand hit its turning point")
        return 1.0 / math.sqrt(rad)

    worst = 0.0
    for u in us:
        if profile.dr(u) * profile.dr(u_ref) <= 0.0:
            raise DomainError("samples must avoid turning points of r")
        direction = math.copysign(1.0, profile.dr(u_ref))
        # dr = sign(r') sqrt((c3/r)^(4/3) - s) du, so the signed r-integral
        # recovers sign(r') * (u - u_ref)
        integral = _adaptive_simpson(integrand, r_ref, profile.r(u), 1e-12)
        recovered = u_ref + direction * integral
        worst = max(worst, abs(recovered - u))
    return worst


class FamilyReport(NamedTuple):
    family: str
    quantity: str
    grid_max: Optional[float]
    singular_points: int
    n_points: int
    ode_residuals: dict[str, float]
    degenerate: bool


def verify_family(profile: RadiusProfile, m: int, us, v: float = 0.123,
                  w: float = 0.2) -> FamilyReport:
    """Sweep the closed curvature field the family is supposed to kill.

    Flat families are swept in Gaussian curvature, minimal families in
    mean curvature (over a straight spine both fields depend on u only).
    Points where the parametrization is singular are counted instead of
    evaluated; a family singular everywhere is reported degenerate.
    """
    quantity = "mean" if profile.family.startswith("minimal") else "gaussian"
    us = list(us)
    pad = 1e-9 * max(1.0, abs(us[0]), abs(us[-1]))
    surface = CanalSurface(m, straight_spine(m), profile,
                           (us[0] - pad, us[-1] + pad))
    func = closedform.mean_closed if quantity == "mean" else closedform.gaussian_closed
    grid_max: Optional[float] = None
    singular = 0
    for u in us:
        try:
            value = abs(func(surface, u, v, w))
        except SingularPointError:
            singular += 1
            continue
        grid_max = value if grid_max is None else max(grid_max, value)
    return FamilyReport(family=profile.family, quantity=quantity,
                        grid_max=grid_max, singular_points=singular,
                        n_points=len(us),
                        ode_residuals=ode_residuals(profile, m, us),
                        degenerate=singular == len(us))
