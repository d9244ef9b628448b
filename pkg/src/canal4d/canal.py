"""The eight canal hypersurface types over non-null spine curves.

A canal hypersurface of type m in {1..8} is the envelope of a family of
pseudo hyperspheres (m odd) or pseudo hyperbolic hyperspheres (m even)
centered along a unit-speed spine with radius function r(u):

    C(u,v,w) = gamma(u) + s r r' B1 + r sqrt(s + r'^2) (f1 B2 + f2 B3 + f3 B4)

where s = (-1)^(m + (8-m)!) is the radial parity constant and the shape
functions (f1, f2, f3) trace the unit pseudosphere of the normal space:

    types 1,2:  (cosh v cosh w, sinh w,        sinh v cosh w)
    types 3,4:  (sinh v cosh w, cosh v cosh w, sinh w)
    types 5,6:  (sinh w,        sinh v cosh w, cosh v cosh w)
    types 7,8:  (cos v cos w,   sin v cos w,   sin w)

The signature-weighted square of the shape row is -1 for types 1..6
(one timelike normal leg) and +1 for types 7, 8 (timelike tangent), so
<C - gamma, C - gamma> = (-1)^(m+1) r^2 holds identically: the envelope
really lies on the moving spheres.  The parametrization is valid where
s + r'^2 > 0; on that strip the unit normal field is

    N = eta ( b * r' B1 + (-1)^m sqrt(s + r'^2) (f1 B2 + f2 B3 + f3 B4) )

with b = +1 for types 1..6 and -1 for types 7, 8, and the per-type
constants (eps_i, mu_i, eta) used by the closed curvature fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import DomainError
from .diffgeo import SurfaceJet
from .minkowski import Vec4, inner
from .spine import EvaluationMode, FrameKind, SpineCurve, bishop_derivative

# Radial parity s = (-1)^(m + (8-m)!): (8-m)! is even for m <= 6 and odd
# for m in {7, 8}, so only the parity of m matters below 7.  A unit test
# re-derives this table from the factorials.
_S = {1: -1, 2: 1, 3: -1, 4: 1, 5: -1, 6: 1, 7: 1, 8: -1}

_EPS = {1: (1, -1, -1), 2: (1, -1, -1), 3: (1, -1, 1), 4: (1, -1, 1),
        5: (1, 1, -1), 6: (1, 1, -1), 7: (1, 1, 1), 8: (1, 1, 1)}

_MU = {1: (-1, 1, 1), 2: (1, -1, -1), 3: (1, -1, 1), 4: (-1, 1, -1),
       5: (1, 1, -1), 6: (-1, -1, 1), 7: (1, 1, 1), 8: (-1, -1, -1)}

_ETA = {1: -1, 2: -1, 3: -1, 4: -1, 5: 1, 6: -1, 7: 1, 8: -1}

# Coefficient of r' B1 in the unit normal: (-1)^((8-m)!).
_B1_NORMAL_SIGN = {m: (1 if m <= 6 else -1) for m in range(1, 9)}

_SPINE_KIND = {1: FrameKind.SPACELIKE_B2_TIMELIKE, 2: FrameKind.SPACELIKE_B2_TIMELIKE,
               3: FrameKind.SPACELIKE_B3_TIMELIKE, 4: FrameKind.SPACELIKE_B3_TIMELIKE,
               5: FrameKind.SPACELIKE_B4_TIMELIKE, 6: FrameKind.SPACELIKE_B4_TIMELIKE,
               7: FrameKind.TIMELIKE, 8: FrameKind.TIMELIKE}

VALIDITY_MARGIN = 1e-12

_TWO_PI = 2.0 * math.pi
_HYPERBOLIC_WINDOW = ((-2.0, 2.0), (-2.0, 2.0))
# cos w = 0 is a coordinate degeneracy of the circular row; keep clear.
_CIRCULAR_WINDOW = ((0.0, _TWO_PI), (-0.5 * math.pi + 0.2, 0.5 * math.pi - 0.2))


def radial_parity(m: int) -> int:
    """(-1)^(m + (8-m)!) computed from the factorial, for cross-checks."""
    return -1 if (m + math.factorial(8 - m)) % 2 else 1


@dataclass(frozen=True)
class TypeTables:
    """Sign and shape constants of one canal type."""

    m: int
    s: int
    eps: tuple[int, int, int]
    mu: tuple[int, int, int]
    eta: int
    b1_normal_sign: int
    circular: bool
    spine_kind: FrameKind

    @classmethod
    def for_type(cls, m: int) -> "TypeTables":
        if m not in _S:
            raise DomainError(f"canal type must be in 1..8, got {m}")
        return cls(m=m, s=_S[m], eps=_EPS[m], mu=_MU[m], eta=_ETA[m],
                   b1_normal_sign=_B1_NORMAL_SIGN[m], circular=m >= 7,
                   spine_kind=_SPINE_KIND[m])

    @property
    def membership_sign(self) -> int:
        """Sign of <C - gamma, C - gamma> / r^2, i.e. (-1)^(m+1)."""
        return 1 if self.m % 2 else -1


class ShapeJet(NamedTuple):
    f: tuple[float, float, float]
    fv: tuple[float, float, float]
    fw: tuple[float, float, float]
    fvv: tuple[float, float, float]
    fvw: tuple[float, float, float]
    fww: tuple[float, float, float]


def shape_functions(m: int, v: float, w: float) -> tuple[float, float, float]:
    """Shape row (f1, f2, f3) of type m at angles (v, w)."""
    row = (m - 1) // 2
    if row == 3:
        cv, sv, cw, sw = math.cos(v), math.sin(v), math.cos(w), math.sin(w)
        return (cv * cw, sv * cw, sw)
    cv, sv, cw, sw = math.cosh(v), math.sinh(v), math.cosh(w), math.sinh(w)
    if row == 0:
        return (cv * cw, sw, sv * cw)
    if row == 1:
        return (sv * cw, cv * cw, sw)
    return (sw, sv * cw, cv * cw)


def shape_jet(m: int, v: float, w: float) -> ShapeJet:
    """Shape row with its first and second partials in v and w."""
    row = (m - 1) // 2
    if row == 3:
        cv, sv, cw, sw = math.cos(v), math.sin(v), math.cos(w), math.sin(w)
        return ShapeJet(
            f=(cv * cw, sv * cw, sw),
            fv=(-sv * cw, cv * cw, 0.0),
            fw=(-cv * sw, -sv * sw, cw),
            fvv=(-cv * cw, -sv * cw, 0.0),
            fvw=(sv * sw, -cv * sw, 0.0),
            fww=(-cv * cw, -sv * cw, -sw))
    cv, sv, cw, sw = math.cosh(v), math.sinh(v), math.cosh(w), math.sinh(w)
    if row == 0:
        return ShapeJet(
            f=(cv * cw, sw, sv * cw),
            fv=(sv * cw, 0.0, cv * cw),
            fw=(cv * sw, cw, sv * sw),
            fvv=(cv * cw, 0.0, sv * cw),
            fvw=(sv * sw, 0.0, cv * sw),
            fww=(cv * cw, sw, sv * cw))
    if row == 1:
        return ShapeJet(
            f=(sv * cw, cv * cw, sw),
            fv=(cv * cw, sv * cw, 0.0),
            fw=(sv * sw, cv * sw, cw),
            fvv=(sv * cw, cv * cw, 0.0),
            fvw=(cv * sw, sv * sw, 0.0),
            fww=(sv * cw, cv * cw, sw))
    return ShapeJet(
        f=(sw, sv * cw, cv * cw),
        fv=(0.0, cv * cw, sv * cw),
        fw=(cw, sv * sw, cv * sw),
        fvv=(0.0, sv * cw, cv * cw),
        fvw=(0.0, cv * sw, sv * sw),
        fww=(sw, sv * cw, cv * cw))


@dataclass(frozen=True)
class RadiusProfile:
    """Radius function r(u) with exact derivatives r', r'', r'''."""

    r: Callable[[float], float]
    dr: Callable[[float], float]
    d2r: Callable[[float], float]
    d3r: Callable[[float], float]
    family: str = "custom"
    interval: tuple[float, float] = (-math.inf, math.inf)

    def jet(self, u: float) -> tuple[float, float, float, float]:
        return (self.r(u), self.dr(u), self.d2r(u), self.d3r(u))

    @classmethod
    def constant(cls, value: float) -> "RadiusProfile":
        zero = lambda u: 0.0
        return cls(lambda u: value, zero, zero, zero, family="constant")

    @classmethod
    def linear(cls, c1: float, c2: float) -> "RadiusProfile":
        zero = lambda u: 0.0
        return cls(lambda u: c1 * u + c2, lambda u: c1, zero, zero, family="linear")

    @classmethod
    def polynomial(cls, coeffs: tuple[float, ...]) -> "RadiusProfile":
        """r(u) = sum coeffs[i] * u^i with exact derivatives."""
        def deriv(cs):
            return tuple(i * c for i, c in enumerate(cs))[1:]

        def horner(cs):
            def f(u, cs=cs):
                acc = 0.0
                for c in reversed(cs):
                    acc = acc * u + c
                return acc
            return f

        d1 = deriv(coeffs)
        d2 = deriv(d1)
        d3 = deriv(d2)
        return cls(horner(coeffs), horner(d1), horner(d2), horner(d3),
                   family="polynomial")


def _combine(b2: Vec4, b3: Vec4, b4: Vec4, c: tuple[float, float, float]) -> Vec4:
    return b2 * c[0] + b3 * c[1] + b4 * c[2]


class CanalSurface:
    """One canal hypersurface: type constants, spine, radius, parameter box.

    Immutable after construction; construction verifies the spine-kind
    pairing and the validity condition s + r'(u)^2 > 0 on the whole u
    interval (strict, with margin), so every later evaluation is safe.
    """

    def __init__(self, m: int, spine: SpineCurve, radius: RadiusProfile,
                 u_interval: tuple[float, float],
                 v_interval: tuple[float, float] | None = None,
                 w_interval: tuple[float, float] | None = None,
                 validity_samples: int = 257):
        self.tables = TypeTables.for_type(m)
        if spine.kind is not self.tables.spine_kind:
            raise DomainError(
                f"spine.kind: type {m} needs {self.tables.spine_kind.value}, "
                f"got {spine.kind.value}")
        window = _CIRCULAR_WINDOW if self.tables.circular else _HYPERBOLIC_WINDOW
        self.spine = spine
        self.radius = radius
        self.u_interval = (float(u_interval[0]), float(u_interval[1]))
        self.v_interval = tuple(map(float, v_interval or window[0]))
        self.w_interval = tuple(map(float, w_interval or window[1]))
        if not self.u_interval[0] < self.u_interval[1]:
            raise DomainError("u_interval must be a nonempty open interval")
        lo, hi = self.u_interval
        for owner, host in (("spine", spine.interval),
                            ("radius", radius.interval)):
            if lo < host[0] - 1e-12 or hi > host[1] + 1e-12:
                raise DomainError(f"u_interval [{lo}, {hi}] leaves the "
                                  f"{owner} domain [{host[0]}, {host[1]}]")
        self._validate_radius(validity_samples)

    def _validate_radius(self, samples: int) -> None:
        lo, hi = self.u_interval
        s = self.tables.s
        n = max(2, samples)
        for i in range(n):
            u = lo + (hi - lo) * i / (n - 1)
            r = self.radius.r(u)
            dr = self.radius.dr(u)
            if not (r > 0.0):
                raise DomainError(f"radius must stay positive; r({u}) = {r}")
            if s + dr * dr <= VALIDITY_MARGIN:
                raise DomainError(
                    f"validity s + r'^2 > 0 fails at u = {u} "
                    f"(s = {s:+d}, r' = {dr})")

    # -- bookkeeping ------------------------------------------------------

    @property
    def m(self) -> int:
        return self.tables.m

    def _check_params(self, u: float, v: float, w: float) -> None:
        for name, x, (lo, hi) in (("u", u, self.u_interval),
                                  ("v", v, self.v_interval),
                                  ("w", w, self.w_interval)):
            slack = 1e-9 * max(1.0, abs(lo), abs(hi))
            if x < lo - slack or x > hi + slack:
                raise DomainError(f"{name} = {x} outside [{lo}, {hi}]")

    def _radial_data(self, u: float) -> tuple[float, float, float, float]:
        r = self.radius.r(u)
        dr = self.radius.dr(u)
        t = self.tables.s + dr * dr
        if t <= VALIDITY_MARGIN:
            raise DomainError(f"validity s + r'^2 > 0 fails at u = {u}")
        return r, dr, t, math.sqrt(t)

    # -- geometry ---------------------------------------------------------

    def evaluate(self, u: float, v: float, w: float) -> Vec4:
        """Surface point C(u, v, w)."""
        self._check_params(u, v, w)
        r, dr, _, sq = self._radial_data(u)
        gamma, frame = self.spine.frame_at(u)
        f = shape_functions(self.m, v, w)
        radial = _combine(frame.b2, frame.b3, frame.b4, f)
        return gamma + frame.b1 * (self.tables.s * r * dr) + radial * (r * sq)

    def gauss_map(self, u: float, v: float, w: float) -> Vec4:
        """Closed-form unit normal field at (u, v, w)."""
        self._check_params(u, v, w)
        _, dr, _, sq = self._radial_data(u)
        _, frame = self.spine.frame_at(u)
        f = shape_functions(self.m, v, w)
        radial = _combine(frame.b2, frame.b3, frame.b4, f)
        sign_m = -1.0 if self.m % 2 else 1.0
        n = frame.b1 * (self.tables.b1_normal_sign * dr) + radial * (sign_m * sq)
        return n * float(self.tables.eta)

    def membership_residual(self, u: float, v: float, w: float) -> float:
        """<C - gamma, C - gamma> - (-1)^(m+1) r^2; zero on the envelope."""
        self._check_params(u, v, w)
        r, dr, _, sq = self._radial_data(u)
        _, frame = self.spine.frame_at(u)
        f = shape_functions(self.m, v, w)
        radial = _combine(frame.b2, frame.b3, frame.b4, f)
        diff = frame.b1 * (self.tables.s * r * dr) + radial * (r * sq)
        return inner(diff, diff) - self.tables.membership_sign * r * r

    def tangent_radial_orthogonality(self, u: float, v: float, w: float,
                                     step: float = 1e-5) -> float:
        """<C - gamma, dC/du> with a central-difference tangent; ~ 0."""
        self._check_params(u, v, w)
        r, dr, _, sq = self._radial_data(u)
        _, frame = self.spine.frame_at(u)
        f = shape_functions(self.m, v, w)
        radial = _combine(frame.b2, frame.b3, frame.b4, f)
        diff = frame.b1 * (self.tables.s * r * dr) + radial * (r * sq)
        h = step * max(1.0, abs(u))
        cu = (self.evaluate(u + h, v, w) - self.evaluate(u - h, v, w)) * (0.5 / h)
        return inner(diff, cu)

    # -- exact partials ----------------------------------------------------

    def analytic_jet(self, u: float, v: float, w: float) -> SurfaceJet:
        """Exact second-order jet; needs an exactly evaluable frame."""
        if self.spine.mode is EvaluationMode.INTEGRATED:
            raise DomainError(
                "analytic partials need a line or constant-curvature spine")
        self._check_params(u, v, w)
        s = float(self.tables.s)
        r0, r1, r2, r3 = self.radius.jet(u)
        t = self.tables.s + r1 * r1
        if t <= VALIDITY_MARGIN:
            raise DomainError(f"validity s + r'^2 > 0 fails at u = {u}")
        sq = math.sqrt(t)
        gamma, frame = self.spine.frame_at(u)
        kind = self.spine.kind
        k1, k2, k3 = self.spine.curvatures.values(u)
        dk1, dk2, dk3 = self.spine.curvatures.derivative_values(u)
        b1, b2, b3, b4 = frame.vectors
        db1, db2, db3, db4 = bishop_derivative(kind, (k1, k2, k3), frame)
        c2_, c3_, c4_ = kind.normal_signs
        lam = c2_ * k1 * k1 + c3_ * k2 * k2 + c4_ * k3 * k3
        ddb1 = b2 * dk1 + b3 * dk2 + b4 * dk3 + b1 * lam
        ddb2 = (b1 * dk1 + db1 * k1) * float(c2_)
        ddb3 = (b1 * dk2 + db1 * k2) * float(c3_)
        ddb4 = (b1 * dk3 + db1 * k3) * float(c4_)
        # radial coefficients a = s r r', b = r sqrt(t) and their u-derivatives
        a = s * r0 * r1
        da = s * (r1 * r1 + r0 * r2)
        dda = s * (3.0 * r1 * r2 + r0 * r3)
        b = r0 * sq
        db = r1 * (t + r0 * r2) / sq
        ddb = (r2 * sq
               + (2.0 * r1 * r1 * r2 + r0 * r2 * r2 + r0 * r1 * r3) / sq
               - (r0 * r1 * r1 * r2 * r2) / (t * sq))
        sj = shape_jet(self.m, v, w)
        f_ = _combine(b2, b3, b4, sj.f)
        f_v = _combine(b2, b3, b4, sj.fv)
        f_w = _combine(b2, b3, b4, sj.fw)
        f_vv = _combine(b2, b3, b4, sj.fvv)
        f_vw = _combine(b2, b3, b4, sj.fvw)
        f_ww = _combine(b2, b3, b4, sj.fww)
        f_u = _combine(db2, db3, db4, sj.f)
        f_uu = _combine(ddb2, ddb3, ddb4, sj.f)
        f_vu = _combine(db2, db3, db4, sj.fv)
        f_wu = _combine(db2, db3, db4, sj.fw)
        point = gamma + b1 * a + f_ * b
        du_ = b1 * (1.0 + da) + db1 * a + f_ * db + f_u * b
        duu = (b1 * dda + db1 * (1.0 + 2.0 * da) + ddb1 * a
               + f_ * ddb + f_u * (2.0 * db) + f_uu * b)
        return SurfaceJet(point=point, du=du_, dv=f_v * b, dw=f_w * b,
                          duu=duu, duv=f_v * db + f_vu * b,
                          duw=f_w * db + f_wu * b, dvv=f_vv * b,
                          dvw=f_vw * b, dww=f_ww * b)


def evaluate_explicit_12(surface: CanalSurface, u: float, v: float, w: float) -> Vec4:
    """Independent transcription of the type-1/2 parametrization.

    Written directly in terms of the hyperbolic shape row instead of the
    shared table machinery; used to diff the two code paths.
    """
    n = surface.m
    if n not in (1, 2):
        raise DomainError("explicit form covers types 1 and 2 only")
    sn = -1.0 if n == 1 else 1.0
    r = surface.radius.r(u)
    dr = surface.radius.dr(u)
    root = math.sqrt(sn + dr * dr)
    gamma, frame = surface.spine.frame_at(u)
    cv, sv, cw, sw = math.cosh(v), math.sinh(v), math.cosh(w), math.sinh(w)
    return (gamma + frame.b1 * (sn * r * dr)
            + (frame.b2 * (cv * cw) + frame.b3 * sw + frame.b4 * (sv * cw))
            * (r * root))
