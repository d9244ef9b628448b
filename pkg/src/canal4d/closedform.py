"""Closed-form curvature fields of the eight canal types.

With s the radial parity, T = s + r'^2, the shape row f_i and the
per-type constants (eps_i, mu_i, eta), every type shares one scalar
denominator core

    D = r (r'' + sqrt(T) * sum_i mu_i k_i f_i) + T,

which is exactly the square-rooted factor of det(g): points with D = 0
are parametric singularities of the canal map.  On the valid strip the
Gaussian and mean curvatures are the rational fields

    K = [ r''(T + r r'')
          + sum_ij eps_i eps_j k_i k_j r T f_i f_j
          + sum_i mu_i k_i sqrt(T) (T + 2 r r'') f_i ] / (eta r^2 D^2)

    H = [ (T + r r'')(2T + 3 r r'')
          + 3 sum_ij eps_i eps_j k_i k_j r^2 T f_i f_j
          + sum_i mu_i k_i r sqrt(T) (5T + 6 r r'') f_i ] / (3 eta r D^2)

with principal curvatures ((-1)^(m+1) eta / r twice, (-1)^(m+1) r^2 K)
and the pointwise identity 3H - r^2 K - 2 eta / r = 0.

The first canal pair (types 1 and 2) is also transcribed in its explicit
two-type form (suffix ``_12``); diffing both code paths guards against
transcription slips in either.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .canal import CanalSurface, shape_functions
from .errors import DomainError, SingularPointError

# |D| below this many times its own term-magnitude scale counts as a
# singular point of the parametrization (denominator ~ 1e-14 * scale
# once squared).
_SINGULAR_REL = 1e-7


class ClosedInvariants(NamedTuple):
    gaussian: float
    mean: float
    principal: tuple[float, float, float]
    identity_residual: float


class _Context(NamedTuple):
    m: int
    s: float
    eta: float
    eps: tuple[int, int, int]
    mu: tuple[int, int, int]
    k: tuple[float, float, float]
    r: float
    dr: float
    d2r: float
    f: tuple[float, float, float]
    t: float
    sqrt_t: float
    denom: float


def _context(surface: CanalSurface, u: float, v: float, w: float) -> _Context:
    tables = surface.tables
    r, dr, d2r, _ = surface.radius.jet(u)
    t = tables.s + dr * dr
    if t <= 0.0:
        raise DomainError(f"validity s + r'^2 > 0 fails at u = {u}")
    sqrt_t = math.sqrt(t)
    k = surface.spine.curvatures.values(u)
    f = shape_functions(tables.m, v, w)
    mu_k_f = (tables.mu[0] * k[0] * f[0] + tables.mu[1] * k[1] * f[1]
              + tables.mu[2] * k[2] * f[2])
    denom = r * (d2r + sqrt_t * mu_k_f) + t
    denom_scale = (abs(r) * (abs(d2r) + sqrt_t * (abs(k[0] * f[0])
                                                  + abs(k[1] * f[1])
                                                  + abs(k[2] * f[2])))
                   + abs(t) + 1e-300)
    if abs(denom) <= _SINGULAR_REL * denom_scale:
        raise SingularPointError(
            f"curvature denominator vanishes at (u, v, w) = ({u}, {v}, {w})")
    return _Context(tables.m, float(tables.s), float(tables.eta), tables.eps,
                    tables.mu, k, r, dr, d2r, f, t, sqrt_t, denom)


def _gaussian_from(ctx: _Context) -> float:
    eps, mu, k, f = ctx.eps, ctx.mu, ctx.k, ctx.f
    rd2 = ctx.r * ctx.d2r
    num = ctx.d2r * (ctx.t + rd2)
    for i in range(3):
        for j in range(3):
            num += (eps[i] * eps[j] * k[i] * k[j] * ctx.r * ctx.t * f[i] * f[j])
        num += mu[i] * k[i] * ctx.sqrt_t * (ctx.t + 2.0 * rd2) * f[i]
    return num / (ctx.eta * ctx.r * ctx.r * ctx.denom * ctx.denom)


def _mean_from(ctx: _Context) -> float:
    eps, mu, k, f = ctx.eps, ctx.mu, ctx.k, ctx.f
    rd2 = ctx.r * ctx.d2r
    num = (ctx.t + rd2) * (2.0 * ctx.t + 3.0 * rd2)
    for i in range(3):
        for j in range(3):
            num += (3.0 * eps[i] * eps[j] * k[i] * k[j]
                    * ctx.r * ctx.r * ctx.t * f[i] * f[j])
        num += mu[i] * k[i] * ctx.r * ctx.sqrt_t * (5.0 * ctx.t + 6.0 * rd2) * f[i]
    return num / (3.0 * ctx.eta * ctx.r * ctx.denom * ctx.denom)


def gaussian_closed(surface: CanalSurface, u: float, v: float, w: float) -> float:
    """Closed-form Gaussian curvature at (u, v, w)."""
    return _gaussian_from(_context(surface, u, v, w))


def mean_closed(surface: CanalSurface, u: float, v: float, w: float) -> float:
    """Closed-form mean curvature at (u, v, w)."""
    return _mean_from(_context(surface, u, v, w))


def principal_closed(surface: CanalSurface, u: float, v: float,
                     w: float) -> tuple[float, float, float]:
    """Principal curvatures (c1, c2, c3) with c1 = c2 = (-1)^(m+1) eta / r."""
    ctx = _context(surface, u, v, w)
    sign = 1.0 if ctx.m % 2 else -1.0
    c12 = sign * ctx.eta / ctx.r
    c3 = sign * ctx.r * ctx.r * _gaussian_from(ctx)
    return (c12, c12, c3)


def identity_residual(surface: CanalSurface, u: float, v: float, w: float) -> float:
    """3H - r^2 K - 2 eta / r; identically zero for every type."""
    ctx = _context(surface, u, v, w)
    return (3.0 * _mean_from(ctx) - ctx.r * ctx.r * _gaussian_from(ctx)
            - 2.0 * ctx.eta / ctx.r)


def invariants_closed(surface: CanalSurface, u: float, v: float,
                      w: float) -> ClosedInvariants:
    """All closed-form invariants from one shared context evaluation."""
    ctx = _context(surface, u, v, w)
    gaussian = _gaussian_from(ctx)
    mean = _mean_from(ctx)
    sign = 1.0 if ctx.m % 2 else -1.0
    c12 = sign * ctx.eta / ctx.r
    principal = (c12, c12, sign * ctx.r * ctx.r * gaussian)
    residual = 3.0 * mean - ctx.r * ctx.r * gaussian - 2.0 * ctx.eta / ctx.r
    return ClosedInvariants(gaussian, mean, principal, residual)


def weingarten_residuals(surface: CanalSurface, u: float, v: float, w: float,
                         step: float = 1e-5) -> tuple[float, float, float]:
    """Jacobian-style residuals (R_uv, R_uw, R_vw) of the pair (H, K).

    R_ab = H_a K_b - H_b K_a with central-difference partials of the
    closed-form fields.  R_vw vanishes for every canal; R_uv vanishes
    iff k1 = k3 = 0; R_uw vanishes iff the spine is a straight line.
    """
    hu = step * max(1.0, abs(u))
    hv = step * max(1.0, abs(v))
    hw = step * max(1.0, abs(w))

    def fields(uu, vv, ww):
        ctx = _context(surface, uu, vv, ww)
        return _mean_from(ctx), _gaussian_from(ctx)

    h_up, k_up = fields(u + hu, v, w)
    h_um, k_um = fields(u - hu, v, w)
    h_vp, k_vp = fields(u, v + hv, w)
    h_vm, k_vm = fields(u, v - hv, w)
    h_wp, k_wp = fields(u, v, w + hw)
    h_wm, k_wm = fields(u, v, w - hw)
    h_u = (h_up - h_um) / (2.0 * hu)
    h_v = (h_vp - h_vm) / (2.0 * hv)
    h_w = (h_wp - h_wm) / (2.0 * hw)
    k_u = (k_up - k_um) / (2.0 * hu)
    k_v = (k_vp - k_vm) / (2.0 * hv)
    k_w = (k_wp - k_wm) / (2.0 * hw)
    return (h_u * k_v - h_v * k_u,
            h_u * k_w - h_w * k_u,
            h_v * k_w - h_w * k_v)


# -- explicit two-type transcriptions (types 1 and 2) ----------------------

def _ctx12(surface: CanalSurface, u: float, v: float, w: float):
    n = surface.m
    if n not in (1, 2):
        raise DomainError("explicit forms cover types 1 and 2 only")
    sn = -1.0 if n == 1 else 1.0
    r, dr, d2r, _ = surface.radius.jet(u)
    t = sn + dr * dr
    if t <= 0.0:
        raise DomainError(f"validity fails at u = {u}")
    sq = math.sqrt(t)
    k1, k2, k3 = surface.spine.curvatures.values(u)
    cv, sv, cw, sw = math.cosh(v), math.sinh(v), math.cosh(w), math.sinh(w)
    a_field = k1 * cv * cw - k2 * sw - k3 * sv * cw
    denom_core = r * (sn * sq * a_field + d2r) + sn + dr * dr
    return sn, r, dr, d2r, t, sq, (k1, k2, k3), (cv, sv, cw, sw), a_field, denom_core


def gaussian_closed_12(surface: CanalSurface, u: float, v: float, w: float) -> float:
    """Explicit Gaussian curvature of types 1 and 2."""
    sn, r, dr, d2r, t, sq, _, _, a, core = _ctx12(surface, u, v, w)
    num = (t * (d2r + sn * a * (sn * r * a + sq))
           + r * d2r * (sn * 2.0 * sq * a + d2r))
    return -num / (r * r * core * core)


def mean_closed_12(surface: CanalSurface, u: float, v: float, w: float) -> float:
    """Explicit mean curvature of types 1 and 2."""
    sn, r, dr, d2r, t, sq, (k1, k2, k3), (cv, sv, cw, sw), a, core = \
        _ctx12(surface, u, v, w)
    edge = 2.0 * r * d2r + dr * dr + sn
    big = (r * t * (-sn) * ((k1 * k1 * cv * cv + k3 * k3 * sv * sv) * cw * cw
                            + k2 * k2 * sw * sw)
           + sn * (2.0 * r * t * (k2 * sw + k3 * sv * cw) - sn * sq * edge)
           * k1 * cv * cw
           + (sq * edge - sn * 2.0 * r * t * k2 * sw) * k3 * sv * cw
           + sq * edge * k2 * sw
           - sn * d2r * (r * d2r + dr * dr + sn))
    return (r * big - sn * 2.0 * core * core) / (sn * 3.0 * r * core * core)


def principal_closed_12(surface: CanalSurface, u: float, v: float,
                        w: float) -> tuple[float, float, float]:
    """Explicit principal curvatures of types 1 and 2."""
    sn, r, dr, d2r, t, sq, (k1, k2, k3), (cv, sv, cw, sw), a, core = \
        _ctx12(surface, u, v, w)
    edge = 2.0 * r * d2r + dr * dr + sn
    num = (-sn * (2.0 * r * t * (k2 * sw + k3 * sv * cw) - sn * sq * edge)
           * k1 * cv * cw
           + sn * r * t * k1 * k1 * cv * cv * cw * cw
           - (sq * edge - sn * 2.0 * r * t * k2 * sw) * k3 * sv * cw
           + sn * r * t * (k2 * k2 * sw * sw + k3 * k3 * sv * sv * cw * cw)
           - sq * edge * k2 * sw
           + sn * d2r * (r * d2r + dr * dr + sn))
    return (sn / r, sn / r, num / (core * core))


def weingarten_uv_closed_12(surface: CanalSurface, u: float, v: float,
                            w: float) -> float:
    """Explicit H_u K_v - H_v K_u of types 1 and 2."""
    sn, r, dr, d2r, t, sq, (k1, k2, k3), (cv, sv, cw, sw), a, core = \
        _ctx12(surface, u, v, w)
    return (sn * 2.0 * dr * t ** 2.5 * (k3 * cv - k1 * sv) * cw
            / (3.0 * r ** 4 * core ** 3))


def weingarten_uw_closed_12(surface: CanalSurface, u: float, v: float,
                            w: float) -> float:
    """Explicit H_u K_w - H_w K_u of types 1 and 2."""
    sn, r, dr, d2r, t, sq, (k1, k2, k3), (cv, sv, cw, sw), a, core = \
        _ctx12(surface, u, v, w)
    return (sn * 2.0 * dr * t ** 2.5 * ((k3 * sv - k1 * cv) * sw + k2 * cw)
            / (3.0 * r ** 4 * core ** 3))


def orientation_sign(surface: CanalSurface, u: float, v: float, w: float,
                     numeric_normal, epsilon: int) -> int:
    """Sign relating a numeric normal to the closed-form Gauss map.

    The numeric engine keeps the raw triple-product direction, so its
    normal is +/- the closed-form field; curvature comparisons apply
    this recorded sign.
    """
    from .minkowski import inner
    agree = inner(numeric_normal, surface.gauss_map(u, v, w))
    return 1 if agree * epsilon > 0 else -1
