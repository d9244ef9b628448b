"""Generic numerical engine for parametrized 3-surfaces in Minkowski 4-space.

Works on any object exposing ``evaluate(u, v, w) -> Vec4`` (and optionally
``analytic_jet`` for exact partials).  From a second-order jet it builds
the unit normal, the two fundamental forms g_ij = <P_i, P_j> and
h_ij = <P_ij, N>, the shape operator S = g^-1 h, and the curvatures

    K = eps * det(h) / det(g),    H = eps * tr(S) / 3,

with eps = <N, N>.  Principal curvatures are the eigenvalues of S,
extracted from the characteristic cubic (Cardano / trigonometric form)
and polished by Newton steps.  This module never looks at the canal
structure, which makes it an independent check on every closed form.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DegenerateMetricError, DegenerateNormalError, SpectralError
from .minkowski import Vec4, euclidean_norm, inner, triple_product

Matrix3 = tuple[tuple[float, float, float],
                tuple[float, float, float],
                tuple[float, float, float]]


class SurfaceJet(NamedTuple):
    """Point, first and second partials of a 3-surface at one parameter."""

    point: Vec4
    du: Vec4
    dv: Vec4
    dw: Vec4
    duu: Vec4
    duv: Vec4
    duw: Vec4
    dvv: Vec4
    dvw: Vec4
    dww: Vec4


class FundamentalForms(NamedTuple):
    g: Matrix3
    h: Matrix3
    normal: Vec4
    epsilon: int


class CurvatureData(NamedTuple):
    gaussian: float
    mean: float
    principal: tuple[float, float, float]


def jet(surface, u: float, v: float, w: float, mode: str = "fd",
        step: float = 1e-4) -> SurfaceJet:
    """Second-order jet of the surface at (u, v, w).

    mode "fd" uses central differences of order 2 with per-axis steps
    scaled by the coordinate magnitude; mode "analytic" delegates to the
    surface's own exact partials.
    """
    if mode == "analytic":
        return surface.analytic_jet(u, v, w)
    if mode != "fd":
        raise ValueError(f"unknown jet mode {mode!r}")
    f = surface.evaluate
    hu = step * max(1.0, abs(u))
    hv = step * max(1.0, abs(v))
    hw = step * max(1.0, abs(w))
    p0 = f(u, v, w)
    pu, mu_ = f(u + hu, v, w), f(u - hu, v, w)
    pv, mv = f(u, v + hv, w), f(u, v - hv, w)
    pw, mw = f(u, v, w + hw), f(u, v, w - hw)
    du = (pu - mu_) * (0.5 / hu)
    dv = (pv - mv) * (0.5 / hv)
    dw = (pw - mw) * (0.5 / hw)
    duu = (pu - p0 * 2.0 + mu_) * (1.0 / (hu * hu))
    dvv = (pv - p0 * 2.0 + mv) * (1.0 / (hv * hv))
    dww = (pw - p0 * 2.0 + mw) * (1.0 / (hw * hw))
    duv = (f(u + hu, v + hv, w) - f(u + hu, v - hv, w)
           - f(u - hu, v + hv, w) + f(u - hu, v - hv, w)) * (0.25 / (hu * hv))
    duw = (f(u + hu, v, w + hw) - f(u + hu, v, w - hw)
           - f(u - hu, v, w + hw) + f(u - hu, v, w - hw)) * (0.25 / (hu * hw))
    dvw = (f(u, v + hv, w + hw) - f(u, v + hv, w - hw)
           - f(u, v - hv, w + hw) + f(u, v - hv, w - hw)) * (0.25 / (hv * hw))
    return SurfaceJet(p0, du, dv, dw, duu, duv, duw, dvv, dvw, dww)


def unit_normal(jet_: SurfaceJet) -> tuple[Vec4, int]:
    """Unit normal from the tangent triple product, with eps = <N, N>.

    The raw triple-product orientation is kept; callers compare against
    closed-form normals up to a recorded global sign.
    """
    t = triple_product(jet_.du, jet_.dv, jet_.dw)
    q = inner(t, t)
    mag = math.sqrt(abs(q))
    scale = (euclidean_norm(jet_.du) * euclidean_norm(jet_.dv)
             * euclidean_norm(jet_.dw))
    if mag <= 1e-12 * max(1.0, scale):
        raise DegenerateNormalError(
            "tangent triple product is zero or lightlike; normal undefined")
    return t * (1.0 / mag), (1 if q > 0.0 else -1)


def fundamental_forms(jet_: SurfaceJet) -> FundamentalForms:
    normal, eps = unit_normal(jet_)
    t = (jet_.du, jet_.dv, jet_.dw)
    seconds = ((jet_.duu, jet_.duv, jet_.duw),
               (jet_.duv, jet_.dvv, jet_.dvw),
               (jet_.duw, jet_.dvw, jet_.dww))
    g = tuple(tuple(inner(t[i], t[j]) for j in range(3)) for i in range(3))
    h = tuple(tuple(inner(seconds[i][j], normal) for j in range(3)) for i in range(3))
    return FundamentalForms(g, h, normal, eps)  # type: ignore[arg-type]


def det3(m: Matrix3) -> float:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _adjugate(m: Matrix3) -> Matrix3:
    return (
        (m[1][1] * m[2][2] - m[1][2] * m[2][1],
         m[0][2] * m[2][1] - m[0][1] * m[2][2],
         m[0][1] * m[1][2] - m[0][2] * m[1][1]),
        (m[1][2] * m[2][0] - m[1][0] * m[2][2],
         m[0][0] * m[2][2] - m[0][2] * m[2][0],
         m[0][2] * m[1][0] - m[0][0] * m[1][2]),
        (m[1][0] * m[2][1] - m[1][1] * m[2][0],
         m[0][1] * m[2][0] - m[0][0] * m[2][1],
         m[0][0] * m[1][1] - m[0][1] * m[1][0]),
    )


def matmul3(a: Matrix3, b: Matrix3) -> Matrix3:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3))  # type: ignore[return-value]
                       for j in range(3)) for i in range(3))


def shape_operator(forms: FundamentalForms) -> Matrix3:
    """S = g^-1 h via the explicit adjugate of the fixed 3x3 metric."""
    g = forms.g
    detg = det3(g)
    scale = max(abs(e) for row in g for e in row)
    if abs(detg) <= 1e-12 * max(scale ** 3, 1e-30):
        raise DegenerateMetricError("induced metric is numerically singular")
    adj = _adjugate(g)
    inv = tuple(tuple(e / detg for e in row) for row in adj)
    return matmul3(inv, forms.h)  # type: ignore[arg-type]


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def eigenvalues3(s: Matrix3, imag_tol: float = 1e-8) -> tuple[float, float, float]:
    """Real eigenvalues of a (generally non-symmetric) 3x3 matrix.

    Solves the characteristic cubic in closed form.  A complex pair whose
    imaginary part exceeds imag_tol (relative to the matrix scale) raises
    SpectralError instead of silently truncating.
    """
    c2 = s[0][0] + s[1][1] + s[2][2]
    c1 = (s[0][0] * s[1][1] - s[0][1] * s[1][0]
          + s[0][0] * s[2][2] - s[0][2] * s[2][0]
          + s[1][1] * s[2][2] - s[1][2] * s[2][1])
    c0 = det3(s)
    scale = 1.0 + max(abs(e) for row in s for e in row)
    # depressed cubic y^3 + p y + q with lam = y + c2/3
    p = c1 - c2 * c2 / 3.0
    q = -2.0 * c2 ** 3 / 27.0 + c1 * c2 / 3.0 - c0
    disc = (0.5 * q) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        rt = math.sqrt(disc)
        big_a = _cbrt(-0.5 * q + rt)
        big_b = _cbrt(-0.5 * q - rt)
        imag = 0.5 * math.sqrt(3.0) * abs(big_a - big_b)
        if imag > imag_tol * scale:
            raise SpectralError(
                f"complex eigenvalue pair (imag ~ {imag:.3e}) beyond tolerance")
        ys = (big_a + big_b, -0.5 * (big_a + big_b), -0.5 * (big_a + big_b))
    elif p >= 0.0:
        # disc <= 0 with p >= 0 forces p ~ q ~ 0: a numerically triple root
        ys = (0.0, 0.0, 0.0)
    else:
        m_ = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m_)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) / 3.0
        ys = tuple(m_ * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3))
    lams = [y + c2 / 3.0 for y in ys]

    def poly(lam: float) -> float:
        return ((lam - c2) * lam + c1) * lam - c0

    # Guarded Newton corrections on the original cubic.  Near a multiple
    # root the derivative is tiny and a raw step amplifies evaluation
    # noise, so an update is kept only when it strictly reduces |f|.
    for i, lam in enumerate(lams):
        fval = poly(lam)
        for _ in range(2):
            fder = (3.0 * lam - 2.0 * c2) * lam + c1
            if abs(fder) <= 1e-12 * scale * scale:
                break
            cand = lam - fval / fder
            fcand = poly(cand)
            if abs(fcand) >= abs(fval):
                break
            lam, fval = cand, fcand
        lams[i] = lam
    # independent Newton steps break the exact root-sum = trace relation
    # at the last digit; project it back
    defect = (c2 - lams[0] - lams[1] - lams[2]) / 3.0
    lams = [lam + defect for lam in lams]
    lams.sort(reverse=True)
    return (lams[0], lams[1], lams[2])


def curvatures(forms: FundamentalForms, shape: Matrix3 | None = None,
               spectral_tol: float = 1e-8) -> CurvatureData:
    """Gaussian, mean and principal curvatures from the fundamental forms."""
    if shape is None:
        shape = shape_operator(forms)
    eps = float(forms.epsilon)
    gaussian = eps * det3(forms.h) / det3(forms.g)
    mean = eps * (shape[0][0] + shape[1][1] + shape[2][2]) / 3.0
    principal = eigenvalues3(shape, imag_tol=spectral_tol)
    return CurvatureData(gaussian, mean, principal)


# A double principal curvature perturbed by jet noise generically splits
# into a conjugate pair whose imaginary part sits at the noise scale, so
# the complex-pair tolerance must track the derivative mode.  Even exact
# jets see ~sqrt(ulp) ~ 3e-8 of spurious imaginary part from discriminant
# rounding at a double root; finite differences add their own noise.
_SPECTRAL_TOL = {"analytic": 1e-7, "fd": 1e-6}


def surface_invariants(surface, u: float, v: float, w: float, mode: str = "fd",
                       step: float = 1e-4, spectral_tol: float | None = None,
                       ) -> tuple[CurvatureData, FundamentalForms, Matrix3]:
    """Convenience bundle: curvatures, forms and shape operator at a point."""
    if spectral_tol is None:
        spectral_tol = _SPECTRAL_TOL.get(mode, 1e-8)
    forms = fundamental_forms(jet(surface, u, v, w, mode=mode, step=step))
    shape = shape_operator(forms)
    return curvatures(forms, shape, spectral_tol=spectral_tol), forms, shape
