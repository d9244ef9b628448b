"""Non-null spine curves carried by parallel (Bishop-type) frames.

A parallel frame {B1, B2, B3, B4} along a unit-speed non-null curve has
B1 = gamma' and normal legs whose derivatives point back along B1 only:

    B1' = k1 B2 + k2 B3 + k3 B4
    Bi' = ci * k_{i-1} B1          (i = 2, 3, 4)

with the signs ci fixed by which leg is timelike:

    kind                  signature      (c2, c3, c4)   curvature radicand
    timelike curve        (-,+,+,+)      (+, +, +)      k1^2 + k2^2 + k3^2
    spacelike, B2 time    (+,-,+,+)      (+, -, -)      k1^2 - k2^2 - k3^2
    spacelike, B3 time    (+,+,-,+)      (-, +, -)      k1^2 - k2^2 + k3^2
    spacelike, B4 time    (+,+,+,-)      (-, -, +)      k1^2 + k2^2 - k3^2

Each ci equals -sigma_1 * sigma_i, which makes d/du <Bi, Bj> vanish
identically, so exact solutions stay orthonormal.

Curves are defined constructively: prescribe (k1, k2, k3), an initial
frame and a base point; the curve is gamma(u) = gamma0 + integral of B1.
Straight lines and constant-curvature curves are evaluated in closed
form; general curvature functions are integrated with a fixed-step RK4
scheme, periodic re-orthonormalization, and cubic Hermite dense output.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional

from .errors import DegenerateFrameError, DomainError
from .minkowski import (BASIS, E1, E2, E3, E4, ZERO, ParallelFrame, Vec4,
                        euclidean_norm, inner, lorentz_orthonormalize)


class FrameKind(Enum):
    TIMELIKE = "timelike"
    SPACELIKE_B2_TIMELIKE = "spacelike_b2_timelike"
    SPACELIKE_B3_TIMELIKE = "spacelike_b3_timelike"
    SPACELIKE_B4_TIMELIKE = "spacelike_b4_timelike"

    @property
    def signature(self) -> tuple[int, int, int, int]:
        return _SIGNATURES[self]

    @property
    def normal_signs(self) -> tuple[int, int, int]:
        """(c2, c3, c4) of the normal-leg equations Bi' = ci k_{i-1} B1."""
        return _NORMAL_SIGNS[self]

    @property
    def radicand_signs(self) -> tuple[int, int, int]:
        """Coefficients of (k1^2, k2^2, k3^2) in the curvature radicand."""
        return _RADICAND_SIGNS[self]


_SIGNATURES = {
    FrameKind.TIMELIKE: (-1, 1, 1, 1),
    FrameKind.SPACELIKE_B2_TIMELIKE: (1, -1, 1, 1),
    FrameKind.SPACELIKE_B3_TIMELIKE: (1, 1, -1, 1),
    FrameKind.SPACELIKE_B4_TIMELIKE: (1, 1, 1, -1),
}

_NORMAL_SIGNS = {
    FrameKind.TIMELIKE: (1, 1, 1),
    FrameKind.SPACELIKE_B2_TIMELIKE: (1, -1, -1),
    FrameKind.SPACELIKE_B3_TIMELIKE: (-1, 1, -1),
    FrameKind.SPACELIKE_B4_TIMELIKE: (-1, -1, 1),
}

_RADICAND_SIGNS = {
    FrameKind.TIMELIKE: (1, 1, 1),
    FrameKind.SPACELIKE_B2_TIMELIKE: (1, -1, -1),
    FrameKind.SPACELIKE_B3_TIMELIKE: (1, -1, 1),
    FrameKind.SPACELIKE_B4_TIMELIKE: (1, 1, -1),
}

# Natural initial tetrads built from standard basis vectors, arranged so
# the timelike basis vector e1 lands on the one timelike frame leg.
_STANDARD_FRAMES = {
    FrameKind.TIMELIKE: (E1, E2, E3, E4),
    FrameKind.SPACELIKE_B2_TIMELIKE: (E2, E1, E3, E4),
    FrameKind.SPACELIKE_B3_TIMELIKE: (E2, E3, E1, E4),
    FrameKind.SPACELIKE_B4_TIMELIKE: (E2, E3, E4, E1),
}


def standard_frame(kind: FrameKind) -> ParallelFrame:
    b1, b2, b3, b4 = _STANDARD_FRAMES[kind]
    return ParallelFrame(b1, b2, b3, b4, kind.signature)


def bishop_derivative(kind: FrameKind, k: tuple[float, float, float],
                      frame: ParallelFrame) -> tuple[Vec4, Vec4, Vec4, Vec4]:
    """Frame velocity (B1', B2', B3', B4') for curvature values k."""
    k1, k2, k3 = k
    c2, c3, c4 = kind.normal_signs
    db1 = frame.b2 * k1 + frame.b3 * k2 + frame.b4 * k3
    return (db1,
            frame.b1 * (c2 * k1),
            frame.b1 * (c3 * k2),
            frame.b1 * (c4 * k3))


def kappa(kind: FrameKind, k: tuple[float, float, float]) -> tuple[float, Optional[float]]:
    """Curvature radicand and, when it is nonnegative, its square root.

    A negative radicand is reported as (radicand, None) rather than an
    error; the frame equations remain perfectly usable there.
    """
    a1, a2, a3 = kind.radicand_signs
    radicand = a1 * k[0] * k[0] + a2 * k[1] * k[1] + a3 * k[2] * k[2]
    return (radicand, math.sqrt(radicand)) if radicand >= 0.0 else (radicand, None)


@dataclass(frozen=True)
class CurvatureFunctions:
    """Curvature functions k1, k2, k3 of u, with first derivatives."""

    k1: Callable[[float], float]
    k2: Callable[[float], float]
    k3: Callable[[float], float]
    dk1: Callable[[float], float]
    dk2: Callable[[float], float]
    dk3: Callable[[float], float]
    constants: Optional[tuple[float, float, float]] = None

    @classmethod
    def constant(cls, k1: float, k2: float, k3: float) -> "CurvatureFunctions":
        zero = lambda u: 0.0
        return cls(lambda u: k1, lambda u: k2, lambda u: k3,
                   zero, zero, zero, constants=(k1, k2, k3))

    @classmethod
    def from_callables(cls, k1, k2, k3, dk1, dk2, dk3) -> "CurvatureFunctions":
        return cls(k1, k2, k3, dk1, dk2, dk3)

    def values(self, u: float) -> tuple[float, float, float]:
        if self.constants is not None:
            return self.constants
        return (self.k1(u), self.k2(u), self.k3(u))

    def derivative_values(self, u: float) -> tuple[float, float, float]:
        if self.constants is not None:
            return (0.0, 0.0, 0.0)
        return (self.dk1(u), self.dk2(u), self.dk3(u))


class EvaluationMode(Enum):
    LINE = "line"
    CONSTANT_K = "constant_k"
    INTEGRATED = "integrated"


class FrameResidualReport(NamedTuple):
    gram_max: float
    tangent_max: float


# One dense-output knot: parameter value, 20-component state (gamma,
# B1..B4) and its u-derivative.
_State = tuple[Vec4, Vec4, Vec4, Vec4, Vec4]


def _axpy(y: _State, d: _State, a: float) -> _State:
    return tuple(yi + di * a for yi, di in zip(y, d))  # type: ignore[return-value]


class SpineCurve:
    """Unit-speed non-null curve with its parallel frame.

    Immutable after construction; the dense integration table (when the
    mode is INTEGRATED) is built once up front.
    """

    def __init__(self, kind: FrameKind, curvatures: CurvatureFunctions,
                 gamma0: Vec4 = ZERO, frame0: Optional[ParallelFrame] = None,
                 mode: EvaluationMode = EvaluationMode.INTEGRATED,
                 interval: tuple[float, float] = (-math.inf, math.inf),
                 step: float = 1e-3, renorm_every: int = 16):
        if frame0 is None:
            frame0 = standard_frame(kind)
        if frame0.signature != kind.signature:
            raise DegenerateFrameError("frame0 signature does not match the frame kind")
        if frame0.gram_residual() > 1e-6:
            raise DegenerateFrameError("frame0 is not orthonormal for this kind")
        self.kind = kind
        self.curvatures = curvatures
        self.gamma0 = gamma0
        self.frame0 = lorentz_orthonormalize(frame0)
        self.mode = mode
        self.interval = (float(interval[0]), float(interval[1]))
        self.step = float(step)
        self.renorm_every = int(renorm_every)
        if mode is EvaluationMode.CONSTANT_K:
            if curvatures.constants is None:
                raise DomainError("constant-curvature mode needs constant curvatures")
            c2, c3, c4 = kind.normal_signs
            a, b, c = curvatures.constants
            self._lambda = c2 * a * a + c3 * b * b + c4 * c * c
        if mode is EvaluationMode.INTEGRATED:
            if not (math.isfinite(self.interval[0]) and math.isfinite(self.interval[1])):
                raise DomainError("integrated mode needs a finite interval")
            if self.step <= 0.0:
                raise DomainError("integration step must be positive")
            self._build_table()

    # -- constructors ---------------------------------------------------

    @classmethod
    def line(cls, kind: FrameKind, gamma0: Vec4 = ZERO,
             frame0: Optional[ParallelFrame] = None,
             interval: tuple[float, float] = (-math.inf, math.inf)) -> "SpineCurve":
        return cls(kind, CurvatureFunctions.constant(0.0, 0.0, 0.0), gamma0,
                   frame0, EvaluationMode.LINE, interval)

    @classmethod
    def constant_curvature(cls, kind: FrameKind, k: tuple[float, float, float],
                           gamma0: Vec4 = ZERO,
                           frame0: Optional[ParallelFrame] = None,
                           interval: tuple[float, float] = (-math.inf, math.inf)) -> "SpineCurve":
        return cls(kind, CurvatureFunctions.constant(*k), gamma0, frame0,
                   EvaluationMode.CONSTANT_K, interval)

    @classmethod
    def integrated(cls, kind: FrameKind, curvatures: CurvatureFunctions,
                   interval: tuple[float, float], gamma0: Vec4 = ZERO,
                   frame0: Optional[ParallelFrame] = None, step: float = 1e-3,
                   renorm_every: int = 16) -> "SpineCurve":
        return cls(kind, curvatures, gamma0, frame0, EvaluationMode.INTEGRATED,
                   interval, step, renorm_every)

    # -- evaluation -----------------------------------------------------

    def _check_u(self, u: float) -> None:
        lo, hi = self.interval
        slack = 1e-9 * max(1.0, abs(lo) if math.isfinite(lo) else 0.0,
                           abs(hi) if math.isfinite(hi) else 0.0)
        if u < lo - slack or u > hi + slack:
            raise DomainError(f"u={u} outside the spine interval [{lo}, {hi}]")

    def frame_at(self, u: float) -> tuple[Vec4, ParallelFrame]:
        """Curve point gamma(u) and the parallel frame at u."""
        self._check_u(u)
        if self.mode is EvaluationMode.LINE:
            return self.gamma0 + self.frame0.b1 * u, self.frame0
        if self.mode is EvaluationMode.CONSTANT_K:
            return self._constant_frame_at(u)
        return self._interpolated_frame_at(u)

    def point_at(self, u: float) -> Vec4:
        return self.frame_at(u)[0]

    def frame_residuals(self, grid) -> FrameResidualReport:
        """Max Gram deviation and max |FD(gamma) - B1| over a grid."""
        gram_max = 0.0
        tangent_max = 0.0
        h = 1e-6
        lo, hi = self.interval
        for u in grid:
            _, frame = self.frame_at(u)
            gram_max = max(gram_max, frame.gram_residual())
            if u - h >= lo and u + h <= hi:
                fd = (self.point_at(u + h) - self.point_at(u - h)) * (0.5 / h)
                tangent_max = max(tangent_max, euclidean_norm(fd - frame.b1))
        return FrameResidualReport(gram_max, tangent_max)

    # -- constant-curvature closed form ----------------------------------

    def _constant_frame_at(self, u: float) -> tuple[Vec4, ParallelFrame]:
        a, b, c = self.curvatures.constants  # type: ignore[misc]
        lam = self._lambda
        b10, b20, b30, b40 = self.frame0.vectors
        v0 = b20 * a + b30 * b + b40 * c  # B1'(0)
        # B1'' = lam * B1, so B1 evolves by hyperbolic or circular rotation
        # in span{B1(0), B1'(0)}; I1 and I2 are the integrals of the two
        # scalar profiles, giving gamma and the normal legs exactly.
        if lam > 0.0:
            rt = math.sqrt(lam)
            x = rt * u
            cosl = math.cosh(x)
            sinl = math.sinh(x) / rt
            i1 = sinl
            i2 = 2.0 * math.sinh(0.5 * x) ** 2 / lam
        elif lam < 0.0:
            rt = math.sqrt(-lam)
            x = rt * u
            cosl = math.cos(x)
            sinl = math.sin(x) / rt
            i1 = sinl
            i2 = 2.0 * math.sin(0.5 * x) ** 2 / (rt * rt)
        else:
            cosl = 1.0
            sinl = u
            i1 = u
            i2 = 0.5 * u * u
        b1 = b10 * cosl + v0 * sinl
        shift = b10 * i1 + v0 * i2  # integral of B1 from 0 to u
        c2, c3, c4 = self.kind.normal_signs
        frame = ParallelFrame(b1,
                              b20 + shift * (c2 * a),
                              b30 + shift * (c3 * b),
                              b40 + shift * (c4 * c),
                              self.kind.signature)
        return self.gamma0 + shift, frame

    # -- RK4 integration with dense output --------------------------------

    def _rhs(self, u: float, y: _State) -> _State:
        k = self.curvatures.values(u)
        frame = ParallelFrame(y[1], y[2], y[3], y[4], self.kind.signature)
        db1, db2, db3, db4 = bishop_derivative(self.kind, k, frame)
        return (y[1], db1, db2, db3, db4)

    def _renorm(self, y: _State) -> _State:
        frame = ParallelFrame(y[1], y[2], y[3], y[4], self.kind.signature)
        fr = lorentz_orthonormalize(frame)
        return (y[0], fr.b1, fr.b2, fr.b3, fr.b4)

    def _rk4_step(self, u: float, y: _State, h: float) -> _State:
        f = self._rhs
        k1 = f(u, y)
        k2 = f(u + 0.5 * h, _axpy(y, k1, 0.5 * h))
        k3 = f(u + 0.5 * h, _axpy(y, k2, 0.5 * h))
        k4 = f(u + h, _axpy(y, k3, h))
        sixth = h / 6.0
        return tuple(yi + (a + (b + c) * 2.0 + d) * sixth  # type: ignore[return-value]
                     for yi, a, b, c, d in zip(y, k1, k2, k3, k4))

    def _integrate_branch(self, u_end: float) -> list[tuple[float, _State, _State]]:
        """March from the anchor towards u_end; knots exclude the anchor."""
        u = self._anchor
        y: _State = (self.gamma0, *self.frame0.vectors)
        out: list[tuple[float, _State, _State]] = []
        if u_end == u:
            return out
        direction = 1.0 if u_end > u else -1.0
        h = self.step * direction
        steps = 0
        while (u_end - u) * direction > 1e-14 * max(1.0, abs(u_end)):
            remaining = u_end - u
            hh = remaining if abs(remaining) <= abs(h) * (1.0 + 1e-9) else h
            y = self._rk4_step(u, y, hh)
            u = u + hh
            steps += 1
            if self.renorm_every > 0 and steps % self.renorm_every == 0:
                y = self._renorm(y)
            out.append((u, y, self._rhs(u, y)))
        return out

    def _build_table(self) -> None:
        lo, hi = self.interval
        self._anchor = min(max(0.0, lo), hi)
        y0: _State = (self.gamma0, *self.frame0.vectors)
        anchor_knot = (self._anchor, y0, self._rhs(self._anchor, y0))
        backward = self._integrate_branch(lo)
        forward = self._integrate_branch(hi)
        knots = list(reversed(backward)) + [anchor_knot] + forward
        self._us = [k[0] for k in knots]
        self._ys = [k[1] for k in knots]
        self._ds = [k[2] for k in knots]

    def _interpolated_frame_at(self, u: float) -> tuple[Vec4, ParallelFrame]:
        us = self._us
        i = bisect_right(us, u)
        if i <= 0:
            i = 1
        if i >= len(us):
            i = len(us) - 1
        ua, ub = us[i - 1], us[i]
        ya, yb = self._ys[i - 1], self._ys[i]
        da, db = self._ds[i - 1], self._ds[i]
        h = ub - ua
        t = (u - ua) / h
        t2 = t * t
        t3 = t2 * t
        h00 = 2.0 * t3 - 3.0 * t2 + 1.0
        h10 = (t3 - 2.0 * t2 + t) * h
        h01 = -2.0 * t3 + 3.0 * t2
        h11 = (t3 - t2) * h
        state = tuple(ya_i * h00 + da_i * h10 + yb_i * h01 + db_i * h11
                      for ya_i, da_i, yb_i, db_i in zip(ya, da, yb, db))
        frame = ParallelFrame(state[1], state[2], state[3], state[4],
                              self.kind.signature)
        return state[0], frame
