"""Indefinite linear algebra of Minkowski 4-space with signature (-, +, +, +).

The scalar product is

    <x, y> = -x1*y1 + x2*y2 + x3*y3 + x4*y4,

and everything here (the ternary vector product, norms, causal
classification, signature-aware Gram-Schmidt) is taken relative to it.
Vectors with <x, x> > 0 are spacelike, < 0 timelike, and = 0 (x != 0)
lightlike; the zero vector counts as spacelike by convention.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple

from .errors import DegenerateFrameError


class Vec4(NamedTuple):
    """A point or vector of R^4; which one is clear from context."""

    x1: float
    x2: float
    x3: float
    x4: float

    def __add__(self, other: "Vec4") -> "Vec4":
        return Vec4(self.x1 + other.x1, self.x2 + other.x2,
                    self.x3 + other.x3, self.x4 + other.x4)

    def __sub__(self, other: "Vec4") -> "Vec4":
        return Vec4(self.x1 - other.x1, self.x2 - other.x2,
                    self.x3 - other.x3, self.x4 - other.x4)

    def __neg__(self) -> "Vec4":
        return Vec4(-self.x1, -self.x2, -self.x3, -self.x4)

    def __mul__(self, c: float) -> "Vec4":  # type: ignore[override]
        return Vec4(self.x1 * c, self.x2 * c, self.x3 * c, self.x4 * c)

    __rmul__ = __mul__  # type: ignore[assignment]

    def is_finite(self) -> bool:
        return (math.isfinite(self.x1) and math.isfinite(self.x2)
                and math.isfinite(self.x3) and math.isfinite(self.x4))


ZERO = Vec4(0.0, 0.0, 0.0, 0.0)
E1 = Vec4(1.0, 0.0, 0.0, 0.0)
E2 = Vec4(0.0, 1.0, 0.0, 0.0)
E3 = Vec4(0.0, 0.0, 1.0, 0.0)
E4 = Vec4(0.0, 0.0, 0.0, 1.0)
BASIS = (E1, E2, E3, E4)


class CausalCharacter(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def inner(x: Vec4, y: Vec4) -> float:
    """Scalar product of signature (-, +, +, +)."""
    return -x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3 + x.x4 * y.x4


def euclidean_norm(x: Vec4) -> float:
    """Positive-definite norm, used for residual and scale measurements."""
    return math.sqrt(x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3 + x.x4 * x.x4)


def norm(x: Vec4) -> float:
    """sqrt(|<x, x>|); zero exactly for lightlike directions."""
    return math.sqrt(abs(inner(x, x)))


def causal_character(x: Vec4, tol: float = 1e-10) -> CausalCharacter:
    """Classify a vector as spacelike, timelike or lightlike.

    The lightlike band is relative: |<x,x>| <= tol * (1 + sum of squared
    components).  The zero vector is spacelike.
    """
    if x == ZERO:
        return CausalCharacter.SPACELIKE
    q = inner(x, x)
    scale = 1.0 + x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3 + x.x4 * x.x4
    if abs(q) <= tol * scale:
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if q > 0.0 else CausalCharacter.TIMELIKE


def triple_product(x: Vec4, y: Vec4, z: Vec4) -> Vec4:
    """Vector product of three vectors.

    Defined as the formal 4x4 determinant whose first row is
    (-e1, e2, e3, e4) and whose remaining rows are x, y, z, expanded by
    cofactors of the first row.  The result is orthogonal (in the
    indefinite sense) to all three arguments.
    """
    yz12 = y.x1 * z.x2 - y.x2 * z.x1
    yz13 = y.x1 * z.x3 - y.x3 * z.x1
    yz14 = y.x1 * z.x4 - y.x4 * z.x1
    yz23 = y.x2 * z.x3 - y.x3 * z.x2
    yz24 = y.x2 * z.x4 - y.x4 * z.x2
    yz34 = y.x3 * z.x4 - y.x4 * z.x3
    m11 = x.x2 * yz34 - x.x3 * yz24 + x.x4 * yz23
    m12 = x.x1 * yz34 - x.x3 * yz14 + x.x4 * yz13
    m13 = x.x1 * yz24 - x.x2 * yz14 + x.x4 * yz12
    m14 = x.x1 * yz23 - x.x2 * yz13 + x.x3 * yz12
    return Vec4(-m11, -m12, m13, -m14)


class ParallelFrame(NamedTuple):
    """Ordered orthonormal tetrad (b1..b4) with its signature vector.

    signature[i] = <b_i, b_i>; exactly one entry is -1 for the frames
    used along non-null curves.
    """

    b1: Vec4
    b2: Vec4
    b3: Vec4
    b4: Vec4
    signature: tuple[int, int, int, int]

    @property
    def vectors(self) -> tuple[Vec4, Vec4, Vec4, Vec4]:
        return (self.b1, self.b2, self.b3, self.b4)

    def gram_residual(self) -> float:
        """Max deviation of <b_i, b_j> from sigma_i * delta_ij."""
        vs = self.vectors
        worst = 0.0
        for i in range(4):
            for j in range(i, 4):
                target = float(self.signature[i]) if i == j else 0.0
                dev = abs(inner(vs[i], vs[j]) - target)
                if dev > worst:
                    worst = dev
        return worst


def lorentz_orthonormalize(frame: ParallelFrame) -> ParallelFrame:
    """Signature-aware Gram-Schmidt, processing b1 first.

    Idempotent on orthonormal input and free of sign flips: each output
    vector keeps the orientation of its input counterpart.  Raises
    DegenerateFrameError when the tetrad is numerically dependent or a
    vector cannot be normalized into its declared causal character.
    """
    out: list[Vec4] = []
    for i, b in enumerate(frame.vectors):
        sign = frame.signature[i]
        v = b
        for j, u in enumerate(out):
            v = v - u * (frame.signature[j] * inner(v, u))
        q = inner(v, v)
        scale = max(euclidean_norm(b) ** 2, 1e-300)
        if abs(q) <= 1e-12 * scale:
            raise DegenerateFrameError(
                f"frame vector {i + 1} is numerically dependent on its predecessors")
        if (q > 0.0) != (sign > 0):
            raise DegenerateFrameError(
                f"frame vector {i + 1} cannot be normalized to signature {sign:+d}")
        out.append(v * (1.0 / math.sqrt(abs(q))))
    return ParallelFrame(out[0], out[1], out[2], out[3], frame.signature)
