"""Shared helpers for the test suite."""

import math


def linspace(a, b, n):
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def guarded_rel(a, b):
    """Relative deviation with the denominator floored at 1."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


def max_component_diff(x, y):
    return max(abs(a - b) for a, b in zip(x, y))


def det4(rows):
    """Generic 4x4 determinant by Laplace expansion; test-side oracle."""
    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    total = 0.0
    for j in range(4):
        minor = [[rows[i][c] for c in range(4) if c != j] for i in range(1, 4)]
        total += (-1.0) ** j * rows[0][j] * det3(minor)
    return total


def fd1(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)
