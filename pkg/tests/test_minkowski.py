"""Indefinite linear algebra kernel."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import det4
from canal4d.errors import DegenerateFrameError
from canal4d.minkowski import (BASIS, E1, E2, E3, E4, ZERO, CausalCharacter,
                               ParallelFrame, Vec4, causal_character, inner,
                               lorentz_orthonormalize, norm, triple_product)

vec_components = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
vectors = st.builds(Vec4, vec_components, vec_components, vec_components,
                    vec_components)


class TestInner:
    def test_metric_signature(self):
        assert inner(E1, E1) == -1.0
        assert inner(E2, E2) == 1.0
        assert inner(E3, E3) == 1.0
        assert inner(E4, E4) == 1.0

    def test_direct_evaluation(self):
        # -1*4 + 2*1 + 0*1 + 3*1 = 1
        assert inner(Vec4(1, 2, 0, 3), Vec4(4, 1, 1, 1)) == 1.0

    @given(vectors, vectors)
    def test_symmetry(self, x, y):
        assert abs(inner(x, y) - inner(y, x)) < 1e-12

    @given(vectors, vectors, vectors)
    def test_bilinearity(self, x, y, z):
        lhs = inner(x + y, z)
        rhs = inner(x, z) + inner(y, z)
        assert abs(lhs - rhs) < 1e-12


class TestTripleProduct:
    def test_basis_example(self):
        assert triple_product(E2, E3, E4) == Vec4(-1.0, 0.0, 0.0, 0.0)

    def test_repeated_argument_vanishes(self):
        rng = random.Random(7)
        for _ in range(20):
            x = Vec4(*(rng.uniform(-1, 1) for _ in range(4)))
            z = Vec4(*(rng.uniform(-1, 1) for _ in range(4)))
            assert max(abs(c) for c in triple_product(x, x, z)) < 1e-14

    def test_against_determinant_oracle(self):
        # component j of the triple product is the 4x4 determinant whose
        # first row indicates e_j, negated for the timelike slot
        rng = random.Random(11)
        for _ in range(50):
            x, y, z = (Vec4(*(rng.uniform(-2, 2) for _ in range(4)))
                       for _ in range(3))
            expected = []
            for j in range(4):
                unit_row = [1.0 if c == j else 0.0 for c in range(4)]
                d = det4([unit_row, list(x), list(y), list(z)])
                expected.append(-d if j == 0 else d)
            got = triple_product(x, y, z)
            assert max(abs(a - b) for a, b in zip(got, expected)) < 1e-12

    @given(vectors, vectors, vectors)
    @settings(max_examples=200)
    def test_orthogonal_to_arguments(self, x, y, z):
        t = triple_product(x, y, z)
        for arg in (x, y, z):
            assert abs(inner(t, arg)) < 1e-10

    @given(vectors, vectors, vectors)
    def test_antisymmetry(self, x, y, z):
        t = triple_product(x, y, z)
        for swapped in (triple_product(y, x, z), triple_product(x, z, y),
                        triple_product(z, y, x)):
            assert max(abs(a + b) for a, b in zip(t, swapped)) < 1e-12


class TestNorm:
    def test_examples(self):
        assert norm(E1) == 1.0
        assert norm(Vec4(1, 1, 0, 0)) == 0.0
        assert norm(Vec4(0, 3, 4, 0)) == 5.0

    @given(vectors, st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
    def test_absolute_homogeneity(self, x, lam):
        assert abs(norm(x * lam) - abs(lam) * norm(x)) < 1e-12


class TestCausalCharacter:
    @pytest.mark.parametrize("vec,expected", [
        (E1, CausalCharacter.TIMELIKE),
        (Vec4(1, 1, 0, 0), CausalCharacter.LIGHTLIKE),
        (Vec4(1, 2, 0, 0), CausalCharacter.SPACELIKE),
        (ZERO, CausalCharacter.SPACELIKE),
    ])
    def test_examples(self, vec, expected):
        assert causal_character(vec) is expected

    def test_classification_is_exhaustive(self):
        rng = random.Random(3)
        for _ in range(200):
            x = Vec4(*(rng.uniform(-2, 2) for _ in range(4)))
            assert causal_character(x) in CausalCharacter


class TestLorentzOrthonormalize:
    def test_idempotent_on_orthonormal_input(self):
        frame = ParallelFrame(E2, E1, E3, E4, (1, -1, 1, 1))
        out = lorentz_orthonormalize(frame)
        assert out.vectors == frame.vectors

    def test_cleans_small_perturbations(self):
        rng = random.Random(5)
        for _ in range(50):
            noise = lambda: rng.uniform(-1e-6, 1e-6)
            frame = ParallelFrame(
                E2 + Vec4(noise(), noise(), noise(), noise()),
                E1 + Vec4(noise(), noise(), noise(), noise()),
                E3 + Vec4(noise(), noise(), noise(), noise()),
                E4 + Vec4(noise(), noise(), noise(), noise()),
                (1, -1, 1, 1))
            out = lorentz_orthonormalize(frame)
            assert out.gram_residual() < 1e-12
            # no sign flips relative to the input
            for sign, u, b in zip(frame.signature, out.vectors, frame.vectors):
                assert sign * inner(u, b) > 0

    def test_degenerate_input_fails(self):
        frame = ParallelFrame(E2, E2, E3, E4, (1, -1, 1, 1))
        with pytest.raises(DegenerateFrameError):
            lorentz_orthonormalize(frame)

    def test_wrong_signature_fails(self):
        # all-spacelike tetrad cannot be normalized into a timelike slot
        frame = ParallelFrame(E2, E3, E4, Vec4(0, 1, 1, 0), (1, -1, 1, 1))
        with pytest.raises(DegenerateFrameError):
            lorentz_orthonormalize(frame)
