"""Canal hypersurface parametrizations, tables, and envelope diagnostics."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import linspace, max_component_diff
from canal4d.errors import DomainError
from canal4d.minkowski import E1, E2, Vec4, inner
from canal4d.spine import FrameKind, SpineCurve
from canal4d.canal import (CanalSurface, RadiusProfile, TypeTables,
                           evaluate_explicit_12, radial_parity, shape_functions,
                           shape_jet)

ANGLES = st.floats(min_value=-1.2, max_value=1.2, allow_nan=False)


def surface_for(m, radius, u_interval=(-1.0, 1.0), spine=None):
    tables = TypeTables.for_type(m)
    spine = spine or SpineCurve.line(tables.spine_kind)
    return CanalSurface(m, spine, radius, u_interval)


class TestTypeTables:
    def test_radial_parity_matches_factorials(self):
        for m in range(1, 9):
            assert TypeTables.for_type(m).s == radial_parity(m)

    def test_parity_values(self):
        assert [radial_parity(m) for m in range(1, 9)] == \
            [-1, 1, -1, 1, -1, 1, 1, -1]

    def test_mu_is_componentwise_sign_of_eps(self):
        # the identity 3H - r^2 K - 2 eta / r = 0 needs mu = +/- eps
        for m in range(1, 9):
            t = TypeTables.for_type(m)
            ratios = {mu // e for mu, e in zip(t.mu, t.eps)}
            assert ratios in ({1}, {-1})

    def test_spine_kind_pairing(self):
        kinds = [TypeTables.for_type(m).spine_kind for m in range(1, 9)]
        assert kinds[:2] == [FrameKind.SPACELIKE_B2_TIMELIKE] * 2
        assert kinds[2:4] == [FrameKind.SPACELIKE_B3_TIMELIKE] * 2
        assert kinds[4:6] == [FrameKind.SPACELIKE_B4_TIMELIKE] * 2
        assert kinds[6:] == [FrameKind.TIMELIKE] * 2

    def test_out_of_range_type(self):
        with pytest.raises(DomainError):
            TypeTables.for_type(9)


class TestShapeFunctions:
    def test_examples(self):
        assert shape_functions(1, 0.0, 0.0) == (1.0, 0.0, 0.0)
        f = shape_functions(7, math.pi / 2, 0.0)
        assert abs(f[0]) < 1e-16 and f[1] == 1.0 and f[2] == 0.0

    @given(st.integers(min_value=1, max_value=8), ANGLES, ANGLES)
    @settings(max_examples=300)
    def test_signature_weighted_square(self, m, v, w):
        tables = TypeTables.for_type(m)
        sig = tables.spine_kind.signature
        f = shape_functions(m, v, w)
        square = sum(s * fi * fi for s, fi in zip(sig[1:], f))
        expected = 1.0 if tables.circular else -1.0
        assert abs(square - expected) < 1e-12

    def test_hyperbolic_identity_type_3(self):
        f1, f2, f3 = shape_functions(3, 1.0, 1.0)
        assert abs(f1 * f1 - f2 * f2 + f3 * f3 + 1.0) < 1e-12

    @pytest.mark.parametrize("m", [1, 3, 5, 7])
    def test_jet_matches_finite_differences(self, m):
        h = 1e-6
        h2 = 1e-5  # second differences need a larger step against rounding
        for v, w in ((0.3, -0.4), (-0.8, 0.5)):
            sj = shape_jet(m, v, w)
            fv = [(a - b) / (2 * h) for a, b in zip(shape_functions(m, v + h, w),
                                                    shape_functions(m, v - h, w))]
            fw = [(a - b) / (2 * h) for a, b in zip(shape_functions(m, v, w + h),
                                                    shape_functions(m, v, w - h))]
            assert max(abs(a - b) for a, b in zip(sj.fv, fv)) < 1e-9
            assert max(abs(a - b) for a, b in zip(sj.fw, fw)) < 1e-9
            fvv = [(a - 2 * b + c) / h2**2
                   for a, b, c in zip(shape_functions(m, v + h2, w),
                                      shape_functions(m, v, w),
                                      shape_functions(m, v - h2, w))]
            assert max(abs(a - b) for a, b in zip(sj.fvv, fvv)) < 1e-4
            fvw = [(a - b - c + d) / (4 * h2 * h2)
                   for a, b, c, d in zip(shape_functions(m, v + h2, w + h2),
                                         shape_functions(m, v + h2, w - h2),
                                         shape_functions(m, v - h2, w + h2),
                                         shape_functions(m, v - h2, w - h2))]
            assert max(abs(a - b) for a, b in zip(sj.fvw, fvw)) < 1e-4


class TestEvaluate:
    def test_unit_tube_type_2(self):
        surf = surface_for(2, RadiusProfile.constant(1.0))
        for u, v, w in ((0.0, 0.0, 0.0), (0.5, 0.7, -0.3), (-0.9, -1.1, 0.4)):
            got = surf.evaluate(u, v, w)
            want = Vec4(math.cosh(v) * math.cosh(w), u, math.sinh(w),
                        math.sinh(v) * math.cosh(w))
            assert max_component_diff(got, want) < 1e-15

    def test_unit_tube_type_7(self):
        spine = SpineCurve.line(FrameKind.TIMELIKE)
        surf = CanalSurface(7, spine, RadiusProfile.constant(1.0), (-1.0, 1.0))
        got = surf.evaluate(0.8, 1.1, -0.4)
        want = Vec4(0.8, math.cos(1.1) * math.cos(-0.4),
                    math.sin(1.1) * math.cos(-0.4), math.sin(-0.4))
        assert max_component_diff(got, want) < 1e-15

    def test_type_1_growing_radius(self):
        surf = surface_for(1, RadiusProfile.linear(2.0, 0.0), (0.5, 2.0))
        got = surf.evaluate(1.0, 0.0, 0.0)
        want = Vec4(2.0 * math.sqrt(3.0), 1.0 - 4.0, 0.0, 0.0)
        assert max_component_diff(got, want) < 1e-14

    def test_matches_explicit_first_pair_form(self):
        rng = random.Random(29)
        for m in (1, 2):
            radius = (RadiusProfile.linear(1.5, 0.2) if m == 1
                      else RadiusProfile.linear(0.2, 1.5))
            spine = SpineCurve.constant_curvature(
                FrameKind.SPACELIKE_B2_TIMELIKE, (0.3, 0.2, 0.1))
            surf = CanalSurface(m, spine, radius, (0.1, 1.0))
            for _ in range(50):
                u = rng.uniform(0.15, 0.95)
                v = rng.uniform(-1.5, 1.5)
                w = rng.uniform(-1.5, 1.5)
                assert max_component_diff(surf.evaluate(u, v, w),
                                          evaluate_explicit_12(surf, u, v, w)) \
                    < 1e-13

    def test_parameter_box_enforced(self):
        surf = surface_for(2, RadiusProfile.constant(1.0))
        with pytest.raises(DomainError):
            surf.evaluate(5.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            surf.evaluate(0.0, 3.0, 0.0)


class TestConstruction:
    def test_kind_pairing_rejected(self):
        spine = SpineCurve.line(FrameKind.TIMELIKE)
        with pytest.raises(DomainError, match="spine.kind"):
            CanalSurface(1, spine, RadiusProfile.linear(2.0, 0.0), (0.5, 1.0))

    def test_validity_rejected_for_constant_radius_negative_parity(self):
        # s = -1 requires r'^2 > 1, so a tube of type 1 cannot exist
        with pytest.raises(DomainError, match="validity"):
            surface_for(1, RadiusProfile.constant(1.0))

    def test_validity_boundary_rejected(self):
        # slope exactly 1 sits on the boundary of s + r'^2 > 0
        with pytest.raises(DomainError, match="validity"):
            surface_for(1, RadiusProfile.linear(1.0, 0.5), (0.1, 1.0))

    def test_positive_radius_required(self):
        with pytest.raises(DomainError, match="positive"):
            surface_for(2, RadiusProfile.linear(1.0, -2.0), (0.0, 1.0))


class TestGaussMap:
    def test_unit_tube_normal(self):
        surf = surface_for(2, RadiusProfile.constant(1.0))
        for v, w in ((0.0, 0.0), (0.7, -0.3)):
            n = surf.gauss_map(0.2, v, w)
            want = Vec4(math.cosh(v) * math.cosh(w), 0.0, math.sinh(w),
                        math.sinh(v) * math.cosh(w)) * -1.0
            assert max_component_diff(n, want) < 1e-15
            assert abs(inner(n, n) + 1.0) < 1e-14

    def test_explicit_first_pair_normal(self):
        # for types 1 and 2 the field reduces to
        # -(r' B1 + (-1)^n sqrt((-1)^n + r'^2) (f1 B2 + f2 B3 + f3 B4))
        rng = random.Random(41)
        for m in (1, 2):
            radius = (RadiusProfile.linear(1.5, 0.2) if m == 1
                      else RadiusProfile.linear(0.2, 1.5))
            surf = surface_for(m, radius, (0.1, 1.0))
            sn = -1.0 if m == 1 else 1.0
            for _ in range(25):
                u, v, w = rng.uniform(0.15, 0.95), rng.uniform(-1, 1), rng.uniform(-1, 1)
                _, frame = surf.spine.frame_at(u)
                dr = surf.radius.dr(u)
                root = math.sqrt(sn + dr * dr)
                f1, f2, f3 = shape_functions(m, v, w)
                want = -(frame.b1 * dr
                         + (frame.b2 * f1 + frame.b3 * f2 + frame.b4 * f3)
                         * (sn * root))
                assert max_component_diff(surf.gauss_map(u, v, w), want) < 1e-13

    @pytest.mark.parametrize("m", range(1, 9))
    def test_unit_and_orthogonal_to_tangents(self, m):
        tables = TypeTables.for_type(m)
        spine = SpineCurve.constant_curvature(tables.spine_kind, (0.3, 0.2, 0.1))
        radius = (RadiusProfile.linear(0.2, 1.5) if tables.s > 0
                  else RadiusProfile.linear(1.5, 0.2))
        surf = CanalSurface(m, spine, radius, (0.0, 1.2))
        rng = random.Random(100 + m)
        h = 1e-5
        eps_seen = set()
        for _ in range(20):
            u = rng.uniform(0.3, 0.9)
            v = rng.uniform(*surf.v_interval) * 0.4
            w = rng.uniform(*surf.w_interval) * 0.4
            n = surf.gauss_map(u, v, w)
            q = inner(n, n)
            assert abs(abs(q) - 1.0) < 1e-12
            eps_seen.add(1 if q > 0 else -1)
            for axis in range(3):
                args_p = [u, v, w]
                args_m = [u, v, w]
                args_p[axis] += h
                args_m[axis] -= h
                tangent = (surf.evaluate(*args_p) - surf.evaluate(*args_m)) \
                    * (0.5 / h)
                assert abs(inner(n, tangent)) < 1e-8
        # the normal's causal character is constant over the sampled strip
        assert len(eps_seen) == 1
        assert eps_seen.pop() == (1 if m % 2 else -1)


class TestEnvelopeDiagnostics:
    def test_membership_tube_values(self):
        surf2 = surface_for(2, RadiusProfile.constant(1.0))
        diff = surf2.evaluate(0.3, 0.8, -0.5) - surf2.spine.point_at(0.3)
        assert abs(inner(diff, diff) + 1.0) < 1e-14
        spine7 = SpineCurve.line(FrameKind.TIMELIKE)
        surf7 = CanalSurface(7, spine7, RadiusProfile.constant(1.0), (-1, 1))
        diff7 = surf7.evaluate(0.3, 0.8, -0.5) - spine7.point_at(0.3)
        assert abs(inner(diff7, diff7) - 1.0) < 1e-14

    @pytest.mark.parametrize("m", range(1, 9))
    def test_membership_residual_random(self, m):
        tables = TypeTables.for_type(m)
        spine = SpineCurve.constant_curvature(tables.spine_kind, (0.3, 0.2, 0.1))
        radius = (RadiusProfile.linear(0.2, 1.5) if tables.s > 0
                  else RadiusProfile.linear(1.5, 0.2))
        surf = CanalSurface(m, spine, radius, (0.0, 1.2))
        rng = random.Random(m)
        for _ in range(100):
            u = rng.uniform(0.1, 1.0)
            v = rng.uniform(*surf.v_interval)
            w = rng.uniform(*surf.w_interval)
            r = surf.radius.r(u)
            assert abs(surf.membership_residual(u, v, w)) < 1e-10 * (1 + r * r)

    def test_radial_tangent_orthogonality(self):
        # u-independent radial part of the tube gives exactly zero
        surf = surface_for(2, RadiusProfile.constant(1.0))
        assert surf.tangent_radial_orthogonality(0.2, 0.7, -0.4) == 0.0
        # growing radius and bent spines stay at finite-difference noise
        surf1 = surface_for(1, RadiusProfile.linear(2.0, 0.0), (0.5, 2.0))
        rng = random.Random(53)
        for _ in range(50):
            val = surf1.tangent_radial_orthogonality(
                rng.uniform(0.6, 1.9), rng.uniform(-1, 1), rng.uniform(-1, 1))
            assert abs(val) < 1e-7
        tables = TypeTables.for_type(8)
        spine8 = SpineCurve.constant_curvature(tables.spine_kind, (0.3, 0.2, 0.1))
        surf8 = CanalSurface(8, spine8, RadiusProfile.linear(1.5, 0.2), (0.0, 1.2))
        for _ in range(50):
            val = surf8.tangent_radial_orthogonality(
                rng.uniform(0.1, 1.0), rng.uniform(0.3, 5.9),
                rng.uniform(-0.5, 0.5))
            assert abs(val) < 1e-7
