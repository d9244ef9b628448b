"""Flat and minimal radius families over straight spines."""

import math
import random

import pytest

from conftest import linspace
from canal4d.errors import DegenerateNormalError, DomainError
from canal4d.canal import CanalSurface, RadiusProfile
from canal4d import diffgeo, families


class TestLinearFamily:
    def test_constant_radius_on_positive_parity(self):
        profile = families.linear_radius(2, 0.0, 1.0)
        assert profile.r(3.7) == 1.0
        assert profile.interval == (-math.inf, math.inf)

    def test_slope_requirement_on_negative_parity(self):
        with pytest.raises(DomainError):
            families.linear_radius(1, 0.5, 1.0)
        profile = families.linear_radius(1, 2.0, 0.0)
        assert profile.dr(1.0) == 2.0

    def test_flatness(self):
        report = families.verify_family(families.linear_radius(2, 0.5, 1.0), 2,
                                        linspace(0.0, 2.0, 41))
        assert report.quantity == "gaussian"
        assert report.grid_max < 1e-10
        assert report.singular_points == 0
        report1 = families.verify_family(families.linear_radius(1, 2.0, 0.1), 1,
                                         linspace(0.1, 2.0, 41))
        assert report1.grid_max < 1e-10

    def test_linear_is_not_minimal(self):
        surf = CanalSurface(2, families.straight_spine(2),
                            families.linear_radius(2, 0.0, 1.0), (-1.0, 1.0))
        from canal4d.closedform import mean_closed
        assert abs(mean_closed(surf, 0.0, 0.1, 0.1) + 2.0 / 3.0) < 1e-14


class TestRootFamily:
    def test_flat_root_shape(self):
        profile = families.flat_root_radius(1, 0.0, 0.0)
        assert profile.interval == (1.0, math.inf)
        for u in (1.2, 2.0, 3.0):
            assert abs(profile.r(u) - math.sqrt(u * u - 1.0)) < 1e-14

    def test_minimal_root_shape(self):
        profile = families.minimal_root_radius(2, 0.0, 0.0)
        lo, hi = profile.interval
        assert (lo, hi) == (-1.0, 1.0)
        for u in (-0.5, 0.0, 0.6):
            assert abs(profile.r(u) - math.sqrt(1.0 - u * u)) < 1e-14

    def test_negative_branch_rejected(self):
        with pytest.raises(DomainError):
            families.flat_root_radius(1, 0.0, 0.0, sign=-1)

    def test_satisfies_degenerate_envelope_equation(self):
        for m, c1, c2 in ((1, 0.0, 0.0), (2, 0.3, -0.1), (7, 0.2, 0.5),
                          (8, 0.0, 1.0)):
            profile = families.flat_root_radius(m, c1, c2)
            lo, hi = profile.interval
            hi = min(hi, lo + 2.0)
            us = linspace(lo + 0.1, hi - 0.05, 21)
            res = families.ode_residuals(profile, m, us)
            assert res["degenerate_envelope"] < 1e-12
            # and it satisfies neither of the nondegenerate equations
            assert res["flat"] > 1e-3
            assert res["minimal"] > 1e-3

    def test_parametrization_collapses(self):
        # u-tangent vanishes identically: the envelope is a fixed
        # pseudosphere slice, not a hypersurface
        profile = families.flat_root_radius(1, 0.0, 0.0)
        surf = CanalSurface(1, families.straight_spine(1), profile, (1.2, 3.0))
        h = 1e-6
        for u in (1.5, 2.0, 2.5):
            cu = (surf.evaluate(u + h, 0.3, -0.2)
                  - surf.evaluate(u - h, 0.3, -0.2)) * (0.5 / h)
            assert max(abs(c) for c in cu) < 1e-8
        with pytest.raises(DegenerateNormalError):
            diffgeo.surface_invariants(surf, 2.0, 0.3, -0.2)

    def test_verify_family_reports_degeneracy(self):
        profile = families.flat_root_radius(1, 0.0, 0.0)
        report = families.verify_family(profile, 1, linspace(1.2, 3.0, 21))
        assert report.degenerate
        assert report.singular_points == report.n_points
        assert report.grid_max is None


class TestQuadratureFamily:
    def test_minimality(self):
        for m in (2, 7):
            profile = families.minimal_quadrature_radius(m, 1.0, -0.5,
                                                         (-0.05, 0.35))
            report = families.verify_family(profile, m, linspace(0.0, 0.3, 21))
            assert report.quantity == "mean"
            assert report.grid_max < 1e-10
            assert report.ode_residuals["minimal"] < 1e-12

    def test_first_integral_conserved(self):
        profile = families.minimal_quadrature_radius(2, 1.0, -0.5, (-0.05, 0.35))
        values = [families.quadrature_constant(profile, 2, u)
                  for u in linspace(0.0, 0.3, 31)]
        assert max(values) - min(values) < 1e-8

    def test_integral_relation_recovers_u(self):
        profile = families.minimal_quadrature_radius(2, 1.0, -0.5, (-0.05, 0.35))
        mismatch = families.quadrature_mismatch(profile, 2, 0.0,
                                                linspace(0.02, 0.3, 11))
        assert mismatch < 1e-6

    def test_negative_parity_type(self):
        profile = families.minimal_quadrature_radius(1, 1.0, 1.5, (-0.1, 0.3))
        report = families.verify_family(profile, 1, linspace(-0.05, 0.25, 15))
        assert report.grid_max < 1e-10

    def test_invalid_initial_data(self):
        with pytest.raises(DomainError):
            families.minimal_quadrature_radius(2, -1.0, 0.0, (0.0, 1.0))
        with pytest.raises(DomainError):
            families.minimal_quadrature_radius(1, 1.0, 0.5, (0.0, 1.0))


class TestNegativeControls:
    def test_quadratic_radius_is_not_flat(self):
        profile = RadiusProfile.polynomial((0.0, 0.0, 1.0))
        report = families.verify_family(profile, 2, linspace(0.5, 1.5, 21))
        assert report.grid_max > 1e-2

    def test_tube_is_not_minimal(self):
        profile = RadiusProfile(lambda u: 1.0, lambda u: 0.0, lambda u: 0.0,
                                lambda u: 0.0, family="minimal_control")
        report = families.verify_family(profile, 2, linspace(-0.5, 0.5, 11))
        assert report.quantity == "mean"
        assert abs(report.grid_max - 2.0 / 3.0) < 1e-12
