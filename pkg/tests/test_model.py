import math

import numpy as np
import pytest

from pdmqi.errors import DomainError, SingularAtOrigin
from pdmqi.model import (
    ModelParams,
    dispersion_energy,
    effective_potential_z,
    mass_momentum,
    mass_position,
    potential_x,
    x_to_z,
    z_to_x,
)
from pdmqi.special import hyp2f1_series

UNIT = ModelParams(m0=1.0, a=1.0, v1=1.0, v2=1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(m0=-1.0, a=1.0, v1=0.0, v2=0.0)
    with pytest.raises(ValueError):
        ModelParams(m0=1.0, a=0.0, v1=0.0, v2=0.0)


def test_kappa_is_derived():
    p = ModelParams(m0=3.0, a=2.0, v1=0.0, v2=0.0, hbar=0.5)
    assert p.kappa_sq == pytest.approx(2.0 * 3.0 / (2.0 * 0.5) ** 2, rel=1e-15)
    assert ModelParams.with_unit_kappa(7.3).kappa_sq == pytest.approx(1.0, rel=1e-15)


class TestMassPosition:
    def test_peak_value(self):
        p = ModelParams(m0=2.7, a=1.4, v1=0.0, v2=0.0)
        assert mass_position(0.0, p) == pytest.approx(2.7, rel=1e-15)

    def test_reference_point(self):
        # sech^2(1), independent oracle via cosh
        assert mass_position(1.0, UNIT) == pytest.approx(
            1.0 / math.cosh(1.0) ** 2, rel=1e-14)
        assert mass_position(1.0, UNIT) == pytest.approx(0.419974, abs=1e-6)

    def test_even_positive_unimodal(self):
        x = np.linspace(-12.0, 12.0, 1001)
        m = mass_position(x, UNIT)
        assert np.array_equal(mass_position(-x, UNIT), m)
        assert np.all(m > 0)
        assert np.argmax(m) == 500
        # strictly decreasing away from the center
        right = m[500:]
        assert np.all(np.diff(right) < 0)

    def test_vanishes_at_infinity(self):
        assert mass_position(400.0, UNIT) < 1e-300


class TestMassMomentum:
    def test_zero_limit(self):
        assert mass_momentum(0.0, UNIT) == pytest.approx(
            math.sqrt(2.0 / math.pi), rel=1e-12)

    def test_even(self):
        k = np.linspace(-6.0, 6.0, 101)
        assert np.allclose(mass_momentum(k, UNIT), mass_momentum(-k, UNIT),
                           rtol=0, atol=0)

    def test_reference_point(self):
        # direct closed-form oracle at k = 2
        expected = math.sqrt(math.pi / 2.0) * 2.0 / math.sinh(math.pi)
        assert mass_momentum(2.0, UNIT) == pytest.approx(expected, rel=1e-13)

    def test_series_branch_continuity(self):
        # series branch at k = 1e-6 against the direct formula
        k = 1e-6
        u = math.pi * k / 2.0
        direct = math.sqrt(math.pi / 2.0) * k / math.sinh(u)
        assert mass_momentum(k, UNIT) == pytest.approx(direct, rel=1e-8)
        assert mass_momentum(-k, UNIT) == pytest.approx(direct, rel=1e-8)


class TestDispersion:
    def test_zero_momentum(self):
        p = ModelParams(m0=1.0, a=1.0, v1=0.0, v2=0.0)
        assert dispersion_energy(0.0, p) == pytest.approx(
            -math.sqrt(2.0 / math.pi), rel=1e-14)

    def test_even(self):
        k = np.linspace(-1.9, 1.9, 41)
        assert np.allclose(dispersion_energy(k, UNIT),
                           dispersion_energy(-k, UNIT), rtol=0, atol=0)

    def test_reference_point(self):
        expected = math.sqrt(2.0 / math.pi) * (1.0 / math.sqrt(0.75)
                                               - math.cosh(1.0))
        assert dispersion_energy(1.0, UNIT) == pytest.approx(expected, rel=1e-13)

    def test_hypergeometric_identity(self):
        # the 2F1(1/2, 3/2; 3/2; z) factor is (1-z)^(-1/2) inside |z| < 1
        for k in (0.4, 1.0, 1.6):
            z = k * k / 4.0
            assert hyp2f1_series(0.5, 1.5, 1.5, z) == pytest.approx(
                (1.0 - z) ** -0.5, rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            dispersion_energy(2.0, UNIT)
        with pytest.raises(DomainError):
            dispersion_energy(np.array([0.5, -2.5]), UNIT)


class TestPotential:
    def test_reference_point(self):
        # oracle: coth^2(1) = 1.7240616, csch^2(1) = 0.7240616
        expected = 1.0 / math.tanh(1.0) ** 2 + 1.0 / math.sinh(1.0) ** 2
        assert potential_x(1.0, UNIT) == pytest.approx(expected, rel=1e-13)
        assert potential_x(1.0, UNIT) == pytest.approx(2.4481233, abs=1e-6)

    def test_asymptote(self):
        assert potential_x(40.0, UNIT) == pytest.approx(UNIT.v1, abs=1e-14)

    def test_even(self):
        x = np.linspace(0.1, 5.0, 50)
        assert np.array_equal(potential_x(x, UNIT), potential_x(-x, UNIT))

    def test_barrier_above_asymptote(self):
        x = np.linspace(0.05, 20.0, 400)
        assert np.all(potential_x(x, UNIT) - UNIT.v1 >= 0)

    def test_singular_at_origin(self):
        with pytest.raises(SingularAtOrigin):
            potential_x(0.0, UNIT)


class TestCoordinateMap:
    def test_origin_and_infinity(self):
        assert x_to_z(0.0) == 0.0
        z_far = x_to_z(50.0)
        assert z_far < math.pi / 2
        assert math.pi / 2 - z_far < 1e-15

    def test_reference_point(self):
        assert x_to_z(1.0) == pytest.approx(
            math.acos(1.0 / math.cosh(1.0)), rel=1e-14)

    def test_round_trip_core(self):
        # 1e-12 relative holds while cosh(x) * ulp(pi/2) stays below it
        x = np.linspace(-12.0, 12.0, 481)
        x = x[x != 0.0]
        back = z_to_x(x_to_z(x))
        assert np.max(np.abs(back / x - 1.0)) < 1e-12

    def test_round_trip_tail_conditioning(self):
        # beyond |x| ~ 12 the float resolution of z near pi/2 caps the
        # achievable round-trip accuracy at ~cosh(x) * ulp(pi/2)
        ulp = np.spacing(math.pi / 2)
        for x in (13.0, 16.0, 20.0):
            err = abs(z_to_x(x_to_z(x)) - x)
            assert err < max(1e-12 * x, 2.0 * ulp * math.cosh(x))

    def test_odd(self):
        x = np.linspace(0.1, 8.0, 40)
        assert np.array_equal(x_to_z(-x), -x_to_z(x))

    def test_domain_error(self):
        for z in (math.pi / 2, -math.pi / 2, 1.8):
            with pytest.raises(DomainError):
                z_to_x(z)


class TestEffectivePotential:
    def test_free_case_center(self):
        free = ModelParams(m0=1.0, a=1.0, v1=0.0, v2=0.0)
        assert effective_potential_z(0.0, free) == pytest.approx(0.5, abs=1e-15)

    def test_preset_reference(self):
        p = ModelParams.with_unit_kappa(1.0)
        assert effective_potential_z(math.pi / 4, p) == pytest.approx(
            4.25, rel=1e-14)

    def test_even(self):
        z = np.linspace(0.05, 1.5, 60)
        p = ModelParams.with_unit_kappa(2.0)
        assert np.array_equal(effective_potential_z(z, p),
                              effective_potential_z(-z, p))

    def test_confinement_divergence(self):
        p = ModelParams.with_unit_kappa(1.0)
        assert effective_potential_z(math.pi / 2 - 1e-6, p) > 1e10
        free = ModelParams(m0=1.0, a=1.0, v1=0.0, v2=0.0)
        assert effective_potential_z(-math.pi / 2 + 1e-6, free) > 1e10

    def test_singularities(self):
        p = ModelParams.with_unit_kappa(1.0)
        with pytest.raises(SingularAtOrigin):
            effective_potential_z(0.0, p)
        with pytest.raises(DomainError):
            effective_potential_z(math.pi / 2, p)
        # attractive csch^2 term alone still shifts the center value
        attract = ModelParams(m0=1.0, a=1.0, v1=1.0, v2=-1.0)
        assert effective_potential_z(0.0, attract) == pytest.approx(
            0.5 + attract.kappa_sq, rel=1e-14)
