import numpy as np
import pytest

from clarkframes import (BlaschkeProduct, ComposedInner, DomainError, InputError, cauchy,
                         clark_composition_check, clark_measure, clark_poisson_residual,
                         disc_grid, divisor_check, divisor_gram_check)

B_TESTS = {
    "z": BlaschkeProduct([0.0]),
    "z^2": BlaschkeProduct([0.0, 0.0]),
    "z(z-0.5)/(1-0.5z)": BlaschkeProduct([0.0, 0.5]),
    "mixed": BlaschkeProduct([0.0, 0.3 + 0.4j, -0.6j, 0.9]),
}
ALPHAS = (1.0, 1j, -1.0, np.exp(0.7j))


class TestBlaschke:
    def test_rejects_zero_outside_disc(self):
        with pytest.raises(DomainError):
            BlaschkeProduct([1.0])

    def test_unimodular_on_circle(self, rng):
        zeta = np.exp(2j * np.pi * rng.random(100))
        for B in B_TESTS.values():
            assert np.allclose(np.abs(B(zeta)), 1, atol=1e-13)

    def test_derivative_by_finite_difference(self, rng):
        B = B_TESTS["mixed"]
        z = 0.5 * np.exp(2j * np.pi * rng.random(10))
        h = 1e-6
        fd = (B(z + h) - B(z - h)) / (2 * h)
        assert np.allclose(B.derivative(z), fd, atol=1e-7)

    def test_taylor(self):
        B = B_TESTS["mixed"]
        s = B.taylor(200)
        for z in (0.2, -0.5j, 0.3 + 0.3j):
            assert abs(s(z) - B(z)) < 1e-12

    def test_arg_lift_gains_full_turns(self):
        for B in B_TESTS.values():
            gain = B.arg_lift(1.0) - B.arg_lift(0.0)
            assert abs(gain - 2 * np.pi * B.degree) < 1e-12

    def test_arg_lift_increasing(self):
        t = np.linspace(0, 1, 2001)
        assert np.all(np.diff(B_TESTS["mixed"].arg_lift(t)) > 0)

    def test_composition(self, rng):
        C = ComposedInner(BlaschkeProduct([0.0, 0.0]), BlaschkeProduct([0.0, 0.5]))
        z = 0.7 * np.exp(2j * np.pi * rng.random(5))
        inner = (z * (z - 0.5) / (1 - 0.5 * z))
        assert np.allclose(C(z), inner ** 2)
        assert C.degree == 4


class TestClarkMeasure:
    def test_identity(self):
        c = clark_measure(B_TESTS["z"], 1.0)
        assert np.allclose(c.t, [0]) and np.allclose(c.weights, [1])

    def test_square(self):
        c = clark_measure(B_TESTS["z^2"], 1.0)
        assert np.allclose(c.t, [0, 0.5], atol=1e-15) and np.allclose(c.weights, [0.5, 0.5])

    @pytest.mark.parametrize("name", list(B_TESTS))
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_poisson_identity(self, name, alpha):
        B = B_TESTS[name]
        c = clark_measure(B, alpha)
        assert len(c.t) == B.degree
        assert np.all(c.weights > 0)
        assert abs(c.weights.sum() - 1) < 1e-12
        assert np.allclose(B(c.points), alpha, atol=1e-12)
        assert np.max(clark_poisson_residual(B, c, disc_grid(0.9, 50))) < 1e-9

    def test_requires_zero_at_origin(self):
        with pytest.raises(InputError):
            clark_measure(BlaschkeProduct([0.5]), 1.0)

    def test_alpha_unimodular(self):
        with pytest.raises(DomainError):
            clark_measure(B_TESTS["z"], 2.0)


class TestComposition:
    def test_trivial_outer(self):
        rep = clark_composition_check(B_TESTS["z(z-0.5)/(1-0.5z)"], B_TESTS["z"], 1j)
        assert rep.passed(1e-12)

    def test_z_in_square(self):
        rep = clark_composition_check(B_TESTS["z"], B_TESTS["z^2"], 1j)
        assert rep.passed(1e-10)
        assert np.allclose(rep.direct.weights, 0.5)

    def test_square_in_square(self):
        rep = clark_composition_check(B_TESTS["z^2"], B_TESTS["z^2"], 1.0)
        assert rep.passed(1e-9)
        assert np.allclose(rep.direct.weights, 0.25)
        assert np.allclose(rep.direct.t, [0, 0.25, 0.5, 0.75])

    def test_generic(self):
        rep = clark_composition_check(B_TESTS["mixed"], B_TESTS["z(z-0.5)/(1-0.5z)"], np.exp(0.3j))
        assert rep.passed(1e-9)

    def test_theta_must_vanish_at_origin(self):
        with pytest.raises(InputError):
            clark_composition_check(B_TESTS["z"], BlaschkeProduct([0.4]), 1.0)


class TestDivisors:
    def test_cases(self):
        a = 0.3
        B1 = BlaschkeProduct([0.0, a])
        assert divisor_check(B_TESTS["z"], B_TESTS["z^2"])
        assert not divisor_check(B_TESTS["z^2"], B_TESTS["z"])
        assert divisor_check(B1, B1 * BlaschkeProduct([0.0]))

    def test_gram_of_kernels(self):
        B1 = BlaschkeProduct([0.0, 0.3])
        B2 = B1 * BlaschkeProduct([0.0, -0.5j])
        zs = [0.0, 0.4, -0.2 + 0.5j, 0.7j]
        for alpha in (1.0, -1j):
            assert divisor_gram_check(B1, B2, zs, alpha) < 1e-8


@pytest.mark.parametrize("alpha", ALPHAS)
def test_cauchy_transform_of_clark_measure(alpha):
    B = B_TESTS["mixed"]
    mu = clark_measure(B, alpha).as_measure()
    z = disc_grid(0.9, 30)
    assert np.max(np.abs(cauchy(mu, z) - 1 / (1 - np.conj(alpha) * B(z)))) < 1e-10
