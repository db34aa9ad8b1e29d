import numpy as np
import pytest

from clarkframes import (AtomicMeasure, BlaschkeProduct, DomainError, InnerFunctionHandle,
                         InputError, L2Vector, TruncatedSeries, aleksandrov_membership,
                         aleksandrov_residual, backward_shift, boundary_limit_check, carrier,
                         cauchy_frame_series, clark_measure, disc_grid, eval_phi, h2_norm,
                         kernel_series, model_kernel, normalized_cauchy, poisson_phi_residual,
                         project_monomial, project_monomial_quadrature, series_eval,
                         u_coefficients, v_alpha, v_alpha_series)
from clarkframes.model import SERIES

from conftest import cantor, dirac, one_plus_cos, three_atom, two_atom


def disc_points(rng, n, radius):
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


class TestEvalPhi:
    @pytest.mark.parametrize("make", [dirac, three_atom, cantor, one_plus_cos])
    def test_vanishes_at_origin(self, make):
        assert abs(eval_phi(InnerFunctionHandle(make()), 0.0)) < 1e-12

    def test_dirac_is_identity(self, rng):
        z = disc_points(rng, 20, 0.99)
        assert np.max(np.abs(eval_phi(InnerFunctionHandle(dirac()), z) - z)) < 1e-12

    def test_cantor_two_modes(self):
        h = InnerFunctionHandle(cantor(), terms=512)
        assert abs(h(0.5) - h.with_mode(SERIES)(0.5)) < 1e-9

    @pytest.mark.parametrize("make", [three_atom, cantor, one_plus_cos])
    def test_self_map(self, make, rng):
        h = InnerFunctionHandle(make())
        assert np.all(np.abs(h(disc_points(rng, 200, 0.99))) < 1)

    def test_domain(self):
        with pytest.raises(DomainError):
            eval_phi(InnerFunctionHandle(dirac()), 1.0)

    def test_bad_mode(self):
        with pytest.raises(InputError):
            InnerFunctionHandle(dirac(), mode="fast")

    def test_boundary_is_one_at_atoms(self):
        mu = three_atom()
        assert np.allclose(InnerFunctionHandle(mu).boundary(mu.points), 1)

    def test_boundary_unimodular(self, rng):
        zeta = np.exp(2j * np.pi * rng.random(50))
        assert np.allclose(np.abs(InnerFunctionHandle(three_atom()).boundary(zeta)), 1, atol=1e-12)


class TestPoissonPhi:
    def test_origin(self):
        assert poisson_phi_residual(InnerFunctionHandle(three_atom()), 0.0) < 1e-15

    @pytest.mark.parametrize("r", [0.2, 0.7, 0.95])
    def test_dirac_real_axis(self, r):
        assert poisson_phi_residual(InnerFunctionHandle(dirac()), r) < 1e-10

    @pytest.mark.parametrize("make", [three_atom, cantor, one_plus_cos])
    def test_grid(self, make):
        h = InnerFunctionHandle(make())
        assert np.max(poisson_phi_residual(h, disc_grid(0.9, 100))) < 1e-9


class TestKernel:
    def test_dirac_kernel_is_one(self, rng):
        h = InnerFunctionHandle(dirac())
        z, w = disc_points(rng, 10, 0.9), disc_points(rng, 10, 0.9)
        assert np.allclose(model_kernel(h, z, w), 1, atol=1e-12)

    def test_origin(self):
        assert abs(model_kernel(InnerFunctionHandle(cantor()), 0, 0) - 1) < 1e-12

    def test_two_atom_closed_form(self, rng):
        h = InnerFunctionHandle(two_atom())
        z, w = disc_points(rng, 10, 0.9), disc_points(rng, 10, 0.9)
        assert np.allclose(model_kernel(h, z, w), 1 + np.conj(z) * w, atol=1e-12)

    def test_hermitian(self, rng):
        h = InnerFunctionHandle(three_atom())
        z, w = disc_points(rng, 30, 0.9), disc_points(rng, 30, 0.9)
        assert np.max(np.abs(model_kernel(h, z, w) - np.conj(model_kernel(h, w, z)))) < 1e-12

    def test_reproducing_under_quadrature(self):
        # <k_{z0}, k_z> on the circle returns k_{z0}(z), boundary values from the Blaschke form
        h = InnerFunctionHandle(three_atom())
        zeta = np.exp(2j * np.pi * (np.arange(4096) + 0.5) / 4096)
        fb = h.boundary(zeta)
        for z0, z in ((0.3, 0.5j), (-0.8, 0.2 + 0.6j), (0.7j, 0.8)):
            k0 = (1 - np.conj(h(z0)) * fb) / (1 - np.conj(z0) * zeta)
            kz = (1 - np.conj(h(z)) * fb) / (1 - np.conj(z) * zeta)
            assert abs(np.mean(k0 * np.conj(kz)) - model_kernel(h, z0, z)) < 1e-8

    def test_series_matches_closed_form(self):
        h = InnerFunctionHandle(three_atom())
        s = kernel_series(h, 0.4 - 0.3j, 256)
        for w in (0.0, 0.5, -0.3 + 0.6j):
            assert abs(series_eval(s, w) - model_kernel(h, 0.4 - 0.3j, w)) < 1e-10


class TestProjection:
    def test_constant(self, rng):
        h = InnerFunctionHandle(three_atom())
        u = h.u
        w = disc_points(rng, 10, 0.9)
        assert np.allclose(project_monomial(h, u, 0, w), 1, atol=1e-14)

    def test_dirac_n1(self, rng):
        h = InnerFunctionHandle(dirac())
        w = disc_points(rng, 10, 0.9)
        assert np.allclose(project_monomial(h, h.u, 1, w), 0, atol=1e-14)

    @pytest.mark.parametrize("n,w", [(1, 0.3), (3, 0.4j), (5, -0.6 + 0.5j), (8, 0.9)])
    def test_three_atom_quadrature(self, n, w):
        h = InnerFunctionHandle(three_atom())
        assert abs(project_monomial(h, h.u, n, w) - project_monomial_quadrature(h, n, w)) < 1e-8

    def test_cantor_quadrature(self):
        h = InnerFunctionHandle(cantor(quadrature_depth=13))
        w = 0.4j
        assert abs(project_monomial(h, h.u, 3, w) - project_monomial_quadrature(h, 3, w)) < 1e-8


class TestBoundaryLimit:
    def test_dirac(self):
        h = InnerFunctionHandle(dirac())
        r = boundary_limit_check(h, h.u, 1, 1.0)
        assert np.allclose(r.values, 0, atol=1e-15) and abs(r.target) < 1e-15 and r.converged

    def test_two_atom(self):
        h = InnerFunctionHandle(two_atom())
        r = boundary_limit_check(h, h.u, 2, 1.0)
        assert r.converged and r.target_error < 1e-6

    def test_three_atom_extrapolated_limit(self):
        # the radial values approach g_n(zeta) at rate (1 - r); the linear
        # extrapolation of the last two radii removes that term
        mu = three_atom()
        h = InnerFunctionHandle(mu)
        for zeta in mu.points:
            for n in range(9):
                r = boundary_limit_check(h, h.u, n, zeta)
                assert r.extrapolated_error < 1e-9
                assert r.target_error < 1e-5

    def test_not_an_atom(self):
        h = InnerFunctionHandle(three_atom())
        with pytest.raises(InputError):
            boundary_limit_check(h, h.u, 1, 1j)

    def test_non_atomic_source(self):
        h = InnerFunctionHandle(cantor())
        with pytest.raises(InputError):
            boundary_limit_check(h, h.u, 1, 1.0)


class TestCauchy:
    def test_constant_g(self):
        mu = three_atom()
        for z in (0.0, 0.3, -0.5j):
            assert abs(normalized_cauchy(mu, np.ones(3), z) - 1) < 1e-14

    def test_dirac_any_g(self):
        assert abs(normalized_cauchy(dirac(), np.array([2 - 3j]), 0.7j) - (2 - 3j)) < 1e-14

    def test_two_atom_indicator(self):
        mu = two_atom()
        g = np.array([1.0, 0.0])
        u = u_coefficients(mu, 200)
        assert abs(normalized_cauchy(mu, g, 0.3) - cauchy_frame_series(mu, u, g, 0.3, 200)) < 1e-8


class TestVAlpha:
    def test_dirac_constant(self, rng):
        h = InnerFunctionHandle(dirac())
        z = disc_points(rng, 10, 0.9)
        assert np.allclose(v_alpha(np.ones(1), 1.0, dirac(), h, z), 1, atol=1e-13)

    def test_equals_normalized_cauchy(self, rng):
        mu = three_atom()
        h = InnerFunctionHandle(mu)
        for _ in range(20):
            g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            z = complex(disc_points(rng, 1, 0.9)[0])
            assert abs(v_alpha(g, 1.0, mu, h, z) - normalized_cauchy(mu, g, z)) < 1e-10

    def test_isometry(self, rng):
        B = BlaschkeProduct([0.0, 0.5])
        for alpha in (1.0, 1j):
            mu = clark_measure(B, alpha).as_measure()
            for _ in range(5):
                g = rng.standard_normal(2) + 1j * rng.standard_normal(2)
                nrm, tail = h2_norm(v_alpha_series(g, alpha, mu, B, 512))
                assert abs(nrm - L2Vector(g, mu).norm()) + tail < 1e-6

    def test_unimodular_alpha(self):
        with pytest.raises(DomainError):
            v_alpha(np.ones(1), 0.5, dirac(), InnerFunctionHandle(dirac()), 0.1)

    def test_h2_norm_tail_inf_without_decay(self):
        nrm, tail = h2_norm(TruncatedSeries(np.ones(64)))
        assert nrm == 8.0 and tail == np.inf


class TestAleksandrov:
    def test_origin(self):
        mu = three_atom()
        assert aleksandrov_residual(mu, InnerFunctionHandle(mu), 0.0) < 1e-14

    def test_clark_measure_of_square(self):
        mu = two_atom()
        rep = aleksandrov_membership(mu, BlaschkeProduct([0, 0]), disc_grid(0.9, 50))
        assert rep.member and rep.max_residual < 1e-9

    def test_perturbed_weights_not_member(self):
        mu = AtomicMeasure([0.0, 0.5], [0.7, 0.3])
        rep = aleksandrov_membership(mu, BlaschkeProduct([0, 0]), disc_grid(0.9, 50))
        assert not rep.member and rep.max_residual > 0.05

    def test_own_inner_function(self):
        mu = three_atom()
        rep = aleksandrov_membership(mu, InnerFunctionHandle(mu), disc_grid(0.9, 50))
        assert rep.member


class TestBackwardShift:
    def test_identity(self):
        s = TruncatedSeries([1, 2, 3])
        assert np.array_equal(backward_shift(s, 0).coefficients, s.coefficients)

    def test_drop_one(self):
        assert np.array_equal(backward_shift(TruncatedSeries([1, 2, 3]), 1).coefficients, [2, 3])

    def test_partial_sum_identity(self):
        # f_n = f - zeta^{n+1} (S*)^{n+1} f on the circle, for f a model-space kernel
        mu = three_atom()
        h = InnerFunctionHandle(mu)
        f = kernel_series(h, 0.5 + 0.2j, 256)
        zeta = mu.points
        full = series_eval(f, zeta)
        for n in (0, 3, 10, 40):
            partial = series_eval(f.truncate(n), zeta)
            tail = series_eval(backward_shift(f, n + 1), zeta)
            assert np.max(np.abs(partial - (full - zeta ** (n + 1) * tail))) < 1e-8


def test_carrier_sizes():
    assert len(carrier(cantor(), 5)) == 32
    assert len(carrier(one_plus_cos())) == 511
