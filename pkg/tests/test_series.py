import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clarkframes import (AtomicMeasure, DomainError, InputError, InnerFunctionHandle, RangeError,
                         TruncatedSeries, dual_sequence, fourier_coeffs, frame_polynomial,
                         frame_values, phi_series, series_eval, series_multiply,
                         series_reciprocal, toeplitz_residual, u_coefficients)
from clarkframes.model import SERIES
from clarkframes.series import u_from_coefficients

from conftest import cantor, dirac, one_plus_cos, three_atom, two_atom


class TestSeriesAlgebra:
    def test_reciprocal_of_geometric(self):
        r = series_reciprocal(TruncatedSeries(np.ones(8)))
        assert np.allclose(r.coefficients, [1, -1, 0, 0, 0, 0, 0, 0], atol=0)

    def test_reciprocal_needs_constant_term(self):
        with pytest.raises(DomainError):
            series_reciprocal(TruncatedSeries([0, 1, 2]))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False),
                    min_size=1, max_size=30))
    def test_multiply_by_reciprocal_is_one(self, tail):
        a = TruncatedSeries(np.concatenate([[1.0], np.asarray(tail) * 0.5]))
        r = series_reciprocal(a)
        prod = series_multiply(a, r)
        expect = np.zeros(len(a))
        expect[0] = 1
        # reciprocals of short random series can grow geometrically; scale the bound with them
        scale = len(a) * max(1.0, float(np.max(np.abs(r.coefficients))))
        assert np.max(np.abs(prod.coefficients - expect)) < 1e-14 * scale

    def test_multiply_by_reciprocal_fixed(self, rng):
        a = TruncatedSeries(np.concatenate([[1.0], 0.3 * rng.standard_normal(64)]))
        prod = series_multiply(a, series_reciprocal(a))
        assert np.max(np.abs(prod.coefficients[1:])) < 1e-13
        assert abs(prod.coefficients[0] - 1) < 1e-15

    def test_eval_identity(self):
        assert series_eval(TruncatedSeries([0, 1]), 0.3 + 0.4j) == 0.3 + 0.4j

    def test_eval_horner_matches_polyval(self, rng):
        c = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        z = 0.7 * np.exp(1j * rng.uniform(0, 6, 10))
        assert np.allclose(series_eval(TruncatedSeries(c), z), np.polynomial.polynomial.polyval(z, c),
                           rtol=0, atol=1e-12)

    def test_product_is_truncated(self):
        p = TruncatedSeries([1, 1]) * TruncatedSeries([1, 1])
        assert p.degree == 1 and np.allclose(p.coefficients, [1, 2])


class TestUCoefficients:
    def test_dirac(self):
        u = u_coefficients(dirac(), 6)
        assert np.allclose(u.values[1:], [-1, 0, 0, 0, 0, 0], atol=0)

    def test_lebesgue(self):
        u = u_from_coefficients(np.concatenate([[1.0], np.zeros(10)]))
        assert np.all(u.values == 0)

    def test_two_atom(self):
        u = u_coefficients(two_atom(), 6)
        assert np.allclose(u.values[1:], [0, -1, 0, 0, 0, 0], atol=1e-15)

    def test_non_probability_rejected(self):
        with pytest.raises(InputError):
            u_coefficients(AtomicMeasure([0.0], [2.0]), 4)

    @pytest.mark.parametrize("make", [dirac, two_atom, three_atom, cantor, one_plus_cos])
    def test_toeplitz_identity(self, make):
        mu = make()
        u = u_coefficients(mu, 512)
        assert toeplitz_residual(fourier_coeffs(mu, 512), u) < 1e-11

    def test_recursion_against_matrix_inverse(self):
        # strictly lower part of (I + M)^-1 - I, M the Toeplitz matrix of mu_hat(i - j)
        mu = three_atom()
        N = 40
        c = fourier_coeffs(mu, N)
        M = np.zeros((N + 1, N + 1), dtype=complex)
        for i in range(N + 1):
            for j in range(i):
                M[i, j] = c[i - j]
        inv = np.linalg.inv(np.eye(N + 1) + M)
        u = u_coefficients(mu, N)
        assert np.max(np.abs(inv[1:, 0] - u.values[1:])) < 1e-10


class TestPhiSeries:
    def test_dirac_is_identity(self):
        c = phi_series(dirac(), 8).coefficients
        assert np.allclose(c, [0, 1, 0, 0, 0, 0, 0, 0, 0], atol=1e-15)

    def test_two_atom_is_square(self):
        c = phi_series(two_atom(), 8).coefficients
        assert np.allclose(c, [0, 0, 1, 0, 0, 0, 0, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("make", [three_atom, cantor, one_plus_cos])
    def test_vanishes_at_origin(self, make):
        assert phi_series(make(), 32).coefficients[0] == 0

    @pytest.mark.parametrize("make", [dirac, two_atom, three_atom, cantor])
    def test_two_path_agreement(self, make, rng):
        h = InnerFunctionHandle(make(), terms=512)
        z = 0.9 * np.sqrt(rng.random(60)) * np.exp(2j * np.pi * rng.random(60))
        assert np.max(np.abs(h(z) - h.with_mode(SERIES)(z))) < 1e-9

    def test_unconjugated_convention_is_the_ratio(self, rng):
        # the conjugated alternative is visibly wrong on the non-symmetric measure
        mu = three_atom()
        h = InnerFunctionHandle(mu, terms=256)
        z = 0.8 * np.exp(2j * np.pi * rng.random(20))
        alt = TruncatedSeries(np.conj(phi_series(mu, 256).coefficients))
        assert np.max(np.abs(series_eval(alt, z) - h(z))) > 1e-2

    def test_product_identity(self):
        # (1 + eta)(1 - phi) = 1 with eta the coefficient series
        mu = three_atom()
        N = 128
        c = fourier_coeffs(mu, N)
        eta = TruncatedSeries(np.concatenate([[1.0], c[1:]]))
        one_minus_phi = TruncatedSeries.one(N) - phi_series(mu, N)
        prod = (eta * one_minus_phi).coefficients
        assert abs(prod[0] - 1) < 1e-14 and np.max(np.abs(prod[1:])) < 1e-12


class TestFramePolynomial:
    def test_g0(self):
        g = frame_polynomial(0, u_coefficients(three_atom(), 4))
        assert np.array_equal(g.coefficients, [1])

    def test_dirac_g1(self):
        g = frame_polynomial(1, u_coefficients(dirac(), 4))
        assert np.allclose(g.coefficients, [-1, 1])

    def test_two_atom_g2(self):
        g = frame_polynomial(2, u_coefficients(two_atom(), 4))
        assert np.allclose(g.coefficients, [-1, 0, 1], atol=1e-15)

    def test_top_coefficient_and_length(self):
        u = u_coefficients(cantor(), 30)
        for n in range(31):
            g = frame_polynomial(n, u)
            assert len(g.coefficients) == n + 1 and g.coefficients[-1] == 1

    def test_range_error(self):
        with pytest.raises(RangeError):
            frame_polynomial(5, u_coefficients(dirac(), 4))

    def test_lebesgue_gives_monomials(self):
        u = u_from_coefficients(np.concatenate([[1.0], np.zeros(10)]))
        for n in range(11):
            c = frame_polynomial(n, u).coefficients
            assert np.all(c[:-1] == 0)

    def test_values_match_recursion(self, rng):
        mu = three_atom()
        u = u_coefficients(mu, 40)
        zeta = np.exp(2j * np.pi * rng.random(7))
        V = frame_values(u, zeta, 40)
        for n in (0, 1, 9, 40):
            assert np.allclose(V[n], frame_polynomial(n, u)(zeta), atol=1e-12)

    def test_equals_kaczmarz_dual(self):
        mu = three_atom()
        u = u_coefficients(mu, 64)
        V = frame_values(u, mu.points, 64)
        duals = dual_sequence(mu, 64)
        assert max(np.max(np.abs(d.values - V[n])) for n, d in enumerate(duals)) < 1e-10
