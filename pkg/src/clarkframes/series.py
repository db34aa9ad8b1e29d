"""Truncated power series and unit lower-triangular Toeplitz algebra.

A lower-triangular Toeplitz matrix with first column ``(1, a_1, a_2, ...)`` is
the multiplication operator by ``1 + a_1 z + a_2 z^2 + ...`` on truncated
power series, so inverting it is the same as taking a series reciprocal.
Everything here works at a fixed truncation degree ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, RangeError
from .measure import Measure, fourier_coeffs

DEFAULT_TERMS = 256


def _fsum_dot(a: np.ndarray, b: np.ndarray) -> complex:
    p = a * b
    return complex(math.fsum(p.real), math.fsum(p.imag))


@dataclass(frozen=True)
class TruncatedSeries:
    """Taylor polynomial ``c_0 + c_1 z + ... + c_N z^N``."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex).ravel()
        if c.size == 0:
            raise InputError("a series needs at least the constant coefficient")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __len__(self) -> int:
        return self.coefficients.size

    def __getitem__(self, k):
        return self.coefficients[k]

    def __call__(self, z):
        return series_eval(self, z)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_multiply(self, other)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(len(self), len(other))
        return TruncatedSeries(self.coefficients[:n] + other.coefficients[:n])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(len(self), len(other))
        return TruncatedSeries(self.coefficients[:n] - other.coefficients[:n])

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.coefficients)

    def scale(self, c: complex) -> "TruncatedSeries":
        return TruncatedSeries(c * self.coefficients)

    def truncate(self, N: int) -> "TruncatedSeries":
        c = self.coefficients[:N + 1]
        if c.size < N + 1:
            c = np.concatenate([c, np.zeros(N + 1 - c.size, dtype=complex)])
        return TruncatedSeries(c)

    def norm_h2(self) -> float:
        """``sqrt(sum |c_n|^2)`` -- the Hardy-space norm of the polynomial."""
        return math.sqrt(math.fsum(np.abs(self.coefficients) ** 2))

    @classmethod
    def one(cls, N: int) -> "TruncatedSeries":
        c = np.zeros(N + 1, dtype=complex)
        c[0] = 1.0
        return cls(c)


def series_multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller of the two degrees."""
    N = min(a.degree, b.degree)
    return TruncatedSeries(np.convolve(a.coefficients[:N + 1], b.coefficients[:N + 1])[:N + 1])


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """Series ``r`` with ``a * r = 1`` through degree ``a.degree``."""
    c = a.coefficients
    if c[0] == 0:
        raise DomainError("reciprocal needs a nonzero constant coefficient")
    N = a.degree
    r = np.zeros(N + 1, dtype=complex)
    r[0] = 1.0 / c[0]
    for n in range(1, N + 1):
        r[n] = -_fsum_dot(c[n:0:-1], r[:n]) * r[0]
    return TruncatedSeries(r)


def series_eval(a: TruncatedSeries, z):
    """Horner evaluation.  Works for any complex ``z`` (the series is a polynomial)."""
    za = np.asarray(z, dtype=complex)
    acc = np.zeros_like(za)
    for c in a.coefficients[::-1]:
        acc = acc * za + c
    return acc.item() if acc.ndim == 0 else acc


@dataclass(frozen=True)
class UCoefficients:
    """The sequence ``u_1, ..., u_N`` of the inverse Toeplitz matrix.

    ``values[0]`` is a placeholder zero so that ``values[n] == u_n``.
    """

    values: np.ndarray

    @property
    def N(self) -> int:
        return self.values.size - 1

    def __getitem__(self, n):
        return self.values[n]

    def as_series(self) -> TruncatedSeries:
        """``1 + sum u_n z^n`` -- the reciprocal of ``1 + sum mu_hat(n) z^n``."""
        c = self.values.copy()
        c[0] = 1.0
        return TruncatedSeries(c)


def u_from_coefficients(mu_hat: np.ndarray) -> UCoefficients:
    """Forward recursion ``u_n = -mu_hat(n) - sum_{k<n} mu_hat(n-k) u_k``.

    ``mu_hat[0]`` is ignored (it is the unit diagonal).
    """
    mu_hat = np.asarray(mu_hat, dtype=complex)
    N = mu_hat.size - 1
    u = np.zeros(N + 1, dtype=complex)
    for n in range(1, N + 1):
        u[n] = -mu_hat[n] - _fsum_dot(mu_hat[n - 1:0:-1], u[1:n])
    return UCoefficients(u)


def u_coefficients(mu: Measure, N: int = DEFAULT_TERMS) -> UCoefficients:
    """Strictly-lower part of ``(I + M)^{-1}`` for the Toeplitz matrix of ``mu_hat``."""
    if N < 1:
        raise RangeError("N must be >= 1")
    if not mu.is_probability:
        raise InputError("u-coefficients are defined for probability measures")
    return u_from_coefficients(fourier_coeffs(mu, N))


def toeplitz_residual(mu_hat: np.ndarray, u: UCoefficients) -> float:
    """Largest coefficient of ``(1 + sum mu_hat z^n)(1 + sum u_n z^n) - 1``."""
    N = min(len(mu_hat) - 1, u.N)
    m = np.asarray(mu_hat[:N + 1], dtype=complex).copy()
    m[0] = 1.0
    prod = np.convolve(m, u.as_series().coefficients[:N + 1])[:N + 1]
    prod[0] -= 1.0
    return float(np.max(np.abs(prod)))


def phi_series(mu: Measure, N: int = DEFAULT_TERMS, u: UCoefficients | None = None) -> TruncatedSeries:
    """Taylor polynomial of the inner function attached to ``mu``.

    ``phi = -sum u_n z^n``, i.e. ``1 - phi = 1 / (1 + eta)`` with
    ``eta = sum_{n>=1} mu_hat(n) z^n``.  This matches
    ``phi = (psi - 1) / (psi + 1)`` for the Herglotz transform ``psi = 1 + 2 eta``.
    """
    if u is None:
        u = u_coefficients(mu, N)
    c = -u.values[:N + 1].copy()
    c[0] = 0.0
    return TruncatedSeries(c)


@dataclass(frozen=True)
class FramePolynomial:
    """``g_n(zeta) = zeta^n + sum_{k<n} conj(u_{n-k}) zeta^k``.

    ``coefficients[k]`` multiplies ``zeta^k``; the top coefficient is 1.
    """

    n: int
    coefficients: np.ndarray

    def __call__(self, zeta):
        return series_eval(TruncatedSeries(self.coefficients), zeta)


def frame_polynomial(n: int, u: UCoefficients) -> FramePolynomial:
    """Frame element ``g_n`` as a polynomial.

    The conjugate on ``u`` comes from the inner product
    ``<w^n, w^k> = conj(mu_hat(n - k))`` in the dual recurrence.
    """
    if n < 0 or n > u.N:
        raise RangeError(f"n={n} outside 0..{u.N}")
    c = np.empty(n + 1, dtype=complex)
    c[:n] = np.conj(u.values[n:0:-1])
    c[n] = 1.0
    return FramePolynomial(n, c)


def frame_values(u: UCoefficients, points: np.ndarray, N: int | None = None) -> np.ndarray:
    """Matrix ``V[n, j] = g_n(points[j])`` for ``n = 0..N``.

    Uses ``g_n = zeta * g_{n-1} + conj(u_n)``.
    """
    N = u.N if N is None else N
    if N > u.N:
        raise RangeError(f"N={N} exceeds available u-coefficients ({u.N})")
    points = np.asarray(points, dtype=complex).ravel()
    V = np.empty((N + 1, points.size), dtype=complex)
    V[0] = 1.0
    cu = np.conj(u.values)
    for n in range(1, N + 1):
        V[n] = points * V[n - 1] + cu[n]
    return V
