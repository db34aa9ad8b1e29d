"""Inner function of a measure, model-space kernels and projections.

For a probability measure ``mu`` with Herglotz transform ``psi`` the map
``phi = (psi - 1) / (psi + 1)`` is an inner function with ``phi(0) = 0`` and
``mu`` is its Clark measure at ``alpha = 1``.  This module evaluates ``phi``
(two independent ways), the model-space reproducing kernel, the projections
of monomials, the normalized Cauchy transform and the operators ``V_alpha``.

Any object with ``__call__`` (values in the disc), ``boundary`` (values on
the circle) and ``taylor(N)`` can stand in for ``phi``; both
:class:`InnerFunctionHandle` and :class:`~clarkframes.clark.BlaschkeProduct`
provide them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InputError, RangeError
from .measure import (AtomicMeasure, Measure, SelfSimilarMeasure, _check_disc, cauchy,
                      cis, herglotz, poisson)
from .series import (DEFAULT_TERMS, TruncatedSeries, UCoefficients, frame_polynomial,
                     phi_series, series_eval, series_multiply, u_coefficients)

RATIO = "ratio"
SERIES = "series"
DEFAULT_RADII = tuple(1.0 - 2.0 ** -j for j in range(1, 21))


class InnerFunctionHandle:
    """The inner function ``phi`` attached to a probability measure.

    Parameters
    ----------
    measure : Measure
        Source probability measure.
    mode : {"ratio", "series"}
        ``"ratio"`` evaluates ``(psi - 1) / (psi + 1)`` from the Herglotz
        transform; ``"series"`` evaluates the truncated Taylor polynomial.
    terms : int
        Degree of the cached Taylor polynomial.
    """

    def __init__(self, measure: Measure, mode: str = RATIO, terms: int = DEFAULT_TERMS):
        if mode not in (RATIO, SERIES):
            raise InputError(f"unknown evaluation mode {mode!r}")
        if not measure.is_probability:
            raise InputError("the inner function is defined for probability measures")
        self.measure = measure
        self.mode = mode
        self.terms = int(terms)
        self.u = u_coefficients(measure, self.terms)
        self.series = phi_series(measure, self.terms, self.u)

    def __repr__(self) -> str:
        return f"InnerFunctionHandle({self.measure!r}, mode={self.mode!r}, terms={self.terms})"

    def with_mode(self, mode: str) -> "InnerFunctionHandle":
        other = object.__new__(InnerFunctionHandle)
        other.__dict__.update(self.__dict__)
        if mode not in (RATIO, SERIES):
            raise InputError(f"unknown evaluation mode {mode!r}")
        other.mode = mode
        return other

    def __call__(self, z):
        return eval_phi(self, z)

    def ratio(self, z):
        psi = herglotz(self.measure, z)
        psi = np.asarray(psi)
        # Re psi > 0 in the disc, so psi + 1 never vanishes
        assert np.all(np.real(psi) > 0)
        out = (psi - 1.0) / (psi + 1.0)
        return out.item() if out.ndim == 0 else out

    def boundary(self, zeta):
        """Boundary values on the circle (atomic source measures only).

        For a measure with finitely many atoms ``phi`` is a finite Blaschke
        product; at the atoms themselves ``phi = 1``.
        """
        mu = self.measure
        if not isinstance(mu, AtomicMeasure):
            raise InputError("boundary values are only available for atomic source measures")
        zeta = np.asarray(zeta, dtype=complex)
        zf = zeta.ravel()
        diff = mu.points[None, :] - zf[:, None]
        at_atom = np.min(np.abs(diff), axis=1) < 1e-13
        safe = np.where(np.abs(diff) < 1e-13, 1.0, diff)
        psi = ((mu.points[None, :] + zf[:, None]) / safe) @ mu.weights
        # the ratio is discarded at atoms, where it may be 0/0
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(at_atom, 1.0 + 0j, (psi - 1.0) / (psi + 1.0))
        return out.reshape(zeta.shape).item() if zeta.ndim == 0 else out.reshape(zeta.shape)

    def taylor(self, N: int) -> TruncatedSeries:
        if N <= self.terms:
            return self.series.truncate(N)
        return phi_series(self.measure, N)


def eval_phi(h: InnerFunctionHandle, z):
    """Evaluate ``phi`` in the handle's mode."""
    _check_disc(z)
    if h.mode == RATIO:
        return h.ratio(z)
    return series_eval(h.series, z)


def poisson_phi_residual(h: InnerFunctionHandle, z):
    """``|P[mu](z) - (1 - |phi|^2) / |1 - phi|^2|``."""
    za = _check_disc(z)
    p = np.asarray(poisson(h.measure, za))
    f = np.asarray(h(za))
    out = np.abs(p - (1.0 - np.abs(f) ** 2) / np.abs(1.0 - f) ** 2)
    return out.item() if out.ndim == 0 else out


def model_kernel(h, z, w):
    """Reproducing kernel ``k_z(w) = (1 - conj(phi(z)) phi(w)) / (1 - conj(z) w)``."""
    za = _check_disc(z)
    wa = _check_disc(w)
    fz = np.asarray(h(za))
    fw = np.asarray(h(wa))
    out = (1.0 - np.conj(fz) * fw) / (1.0 - np.conj(za) * wa)
    return out.item() if np.ndim(out) == 0 else out


def kernel_series(h, z: complex, N: int) -> TruncatedSeries:
    """Taylor coefficients of ``w -> k_z(w)`` through degree ``N``."""
    z = complex(_check_disc(z))
    fz = complex(h(z))
    szego = TruncatedSeries(np.conj(z) ** np.arange(N + 1))
    num = h.taylor(N).scale(-np.conj(fz))
    c = num.coefficients.copy()
    c[0] += 1.0
    return series_multiply(TruncatedSeries(c), szego)


def project_monomial(h, u: UCoefficients, n: int, w):
    """Closed form ``P_phi(z^n)(w) = w^n + phi(w) sum_{k<n} conj(u_{n-k}) w^k``."""
    if n < 0 or n > u.N:
        raise RangeError(f"n={n} outside 0..{u.N}")
    wa = _check_disc(w)
    g = frame_polynomial(n, u)
    wn = wa ** n
    out = wn + np.asarray(h(wa)) * (np.asarray(g(wa)) - wn)
    return out.item() if np.ndim(out) == 0 else out


def project_monomial_quadrature(h, n: int, w: complex, nodes: int = 4096,
                                radius: Optional[float] = None) -> complex:
    """``<z^n, k_w>`` by the trapezoid rule on a circle.

    With ``radius = 1`` this integrates ``zeta^n conj(k_w(zeta))`` against
    Lebesgue measure using boundary values of ``phi``.  Inner functions
    without closed-form boundary values are integrated on ``|zeta| = radius``
    instead; for a monomial the pairing there picks up exactly
    ``radius**(2n)``, which is divided out.
    """
    w = complex(_check_disc(w))
    if radius is None:
        radius = 1.0 if _has_boundary(h) else 0.9
    zeta = cis((np.arange(nodes) + 0.5) / nodes)
    fw = complex(h(w))
    if radius == 1.0:
        fz = np.asarray(h.boundary(zeta))
    else:
        fz = np.asarray(h(radius * zeta))
    x = radius * zeta
    kw = (1.0 - np.conj(fw) * fz) / (1.0 - np.conj(w) * x)
    val = np.mean(x ** n * np.conj(kw))
    return complex(val / radius ** (2 * n))


def _has_boundary(h) -> bool:
    if isinstance(h, InnerFunctionHandle):
        return isinstance(h.measure, AtomicMeasure)
    return hasattr(h, "boundary")


@dataclass(frozen=True)
class BoundaryLimitReport:
    n: int
    zeta: complex
    radii: np.ndarray
    values: np.ndarray
    target: complex
    last_step: float          # |v(r_last) - v(r_prev)|
    target_error: float       # |v(r_last) - g_n(zeta)|
    extrapolated: complex     # first-order Richardson estimate of the limit
    extrapolated_error: float
    tol: float

    @property
    def converged(self) -> bool:
        return self.last_step < self.tol


def boundary_limit_check(h: InnerFunctionHandle, u: UCoefficients, n: int, zeta,
                         radii: Sequence[float] = DEFAULT_RADII, tol: float = 1e-6) -> BoundaryLimitReport:
    """Radial sweep of ``P_phi(z^n)(r zeta)`` towards ``g_n(zeta)`` at an atom ``zeta``."""
    mu = h.measure
    if not isinstance(mu, AtomicMeasure):
        raise InputError("boundary limits are checked at atoms of an atomic measure")
    j = mu.index_of(zeta)
    z0 = mu.points[j]
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2 or np.any(np.diff(radii) <= 0) or radii[-1] >= 1 or radii[0] <= 0:
        raise InputError("radii must increase strictly inside (0, 1)")
    values = np.asarray(project_monomial(h, u, n, radii * z0))
    target = complex(frame_polynomial(n, u)(z0))
    a, b = 1.0 - radii[-2], 1.0 - radii[-1]
    extrap = (values[-1] * a - values[-2] * b) / (a - b)
    return BoundaryLimitReport(
        n=n, zeta=complex(z0), radii=radii, values=values, target=target,
        last_step=float(abs(values[-1] - values[-2])),
        target_error=float(abs(values[-1] - target)),
        extrapolated=complex(extrap), extrapolated_error=float(abs(extrap - target)), tol=tol)


def normalized_cauchy(mu: Measure, g, z):
    """``K(g dmu)(z) / K(dmu)(z)``."""
    num = np.asarray(cauchy(mu, z, g))
    den = np.asarray(cauchy(mu, z))
    out = num / den
    return out.item() if out.ndim == 0 else out


def v_alpha(g, alpha: complex, mu_alpha: AtomicMeasure, h, z):
    """``(V_alpha g)(z) = (1 - conj(alpha) phi(z)) int g(zeta) / (1 - conj(zeta) z) dmu_alpha``."""
    _check_unimodular(alpha)
    za = _check_disc(z)
    out = (1.0 - np.conj(alpha) * np.asarray(h(za))) * np.asarray(cauchy(mu_alpha, za, g))
    return out.item() if np.ndim(out) == 0 else out


def v_alpha_series(g, alpha: complex, mu_alpha: AtomicMeasure, h, N: int = 512) -> TruncatedSeries:
    """Taylor coefficients of ``V_alpha g`` through degree ``N``."""
    _check_unimodular(alpha)
    gv = np.asarray(g(mu_alpha.points) if callable(g) else g, dtype=complex).ravel()
    if gv.size != len(mu_alpha):
        raise InputError("g must have one value per atom")
    wg = gv * mu_alpha.weights
    cz = np.conj(mu_alpha.points)
    c = np.empty(N + 1, dtype=complex)
    pw = np.ones_like(cz)
    for n in range(N + 1):
        c[n] = np.sum(wg * pw)
        pw = pw * cz
    factor = h.taylor(N).scale(-np.conj(alpha))
    fc = factor.coefficients.copy()
    fc[0] += 1.0
    return series_multiply(TruncatedSeries(fc), TruncatedSeries(c))


def h2_norm(s: TruncatedSeries, window: int = 16) -> tuple[float, float]:
    """Hardy norm of the truncated series and a geometric bound on the omitted tail.

    The tail bound fits a decay ratio to the last ``2 * window`` coefficient
    magnitudes; it is ``inf`` when no decay is visible.  Once the coefficients
    have reached rounding level the bound is that level.
    """
    a = np.abs(s.coefficients)
    nrm = s.norm_h2()
    if a.size < 2 * window:
        return nrm, math.inf
    last = float(np.max(a[-window:]))
    prev = float(np.max(a[-2 * window:-window]))
    # below this the coefficients are rounding noise from the series product
    noise = 16 * math.sqrt(a.size) * np.finfo(float).eps * max(nrm, float(np.max(a)))
    if last <= noise:
        return nrm, last
    if prev == 0 or last >= prev:
        return nrm, math.inf
    rho = (last / prev) ** (1.0 / window)
    tail = last * rho / math.sqrt(1.0 - rho * rho)
    return nrm, tail


def aleksandrov_residual(mu_test: AtomicMeasure, h, z):
    """Absolute defect in the isometry condition on the model-space kernel at ``z``.

    ``| sum_j w_j |(1 - conj(phi(z)) phi(zeta_j)) / (1 - conj(z) zeta_j)|^2
       - (1 - |phi(z)|^2) / (1 - |z|^2) |``
    """
    if not isinstance(mu_test, AtomicMeasure):
        raise InputError("the membership residual is evaluated for atomic measures")
    za = _check_disc(z)
    zf = za.ravel()
    fb = np.asarray(h.boundary(mu_test.points))
    fz = np.asarray(h(zf))
    k = (1.0 - np.conj(fz)[:, None] * fb[None, :]) / (1.0 - np.conj(zf)[:, None] * mu_test.points[None, :])
    lhs = (np.abs(k) ** 2) @ mu_test.weights
    rhs = (1.0 - np.abs(fz) ** 2) / (1.0 - np.abs(zf) ** 2)
    out = np.abs(lhs - rhs).reshape(za.shape)
    return out.item() if out.ndim == 0 else out


@dataclass(frozen=True)
class MembershipReport:
    max_residual: float
    tol: float
    grid_size: int

    @property
    def member(self) -> bool:
        return self.max_residual < self.tol


def aleksandrov_membership(mu_test: AtomicMeasure, h, grid, tol: float = 1e-9) -> MembershipReport:
    """Decide ``mu_test`` in ``Iso(phi)`` from the residual over ``grid``."""
    r = np.asarray(aleksandrov_residual(mu_test, h, np.asarray(grid, dtype=complex)))
    return MembershipReport(float(np.max(r)), tol, int(r.size))


def backward_shift(s: TruncatedSeries, m: int) -> TruncatedSeries:
    """``(S*)^m``: drop the first ``m`` Taylor coefficients."""
    if m < 0:
        raise RangeError("m must be >= 0")
    c = s.coefficients[m:]
    if c.size == 0:
        c = np.zeros(1, dtype=complex)
    return TruncatedSeries(c)


def disc_grid(radius: float = 0.9, count: int = 100, seed: int = 0) -> np.ndarray:
    """Deterministic pseudo-random points with ``|z| <= radius`` (includes 0)."""
    if not 0 < radius < 1:
        raise DomainError("grid radius must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    r[0] = 0.0
    r[-1] = radius
    return r * np.exp(2j * np.pi * rng.random(count))


def _check_unimodular(alpha):
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise DomainError("alpha must be unimodular")
