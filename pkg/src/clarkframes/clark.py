"""Finite Blaschke products and their Clark measures.

For an inner function ``B`` and unimodular ``alpha`` the Clark measure
``mu_alpha`` is the positive measure whose Poisson integral is
``Re((alpha + B) / (alpha - B))``.  For a degree-``d`` Blaschke product it
consists of ``d`` atoms at the solutions of ``B(zeta) = alpha`` with masses
``1 / |B'(zeta)|``.

On the circle the argument of ``B(e^{2 pi i t})`` lifts to a continuous,
strictly increasing function of ``t`` gaining ``2 pi d`` per turn, so each
solution is isolated in its own bracket and found by bracketed root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, InputError, NumericError
from .measure import AtomicMeasure, TWO_PI, cis
from .series import TruncatedSeries, series_multiply


class BlaschkeProduct:
    """``B(z) = c * prod_j (z - a_j) / (1 - conj(a_j) z)`` with ``|a_j| < 1``."""

    def __init__(self, zeros: Sequence[complex], front: complex = 1.0):
        a = np.asarray(zeros, dtype=complex).ravel()
        if a.size < 1:
            raise InputError("a Blaschke product needs at least one zero")
        if np.any(np.abs(a) >= 1):
            raise DomainError("Blaschke zeros must lie in the open disc")
        if abs(abs(front) - 1.0) > 1e-12:
            raise DomainError("front factor must be unimodular")
        self.zeros = a
        self.front = complex(front)

    def __repr__(self) -> str:
        return f"BlaschkeProduct(zeros={self.zeros.tolist()}, front={self.front})"

    @property
    def degree(self) -> int:
        return self.zeros.size

    def __mul__(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        return BlaschkeProduct(np.concatenate([self.zeros, other.zeros]), self.front * other.front)

    def _factors(self, z):
        z = np.asarray(z, dtype=complex)
        a = self.zeros.reshape((-1,) + (1,) * z.ndim)
        return (z - a) / (1.0 - np.conj(a) * z)

    def __call__(self, z):
        out = self.front * np.prod(self._factors(z), axis=0)
        return out.item() if np.ndim(out) == 0 else out

    # finite Blaschke products extend continuously to the circle
    boundary = __call__

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        f = self._factors(z)
        a = self.zeros.reshape((-1,) + (1,) * z.ndim)
        df = (1.0 - np.abs(a) ** 2) / (1.0 - np.conj(a) * z) ** 2
        total = np.zeros(z.shape, dtype=complex)
        for j in range(self.degree):
            others = np.prod(np.delete(f, j, axis=0), axis=0) if self.degree > 1 else 1.0
            total = total + df[j] * others
        out = self.front * total
        return out.item() if out.ndim == 0 else out

    def arg_lift(self, t):
        """Continuous argument of ``B(e^{2 pi i t})`` for real ``t``."""
        t = np.asarray(t, dtype=float)
        zeta = cis(t)
        total = np.full(t.shape, math.atan2(self.front.imag, self.front.real))
        for a in self.zeros:
            q = 1.0 - np.conj(a) * zeta
            total = total + TWO_PI * t - 2.0 * np.arctan2(q.imag, q.real)
        return total

    def taylor(self, N: int) -> TruncatedSeries:
        out = TruncatedSeries(np.concatenate([[self.front], np.zeros(N)]))
        k = np.arange(N + 1)
        for a in self.zeros:
            c = np.zeros(N + 1, dtype=complex)
            c[0] = -a
            if N >= 1:
                c[1:] = (1.0 - abs(a) ** 2) * np.conj(a) ** (k[1:] - 1)
            out = series_multiply(out, TruncatedSeries(c))
        return out


class ComposedInner:
    """``outer(inner(z))`` for finite Blaschke products ``outer`` and ``inner``."""

    def __init__(self, outer, inner):
        self.outer = outer
        self.inner = inner

    def __repr__(self) -> str:
        return f"ComposedInner({self.outer!r}, {self.inner!r})"

    @property
    def degree(self) -> int:
        return self.outer.degree * self.inner.degree

    def __call__(self, z):
        return self.outer(self.inner(z))

    boundary = __call__

    def derivative(self, z):
        return np.asarray(self.outer.derivative(self.inner(z))) * np.asarray(self.inner.derivative(z))

    def arg_lift(self, t):
        return self.outer.arg_lift(np.asarray(self.inner.arg_lift(t)) / TWO_PI)

    def taylor(self, N: int) -> TruncatedSeries:
        ti = self.inner.taylor(N)
        if abs(ti.coefficients[0]) > 1e-15:
            raise InputError("series composition needs inner(0) = 0")
        to = self.outer.taylor(N).coefficients
        acc = np.zeros(N + 1, dtype=complex)
        power = TruncatedSeries.one(N)
        for k in range(N + 1):
            acc += to[k] * power.coefficients
            power = series_multiply(power, ti)
        return TruncatedSeries(acc)


@dataclass(frozen=True)
class ClarkAtomSet:
    alpha: complex
    t: np.ndarray
    weights: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return cis(self.t)

    def as_measure(self) -> AtomicMeasure:
        return AtomicMeasure(self.t, self.weights)


def _check_alpha(alpha) -> complex:
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise DomainError("alpha must be unimodular")
    return alpha


def clark_measure(B, alpha: complex = 1.0) -> ClarkAtomSet:
    """Atoms ``B(zeta) = alpha`` with masses ``1 / |B'(zeta)|``.

    Requires ``B(0) = 0`` so that the measure is a probability measure.
    """
    alpha = _check_alpha(alpha)
    if abs(B(0.0)) > 1e-14:
        raise InputError("clark_measure supports inner functions with B(0) = 0 only")
    d = B.degree
    theta0 = float(B.arg_lift(0.0))
    target0 = math.atan2(alpha.imag, alpha.real)
    first = theta0 + (target0 - theta0) % TWO_PI
    ts = np.empty(d)
    for k in range(d):
        tau = first + TWO_PI * k
        if k == 0 and first == theta0:
            ts[k] = 0.0
            continue
        fn = lambda t: float(B.arg_lift(t)) - tau
        lo, hi = fn(0.0), fn(1.0)
        if not (lo <= 0.0 <= hi):
            raise NumericError(f"argument bracket failed for alpha={alpha}: f(0)={lo}, f(1)={hi}")
        ts[k] = brentq(fn, 0.0, 1.0, xtol=1e-17, rtol=4 * np.finfo(float).eps, maxiter=200)
    ts = np.mod(ts, 1.0)
    zeta = cis(ts)
    miss = np.abs(np.asarray(B(zeta)) - alpha)
    if np.max(miss) > 1e-9:
        raise NumericError(f"root finding did not solve B(zeta)=alpha: max |B-alpha| = {np.max(miss):.3e}")
    w = 1.0 / np.abs(np.asarray(B.derivative(zeta)))
    order = np.argsort(ts)
    return ClarkAtomSet(alpha, ts[order], w[order])


def clark_poisson_residual(B, clark: ClarkAtomSet, z) -> np.ndarray:
    """``|Re((alpha + B) / (alpha - B)) - sum_j P_z(zeta_j) w_j|`` for each ``z``."""
    z = np.asarray(z, dtype=complex).ravel()
    b = np.asarray(B(z))
    lhs = np.real((clark.alpha + b) / (clark.alpha - b))
    zeta = clark.points
    pk = (1.0 - np.abs(z)[:, None] ** 2) / np.abs(zeta[None, :] - z[:, None]) ** 2
    return np.abs(lhs - pk @ clark.weights)


@dataclass(frozen=True)
class CompositionReport:
    alpha: complex
    direct: ClarkAtomSet
    mixture_t: np.ndarray
    mixture_weights: np.ndarray
    location_discrepancy: float   # in turns
    weight_discrepancy: float

    def passed(self, tol: float = 1e-9) -> bool:
        return self.location_discrepancy < tol and self.weight_discrepancy < tol


def clark_composition_check(B, theta, alpha: complex = 1.0) -> CompositionReport:
    """Compare ``mu_alpha`` of ``theta o B`` with the mixture of ``mu_beta`` of ``B``
    over ``beta`` distributed by ``mu_alpha`` of ``theta``."""
    alpha = _check_alpha(alpha)
    if abs(theta(0.0)) > 1e-14:
        raise InputError("composition formula needs theta(0) = 0")
    direct = clark_measure(ComposedInner(theta, B), alpha)
    outer = clark_measure(theta, alpha)
    mt, mw = [], []
    for beta, wb in zip(outer.points, outer.weights):
        inner = clark_measure(B, beta / abs(beta))
        mt.append(inner.t)
        mw.append(wb * inner.weights)
    mt = np.concatenate(mt)
    mw = np.concatenate(mw)
    order = np.argsort(mt)
    mt, mw = mt[order], mw[order]
    if mt.size != direct.t.size:
        loc = wdiff = math.inf
    else:
        dist = np.abs((mt - direct.t + 0.5) % 1.0 - 0.5)
        loc = float(np.max(dist))
        wdiff = float(np.max(np.abs(mw - direct.weights)))
    return CompositionReport(alpha, direct, mt, mw, loc, wdiff)


def divisor_check(B1: BlaschkeProduct, B2: BlaschkeProduct, tol: float = 1e-10) -> bool:
    """Whether ``B1`` divides ``B2``: zeros of ``B1`` are contained, with multiplicity, in those of ``B2``."""
    pool = list(B2.zeros)
    for a in B1.zeros:
        if not pool:
            return False
        d = [abs(a - b) for b in pool]
        i = int(np.argmin(d))
        if d[i] > tol:
            return False
        pool.pop(i)
    return True


def divisor_gram_check(B1: BlaschkeProduct, B2: BlaschkeProduct, zs: Sequence[complex],
                       alpha: complex = 1.0) -> float:
    """Max discrepancy between two Gram matrices of the kernels ``k_{z_i}`` of ``B1``.

    One is computed in ``L^2`` of the Clark measure ``mu_alpha`` of ``B2``
    from boundary values, the other in the Hardy space, where
    ``<k_{z_j}, k_{z_i}> = k_{z_j}(z_i)``.
    """
    zs = np.asarray(zs, dtype=complex).ravel()
    if np.any(np.abs(zs) >= 1):
        raise DomainError("kernel points must lie in the disc")
    clark = clark_measure(B2, alpha)
    zeta = clark.points
    b1z = np.asarray(B1(zs))
    b1b = np.asarray(B1(zeta))
    # K[i, j] = k_{z_i}(zeta_j)
    K = (1.0 - np.conj(b1z)[:, None] * b1b[None, :]) / (1.0 - np.conj(zs)[:, None] * zeta[None, :])
    gram_l2 = (K * clark.weights) @ K.conj().T   # [i, j] = <k_{z_i}, k_{z_j}>
    # <k_{z_i}, k_{z_j}>_{H^2} = k_{z_i}(z_j)
    gram_h2 = (1.0 - np.conj(b1z)[:, None] * b1z[None, :]) / (1.0 - np.conj(zs)[:, None] * zs[None, :])
    return float(np.max(np.abs(gram_l2 - gram_h2)))
