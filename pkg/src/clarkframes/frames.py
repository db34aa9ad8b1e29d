"""Parseval-frame checks for the frame polynomials ``g_n`` on atomic measures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InputError, RangeError
from .kaczmarz import L2Vector, norm
from .measure import AtomicMeasure
from .model import model_kernel
from .series import UCoefficients, frame_values


def _values(mu: AtomicMeasure, u: UCoefficients, N: int) -> np.ndarray:
    if N > u.N:
        raise RangeError(f"N={N} exceeds the {u.N} available u-coefficients")
    if N < 0:
        raise RangeError("N must be >= 0")
    return frame_values(u, mu.points, N)


def gram(mu: AtomicMeasure, u: UCoefficients, N: int) -> np.ndarray:
    """``G[n, m] = <g_n, g_m>`` in ``L^2(mu)`` for ``0 <= n, m <= N``."""
    V = _values(mu, u, N)
    return (V * mu.weights) @ V.conj().T


def frame_coefficients(mu: AtomicMeasure, u: UCoefficients, f, N: int) -> np.ndarray:
    """Analysis coefficients ``<f, g_n>`` for ``n = 0..N``."""
    fv = f.values if isinstance(f, L2Vector) else np.asarray(f, dtype=complex)
    V = _values(mu, u, N)
    return V.conj() @ (fv * mu.weights)


@dataclass(frozen=True)
class FrameOperatorSnapshot:
    N: int
    operator: np.ndarray   # S_N in the orthonormal basis of point masses
    deviation: float       # operator norm of S_N - I


def _weighted(mu: AtomicMeasure, u: UCoefficients, N: int) -> np.ndarray:
    # rows: g_n in the orthonormal basis e_j = delta_j / sqrt(w_j)
    return _values(mu, u, N) * np.sqrt(mu.weights)


def _deviation_from_rows(A: np.ndarray) -> float:
    n_rows, d = A.shape
    # nonzero spectra of A^H A and A A^H coincide; use the smaller Gram
    if n_rows < d:
        ev = np.linalg.eigvalsh(A @ A.conj().T)
        ev = np.concatenate([ev, np.zeros(d - n_rows)])
    else:
        ev = np.linalg.eigvalsh(A.conj().T @ A)
    return float(np.max(np.abs(ev - 1.0)))


def frame_operator(mu: AtomicMeasure, u: UCoefficients, N: int) -> FrameOperatorSnapshot:
    """``S_N = sum_{n<=N} g_n (x) g_n`` on the ``d``-dimensional ``L^2(mu)``."""
    A = _weighted(mu, u, N)
    S = A.conj().T @ A
    S = 0.5 * (S + S.conj().T)
    return FrameOperatorSnapshot(N, S, _deviation_from_rows(A))


def frame_deviation(mu: AtomicMeasure, u: UCoefficients, N: int) -> float:
    """``||S_N - I||`` (spectral norm)."""
    return _deviation_from_rows(_weighted(mu, u, N))


def frame_deviation_curve(mu: AtomicMeasure, u: UCoefficients, Ns: Sequence[int]) -> np.ndarray:
    A = _weighted(mu, u, max(Ns))
    return np.array([_deviation_from_rows(A[:n + 1]) for n in Ns])


@dataclass(frozen=True)
class Expansion:
    partial_sums: np.ndarray   # (N+1, n_atoms): sum_{k<=n} <f, g_k> w^k at the atoms
    residuals: np.ndarray      # ||f - partial_n||


def expand(mu: AtomicMeasure, u: UCoefficients, f, N: int) -> Expansion:
    """Partial sums of ``f = sum <f, g_n> w^n`` and their ``L^2(mu)`` residuals."""
    fv = f.values if isinstance(f, L2Vector) else np.asarray(f, dtype=complex)
    if fv.size != len(mu):
        raise InputError("f must have one value per atom")
    coef = frame_coefficients(mu, u, fv, N)
    partial = np.zeros((N + 1, len(mu)), dtype=complex)
    acc = np.zeros(len(mu), dtype=complex)
    for n in range(N + 1):
        acc = acc + coef[n] * mu.monomial(n)
        partial[n] = acc
    res = np.array([norm(mu, fv - p) for p in partial])
    return Expansion(partial, res)


def cauchy_frame_series(mu: AtomicMeasure, u: UCoefficients, g, z, N: int):
    """``sum_{n<=N} <g, g_n> z^n``."""
    coef = frame_coefficients(mu, u, g, N)
    za = np.asarray(z, dtype=complex)
    acc = np.zeros_like(za)
    for c in coef[::-1]:
        acc = acc * za + c
    return acc.item() if acc.ndim == 0 else acc


@dataclass(frozen=True)
class KernelSeriesResult:
    value: complex
    reference: complex
    difference: float
    tail_estimate: float


def kernel_double_series(mu: AtomicMeasure, u: UCoefficients, h, z: complex, w: complex,
                         N: int) -> KernelSeriesResult:
    """``sum_{n,m<=N} <g_n, g_m> conj(z)^n w^m`` against the closed-form kernel."""
    z, w = complex(z), complex(w)
    if max(abs(z), abs(w)) > 0.8:
        raise DomainError("the double series is only controlled for |z|, |w| <= 0.8")
    G = gram(mu, u, N)
    zn = np.conj(z) ** np.arange(N + 1)
    wm = w ** np.arange(N + 1)
    val = complex(zn @ G @ wm)
    ref = complex(model_kernel(h, z, w))
    r = max(abs(z), abs(w))
    tail = 2.0 * (N + 2) * r ** (N + 1) / (1.0 - r) ** 2
    return KernelSeriesResult(val, ref, abs(val - ref), tail)
