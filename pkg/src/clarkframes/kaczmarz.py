"""Kaczmarz iteration for the monomials ``w^n`` in ``L^2(mu)`` of an atomic measure.

Self-similar measures are handled through :func:`carrier`, which atomizes
them at a fixed depth; density measures are replaced by their quadrature
grid.  Both are finite-dimensional stand-ins for the continuous measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, RangeError
from .measure import AtomicMeasure, DensityMeasure, Measure, SelfSimilarMeasure, atomize

DEFAULT_ATOMIZE_DEPTH = 12
DEFAULT_DENSITY_GRID = 512


def carrier(mu: Measure, depth: int = DEFAULT_ATOMIZE_DEPTH,
            grid: int = DEFAULT_DENSITY_GRID) -> AtomicMeasure:
    """Finite atomic carrier of ``L^2(mu)`` used by all vector computations."""
    if isinstance(mu, AtomicMeasure):
        return mu
    if isinstance(mu, SelfSimilarMeasure):
        return atomize(mu, depth)
    if isinstance(mu, DensityMeasure):
        return mu.discretize(grid)
    raise InputError(f"unsupported measure type {type(mu).__name__}")


def inner(mu: AtomicMeasure, f, g) -> complex:
    """``<f, g> = sum_j f_j conj(g_j) w_j`` with compensated summation."""
    p = np.asarray(f) * np.conj(np.asarray(g)) * mu.weights
    return complex(math.fsum(p.real), math.fsum(p.imag))


def norm(mu: AtomicMeasure, f) -> float:
    f = np.asarray(f)
    return math.sqrt(max(0.0, math.fsum(np.abs(f) ** 2 * mu.weights)))


@dataclass(frozen=True)
class L2Vector:
    """A function on the atoms of ``measure``."""

    values: np.ndarray
    measure: AtomicMeasure = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).ravel()
        if v.size != len(self.measure):
            raise InputError(f"vector has {v.size} entries, measure has {len(self.measure)} atoms")
        if np.any(~np.isfinite(v)):
            raise InputError("vector entries must be finite")
        object.__setattr__(self, "values", v)

    def inner(self, other: "L2Vector") -> complex:
        return inner(self.measure, self.values, other.values)

    def norm(self) -> float:
        return norm(self.measure, self.values)

    @classmethod
    def indicator(cls, mu: AtomicMeasure, index) -> "L2Vector":
        v = np.zeros(len(mu), dtype=complex)
        v[index] = 1.0
        return cls(v, mu)

    @classmethod
    def from_function(cls, mu: AtomicMeasure, fn) -> "L2Vector":
        return cls(np.asarray(fn(mu.points), dtype=complex), mu)


@dataclass(frozen=True)
class KaczmarzTrace:
    approximants: np.ndarray   # (N+1, n_atoms)
    residual_norms: np.ndarray  # (N+1,)

    def is_monotone(self, slack: float = 1e-12) -> bool:
        return bool(np.all(np.diff(self.residual_norms) <= slack))


def _unit_monomial(mu: AtomicMeasure, n: int) -> np.ndarray:
    e = mu.monomial(n)
    if mu.is_probability:
        return e
    return e / norm(mu, e)


def kaczmarz_run(mu: AtomicMeasure, f: L2Vector, N: int) -> KaczmarzTrace:
    """Run ``xi_n = xi_{n-1} + <f - xi_{n-1}, e_n> e_n`` with ``e_n = w^n / ||w^n||``."""
    if N < 0:
        raise RangeError("N must be >= 0")
    target = f.values
    xi = np.zeros_like(target)
    approx = np.empty((N + 1, target.size), dtype=complex)
    res = np.empty(N + 1)
    for n in range(N + 1):
        e = _unit_monomial(mu, n)
        xi = xi + inner(mu, target - xi, e) * e
        approx[n] = xi
        res[n] = norm(mu, target - xi)
    return KaczmarzTrace(approx, res)


def dual_sequence(mu: AtomicMeasure, N: int) -> list[L2Vector]:
    """``gamma_0 = e_0``, ``gamma_n = e_n - sum_{k<n} <e_n, e_k> gamma_k``.

    Run in recurrence order without re-orthogonalisation.
    """
    if N < 0:
        raise RangeError("N must be >= 0")
    es = [_unit_monomial(mu, n) for n in range(N + 1)]
    gammas: list[np.ndarray] = []
    for n in range(N + 1):
        g = es[n].copy()
        for k in range(n):
            g -= inner(mu, es[n], es[k]) * gammas[k]
        gammas.append(g)
    return [L2Vector(g, mu) for g in gammas]


def parseval_sum(mu: AtomicMeasure, f: L2Vector, duals) -> float:
    """``sum_n |<f, gamma_n>|^2`` over the given duals."""
    return math.fsum(abs(inner(mu, f.values, g.values)) ** 2 for g in duals)


def parseval_partial_sums(mu: AtomicMeasure, f: L2Vector, duals) -> np.ndarray:
    terms = [abs(inner(mu, f.values, g.values)) ** 2 for g in duals]
    return np.cumsum(terms)


def expansion_from_duals(mu: AtomicMeasure, f: L2Vector, duals) -> np.ndarray:
    """``sum_{k<=N} <f, gamma_k> e_k`` evaluated at the atoms."""
    out = np.zeros(len(mu), dtype=complex)
    for k, g in enumerate(duals):
        out += inner(mu, f.values, g.values) * _unit_monomial(mu, k)
    return out
