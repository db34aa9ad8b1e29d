"""Probability measures on the unit circle and their integral transforms.

Three concrete families are supported:

* :class:`AtomicMeasure` -- finitely many weighted point masses,
* :class:`SelfSimilarMeasure` -- base-``b`` digit IFS measures (Cantor type),
* :class:`DensityMeasure` -- absolutely continuous, trigonometric-polynomial density.

Angles are stored as fractions of a full turn, ``t in [0, 1)``, and points on
the circle are ``exp(2*pi*i*t)``.  The Fourier coefficient convention is
``mu_hat(n) = int conj(w)**n dmu(w)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, InputError, ResourceError

TWO_PI = 2.0 * np.pi
MAX_ATOMS = 10**7
PROBABILITY_TOL = 1e-12
# tail factors of the IFS product are within this distance of 1
PRODUCT_TAIL_TOL = 1e-12
# bound on (number of z points) * (nodes per chunk) in transform evaluation
_CHUNK_ELEMENTS = 1 << 21
_CSUM_BLOCK = 1024
_QUARTER_TURNS = np.array([1, 1j, -1, -1j])


def cis(x):
    """Return ``exp(2*pi*i*x)`` with the angle reduced to an octant.

    Quarter turns come out exact, and the reduction is odd-symmetric, so
    ``cis(-x) == conj(cis(x))`` bit for bit.
    """
    x = np.asarray(x, dtype=float)
    r = x - np.round(x)
    q = np.round(4.0 * r)
    s = TWO_PI * (r - 0.25 * q)
    # multiplying by 1, i, -1, -i only swaps and negates parts, so stays exact
    rot = _QUARTER_TURNS[np.mod(q, 4.0).astype(np.intp)]
    return rot * (np.cos(s) + 1j * np.sin(s))


def csum(values) -> complex:
    """Compensated (``math.fsum``) sum of a complex sequence.

    Long inputs are first reduced to pairwise block sums, which keeps the
    error at a few ulps of the block totals while avoiding a Python-level
    pass over every element.
    """
    v = np.asarray(values, dtype=complex).ravel()
    if v.size > _CSUM_BLOCK:
        head = v.size - v.size % _CSUM_BLOCK
        v = np.concatenate([v[:head].reshape(-1, _CSUM_BLOCK).sum(axis=1), v[head:]])
    return complex(math.fsum(v.real), math.fsum(v.imag))


def _check_disc(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(~np.isfinite(z)) or np.any(np.abs(z) >= 1.0):
        raise DomainError("point(s) must lie in the open unit disc |z| < 1")
    return z


def _shape_like(z, out):
    if np.ndim(z) == 0:
        return out.reshape(()).item()
    return out


@dataclass(frozen=True)
class TorusPoint:
    """A point of the unit circle, stored as a fraction ``t`` of a turn."""

    t: float
    value: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = float(self.t) % 1.0
        if t >= 1.0:  # fmod of tiny negatives rounds up to 1.0
            t = 0.0
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "value", complex(cis(t)))

    @classmethod
    def from_complex(cls, zeta: complex) -> "TorusPoint":
        return cls(math.atan2(zeta.imag, zeta.real) / TWO_PI)


class Measure:
    """Common interface of the measure families."""

    @property
    def mass(self) -> float:
        raise NotImplementedError

    @property
    def is_probability(self) -> bool:
        return abs(self.mass - 1.0) <= PROBABILITY_TOL

    def fourier_coeff(self, n: int) -> complex:
        return complex(self.fourier_coeffs(np.array([n]))[0])

    def fourier_coeffs(self, ns) -> np.ndarray:
        raise NotImplementedError


class AtomicMeasure(Measure):
    """Finite sum of weighted Dirac masses on the circle.

    Atoms closer than ``merge_tol`` (in turns) are merged and their weights
    added.  Non-positive weights are rejected.  Atoms are kept sorted by angle.
    """

    def __init__(self, t: Sequence[float], weights: Sequence[float], merge_tol: float = 1e-14):
        t = np.mod(np.asarray(t, dtype=float).ravel(), 1.0)
        t[t >= 1.0] = 0.0
        w = np.asarray(weights, dtype=float).ravel()
        if t.shape != w.shape:
            raise InputError("atoms and weights must have equal length")
        if t.size == 0:
            raise InputError("an atomic measure needs at least one atom")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise InputError("atom weights must be strictly positive")
        if t.size > MAX_ATOMS:
            raise ResourceError(f"{t.size} atoms exceeds the limit {MAX_ATOMS}")
        t[t > 1.0 - merge_tol] = 0.0  # identify t ~ 1 with t = 0
        order = np.argsort(t, kind="stable")
        t, w = t[order], w[order]
        dup = np.concatenate([[False], np.diff(t) <= merge_tol])
        if np.any(dup):
            group = np.cumsum(~dup) - 1
            t = t[~dup]
            w = np.bincount(group, weights=w)
        self.t = t
        self.weights = w
        self.points = cis(t)
        self._mass = math.fsum(w)

    def __len__(self) -> int:
        return self.t.size

    def __repr__(self) -> str:
        return f"AtomicMeasure(n_atoms={len(self)}, mass={self._mass:.17g})"

    @classmethod
    def from_points(cls, points: Sequence[complex], weights: Sequence[float]) -> "AtomicMeasure":
        p = np.asarray(points, dtype=complex)
        return cls(np.arctan2(p.imag, p.real) / TWO_PI, weights)

    @property
    def atoms(self) -> list[tuple[TorusPoint, float]]:
        return [(TorusPoint(t), float(w)) for t, w in zip(self.t, self.weights)]

    @property
    def mass(self) -> float:
        return self._mass

    def fourier_coeffs(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64).ravel()
        # negative frequencies are conjugates of positive ones
        uniq, inv = np.unique(np.abs(ns), return_inverse=True)
        vals = np.array([csum(self.weights * cis(-float(n) * self.t)) for n in uniq], dtype=complex)
        out = vals[inv]
        return np.where(ns < 0, np.conj(out), out)

    def monomial(self, n: int) -> np.ndarray:
        """Values of ``w**n`` at the atoms."""
        return cis(float(n) * self.t)

    def index_of(self, zeta, tol: float = 1e-12) -> int:
        """Index of the atom at ``zeta`` (a TorusPoint, complex or angle)."""
        if isinstance(zeta, TorusPoint):
            t = zeta.t
        elif isinstance(zeta, complex) or np.iscomplexobj(zeta):
            t = TorusPoint.from_complex(complex(zeta)).t
        else:
            t = float(zeta) % 1.0
        d = np.abs((self.t - t + 0.5) % 1.0 - 0.5)
        i = int(np.argmin(d))
        if d[i] > tol:
            raise InputError(f"point t={t!r} is not an atom of the measure")
        return i


class SelfSimilarMeasure(Measure):
    """Invariant measure of the maps ``x -> (x + d) / b`` with digit probabilities.

    Parameters
    ----------
    base : int
        Contraction base ``b >= 2``.
    digits : sequence of int
        Distinct digits in ``{0, ..., b-1}``.
    probabilities : sequence of float
        One positive probability per digit, summing to one.
    product_depth : int, optional
        Minimum number of factors in the Fourier product.  The product is
        extended automatically until the omitted factors are within
        ``PRODUCT_TAIL_TOL`` of one.
    quadrature_depth : int
        Cylinder depth used for spatial transforms (Poisson, Herglotz, Cauchy).
    """

    def __init__(self, base: int, digits: Sequence[int], probabilities: Sequence[float],
                 product_depth: Optional[int] = None, quadrature_depth: int = 16):
        base = int(base)
        if base < 2:
            raise InputError("base must be at least 2")
        digits = [int(d) for d in digits]
        if not digits or len(set(digits)) != len(digits) or any(d < 0 or d >= base for d in digits):
            raise InputError("digits must be distinct integers in {0, ..., base-1}")
        p = np.asarray(probabilities, dtype=float)
        if p.shape != (len(digits),) or np.any(p <= 0):
            raise InputError("need one positive probability per digit")
        if abs(math.fsum(p) - 1.0) > PROBABILITY_TOL:
            raise InputError("digit probabilities must sum to 1")
        if product_depth is not None and int(product_depth) < 1:
            raise InputError("product_depth must be >= 1")
        if int(quadrature_depth) < 1:
            raise InputError("quadrature_depth must be >= 1")
        self.base = base
        self.digits = np.asarray(digits, dtype=np.int64)
        self.probabilities = p
        self.product_depth = None if product_depth is None else int(product_depth)
        self.quadrature_depth = int(quadrature_depth)
        # barycentre of the measure on [0, 1): m = sum p_d (m + d) / b
        self.mean = float(np.dot(p, self.digits)) / (base - 1)

    def __repr__(self) -> str:
        return (f"SelfSimilarMeasure(base={self.base}, digits={self.digits.tolist()}, "
                f"probabilities={self.probabilities.tolist()}, product_depth={self.product_depth})")

    @classmethod
    def cantor(cls, **kw) -> "SelfSimilarMeasure":
        """Middle-third Cantor measure."""
        return cls(3, [0, 2], [0.5, 0.5], **kw)

    @property
    def mass(self) -> float:
        return 1.0

    def required_depth(self, n: int) -> int:
        """Product depth at which every omitted factor is within tolerance of one."""
        n = abs(int(n))
        if n == 0:
            return 1
        bound = TWO_PI * n * (self.base - 1)
        return max(1, math.ceil(math.log(bound / PRODUCT_TAIL_TOL, self.base)))

    def fourier_coeffs(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64).ravel()
        if ns.size == 0:
            return np.empty(0, dtype=complex)
        depth = self.required_depth(int(np.max(np.abs(ns))))
        if self.product_depth is not None:
            depth = max(depth, self.product_depth)
        out = np.ones(ns.size, dtype=complex)
        b = self.base
        for k in range(1, depth + 1):
            bk = b**k
            factor = np.zeros(ns.size, dtype=complex)
            for d, p in zip(self.digits, self.probabilities):
                nd = ns * d
                if bk < 2**62:
                    r = np.mod(nd, bk)
                    r = np.where(2 * r > bk, r - bk, r)
                    x = r / float(bk)
                else:
                    x = nd / float(bk)
                factor += p * cis(-x)
            out *= factor
        return out

    def cylinders(self, depth: int):
        """Left endpoints and masses of all depth-``depth`` cylinders."""
        count = len(self.digits) ** depth
        if count > MAX_ATOMS:
            raise ResourceError(f"{count} cylinders exceeds the limit {MAX_ATOMS}")
        x = np.zeros(1)
        w = np.ones(1)
        for k in range(1, depth + 1):
            x = (x[:, None] + self.digits[None, :] / float(self.base**k)).ravel()
            w = (w[:, None] * self.probabilities[None, :]).ravel()
        return x, w

    def quadrature_chunks(self, depth: Optional[int] = None, chunk_depth: int = 16) -> Iterator[tuple]:
        """Yield ``(points, weights)`` of the cylinder-barycentre rule at ``depth``.

        Each depth-``depth`` cylinder is replaced by a point mass at its
        barycentre.  Large depths are streamed in chunks so that no more
        than ``len(digits)**chunk_depth`` nodes are held at once.
        """
        depth = self.quadrature_depth if depth is None else int(depth)
        tail = min(depth, chunk_depth)
        head = depth - tail
        xt, wt = self.cylinders(tail)
        shift = self.mean / float(self.base**depth)
        scale = float(self.base) ** -head
        if head == 0:
            yield cis(xt + shift), wt
            return
        xh, wh = self.cylinders(head)
        for x0, w0 in zip(xh, wh):
            yield cis(x0 + scale * xt + shift), w0 * wt


class DensityMeasure(Measure):
    """Measure with trigonometric-polynomial density ``1 + 2 Re sum_k d_k e^{2 pi i k t}``.

    ``coeffs[k-1]`` is ``d_k`` for ``k = 1..K``; ``d_0 = 1`` and
    ``d_{-k} = conj(d_k)`` are implied.
    """

    GRID = 4096

    def __init__(self, coeffs: Sequence[complex]):
        d = np.asarray(coeffs, dtype=complex).ravel()
        if np.any(~np.isfinite(d)):
            raise InputError("density coefficients must be finite")
        self.coeffs = d
        grid = np.arange(self.GRID) / self.GRID
        if np.min(self.density(grid)) < -1e-12:
            raise InputError("density is negative somewhere on the check grid")

    def __repr__(self) -> str:
        return f"DensityMeasure(K={self.degree})"

    @classmethod
    def one_plus_cos(cls) -> "DensityMeasure":
        """Density ``1 + cos(2 pi t)``."""
        return cls([0.5])

    @property
    def degree(self) -> int:
        return self.coeffs.size

    @property
    def mass(self) -> float:
        return 1.0

    def density(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.ones_like(t)
        for k, dk in enumerate(self.coeffs, start=1):
            out = out + 2.0 * np.real(dk * cis(k * t))
        return out

    def fourier_coeffs(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64).ravel()
        out = np.zeros(ns.size, dtype=complex)
        for i, n in enumerate(ns):
            if n == 0:
                out[i] = 1.0
            elif 0 < n <= self.degree:
                out[i] = self.coeffs[n - 1]
            elif 0 < -n <= self.degree:
                out[i] = np.conj(self.coeffs[-n - 1])
        return out

    def _taylor(self, z, scale: float):
        # 1 + scale * sum_{n=1}^K d_n z^n by Horner
        acc = np.zeros_like(z)
        for dk in self.coeffs[::-1]:
            acc = (acc + dk) * z
        return 1.0 + scale * acc

    def discretize(self, grid: int = 512) -> AtomicMeasure:
        """Quadrature stand-in: nodes ``j/grid`` weighted by the density.

        Nodes where the density vanishes are dropped (zero weights are not
        admissible atoms); weights are renormalised to mass one.
        """
        if grid <= 2 * self.degree:
            raise InputError("grid too coarse for the density degree")
        t = np.arange(grid) / grid
        w = self.density(t) / grid
        keep = w > 1e-14 * np.max(w)
        w = w[keep]
        return AtomicMeasure(t[keep], w / math.fsum(w))


MeasureLike = Union[AtomicMeasure, SelfSimilarMeasure, DensityMeasure]


# -- transforms -------------------------------------------------------------

def fourier_coeff(mu: Measure, n: int) -> complex:
    """Fourier coefficient ``int conj(w)**n dmu(w)``; ``n`` may be negative."""
    return mu.fourier_coeff(int(n))


def fourier_coeffs(mu: Measure, N: int) -> np.ndarray:
    """Coefficients ``mu_hat(0), ..., mu_hat(N)``."""
    return mu.fourier_coeffs(np.arange(N + 1))


def atomize(mu: SelfSimilarMeasure, depth: int) -> AtomicMeasure:
    """Replace each depth-``depth`` cylinder by a point mass at its left endpoint."""
    if not isinstance(mu, SelfSimilarMeasure):
        raise InputError("atomize expects a self-similar measure")
    if depth < 1:
        raise InputError("depth must be >= 1")
    x, w = mu.cylinders(depth)
    return AtomicMeasure(x, w)


def _nodes(mu: Measure, depth: Optional[int]) -> Iterator[tuple]:
    if isinstance(mu, AtomicMeasure):
        yield mu.points, mu.weights
    elif isinstance(mu, SelfSimilarMeasure):
        yield from mu.quadrature_chunks(depth)
    else:
        raise InputError(f"no node representation for {type(mu).__name__}")


def _node_sum(mu: Measure, z: np.ndarray, kernel: Callable, depth: Optional[int] = None,
              g=None) -> np.ndarray:
    """``sum_j w_j g(zeta_j) kernel(zeta_j, z)`` for every entry of ``z``."""
    zf = z.ravel()
    total = np.zeros(zf.size, dtype=complex)
    for zeta, w in _nodes(mu, depth):
        if g is not None:
            w = w * g
        step = max(1, _CHUNK_ELEMENTS // max(1, zf.size))
        for s in range(0, zeta.size, step):
            zs = zeta[s:s + step]
            total += kernel(zs[None, :], zf[:, None]) @ w[s:s + step]
    return total.reshape(z.shape)


def poisson(mu: Measure, z, depth: Optional[int] = None):
    """Poisson integral ``int (1 - |z|^2) / |zeta - z|^2 dmu(zeta)``.

    ``depth`` overrides the cylinder depth used for self-similar measures.
    """
    za = _check_disc(z)
    if isinstance(mu, DensityMeasure):
        out = np.real(mu._taylor(za, 2.0))
    else:
        out = np.real(_node_sum(
            mu, za, lambda zeta, x: (1.0 - np.abs(x) ** 2) / np.abs(zeta - x) ** 2, depth))
    return _shape_like(z, np.asarray(out, dtype=float))


def herglotz(mu: Measure, z, depth: Optional[int] = None):
    """Herglotz transform ``int (zeta + z) / (zeta - z) dmu(zeta)``."""
    za = _check_disc(z)
    if isinstance(mu, DensityMeasure):
        out = mu._taylor(za, 2.0)
    else:
        out = _node_sum(mu, za, lambda zeta, x: (zeta + x) / (zeta - x), depth)
    return _shape_like(z, np.asarray(out, dtype=complex))


def cauchy(mu: Measure, z, g=None, depth: Optional[int] = None):
    """Cauchy transform ``int g(zeta) / (1 - z conj(zeta)) dmu(zeta)``.

    ``g`` is ``None`` (the constant one), an array of values at the atoms of
    an atomic measure, or a callable of the boundary point ``zeta``.
    """
    za = _check_disc(z)
    gv = None
    if g is not None:
        if callable(g):
            if isinstance(mu, DensityMeasure):
                raise InputError("non-constant g needs an atomic or self-similar measure")
            if isinstance(mu, AtomicMeasure):
                gv = np.asarray(g(mu.points), dtype=complex)
            else:
                return _shape_like(z, _node_sum_callable(mu, za, g, depth))
        else:
            if not isinstance(mu, AtomicMeasure):
                raise InputError("sampled g requires an atomic measure")
            gv = np.asarray(g, dtype=complex).ravel()
            if gv.size != len(mu):
                raise InputError(f"g has {gv.size} values but the measure has {len(mu)} atoms")
    if isinstance(mu, DensityMeasure):
        out = mu._taylor(za, 1.0)
    else:
        out = _node_sum(mu, za, lambda zeta, x: 1.0 / (1.0 - x * np.conj(zeta)), depth, gv)
    return _shape_like(z, np.asarray(out, dtype=complex))


def _node_sum_callable(mu, za, g, depth):
    zf = za.ravel()
    total = np.zeros(zf.size, dtype=complex)
    for zeta, w in _nodes(mu, depth):
        wg = w * np.asarray(g(zeta), dtype=complex)
        total += (1.0 / (1.0 - zf[:, None] * np.conj(zeta)[None, :])) @ wg
    return total.reshape(za.shape)


# -- measure spec files -------------------------------------------------------

def measure_from_dict(spec: dict) -> MeasureLike:
    """Build a measure from its JSON-spec dictionary."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise InputError("measure spec must be an object with a 'type' field")
    allow = bool(spec.get("allowNonProbability", False))
    kind = spec["type"]
    try:
        if kind == "atomic":
            atoms = spec["atoms"]
            mu = AtomicMeasure([float(a["t"]) for a in atoms], [float(a["w"]) for a in atoms])
        elif kind == "ifs":
            mu = SelfSimilarMeasure(spec["base"], spec["digits"], spec["probs"],
                                    product_depth=spec.get("depth"),
                                    quadrature_depth=spec.get("quadratureDepth", 16))
        elif kind == "density":
            entries = spec["coeffs"]
            K = max((int(c["n"]) for c in entries), default=0)
            d = np.zeros(K, dtype=complex)
            for c in entries:
                n = int(c["n"])
                if n < 1:
                    raise InputError("density coefficients are given for n >= 1 only")
                d[n - 1] = complex(float(c.get("re", 0.0)), float(c.get("im", 0.0)))
            mu = DensityMeasure(d)
        else:
            raise InputError(f"unknown measure type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed measure spec: {exc}") from exc
    if not allow and not mu.is_probability:
        raise InputError(f"measure has mass {mu.mass!r}; set allowNonProbability to accept it")
    return mu


def load_measure(path: Union[str, Path]) -> MeasureLike:
    """Read a measure spec file (UTF-8 JSON)."""
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read measure spec {path}: {exc}") from exc
    return measure_from_dict(spec)


def measure_to_dict(mu: Measure) -> dict:
    """Inverse of :func:`measure_from_dict` (used for report provenance)."""
    if isinstance(mu, AtomicMeasure):
        return {"type": "atomic",
                "atoms": [{"t": float(t), "w": float(w)} for t, w in zip(mu.t, mu.weights)]}
    if isinstance(mu, SelfSimilarMeasure):
        out = {"type": "ifs", "base": mu.base, "digits": mu.digits.tolist(),
               "probs": mu.probabilities.tolist()}
        if mu.product_depth is not None:
            out["depth"] = mu.product_depth
        return out
    if isinstance(mu, DensityMeasure):
        return {"type": "density",
                "coeffs": [{"n": k, "re": float(c.real), "im": float(c.imag)}
                           for k, c in enumerate(mu.coeffs, start=1)]}
    raise InputError(f"cannot serialise {type(mu).__name__}")
