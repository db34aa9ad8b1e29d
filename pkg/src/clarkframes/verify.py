"""The identity suite run by ``clarkframes verify``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

from .clark import BlaschkeProduct, clark_composition_check
from .frames import cauchy_frame_series, frame_deviation_curve, kernel_double_series
from .kaczmarz import DEFAULT_ATOMIZE_DEPTH, carrier, dual_sequence, norm
from .measure import AtomicMeasure, Measure, fourier_coeffs, measure_to_dict
from .model import (InnerFunctionHandle, SERIES, aleksandrov_residual, boundary_limit_check,
                    disc_grid, h2_norm, normalized_cauchy, poisson_phi_residual, v_alpha_series)
from .report import CheckRecord, VerificationReport, spec_hash
from .series import frame_values, toeplitz_residual, u_coefficients

DUAL_MAX_N = 64
BOUNDARY_MAX_N = 8
CAUCHY_TERMS = 200
KERNEL_TERMS = 128
ISOMETRY_TERMS = 512
SEED = 20240521

COMPOSITION_PAIRS = (
    ("z", "z^2", BlaschkeProduct([0.0]), BlaschkeProduct([0.0, 0.0])),
    ("z^2", "z^2", BlaschkeProduct([0.0, 0.0]), BlaschkeProduct([0.0, 0.0])),
)


def threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("CLARKFRAMES_THREADS", "1")))
    except ValueError:
        return 1


def run_verification(mu: Measure, terms: int = 256, tol: float = 1e-6, grid_radius: float = 0.9,
                     grid_count: int = 100, depth: int = DEFAULT_ATOMIZE_DEPTH,
                     phi_zeros: Optional[Sequence[complex]] = None, spec: Optional[dict] = None,
                     workers: Optional[int] = None) -> VerificationReport:
    """Run every identity check for ``mu`` and collect the results.

    ``tol`` is the Cauchy tolerance of the radial boundary-limit check; the
    other checks carry their own fixed tolerances.  With ``phi_zeros`` the
    membership check tests ``mu`` against that Blaschke product instead of
    its own inner function.
    """
    spec = measure_to_dict(mu) if spec is None else spec
    report = VerificationReport(provenance={
        "measureSpecHash": spec_hash(spec), "terms": terms, "depth": depth,
        "gridRadius": grid_radius, "gridCount": grid_count, "tol": tol})
    grid = disc_grid(grid_radius, grid_count)
    h = InnerFunctionHandle(mu, terms=terms)
    cmu = carrier(mu, depth)
    atomic = isinstance(mu, AtomicMeasure)
    rng = np.random.default_rng(SEED)
    gs = [rng.standard_normal(len(cmu)) + 1j * rng.standard_normal(len(cmu)) for _ in range(5)]

    jobs: list[Callable[[], list]] = []

    def toeplitz():
        return [CheckRecord("toeplitz_identity", toeplitz_residual(fourier_coeffs(mu, terms), h.u),
                            1e-11, {"N": terms})]

    def two_path():
        d = np.abs(np.asarray(h(grid)) - np.asarray(h.with_mode(SERIES)(grid)))
        return [CheckRecord("phi_two_path", float(np.max(d)), 1e-9, {"N": terms})]

    def poisson_phi():
        return [CheckRecord("poisson_phi_identity", float(np.max(poisson_phi_residual(h, grid))), 1e-9)]

    cu = u_coefficients(cmu, max(terms, CAUCHY_TERMS, KERNEL_TERMS, DUAL_MAX_N))

    def duals():
        n_max = DUAL_MAX_N
        gam = dual_sequence(cmu, n_max)
        V = frame_values(cu, cmu.points, n_max)
        diff = max(float(np.max(np.abs(g.values - V[n]))) for n, g in enumerate(gam))
        return [CheckRecord("dual_equals_frame_polynomial", diff, 1e-10, {"nMax": n_max})]

    def parseval():
        if len(cmu) > terms + 1:
            return [("skip", "parseval_deviation",
                     f"carrier has {len(cmu)} atoms, more than the {terms + 1} frame elements")]
        Ns = list(range(0, terms + 1))
        curve = frame_deviation_curve(cmu, cu, Ns)
        mono = float(np.max(np.maximum(np.diff(curve), 0.0))) if len(curve) > 1 else 0.0
        return [CheckRecord("parseval_deviation", float(curve[-1]), 1e-6, {"N": terms}),
                CheckRecord("parseval_monotone", mono, 1e-12, {"N": terms})]

    def boundary():
        if not atomic:
            return [("skip", "boundary_limits", "boundary limits are taken at atoms")]
        worst = 0.0
        for z0 in mu.points:
            for n in range(BOUNDARY_MAX_N + 1):
                r = boundary_limit_check(h, h.u, n, z0, tol=tol)
                worst = max(worst, r.last_step)
        return [CheckRecord("boundary_limits", worst, tol, {"nMax": BOUNDARY_MAX_N, "rMin": 1 - 2.0**-20})]

    def cauchy_series():
        worst = 0.0
        for g in gs:
            for z in (0.3, 0.5j):
                a = normalized_cauchy(cmu, g, z)
                b = cauchy_frame_series(cmu, cu, g, z, CAUCHY_TERMS)
                worst = max(worst, abs(a - b))
        return [CheckRecord("normalized_cauchy_series", worst, 1e-8, {"N": CAUCHY_TERMS})]

    hc = h if atomic else InnerFunctionHandle(cmu, terms=KERNEL_TERMS)

    def kernel():
        pts = [0.0, 0.3, 0.5j, -0.4 + 0.2j, 0.8, 0.8j * np.exp(0.3j)]
        worst = 0.0
        for z in pts:
            for w in pts:
                worst = max(worst, kernel_double_series(cmu, cu, hc, z, w, KERNEL_TERMS).difference)
        return [CheckRecord("kernel_double_series", worst, 1e-8, {"N": KERNEL_TERMS})]

    def isometry():
        if not atomic:
            return [("skip", "v1_isometry",
                     f"Taylor route cannot resolve a {len(cmu)}-atom carrier at N={ISOMETRY_TERMS}")]
        worst = 0.0
        for g in gs:
            s = v_alpha_series(g, 1.0, cmu, hc, ISOMETRY_TERMS)
            nrm, tail = h2_norm(s)
            worst = max(worst, abs(nrm - norm(cmu, g)) + tail)
        return [CheckRecord("v1_isometry", worst, 1e-6, {"N": ISOMETRY_TERMS})]

    def membership():
        phi = hc if phi_zeros is None else BlaschkeProduct(phi_zeros)
        name = "aleksandrov_membership" if phi_zeros is None else "aleksandrov_membership_blaschke"
        r = float(np.max(aleksandrov_residual(cmu, phi, disc_grid(grid_radius, 50))))
        params = {} if phi_zeros is None else {"phiZeros": [complex(a) for a in phi_zeros]}
        return [CheckRecord(name, r, 1e-9, params)]

    def composition():
        out = []
        for bname, tname, B, theta in COMPOSITION_PAIRS:
            rep = clark_composition_check(B, theta, 1.0)
            out.append(CheckRecord("clark_composition",
                                   max(rep.location_discrepancy, rep.weight_discrepancy), 1e-9,
                                   {"B": bname, "theta": tname, "alpha": 1.0}))
        return out

    jobs = [toeplitz, two_path, poisson_phi, duals, parseval, boundary, cauchy_series, kernel,
            isometry, membership, composition]
    workers = threads_from_env() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda f: f(), jobs))
    else:
        results = [f() for f in jobs]
    for items in results:
        for item in items:
            if isinstance(item, tuple):
                report.skip(item[1], item[2])
            else:
                report.add(item)
    return report
