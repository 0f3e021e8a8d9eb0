"""Homogeneous equilibria and their spectral stability.

An equilibrium B* = sigma exists whenever (1 - sigma) f(sigma) = sigma g(sigma);
its stability is read off the eigenvalues of
M = (1 - sigma) f'(sigma) C_B - sigma g'(sigma) C_R - (f(sigma) + g(sigma)) I.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateCoefficient
from .graphs import RowStochasticMatrix
from .powerfun import PowerFunctionSpec

GRID_POINTS = 10_001
ROOT_TOL = 1e-12
DEDUP_TOL = 1e-9
MARGIN_TOL = 1e-8


@dataclass(frozen=True)
class EquilibriumReport:
    sigma: float
    residual: float
    verdict: str  # stable | unstable | marginal | not-an-equilibrium
    lambda1: Optional[complex]
    method: str   # proposition1-spectrum | corollary1-boundary | corollary2-ratio


def _h(f: PowerFunctionSpec, g: PowerFunctionSpec, x):
    return (1.0 - x) * f.value(x) - x * g.value(x)


def find_h0_roots(f: PowerFunctionSpec, g: PowerFunctionSpec) -> list[float]:
    """All roots of (1 - s) f(s) - s g(s) in [0, 1], sorted ascending."""
    grid = np.linspace(0.0, 1.0, GRID_POINTS)
    vals = np.asarray(_h(f, g, grid), dtype=float)

    roots: list[float] = []
    for x, v in zip(grid, vals):
        if abs(v) <= 1e-14:
            roots.append(float(x))
    for i in range(GRID_POINTS - 1):
        a, b = vals[i], vals[i + 1]
        if abs(a) <= 1e-14 or abs(b) <= 1e-14:
            continue
        if (a < 0) != (b < 0):
            roots.append(_bisect(f, g, float(grid[i]), float(grid[i + 1])))

    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > DEDUP_TOL:
            deduped.append(r)
    return deduped


def _bisect(f, g, lo: float, hi: float) -> float:
    flo = float(_h(f, g, lo))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = float(_h(f, g, mid))
        if abs(fm) <= ROOT_TOL and hi - lo <= ROOT_TOL:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= 1e-15:
            break
    return 0.5 * (lo + hi)


def jacobian_M(sigma: float, f: PowerFunctionSpec, g: PowerFunctionSpec,
               c_b: RowStochasticMatrix, c_r: RowStochasticMatrix) -> np.ndarray:
    fv, fd = float(f.value(sigma)), float(f.deriv(sigma))
    gv, gd = float(g.value(sigma)), float(g.deriv(sigma))
    m = (1.0 - sigma) * fd * c_b.toarray() - sigma * gd * c_r.toarray()
    m -= (fv + gv) * np.eye(c_b.n)
    return m


def leading_eigenvalue(eigs: np.ndarray) -> complex:
    """Eigenvalue with largest real part; ties broken toward +imag."""
    order = np.lexsort((-eigs.imag, -eigs.real))
    return complex(eigs[order[0]])


def classify_spectrum(m: np.ndarray) -> tuple[str, complex]:
    eigs = np.linalg.eigvals(np.asarray(m, dtype=float))
    lam1 = leading_eigenvalue(eigs)
    if lam1.real < -MARGIN_TOL:
        return "stable", lam1
    if lam1.real > MARGIN_TOL:
        return "unstable", lam1
    return "marginal", lam1


def classify_boundary(f: PowerFunctionSpec, g: PowerFunctionSpec
                      ) -> tuple[EquilibriumReport, EquilibriumReport]:
    """Boundary-equilibrium verdicts for B* = 0 and B* = 1.

    B* = 0 requires f(0) = 0 and is stable iff f'(0) < g(0);
    B* = 1 requires g(1) = 0 and is stable iff -g'(1) < f(1).
    """
    f0 = float(f.value(0.0))
    g1 = float(g.value(1.0))

    if abs(f0) > 1e-12:
        rep0 = EquilibriumReport(0.0, f0, "not-an-equilibrium", None,
                                 "corollary1-boundary")
    else:
        margin = float(g.value(0.0)) - float(f.deriv(0.0))
        verdict = "marginal" if abs(margin) <= MARGIN_TOL else (
            "stable" if margin > 0 else "unstable")
        rep0 = EquilibriumReport(0.0, f0, verdict, None, "corollary1-boundary")

    if abs(g1) > 1e-12:
        rep1 = EquilibriumReport(1.0, -g1, "not-an-equilibrium", None,
                                 "corollary1-boundary")
    else:
        margin = float(f.value(1.0)) - (-float(g.deriv(1.0)))
        verdict = "marginal" if abs(margin) <= MARGIN_TOL else (
            "stable" if margin > 0 else "unstable")
        rep1 = EquilibriumReport(1.0, -g1, verdict, None, "corollary1-boundary")

    return rep0, rep1


def corollary2_classify(sigma: float, f: PowerFunctionSpec, g: PowerFunctionSpec,
                        mu1: complex) -> tuple[str, float, float]:
    """Ratio test for the shared-graph case G_B = G_R.

    Returns (verdict, a, ratio) with a = (1-s) f'(s) - s g'(s) and
    ratio = (f(s) + g(s)) / a. Only mu1, the eigenvalue of C with smallest
    real part, is needed.
    """
    a = (1.0 - sigma) * float(f.deriv(sigma)) - sigma * float(g.deriv(sigma))
    if abs(a) <= 1e-12:
        raise DegenerateCoefficient(f"coefficient a = {a} too small for ratio test")
    ratio = (float(f.value(sigma)) + float(g.value(sigma))) / a
    threshold = 1.0 if a > 0 else mu1.real
    margin = ratio - threshold
    if abs(margin) <= MARGIN_TOL:
        return "marginal", a, ratio
    if a > 0:
        return ("stable" if margin > 0 else "unstable"), a, ratio
    return ("stable" if margin < 0 else "unstable"), a, ratio


def analyze_equilibria(f: PowerFunctionSpec, g: PowerFunctionSpec,
                       c_b: RowStochasticMatrix, c_r: RowStochasticMatrix
                       ) -> list[EquilibriumReport]:
    """Full pipeline: H0 roots, Jacobian spectrum verdict for each root."""
    reports = []
    for sigma in find_h0_roots(f, g):
        m = jacobian_M(sigma, f, g, c_b, c_r)
        verdict, lam1 = classify_spectrum(m)
        residual = float(_h(f, g, sigma))
        reports.append(EquilibriumReport(sigma, residual, verdict, lam1,
                                         "proposition1-spectrum"))
    return reports
