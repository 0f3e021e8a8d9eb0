"""First-order drift of the leading Jacobian eigenvalue under parameter or
structural perturbations, and the grid search for the critical parameter
where Re(lambda_1) crosses zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equilibria import find_h0_roots, jacobian_M, leading_eigenvalue
from .errors import (
    DegenerateLeading,
    EigenSolverFailure,
    IllConditioned,
    NoCrossing,
    NotParameterized,
    RootLost,
)
from .graphs import RowStochasticMatrix
from .powerfun import PowerFunctionSpec

SIMPLE_GAP = 1e-10
ROOT_TRACK_RADIUS = 0.1


@dataclass(frozen=True)
class SpectralTriple:
    lambda1: complex
    right_vec: np.ndarray
    left_vec: np.ndarray
    normalization: complex  # y1^T x1, transpose without conjugation


@dataclass(frozen=True)
class HopfSearchResult:
    nu_star: float
    sigma_star: float
    re_lambda1_bracket: tuple[float, float]
    grid_step: float
    imag_nonzero: bool  # True: genuine Hopf pair; False: real-axis crossing
    samples: tuple[tuple[float, float, float, float], ...]  # (nu, sigma, re, im)


def leading_eigentriple(m: np.ndarray) -> SpectralTriple:
    """Right and left eigenvectors of the eigenvalue with largest real part.

    The leading eigenvalue must be simple. A complex-conjugate partner does
    not count against simplicity (the pair consists of distinct eigenvalues),
    so genuine Hopf pairs pass the gate.
    """
    m = np.asarray(m, dtype=float)
    try:
        eigs, vecs = np.linalg.eig(m)
        eigs_t, vecs_t = np.linalg.eig(m.T)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverFailure(str(exc)) from exc

    lam1 = leading_eigenvalue(eigs)
    scale = max(np.abs(eigs).max(), 1.0)
    for lam in eigs:
        if lam == lam1:
            continue
        if abs(lam - lam1) <= SIMPLE_GAP * scale and \
                not (lam1.imag != 0 and abs(lam - np.conj(lam1)) <= SIMPLE_GAP * scale):
            raise DegenerateLeading(f"leading eigenvalue {lam1} is not simple")
    counts = int(np.sum(np.abs(eigs - lam1) <= SIMPLE_GAP * scale))
    if counts > 1:
        raise DegenerateLeading(f"leading eigenvalue {lam1} has multiplicity {counts}")

    x1 = vecs[:, int(np.argmin(np.abs(eigs - lam1)))]
    y1 = vecs_t[:, int(np.argmin(np.abs(eigs_t - lam1)))]
    x1 = x1 / np.linalg.norm(x1)
    y1 = y1 / np.linalg.norm(y1)

    norm_inf = np.abs(m).sum(axis=1).max()
    if np.abs(m @ x1 - lam1 * x1).max() > 1e-8 * norm_inf or \
            np.abs(m.T @ y1 - lam1 * y1).max() > 1e-8 * norm_inf:
        raise EigenSolverFailure("eigenpair residual exceeds tolerance")

    normalization = complex(y1 @ x1)
    return SpectralTriple(lam1, x1, y1, normalization)


def delta_lambda1(triple: SpectralTriple, d_m: np.ndarray) -> complex:
    """First-order estimate y1^T dM x1 / (y1^T x1)."""
    if abs(triple.normalization) <= 1e-12:
        raise IllConditioned("y1^T x1 is numerically zero")
    return complex(triple.left_vec @ (np.asarray(d_m) @ triple.right_vec)
                   / triple.normalization)


def delta_M_parameter(sigma: float, f: PowerFunctionSpec, g: PowerFunctionSpec,
                      c_b: RowStochasticMatrix, c_r: RowStochasticMatrix,
                      d_nu: float) -> np.ndarray:
    """Jacobian perturbation from nudging nu by d_nu at fixed sigma.

    A function without a nu parameter contributes zero; at least one of the
    pair must carry nu.
    """
    if not (f.has_nu or g.has_nu):
        raise NotParameterized("neither f nor g has a nu parameter")
    n = c_b.n
    d_m = np.zeros((n, n))
    if f.has_nu:
        d_m += (1.0 - sigma) * float(f.dderiv_dnu(sigma)) * c_b.toarray()
        d_m -= float(f.dvalue_dnu(sigma)) * np.eye(n)
    if g.has_nu:
        d_m -= sigma * float(g.dderiv_dnu(sigma)) * c_r.toarray()
        d_m -= float(g.dvalue_dnu(sigma)) * np.eye(n)
    return d_m * d_nu


def delta_M_structure(sigma: float, f: PowerFunctionSpec, g: PowerFunctionSpec,
                      c_b: RowStochasticMatrix, c_b_new: RowStochasticMatrix,
                      c_r: RowStochasticMatrix, c_r_new: RowStochasticMatrix
                      ) -> np.ndarray:
    """Jacobian perturbation from replacing the normalized adjacency matrices."""
    d_m = (1.0 - sigma) * float(f.deriv(sigma)) * (c_b_new.toarray() - c_b.toarray())
    d_m -= sigma * float(g.deriv(sigma)) * (c_r_new.toarray() - c_r.toarray())
    return d_m


def _interior_roots(f, g):
    return [r for r in find_h0_roots(f, g) if 1e-9 < r < 1.0 - 1e-9]


def _track_root(f, g, prev: float | None) -> float:
    roots = _interior_roots(f, g)
    if not roots:
        raise RootLost("no interior equilibrium at this grid point")
    if prev is None:
        return roots[-1]
    best = min(roots, key=lambda r: abs(r - prev))
    if abs(best - prev) > ROOT_TRACK_RADIUS:
        raise RootLost(f"tracked root jumped from {prev} to {best}")
    return best


def find_hopf_critical(f: PowerFunctionSpec, g: PowerFunctionSpec,
                       c_b: RowStochasticMatrix, c_r: RowStochasticMatrix,
                       nu_lo: float, nu_hi: float, step: float = 0.01
                       ) -> HopfSearchResult:
    """Scan nu, tracking the interior equilibrium sigma(nu) by continuity,
    until Re(lambda_1(M)) changes sign. nu_star is linearly interpolated
    inside the bracketing grid cell.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    nus = np.arange(nu_lo, nu_hi, step)
    samples: list[tuple[float, float, float, float]] = []
    prev_sigma: float | None = None
    prev: tuple[float, float, complex] | None = None  # (nu, sigma, lam1)

    for nu in nus:
        f_nu, g_nu = f.with_nu(float(nu)), g.with_nu(float(nu))
        sigma = _track_root(f_nu, g_nu, prev_sigma)
        prev_sigma = sigma
        m = jacobian_M(sigma, f_nu, g_nu, c_b, c_r)
        lam1 = leading_eigenvalue(np.linalg.eigvals(m))
        samples.append((float(nu), sigma, lam1.real, lam1.imag))

        if prev is not None and (prev[2].real < 0) != (lam1.real < 0):
            nu_a, sigma_a, lam_a = prev
            frac = -lam_a.real / (lam1.real - lam_a.real)
            nu_star = nu_a + frac * (float(nu) - nu_a)
            f_star, g_star = f.with_nu(nu_star), g.with_nu(nu_star)
            sigma_star = _track_root(f_star, g_star, sigma_a)
            return HopfSearchResult(
                nu_star=float(nu_star),
                sigma_star=sigma_star,
                re_lambda1_bracket=(lam_a.real, lam1.real),
                grid_step=step,
                imag_nonzero=bool(abs(lam1.imag) > 1e-8),
                samples=tuple(samples),
            )
        prev = (float(nu), sigma, lam1)

    raise NoCrossing(
        f"Re(lambda_1) kept one sign over nu in [{nu_lo}, {nu_hi})")
