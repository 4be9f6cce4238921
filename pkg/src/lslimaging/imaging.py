"""Discretized Lippmann-Schwinger system and its regularized solve.

Each sample point contributes one linear equation for the nodal potential:
F_0(l_j) - F(l_j) = sum_i h_i u0(x_i, l_j) p(x_i) w(x_i, l_j), where w is
the chosen stand-in for the true internal field (background field for the
Born linearization, data-driven estimate for the LSL method).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateSystemError, SampleAlignmentError
from .forward import Snapshot, assemble_operator, solve_forward_operator
from .grid import Grid
from .potentials import ZeroPotential
from .rom import (
    DEFAULT_TRUNCATION_TOL,
    background_rom,
    build_loewner,
    lanczos,
    lsl_internal,
)
from .transfer import DataSet

DEFAULT_REL_THRESHOLD = 1e-8
DEFAULT_GRID_NODES = 2001

METHODS = ("born", "lsl")


@dataclass(frozen=True, eq=False)
class ImagingSystem:
    """Linear system A p = d whose unknown is the nodal potential."""

    A: np.ndarray
    d: np.ndarray
    grid: Grid
    method: str


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    p_est: np.ndarray
    method: str
    regularization: float
    residual_norm: float
    singular_values: np.ndarray
    rank: int


def assemble_system(
    data: DataSet,
    data0: DataSet,
    internal: Callable[[float], Snapshot],
    grid: Grid,
    method: str = "lsl",
) -> ImagingSystem:
    """Fill A and d from the two datasets and the internal-field provider.

    Row j is grid.weights * u0(., l_j) * internal(l_j); the right-hand side
    is d_j = F_0(l_j) - F(l_j). Background fields u0 are recomputed by
    forward solves on the grid. Both datasets must be sampled at identical
    points.
    """
    if data.L != data0.L or not np.array_equal(data.lambdas, data0.lambdas):
        raise SampleAlignmentError(
            "true and background datasets must share L and identical sample points"
        )
    lams = data.lambdas
    op0 = assemble_operator(ZeroPotential(), grid)
    A = np.empty((lams.size, grid.n))
    for j, lam in enumerate(lams):
        u0 = solve_forward_operator(op0, lam, grid).values
        w = internal(lam)
        if w.values.shape != (grid.n,):
            raise SampleAlignmentError(
                f"internal-field provider returned {w.values.shape} values "
                f"for a grid of {grid.n} nodes"
            )
        A[j, :] = grid.weights * u0 * w.values
    d = data0.F - data.F
    return ImagingSystem(A=A, d=d, grid=grid, method=method)


def solve_regularized(
    system: ImagingSystem, rel_threshold: float = DEFAULT_REL_THRESHOLD
) -> ReconstructionResult:
    """Minimum-norm least-squares solution by truncated SVD.

    Singular values below rel_threshold * sigma_max are discarded; the
    returned result records the full spectrum, the retained rank, and the
    recomputed residual norm.
    """
    if not (0.0 < rel_threshold < 1.0):
        raise ValueError(f"rel_threshold must lie in (0, 1), got {rel_threshold}")
    U, s, Vt = np.linalg.svd(system.A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise DegenerateSystemError("imaging system matrix is identically zero")
    keep = s >= rel_threshold * s[0]
    coeffs = (U[:, keep].T @ system.d) / s[keep]
    p_est = Vt[keep].T @ coeffs
    residual = float(np.linalg.norm(system.A @ p_est - system.d))
    return ReconstructionResult(
        p_est=p_est,
        method=system.method,
        regularization=float(rel_threshold),
        residual_norm=residual,
        singular_values=s,
        rank=int(np.count_nonzero(keep)),
    )


def reconstruct(
    data: DataSet,
    data0: DataSet,
    method: str,
    grid: Optional[Grid] = None,
    rel_threshold: float = DEFAULT_REL_THRESHOLD,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
) -> ReconstructionResult:
    """End-to-end reconstruction from the two datasets.

    method "born" uses the background field itself as the internal-field
    stand-in; method "lsl" builds the data-driven reduced models of both
    media and estimates the true internal fields from the measured data.
    Only boundary data of the unknown medium is ever used.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if grid is None:
        grid = Grid(L=data.L, n=DEFAULT_GRID_NODES)
    if method == "born":
        op0 = assemble_operator(ZeroPotential(), grid)

        def provider(lam: float) -> Snapshot:
            return solve_forward_operator(op0, lam, grid)

    else:
        V0, factors0 = background_rom(data0, grid, truncation_tol)
        factors = lanczos(build_loewner(data), truncation_tol)

        def provider(lam: float) -> Snapshot:
            return lsl_internal(V0, factors0, factors, lam)

    system = assemble_system(data, data0, provider, grid, method=method)
    return solve_regularized(system, rel_threshold)


def relative_l2_error(p_est: np.ndarray, p_true: np.ndarray, grid: Grid) -> float:
    """Weighted L2 distance, relative to ||p_true|| when that is nonzero."""
    p_est = np.asarray(p_est, dtype=float)
    p_true = np.asarray(p_true, dtype=float)
    if p_est.shape != p_true.shape or p_est.shape != (grid.n,):
        raise ValueError("arrays must both match the grid size")
    err = grid.norm(p_est - p_true)
    ref = grid.norm(p_true)
    return err if ref == 0.0 else err / ref
