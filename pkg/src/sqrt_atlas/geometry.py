"""Trace metric on GL(n), geodesics, and numerical certificates for root branches."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularInput
from .numkit import DEFAULT_TOL, Tolerances, expm, scale
from .spectral import RjsDecomposition, centralizer_basis

DEFAULT_GRID = (-1.0, -0.5, 0.25, 0.5, 1.0)


def _inv(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= tol.rank * s[0]:
        raise SingularInput("base point is singular")
    return np.linalg.inv(A)


def trace_metric(A, V, W, tol: Tolerances = DEFAULT_TOL) -> float:
    """``g_A(V, W) = tr(A^{-1} V A^{-1} W)``."""
    Ai = _inv(A, tol)
    return float(np.trace(Ai @ V @ Ai @ W))


def geodesic(A, V, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``A expm(t A^{-1} V)``, the trace-metric geodesic with ``gamma(0) = A``, ``gamma'(0) = V``."""
    Ai = _inv(A, tol)
    return np.asarray(A, dtype=float) @ expm(t * (Ai @ V))


def _span(dec, Y):
    span, ref = [], 0.0
    ynorm = float(np.linalg.norm(Y))
    for B in centralizer_basis(dec.profile):
        W = dec.conj(B)
        span.append(W @ Y - Y @ W)
        ref = max(ref, 2.0 * float(np.linalg.norm(W)) * ynorm)
    return span, ref


def orbit_tangent_span(dec: RjsDecomposition, Y, tol: Tolerances = DEFAULT_TOL) -> tuple[list[np.ndarray], int]:
    """Commutators ``[C B C^{-1}, Y]`` over a centralizer basis, and their rank.

    Singular values are compared with ``max_B 2 ||C B C^{-1}|| ||Y||`` rather
    than with the largest one, so a span made only of rounding noise has rank 0.
    """
    Y = np.asarray(Y, dtype=float)
    span, ref = _span(dec, Y)
    return span, int(_orthonormal_columns(np.column_stack([T.ravel() for T in span]), tol, ref).shape[1])


def _orthonormal_columns(A, tol, ref=None) -> np.ndarray:
    if A.shape[1] == 0:
        return A
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    ref = s[0] if ref is None else ref
    if ref == 0:
        return U[:, :0]
    return U[:, s > tol.rank * ref]


def _symmetric_basis(n):
    cols = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1.0
            cols.append(E.ravel() / np.linalg.norm(E))
    return np.column_stack(cols)


def _orthogonal_tangent_basis(Y):
    # T_Y O(n) = {Y Omega : Omega skew}
    n = Y.shape[0]
    cols = []
    for i in range(n):
        for j in range(i + 1, n):
            K = np.zeros((n, n))
            K[i, j], K[j, i] = -1.0, 1.0
            cols.append((Y @ K).ravel() / np.sqrt(2))
    return np.column_stack(cols) if cols else np.zeros((n * n, 0))


def _intersect(U, L, tol):
    """Orthonormal basis of ``span(U) & span(L)`` for orthonormal column sets."""
    if U.shape[1] == 0 or L.shape[1] == 0:
        return U[:, :0]
    # x = U a = L b  <=>  [U, -L] (a, b) = 0
    K = np.hstack([U, -L])
    _, s, vh = np.linalg.svd(K)
    s_full = np.zeros(K.shape[1])
    s_full[:len(s)] = s
    null = vh[s_full <= tol.rank * max(s[0], 1.0)]
    if null.shape[0] == 0:
        return U[:, :0]
    return _orthonormal_columns(U @ null[:, :U.shape[1]].T, tol)


def tangent_basis(dec: RjsDecomposition, Y, restriction: str = "none",
                  tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns are flattened matrices) of the branch tangent at ``Y``.

    ``restriction`` intersects the orbit tangent with the symmetric matrices
    (``"symmetric"``) or with the tangent space of ``O(n)`` at ``Y``
    (``"orthogonal"``).
    """
    Y = np.asarray(Y, dtype=float)
    span, ref = _span(dec, Y)
    U = _orthonormal_columns(np.column_stack([T.ravel() for T in span]), tol, ref)
    if restriction == "none":
        return U
    if restriction == "symmetric":
        return _intersect(U, _symmetric_basis(Y.shape[0]), tol)
    if restriction == "orthogonal":
        return _intersect(U, _orthogonal_tangent_basis(Y), tol)
    raise ValueError(f"unknown restriction {restriction!r}")


def tangent_rank_dimension(dec: RjsDecomposition, Y, restriction: str = "none",
                           tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical dimension of the (restricted) branch tangent space at ``Y``."""
    return int(tangent_basis(dec, Y, restriction, tol).shape[1])


@dataclass(frozen=True)
class GeodesicReport:
    max_residual: float
    max_structure_residual: float
    tangent_dimension: int
    grid: tuple
    direction: np.ndarray | None


def random_tangent(dec: RjsDecomposition, Y, seed, restriction: str = "none",
                   tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Unit-Frobenius random direction in the branch tangent space, or ``None`` if it is zero."""
    U = tangent_basis(dec, Y, restriction, tol)
    if U.shape[1] == 0:
        return None
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    v = U @ rng.standard_normal(U.shape[1])
    n = Y.shape[0]
    return (v / np.linalg.norm(v)).reshape(n, n)


def _structure_residual(G, restriction):
    if restriction == "symmetric":
        return float(np.linalg.norm(G - G.T))
    if restriction == "orthogonal":
        return float(np.linalg.norm(G.T @ G - np.eye(G.shape[0])))
    return 0.0


def certify_totally_geodesic(dec: RjsDecomposition, Y, seed=0, grid: Sequence[float] = DEFAULT_GRID,
                             restriction: str = "none", direction=None,
                             tol: Tolerances = DEFAULT_TOL) -> GeodesicReport:
    """Follow the geodesic from ``Y`` along a tangent direction and measure ``||gamma(t)^2 - M||``.

    With ``direction=None`` a random unit tangent is drawn; pass an explicit
    direction for control experiments.  A zero-dimensional branch with no
    explicit direction yields the constant geodesic.
    """
    Y = np.asarray(Y, dtype=float)
    dim = tangent_rank_dimension(dec, Y, restriction, tol)
    V = direction
    if V is None:
        V = random_tangent(dec, Y, seed, restriction, tol)
    if V is None:
        return GeodesicReport(float(np.linalg.norm(Y @ Y - dec.M)), _structure_residual(Y, restriction),
                              dim, tuple(grid), None)
    V = np.asarray(V, dtype=float)
    worst = worst_struct = 0.0
    for t in grid:
        G = geodesic(Y, V, t, tol)
        worst = max(worst, float(np.linalg.norm(G @ G - dec.M)))
        worst_struct = max(worst_struct, _structure_residual(G, restriction))
    return GeodesicReport(worst, worst_struct, dim, tuple(grid), V)


def _pushforward(kind, M0, A, V):
    if kind == "j":
        Ai = np.linalg.inv(A)
        return Ai, -Ai @ V @ Ai
    if kind == "L":
        return M0 @ A, M0 @ V
    if kind == "R":
        return A @ M0, V @ M0
    if kind == "conj":
        Mi = np.linalg.inv(M0)
        return M0 @ A @ Mi, M0 @ V @ Mi
    if kind == "congr":
        return M0 @ A @ M0.T, M0 @ V @ M0.T
    raise ValueError(f"unknown isometry kind {kind!r}")


ISOMETRY_KINDS = ("j", "L", "R", "conj", "congr")


def isometry_defect(kind: str, M0, A, V, W, tol: Tolerances = DEFAULT_TOL) -> float:
    """``|g_F(A)(dF V, dF W) - g_A(V, W)| / max(1, |g_A(V, W)|)``."""
    M0 = None if M0 is None else np.asarray(M0, dtype=float)
    if M0 is not None:
        _inv(M0, tol)
    FA, dV = _pushforward(kind, M0, A, V)
    _, dW = _pushforward(kind, M0, A, W)
    lhs = trace_metric(FA, dV, dW, tol)
    rhs = trace_metric(A, V, W, tol)
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def isometry_check(kind: str, M0, samples, tol: float = 1e-10) -> bool:
    """Whether ``F`` preserves ``g`` on every ``(A, V, W)`` sample to relative ``tol``."""
    return all(isometry_defect(kind, M0, A, V, W) <= tol for A, V, W in samples)


def fixed_point_defect(M, Y) -> float:
    """``||L_M(j(Y)) - Y||_F / max(1, ||Y||_F)``; zero exactly on square roots of ``M``."""
    Y = np.asarray(Y, dtype=float)
    return float(np.linalg.norm(np.asarray(M) @ _inv(Y) - Y)) / scale(Y)
