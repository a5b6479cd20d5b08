"""Symmetric square roots of symmetric positive-definite matrices."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .branches import BranchIndex, build_rja, enumerate_branches, root_residual
from .errors import NotSpd, ResidualTooLarge
from .numkit import DEFAULT_TOL, Tolerances, as_matrix, direct_sum, random_orthogonal
from .spectral import RjsDecomposition, SpectralProfile, is_symmetric, rjs_decompose


@dataclass(frozen=True)
class SsrBranch:
    u: tuple
    rja: np.ndarray
    representative: np.ndarray
    dimension: int
    signature_u: int
    residual: float

    @property
    def index(self) -> BranchIndex:
        return BranchIndex(self.u, ())

    @property
    def signature(self) -> tuple[int, int]:
        return self.signature_u, self.representative.shape[0] - self.signature_u


def _require_spd_profile(profile: SpectralProfile):
    if profile.complex_groups or profile.negative:
        raise NotSpd("matrix has non-positive or non-real eigenvalues")


def require_spd(dec: RjsDecomposition, tol: Tolerances = DEFAULT_TOL):
    _require_spd_profile(dec.profile)
    if not (dec.orthogonal and is_symmetric(dec.M, tol)):
        raise NotSpd("matrix is not symmetric")
    if dec.profile.positive[0][0] <= tol.cluster_abs(dec.M):
        raise NotSpd("smallest eigenvalue is not bounded away from zero")


def spd_decompose(M, tol: Tolerances = DEFAULT_TOL) -> RjsDecomposition:
    """Orthogonal eigendecomposition ``M = Q J Q^T`` of an SPD matrix."""
    M = as_matrix(M)
    if not is_symmetric(M, tol):
        raise NotSpd("matrix is not symmetric")
    dec = rjs_decompose(M, tol)
    require_spd(dec, tol)
    return dec


def ssr_dimension(profile: SpectralProfile, u) -> int:
    """Dimension of the product of Grassmannians ``G_{u_i}(R^{h_i})``."""
    return sum(a * (h - a) for a, h in zip(u, profile.h))


def ssr_component_count(profile: SpectralProfile) -> int:
    """Each branch is connected and the branches are the components."""
    _require_spd_profile(profile)
    return prod(h + 1 for h in profile.h)


def _symmetric_root(dec, Y, tol):
    Y = 0.5 * (Y + Y.T)
    res = root_residual(dec.M, Y)
    if not res <= tol.resid_abs(dec.M):
        raise ResidualTooLarge(f"||Y^2 - M||_F = {res:.3e} exceeds budget")
    return Y, res


def ssr_branch(dec: RjsDecomposition, u, tol: Tolerances = DEFAULT_TOL) -> SsrBranch:
    require_spd(dec, tol)
    index = BranchIndex(tuple(u), ()).validate(dec.profile)
    rja = build_rja(dec.profile, index)
    Y, res = _symmetric_root(dec, dec.C @ rja @ dec.C.T, tol)
    return SsrBranch(index.u, rja, Y, ssr_dimension(dec.profile, index.u), sum(index.u), res)


def enumerate_ssr_branches(dec: RjsDecomposition, tol: Tolerances = DEFAULT_TOL) -> list[SsrBranch]:
    require_spd(dec, tol)
    return [ssr_branch(dec, idx.u, tol) for idx in enumerate_branches(dec.profile)]


def sample_ssr_branch(dec: RjsDecomposition, u, seed, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``Q X Jt X^T Q^T`` with ``X`` drawn from the product of ``O(h_i)``."""
    require_spd(dec, tol)
    index = BranchIndex(tuple(u), ()).validate(dec.profile)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    X = direct_sum([random_orthogonal(h, rng) for h in dec.profile.h])
    rja = build_rja(dec.profile, index)
    Y, _ = _symmetric_root(dec, dec.C @ X @ rja @ X.T @ dec.C.T, tol)
    return Y


def principal_spd_sqrt(dec: RjsDecomposition, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The positive-definite root ``M^{1/2}``."""
    return ssr_branch(dec, dec.profile.h, tol).representative


def negative_spd_sqrt(dec: RjsDecomposition, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The negative-definite root ``-M^{1/2}``."""
    return ssr_branch(dec, [0] * dec.profile.p, tol).representative


def ssr_is_finite(profile: SpectralProfile) -> bool:
    _require_spd_profile(profile)
    return all(h == 1 for h in profile.h)
