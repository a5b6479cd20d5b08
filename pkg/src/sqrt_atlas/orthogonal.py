"""Orthogonal square roots of special-orthogonal matrices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .branches import BranchIndex, build_rja, root_residual
from .errors import CountUndefined, NotSkew, NotSpecialOrthogonal, ResidualTooLarge, SingularInput
from .numkit import (
    DEFAULT_TOL, Tolerances, as_matrix, direct_sum, random_orthogonal, random_unitary, rho,
)
from .spectral import RjsDecomposition, SpectralProfile, classify_spectrum, is_orthogonal, rjs_decompose


@dataclass(frozen=True)
class OsrProfile:
    """Multiplicity ``h`` of 1, rotation angles ``((theta, m), ...)``, half-multiplicity ``k`` of -1."""

    h: int
    angles: tuple
    k: int

    @property
    def n(self) -> int:
        return self.h + 2 * sum(m for _, m in self.angles) + 2 * self.k

    def spectral(self) -> SpectralProfile:
        """The same spectrum as an exact (unit-modulus) spectral profile."""
        return SpectralProfile(
            ((1.0, self.h),) if self.h else (),
            tuple((th, ((1.0, m),)) for th, m in self.angles),
            ((1.0, 2 * self.k),) if self.k else (),
        )

    def to_dict(self) -> dict:
        return {"h": self.h, "angles": [{"theta": th, "m": m} for th, m in self.angles], "k": self.k}


@dataclass(frozen=True)
class OsrBranch:
    u: int
    mu: tuple
    rja: np.ndarray
    representative: np.ndarray
    dimension: int
    det_sign: int
    component_count: int
    residual: float
    index: BranchIndex  # matching index of the general branch


def require_special_orthogonal(M, tol: Tolerances = DEFAULT_TOL):
    if not is_orthogonal(M, tol):
        raise NotSpecialOrthogonal("matrix is not orthogonal")
    if np.linalg.det(M) < 0:
        raise NotSpecialOrthogonal(
            "matrix has determinant -1: no orthogonal matrix with determinant -1 has a real square root")


def osr_profile(M, tol: Tolerances = DEFAULT_TOL) -> OsrProfile:
    """Eigenvalue 1 -> ``h``, ``e^{+-i theta}`` -> ``m``, -1 -> ``2k``."""
    M = as_matrix(M)
    require_special_orthogonal(M, tol)
    sp = classify_spectrum(M, tol)
    h = sum(h for lam, h in sp.positive)
    if len(sp.positive) > 1 or len(sp.negative) > 1 or any(len(mods) != 1 for _, mods in sp.complex_groups):
        raise NotSpecialOrthogonal("spectrum is not on the unit circle")
    mult = sum(k for _, k in sp.negative)
    return OsrProfile(h, tuple((th, mods[0][1]) for th, mods in sp.complex_groups), mult // 2)


def osr_decompose(M, tol: Tolerances = DEFAULT_TOL) -> tuple[RjsDecomposition, OsrProfile]:
    """``M = C0 J C0^T`` with ``C0`` orthogonal and ``J`` built from exact unit eigenvalues."""
    M = as_matrix(M)
    prof = osr_profile(M, tol)
    dec = rjs_decompose(M, tol, profile=prof.spectral())
    if not dec.orthogonal:
        raise NotSpecialOrthogonal("matrix is not orthogonal")
    return dec, prof


def osr_dimension(prof: OsrProfile, u: int, mu) -> int:
    return u * (prof.h - u) + 2 * sum(a * (m - a) for a, (_, m) in zip(mu, prof.angles)) + prof.k * (prof.k - 1)


def _sr_index(prof: OsrProfile, u: int, mu) -> BranchIndex:
    return BranchIndex((u,) if prof.h else (), tuple((a,) for a in mu))


def osr_branch(dec: RjsDecomposition, prof: OsrProfile, u: int, mu, tol: Tolerances = DEFAULT_TOL) -> OsrBranch:
    mu = tuple(int(a) for a in mu)
    idx = _sr_index(prof, u, mu).validate(dec.profile)
    rja = build_rja(dec.profile, idx)
    Y = dec.C @ rja @ dec.C.T
    res = root_residual(dec.M, Y)
    if not res <= tol.resid_abs(dec.M):
        raise ResidualTooLarge(f"||Y^2 - M||_F = {res:.3e} exceeds budget")
    return OsrBranch(int(u), mu, rja, Y, osr_dimension(prof, u, mu), (-1) ** (prof.h - u),
                     1 if prof.k == 0 else 2, res, idx)


def enumerate_osr_branches(dec: RjsDecomposition, prof: OsrProfile, tol: Tolerances = DEFAULT_TOL) -> list[OsrBranch]:
    """One branch per ``(u, mu_1..mu_r)``, principal branch first."""
    ranges = [range(prof.h, -1, -1)] + [range(m, -1, -1) for _, m in prof.angles]
    return [osr_branch(dec, prof, c[0], c[1:], tol) for c in itertools.product(*ranges)]


def principal_orthogonal_branch(dec: RjsDecomposition, prof: OsrProfile, tol: Tolerances = DEFAULT_TOL) -> OsrBranch:
    return osr_branch(dec, prof, prof.h, [m for _, m in prof.angles], tol)


def sample_centralizer_orthogonal(prof: OsrProfile, seed, component=None) -> np.ndarray:
    """Random element of ``O(h) + rho(U(m_1)) + ... + O(2k)``.

    ``component`` (``+1``/``-1``) picks ``SO(2k)`` or its complement for the last block.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    parts = [random_orthogonal(prof.h, rng)] if prof.h else []
    parts += [rho(random_unitary(m, rng)) for _, m in prof.angles]
    if prof.k:
        W = random_orthogonal(2 * prof.k, rng)
        if component is not None and np.sign(np.linalg.det(W)) != component:
            W[:, 0] = -W[:, 0]
        parts.append(W)
    return direct_sum(parts)


def sample_osr_branch(dec: RjsDecomposition, prof: OsrProfile, branch: OsrBranch, seed,
                      tol: Tolerances = DEFAULT_TOL, component=None) -> np.ndarray:
    """``C0 X Jt X^T C0^T`` with ``X`` in the orthogonal part of the centralizer."""
    X = sample_centralizer_orthogonal(prof, seed, component)
    Y = dec.C @ X @ branch.rja @ X.T @ dec.C.T
    res = root_residual(dec.M, Y)
    if not res <= tol.resid_abs(dec.M):
        raise ResidualTooLarge(f"||Y^2 - M||_F = {res:.3e} exceeds budget")
    return Y


def component_representative(dec: RjsDecomposition, prof: OsrProfile, branch: OsrBranch, component: int) -> np.ndarray:
    """Branch point in the ``SO(2k)`` (``+1``) or ``O^-(2k)`` (``-1``) component."""
    if component == 1 or prof.k == 0:
        return branch.representative
    flip = np.ones(prof.n)
    flip[-1] = -1.0
    return dec.C @ (flip[:, None] * branch.rja * flip[None, :]) @ dec.C.T


def finite_osr_roots(dec: RjsDecomposition, prof: OsrProfile, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """All orthogonal roots when they are finitely many (``h, m_j, k <= 1``)."""
    if prof.h > 1 or prof.k > 1 or any(m > 1 for _, m in prof.angles):
        raise CountUndefined("orthogonal square-root set is infinite")
    roots = []
    for br in enumerate_osr_branches(dec, prof, tol):
        roots.append(br.representative)
        if prof.k:
            roots.append(component_representative(dec, prof, br, -1))
    return roots


def finite_osr_count(prof: OsrProfile) -> int:
    if prof.h > 1 or prof.k > 1 or any(m > 1 for _, m in prof.angles):
        raise CountUndefined("orthogonal square-root set is infinite")
    return 2 ** ((prof.n + 1) // 2)


def det_sign_of(branch: OsrBranch) -> int:
    return branch.det_sign


def split_by_det(branches) -> tuple[list[OsrBranch], list[OsrBranch]]:
    """Partition into roots in ``SO(n)`` and roots with determinant -1."""
    plus = [b for b in branches if b.det_sign == 1]
    minus = [b for b in branches if b.det_sign == -1]
    return plus, minus


def pfaffian(A) -> float:
    """Pfaffian by Parlett-Reid skew tridiagonalization with pivoting.

    Convention: ``pf(E_{pi/2}) = +1``, i.e. ``pf([[0, a], [-a, 0]]) = -a``.
    This equals the textbook pfaffian of ``A^T``.
    """
    A = np.array(A, dtype=float).T
    n = A.shape[0]
    if n % 2:
        return 0.0
    val = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.abs(A[k + 1:, k]).argmax())
        if kp != k + 1:
            A[[k + 1, kp], k:] = A[[kp, k + 1], k:]
            A[k:, [k + 1, kp]] = A[k:, [kp, k + 1]]
            val = -val
        if A[k + 1, k] == 0.0:
            return 0.0
        tau = A[k, k + 2:] / A[k, k + 1]
        val *= A[k, k + 1]
        if k + 2 < n:
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1]) - np.outer(A[k + 2:, k + 1], tau)
    return float(val)


def pfaffian_sign(A, tol: Tolerances = DEFAULT_TOL) -> int:
    A = as_matrix(A)
    if A.shape[0] % 2 or float(np.linalg.norm(A + A.T)) > tol.resid_abs(A):
        raise NotSkew("pfaffian needs an even-order skew-symmetric matrix")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= tol.rank * s[0]:
        raise SingularInput("skew matrix is singular")
    return 1 if pfaffian(A) > 0 else -1
