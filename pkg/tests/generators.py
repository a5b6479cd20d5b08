"""Seeded constructions of semisimple matrices with prescribed spectra."""
from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group

from sqrt_atlas.spectral import SpectralProfile

POS_GRID = (0.5, 1.0, 1.7, 2.6, 3.5)
NEG_GRID = (0.6, 1.4, 2.5)
THETA_GRID = (0.5, 1.3, 2.1, 2.8)
RHO_GRID = (0.7, 1.5)


def conditioned(n, rng, lo=0.5, hi=2.0):
    """``Q1 diag(s) Q2`` with singular values in ``[lo, hi]``."""
    if n == 1:
        return np.array([[rng.uniform(lo, hi)]])
    Q1 = ortho_group.rvs(n, random_state=rng)
    Q2 = ortho_group.rvs(n, random_state=rng)
    return Q1 @ np.diag(rng.uniform(lo, hi, n)) @ Q2


def random_profile(rng, n_max=8, positive=True, complex_=True, negative=True, max_mult=2,
                   force_n=None) -> SpectralProfile:
    """Random profile with well-separated clusters and even negative multiplicities."""
    while True:
        pos = []
        if positive:
            vals = sorted(rng.choice(POS_GRID, rng.integers(0, 4), replace=False))
            pos = [(v, int(rng.integers(1, max_mult + 1))) for v in vals]
        groups = []
        if complex_:
            ths = sorted(rng.choice(THETA_GRID, rng.integers(0, 3), replace=False))
            for th in ths:
                rhos = sorted(rng.choice(RHO_GRID, rng.integers(1, 3), replace=False))
                groups.append((th, tuple((r, int(rng.integers(1, max_mult + 1))) for r in rhos)))
        neg = []
        if negative:
            vals = sorted(rng.choice(NEG_GRID, rng.integers(0, 3), replace=False))
            neg = [(v, 2 * int(rng.integers(1, max_mult + 1))) for v in vals]
        prof = SpectralProfile(tuple(pos), tuple(groups), tuple(neg))
        n = prof.n if (pos or groups or neg) else 0
        if 1 <= n <= n_max and (force_n is None or n == force_n):
            return prof


def matrix_from_profile(prof: SpectralProfile, rng) -> np.ndarray:
    C = conditioned(prof.n, rng)
    return C @ prof.rjs_matrix() @ np.linalg.inv(C)


def random_semisimple(seed, n_max=8, **kw) -> tuple[np.ndarray, SpectralProfile]:
    rng = np.random.default_rng(seed)
    prof = random_profile(rng, n_max, **kw)
    return matrix_from_profile(prof, rng), prof


def random_spd(seed, n_max=6, clustered=False, distinct_n=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if clustered:
        k = int(rng.integers(1, 4))
        vals = sorted(rng.choice(POS_GRID, k, replace=False))
        lam = np.concatenate([[v] * int(rng.integers(1, 3)) for v in vals])[:n_max]
    else:
        n = distinct_n or int(rng.integers(1, n_max + 1))
        lam = np.sort(rng.choice(np.linspace(0.5, 4.0, 15), n, replace=False))
    Q = ortho_group.rvs(len(lam), random_state=rng) if len(lam) > 1 else np.eye(1)
    M = (Q * lam) @ Q.T
    return 0.5 * (M + M.T)


def random_so(seed, h, angles, k) -> np.ndarray:
    """``Q (I_h + E_theta... + (-I_2k)) Q^T`` with ``Q`` Haar-orthogonal and ``det = +1``."""
    from sqrt_atlas.numkit import direct_sum, rotation_block

    rng = np.random.default_rng(seed)
    parts = [np.eye(h)] if h else []
    for th, m in angles:
        parts += [rotation_block(th)] * m
    if k:
        parts.append(-np.eye(2 * k))
    J = direct_sum(parts)
    n = J.shape[0]
    Q = ortho_group.rvs(n, random_state=rng) if n > 1 else np.eye(1)
    return Q @ J @ Q.T


def defective(seed, n_max=6) -> np.ndarray:
    """Similar to a Jordan form with at least one block of size >= 2."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, n_max + 1))
    J = np.diag(rng.choice([-2.0, -1.0, 0.7, 1.5, 3.0], n))
    size = int(rng.integers(2, n + 1))
    start = int(rng.integers(0, n - size + 1))
    lam = J[start, start]
    for i in range(start, start + size):
        J[i, i] = lam
        if i + 1 < start + size:
            J[i, i + 1] = 1.0
    C = conditioned(n, rng)
    return C @ J @ np.linalg.inv(C)
