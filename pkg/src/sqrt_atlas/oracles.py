"""Independent reference computations used to cross-check constructed roots.

Nothing here touches the in-repo eigensolver or the RJS machinery: the
routines go through LAPACK (via numpy) or plain iteration.
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import NonConvergence


def denman_beavers(M, rtol: float = 1e-14, max_iter: int = 100) -> np.ndarray:
    """Principal square root by the (determinant-scaled) Denman-Beavers iteration.

    Requires no eigenvalues on the closed negative real axis.
    """
    Y = np.array(M, dtype=float)
    n = Y.shape[0]
    Z = np.eye(n)
    for _ in range(max_iter):
        Yi, Zi = np.linalg.inv(Y), np.linalg.inv(Z)
        g = abs(np.linalg.det(Y) * np.linalg.det(Z)) ** (-1.0 / (2 * n))
        Y_next = 0.5 * (g * Y + Zi / g)
        Z = 0.5 * (g * Z + Yi / g)
        if np.linalg.norm(Y_next - Y) <= rtol * np.linalg.norm(Y_next):
            return Y_next
        Y = Y_next
    raise NonConvergence("Denman-Beavers iteration did not converge")


def sign_pattern_roots(M) -> list[np.ndarray]:
    """All real roots of a diagonalizable ``M`` with simple, non-negative-real spectrum.

    Each real eigenvalue gets an independent sign; each conjugate pair shares
    one sign so the result stays real.
    """
    M = np.asarray(M, dtype=float)
    lam, V = np.linalg.eig(M)
    Vi = np.linalg.inv(V)
    roots_ = np.sqrt(lam.astype(complex))
    real_idx = [i for i in range(len(lam)) if abs(lam[i].imag) == 0]
    pairs = [i for i in range(len(lam)) if lam[i].imag > 0]
    partner = {i: int(np.argmin(np.abs(lam - lam[i].conjugate()))) for i in pairs}
    out = []
    for signs in itertools.product((1, -1), repeat=len(real_idx) + len(pairs)):
        d = roots_.copy()
        for s, i in zip(signs, real_idx + pairs):
            d[i] *= s
            if i in partner:
                d[partner[i]] = d[i].conjugate()
        out.append(((V * d) @ Vi).real)
    return out


def symmetric_sign_roots(M) -> list[np.ndarray]:
    """All symmetric roots of an SPD matrix with simple spectrum, via ``eigh``."""
    lam, Q = np.linalg.eigh(np.asarray(M, dtype=float))
    return [(Q * (np.array(s) * np.sqrt(lam))) @ Q.T
            for s in itertools.product((1, -1), repeat=len(lam))]
