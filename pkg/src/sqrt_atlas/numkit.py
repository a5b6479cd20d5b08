"""Dense numerical kernel.

Matrices are plain ``numpy`` arrays (``float64`` for real, ``complex128`` for
complex).  The eigenvalue solver is implemented here (Householder reduction
to Hessenberg form followed by Francis double-shift QR); numpy supplies the
BLAS-level pieces (products, solves, SVD, QR).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonConvergence

EPS = np.finfo(float).eps

#: ``E_{pi/2}``, the generator of planar rotations.
J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances; absolute thresholds are ``rel * max(1, ||A||_F)``.

    ``rank`` is relative to the largest singular value and is not rescaled.
    """

    cluster: float = 1e-8
    resid: float = 1e-8
    rank: float = 1e-8

    def __post_init__(self):
        for name in ("cluster", "resid", "rank"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {name!r} must be positive, got {value!r}")

    @classmethod
    def from_resid(cls, resid: float) -> "Tolerances":
        """Tolerances driven by one residual budget; clustering scales with it."""
        return cls(cluster=resid, resid=resid)

    def cluster_abs(self, A) -> float:
        return self.cluster * scale(A)

    def resid_abs(self, A) -> float:
        return self.resid * scale(A)


DEFAULT_TOL = Tolerances()


def scale(A) -> float:
    return max(1.0, float(np.linalg.norm(A)))


def as_matrix(A) -> np.ndarray:
    """Validate and copy ``A`` into a finite square ``float64`` array."""
    M = np.array(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def rotation_block(theta: float) -> np.ndarray:
    """``E_theta = [[cos, -sin], [sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def direct_sum(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal assembly; zero-order blocks are skipped."""
    blocks = [np.atleast_2d(np.asarray(b)) for b in blocks if np.size(b) > 0]
    if not blocks:
        return np.zeros((0, 0))
    n = sum(b.shape[0] for b in blocks)
    dtype = np.result_type(*blocks)
    out = np.zeros((n, n), dtype=dtype)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def hessenberg(A) -> np.ndarray:
    """Upper Hessenberg form of ``A`` by Householder similarity transforms."""
    H = np.array(A, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


def eigvals(A, max_iter: int = 60) -> np.ndarray:
    """Eigenvalues of a real square matrix by Francis double-shift QR.

    Complex eigenvalues come out as exact conjugate pairs.  Raises
    ``NonConvergence`` when one eigenvalue needs more than ``max_iter`` sweeps.
    """
    A = as_matrix(A)
    n = A.shape[0]
    w = np.zeros(n, dtype=complex)
    # unit scaling keeps the reflector norms and shift products clear of underflow and overflow
    c = float(np.abs(A).max())
    if c == 0.0:
        return w
    a = hessenberg(A / c)
    anorm = sum(abs(a[i, j]) for i in range(n) for j in range(max(i - 1, 0), n))
    nn = n - 1
    t = 0.0
    while nn >= 0:
        its = 0
        while True:
            # look for a negligible subdiagonal element
            l = nn
            while l > 0:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                # relative test, with an absolute floor for graded matrices
                if abs(a[l, l - 1]) <= max(EPS * s, EPS * EPS * anorm):
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                w[nn] = x + t
                nn -= 1
            elif l == nn - 1:
                y = a[nn - 1, nn - 1]
                ww = a[nn, nn - 1] * a[nn - 1, nn]
                p = 0.5 * (y - x)
                q = p * p + ww
                z = np.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + np.copysign(z, p)
                    w[nn - 1] = w[nn] = x + z
                    if z != 0.0:
                        w[nn] = x - ww / z
                else:
                    w[nn] = complex(x + p, -z)
                    w[nn - 1] = complex(x + p, z)
                nn -= 2
            else:
                if its == max_iter:
                    raise NonConvergence(f"QR iteration did not converge after {its} sweeps")
                y = a[nn - 1, nn - 1]
                ww = a[nn, nn - 1] * a[nn - 1, nn]
                if its and its % 10 == 0:
                    # exceptional shift
                    t += x
                    for i in range(nn + 1):
                        a[i, i] -= x
                    s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                    x = y = 0.75 * s
                    ww = -0.4375 * s * s
                its += 1
                m = nn - 2
                while m >= l:
                    z = a[m, m]
                    r = x - z
                    s = y - z
                    p = (r * s - ww) / a[m + 1, m] + a[m, m + 1]
                    q = a[m + 1, m + 1] - z - r - s
                    r = a[m + 2, m + 1]
                    s = abs(p) + abs(q) + abs(r)
                    p /= s
                    q /= s
                    r /= s
                    if m == l:
                        break
                    u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                    v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                    if u <= EPS * v:
                        break
                    m -= 1
                for i in range(m, nn - 1):
                    a[i + 2, i] = 0.0
                    if i != m:
                        a[i + 2, i - 1] = 0.0
                for k in range(m, nn):
                    if k != m:
                        p = a[k, k - 1]
                        q = a[k + 1, k - 1]
                        r = a[k + 2, k - 1] if k + 1 != nn else 0.0
                        x = abs(p) + abs(q) + abs(r)
                        if x != 0.0:
                            p /= x
                            q /= x
                            r /= x
                    s = np.copysign(np.sqrt(p * p + q * q + r * r), p)
                    if s == 0.0:
                        continue
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    # row modification
                    if k + 1 != nn:
                        pr = a[k, k:nn + 1] + q * a[k + 1, k:nn + 1] + r * a[k + 2, k:nn + 1]
                        a[k + 2, k:nn + 1] -= pr * z
                    else:
                        pr = a[k, k:nn + 1] + q * a[k + 1, k:nn + 1]
                    a[k + 1, k:nn + 1] -= pr * y
                    a[k, k:nn + 1] -= pr * x
                    # column modification
                    mmin = min(nn, k + 3)
                    rows = slice(l, mmin + 1)
                    if k + 1 != nn:
                        pc = x * a[rows, k] + y * a[rows, k + 1] + z * a[rows, k + 2]
                        a[rows, k + 2] -= pc * r
                    else:
                        pc = x * a[rows, k] + y * a[rows, k + 1]
                    a[rows, k + 1] -= pc * q
                    a[rows, k] -= pc
            if not (l + 1 < nn):
                break
    return w * c


def cluster_points(values: Sequence[complex], radius: float) -> list[list[int]]:
    """Single-linkage clusters of complex points; returns lists of indices."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def null_basis(A, dim: int) -> np.ndarray:
    """The ``dim`` right singular vectors of ``A`` with smallest singular values."""
    if dim == 0:
        return np.zeros((A.shape[1], 0), dtype=A.dtype)
    _, _, vh = np.linalg.svd(A)
    return vh[-dim:].conj().T


def eig(A, tol: Tolerances = DEFAULT_TOL) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs of ``A`` with multiplicity.

    Eigenvalues come from :func:`eigvals`.  Eigenvectors are singular vectors
    of ``A - lambda I`` for each eigenvalue cluster, so a repeated semisimple
    eigenvalue gets an orthonormal basis of its eigenspace.  The vector paired
    with ``conj(lambda)`` is the conjugate of the one paired with ``lambda``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    lam = eigvals(A)
    lam = np.where(np.abs(lam.imag) <= tol.cluster_abs(A), lam.real + 0j, lam)
    out: list[tuple[complex, np.ndarray] | None] = [None] * n
    for group in cluster_points(lam, tol.cluster_abs(A)):
        center = np.mean(lam[group])
        if center.imag < 0:
            continue
        if center.imag == 0:
            vecs = null_basis(A - center.real * np.eye(n), len(group)).astype(complex)
            for idx, v in zip(group, vecs.T):
                out[idx] = (complex(lam[idx]), v)
        else:
            vecs = null_basis(A - center * np.eye(n), len(group))
            conj_idx = [i for i in range(n) if out[i] is None and lam[i].imag < 0
                        and abs(np.conj(lam[i]) - center) <= tol.cluster_abs(A) * len(group)]
            for idx, v in zip(group, vecs.T):
                out[idx] = (complex(lam[idx]), v)
            for idx, v in zip(conj_idx, vecs.T):
                out[idx] = (complex(lam[idx]), v.conj())
    for i in range(n):
        if out[i] is None:
            # stray lower-half eigenvalue without a recorded partner
            v = null_basis(A - lam[i] * np.eye(n), 1)[:, 0]
            out[i] = (complex(lam[i]), v)
    return out  # type: ignore[return-value]


def svd_rank(A, tol: Tolerances = DEFAULT_TOL, ref: float | None = None) -> int:
    """Number of singular values above ``tol.rank * ref`` (default ``ref = sigma_max``).

    Pass a problem-scale ``ref`` when ``A`` may be pure rounding noise.
    """
    A = np.asarray(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = s[0] if ref is None else ref
    if ref == 0.0:
        return 0
    return int(np.sum(s > tol.rank * ref))


# Pade(6, 6) numerator coefficients
_PADE6 = [1.0]
for _k in range(1, 7):
    _PADE6.append(_PADE6[-1] * (6 - _k + 1) / (_k * (12 - _k + 1)))


def expm(A) -> np.ndarray:
    """Matrix exponential, Pade(6,6) with scaling so ``||A / 2^s||_inf <= 1/2``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    norm = np.linalg.norm(A, np.inf) if n else 0.0
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    X = A / (2.0 ** s)
    eye = np.eye(n)
    powers = [eye, X]
    for _ in range(5):
        powers.append(powers[-1] @ X)
    U = sum(c * P for c, P in zip(_PADE6[1::2], powers[1::2]))
    V = sum(c * P for c, P in zip(_PADE6[0::2], powers[0::2]))
    E = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        E = E @ E
    return E


def rho(Z) -> np.ndarray:
    """Real ``2h x 2h`` image of a complex ``h x h`` matrix.

    Each entry ``z`` becomes ``Re(z) I_2 + Im(z) E_{pi/2}``.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    return np.kron(Z.real, np.eye(2)) + np.kron(Z.imag, J2)


def rho_inverse(R) -> np.ndarray:
    """Recover ``Z`` from ``rho(Z)``; the input is assumed to lie in the image."""
    R = np.asarray(R, dtype=float)
    return R[0::2, 0::2] + 1j * R[1::2, 0::2]


def random_orthogonal(n: int, seed) -> np.ndarray:
    """Haar-distributed orthogonal matrix from the QR factors of a Gaussian draw."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    return Q * d


def random_unitary(m: int, seed) -> np.ndarray:
    """Haar-distributed unitary matrix (phase-corrected QR of a complex Gaussian)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return Q * ph
