"""Spectral classification and real Jordan standard forms of semisimple matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import AmbiguousSpectrum, DefectiveInput, ExistenceViolated, ResidualTooLarge, SingularInput
from .numkit import (
    DEFAULT_TOL, EPS, Tolerances, as_matrix, cluster_points, direct_sum, eigvals, null_basis,
    rho, rotation_block, scale, svd_rank,
)


class Block(NamedTuple):
    """One eigenvalue cluster of a profile, positioned inside ``J``.

    ``kind`` is ``"pos"``, ``"cplx"`` or ``"neg"``.  ``value`` is the
    eigenvalue (upper half-plane member for complex clusters), ``mult`` the
    multiplicity (``m`` for complex clusters, which occupy ``2m`` rows).
    ``group``/``member`` locate complex clusters as ``(l, t)``.
    """

    kind: str
    value: complex
    mult: int
    offset: int
    size: int
    group: int = -1
    member: int = -1


@dataclass(frozen=True)
class SpectralProfile:
    """Clustered eigenstructure in canonical order.

    ``positive``: ``((lam, h), ...)`` with ``lam`` increasing.
    ``complex_groups``: ``((theta, ((rho, m), ...)), ...)`` with ``theta`` in
    ``(0, pi)`` increasing and ``rho`` increasing inside a group.
    ``negative``: ``((zeta, mult), ...)`` for eigenvalues ``-zeta`` with
    ``zeta`` increasing.  Odd ``mult`` is allowed here.
    """

    positive: tuple = ()
    complex_groups: tuple = ()
    negative: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "positive", tuple((float(a), int(b)) for a, b in self.positive))
        object.__setattr__(self, "negative", tuple((float(a), int(b)) for a, b in self.negative))
        object.__setattr__(self, "complex_groups", tuple(
            (float(th), tuple((float(r), int(m)) for r, m in mods)) for th, mods in self.complex_groups))
        for fam in (self.positive, self.negative):
            vals = [v for v, _ in fam]
            if any(v <= 0 for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError("cluster values must be positive and strictly increasing")
            if any(m < 1 for _, m in fam):
                raise ValueError("multiplicities must be >= 1")
        thetas = [th for th, _ in self.complex_groups]
        if any(not 0 < th < np.pi for th in thetas) or any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise ValueError("angles must lie in (0, pi) and strictly increase")
        for _, mods in self.complex_groups:
            rhos = [r for r, _ in mods]
            if not mods or any(r <= 0 for r in rhos) or any(b <= a for a, b in zip(rhos, rhos[1:])):
                raise ValueError("moduli must be positive and strictly increasing in a group")
            if any(m < 1 for _, m in mods):
                raise ValueError("multiplicities must be >= 1")

    @property
    def n(self) -> int:
        return (sum(h for _, h in self.positive)
                + 2 * sum(m for _, mods in self.complex_groups for _, m in mods)
                + sum(k for _, k in self.negative))

    @property
    def p(self) -> int:
        return len(self.positive)

    @property
    def r(self) -> int:
        return len(self.complex_groups)

    @property
    def q(self) -> int:
        return len(self.negative)

    @property
    def h(self) -> list[int]:
        return [h for _, h in self.positive]

    @property
    def m(self) -> list[list[int]]:
        return [[m for _, m in mods] for _, mods in self.complex_groups]

    @property
    def k(self) -> list[int]:
        """Half-multiplicities of the negative clusters (requires even multiplicities)."""
        if not has_real_sqrt(self):
            raise ExistenceViolated("negative eigenvalue of odd multiplicity: no real square root")
        return [mult // 2 for _, mult in self.negative]

    def blocks(self) -> Iterator[Block]:
        off = 0
        for lam, h in self.positive:
            yield Block("pos", lam, h, off, h)
            off += h
        for l, (th, mods) in enumerate(self.complex_groups):
            for t, (r, m) in enumerate(mods):
                yield Block("cplx", r * np.exp(1j * th), m, off, 2 * m, l, t)
                off += 2 * m
        for zeta, mult in self.negative:
            yield Block("neg", -zeta, mult, off, mult)
            off += mult

    def rjs_matrix(self) -> np.ndarray:
        parts = []
        for b in self.blocks():
            if b.kind == "cplx":
                th = self.complex_groups[b.group][0]
                parts.append(abs(b.value) * direct_sum([rotation_block(th)] * b.mult))
            else:
                parts.append(b.value.real * np.eye(b.mult))
        return direct_sum(parts)

    def to_dict(self) -> dict:
        return {
            "positive": [{"lambda": lam, "h": h} for lam, h in self.positive],
            "complex": [{"theta": th, "moduli": [{"rho": r, "m": m} for r, m in mods]}
                        for th, mods in self.complex_groups],
            "negative": [{"zeta": z, "mult": k} for z, k in self.negative],
        }


@dataclass(frozen=True)
class RjsDecomposition:
    """``M = C J C^{-1}`` with ``J`` the real Jordan standard form."""

    M: np.ndarray
    profile: SpectralProfile
    J: np.ndarray
    C: np.ndarray
    C_inv: np.ndarray
    residual: float
    orthogonal: bool

    def __post_init__(self):
        for name in ("M", "J", "C", "C_inv"):
            getattr(self, name).flags.writeable = False

    def conj(self, X) -> np.ndarray:
        """``C X C^{-1}``."""
        return self.C @ X @ self.C_inv

    def unconj(self, Y) -> np.ndarray:
        """``C^{-1} Y C``."""
        return self.C_inv @ Y @ self.C


def _check_nonsingular(M, tol: Tolerances):
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= tol.rank * s[0]:
        raise SingularInput(f"matrix is singular (sigma_min / sigma_max = {s[-1] / s[0]:.3e})")


def _snap_real(lam, radius):
    return np.where(np.abs(lam.imag) <= radius, lam.real + 0j, lam)


def _semisimple(M, lam, tol: Tolerances) -> bool:
    """Compare geometric multiplicity at each cluster centroid with the cluster size.

    A defective block of size ``a`` splits under rounding into a polygon of
    radius about ``eps^(1/a)`` whose centroid stays accurate.  Clusters that
    tight must be semisimple at their centroid; looser clusters are split
    further when the centroid test fails.
    """
    n = M.shape[0]
    s = scale(M)
    floor = tol.cluster_abs(M)

    def check(members, radius) -> bool:
        for group in cluster_points(lam[members], radius):
            idx = members[group]
            a = len(idx)
            c = complex(np.mean(lam[idx]))
            geo = n - svd_rank(M - c * np.eye(n), tol, s)
            if geo == a:
                continue
            spread = float(np.max(np.abs(lam[idx] - c)))
            tight = spread <= 10.0 * s * EPS ** (1.0 / a) or radius < 1e-3 * floor
            if tight and geo > 0:
                return False
            if a == 1 or not check(idx, radius / 4):
                return False
        return True

    return check(np.arange(n), s * max(np.sqrt(tol.cluster), 10.0 * EPS ** (1.0 / n)))


def check_semisimple(M, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff every eigenvalue has equal geometric and algebraic multiplicity."""
    M = as_matrix(M)
    _check_nonsingular(M, tol)
    return _semisimple(M, eigvals(M), tol)


def classify_spectrum(M, tol: Tolerances = DEFAULT_TOL) -> SpectralProfile:
    """Cluster the spectrum of a non-singular semisimple matrix into a profile."""
    M = as_matrix(M)
    _check_nonsingular(M, tol)
    lam = eigvals(M)
    if not _semisimple(M, lam, tol):
        raise DefectiveInput("matrix is not semisimple (an eigenvalue has a deficient eigenspace)")
    radius = tol.cluster_abs(M)
    lam = _snap_real(lam, radius)
    positive, negative, upper = [], [], []
    for group in cluster_points(lam, radius):
        vals = lam[group]
        real = vals.imag == 0
        if real.any() and not real.all():
            raise AmbiguousSpectrum("an eigenvalue cluster mixes real and non-real values")
        if real.all():
            c = float(np.mean(vals.real))
            (positive if c > 0 else negative).append((abs(c), len(group)))
        elif (vals.imag > 0).all():
            upper.append((complex(np.mean(vals)), len(group)))
        elif not (vals.imag < 0).all():
            raise AmbiguousSpectrum("an eigenvalue cluster straddles the real axis")
    n_lower = sum(1 for v in lam if v.imag < 0)
    if n_lower != sum(m for _, m in upper):
        raise AmbiguousSpectrum("non-real eigenvalues do not pair into conjugates")
    upper.sort(key=lambda cm: np.angle(cm[0]))
    groups: list[list[tuple[float, float, int]]] = []
    for c, m in upper:
        th, r = float(np.angle(c)), float(abs(c))
        if groups:
            last = groups[-1]
            th0 = sum(t * mm for t, _, mm in last) / sum(mm for _, _, mm in last)
            if abs(th - th0) * max(r, max(rr for _, rr, _ in last)) <= radius:
                last.append((th, r, m))
                continue
        groups.append([(th, r, m)])
    complex_groups = []
    for g in groups:
        th = sum(t * m for t, _, m in g) / sum(m for _, _, m in g)
        mods = sorted((r, m) for _, r, m in g)
        complex_groups.append((th, tuple(mods)))
    return SpectralProfile(tuple(sorted(positive)), tuple(complex_groups), tuple(sorted(negative)))


def has_real_sqrt(profile: SpectralProfile) -> bool:
    """A semisimple non-singular matrix has a real root iff negative clusters are even."""
    return all(mult % 2 == 0 for _, mult in profile.negative)


def is_symmetric(M, tol: Tolerances = DEFAULT_TOL) -> bool:
    return float(np.linalg.norm(M - M.T)) <= tol.resid_abs(M)


def is_orthogonal(M, tol: Tolerances = DEFAULT_TOL) -> bool:
    n = M.shape[0]
    return float(np.linalg.norm(M.T @ M - np.eye(n))) <= tol.resid_abs(M)


def _polar_orthogonal(C):
    U, _, Vh = np.linalg.svd(C)
    return U @ Vh


def rjs_decompose(M, tol: Tolerances = DEFAULT_TOL, profile: SpectralProfile | None = None) -> RjsDecomposition:
    """Real Jordan standard form ``J`` and conjugator ``C`` with ``M = C J C^{-1}``.

    For a complex cluster ``rho e^{i theta}`` with eigenvector ``w = x + iy``,
    the column pair ``(y, x)`` makes the restriction equal ``rho E_theta``.
    Symmetric and orthogonal inputs get an orthogonal ``C``.
    """
    M = as_matrix(M)
    if profile is None:
        profile = classify_spectrum(M, tol)
    n = M.shape[0]
    J = profile.rjs_matrix()
    if float(np.linalg.norm(M - J)) <= tol.resid_abs(M):
        # already in standard form
        eye = np.eye(n)
        return RjsDecomposition(M, profile, J, eye, eye.copy(), float(np.linalg.norm(M - J)), True)
    cols = []
    for b in profile.blocks():
        if b.kind == "cplx":
            W = null_basis(M - b.value * np.eye(n), b.mult)
            for w in W.T:
                cols.extend([np.sqrt(2) * w.imag, np.sqrt(2) * w.real])
        else:
            cols.extend(null_basis(M - b.value.real * np.eye(n), b.mult).T.real)
    C = np.column_stack(cols)
    orthogonal = is_symmetric(M, tol) or is_orthogonal(M, tol)
    if orthogonal:
        C = _polar_orthogonal(C)
        C_inv = C.T.copy()
    else:
        C_inv = np.linalg.inv(C)
    residual = float(np.linalg.norm(C @ J @ C_inv - M))
    if residual > tol.resid_abs(M):
        raise ResidualTooLarge(f"RJS reconstruction residual {residual:.3e} exceeds budget")
    return RjsDecomposition(M, profile, J, C, C_inv, residual, orthogonal)


def centralizer_basis(profile: SpectralProfile) -> list[np.ndarray]:
    """Basis of the Lie algebra of matrices commuting with the RJS form.

    ``gl_h`` per positive cluster, ``rho(gl_m(C))`` per complex cluster and
    ``gl_{2k}`` per negative cluster, each embedded at its diagonal block.
    """
    if not has_real_sqrt(profile):
        raise ExistenceViolated("negative eigenvalue of odd multiplicity: no real square root")
    n = profile.n
    basis = []
    for b in profile.blocks():
        if b.kind == "cplx":
            m = b.mult
            for i in range(m):
                for j in range(m):
                    for unit in (1.0, 1j):
                        Z = np.zeros((m, m), dtype=complex)
                        Z[i, j] = unit
                        B = np.zeros((n, n))
                        B[b.offset:b.offset + 2 * m, b.offset:b.offset + 2 * m] = rho(Z)
                        basis.append(B)
        else:
            for i in range(b.size):
                for j in range(b.size):
                    B = np.zeros((n, n))
                    B[b.offset + i, b.offset + j] = 1.0
                    basis.append(B)
    return basis
