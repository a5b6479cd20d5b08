"""Branches of the real square roots of a semisimple non-singular matrix.

A branch collects the roots sharing one eigenvalue multiplicity pattern.  It
is the orbit of the auxiliary form ``Jt`` (``Jt @ Jt == J``) under
conjugation by the centralizer of ``J``, carried to ``M`` by ``C``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CountUndefined, ExistenceViolated, IndexOutOfRange, ResidualTooLarge, SingularInput
from .numkit import (
    DEFAULT_TOL, J2, Tolerances, as_matrix, direct_sum, eigvals, null_basis, rho,
    rotation_block, scale,
)
from .spectral import RjsDecomposition, SpectralProfile, has_real_sqrt

#: Sampled centralizer blocks above this condition number are redrawn; the
#: root residual grows like cond(X)^2 * cond(C)^2 * eps.
MAX_SAMPLE_COND = 1e3


@dataclass(frozen=True)
class BranchIndex:
    """``u`` per positive cluster, ``mu`` per complex cluster (nested by group)."""

    u: tuple = ()
    mu: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(int(x) for x in self.u))
        object.__setattr__(self, "mu", tuple(tuple(int(x) for x in g) for g in self.mu))

    def validate(self, profile: SpectralProfile) -> "BranchIndex":
        if len(self.u) != profile.p or [len(g) for g in self.mu] != [len(g) for g in profile.m]:
            raise IndexOutOfRange(f"index {self.to_dict()} does not match the profile shape")
        if any(not 0 <= u <= h for u, h in zip(self.u, profile.h)):
            raise IndexOutOfRange(f"u={list(self.u)} outside 0..h={profile.h}")
        for g_mu, g_m in zip(self.mu, profile.m):
            if any(not 0 <= a <= b for a, b in zip(g_mu, g_m)):
                raise IndexOutOfRange(f"mu={[list(g) for g in self.mu]} outside 0..m={profile.m}")
        return self

    def to_dict(self) -> dict:
        return {"u": list(self.u), "mu": [list(g) for g in self.mu]}

    @classmethod
    def from_dict(cls, d: dict) -> "BranchIndex":
        return cls(tuple(d.get("u", ())), tuple(tuple(g) for g in d.get("mu", ())))

    def flat(self) -> tuple:
        return self.u + tuple(x for g in self.mu for x in g)


@dataclass(frozen=True)
class SqrtBranch:
    index: BranchIndex
    rja: np.ndarray
    representative: np.ndarray
    dimension: int
    residual: float
    note: str = field(default="component count not stated for general branches")


def _require_roots(profile: SpectralProfile):
    if not has_real_sqrt(profile):
        raise ExistenceViolated("negative eigenvalue of odd multiplicity: no real square root")


def build_rja(profile: SpectralProfile, index: BranchIndex) -> np.ndarray:
    """Auxiliary form: the canonical root of ``J`` selected by ``index``."""
    _require_roots(profile)
    index.validate(profile)
    parts = []
    for i, (lam, h) in enumerate(profile.positive):
        u = index.u[i]
        parts.append(np.sqrt(lam) * np.diag([1.0] * u + [-1.0] * (h - u)))
    for l, (th, mods) in enumerate(profile.complex_groups):
        for t, (r, m) in enumerate(mods):
            mu = index.mu[l][t]
            blocks = [rotation_block(th / 2)] * mu + [rotation_block(th / 2 - np.pi)] * (m - mu)
            parts.append(np.sqrt(r) * direct_sum(blocks))
    for zeta, mult in profile.negative:
        parts.append(np.sqrt(zeta) * direct_sum([J2] * (mult // 2)))
    return direct_sum(parts)


def enumerate_branches(profile: SpectralProfile) -> list[BranchIndex]:
    """All branch indices, descending lexicographic (principal branch first)."""
    _require_roots(profile)
    ranges = [range(h, -1, -1) for h in profile.h]
    ranges += [range(m, -1, -1) for g in profile.m for m in g]
    shape = [len(g) for g in profile.m]
    out = []
    for combo in itertools.product(*ranges):
        u, rest = combo[:profile.p], combo[profile.p:]
        mu, i = [], 0
        for s in shape:
            mu.append(tuple(rest[i:i + s]))
            i += s
        out.append(BranchIndex(tuple(u), tuple(mu)))
    return out


def dimension_of(profile: SpectralProfile, index: BranchIndex) -> int:
    """``2 [sum u v + 2 sum mu nu + sum k^2]``.

    The complex term is ``mu (m - mu)``, the codimension count of the complex Grassmannian
    ``GL_m(C) / (GL_mu(C) x GL_nu(C))``. A printed variant ``m (mu - mu)`` vanishes identically and
    disagrees with the tangent-rank oracle, so it is not used.
    """
    _require_roots(profile)
    index.validate(profile)
    pos = sum(u * (h - u) for u, h in zip(index.u, profile.h))
    cplx = sum(a * (b - a) for ga, gb in zip(index.mu, profile.m) for a, b in zip(ga, gb))
    neg = sum(k * k for k in profile.k)
    return 2 * (pos + 2 * cplx + neg)


def root_residual(M, Y) -> float:
    return float(np.linalg.norm(Y @ Y - M))


def _checked(dec: RjsDecomposition, Y, tol: Tolerances) -> float:
    res = root_residual(dec.M, Y)
    if not res <= tol.resid_abs(dec.M):
        raise ResidualTooLarge(f"||Y^2 - M||_F = {res:.3e} exceeds {tol.resid_abs(dec.M):.3e}")
    return res


def representative(dec: RjsDecomposition, index: BranchIndex, tol: Tolerances = DEFAULT_TOL) -> SqrtBranch:
    """The branch point ``C Jt C^{-1}``."""
    rja = build_rja(dec.profile, index)
    Y = dec.conj(rja)
    res = _checked(dec, Y, tol)
    return SqrtBranch(index, rja, Y, dimension_of(dec.profile, index), res)


def _gaussian_block(rng, size, complex_=False, det_sign=None):
    while True:
        G = rng.standard_normal((size, size))
        if complex_:
            G = G + 1j * rng.standard_normal((size, size))
        if det_sign is not None and np.sign(np.linalg.det(G)) != det_sign:
            G[:, 0] = -G[:, 0]
        if np.linalg.cond(G) <= MAX_SAMPLE_COND:
            return G


def sample_centralizer(profile: SpectralProfile, seed, component=None) -> np.ndarray:
    """Random invertible block-diagonal matrix commuting with ``J``.

    ``component`` optionally fixes ``sign(det)`` of each negative-cluster block
    (one ``+1``/``-1`` per negative cluster), which selects the connected
    component of the branch.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if component is not None and len(component) != profile.q:
        raise ValueError(f"component needs {profile.q} signs, got {len(component)}")
    parts = []
    neg_i = 0
    for b in profile.blocks():
        if b.kind == "cplx":
            parts.append(rho(_gaussian_block(rng, b.mult, complex_=True)))
        elif b.kind == "neg":
            sign = None if component is None else component[neg_i]
            parts.append(_gaussian_block(rng, b.mult, det_sign=sign))
            neg_i += 1
        else:
            parts.append(_gaussian_block(rng, b.mult))
    return direct_sum(parts)


def branch_seed(seed: int, index: BranchIndex) -> np.random.Generator:
    """Per-branch generator derived from a base seed and the branch index."""
    return np.random.default_rng([int(seed), len(index.flat()), *index.flat()])


def sample_branch(dec: RjsDecomposition, index: BranchIndex, seed, tol: Tolerances = DEFAULT_TOL,
                  component=None) -> np.ndarray:
    """A random point ``C X Jt X^{-1} C^{-1}`` of the branch."""
    rja = build_rja(dec.profile, index)
    X = sample_centralizer(dec.profile, seed, component)
    Z = np.linalg.solve(X.T, (X @ rja).T).T
    Y = dec.conj(Z)
    _checked(dec, Y, tol)
    return Y


def expected_root_spectrum(profile: SpectralProfile, index: BranchIndex) -> list[tuple[complex, int]]:
    """Eigenvalues (with multiplicity) every root in the branch must have."""
    index.validate(profile)
    out = []
    for (lam, h), u in zip(profile.positive, index.u):
        out += [(np.sqrt(lam), u), (-np.sqrt(lam), h - u)]
    for (th, mods), g in zip(profile.complex_groups, index.mu):
        for (r, m), mu in zip(mods, g):
            z = np.sqrt(r) * np.exp(0.5j * th)
            out += [(z, mu), (z.conjugate(), mu), (-z, m - mu), (-z.conjugate(), m - mu)]
    for zeta, mult in profile.negative:
        out += [(1j * np.sqrt(zeta), mult // 2), (-1j * np.sqrt(zeta), mult // 2)]
    return [(complex(v), k) for v, k in out if k > 0]


def is_finite(profile: SpectralProfile) -> bool:
    _require_roots(profile)
    return all(h == 1 for h in profile.h) and all(m == 1 for g in profile.m for m in g) and profile.q == 0


def count_if_finite(profile: SpectralProfile) -> int:
    """``2^((p + n) / 2)`` when every branch is a single point."""
    if not is_finite(profile):
        raise CountUndefined("square-root set is infinite")
    return 2 ** ((profile.p + profile.n) // 2)


def finite_roots(dec: RjsDecomposition, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    if not is_finite(dec.profile):
        raise CountUndefined("square-root set is infinite")
    return [representative(dec, idx, tol).representative for idx in enumerate_branches(dec.profile)]


def principal_branch_index(profile: SpectralProfile) -> BranchIndex:
    _require_roots(profile)
    return BranchIndex(tuple(profile.h), tuple(tuple(g) for g in profile.m))


def psr_component_count(profile: SpectralProfile) -> int:
    """Generalized principal roots form ``2^q`` connected components."""
    _require_roots(profile)
    return 2 ** profile.q


def is_generalized_principal(M, Y, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``Y^2 = M`` and every eigenvalue of ``Y`` has argument in ``[-pi/2, pi/2]``."""
    M, Y = as_matrix(M), as_matrix(Y)
    if root_residual(M, Y) > tol.resid_abs(M):
        return False
    return bool(np.all(eigvals(Y).real >= -tol.cluster_abs(Y)))


def complex_structure_orientation(B) -> int:
    """Orientation sign of a real matrix with ``B^2 = -zeta I``.

    Uses the real basis ``(Im w_1, Re w_1, ...)`` built from the eigenvectors
    for ``+i sqrt(zeta)``; ``E_{pi/2}`` has orientation ``+1``.
    """
    B = np.asarray(B, dtype=float)
    size = B.shape[0]
    zeta = -np.trace(B @ B) / size
    W = null_basis(B - 1j * np.sqrt(zeta) * np.eye(size), size // 2)
    cols = []
    for w in W.T:
        cols += [w.imag, w.real]
    return int(np.sign(np.linalg.det(np.column_stack(cols))))


def negative_component_label(dec: RjsDecomposition, Y) -> tuple[int, ...]:
    """One orientation sign per negative cluster; labels the ``2^q`` components."""
    Z = dec.unconj(Y)
    return tuple(complex_structure_orientation(Z[b.offset:b.offset + b.size, b.offset:b.offset + b.size])
                 for b in dec.profile.blocks() if b.kind == "neg")


def verify_fixed_point(M, Y, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``Y`` is fixed by ``X -> M X^{-1}``, i.e. ``||M Y^{-1} - Y|| <= tol * ||Y||``."""
    M, Y = as_matrix(M), as_matrix(Y)
    s = np.linalg.svd(Y, compute_uv=False)
    if s[-1] <= tol.rank * s[0]:
        raise SingularInput("candidate root is singular")
    R = np.linalg.solve(Y.T, M.T).T
    return float(np.linalg.norm(R - Y)) <= tol.resid * scale(Y)
