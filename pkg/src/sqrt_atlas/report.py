"""Analysis and certification reports (plain dicts, ready for JSON)."""
from __future__ import annotations

import numpy as np

from . import branches as br
from . import geometry as geo
from . import orthogonal as osr
from . import symmetric as ssr
from .errors import CertificationFailure, ExistenceViolated, IndexOutOfRange, NotSpd, NotSpecialOrthogonal
from .numkit import DEFAULT_TOL, Tolerances, as_matrix
from .oracles import denman_beavers
from .spectral import (
    classify_spectrum, has_real_sqrt, is_orthogonal, is_symmetric, rjs_decompose,
)

MODES = ("auto", "general", "symmetric", "orthogonal")
GENERAL_NOTE = "not stated for general branches"


def matrix_rows(A) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(A)]


def _tol_dict(tol: Tolerances, M) -> dict:
    return {"cluster": tol.cluster, "resid": tol.resid, "rank": tol.rank,
            "clusterAbs": tol.cluster_abs(M), "residAbs": tol.resid_abs(M)}


def detect_mode(M, profile, tol: Tolerances, mode: str = "auto") -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    spd = is_symmetric(M, tol) and not profile.complex_groups and not profile.negative
    so = is_orthogonal(M, tol) and np.linalg.det(M) > 0
    if mode == "symmetric" and not spd:
        raise NotSpd("symmetric mode needs a symmetric positive-definite matrix")
    if mode == "orthogonal" and not so:
        raise NotSpecialOrthogonal("orthogonal mode needs a special orthogonal matrix")
    if mode != "auto":
        return mode
    return "symmetric" if spd else "orthogonal" if so else "general"


def prepare(M, tol: Tolerances = DEFAULT_TOL, mode: str = "auto"):
    """Classify, check existence, decompose; returns ``(dec, mode, osr_profile)``."""
    M = as_matrix(M)
    profile = classify_spectrum(M, tol)
    if not has_real_sqrt(profile):
        raise ExistenceViolated(
            "no real square root: negative eigenvalue of odd multiplicity "
            f"(multiplicities {[k for _, k in profile.negative]})")
    mode = detect_mode(M, profile, tol, mode)
    if mode == "orthogonal":
        dec, prof = osr.osr_decompose(M, tol)
        return dec, mode, prof
    return rjs_decompose(M, tol, profile), mode, None


def _emit_root(dec, Y, tol):
    # every emitted root is re-verified
    res = br.root_residual(dec.M, Y)
    if not res <= tol.resid_abs(dec.M):
        raise CertificationFailure(f"emitted root has residual {res:.3e}")
    return matrix_rows(Y), res


def _general_section(dec, tol):
    prof = dec.profile
    principal = br.principal_branch_index(prof)
    rows = []
    for idx in br.enumerate_branches(prof):
        b = br.representative(dec, idx, tol)
        rep, res = _emit_root(dec, b.representative, tol)
        is_p = idx == principal
        # a point is one component; other non-principal counts are left open
        known = is_p or b.dimension == 0
        count = br.psr_component_count(prof) if is_p else 1
        rows.append({
            "index": idx.to_dict(),
            "dimension": b.dimension,
            "principal": is_p,
            "componentCount": count if known else None,
            "componentNote": None if known else GENERAL_NOTE,
            "representative": rep,
            "residual": res,
        })
    finite = br.is_finite(prof)
    return {
        "branchCount": len(rows),
        "finite": finite,
        "rootCount": br.count_if_finite(prof) if finite else None,
        "psrComponents": br.psr_component_count(prof),
        "branches": rows,
    }


def _symmetric_section(dec, tol):
    rows = []
    for b in ssr.enumerate_ssr_branches(dec, tol):
        rep, res = _emit_root(dec, b.representative, tol)
        rows.append({"index": b.index.to_dict(), "dimension": b.dimension,
                     "signature": list(b.signature), "componentCount": 1,
                     "representative": rep, "residual": res})
    finite = ssr.ssr_is_finite(dec.profile)
    return {"componentCount": ssr.ssr_component_count(dec.profile), "finite": finite,
            "rootCount": 2 ** dec.profile.n if finite else None, "branches": rows}


def _orthogonal_section(dec, prof, tol):
    rows = []
    for b in osr.enumerate_osr_branches(dec, prof, tol):
        rep, res = _emit_root(dec, b.representative, tol)
        rows.append({"index": b.index.to_dict(), "dimension": b.dimension, "detSign": b.det_sign,
                     "componentCount": b.component_count, "representative": rep, "residual": res})
    finite = prof.h <= 1 and prof.k <= 1 and all(m <= 1 for _, m in prof.angles)
    return {"profile": prof.to_dict(), "finite": finite,
            "rootCount": osr.finite_osr_count(prof) if finite else None, "branches": rows}


def _certify_point(dec, Y, index, expected_dim, restriction, seed, grid, tol, label, worst):
    """Fixed-point, dimension-oracle and geodesic checks at one point; updates ``worst``."""
    budget = tol.resid_abs(dec.M)
    res = br.root_residual(dec.M, Y)
    fixed = br.verify_fixed_point(dec.M, Y, tol)
    dim = geo.tangent_rank_dimension(dec, Y, restriction, tol)
    g = geo.certify_totally_geodesic(dec, Y, br.branch_seed(seed, index), grid, restriction, tol=tol)
    ok = (res <= budget and fixed and dim == expected_dim
          and g.max_residual <= budget and g.max_structure_residual <= budget)
    entry = {"at": label, "index": index.to_dict(), "restriction": restriction, "residual": res,
             "fixedPoint": fixed, "dimension": expected_dim, "oracleDimension": dim,
             "geodesicMaxResidual": g.max_residual, "geodesicStructureResidual": g.max_structure_residual,
             "passed": ok}
    score = (0 if ok else 1, max(res, g.max_residual) / budget)
    if worst[0] is None or score > worst[0]:
        worst[0], worst[1] = score, entry
    return entry


def _branch_points(dec, mode, prof, tol):
    """``(index, dimension, representative, restriction)`` for the general and specialized tables."""
    out = [(b.index, b.dimension, b.representative, "none")
           for b in (br.representative(dec, idx, tol) for idx in br.enumerate_branches(dec.profile))]
    if mode == "symmetric":
        out += [(b.index, b.dimension, b.representative, "symmetric") for b in ssr.enumerate_ssr_branches(dec, tol)]
    elif mode == "orthogonal":
        out += [(b.index, b.dimension, b.representative, "orthogonal")
                for b in osr.enumerate_osr_branches(dec, prof, tol)]
    return out


def analyze(M, tol: Tolerances = DEFAULT_TOL, seed: int = 0, mode: str = "auto") -> dict:
    M = as_matrix(M)
    dec, mode, prof = prepare(M, tol, mode)
    report = {
        "input": {"order": M.shape[0], "frobeniusNorm": float(np.linalg.norm(M)), "det": float(np.linalg.det(M))},
        "profile": dec.profile.to_dict(),
        "semisimple": True,
        "hasRealSqrt": True,
        "mode": mode,
        "rjsResidual": dec.residual,
        "general": _general_section(dec, tol),
    }
    if mode == "symmetric":
        report["symmetric"] = _symmetric_section(dec, tol)
    elif mode == "orthogonal":
        report["orthogonal"] = _orthogonal_section(dec, prof, tol)
    section = report.get(mode, report["general"])
    count = section.get("rootCount")
    report["summary"] = (f"finite: {count} roots" if count is not None
                         else f"infinite: {len(section['branches'])} branches")
    worst = [None, None]
    checks = [_certify_point(dec, Y, idx, d, r, seed, geo.DEFAULT_GRID, tol, "representative", worst)
              for idx, d, Y, r in _branch_points(dec, mode, prof, tol)]
    report["certifications"] = {
        "fixedPoint": all(c["fixedPoint"] for c in checks),
        "oracleDimension": all(c["dimension"] == c["oracleDimension"] for c in checks),
        "totallyGeodesic": all(c["passed"] for c in checks),
        "budget": tol.resid_abs(M),
    }
    report["tolerances"] = _tol_dict(tol, M)
    report["seed"] = seed
    return report


def certify(M, tol: Tolerances = DEFAULT_TOL, seed: int = 0, n_seeds: int = 3,
            grid=geo.DEFAULT_GRID, mode: str = "auto") -> dict:
    """Run every certificate on representatives and seeded samples of every branch.

    Raises :class:`CertificationFailure` (carrying the report) when any check
    exceeds its budget.
    """
    M = as_matrix(M)
    dec, mode, prof = prepare(M, tol, mode)
    # points are built without a residual gate; each check applies the budget itself
    build = Tolerances(tol.cluster, 1e300, tol.rank)
    worst = [None, None]
    checks = []
    for idx, d, Y, r in _branch_points(dec, mode, prof, build):
        checks.append(_certify_point(dec, Y, idx, d, r, seed, grid, tol, "representative", worst))
        for s in range(n_seeds):
            rng = br.branch_seed(seed + s, idx)
            if r == "none":
                Ys = br.sample_branch(dec, idx, rng, build)
            elif r == "symmetric":
                Ys = ssr.sample_ssr_branch(dec, idx.u, rng, build)
            else:
                b = next(b for b in osr.enumerate_osr_branches(dec, prof, build) if b.index == idx)
                Ys = osr.sample_osr_branch(dec, prof, b, rng, build)
            checks.append(_certify_point(dec, Ys, idx, d, r, seed + s, grid, tol, f"sample:{seed + s}", worst))
    extra = {}
    ok = all(c["passed"] for c in checks)
    if mode == "symmetric":
        root = ssr.principal_spd_sqrt(dec, build)
        ref = denman_beavers(M)
        err = float(np.linalg.norm(root - ref) / max(1.0, np.linalg.norm(ref)))
        extra["principalVsIteration"] = {"relativeError": err, "passed": err <= tol.resid}
        ok = ok and err <= tol.resid
    if mode == "orthogonal" and prof.k:
        extra["pfaffianComponents"] = _pfaffian_components(dec, prof, seed, n_seeds, build)
        ok = ok and all(p["passed"] for p in extra["pfaffianComponents"])
    report = {
        "mode": mode,
        "checks": checks,
        **extra,
        "budget": tol.resid_abs(M),
        "passed": ok,
        "worst": worst[1],
        "tolerances": _tol_dict(tol, M),
        "seed": seed,
    }
    if not ok:
        err = CertificationFailure(f"certification failed; worst offender: {worst[1]}")
        err.report = report
        raise err
    return report


def _pfaffian_components(dec, prof, seed, n_seeds, tol):
    """Per branch, sample both det-labelled components and record pfaffian signs.

    The pfaffian only applies when the roots are skew-symmetric (``M = -I``).
    """
    out = []
    skew = prof.h == 0 and not prof.angles
    for b in osr.enumerate_osr_branches(dec, prof, tol):
        entry = {"index": b.index.to_dict(), "components": {}}
        for comp in (1, -1):
            pfs = []
            for s in range(max(n_seeds, 1)):
                Y = osr.sample_osr_branch(dec, prof, b, br.branch_seed(seed + s, b.index), tol, component=comp)
                if skew:
                    pfs.append(osr.pfaffian_sign(Y, tol))
            entry["components"]["+" if comp == 1 else "-"] = {"pfaffianSigns": pfs}
        if skew:
            plus = entry["components"]["+"]["pfaffianSigns"]
            minus = entry["components"]["-"]["pfaffianSigns"]
            entry["passed"] = len(set(plus)) == 1 and len(set(minus)) == 1 and plus[0] != minus[0]
        else:
            entry["passed"] = True
        out.append(entry)
    return out


def parse_index(text: str) -> br.BranchIndex:
    """Parse ``{"u": [...], "mu": [[...], ...]}`` or the shorthand ``u=0,1;mu=1/0,2``."""
    import json

    text = text.strip()
    try:
        if text.startswith("{"):
            return br.BranchIndex.from_dict(json.loads(text))
        parts = dict(p.split("=", 1) for p in text.split(";") if p.strip())
        u = tuple(int(x) for x in parts.get("u", "").split(",") if x.strip())
        mu_text = parts.get("mu", "").strip()
        mu = tuple(tuple(int(x) for x in g.split(",") if x.strip()) for g in mu_text.split("/")) if mu_text else ()
        return br.BranchIndex(u, mu)
    except (ValueError, TypeError, AttributeError) as exc:
        raise IndexOutOfRange(f"malformed branch index {text!r}") from exc


def compute_root(M, kind: str, index: br.BranchIndex | None = None, seed: int = 0,
                 tol: Tolerances = DEFAULT_TOL, mode: str = "auto") -> tuple[np.ndarray, float]:
    """The principal root, a branch representative, or a seeded branch sample."""
    dec, mode, prof = prepare(M, tol, mode)
    if kind == "principal":
        index = br.principal_branch_index(dec.profile)
    elif index is None:
        raise IndexOutOfRange("a branch index is required")
    index.validate(dec.profile)
    if kind in ("principal", "branch"):
        Y = br.representative(dec, index, tol).representative
        if mode == "symmetric":
            Y = ssr.ssr_branch(dec, index.u, tol).representative
    elif kind == "sample":
        if mode == "symmetric":
            Y = ssr.sample_ssr_branch(dec, index.u, seed, tol)
        elif mode == "orthogonal":
            b = next(b for b in osr.enumerate_osr_branches(dec, prof, tol) if b.index == index)
            Y = osr.sample_osr_branch(dec, prof, b, seed, tol)
        else:
            Y = br.sample_branch(dec, index, seed, tol)
    else:
        raise ValueError(f"unknown root kind {kind!r}")
    _, res = _emit_root(dec, Y, tol)
    return Y, res
