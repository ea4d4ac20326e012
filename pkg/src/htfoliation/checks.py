"""Verification predicates for foliation models.

Each check samples deterministic points, evaluates exact symbolic tensors
there, and reports the worst residual against a stated tolerance.  Residuals
of identities proved for these structures (Yang-Mills property, parallel
vertical Clifford derivatives, horizontal Einstein constants, curvature
constancy of the rescaled metric, the commutator and sectional-norm
identities) sit at rounding level when the model is built correctly; the
checks measure, they do not assume.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry as geo
from .errors import InvalidModelError, NotApplicableError
from .foliation import (FoliationModel, FrameBatch, _contract3,
                        curvature_components, j_endomorphisms,
                        nabla_t_components, ricci_horizontal,
                        torsion_components, vertical_sectional)
from .geometry import bracket, directional_derivative

#: default tolerance for purely algebraic identities on exact integer data
TOL_ALGEBRAIC = 1e-12
#: default tolerance for nested curvature pipelines
TOL_CURVATURE = 1e-9

CLASS_ORDER = ["yang-mills-only", "horizontally-parallel", "completely-parallel"]


@dataclass
class CheckReport:
    """Outcome of one verification predicate; pass iff residual <= tolerance."""

    check_name: str
    status: str
    max_residual: float
    tolerance: float
    points_tested: int
    details: dict = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name: str, residual: float, tol: float,
                      points: int, details: dict | None = None) -> "CheckReport":
        residual = float(residual)
        return cls(name, "pass" if residual <= tol else "fail",
                   residual, tol, points, details or {})

    def to_json(self) -> dict:
        return {"check": self.check_name, "status": self.status,
                "max_residual": self.max_residual, "tolerance": self.tolerance,
                "points": self.points_tested, "details": self.details}

    def __str__(self):
        return (f"{self.check_name:<28} {self.status:<5} "
                f"max_residual={self.max_residual:.3e} tol={self.tolerance:.1e}")


def frame_batch_for(model: FoliationModel, points: int, seed: int) -> FrameBatch:
    """Adapted frames over the model's deterministic sample, cached so that
    successive checks on one model share every evaluated tensor."""
    tab = model._tables.setdefault("frame_batches", {})
    key = (model.epsilon, points, seed)
    if key not in tab:
        pts = geo.sample_points(model.chart, points, seed)
        tab[key] = model.frame_batch(pts)
    return tab[key]


# ---------------------------------------------------------------------------
# structural checks


def check_foliation_axioms(model: FoliationModel, points: int = 64,
                           seed: int = 42, tol: float = TOL_CURVATURE
                           ) -> CheckReport:
    """Bundle-like and totally geodesic conditions via Lie derivatives:
    (L_Z g)(X, X') = 0 and (L_X g)(Z, Z') = 0 over spanning fields."""
    pts = geo.sample_points(model.chart, points, seed)
    cache = geo.MonomialCache(pts)
    worst = 0.0
    h_splits = [model.split(F) for F in model.horizontal_fields]
    v_splits = [model.split(Z) for Z in model.vertical_fields]

    def lie_residual(w_field, f_split, g_split):
        out = directional_derivative(w_field, model.metric_poly(f_split, g_split))
        out = out - model.metric_poly(model.split(
            bracket(w_field, f_split.total(model.ambient_dim))), g_split)
        out = out - model.metric_poly(f_split, model.split(
            bracket(w_field, g_split.total(model.ambient_dim))))
        vals = out.evaluate(pts, cache)
        return float(np.abs(vals).max()) if np.size(vals) else 0.0

    for Z in model.vertical_fields:
        for i, fi in enumerate(h_splits):
            for fj in h_splits[i:]:
                worst = max(worst, lie_residual(Z, fi, fj))
    for X in model.horizontal_fields:
        for a, za in enumerate(v_splits):
            for zb in v_splits[a:]:
                worst = max(worst, lie_residual(X, za, zb))
    return CheckReport.from_residual("foliation-axioms", worst, tol, points)


def check_h_type(model: FoliationModel, points: int = 64, seed: int = 42,
                 tol: float = TOL_CURVATURE) -> CheckReport:
    """Fit the scalar in <J_Z X, J_Z Y> = lambda ||Z||^2 <X, Y> from the frame
    J matrices; pass iff lambda = 1 within tolerance and the fit is tight."""
    fb = frame_batch_for(model, points, seed)
    J = j_endomorphisms(fb)                                # (P, m, n, n)
    S = 0.5 * (np.einsum("pakl,pbkm->pablm", J, J)
               + np.einsum("pbkl,pakm->pablm", J, J))      # sym(J_a^T J_b)
    diag_means = np.einsum("paall->pa", S) / model.n
    lam = float(diag_means.mean())
    spread = float(np.abs(diag_means - lam).max())
    target = lam * np.eye(model.m)[None, :, :, None, None] \
        * np.eye(model.n)[None, None, None, :, :]
    fit_residual = float(np.abs(S - target).max())
    worst = max(fit_residual, spread, abs(lam - 1.0))
    return CheckReport(
        "h-type", "pass" if worst <= tol else "fail", worst, tol, points,
        {"lambda": lam, "lambda_spread": spread, "fit_residual": fit_residual})


def check_yang_mills(model: FoliationModel, points: int = 64, seed: int = 42,
                     tol: float = TOL_CURVATURE) -> CheckReport:
    """Horizontal divergence of the torsion: sum_i (nabla_{x_i} T)(x_i, u)
    vanishes for every frame direction u."""
    fb = frame_batch_for(model, points, seed)
    amb = _contract3(fb, "nabla_t", model.nabla_t_entry, "h", "h", "all",
                     antisym=(1, 2))
    div = np.einsum("piiun->pun", amb)
    worst = float(np.abs(fb.components(div)).max())
    return CheckReport.from_residual("yang-mills", worst, tol, points)


def classify_torsion(model: FoliationModel, points: int = 32, seed: int = 42,
                     tol: float = TOL_CURVATURE) -> tuple[str, dict]:
    """Strongest parallelism class of the torsion measured on the sample."""
    fb = frame_batch_for(model, points, seed)
    nt_all = nabla_t_components(fb, "all")                 # (P, n+m, m, n, n)
    full = float(np.abs(nt_all).max())
    horiz = float(np.abs(nt_all[:, :model.n]).max())
    ym = check_yang_mills(model, points, seed, tol)
    details = {"full_residual": full, "horizontal_residual": horiz,
               "yang_mills_residual": ym.max_residual}
    if full <= tol:
        return "completely-parallel", details
    if horiz <= tol:
        return "horizontally-parallel", details
    return "yang-mills-only", details


def check_torsion_class(model: FoliationModel, expected: str | None = None,
                        points: int = 32, seed: int = 42,
                        tol: float = TOL_CURVATURE) -> CheckReport:
    label, details = classify_torsion(model, points, seed, tol)
    details["class"] = label
    residual = {"completely-parallel": details["full_residual"],
                "horizontally-parallel": details["horizontal_residual"],
                "yang-mills-only": details["yang_mills_residual"]}[label]
    ok = residual <= tol
    if expected is not None:
        details["expected"] = expected
        ok = ok and CLASS_ORDER.index(label) >= CLASS_ORDER.index(expected)
    return CheckReport("torsion-class", "pass" if ok else "fail",
                       residual, tol, points, details)


def check_parallel_clifford(model: FoliationModel, points: int = 32,
                            seed: int = 42, tol: float = TOL_CURVATURE
                            ) -> CheckReport:
    """Fit (nabla_{z_a} J)_{z_b} = J_psi over grade-two Clifford coefficients.

    Requires the H-type fit and horizontally parallel torsion to hold first.
    Passes when psi = -kappa z_a . z_b for a single constant kappa across
    points and vertical pairs; for m = 1 the grade-two space is trivial and
    the check degenerates to (nabla_z J)_z = 0.
    """
    ht = check_h_type(model, points, seed, tol)
    if ht.status != "pass":
        raise InvalidModelError(
            f"model is not H-type (lambda = {ht.details['lambda']:.6g})")
    fb = frame_batch_for(model, points, seed)
    nt_v = nabla_t_components(fb, "v")                     # (P, m, m, n, n)
    horiz = float(np.abs(nabla_t_components(fb, "h")).max())
    if horiz > tol:
        raise InvalidModelError(
            f"torsion is not horizontally parallel (residual {horiz:.3e})")
    n, m = model.n, model.m
    P = fb.points.shape[0]
    if m == 1:
        worst = float(np.abs(nt_v).max())
        return CheckReport("parallel-clifford",
                           "pass" if worst <= tol else "fail", worst, tol,
                           points, {"kappa": None, "psi": "zero"})

    J = j_endomorphisms(fb)
    pairs = [(c, d) for c in range(m) for d in range(c + 1, m)]
    worst_fit = 0.0
    off_blade = 0.0
    kappa_estimates = []
    for p in range(P):
        design = np.stack([(J[p, c] @ J[p, d]).ravel() for (c, d) in pairs],
                          axis=1)
        if np.linalg.matrix_rank(design, tol=1e-8) < len(pairs):
            raise InvalidModelError(
                "grade-two operator images are rank deficient; the vertical "
                "Clifford fit is not identifiable on this model")
        for a in range(m):
            for b in range(m):
                target = nt_v[p, a, b].T.ravel()   # endomorphism of (n_a J)_b
                psi, *_ = np.linalg.lstsq(design, target, rcond=None)
                worst_fit = max(worst_fit,
                                float(np.abs(design @ psi - target).max()))
                for idx, (c, d) in enumerate(pairs):
                    if a != b and (c, d) == (min(a, b), max(a, b)):
                        sign = 1.0 if a < b else -1.0
                        kappa_estimates.append(-sign * float(psi[idx]))
                    else:
                        off_blade = max(off_blade, abs(float(psi[idx])))
    kappa = float(np.mean(kappa_estimates))
    spread = float(np.abs(np.asarray(kappa_estimates) - kappa).max())
    worst = max(worst_fit, off_blade, spread)
    return CheckReport(
        "parallel-clifford", "pass" if worst <= tol else "fail", worst, tol,
        points, {"kappa": kappa, "kappa_spread": spread,
                 "fit_residual": worst_fit, "off_blade": off_blade})


@dataclass
class QuaternionicReport:
    status: str                 # quaternionic | non-quaternionic | not-applicable
    sigma_scalar: int | None    # +1 or -1 when sigma is a scalar
    dim_plus: int | None
    dim_minus: int | None
    residual: float


def detect_quaternionic(model: FoliationModel, points: int = 8, seed: int = 42,
                        tol: float = TOL_CURVATURE) -> QuaternionicReport:
    """For m = 3, classify sigma = J_1 J_2 J_3 as +/-Identity (quaternionic)
    or report the eigenspace split of the involution otherwise."""
    if model.m != 3:
        return QuaternionicReport("not-applicable", None, None, None, 0.0)
    fb = frame_batch_for(model, points, seed)
    J = j_endomorphisms(fb)
    n = model.n
    eye = np.eye(n)
    sigmas = np.einsum("pij,pjk,pkl->pil", J[:, 0], J[:, 1], J[:, 2])
    res_plus = float(np.abs(sigmas - eye).max())
    res_minus = float(np.abs(sigmas + eye).max())
    if res_plus <= tol:
        return QuaternionicReport("quaternionic", 1, n, 0, res_plus)
    if res_minus <= tol:
        return QuaternionicReport("quaternionic", -1, 0, n, res_minus)
    invol = float(np.abs(np.einsum("pij,pjk->pik", sigmas, sigmas) - eye).max())
    eigvals = np.linalg.eigvalsh(0.5 * (sigmas + np.transpose(sigmas, (0, 2, 1))))
    plus = int(np.round((eigvals > 0).sum(axis=1).mean()))
    return QuaternionicReport("non-quaternionic", None, plus, n - plus, invol)


def check_einstein(model: FoliationModel, points: int = 32, seed: int = 42,
                   tol: float = TOL_CURVATURE,
                   kappa: float | None = None) -> CheckReport:
    """Measured horizontal Ricci against the closed-form constant:
    kappa (n/4 + 2(m-1)) g_H for m >= 2, m != 3; kappa (n/2 + 4) g_H in the
    quaternionic m = 3 case; plus the involution term otherwise."""
    if model.m < 2:
        raise NotApplicableError("horizontal Einstein constants need m >= 2")
    if kappa is None:
        pc = check_parallel_clifford(model, points, seed, tol)
        if pc.status != "pass":
            raise InvalidModelError("vertical Clifford fit failed; no kappa")
        kappa = pc.details["kappa"]
    fb = frame_batch_for(model, points, seed)
    measured = ricci_horizontal(fb)                        # (P, n, n)
    n, m = model.n, model.m
    eye = np.eye(n)
    if m != 3:
        predicted = kappa * (n / 4.0 + 2.0 * (m - 1)) * eye[None]
        formula = "kappa*(n/4 + 2(m-1))"
    else:
        quat = detect_quaternionic(model, min(points, 8), seed, tol)
        if quat.status == "quaternionic":
            predicted = kappa * (n / 2.0 + 4.0) * eye[None]
            formula = "kappa*(n/2 + 4)"
        else:
            J = j_endomorphisms(fb)
            sigmas = np.einsum("pij,pjk,pkl->pil", J[:, 0], J[:, 1], J[:, 2])
            gap = quat.dim_plus - quat.dim_minus
            predicted = (kappa * (n / 4.0 + 4.0) * eye[None]
                         + (kappa / 4.0) * gap * sigmas)
            formula = "kappa*(n/4 + 4) + kappa/4*(dim+ - dim-)*sigma"
    worst = float(np.abs(measured - predicted).max())
    return CheckReport(
        "einstein-horizontal", "pass" if worst <= tol else "fail", worst, tol,
        points, {"kappa": kappa, "formula": formula,
                 "measured_constant": float(measured[0, 0, 0])})


# ---------------------------------------------------------------------------
# curvature constancy and the rescaled-metric curvature formula


def _lc_ambient(fb: FrameBatch, eps_rel: float, d1: str, d2: str, d3: str
                ) -> np.ndarray:
    model = fb.model
    total = model.epsilon * eps_rel
    entry = lambda a, b, c: model.lc_curvature_entry(total, a, b, c)
    return _contract3(fb, f"lc_curvature[{round(total, 12)}]", entry, d1, d2, d3,
                      antisym=(0, 1))


def check_curvature_constancy(model: FoliationModel, kappa: float,
                              points: int = 32, seed: int = 42,
                              tol: float = TOL_CURVATURE) -> CheckReport:
    """Vertical directions lie in the curvature constancy of the rescaled
    metric g_hat = g_H + 2 kappa g_V at level kappa/2:

        R^{g_hat}(V, X) Y = (kappa/2) (<X, Y>_hat V - <V, Y>_hat X).

    The curvature of g_hat is evaluated through the rescaled Levi-Civita
    connection nabla - T/2 + (J . + . J)/(2 eps) at eps = 1/(2 kappa); for
    sphere models the report also records how far g_hat is from the round
    metric (zero exactly when 2 kappa matches the model's vertical scale).
    """
    if kappa == 0:
        raise InvalidModelError("curvature constancy requires kappa != 0")
    eps_rel = 1.0 / (2.0 * kappa)
    fb = frame_batch_for(model, points, seed)
    lhs = _lc_ambient(fb, eps_rel, "v", "all", "all")      # (P, m, F, F, N)
    ghat = model.metric_matrices(fb.points, eps_scale=eps_rel)
    frame = fb.frame
    gxy = np.einsum("pbn,pnm,pcm->pbc", frame, ghat, frame)
    gvy = np.einsum("pan,pnm,pcm->pac", fb.z, ghat, frame)
    rhs = (kappa / 2.0) * (np.einsum("pbc,pan->pabcn", gxy, fb.z)
                           - np.einsum("pac,pbn->pabcn", gvy, frame))
    worst = float(np.abs(lhs - rhs).max())
    details = {"kappa": kappa, "rho": kappa / 2.0}
    if model.backend == "sphere":
        pts = fb.points
        round_g = np.eye(model.ambient_dim)[None] - np.einsum(
            "pn,pm->pnm", pts, pts)
        diff = np.einsum("pan,pnm,pbm->pab", frame, ghat - round_g, frame)
        details["ghat_round_residual"] = float(np.abs(diff).max())
    return CheckReport("curvature-constancy",
                       "pass" if worst <= tol else "fail", worst, tol, points,
                       details)


def check_oneill(model: FoliationModel, points: int = 32, seed: int = 42,
                 tol: float = TOL_CURVATURE,
                 eps_values: Sequence[float] = (0.25, 1.0)) -> CheckReport:
    """Two-route check of the rescaled-metric curvature with one vertical slot.

    Direct route: nested derivatives of the rescaled Levi-Civita connection.
    Closed form: -1/2 (nabla_V T)(X,Y) - 1/(2 eps) (nabla_X J)_V Y
    + 1/(4 eps) T(X, J_V Y) for horizontal X, Y; the leaf curvature
    R_V(V, X) Y when X, Y are vertical.
    """
    fb = frame_batch_for(model, points, seed)
    t_comp = torsion_components(fb)                        # (P, m, n, n)
    nt_v = nabla_t_components(fb, "v")                     # (P, m, m, n, n)
    nt_h = nabla_t_components(fb, "h")                     # (P, n, m, n, n)
    J = j_endomorphisms(fb)                                # (P, m, n, n)
    t_amb = np.einsum("pbij,pbn->pijn", t_comp, fb.z)
    # (nabla_{z_a} T)(x_i, x_j) as ambient vectors
    ntv_amb = np.einsum("pabij,pbn->paijn", nt_v, fb.z)
    # (nabla_{x_i} J)_{z_a} x_j as ambient vectors, reindexed to [p, a, i, j]
    nablaj_amb = np.einsum("piajk,pkn->piajn", nt_h, fb.x).transpose(0, 2, 1, 3, 4)
    # T(x_i, J_{z_a} x_j)
    tj_amb = np.einsum("pakj,pikn->paijn", J, t_amb)
    rv_amb = _contract3(fb, "curvature", model.curvature_entry, "v", "v", "v",
                        antisym=(0, 1))
    worst = 0.0
    for eps in eps_values:
        direct_h = _lc_ambient(fb, eps, "v", "h", "h")     # (P, m, n, n, N)
        closed_h = (-0.5 * ntv_amb
                    - (0.5 / eps) * nablaj_amb
                    + (0.25 / eps) * tj_amb)
        worst = max(worst, float(np.abs(direct_h - closed_h).max()))
        direct_v = _lc_ambient(fb, eps, "v", "v", "v")
        worst = max(worst, float(np.abs(direct_v - rv_amb).max()))
    return CheckReport.from_residual("oneill-variation", worst, tol, points,
                                     {"eps_values": list(eps_values)})


# ---------------------------------------------------------------------------
# the identity suite


def check_lemma_identities(model: FoliationModel, points: int = 32,
                           seed: int = 42, tol: float = TOL_CURVATURE,
                           kappa: float | None = None) -> list[CheckReport]:
    """Componentwise verification of the structural identities:

    * skew-symmetry of vertical Clifford derivatives,
    * the curvature decomposition R = R_H + R_V + (nabla_. T),
    * the commutator identity [R_H(X, Y), J_Z] in its covariant form, plus
      the kappa form when a structure constant is supplied,
    * the sectional-norm identity ||(nabla_Z J)_W X||^2 = <R(Z, W) W, Z>,
    * the trace helper (nabla_{J_W X} J)_W X = (nabla_X J)_W J_W X.
    """
    fb = frame_batch_for(model, points, seed)
    n, m = model.n, model.m
    reports = []

    nt_v = nabla_t_components(fb, "v")                     # (P, m, m, n, n)
    skew = float(np.abs(nt_v + nt_v.transpose(0, 2, 1, 3, 4)).max())
    reports.append(CheckReport.from_residual("nablaJ-skew", skew, tol, points))

    full = curvature_components(fb, "all", "all", "all")   # (P, F, F, F, F)
    amb_nt = _contract3(fb, "nabla_t", model.nabla_t_entry, "all", "all", "all",
                        antisym=(1, 2))
    nt_frame = fb.components(amb_nt)                       # (P, F, F, F, F)
    decomp = np.zeros_like(full)
    decomp[:, :n, :n, :n, :] = full[:, :n, :n, :n, :]
    decomp[:, n:, n:, n:, :] = full[:, n:, n:, n:, :]
    decomp += nt_frame.transpose(0, 2, 3, 1, 4)  # (nabla_W T)(U, V), W = slot 3
    reports.append(CheckReport.from_residual(
        "curvature-decomposition", float(np.abs(full - decomp).max()),
        tol, points))

    t_comp = torsion_components(fb)
    J = j_endomorphisms(fb)
    rh_endo = full[:, :n, :n, :n, :n].transpose(0, 1, 2, 4, 3)
    lhs = (np.einsum("pijkl,palu->pijaku", rh_endo, J)
           - np.einsum("pakl,pijlu->pijaku", J, rh_endo))
    mhat = nt_v.transpose(0, 1, 2, 4, 3)       # endomorphism of (nabla_a J)_b
    rhs = (np.einsum("pbij,pbaku->pijaku", t_comp, mhat)
           + np.einsum("pabij,pbku->pijaku", nt_v, J))
    reports.append(CheckReport.from_residual(
        "commutator-covariant", float(np.abs(lhs - rhs).max()), tol, points))

    if kappa is not None and m >= 2:
        rhs_k = np.zeros_like(lhs)
        for a in range(m):
            acc = np.zeros_like(lhs[:, :, :, 0])
            for b in range(m):
                if b == a:
                    continue
                jab = np.einsum("pku,pul->pkl", J[:, a], J[:, b])
                acc += (np.einsum("pji,pkl->pijkl", J[:, b], jab)
                        - np.einsum("pji,pkl->pijkl", jab, J[:, b]))
            rhs_k[:, :, :, a] = kappa * acc
        reports.append(CheckReport.from_residual(
            "commutator-kappa", float(np.abs(lhs - rhs_k).max()), tol, points,
            {"kappa": kappa}))

    sect = vertical_sectional(fb)                          # (P, m, m)
    worst_sect = 0.0
    if m >= 2:
        per_i = (nt_v ** 2).sum(axis=-1)                   # (P, m, m, n)
        target = np.broadcast_to(sect[..., None], per_i.shape)
        mask = ~np.eye(m, dtype=bool)
        worst_sect = float(np.abs((per_i - target)[:, mask]).max())
    reports.append(CheckReport.from_residual(
        "vertical-sectional-norm", worst_sect, tol, points))

    nt_h = nabla_t_components(fb, "h")                     # (P, n, m, n, n)
    lhs_e = np.einsum("paki,pkaij->paij", J, nt_h)
    rhs_e = np.einsum("pali,pialj->paij", J, nt_h)
    reports.append(CheckReport.from_residual(
        "ym-helper-trace", float(np.abs(lhs_e - rhs_e).max()), tol, points))
    return reports


def reports_to_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True)
