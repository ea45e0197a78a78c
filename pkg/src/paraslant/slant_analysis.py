"""Pointwise slant analysis of immersions into almost para-Hermitian spaces.

Surfaces in 4-dimensional ambients get the full treatment (slant factor,
canonical frames, case classification); :func:`slant_split` handles
immersions of any even dimension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import (
    GeometryError,
    HullConstructionError,
    NearUnitSlantError,
    NotSlantError,
    SignatureError,
    SingularTangentError,
    StructureError,
    TotallyRealError,
)
from .neutral_linalg import (
    TAU_ZERO,
    NeutralSpace,
    Subspace,
    null_space,
    orthogonal_complement,
    regular_hull,
    signature,
    subspace_distance,
)
from .para_structures import TAU_STRUCT, StructureField

TAU_SLANT = 1e-6
TAU_UNIT = 1e-6

ETA = np.diag([1.0, -1.0, 1.0, -1.0])


class CaseTag(str, Enum):
    PHI1 = "Phi1"
    PHI2 = "Phi2"
    PHI3 = "Phi3"
    INVARIANT = "Invariant"
    ANTI_INVARIANT = "AntiInvariant"
    TOTALLY_REAL = "TotallyReal"
    NOT_SLANT = "NotSlant"

    @classmethod
    def parse(cls, name: str) -> "CaseTag":
        if isinstance(name, cls):
            return name
        for tag in cls:
            if tag.value.lower() == str(name).lower():
                return tag
        raise ValueError(f"unknown case {name!r}")


def c_lambda(lam: float) -> float:
    return float(np.sqrt(abs(lam * lam - 1.0)))


def _linear_parts(case: CaseTag) -> tuple[np.ndarray, np.ndarray]:
    """(L, C) with phi = lam * L + c_lam * C on the frame, cases Phi1/Phi2."""
    lam_part = np.zeros((4, 4))
    lam_part[1, 0] = lam_part[0, 1] = 1.0
    lam_part[3, 2] = lam_part[2, 3] = -1.0
    c_part = np.zeros((4, 4))
    if case is CaseTag.PHI1:
        c_part[2, 0] = c_part[3, 1] = 1.0
        c_part[0, 2] = c_part[1, 3] = -1.0
    else:
        c_part[3, 0] = c_part[2, 1] = c_part[1, 2] = c_part[0, 3] = 1.0
    return lam_part, c_part


def phi_frame_matrix(case: CaseTag | str, lam: float, eps: int = 1, a0: float = 0.0) -> np.ndarray:
    """Coefficients of phi on an orthonormal frame (e1+, e2-, e3+, e4-).

    Column j holds phi(e_j). Invariant/AntiInvariant use the unit-slant
    formulas with a0 = 0; TotallyReal uses the |lambda| < 1 formulas.
    """
    case = CaseTag.parse(case) if isinstance(case, str) else case
    if case in (CaseTag.INVARIANT, CaseTag.ANTI_INVARIANT):
        case, a0 = CaseTag.PHI3, 0.0
    if case is CaseTag.TOTALLY_REAL:
        case = CaseTag.PHI2
    if case in (CaseTag.PHI1, CaseTag.PHI2):
        lam_part, c_part = _linear_parts(case)
        return lam * lam_part + c_lambda(lam) * c_part
    if case is CaseTag.PHI3:
        m = np.zeros((4, 4))
        r = eps / lam
        m[:, 0] = [0, lam, a0, a0]
        m[:, 1] = [lam, 0, -r * a0, -r * a0]
        m[:, 2] = [-a0, -r * a0, 0, eps]
        m[:, 3] = [a0, r * a0, eps, 0]
        return m
    raise NotSlantError("no frame formulas for a non-slant point")


def phi_frame_dlambda(case: CaseTag | str, lam: float) -> np.ndarray:
    """Derivative of :func:`phi_frame_matrix` in lambda (cases Phi1, Phi2)."""
    case = CaseTag.parse(case) if isinstance(case, str) else case
    if case not in (CaseTag.PHI1, CaseTag.PHI2):
        raise ValueError("lambda derivative only defined for Phi1/Phi2")
    lam_part, c_part = _linear_parts(case)
    dc = lam / c_lambda(lam) if case is CaseTag.PHI1 else -lam / c_lambda(lam)
    return lam_part + dc * c_part


@dataclass(frozen=True)
class ImmersedSurface:
    """Parametrized immersion u -> x with Jacobian and optional inner structure.

    Without ``inner_metric_at`` the pullback metric is used; without
    ``inner_phi_at`` the inner structure is induced from the ambient one.
    """

    param_dim: int
    map_at: Callable[[np.ndarray], np.ndarray]
    jacobian_at: Callable[[np.ndarray], np.ndarray]
    inner_metric_at: Callable[[np.ndarray], np.ndarray] | None = None
    inner_phi_at: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""


@dataclass(frozen=True)
class NormalMap:
    matrix: np.ndarray  # columns: A f_* d_i, ambient coordinates
    kernel: Subspace
    kernel_eq14: Subspace
    kernel_distance: float
    phi_stability: float


@dataclass(frozen=True)
class SlantFactor:
    lam: float
    residual: float
    tau: float

    @property
    def is_slant(self) -> bool:
        return self.residual <= self.tau


@dataclass
class SlantPointReport:
    u: np.ndarray
    x: np.ndarray
    lam: float
    epsilon: int | None
    case_tag: CaseTag
    a0: float | None = None
    frame: np.ndarray | None = None  # columns e1+, e2-, e3+, e4-
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def frame_lambda(self) -> float:
        """Slant value used in the frame formulas (exactly +-1 on the unit branch)."""
        if self.case_tag in (CaseTag.PHI3, CaseTag.INVARIANT, CaseTag.ANTI_INVARIANT):
            return float(np.sign(self.lam))
        return self.lam


@dataclass(frozen=True)
class SlantSplit:
    H: Subspace
    H_perp: Subspace
    epsilon: int
    lam: float | None
    Q: np.ndarray
    Q_perp: np.ndarray
    residuals: dict[str, float]
    tau: float

    @property
    def is_slant(self) -> bool:
        return self.residuals["epsilon"] <= self.tau and self.residuals["lambda"] <= self.tau


# --- per-point geometry -------------------------------------------------------------


@dataclass(frozen=True)
class _Point:
    u: np.ndarray
    x: np.ndarray
    J: np.ndarray
    space: NeutralSpace
    phi: np.ndarray
    T: Subspace
    N: Subspace

    @property
    def g(self) -> np.ndarray:
        return self.space.gram

    def tangential(self, v: np.ndarray) -> np.ndarray:
        """g-orthogonal projection onto the tangent space (vector or columns)."""
        gt = self.J.T @ self.g @ self.J
        return self.J @ np.linalg.solve(gt, self.J.T @ self.g @ v)

    def normal(self, v: np.ndarray) -> np.ndarray:
        return v - self.tangential(v)

    @property
    def A(self) -> np.ndarray:
        return self.normal(self.phi @ self.J)


def _point(ambient: StructureField, surf: ImmersedSurface, u, tau_zero: float = TAU_ZERO) -> _Point:
    u = np.asarray(u, dtype=float)
    x = np.asarray(surf.map_at(u), dtype=float)
    jac = np.asarray(surf.jacobian_at(u), dtype=float)
    if jac.shape != (ambient.dim, surf.param_dim):
        raise GeometryError(f"jacobian has shape {jac.shape}, expected {(ambient.dim, surf.param_dim)}")
    space = ambient.space_at(x)
    try:
        T = Subspace(space, jac)
    except GeometryError as exc:
        raise GeometryError(f"jacobian not of full rank at u={u.tolist()}") from exc
    sig = signature(T.gram(), tau_zero)
    if sig.zero:
        raise SingularTangentError(f"singular tangent plane at u={u.tolist()}: restricted signature {tuple(sig)}")
    if sig.plus != sig.minus:
        raise SignatureError(f"tangent space at u={u.tolist()} is not neutral: signature {tuple(sig)}")
    N = orthogonal_complement(space, T)
    return _Point(u, x, jac, space, np.asarray(ambient.phi_at(x), dtype=float), T, N)


def tangent_normal_split(ambient: StructureField, surf: ImmersedSurface, u,
                         tau_zero: float = TAU_ZERO) -> tuple[Subspace, Subspace]:
    pt = _point(ambient, surf, u, tau_zero)
    return pt.T, pt.N


def _kernels(pt: _Point, tau_zero: float) -> NormalMap:
    A = pt.A
    scale = float(np.linalg.norm(pt.phi @ pt.J, 2))
    ker_c = null_space(A, tau_zero, scale=scale)
    kernel = Subspace(pt.space, pt.J @ ker_c)
    # ker A = T ∩ (phi N)^perp
    rows = (pt.g @ pt.phi @ pt.N.basis).T @ pt.J
    scale14 = float(np.linalg.norm(pt.g @ pt.phi, 2) * np.linalg.norm(pt.N.basis, 2) * np.linalg.norm(pt.J, 2))
    ker14 = Subspace(pt.space, pt.J @ null_space(rows, tau_zero, scale=scale14))
    dist = subspace_distance(kernel, ker14)
    stab = subspace_distance(pt.phi @ kernel.basis, kernel.basis) if kernel.dim else 0.0
    return NormalMap(A, kernel, ker14, dist, stab)


def normal_map(ambient: StructureField, surf: ImmersedSurface, u, tau_zero: float = TAU_ZERO) -> NormalMap:
    """Normal part of phi on the tangent space, with its kernel computed two ways."""
    return _kernels(_point(ambient, surf, u, tau_zero), tau_zero)


def induce_inner_structure(ambient: StructureField, surf: ImmersedSurface, u,
                           tau_slant: float = TAU_SLANT) -> tuple[np.ndarray, np.ndarray, float]:
    """Inner structure (g_tilde, phi_tilde, lambda) with phi_tilde = (1/lambda) tangential part of phi.

    lambda is taken nonnegative, which fixes the orientation of phi_tilde.
    """
    pt = _point(ambient, surf, u)
    gt = pt.J.T @ pt.g @ pt.J
    phit = np.linalg.solve(gt, pt.J.T @ pt.g @ pt.phi @ pt.J)
    m = surf.param_dim
    sq = phit @ phit
    mu = float(np.trace(sq)) / m
    scale = max(1.0, float(np.max(np.abs(sq))))
    if abs(mu) <= tau_slant ** 2 * scale and np.max(np.abs(sq)) <= tau_slant ** 2 * scale:
        raise TotallyRealError("totally real: inner structure not induced, supply one explicitly")
    if np.max(np.abs(sq - mu * np.eye(m))) > tau_slant * scale or mu <= 0:
        raise NotSlantError("tangential part of phi is not a multiple of a para-complex structure")
    lam = float(np.sqrt(mu))
    phi_t = phit / lam
    if np.max(np.abs(phi_t.T @ gt @ phi_t + gt)) > tau_slant * max(1.0, float(np.max(np.abs(gt)))):
        raise NotSlantError("induced inner structure is not compatible with the pullback metric")
    return gt, phi_t, lam


def _inner(ambient: StructureField, surf: ImmersedSurface, pt: _Point, tau_slant: float):
    if surf.inner_metric_at is not None:
        gt = np.asarray(surf.inner_metric_at(pt.u), dtype=float)
    else:
        gt = pt.J.T @ pt.g @ pt.J
    if surf.inner_phi_at is not None:
        return gt, np.asarray(surf.inner_phi_at(pt.u), dtype=float)
    _, phi_t, _ = induce_inner_structure(ambient, surf, pt.u, tau_slant)
    return gt, phi_t


def _inner_frame(gt: np.ndarray, phi_t: np.ndarray) -> np.ndarray:
    """Inner orthonormal frame (v1+, v2- = phi_tilde v1) as columns."""
    ev, vec = np.linalg.eigh(0.5 * (gt + gt.T))
    w = vec[:, int(np.argmax(ev))]
    w = w / np.sqrt(w @ gt @ w)
    if w[int(np.argmax(np.abs(w)))] < 0:
        w = -w
    return np.column_stack([w, phi_t @ w])


@dataclass(frozen=True)
class _SurfaceData:
    pt: _Point
    gt: np.ndarray
    phi_t: np.ndarray
    v: np.ndarray  # inner frame columns
    lam: float
    residual: float


def _surface_data(ambient, surf, u, tau_slant, tau_zero) -> _SurfaceData:
    if surf.param_dim != 2:
        raise GeometryError("surface analysis needs a 2-dimensional parameter domain")
    pt = _point(ambient, surf, u, tau_zero)
    gt, phi_t = _inner(ambient, surf, pt, tau_slant)
    v = _inner_frame(gt, phi_t)
    t = pt.tangential(pt.phi @ pt.J @ v)
    s = pt.J @ phi_t @ v
    s1 = s[:, 0]
    lam = float((t[:, 0] @ pt.g @ s1) / (s1 @ pt.g @ s1))
    residual = float(max(np.linalg.norm(t[:, i] - lam * s[:, i]) for i in range(2)))
    return _SurfaceData(pt, gt, phi_t, v, lam, residual)


def slant_factor(ambient: StructureField, surf: ImmersedSurface, u,
                 tau_slant: float = TAU_SLANT, tau_zero: float = TAU_ZERO) -> SlantFactor:
    """Slant factor from v1 with a consistency check on v2 = phi_tilde v1."""
    d = _surface_data(ambient, surf, u, tau_slant, tau_zero)
    return SlantFactor(d.lam, d.residual, tau_slant)


def _identities(d: _SurfaceData, lam: float) -> dict[str, float]:
    pt, v = d.pt, d.v
    A = pt.A
    a = A @ v
    g = pt.g
    gaa = a.T @ g @ a - (lam * lam - 1.0) * (v.T @ d.gt @ v)
    conf = A.T @ g @ A - (lam * lam - 1.0) * d.gt
    phia = 0.0
    for i in range(2):
        vi = v[:, i]
        lhs = pt.phi @ A @ (d.phi_t @ vi)
        rhs = (1.0 - lam * lam) * pt.J @ (d.phi_t @ vi) - lam * A @ vi
        phia = max(phia, float(np.linalg.norm(lhs - rhs)))
    return {"gAA": float(np.max(np.abs(gaa))), "phiA": phia, "conformal": float(np.max(np.abs(conf)))}


def verify_slant_identities(ambient: StructureField, surf: ImmersedSurface, u, lam: float,
                            tau_slant: float = TAU_SLANT) -> dict[str, float]:
    """Residuals of g(Af_*v, Af_*w) = (lam^2-1) g~(v,w) and of the phi A identity."""
    return _identities(_surface_data(ambient, surf, u, tau_slant, TAU_ZERO), lam)


def _spacelike_pair(pt: _Point, basis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (spacelike, timelike) pair spanning a neutral plane."""
    k = basis.T @ pt.g @ basis
    ev, vec = np.linalg.eigh(0.5 * (k + k.T))
    f3 = basis @ vec[:, 1]
    f4 = basis @ vec[:, 0]
    f3 = f3 / np.sqrt(f3 @ pt.g @ f3)
    f4 = f4 / np.sqrt(-(f4 @ pt.g @ f4))
    for f in (f3, f4):
        if f[int(np.argmax(np.abs(f)))] < 0:
            f *= -1
    return f3, f4


def analyze_point(
    ambient: StructureField,
    surf: ImmersedSurface,
    u,
    tau_slant: float = TAU_SLANT,
    tau_unit: float = TAU_UNIT,
    tau_zero: float = TAU_ZERO,
) -> SlantPointReport:
    """Full pointwise analysis; non-slant points come back tagged NotSlant."""
    d = _surface_data(ambient, surf, u, tau_slant, tau_zero)
    pt = d.pt
    if ambient.dim != 4:
        raise GeometryError("canonical frames need a 4-dimensional ambient space")
    nm = _kernels(pt, tau_zero)
    res = {"slant": d.residual, "kernel": nm.kernel_distance, "kernel_phi_stability": nm.phi_stability}
    if d.residual > tau_slant:
        return SlantPointReport(pt.u, pt.x, d.lam, None, CaseTag.NOT_SLANT, residuals=res)

    lam = d.lam
    e1, e2 = pt.J @ d.v[:, 0], pt.J @ d.v[:, 1]
    a = nm.matrix @ d.v
    a_scale = float(np.linalg.norm(pt.phi @ pt.J @ d.v, 2))
    eps: int | None = None
    a0 = None
    if abs(abs(lam) - 1.0) <= tau_unit:
        lam_unit = float(np.sign(lam))
        if np.max(np.linalg.norm(a, axis=0)) <= tau_slant * a_scale:
            eps = int(lam_unit)
            tag = CaseTag.INVARIANT if eps > 0 else CaseTag.ANTI_INVARIANT
            e3, _ = _spacelike_pair(pt, pt.N.basis)
            e4 = eps * pt.phi @ e3
        else:
            gram = a.T @ pt.g @ a
            if np.max(np.abs(gram)) > 1e3 * tau_slant * max(1.0, float(np.max(np.linalg.norm(a, axis=0)) ** 2)):
                raise NearUnitSlantError(
                    f"inconsistent near-unit slant at u={pt.u.tolist()}: image of A is not isotropic"
                )
            n0 = a[:, int(np.argmax(np.linalg.norm(a, axis=0)))]
            pn = pt.phi @ n0
            eps = 1 if pn @ n0 >= 0 else -1
            res["phin"] = float(np.linalg.norm(pn - eps * n0) / np.linalg.norm(n0))
            f3, f4 = _spacelike_pair(pt, pt.N.basis)
            p, q = n0 @ pt.g @ f3, -(n0 @ pt.g @ f4)
            if p * q < 0:
                f4 = -f4
            e3, e4 = f3, f4
            m = e3 - e4  # g(e3 + e4, m) = 2
            alpha = (a.T @ pt.g @ m) / 2.0
            a0 = float(alpha[0])
            res["alpha"] = float(abs(alpha[1] + (lam_unit / eps) * alpha[0]))
            tag = CaseTag.PHI3
            c = e3 + e4
            res["isotropic_image"] = float(np.max(np.abs(a - np.outer(c, alpha))))
    elif abs(lam) > 1.0:
        tag = CaseTag.PHI1
        c = c_lambda(lam)
        e3, e4 = a[:, 0] / c, a[:, 1] / c
    else:
        tag = CaseTag.TOTALLY_REAL if abs(lam) <= tau_slant else CaseTag.PHI2
        c = c_lambda(lam)
        e3, e4 = a[:, 1] / c, a[:, 0] / c
    frame = np.column_stack([e1, e2, e3, e4])
    report = SlantPointReport(pt.u, pt.x, lam, eps, tag, a0, frame, res)
    res.update(_identities(d, lam))
    res["frame"] = float(np.max(np.abs(frame.T @ pt.g @ frame - ETA)))
    res["phi_reconstruct"] = float(np.max(np.abs(reconstruct_phi(report) - pt.phi)))
    return report


def canonical_frame(ambient: StructureField, surf: ImmersedSurface, u,
                    tau_slant: float = TAU_SLANT, tau_unit: float = TAU_UNIT,
                    tau_zero: float = TAU_ZERO) -> SlantPointReport:
    report = analyze_point(ambient, surf, u, tau_slant, tau_unit, tau_zero)
    if report.case_tag is CaseTag.NOT_SLANT:
        raise NotSlantError(f"not slant at u={report.u.tolist()} (residual {report.residuals['slant']:.3e})")
    return report


def reconstruct_phi(report: SlantPointReport, tau_struct: float = TAU_STRUCT) -> np.ndarray:
    """phi in ambient coordinates from the case formulas on the report's frame."""
    if report.case_tag is CaseTag.NOT_SLANT or report.frame is None:
        raise NotSlantError("cannot reconstruct phi at a non-slant point")
    eps = report.epsilon if report.epsilon is not None else 1
    m = phi_frame_matrix(report.case_tag, report.frame_lambda, eps, report.a0 or 0.0)
    if np.max(np.abs(m @ m - np.eye(4))) > tau_struct or np.max(np.abs(m.T @ ETA @ m + ETA)) > tau_struct:
        raise StructureError("frame formulas do not define a compatible para-complex structure")
    f = report.frame
    return f @ m @ np.linalg.inv(f)


def lagrangian_residual(ambient: StructureField, surf: ImmersedSurface, u) -> float:
    """max |omega(f_* d_i, f_* d_j)|; for surfaces |(f* omega)(d1, d2)|."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(surf.map_at(u), dtype=float)
    jac = np.asarray(surf.jacobian_at(u), dtype=float)
    omega = np.asarray(ambient.phi_at(x)).T @ np.asarray(ambient.metric_at(x))
    return float(np.max(np.abs(jac.T @ omega @ jac)))


def conformal_rescale(ambient: StructureField, surf: ImmersedSurface | None,
                      factor: Callable[[np.ndarray], float]) -> tuple[StructureField, ImmersedSurface | None]:
    """Multiply the ambient metric by factor(x) > 0 and the inner metric by factor(f(u)).

    phi and phi_tilde are unchanged.
    """

    def rho(x):
        val = float(factor(np.asarray(x, dtype=float)))
        if not val > 0:
            raise GeometryError(f"conformal factor must be positive, got {val} at {np.asarray(x).tolist()}")
        return val

    def metric_at(x):
        return rho(x) * np.asarray(ambient.metric_at(x))

    new_ambient = StructureField(ambient.dim, metric_at, ambient.phi_at, ambient.phi_deriv_at,
                                 ambient.h, ambient.domain, ambient.name)
    if surf is None:
        return new_ambient, None
    inner_metric = None
    if surf.inner_metric_at is not None:
        def inner_metric(u):
            return rho(surf.map_at(u)) * np.asarray(surf.inner_metric_at(u))
    new_surf = ImmersedSurface(surf.param_dim, surf.map_at, surf.jacobian_at, inner_metric,
                               surf.inner_phi_at, surf.name)
    return new_ambient, new_surf


# --- general dimension ---------------------------------------------------------------


def _split_residuals(pt: _Point, phi_t: np.ndarray, q: np.ndarray, q_perp: np.ndarray, eps: int):
    res_eps = 0.0
    if q.shape[1]:
        t = pt.tangential(pt.phi @ pt.J @ q)
        res_eps = float(np.max(np.linalg.norm(t - eps * pt.J @ phi_t @ q, axis=0)))
    lam = None
    res_lam = 0.0
    if q_perp.shape[1]:
        t = pt.tangential(pt.phi @ pt.J @ q_perp)
        s = pt.J @ phi_t @ q_perp
        lam = float(np.sum(t * s) / np.sum(s * s))
        res_lam = float(np.max(np.linalg.norm(t - lam * s, axis=0)))
    return res_eps, lam, res_lam


def slant_split(
    ambient: StructureField,
    surf: ImmersedSurface,
    u,
    epsilon: int | None = None,
    tau_slant: float = TAU_SLANT,
    tau_zero: float = TAU_ZERO,
    rng: np.random.Generator | None = None,
) -> SlantSplit:
    """Split the tangent space into the regular hull H of ker A and its complement.

    Checks the epsilon condition on H and extracts one slant factor on
    H_perp. When ``epsilon`` is None both signs are tried and the one with
    the smaller residual wins.
    """
    pt = _point(ambient, surf, u, tau_zero)
    if surf.inner_phi_at is None:
        raise GeometryError("slant_split needs an explicit inner structure")
    phi_t = np.asarray(surf.inner_phi_at(pt.u), dtype=float)
    nm = _kernels(pt, tau_zero)
    H = regular_hull(pt.space, nm.kernel, tau_zero, within=pt.T, rng=rng)
    q, *_ = np.linalg.lstsq(pt.J, H.basis, rcond=None)
    if H.dim and np.max(np.abs(pt.J @ q - H.basis)) > 1e-8 * max(1.0, float(np.max(np.abs(H.basis)))):
        raise HullConstructionError("regular hull left the tangent space")
    m = surf.param_dim
    if H.dim:
        _, _, vh = np.linalg.svd(H.basis.T @ pt.g @ pt.J, full_matrices=True)
        q_perp = vh[H.dim:].T
    else:
        q_perp = np.eye(m)
    H_perp = Subspace(pt.space, pt.J @ q_perp) if q_perp.shape[1] else pt.space.trivial()
    candidates = [epsilon] if epsilon is not None else [1, -1]
    best = None
    for eps in candidates:
        r_eps, lam, r_lam = _split_residuals(pt, phi_t, q, q_perp, eps)
        if best is None or r_eps < best[1]:
            best = (eps, r_eps, lam, r_lam)
    eps, r_eps, lam, r_lam = best
    residuals = {
        "epsilon": r_eps,
        "lambda": r_lam,
        "Q_invariance": subspace_distance(phi_t @ q, q) if q.shape[1] else 0.0,
        "Q_perp_invariance": subspace_distance(phi_t @ q_perp, q_perp) if q_perp.shape[1] else 0.0,
        "orthogonality": float(np.max(np.abs(H.basis.T @ pt.g @ H_perp.basis), initial=0.0)),
    }
    return SlantSplit(H, H_perp, int(eps), lam, q, q_perp, residuals, tau_slant)


def uniqueness_check(a: SlantSplit, b: SlantSplit, tau: float = 1e-8) -> bool:
    """True iff both splits share the same H; requires equal epsilon and epsilon != lambda."""
    if a.epsilon != b.epsilon:
        raise ValueError("uniqueness is only claimed for equal epsilon")
    for s in (a, b):
        if s.lam is not None and abs(s.lam - s.epsilon) <= tau:
            raise ValueError("uniqueness needs epsilon != lambda")
    return subspace_distance(a.H, b.H) <= tau
