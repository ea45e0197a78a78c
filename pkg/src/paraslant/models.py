"""Concrete ambient structures and surfaces.

* ``flat_standard``: R^4 with g = diag(1,-1,1,-1), phi swapping e1<->e2, e3<->e4.
* ``example1``: a left-invariant frame on R^4 with brackets
  [e1,e3]=e3, [e1,e4]=e4, [e2,e3]=-e4, [e2,e4]=e3 (others zero); the
  metric makes the frame orthonormal and phi has constant frame coefficients.
* ``example2``: flat R^4 with phi built from a variable slant field lambda(x).
* ``block_sum``: orthogonal direct sum of two structures.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from .errors import ModelError, StructureError
from .expr import ScalarField
from .para_structures import StructureField, VectorField
from .slant_analysis import (
    ETA,
    TAU_UNIT,
    CaseTag,
    ImmersedSurface,
    phi_frame_dlambda,
    phi_frame_matrix,
)

SWAP2 = np.array([[0.0, 1.0], [1.0, 0.0]])
FLAT_PHI = np.kron(np.eye(2), SWAP2)


@dataclass(frozen=True)
class Model:
    name: str
    structure: StructureField
    surface: ImmersedSurface | None = None
    case: CaseTag | None = None
    lam: float | ScalarField | None = None
    epsilon: int = 1
    a0: float = 0.0
    frame_fields: tuple[VectorField, ...] = field(default=())
    chart: tuple[np.ndarray, np.ndarray] | None = None

    def lambda_at(self, x) -> float:
        if isinstance(self.lam, ScalarField):
            return self.lam(x)
        return float(self.lam)


def leaf_surface(leaf=(0.0, 0.0), inner_phi=SWAP2, name: str = "leaf") -> ImmersedSurface:
    """The coordinate plane {x3 = c3, x4 = c4} parametrized by (u1, u2) = (x1, x2)."""
    c = np.asarray(leaf, dtype=float)
    jac = np.zeros((4, 2))
    jac[0, 0] = jac[1, 1] = 1.0
    phi_t = np.asarray(inner_phi, dtype=float)
    return ImmersedSurface(
        2,
        lambda u: np.concatenate([np.asarray(u, dtype=float), c]),
        lambda u: jac.copy(),
        None,
        lambda u: phi_t.copy(),
        name,
    )


def build_flat_standard(leaf=(0.0, 0.0)) -> Model:
    g = np.diag([1.0, -1.0, 1.0, -1.0])
    zeros = np.zeros((4, 4, 4))
    s = StructureField(4, lambda x: g.copy(), lambda x: FLAT_PHI.copy(), lambda x: zeros.copy(),
                       name="flat_standard")
    return Model("flat_standard", s, leaf_surface(leaf), CaseTag.INVARIANT, 1.0)


def _check_case(case: CaseTag, lam: float, eps: int) -> None:
    if case is CaseTag.PHI1 and not abs(lam) > 1 + TAU_UNIT:
        raise ModelError(f"case Phi1 needs |lambda| > 1, got {lam}")
    if case is CaseTag.PHI2 and not abs(lam) < 1 - TAU_UNIT:
        raise ModelError(f"case Phi2 needs |lambda| < 1, got {lam}")
    if case is CaseTag.PHI3:
        if abs(abs(lam) - 1) > TAU_UNIT:
            raise ModelError(f"case Phi3 needs |lambda| = 1, got {lam}")
        if eps not in (1, -1):
            raise ModelError(f"epsilon must be +1 or -1, got {eps}")
    if case not in (CaseTag.PHI1, CaseTag.PHI2, CaseTag.PHI3):
        raise ModelError(f"models are built for cases Phi1/Phi2/Phi3, got {case.value}")


def example1_frame(x) -> np.ndarray:
    """Columns e1..e4 at x: d1, d2, e^{x1}(cos x2 d3 - sin x2 d4), e^{x1}(sin x2 d3 + cos x2 d4)."""
    r = np.exp(x[0])
    c, s = np.cos(x[1]), np.sin(x[1])
    f = np.zeros((4, 4))
    f[0, 0] = f[1, 1] = 1.0
    f[2:, 2] = r * np.array([c, -s])
    f[2:, 3] = r * np.array([s, c])
    return f


def example1_frame_partials(x) -> np.ndarray:
    """D[k] = d F / d x^k for the frame matrix F."""
    f = example1_frame(x)
    d = np.zeros((4, 4, 4))
    d[0, :, 2:] = f[:, 2:]
    d[1, :, 2] = -f[:, 3]
    d[1, :, 3] = f[:, 2]
    return d


def build_example1(lam: float = 2.0, case: CaseTag | str = CaseTag.PHI1, epsilon: int = 1,
                   a0: float = 0.0, leaf=(0.0, 0.0)) -> Model:
    case = CaseTag.parse(case) if isinstance(case, str) else case
    lam = float(lam)
    _check_case(case, lam, epsilon)
    if case is CaseTag.PHI3:
        lam = float(np.sign(lam))
    m = phi_frame_matrix(case, lam, epsilon, a0)

    def metric_at(x):
        finv = np.linalg.inv(example1_frame(np.asarray(x, dtype=float)))
        return finv.T @ ETA @ finv

    def phi_at(x):
        f = example1_frame(np.asarray(x, dtype=float))
        return f @ m @ np.linalg.inv(f)

    def phi_deriv_at(x):
        x = np.asarray(x, dtype=float)
        f = example1_frame(x)
        finv = np.linalg.inv(f)
        phi = f @ m @ finv
        out = np.empty((4, 4, 4))
        for k, dk in enumerate(example1_frame_partials(x)):
            c = dk @ finv
            out[k] = c @ phi - phi @ c
        return out

    s = StructureField(4, metric_at, phi_at, phi_deriv_at, name="example1")
    fields = tuple(
        VectorField(
            (lambda x, j=j: example1_frame(np.asarray(x, dtype=float))[:, j]),
            (lambda x, j=j: example1_frame_partials(np.asarray(x, dtype=float))[:, :, j].T),
        )
        for j in range(4)
    )
    return Model("example1", s, leaf_surface(leaf), case, lam, epsilon, a0, fields)


def default_chart(dim: int = 4) -> tuple[np.ndarray, np.ndarray]:
    return -np.ones(dim), np.ones(dim)


def build_example2(lambda_field: str | float | ScalarField = "2 + 0.5*sin(x1)",
                   case: CaseTag | str = CaseTag.PHI1, leaf=(0.0, 0.0), chart=None,
                   samples: int = 11) -> Model:
    """Flat R^4 with phi from the Phi1 or Phi2 formulas with pointwise lambda(x)."""
    case = CaseTag.parse(case) if isinstance(case, str) else case
    if case not in (CaseTag.PHI1, CaseTag.PHI2):
        raise ModelError("example2 supports cases Phi1 and Phi2 only")
    lam = lambda_field if isinstance(lambda_field, ScalarField) else ScalarField(str(lambda_field))
    lo, hi = (np.asarray(b, dtype=float) for b in (chart or default_chart()))
    axes = [np.linspace(a, b, samples) for a, b in zip(lo, hi)]
    pts = np.array(list(product(*axes)))
    vals = lam.evaluate_many(pts)
    bad = np.abs(vals) <= 1 + TAU_UNIT if case is CaseTag.PHI1 else np.abs(vals) >= 1 - TAU_UNIT
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ModelError(f"lambda = {vals[i]:.6g} violates the {case.value} bound at x = {pts[i].tolist()}")
    g = np.diag([1.0, -1.0, 1.0, -1.0])

    def lam_checked(x):
        val = lam(x)
        if case is CaseTag.PHI1 and abs(val) <= 1 + TAU_UNIT or case is CaseTag.PHI2 and abs(val) >= 1 - TAU_UNIT:
            raise StructureError(f"lambda = {val:.6g} leaves the {case.value} range at x = {np.asarray(x).tolist()}")
        return val

    def phi_at(x):
        return phi_frame_matrix(case, lam_checked(x))

    def phi_deriv_at(x):
        dm = phi_frame_dlambda(case, lam_checked(x))
        return np.einsum("k,ij->kij", lam.gradient(x), dm)

    s = StructureField(4, lambda x: g.copy(), phi_at, phi_deriv_at, domain=(lo, hi), name="example2")
    return Model("example2", s, leaf_surface(leaf), case, lam, chart=(lo, hi))


def build_block_sum(a: StructureField, b: StructureField) -> StructureField:
    """Block-diagonal metric and phi on R^(dim a + dim b)."""
    na, nb = a.dim, b.dim
    n = na + nb

    def block(fa: Callable, fb: Callable):
        def at(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros((n, n))
            out[:na, :na] = fa(x[:na])
            out[na:, na:] = fb(x[na:])
            return out
        return at

    deriv = None
    if a.phi_deriv_at is not None and b.phi_deriv_at is not None:
        def deriv(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros((n, n, n))
            out[:na, :na, :na] = a.phi_deriv_at(x[:na])
            out[na:, na:, na:] = b.phi_deriv_at(x[na:])
            return out

    domain = None
    if a.domain is not None or b.domain is not None:
        da = a.domain or (np.full(na, -np.inf), np.full(na, np.inf))
        db = b.domain or (np.full(nb, -np.inf), np.full(nb, np.inf))
        domain = (np.concatenate([da[0], db[0]]), np.concatenate([da[1], db[1]]))
    name = f"{a.name}+{b.name}"
    return StructureField(n, block(a.metric_at, b.metric_at), block(a.phi_at, b.phi_at), deriv,
                          min(a.h, b.h), domain, name)


def product_surface(sa: ImmersedSurface, sb: ImmersedSurface, dim_a: int) -> ImmersedSurface:
    """Product immersion (u_a, u_b) -> (f_a(u_a), f_b(u_b)) with block inner structure."""
    ma, mb = sa.param_dim, sb.param_dim

    def jac(u):
        u = np.asarray(u, dtype=float)
        ja, jb = sa.jacobian_at(u[:ma]), sb.jacobian_at(u[ma:])
        out = np.zeros((ja.shape[0] + jb.shape[0], ma + mb))
        out[:dim_a, :ma] = ja
        out[dim_a:, ma:] = jb
        return out

    def blockdiag(fa, fb):
        if fa is None or fb is None:
            return None

        def at(u):
            u = np.asarray(u, dtype=float)
            out = np.zeros((ma + mb, ma + mb))
            out[:ma, :ma] = fa(u[:ma])
            out[ma:, ma:] = fb(u[ma:])
            return out
        return at

    return ImmersedSurface(
        ma + mb,
        lambda u: np.concatenate([sa.map_at(np.asarray(u)[:ma]), sb.map_at(np.asarray(u)[ma:])]),
        jac,
        blockdiag(sa.inner_metric_at, sb.inner_metric_at),
        blockdiag(sa.inner_phi_at, sb.inner_phi_at),
        f"{sa.name}x{sb.name}",
    )


def block_sum_model(ma: Model, mb: Model) -> Model:
    s = build_block_sum(ma.structure, mb.structure)
    surf = None
    if ma.surface is not None and mb.surface is not None:
        surf = product_surface(ma.surface, mb.surface, ma.structure.dim)
    return Model("block_sum", s, surf)
