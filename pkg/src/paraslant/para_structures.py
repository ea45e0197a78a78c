"""Almost para-Hermitian structure fields (g, phi) on a coordinate chart."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .errors import ChartBoundaryError, StructureError
from .neutral_linalg import TAU_ZERO, NeutralSpace, Subspace, null_space

TAU_STRUCT = 1e-8
FD_STEP = 1e-5

MatrixField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class StructureField:
    """A metric field and an endomorphism field over a chart of R^dim.

    ``phi_deriv_at(x)`` returns the array ``D`` with ``D[k] = d phi / d x^k``;
    without it every derivative of phi is taken by central differences with
    step ``h``. ``domain`` is an optional box ``(lo, hi)``.
    """

    dim: int
    metric_at: MatrixField
    phi_at: MatrixField
    phi_deriv_at: Callable[[np.ndarray], np.ndarray] | None = None
    h: float = FD_STEP
    domain: tuple[np.ndarray, np.ndarray] | None = None
    name: str = ""

    @property
    def derivative_mode(self) -> str:
        return "analytic" if self.phi_deriv_at is not None else "finite-difference"

    def space_at(self, x) -> NeutralSpace:
        return NeutralSpace(self.metric_at(np.asarray(x, dtype=float)))

    def check_stencil(self, x, h: float) -> None:
        if self.domain is None:
            return
        lo, hi = (np.asarray(b, dtype=float) for b in self.domain)
        if np.any(x - h < lo) or np.any(x + h > hi):
            raise ChartBoundaryError(f"point {x.tolist()} is within h={h:g} of the chart boundary")

    def phi_partials(self, x, h: float | None = None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.phi_deriv_at is not None:
            return np.asarray(self.phi_deriv_at(x), dtype=float)
        h = self.h if h is None else h
        self.check_stencil(x, h)
        out = np.empty((self.dim, self.dim, self.dim))
        for k in range(self.dim):
            step = np.zeros(self.dim)
            step[k] = h
            out[k] = (self.phi_at(x + step) - self.phi_at(x - step)) / (2 * h)
        return out

    def with_finite_differences(self, h: float = FD_STEP) -> "StructureField":
        return StructureField(self.dim, self.metric_at, self.phi_at, None, h, self.domain, self.name)


@dataclass(frozen=True)
class VectorField:
    """Vector field with optional analytic Jacobian ``J[i, k] = d X^i / d x^k``."""

    value: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None

    @classmethod
    def constant(cls, v) -> "VectorField":
        v = np.asarray(v, dtype=float)
        n = v.shape[0]
        return cls(lambda x: v.copy(), lambda x: np.zeros((n, n)))

    def jac(self, x, h: float = FD_STEP) -> np.ndarray:
        if self.jacobian is not None:
            return np.asarray(self.jacobian(x), dtype=float)
        n = x.shape[0]
        out = np.empty((n, n))
        for k in range(n):
            step = np.zeros(n)
            step[k] = h
            out[:, k] = (self.value(x + step) - self.value(x - step)) / (2 * h)
        return out


def coordinate_field(i: int, dim: int) -> VectorField:
    e = np.zeros(dim)
    e[i] = 1.0
    return VectorField.constant(e)


def lie_bracket(x, X: VectorField, Y: VectorField, h: float = FD_STEP) -> np.ndarray:
    """[X, Y](x) = DY X - DX Y."""
    x = np.asarray(x, dtype=float)
    return Y.jac(x, h) @ X.value(x) - X.jac(x, h) @ Y.value(x)


@dataclass(frozen=True)
class ValidationReport:
    point: np.ndarray
    residuals: dict[str, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tolerance for v in self.residuals.values()) and self.residuals["eigen_rank"] == 0

    def failing(self) -> list[str]:
        return [k for k, v in self.residuals.items() if v > self.tolerance or (k == "eigen_rank" and v != 0)]


@dataclass(frozen=True)
class IntegrabilityReport:
    nijenhuis_max: float
    involutivity_residual_plus: float
    involutivity_residual_minus: float
    sample_points: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "nijenhuis_max": self.nijenhuis_max,
            "involutivity_residual_plus": self.involutivity_residual_plus,
            "involutivity_residual_minus": self.involutivity_residual_minus,
            "n_points": len(self.sample_points),
        }


def validate_structure(s: StructureField, p, tau_struct: float = TAU_STRUCT) -> ValidationReport:
    """Pointwise residuals of phi^2 = Id, equal eigenspace ranks, and compatibility.

    Raises SignatureError when the metric is not neutral.
    """
    p = np.asarray(p, dtype=float)
    g = s.space_at(p).gram
    phi = np.asarray(s.phi_at(p), dtype=float)
    eye = np.eye(s.dim)
    scale = max(1.0, float(np.linalg.norm(phi, 2)))
    n_plus = null_space(phi - eye, tau_struct, scale=scale).shape[1]
    n_minus = null_space(phi + eye, tau_struct, scale=scale).shape[1]
    residuals = {
        "phi_squared": float(np.max(np.abs(phi @ phi - eye))),
        "eigen_rank": float(abs(n_plus - n_minus)),
        "compatibility": float(np.max(np.abs(phi.T @ g @ phi + g))),
    }
    return ValidationReport(p, residuals, tau_struct)


def fundamental_form(s: StructureField, p, tau_struct: float = TAU_STRUCT) -> np.ndarray:
    """Matrix of omega(X, Y) = g(phi X, Y), i.e. phi^T g."""
    p = np.asarray(p, dtype=float)
    omega = np.asarray(s.phi_at(p)).T @ np.asarray(s.metric_at(p))
    skew = float(np.max(np.abs(omega + omega.T)))
    if skew > tau_struct * max(1.0, float(np.max(np.abs(omega)))):
        raise StructureError(f"fundamental form is not skew (residual {skew:.3e})")
    return omega


def eigen_distributions(s: StructureField, p, tau_zero: float = TAU_ZERO,
                        tau_struct: float = TAU_STRUCT) -> tuple[Subspace, Subspace]:
    p = np.asarray(p, dtype=float)
    space = s.space_at(p)
    phi = np.asarray(s.phi_at(p), dtype=float)
    n = s.dim // 2
    out = []
    for eps in (1.0, -1.0):
        basis = null_space(phi - eps * np.eye(s.dim), tau_zero)
        if basis.shape[1] != n:
            raise StructureError(f"eigenspace for {eps:+g} has dimension {basis.shape[1]}, expected {n}")
        gram = basis.T @ space.gram @ basis
        if np.max(np.abs(gram)) > tau_struct * max(1.0, float(np.linalg.norm(space.gram, 2))):
            raise StructureError(f"eigenspace for {eps:+g} is not totally isotropic")
        out.append(Subspace(space, basis))
    return out[0], out[1]


def nijenhuis(s: StructureField, p, X: VectorField, Y: VectorField, h: float | None = None) -> np.ndarray:
    """[phi, phi](X, Y) = [X,Y] + [phi X, phi Y] - phi([phi X, Y] + [X, phi Y]) at p."""
    p = np.asarray(p, dtype=float)
    h = s.h if h is None else h
    if X.jacobian is None or Y.jacobian is None:
        s.check_stencil(p, h)
    phi = np.asarray(s.phi_at(p), dtype=float)
    dphi = s.phi_partials(p, h)

    def jet(vf):
        return vf.value(p), vf.jac(p, h)

    def apply_phi(j):
        v, jac = j
        return phi @ v, np.einsum("kij,j->ik", dphi, v) + phi @ jac

    def br(a, b):
        return b[1] @ a[0] - a[1] @ b[0]

    x, y = jet(X), jet(Y)
    px, py = apply_phi(x), apply_phi(y)
    return br(x, y) + br(px, py) - phi @ (br(px, y) + br(x, py))


def _involutivity_residual(s: StructureField, p, eps: float, h: float, tau_zero: float) -> float:
    # frame E_i(x) = P(x) b_i with P = (Id + eps*phi)/2 the projector onto V^eps
    phi = np.asarray(s.phi_at(p), dtype=float)
    dphi = s.phi_partials(p, h)
    eye = np.eye(s.dim)
    basis = null_space(phi - eps * eye, tau_zero)
    resid = 0.0
    jacs = [0.5 * eps * np.einsum("kij,j->ik", dphi, b) for b in basis.T]
    for i, j in combinations(range(basis.shape[1]), 2):
        bracket = jacs[j] @ basis[:, i] - jacs[i] @ basis[:, j]
        outside = 0.5 * (eye - eps * phi) @ bracket
        resid = max(resid, float(np.linalg.norm(outside)))
    return resid


def integrability_report(
    s: StructureField,
    points: Sequence,
    pairs: Sequence[tuple[VectorField, VectorField]] | None = None,
    random_pairs: int = 0,
    seed: int = 0,
    tau_zero: float = TAU_ZERO,
) -> IntegrabilityReport:
    """Sampled Nijenhuis norm and involutivity residuals of both eigen-distributions.

    Vector pairs default to all coordinate pairs; ``random_pairs`` adds
    constant-coefficient pairs drawn from a seeded generator.
    """
    if pairs is None:
        pairs = [(coordinate_field(i, s.dim), coordinate_field(j, s.dim))
                 for i, j in combinations(range(s.dim), 2)]
    pairs = list(pairs)
    rng = np.random.default_rng(seed)
    for _ in range(random_pairs):
        pairs.append((VectorField.constant(rng.standard_normal(s.dim)),
                      VectorField.constant(rng.standard_normal(s.dim))))
    nij = inv_plus = inv_minus = 0.0
    pts = [np.asarray(p, dtype=float) for p in points]
    for p in pts:
        for X, Y in pairs:
            nij = max(nij, float(np.linalg.norm(nijenhuis(s, p, X, Y))))
        inv_plus = max(inv_plus, _involutivity_residual(s, p, 1.0, s.h, tau_zero))
        inv_minus = max(inv_minus, _involutivity_residual(s, p, -1.0, s.h, tau_zero))
    return IntegrabilityReport(nij, inv_plus, inv_minus, pts)
