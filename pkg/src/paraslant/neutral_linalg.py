"""Dense linear algebra over neutral (signature (n, n)) inner-product spaces.

All rank decisions go through the SVD with a threshold ``tau`` relative to
the natural scale of the matrix at hand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GeometryError, HullConstructionError, SignatureError, SingularSubspaceError

TAU_ZERO = 1e-9
TAU_RANK = 1e-9


class SignatureTriple(NamedTuple):
    plus: int
    minus: int
    zero: int


def _sym_check(sym: np.ndarray) -> None:
    if sym.ndim != 2 or sym.shape[0] != sym.shape[1]:
        raise GeometryError(f"expected a square matrix, got shape {sym.shape}")
    scale = max(1.0, float(np.max(np.abs(sym)))) if sym.size else 1.0
    if np.max(np.abs(sym - sym.T), initial=0.0) > 64 * np.finfo(float).eps * scale:
        raise GeometryError("matrix is not symmetric")


def signature(sym, tau_zero: float = TAU_ZERO) -> SignatureTriple:
    """Count positive, negative and numerically zero eigenvalues.

    An eigenvalue counts as zero when its magnitude is at most
    ``tau_zero`` times the largest eigenvalue magnitude.
    """
    sym = np.asarray(sym, dtype=float)
    _sym_check(sym)
    if sym.size == 0:
        return SignatureTriple(0, 0, 0)
    ev = np.linalg.eigvalsh(0.5 * (sym + sym.T))
    tol = tau_zero * float(np.max(np.abs(ev)))
    plus = int(np.sum(ev > tol))
    minus = int(np.sum(ev < -tol))
    return SignatureTriple(plus, minus, len(ev) - plus - minus)


def null_space(mat, tau: float = TAU_ZERO, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space of ``mat``.

    Singular values below ``tau * scale`` are treated as zero; ``scale``
    defaults to the largest singular value.
    """
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(ncols)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    if scale is None:
        scale = float(s[0]) if s.size else 0.0
    rank = int(np.sum(s > tau * scale))
    return vh[rank:].T.copy()


def orthonormal_columns(basis, tau: float = TAU_RANK) -> np.ndarray:
    """Euclidean orthonormal basis of the column span."""
    basis = np.asarray(basis, dtype=float)
    if basis.shape[1] == 0:
        return basis.copy()
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    rank = int(np.sum(s > tau * s[0])) if s[0] > 0 else 0
    return u[:, :rank]


@dataclass(frozen=True, eq=False)
class NeutralSpace:
    """Real vector space of dimension 2n with a neutral symmetric form."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.array(self.gram, dtype=float)
        _sym_check(g)
        g = 0.5 * (g + g.T)
        dim = g.shape[0]
        if dim == 0 or dim % 2:
            raise SignatureError(f"neutral space needs positive even dimension, got {dim}")
        sig = signature(g)
        if sig != (dim // 2, dim // 2, 0):
            raise SignatureError(f"metric signature {tuple(sig)} is not neutral ({dim // 2}, {dim // 2}, 0)")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def subspace(self, *vectors) -> "Subspace":
        if len(vectors) == 0:
            return Subspace(self, np.zeros((self.dim, 0)))
        return Subspace(self, np.column_stack(vectors))

    def whole(self) -> "Subspace":
        return Subspace(self, np.eye(self.dim))

    def trivial(self) -> "Subspace":
        return Subspace(self, np.zeros((self.dim, 0)))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of linearly independent columns inside a NeutralSpace."""

    ambient: NeutralSpace
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim == 1:
            b = b[:, None]
        if b.shape[0] != self.ambient.dim:
            raise GeometryError(f"basis vectors have length {b.shape[0]}, ambient dim is {self.ambient.dim}")
        if b.shape[1] > 0:
            s = np.linalg.svd(b, compute_uv=False)
            if s[0] == 0 or s[-1] <= TAU_RANK * s[0]:
                raise GeometryError("basis is not of full column rank")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def gram(self) -> np.ndarray:
        return restrict_metric(self.ambient, self)

    def contains(self, v, tau: float = TAU_ZERO) -> bool:
        v = np.asarray(v, dtype=float)
        q = orthonormal_columns(self.basis)
        r = v - q @ (q.T @ v)
        return bool(np.linalg.norm(r) <= tau * max(1.0, np.linalg.norm(v)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient.dim})"


def _scale(space: NeutralSpace, basis: np.ndarray) -> float:
    bn = np.linalg.norm(basis, 2) if basis.size else 0.0
    return float(np.linalg.norm(space.gram, 2) * bn * bn)


def restrict_metric(space: NeutralSpace, w: Subspace) -> np.ndarray:
    b = w.basis
    k = b.T @ space.gram @ b
    return 0.5 * (k + k.T)


def singularity(space: NeutralSpace, w: Subspace, tau_zero: float = TAU_ZERO) -> Subspace:
    """Kernel of the restricted metric: all v in w with g(v, w) = 0."""
    if w.dim == 0:
        return space.trivial()
    k = restrict_metric(space, w)
    ns = null_space(k, tau_zero, scale=_scale(space, w.basis))
    return Subspace(space, w.basis @ ns)


def orthogonal_complement(space: NeutralSpace, w: Subspace) -> Subspace:
    if w.dim == 0:
        return space.whole()
    rows = w.basis.T @ space.gram
    # rows has full rank k because the ambient form is nondegenerate
    _, _, vh = np.linalg.svd(rows, full_matrices=True)
    return Subspace(space, vh[w.dim:].T)


def split_singular(space: NeutralSpace, w: Subspace, tau_zero: float = TAU_ZERO) -> tuple[Subspace, Subspace]:
    """Split w into its singularity and a nondegenerate complement in w."""
    if w.dim == 0:
        return space.trivial(), space.trivial()
    k = restrict_metric(space, w)
    ev, vec = np.linalg.eigh(k)
    tol = tau_zero * _scale(space, w.basis)
    zero = np.abs(ev) <= tol
    iso = Subspace(space, w.basis @ vec[:, zero])
    rest = Subspace(space, w.basis @ vec[:, ~zero])
    if rest.dim:
        sig = signature(restrict_metric(space, rest), tau_zero)
        if sig.zero:
            raise GeometryError("complement of the singularity is degenerate")
    return iso, rest


def regular_hull(
    space: NeutralSpace,
    w: Subspace,
    tau_zero: float = TAU_ZERO,
    within: Subspace | None = None,
    rng: np.random.Generator | None = None,
) -> Subspace:
    """Minimal nondegenerate subspace containing w.

    For each basis vector i_j of the singularity a dual vector d_j is solved
    with g(d_j, i_k) = delta_jk and g(d_j, G) = 0 for the nondegenerate part
    G; the duals are then made mutually isotropic. ``within`` restricts the
    duals to a nondegenerate container; ``rng`` adds a random component from
    the solution space, which changes the representative but not the
    isometry type.
    """
    if w.dim == 0:
        return space.trivial()
    iso, rest = split_singular(space, w, tau_zero)
    k = iso.dim
    if k == 0:
        return w
    cont = np.eye(space.dim) if within is None else within.basis
    g = space.gram
    lhs = np.vstack([iso.basis.T @ g @ cont, rest.basis.T @ g @ cont])
    rhs = np.zeros((lhs.shape[0], k))
    rhs[:k, :k] = np.eye(k)
    y, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    resid = float(np.max(np.abs(lhs @ y - rhs)))
    if not np.isfinite(resid) or resid > 1e-6:
        raise HullConstructionError(
            f"dual vector solve failed: residual {resid:.3e}, singularity dim {k}, "
            f"nondegenerate part dim {rest.dim}; tau_zero may have misclassified eigenvalues"
        )
    if rng is not None:
        free = null_space(lhs, tau_zero)
        if free.shape[1]:
            y = y + free @ rng.standard_normal((free.shape[1], k))
    d = cont @ y
    dd = d.T @ g @ d
    d = d - 0.5 * iso.basis @ dd
    hull = Subspace(space, np.column_stack([w.basis, d]))
    sig = signature(restrict_metric(space, hull), tau_zero)
    if sig.zero:
        raise HullConstructionError(f"constructed hull is degenerate, signature {tuple(sig)}")
    return hull


def phi_commutant(space: NeutralSpace, phi, w: Subspace, tau_zero: float = TAU_ZERO) -> Subspace:
    """The subspace w^perp ∩ (phi w)^perp for a nondegenerate w."""
    phi = np.asarray(phi, dtype=float)
    if w.dim and signature(restrict_metric(space, w), tau_zero).zero:
        raise SingularSubspaceError("phi_commutant needs a non-singular subspace")
    if w.dim == 0:
        return space.whole()
    rows = np.hstack([w.basis, phi @ w.basis]).T @ space.gram
    ns = null_space(rows, tau_zero)
    if ns.shape[1] == 0:
        return space.trivial()
    return Subspace(space, ns)


def subspace_distance(a: Subspace | np.ndarray, b: Subspace | np.ndarray) -> float:
    """Gap between column spans: 0 iff equal, 1 when dimensions differ."""
    qa = orthonormal_columns(a.basis if isinstance(a, Subspace) else a)
    qb = orthonormal_columns(b.basis if isinstance(b, Subspace) else b)
    if qa.shape[1] == 0 and qb.shape[1] == 0:
        return 0.0
    if qa.shape[1] != qb.shape[1]:
        return 1.0
    ra = qa - qb @ (qb.T @ qa)
    rb = qb - qa @ (qa.T @ qb)
    return float(max(np.linalg.norm(ra, 2), np.linalg.norm(rb, 2)))


def intersect(a: Subspace, b: Subspace, tau: float = TAU_ZERO) -> Subspace:
    """Intersection of two subspaces of the same space."""
    space = a.ambient
    if a.dim == 0 or b.dim == 0:
        return space.trivial()
    qa, qb = orthonormal_columns(a.basis), orthonormal_columns(b.basis)
    ns = null_space(np.hstack([qa, -qb]), tau, scale=1.0)
    if ns.shape[1] == 0:
        return space.trivial()
    return Subspace(space, orthonormal_columns(qa @ ns[: qa.shape[1]]))
