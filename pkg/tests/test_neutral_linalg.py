import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from generators import flat_structure, random_phi_invariant_singular, random_subspace, well_conditioned
from paraslant.errors import GeometryError, SignatureError, SingularSubspaceError
from paraslant.neutral_linalg import (
    NeutralSpace,
    Subspace,
    intersect,
    orthogonal_complement,
    phi_commutant,
    regular_hull,
    restrict_metric,
    signature,
    singularity,
    split_singular,
    subspace_distance,
)

E = np.eye(4)
seeds = st.integers(0, 2**32 - 1)


# --- signature -----------------------------------------------------------------------

@pytest.mark.parametrize("mat, expected", [
    (np.diag([1.0, -1.0, 1.0, -1.0]), (2, 2, 0)),
    ([[0.0, 1.0], [1.0, 0.0]], (1, 1, 0)),
    ([[0.0, 0.0], [0.0, 1.0]], (1, 0, 1)),
])
def test_signature_examples(mat, expected):
    assert tuple(signature(mat)) == expected


def test_signature_rejects_asymmetric():
    with pytest.raises(GeometryError):
        signature([[0.0, 1.0], [0.5, 0.0]])


def test_signature_of_empty_matrix():
    assert tuple(signature(np.zeros((0, 0)))) == (0, 0, 0)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(0, 3), st.integers(0, 3))
def test_sylvester_law(seed, p, m, z):
    rng = np.random.default_rng(seed)
    d = np.concatenate([rng.uniform(0.5, 3, p), -rng.uniform(0.5, 3, m), np.zeros(z)])
    c = well_conditioned(rng, d.size)
    sym = c.T @ np.diag(d) @ c
    sym = 0.5 * (sym + sym.T)
    assert tuple(signature(sym)) == (p, m, z)


def test_neutral_space_rejects_non_neutral_metric():
    with pytest.raises(SignatureError):
        NeutralSpace(np.diag([1.0, 1.0, 1.0, -1.0]))
    with pytest.raises(SignatureError):
        NeutralSpace(np.diag([1.0, -1.0, 0.0]))


def test_subspace_rejects_dependent_basis(flat4):
    with pytest.raises(GeometryError):
        flat4.subspace(E[0], 2 * E[0])


# --- restrict_metric / singularity ---------------------------------------------------

def test_restrict_metric_examples(flat4):
    np.testing.assert_array_equal(restrict_metric(flat4, flat4.subspace(E[0])), [[1.0]])
    np.testing.assert_array_equal(restrict_metric(flat4, flat4.subspace(E[0] + E[1], E[2])), [[0, 0], [0, 1]])
    np.testing.assert_array_equal(restrict_metric(flat4, flat4.subspace(E[0], E[1])), np.diag([1.0, -1.0]))


def test_singularity_examples(flat4):
    i = singularity(flat4, flat4.subspace(E[0] + E[1], E[2]))
    assert subspace_distance(i, flat4.subspace(E[0] + E[1])) < 1e-12
    assert singularity(flat4, flat4.subspace(E[0], E[1])).dim == 0
    w = flat4.subspace(E[0] + E[1])
    assert subspace_distance(singularity(flat4, w), w) < 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(1, 6), st.integers(0, 3))
def test_singularity_is_w_intersect_w_perp(seed, n, k, n_iso):
    rng = np.random.default_rng(seed)
    space = NeutralSpace(np.diag([1.0, -1.0] * n))
    k = min(k, 2 * n - 1)
    w = random_subspace(rng, space, k, n_isotropic=min(n_iso, 1, k))
    i = singularity(space, w)
    direct = intersect(w, orthogonal_complement(space, w))
    assert i.dim == direct.dim
    assert subspace_distance(i, direct) < 1e-8
    assert np.max(np.abs(restrict_metric(space, i)), initial=0.0) < 1e-9


# --- orthogonal complement -----------------------------------------------------------

def test_orthogonal_complement_examples(flat4):
    c = orthogonal_complement(flat4, flat4.subspace(E[0]))
    assert subspace_distance(c, flat4.subspace(E[1], E[2], E[3])) < 1e-12
    c = orthogonal_complement(flat4, flat4.subspace(E[0] + E[1]))
    assert subspace_distance(c, flat4.subspace(E[0] + E[1], E[2], E[3])) < 1e-12
    assert orthogonal_complement(flat4, flat4.whole()).dim == 0


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 5))
def test_orthogonal_complement_dimension_and_orthogonality(seed, k):
    rng = np.random.default_rng(seed)
    space = NeutralSpace(np.diag([1.0, -1.0, 1.0, -1.0, 1.0, -1.0]))
    w = random_subspace(rng, space, k)
    c = orthogonal_complement(space, w)
    assert c.dim == 6 - k
    assert np.max(np.abs(w.basis.T @ space.gram @ c.basis)) < 1e-10


# --- split_singular / regular_hull ---------------------------------------------------

def test_split_singular_examples(flat4):
    iso, rest = split_singular(flat4, flat4.subspace(E[0] + E[1], E[2]))
    assert subspace_distance(iso, flat4.subspace(E[0] + E[1])) < 1e-12
    assert subspace_distance(rest, flat4.subspace(E[2])) < 1e-12
    iso, rest = split_singular(flat4, flat4.subspace(E[0], E[1]))
    assert iso.dim == 0 and rest.dim == 2
    w = flat4.subspace(E[0] + E[1], E[2] + E[3])
    iso, rest = split_singular(flat4, w)
    assert subspace_distance(iso, w) < 1e-12 and rest.dim == 0


def test_regular_hull_examples(flat4):
    w = flat4.subspace(E[0] + E[1])
    h = regular_hull(flat4, w)
    assert h.dim == 2
    assert h.contains(E[0] + E[1])
    assert tuple(signature(h.gram())) == (1, 1, 0)
    nonsing = flat4.subspace(E[0], E[2])
    assert regular_hull(flat4, nonsing) is nonsing
    assert regular_hull(flat4, flat4.trivial()).dim == 0


def test_regular_hull_duals_are_isotropic(flat4):
    w = flat4.subspace(E[0] + E[1], E[2] + E[3])
    h = regular_hull(flat4, w)
    d = h.basis[:, 2:]
    np.testing.assert_allclose(d.T @ flat4.gram @ d, 0, atol=1e-12)
    np.testing.assert_allclose(w.basis.T @ flat4.gram @ d, np.eye(2), atol=1e-12)


def test_regular_hull_within_container(flat4):
    t = flat4.subspace(E[0] + E[1], E[0] - E[1] + E[2])
    w = flat4.subspace(E[0] + E[1])
    h = regular_hull(flat4, w, within=t)
    assert h.dim == 2
    assert subspace_distance(h, t) < 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(1, 6), st.booleans())
def test_regular_hull_properties(seed, n, k, randomize):
    rng = np.random.default_rng(seed)
    space = NeutralSpace(np.diag([1.0, -1.0] * n))
    k = min(k, 2 * n - 1)
    w = random_subspace(rng, space, k, n_isotropic=min(k, n) if randomize else 1)
    sing = singularity(space, w)
    h = regular_hull(space, w, rng=rng if randomize else None)
    assert h.dim == w.dim + sing.dim
    assert signature(h.gram()).zero == 0
    assert all(h.contains(b, tau=1e-8) for b in w.basis.T)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 4))
def test_hull_of_phi_invariant_singular_is_neutral(seed, n):
    rng = np.random.default_rng(seed)
    space, phi, w, k, l = random_phi_invariant_singular(rng, n)
    assert subspace_distance(phi @ w.basis, w.basis) < 1e-8
    assert singularity(space, w).dim == k
    h = regular_hull(space, w)
    assert tuple(signature(h.gram())) == (k + l, k + l, 0)
    assert h.dim == w.dim + k


# --- phi_commutant -------------------------------------------------------------------

def test_phi_commutant_examples(flat4, swap_phi):
    target = flat4.subspace(E[2], E[3])
    assert subspace_distance(phi_commutant(flat4, swap_phi, flat4.subspace(E[0])), target) < 1e-12
    assert subspace_distance(phi_commutant(flat4, swap_phi, flat4.subspace(E[0], E[1])), target) < 1e-12
    assert phi_commutant(flat4, swap_phi, flat4.whole()).dim == 0


def test_phi_commutant_rejects_singular(flat4, swap_phi):
    with pytest.raises(SingularSubspaceError):
        phi_commutant(flat4, swap_phi, flat4.subspace(E[0] + E[1]))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(1, 3))
def test_phi_commutant_is_phi_invariant(seed, n, k):
    rng = np.random.default_rng(seed)
    g, phi = flat_structure(n)
    c = well_conditioned(rng, 2 * n)
    space = NeutralSpace(c.T @ g @ c)
    phi = np.linalg.inv(c) @ phi @ c
    w = random_subspace(rng, space, min(k, n))
    kk = phi_commutant(space, phi, w)
    if kk.dim:
        assert subspace_distance(phi @ kk.basis, kk.basis) < 1e-9
        assert np.max(np.abs(w.basis.T @ space.gram @ kk.basis)) < 1e-9


# --- subspace utilities --------------------------------------------------------------

def test_subspace_distance_is_basis_independent(flat4, rng):
    b = rng.standard_normal((4, 2))
    a = Subspace(flat4, b)
    assert subspace_distance(a, Subspace(flat4, b @ well_conditioned(rng, 2))) < 1e-12
    assert subspace_distance(a, flat4.subspace(E[0])) == 1.0
    assert subspace_distance(flat4.trivial(), flat4.trivial()) == 0.0


def test_intersect(flat4):
    a = flat4.subspace(E[0], E[1])
    b = flat4.subspace(E[1], E[2])
    assert subspace_distance(intersect(a, b), flat4.subspace(E[1])) < 1e-12
    assert intersect(a, flat4.subspace(E[2], E[3])).dim == 0
