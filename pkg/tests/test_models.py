import numpy as np
import pytest
import sympy as sp

import oracles
from paraslant.errors import ModelError, StructureError
from paraslant.models import (
    block_sum_model,
    build_block_sum,
    build_example1,
    build_example2,
    build_flat_standard,
    example1_frame,
    example1_frame_partials,
)
from paraslant.neutral_linalg import signature, subspace_distance
from paraslant.para_structures import VectorField, eigen_distributions, lie_bracket, nijenhuis, validate_structure
from paraslant.slant_analysis import CaseTag, analyze_point, tangent_normal_split

E = np.eye(4)


def all_models():
    return [
        build_flat_standard(),
        build_example1(2.0, "phi1"),
        build_example1(-2.0, "phi1"),
        build_example1(0.5, "phi2"),
        build_example1(1.0, "phi3", -1, 1.0),
        build_example2(),
        build_example2("0.5 + 0.1*x1", "phi2"),
    ]


@pytest.mark.parametrize("model", all_models(), ids=lambda m: f"{m.name}-{m.case}")
def test_models_validate_at_random_points(model, rng):
    for p in rng.uniform(-1, 1, (100, 4)):
        rep = validate_structure(model.structure, p)
        assert rep.passed, rep.residuals
        assert max(rep.residuals.values()) <= 1e-8


def test_flat_standard_eigen_distributions():
    vp, _ = eigen_distributions(build_flat_standard().structure, np.zeros(4))
    assert subspace_distance(vp, vp.ambient.subspace(E[0] + E[1], E[2] + E[3])) < 1e-12


# --- Lie-group model frame ----------------------------------------------------------

def test_frame_matches_symbolic_realization(rng):
    sym = sp.Matrix.hstack(*oracles.example1_frame_sym())
    f = sp.lambdify(oracles.X, sym, "numpy")
    for p in rng.uniform(-1, 1, (5, 4)):
        np.testing.assert_allclose(example1_frame(p), np.array(f(*p), dtype=float), atol=1e-14)


def test_frame_partials_match_symbolic(rng):
    sym = sp.Matrix.hstack(*oracles.example1_frame_sym())
    parts = [sp.lambdify(oracles.X, sym.diff(x), "numpy") for x in oracles.X]
    for p in rng.uniform(-1, 1, (5, 4)):
        got = example1_frame_partials(p)
        for k in range(4):
            np.testing.assert_allclose(got[k], np.array(parts[k](*p), dtype=float), atol=1e-14)


def test_symbolic_brackets_follow_table():
    frame = oracles.example1_frame_sym()
    for (i, j), coeffs in oracles.BRACKET.items():
        want = sum((c * frame[k] for k, c in enumerate(coeffs)), sp.zeros(4, 1))
        assert sp.simplify(oracles.bracket(frame[i], frame[j]) - want) == sp.zeros(4, 1)


def frame_bracket_residuals(model, p, h=1e-5):
    fields = [VectorField(f.value) for f in model.frame_fields]  # drop analytic jacobians
    f = example1_frame(p)
    out = {}
    for (i, j), coeffs in oracles.BRACKET.items():
        out[(i, j)] = float(np.linalg.norm(lie_bracket(p, fields[i], fields[j], h) - f @ np.array(coeffs)))
    return out


def test_bracket_table_finite_differences(rng):
    model = build_example1(2.0, "phi1")
    for p in rng.uniform(-1, 1, (10, 4)):
        res = frame_bracket_residuals(model, p)
        assert max(res.values()) <= 1e-8, res


def test_metric_makes_frame_orthonormal(rng):
    m = build_example1(0.5, "phi2")
    for p in rng.uniform(-1, 1, (10, 4)):
        f = example1_frame(p)
        np.testing.assert_allclose(f.T @ m.structure.metric_at(p) @ f, np.diag([1.0, -1.0, 1.0, -1.0]), atol=1e-12)


def test_analytic_phi_derivative_matches_finite_difference(rng):
    m = build_example1(1.0, "phi3", 1, -2.5)
    fd = m.structure.with_finite_differences()
    p = rng.uniform(-1, 1, 4)
    np.testing.assert_allclose(m.structure.phi_partials(p), fd.phi_partials(p), atol=1e-7)


def test_example1_leaf_tangent_is_coordinate_plane(rng):
    m = build_example1(2.0, "phi1", leaf=(0.3, -0.6))
    for u in rng.uniform(-1, 1, (5, 2)):
        T, _ = tangent_normal_split(m.structure, m.surface, u)
        assert subspace_distance(T, T.ambient.subspace(E[0], E[1])) == 0.0
        x = m.surface.map_at(u)
        np.testing.assert_allclose(x[2:], [0.3, -0.6])


def test_example1_constant_slant_on_leaf(rng):
    m = build_example1(2.0, "phi1")
    for u in rng.uniform(-2, 2, (10, 2)):
        rep = analyze_point(m.structure, m.surface, u)
        assert rep.lam == pytest.approx(2.0, abs=1e-10) and rep.case_tag is CaseTag.PHI1


@pytest.mark.parametrize("lam, case", [(0.5, "phi1"), (1.0, "phi1"), (2.0, "phi2"), (1.0, "phi2"),
                                       (2.0, "phi3"), (1.0, "totallyreal")])
def test_example1_case_mismatch(lam, case):
    with pytest.raises(ModelError):
        build_example1(lam, case)


def test_example1_bad_epsilon():
    with pytest.raises(ModelError):
        build_example1(1.0, "phi3", epsilon=0)


# --- flat variable-slant model -------------------------------------------------------

def test_example2_round_trip(rng):
    m = build_example2()
    for u in rng.uniform(-1, 1, (10, 2)):
        rep = analyze_point(m.structure, m.surface, u)
        assert rep.lam == pytest.approx(m.lambda_at(m.surface.map_at(u)), abs=1e-12)


def test_example2_constant_lambda_matches_example1_reports(rng):
    a, b = build_example2("2"), build_example1(2.0, "phi1")
    for u in rng.uniform(-1, 1, (5, 2)):
        ra = analyze_point(a.structure, a.surface, u)
        rb = analyze_point(b.structure, b.surface, u)
        assert ra.case_tag is rb.case_tag and ra.lam == pytest.approx(rb.lam)
    p = rng.uniform(-0.5, 0.5, 4)
    for i in range(4):
        for j in range(4):
            x, y = VectorField.constant(E[i]), VectorField.constant(E[j])
            assert np.linalg.norm(nijenhuis(a.structure, p, x, y)) == 0


def test_example2_bound_violation_names_point():
    with pytest.raises(ModelError, match=r"x = \["):
        build_example2("1 + 0.5*sin(x1)", "phi1")
    with pytest.raises(ModelError):
        build_example2("0.5 + x2", "phi2")


def test_example2_sub_box_chart():
    m = build_example2("x1", "phi1", chart=([2, -1, -1, -1], [3, 1, 1, 1]))
    assert validate_structure(m.structure, np.array([2.5, 0, 0, 0])).passed
    with pytest.raises(StructureError):
        m.structure.phi_at(np.array([0.5, 0, 0, 0]))


def test_example2_rejects_unit_case():
    with pytest.raises(ModelError):
        build_example2("1", "phi3")


# --- block sums ----------------------------------------------------------------------

def test_block_sum_of_flat_models():
    f = build_flat_standard().structure
    s = build_block_sum(f, f)
    p = np.zeros(8)
    assert s.dim == 8
    assert validate_structure(s, p).passed
    assert tuple(signature(s.metric_at(p))) == (4, 4, 0)


def test_block_sum_mixed_model(rng):
    m = block_sum_model(build_flat_standard(), build_example1(2.0, "phi1"))
    for p in rng.uniform(-1, 1, (10, 8)):
        assert validate_structure(m.structure, p).passed
    assert m.structure.derivative_mode == "analytic"
    assert m.surface.param_dim == 4
