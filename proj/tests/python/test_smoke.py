"""Smoke tests for the python bindings: one worked example per subsystem."""

import math

import numpy as np
import pytest

import asymlab


def test_version_and_schema():
    assert asymlab.SCHEMA == "asymlab/1"
    assert asymlab.__version__


def test_herm_eig_diagonal():
    w, v = asymlab.herm_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert np.allclose(w, [1.0, 2.0, 3.0])
    assert np.allclose(v.conj().T @ v, np.eye(3))


def test_asymptotic_limit_of_a_contraction():
    a, report = asymlab.asymptotic_limit(np.diag([1.0, 0.5]).astype(complex))
    assert np.allclose(a, np.diag([1.0, 0.0]), atol=1e-9)
    assert report["mode"] == "MonotoneContraction"
    assert report["kernel_dim"] == 1
    assert report["residual"] <= 1e-9


def test_surrogate_reproduces_the_period_4_average():
    t = np.array([[1.0, 1j - 1.0], [0.0, 1j]])
    a, report = asymlab.asymptotic_surrogate(t, {"power_budget": 64})
    assert report["mode"] == "AlmostConvergent"
    assert np.allclose(a, np.array([[1.0, -1.0], [-1.0, 3.0]]), atol=1e-10)
    assert math.isclose(report["min_spec"], 2.0 - math.sqrt(2.0), rel_tol=1e-9)


def test_sznagy_tests_on_the_swap_unitary():
    swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    verdict = asymlab.sznagy_unitary_test(swap, {"power_budget": 64})
    assert verdict["kind"] == "SimilarToUnitary"
    assert verdict["intertwiner"]["isometry_defect"] <= 1e-10

    strict = np.diag([0.5]).astype(complex)
    assert asymlab.sznagy_isometry_test(strict, {"power_budget": 64})["kind"] == (
        "NotSimilarToIsometry"
    )


def test_classify_shift_worked_example():
    spec = {"lo": 0, "hi": 1, "core": [0.5]}
    analysis = asymlab.classify_shift(spec, table_window=4)
    assert analysis["similar_to_unitary"] is True
    assert analysis["gamma"] == 0.25
    table = {row["k"]: row["value"] for row in analysis["diag_limit"]}
    assert table[0] == 0.25
    assert table[1] == 1.0


def test_shift_matrix_truncation():
    t = asymlab.shift_matrix({"lo": 0, "hi": 0, "core": []}, window=1, boundary="cyclic")
    assert np.allclose(t.conj().T @ t, np.eye(3))


def test_sum_analysis_dip_family():
    spec = {"family": {"kind": "single_dip", "dip": "1/i", "count": 16}}
    analysis = asymlab.sum_analysis(spec)
    assert analysis["verdict"] == "NotSimilarToAnyNormal"
    assert analysis["inf_gamma"] == 0.0


def test_construct_and_verify():
    spec = {
        "atoms": [
            {"lambda": 0.25, "mult": "INF"},
            {"lambda": 1.0, "mult": "INF"},
        ]
    }
    result = asymlab.construct(spec, window=8, level_dim=2, n_max=4)
    u = result["U"]
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]))
    assert result["convergence"]["all_within_bound"] is True
    assert result["interior_contraction_defect"] == 0.0


def test_rejected_target_raises():
    spec = {"atoms": [{"lambda": 0.25, "mult": 3}, {"lambda": 1.0, "mult": "INF"}]}
    with pytest.raises(asymlab.AsymlabError, match="HypothesisViolation"):
        asymlab.validate_target(spec)


def test_class_predicates():
    nil = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    assert asymlab.class_q_predicate(nil)["is_class_q"] is False
    para = asymlab.paranormal_sampled_predicate(nil, samples=128, seed=5)
    assert para["passed"] is False
    witness = np.array(para["witness"])
    assert abs(abs(witness[1]) - 1.0) < 1e-6
