"""Jacobi eigensolver and the exhaustive subset oracle."""

import math

import numpy as np
import pytest

from nerfcert import (
    GeneratorSpec,
    eigen_symmetric,
    exact_bounds,
    exact_bounds_all_K,
    orbit_signed_permutations,
)
from nerfcert.errors import InvalidInputError, OracleInfeasibleError
from nerfcert.oracle import write_oracle_csv


@pytest.fixture(scope="module")
def frame_4_12():
    return orbit_signed_permutations(GeneratorSpec(4, 2))


class TestEigenSymmetric:
    def test_diagonal(self):
        res = eigen_symmetric(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(res.eigenvalues, [-1.0, 2.0, 3.0])
        assert res.residual < 1e-12

    def test_identity(self):
        res = eigen_symmetric(np.eye(5))
        assert np.allclose(res.eigenvalues, 1.0)

    def test_two_by_two_closed_form(self):
        A = np.array([[2.0, 1.0], [1.0, 2.0]])
        res = eigen_symmetric(A)
        assert np.allclose(res.eigenvalues, [1.0, 3.0], atol=1e-12)

    def test_frame_operator(self, frame_4_12):
        op = frame_4_12.matrix @ frame_4_12.matrix.T
        res = eigen_symmetric(op)
        assert np.allclose(res.eigenvalues, 3.0, atol=1e-12)

    def test_invariants_random(self):
        rng = np.random.default_rng(8)
        for n in (2, 3, 5, 8):
            B = rng.normal(size=(n, n))
            A = (B + B.T) / 2.0
            res = eigen_symmetric(A)
            lam = res.eigenvalues
            assert np.all(np.diff(lam) >= 0)
            assert math.isclose(lam.sum(), np.trace(A), abs_tol=1e-10)
            assert math.isclose(
                float(np.prod(lam)), float(np.linalg.det(A)), abs_tol=1e-8
            )
            assert res.residual < 1e-8 * max(1.0, np.linalg.norm(A))

    def test_agrees_with_library_solver(self):
        rng = np.random.default_rng(13)
        B = rng.normal(size=(6, 6))
        A = B @ B.T
        ours = eigen_symmetric(A).eigenvalues
        ref = np.linalg.eigvalsh(A)
        assert np.allclose(ours, ref, atol=1e-10)

    def test_rejects_nonsymmetric(self):
        with pytest.raises(InvalidInputError):
            eigen_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(InvalidInputError):
            eigen_symmetric(np.ones((2, 3)))


class TestExactBounds:
    def test_full_frame_gives_tight_constant(self, frame_4_12):
        res = exact_bounds(frame_4_12, 12)
        assert math.isclose(res.alpha, 3.0, abs_tol=1e-12)
        assert math.isclose(res.beta, 3.0, abs_tol=1e-12)
        assert res.subsets_examined == 1

    def test_single_column(self, frame_4_12):
        # One unit vector: top eigenvalue 1, bottom 0 (rank one operator).
        res = exact_bounds(frame_4_12, 1)
        assert math.isclose(res.alpha, 0.0, abs_tol=1e-12)
        assert math.isclose(res.beta, 1.0, abs_tol=1e-12)
        assert res.subsets_examined == 12

    def test_witness_attains_bound(self, frame_4_12):
        res = exact_bounds(frame_4_12, 7)
        sub = frame_4_12.matrix[:, list(res.witness_alpha)]
        lam = np.linalg.eigvalsh(sub @ sub.T)
        assert math.isclose(lam[0], res.alpha, abs_tol=1e-10)

    def test_monotone_in_K(self, frame_4_12):
        results = exact_bounds_all_K(frame_4_12, k_min=5, k_max=9)
        alphas = np.array([r.alpha for r in results])
        betas = np.array([r.beta for r in results])
        assert np.all(np.diff(alphas) >= -1e-12)
        assert np.all(np.diff(betas) >= -1e-12)

    def test_budget_enforced(self, frame_4_12):
        with pytest.raises(OracleInfeasibleError):
            exact_bounds(frame_4_12, 6, budget=100)
        with pytest.raises(OracleInfeasibleError):
            exact_bounds_all_K(frame_4_12, budget=1000)

    def test_bad_K(self, frame_4_12):
        with pytest.raises(InvalidInputError):
            exact_bounds(frame_4_12, 0)
        with pytest.raises(InvalidInputError):
            exact_bounds(frame_4_12, 13)


class TestOracleCsv:
    def test_write(self, frame_4_12, tmp_path):
        results = exact_bounds_all_K(frame_4_12, k_min=11, k_max=12)
        path = tmp_path / "oracle.csv"
        write_oracle_csv(results, path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("K,alpha_exact,beta_exact")
        assert len(lines) == 3
        last = lines[-1].split(",")
        assert last[0] == "12"
        # Witness indices are written 1-based.
        assert last[3].split(";")[0] == "1"
