import numpy as np
import pytest

from src.exceptions import (
    ConfigError, DataValidationError, IndexOutOfRange, ModelNotInCandidateSet, RankDeficient, TooLarge
)
from src.models.design_core.candidates import enumerate_subsets
from src.models.design_core.design import CandidateModel, CandidateSet, DesignMatrix
from src.models.design_core.diagnostics import condition_x2_report, leverage_max, submatrix
from src.models.design_core.linalg import LeastSquaresFactor, numerical_rank


def test_design_matrix_defaults_and_read_only():
    X = DesignMatrix(np.arange(6.0).reshape(3, 2))
    assert X.column_names == ('x1', 'x2')
    assert (X.n, X.p) == (3, 2)
    with pytest.raises(ValueError):
        X.values[0, 0] = 10.0


def test_design_matrix_validation():
    with pytest.raises(DataValidationError):
        DesignMatrix([[1.0, np.nan]])
    with pytest.raises(DataValidationError):
        DesignMatrix(np.ones((2, 2)), ('a',))


def test_candidate_model_validation():
    with pytest.raises(ConfigError):
        CandidateModel(())
    with pytest.raises(ConfigError):
        CandidateModel((2, 1))
    with pytest.raises(IndexOutOfRange):
        CandidateModel((0, 1))
    with pytest.raises(ConfigError):
        CandidateModel((1,), 'identity')
    assert CandidateModel((1, 3), 'logit').label() == "{1,3}|logit"


def test_enumerate_subsets_order_and_offsets():
    candidates = enumerate_subsets(3)
    assert [M.indices for M in candidates] == [(1,), (2,), (1, 2), (3,), (1, 3), (2, 3), (1, 2, 3)]
    assert candidates.k == 12
    assert candidates.offsets.tolist() == [0, 1, 2, 4, 5, 7, 9]
    assert candidates.index_of(CandidateModel((1, 3))) == 4


def test_enumerate_subsets_filters():
    forced = enumerate_subsets(3, forced=(1,))
    assert [M.indices for M in forced] == [(1,), (1, 2), (1, 3), (1, 2, 3)]

    sized = enumerate_subsets(4, min_size=2, max_size=2)
    assert len(sized) == 6 and all(M.size == 2 for M in sized)

    linked = enumerate_subsets(2, links=['logit', 'probit'])
    assert [M.label() for M in linked][:2] == ["{1}|logit", "{1}|probit"]
    assert len(linked) == 6
    assert linked.links == {'logit', 'probit'}


def test_enumerate_subsets_errors():
    with pytest.raises(TooLarge):
        enumerate_subsets(25)
    with pytest.raises(TooLarge):
        enumerate_subsets(10, cap=100)
    with pytest.raises(ConfigError):
        enumerate_subsets(3, min_size=3, max_size=2)
    with pytest.raises(IndexOutOfRange):
        enumerate_subsets(3, forced=(4,))


def test_candidate_set_lookup_errors():
    candidates = CandidateSet((CandidateModel((1,)), CandidateModel((1, 2))))
    with pytest.raises(ModelNotInCandidateSet):
        candidates.index_of(CandidateModel((2,)))
    with pytest.raises(ConfigError):
        CandidateSet((CandidateModel((1,)), CandidateModel((1,))))
    with pytest.raises(IndexOutOfRange):
        candidates.check_bounds(1)


def test_least_squares_factor_matches_lstsq():
    rng = np.random.default_rng(0)
    xm = rng.standard_normal((30, 4))
    y = rng.standard_normal(30)
    factor = LeastSquaresFactor.from_matrix(xm)

    expected = np.linalg.lstsq(xm, y, rcond=None)[0]
    np.testing.assert_allclose(factor.solve(y), expected, atol=1e-10)
    np.testing.assert_allclose(factor.gram_inverse(), np.linalg.inv(xm.T @ xm), atol=1e-10)
    np.testing.assert_allclose(factor.coefficient_map() @ y, expected, atol=1e-10)

    hat = xm @ np.linalg.inv(xm.T @ xm) @ xm.T
    np.testing.assert_allclose(factor.hat_diagonal(), np.diag(hat), atol=1e-10)
    np.testing.assert_allclose(factor.fitted(y), hat @ y, atol=1e-10)


def test_rank_deficiency_detected():
    rng = np.random.default_rng(1)
    col = rng.standard_normal(20)
    xm = np.column_stack([col, 2.0 * col, rng.standard_normal(20)])
    assert numerical_rank(xm) == 2
    with pytest.raises(RankDeficient):
        LeastSquaresFactor.from_matrix(xm)
    with pytest.raises(RankDeficient):
        LeastSquaresFactor.from_matrix(np.ones((2, 3)))


def test_submatrix_and_leverage():
    rng = np.random.default_rng(2)
    X = DesignMatrix(rng.standard_normal((15, 3)))
    M = CandidateModel((1, 3))
    np.testing.assert_array_equal(submatrix(X, M), X.values[:, [0, 2]])

    xm = X.values[:, [0, 2]]
    hat = xm @ np.linalg.inv(xm.T @ xm) @ xm.T
    assert leverage_max(X, M) == pytest.approx(np.max(np.diag(hat)))
    with pytest.raises(IndexOutOfRange):
        submatrix(X, CandidateModel((4,)))


def test_condition_report_flags_rank_deficiency():
    rng = np.random.default_rng(4)
    col = rng.standard_normal(12)
    X = DesignMatrix(np.column_stack([col, col, rng.standard_normal(12)]))
    report = condition_x2_report(X, enumerate_subsets(3))
    assert report.rank == 2
    assert report.eigen_ratio == float('inf')
    # {1,2} and {1,2,3} contain the duplicated column
    assert report.rank_deficient_models == 2
    assert 0.0 < report.n_max_leverage <= X.n


def test_condition_report_orthonormal_design():
    q, _ = np.linalg.qr(np.random.default_rng(5).standard_normal((10, 3)))
    report = condition_x2_report(q, enumerate_subsets(3))
    assert report.rank == 3
    assert report.eigen_ratio == pytest.approx(1.0)
    assert report.rank_deficient_models == 0
