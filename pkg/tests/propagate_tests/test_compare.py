import pytest

from nnsubspace.propagate import (Comparison,
                                  OutputStats,
                                  compare)


def to_stats(mean: float,
             std: float,
             *,
             evaluations: int,
             value_calls: int,
             gradient_calls: int) -> OutputStats:
    return OutputStats(mean, std, 0., 0., [0., 1.], [evaluations],
                       evaluations, value_calls, gradient_calls)


def test_basic() -> None:
    rs = to_stats(0.9, 2.,
                  evaluations=667,
                  value_calls=667,
                  gradient_calls=667)
    mc = to_stats(1., 2.,
                  evaluations=50000,
                  value_calls=50000,
                  gradient_calls=0)

    result = compare(rs, mc)

    assert isinstance(result, Comparison)
    assert result.rel_err_mean == pytest.approx(0.1)
    assert result.rel_err_std == 0.
    assert result.cost_ratio == pytest.approx(74.96,
                                              abs=0.01)
    assert result.weighted_cost_ratio == pytest.approx(24.99,
                                                       abs=0.01)


def test_zero_reference() -> None:
    rs = to_stats(1e-13, 0.,
                  evaluations=1,
                  value_calls=1,
                  gradient_calls=0)
    mc = to_stats(0., 0.,
                  evaluations=10,
                  value_calls=10,
                  gradient_calls=0)

    result = compare(rs, mc)

    assert result.rel_err_mean == pytest.approx(0.1)
    assert result.rel_err_std == 0.


def test_weighted_cost() -> None:
    stats = to_stats(0., 1.,
                     evaluations=10,
                     value_calls=10,
                     gradient_calls=10)

    assert stats.weighted_cost == 30
    assert stats.sample_count == 10
