import json

import numpy as np
import pytest
from hypothesis import (given,
                        settings)

from nnsubspace.errors import WorkflowError
from nnsubspace.functions import (Linear,
                                  Quadratic)
from nnsubspace.propagate import (PropagationConfig,
                                  PropagationReport,
                                  run_workflow)
from nnsubspace.subspace import (NoiseModel,
                                 sample_count)
from tests.strategies import seeds
from . import strategies


@given(seeds, strategies.sigmas)
@settings(max_examples=10)
def test_basic(seed: int, sigma: float) -> None:
    function, noise_model = strategies.to_linear_problem(6, sigma)

    result = run_workflow(function, noise_model,
                          PropagationConfig(sigma,
                                            seed=seed,
                                            rs_sample_count=1000))

    assert isinstance(result, PropagationReport)
    assert result.rs_stats.sample_count == 1000
    assert result.mc_stats is None
    assert result.comparison is None


@given(seeds, strategies.sigmas)
@settings(max_examples=10)
def test_properties(seed: int, sigma: float) -> None:
    function, noise_model = strategies.to_linear_problem(6, sigma)
    config = PropagationConfig(sigma,
                               seed=seed,
                               rs_sample_count=1000)

    result = run_workflow(function, noise_model, config)

    other = run_workflow(function, noise_model, config)
    assert result.rs_stats.to_dict() == other.rs_stats.to_dict()
    assert result.is_degenerate is (sigma == 0.)
    assert result.rs_stats.std >= 0.


def test_noise_free() -> None:
    function, noise_model = strategies.to_linear_problem(6, 0.)

    result = run_workflow(function, noise_model,
                          PropagationConfig(0.,
                                            rs_sample_count=123))

    assert result.is_degenerate
    assert result.rs_stats.mean == function.value(noise_model.center)
    assert result.rs_stats.std == 0.
    assert result.rs_stats.counts.tolist() == [123]
    assert result.rs_stats.value_calls == 1
    assert result.rs_stats.gradient_calls == 0
    assert result.surface is None
    assert not result.low_confidence


def test_linear_closed_form() -> None:
    dimension = 8
    function, noise_model = strategies.to_linear_problem(dimension)
    norm = float(np.linalg.norm(function.coefficients))
    mean = function.value(noise_model.center)

    result = run_workflow(function, noise_model, PropagationConfig(1.))

    assert result.subspace.rank == 1
    assert result.subspace.has_gap
    assert np.allclose(np.abs(result.surface.coefficients),
                       [mean, norm, 0.],
                       atol=1e-8 * mean)
    assert (abs(result.rs_stats.mean - mean)
            <= 3. * norm / np.sqrt(result.rs_stats.sample_count))
    assert abs(result.rs_stats.std - norm) <= 0.05 * norm
    assert result.surface.r_squared == pytest.approx(1.)


def test_model_calls() -> None:
    dimension = 64
    function, noise_model = strategies.to_linear_problem(dimension)

    result = run_workflow(function, noise_model, PropagationConfig(1.))

    assert sample_count(10, 10, dimension) == 416
    assert result.rs_stats.evaluations == 416
    assert result.rs_stats.value_calls == 416
    assert result.rs_stats.gradient_calls == 416
    assert result.rs_stats.weighted_cost == 3 * 416
    assert len(result.samples) == result.spectrum.samples_count == 416


def test_quadratic_low_confidence() -> None:
    function = Quadratic(np.ones(4))
    noise_model = NoiseModel(np.zeros(4), 1., strategies.UNBOUNDED)

    result = run_workflow(function, noise_model,
                          PropagationConfig(1.,
                                            rs_sample_count=1000))

    assert result.subspace.rank == 1
    assert result.low_confidence


def test_report_serialization() -> None:
    function, noise_model = strategies.to_linear_problem(5)

    result = run_workflow(function, noise_model,
                          PropagationConfig(1.,
                                            rs_sample_count=1000)).to_dict()

    assert json.loads(json.dumps(result, allow_nan=False)) == result
    assert result['std_estimator'] == 'population'
    assert result['rank'] == 1
    assert result['samples_count'] == sample_count(10, 10, 5)
    assert len(result['top_eigenvalues']) == 5
    assert result['rs']['sample_count'] == 1000


def test_stage_label() -> None:
    function = Linear(np.zeros(3))
    noise_model = NoiseModel(np.full(3, 100.), 1.)

    with pytest.raises(WorkflowError,
                       match='rank selection') as error_info:
        run_workflow(function, noise_model, PropagationConfig(1.))

    assert error_info.value.stage == 'rank selection'


def test_single_feature() -> None:
    with pytest.raises(ValueError):
        run_workflow(Linear(np.ones(1)), NoiseModel(np.ones(1), 1.),
                     PropagationConfig(1.))
