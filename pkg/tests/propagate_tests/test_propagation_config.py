import json

import pytest

from nnsubspace.errors import ConfigurationError
from nnsubspace.netcore import ScoreKind
from nnsubspace.propagate import PropagationConfig


def test_defaults() -> None:
    result = PropagationConfig(1.)

    assert result.alpha == result.beta == result.gap_threshold == 10.
    assert result.r_max == 5
    assert result.degree == 2
    assert result.rs_sample_count == result.mc_sample_count == 50000
    assert result.mc_seed == result.seed + 1
    assert result.score_kind is ScoreKind.SOFTMAX_PROBABILITY


def test_score_kind_from_string() -> None:
    result = PropagationConfig(1.,
                               score_kind='logit')

    assert result.score_kind is ScoreKind.LOGIT


def test_to_dict() -> None:
    config = PropagationConfig(0.5,
                               seed=3)

    result = config.to_dict()

    assert json.loads(json.dumps(result)) == result
    assert result['mc_seed'] == 4
    assert result['score_kind'] == 'softmax_probability'


def test_with_sigma() -> None:
    config = PropagationConfig(0.5,
                               seed=3,
                               mc_seed=9,
                               score_kind=ScoreKind.LOGIT)

    result = config.with_sigma(2.)

    assert result.sigma == 2.
    assert {**result.to_dict(), 'sigma': 0.5} == config.to_dict()


@pytest.mark.parametrize('parameters',
                         [{'sigma': -1.},
                          {'sigma': 1., 'alpha': 0.},
                          {'sigma': 1., 'gap_threshold': 1.},
                          {'sigma': 1., 'r_max': 0},
                          {'sigma': 1., 'degree': 1.5},
                          {'sigma': 1., 'bins': 0},
                          {'sigma': 1., 'seed': -1},
                          {'sigma': 1., 'score_kind': 'margin'}])
def test_invalid(parameters: dict) -> None:
    with pytest.raises(ConfigurationError):
        PropagationConfig(**parameters)
