from pathlib import Path

import pytest

from nnsubspace import __version__
from nnsubspace.cli import (CONFIGURATION_FAILURE_EXIT_CODE,
                            SUCCESS_EXIT_CODE,
                            main)
from .utils import (SYNTHETIC_DATASET,
                    write_config)


def test_version(capsys: pytest.CaptureFixture) -> None:
    result = main(['--version'])

    assert result == SUCCESS_EXIT_CODE
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize('argv', [[], ['train'], ['fit', '--config', 'c']])
def test_invalid_arguments(argv: list) -> None:
    assert main(argv) == CONFIGURATION_FAILURE_EXIT_CODE


def test_train(tmp_path: Path) -> None:
    path = write_config(tmp_path, {'weights': 'network.bin',
                                   'dataset': SYNTHETIC_DATASET,
                                   'epochs': 1})

    result = main(['train', '--config', path, '-v'])

    assert result == SUCCESS_EXIT_CODE
    assert (tmp_path / 'network.bin').exists()
