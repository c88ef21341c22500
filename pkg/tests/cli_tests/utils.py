import json
from pathlib import Path
from typing import (Any,
                    Dict,
                    Sequence)

from nnsubspace.cli import (SUCCESS_EXIT_CODE,
                            cmd_train)

DIMENSION = 16
SYNTHETIC_DATASET = {'kind': 'synthetic',
                     'dimension': DIMENSION,
                     'classes': 3,
                     'count': 600,
                     'test_count': 100,
                     'seed': 0,
                     'spread': 0.05}


def write_config(directory: Path,
                 document: Dict[str, Any],
                 name: str = 'config.json') -> str:
    path = directory / name
    path.write_text(json.dumps(document))
    return str(path)


def to_trained_document(directory: Path,
                        architecture: Sequence[int] = (8,)
                        ) -> Dict[str, Any]:
    document = {'weights': 'network.bin',
                'dataset': SYNTHETIC_DATASET,
                'architecture': list(architecture),
                'epochs': 40,
                'learning_rate': 0.3}
    assert (cmd_train(write_config(directory, document, 'train.json'))
            == SUCCESS_EXIT_CODE)
    return document


def read_json(path: Path) -> Any:
    return json.loads(path.read_text())
