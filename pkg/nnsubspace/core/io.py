import json
import math
from typing import (Any,
                    Sequence)

import numpy as np

FLOAT_FORMAT = '%.17g'
INDEX_FORMAT = '%d'


def write_csv(path: str,
              header: Sequence[str],
              columns: Sequence[np.ndarray],
              formats: Sequence[str]) -> None:
    np.savetxt(path, np.column_stack(columns),
               fmt=list(formats),
               delimiter=',',
               header=','.join(header),
               comments='')


def write_json(path: str, document: Any) -> None:
    with open(path, 'w', encoding='utf-8') as file:
        json.dump(document, file,
                  indent=2,
                  sort_keys=True,
                  allow_nan=False)
        file.write('\n')


def to_number(value: float) -> Any:
    value = float(value)
    return value if math.isfinite(value) else None
