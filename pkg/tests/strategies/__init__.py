from .base import (dimensions,
                   finite_floats,
                   gram_matrices,
                   positive_floats,
                   seeds,
                   sizes,
                   small_sizes,
                   symmetric_matrices,
                   to_counts)
