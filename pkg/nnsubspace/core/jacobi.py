from typing import (List,
                    Tuple)

import numpy as np

BLOCK_SIZE = 4
MAX_SWEEPS = 100

Pairs = Tuple[np.ndarray, np.ndarray]


def to_rounds(size: int) -> List[Pairs]:
    # round-robin ordering: every round rotates disjoint index pairs,
    # every sweep visits each pair exactly once
    players = list(range(size + size % 2))
    dummy = size if size % 2 else None
    half = len(players) // 2
    result = []
    for _ in range(len(players) - 1):
        rows, columns = [], []
        for offset in range(half):
            first, second = players[offset], players[-1 - offset]
            if dummy in (first, second):
                continue
            rows.append(min(first, second))
            columns.append(max(first, second))
        result.append((np.array(rows, dtype=np.intp),
                       np.array(columns, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return result


def off_diagonal_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def rotate_columns(matrices: np.ndarray,
                   rows: np.ndarray,
                   columns: np.ndarray,
                   cosines: np.ndarray,
                   sines: np.ndarray) -> None:
    cosines, sines = cosines[:, None, :], sines[:, None, :]
    left, right = matrices[:, :, rows], matrices[:, :, columns]
    matrices[:, :, rows] = cosines * left - sines * right
    matrices[:, :, columns] = sines * left + cosines * right


def rotate(matrices: np.ndarray,
           vectors: np.ndarray,
           rows: np.ndarray,
           columns: np.ndarray,
           threshold: float) -> bool:
    pivots = matrices[:, rows, columns]
    active = np.abs(pivots) > threshold
    if not active.any():
        return False
    safe_pivots = np.where(active, pivots, 1.)
    tau = ((matrices[:, columns, columns] - matrices[:, rows, rows])
           / (2. * safe_pivots))
    signs = np.where(tau < 0., -1., 1.)
    tangents = np.where(active, signs / (np.abs(tau) + np.hypot(1., tau)), 0.)
    cosines = 1. / np.sqrt(1. + tangents * tangents)
    sines = tangents * cosines
    rotate_columns(matrices, rows, columns, cosines, sines)
    rotate_columns(matrices.transpose(0, 2, 1), rows, columns, cosines, sines)
    matrices[:, rows, columns] = np.where(active, 0.,
                                          matrices[:, rows, columns])
    matrices[:, columns, rows] = np.where(active, 0.,
                                          matrices[:, columns, rows])
    rotate_columns(vectors, rows, columns, cosines, sines)
    return True


def solve(matrices: np.ndarray,
          threshold: float,
          rounds: List[Pairs]) -> Tuple[np.ndarray, int]:
    """
    Diagonalizes stacked matrices in place
    until a sweep finds no pivot above the threshold.

    Returns eigenvectors as columns and number of sweeps with rotations,
    ``-1`` when the sweeps cap is reached.
    """
    vectors = np.broadcast_to(np.eye(matrices.shape[-1]),
                              matrices.shape).copy()
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for rows, columns in rounds:
            rotated = rotate(matrices, vectors, rows, columns,
                             threshold) or rotated
        if not rotated:
            return vectors, sweep
    return vectors, -1


def diagonalize(matrix: np.ndarray,
                relative_tolerance: float) -> Tuple[np.ndarray, np.ndarray,
                                                    int]:
    """
    Returns unsorted eigenvalues, eigenvectors as columns
    and number of sweeps taken, ``-1`` when the sweeps cap is reached.
    """
    matrix = np.array(matrix, dtype=np.float64)
    size = len(matrix)
    tolerance = relative_tolerance * float(np.linalg.norm(matrix))
    # entries below it cannot add up to the tolerance
    threshold = tolerance / size
    if size <= 2 * BLOCK_SIZE:
        vectors, sweeps = solve(matrix[None], threshold, to_rounds(size))
        return np.diag(matrix).copy(), vectors[0], sweeps
    return diagonalize_blocks(matrix, tolerance, threshold)


def diagonalize_blocks(matrix: np.ndarray,
                       tolerance: float,
                       threshold: float) -> Tuple[np.ndarray, np.ndarray,
                                                  int]:
    # block cyclic variant: every round diagonalizes disjoint pairs
    # of blocks at once and applies their rotations with matrix products,
    # rows of ``vectors`` follow the positions of ``matrix``,
    # ``labels[position]`` is the coordinate the position started at
    size = len(matrix)
    blocks_count = -(-size // BLOCK_SIZE)
    blocks_count += blocks_count % 2
    padded_size = blocks_count * BLOCK_SIZE
    # padding coordinates have zero off-diagonal entries
    # and are never rotated
    matrix = np.pad(matrix, (0, padded_size - size))
    vectors = np.eye(padded_size)
    labels = np.arange(padded_size)
    blocks = labels.reshape(blocks_count, BLOCK_SIZE)
    schedule = [np.concatenate([blocks[rows], blocks[columns]], 1)
                for rows, columns in to_rounds(blocks_count)]
    pairs_count, pair_size = schedule[0].shape
    inner_rounds = to_rounds(pair_size)
    positions = np.empty_like(labels)
    sweeps = 0
    while off_diagonal_norm(matrix) > tolerance:
        if sweeps == MAX_SWEEPS:
            return _unpad(matrix, vectors, labels, size) + (-1,)
        for round_labels in schedule:
            positions[labels] = np.arange(padded_size)
            selection = positions[round_labels]
            sub_matrices = matrix[selection[:, :, None],
                                  selection[:, None, :]]
            rotations, inner_sweeps = solve(sub_matrices, threshold,
                                            inner_rounds)
            if not inner_sweeps:
                continue
            transposed = np.ascontiguousarray(rotations.transpose(0, 2, 1))
            selection = selection.ravel()
            half = (transposed
                    @ matrix[selection].reshape(pairs_count, pair_size,
                                                padded_size))
            matrix = (transposed
                      @ half.reshape(padded_size, padded_size).T[selection]
                      .reshape(pairs_count, pair_size, padded_size)
                      ).reshape(padded_size, padded_size)
            vectors = (transposed
                       @ vectors[selection].reshape(pairs_count, pair_size,
                                                    padded_size)
                       ).reshape(padded_size, padded_size)
            labels = labels[selection]
        sweeps += 1
    return _unpad(matrix, vectors, labels, size) + (sweeps,)


def _unpad(matrix: np.ndarray,
           vectors: np.ndarray,
           labels: np.ndarray,
           size: int) -> Tuple[np.ndarray, np.ndarray]:
    kept = labels < size
    return np.diag(matrix)[kept].copy(), vectors[kept][:, :size].T.copy()
