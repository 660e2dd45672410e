"""Coupled total-spin basis of N qubits built by sequential angular-momentum addition."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from corrcopies.errors import DomainError, ResourceError

MAX_DENSE_QUBITS = 10

UP = np.array([1.0, 0.0])
DOWN = np.array([0.0, 1.0])


@dataclass(frozen=True, eq=False)
class CoupledBasis:
    """Orthonormal basis ``|j, m, path>`` of the 2^N-dimensional space.

    ``path`` lists the doubled spin after each qubit is added; distinct paths
    ending at the same ``two_j`` enumerate the multiplicity copies of that
    sector.  Each block stores its columns with ``m`` running from ``j`` down
    to ``-j``; qubit 1 is the most significant bit of the computational index
    and ``|0>`` is spin up.
    """

    n: int
    blocks: dict[tuple[int, ...], np.ndarray] = field(repr=False)

    def paths(self, two_j: int) -> list[tuple[int, ...]]:
        return sorted(p for p in self.blocks if p[-1] == two_j)

    def sectors(self) -> list[int]:
        return sorted({p[-1] for p in self.blocks}, reverse=True)

    @property
    def labels(self) -> list[tuple[int, int, tuple[int, ...]]]:
        out = []
        for path in sorted(self.blocks):
            tj = path[-1]
            out.extend((tj, tj - 2 * i, path) for i in range(tj + 1))
        return out

    @property
    def columns(self) -> np.ndarray:
        return np.hstack([self.blocks[p] for p in sorted(self.blocks)])


def _couple(block: np.ndarray, two_j: int) -> dict[int, np.ndarray]:
    """Add one spin-1/2 to a spin-j block; returns the j+1/2 and j-1/2 blocks."""
    dim = block.shape[0] * 2

    def col(two_m: int) -> np.ndarray | None:
        if abs(two_m) > two_j:
            return None
        return block[:, (two_j - two_m) // 2]

    out = {}
    for two_big in (two_j + 1, two_j - 1):
        if two_big < 0:
            continue
        cols = []
        for two_mm in range(two_big, -two_big - 1, -2):
            low, high = col(two_mm - 1), col(two_mm + 1)
            # Condon-Shortley coefficients, doubled labels
            plus = np.sqrt((two_j + two_mm + 1) / (2 * (two_j + 1)))
            minus = np.sqrt((two_j - two_mm + 1) / (2 * (two_j + 1)))
            if two_big == two_j + 1:
                c_up, c_down = plus, minus
            else:
                c_up, c_down = -minus, plus
            v = np.zeros(dim)
            if low is not None:
                v += c_up * np.kron(low, UP)
            if high is not None:
                v += c_down * np.kron(high, DOWN)
            cols.append(v)
        out[two_big] = np.column_stack(cols)
    return out


def build_coupled_basis(n: int) -> CoupledBasis:
    if int(n) != n or n < 1:
        raise DomainError(f"qubit count must be a positive integer, got {n}")
    if n > MAX_DENSE_QUBITS:
        raise ResourceError(f"dense basis limited to n <= {MAX_DENSE_QUBITS}, got {n}")
    blocks: dict[tuple[int, ...], np.ndarray] = {(1,): np.column_stack([UP, DOWN])}
    for _ in range(n - 1):
        grown = {}
        for path, block in blocks.items():
            for two_big, new in _couple(block, path[-1]).items():
                grown[path + (two_big,)] = new
        blocks = grown
    return CoupledBasis(n, blocks)
