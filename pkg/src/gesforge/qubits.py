"""Closed-form multiqubit vectors used as exact regression anchors.

Index convention: party 1 is the most significant bit.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "qubit_ges_basis",
    "ghz",
    "single_gme_state",
    "three_qubit_max_ges",
    "MINUS_I_SIGMA_Y",
    "apply_local",
]

MINUS_I_SIGMA_Y = np.array([[0, -1], [1, 0]], dtype=complex)


def qubit_ges_basis(N: int) -> list[np.ndarray]:
    """Unnormalized spanning vectors of the qubit GES of the polynomial family.

    ``|0>(sum_k |2^(N-k) + j>) - |1>|j>`` for ``j < 2^(N-2)``, with the
    kets on parties ``2..N`` written as ``N-1`` bit integers.
    """
    if N < 3:
        raise ValueError("need N >= 3")
    half = 2 ** (N - 1)
    out = []
    for j in range(2 ** (N - 2)):
        v = np.zeros(2**N, dtype=complex)
        for k in range(2, N + 1):
            v[2 ** (N - k) + j] += 1
        v[half + j] -= 1
        out.append(v)
    return out


def ghz(N: int, phase: int = 1) -> np.ndarray:
    if N < 2:
        raise ValueError("need N >= 2")
    if phase not in (1, -1):
        raise ValueError("phase must be +1 or -1")
    v = np.zeros(2**N, dtype=complex)
    v[0] = 1
    v[-1] = phase
    return v / math.sqrt(2)


def single_gme_state(N: int) -> np.ndarray:
    """``(|0 1...1> - |1 0...0>)/sqrt2``, the lone GES vector of the qubit
    monomial families."""
    v = np.zeros(2**N, dtype=complex)
    v[2 ** (N - 1) - 1] = 1
    v[2 ** (N - 1)] = -1
    return v / math.sqrt(2)


def apply_local(op: np.ndarray, vector: np.ndarray, party: int, dims) -> np.ndarray:
    """Apply a single-party operator to 0-based ``party``."""
    dims = tuple(dims)
    t = np.asarray(vector).reshape(dims)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [party])), 0, party)
    return t.reshape(-1)


def three_qubit_max_ges(ghz_phase: int = -1) -> list[np.ndarray]:
    """Two polynomial-family GES vectors plus ``|000> + phase |111>``.

    The default phase ``-1`` gives a 3-dimensional GES; ``+1`` does not.
    """
    return qubit_ges_basis(3) + [ghz(3, ghz_phase) * math.sqrt(2)]
