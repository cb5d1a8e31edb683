"""Mixed states supported on a GES, entanglement witnesses and PT checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import SubspacePair
from .certification import (
    Bipartition,
    enumerate_bipartitions,
    find_biproduct_seesaw,
    reshape_operator,
)

__all__ = [
    "DensityMatrix",
    "WitnessPackage",
    "EpsilonEstimate",
    "ges_state",
    "estimate_epsilon",
    "build_witness",
    "partial_transpose",
    "partial_transpose_min_eig",
    "random_biproduct_states",
    "witness_expectations",
]

VALIDITY_NOTE = (
    "epsilon_used is a shrunken seesaw estimate; the seesaw returns a local "
    "minimum, i.e. an upper bound on the true biproduct minimum, so the "
    "witness is validated empirically by sampling, not certified"
)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        D = int(np.prod(self.dims))
        if m.shape != (D, D):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.dims}")
        if not np.allclose(m, m.conj().T, atol=1e-10):
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m) - 1) > 1e-10:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(m)[0] < -1e-10:
            raise ValueError("density matrix must be positive semidefinite")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(self.dims))

    @property
    def rank(self) -> int:
        w = np.linalg.eigvalsh(self.matrix)
        return int(np.sum(w > 1e-10))


@dataclass(frozen=True, eq=False)
class WitnessPackage:
    operator: np.ndarray
    epsilon_hat: float
    epsilon_used: float
    u: int
    D: int
    validity_note: str = VALIDITY_NOTE
    per_cut: list = field(default_factory=list)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.operator)

    @property
    def expected_on_state(self) -> float:
        """``Tr(W rho)`` for the normalized GES projector state."""
        e = self.epsilon_used
        return -e / (self.u - e * self.D)

    def to_json(self) -> dict:
        return {
            "epsilon_hat": self.epsilon_hat,
            "epsilon_used": self.epsilon_used,
            "u": self.u,
            "D": self.D,
            "per_cut": self.per_cut,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "validity_note": self.validity_note,
        }


@dataclass
class EpsilonEstimate:
    epsilon_hat: float
    per_cut: list[dict]


def ges_state(pair: SubspacePair) -> DensityMatrix:
    k = pair.D - pair.u
    if k < 1:
        raise ValueError("GES is empty")
    rho = pair.p_ges / k
    return DensityMatrix((rho + rho.conj().T) / 2, pair.dims)


def estimate_epsilon(
    p_nupb: np.ndarray,
    dims: Sequence[int],
    restarts: int = 50,
    iters: int = 2000,
    conv_tol: float = 1e-14,
    seed: int = 0,
) -> EpsilonEstimate:
    """Minimum over cuts of the seesaw biproduct overlap with ``p_nupb``.

    Seesaw finds local minima only, so the result bounds the true minimum
    from above.
    """
    per_cut = []
    for i, cut in enumerate(enumerate_bipartitions(dims)):
        res = find_biproduct_seesaw(p_nupb, cut, restarts, iters, conv_tol, seed + i)
        per_cut.append({"cut": cut.label, "value": res.value})
    return EpsilonEstimate(min(c["value"] for c in per_cut), per_cut)


def build_witness(
    p_nupb: np.ndarray,
    epsilon: float,
    safety: float = 0.1,
    per_cut: list | None = None,
) -> WitnessPackage:
    """``(P - e 1) / (u - e D)`` with ``e = epsilon * (1 - safety)``."""
    if not 0 <= safety < 1:
        raise ValueError("safety must lie in [0, 1)")
    P = np.asarray(p_nupb, dtype=complex)
    D = P.shape[0]
    u = int(round(np.trace(P).real))
    eps_used = epsilon * (1 - safety)
    if not 0 < eps_used < u / D:
        raise ValueError(f"epsilon_used={eps_used} must lie in (0, u/D={u / D})")
    W = (P - eps_used * np.eye(D)) / (u - eps_used * D)
    W = (W + W.conj().T) / 2
    return WitnessPackage(W, float(epsilon), float(eps_used), u, D, per_cut=list(per_cut or []))


def partial_transpose(rho, cut: Bipartition) -> np.ndarray:
    """Transpose on the ``Sbar`` factor; result is in ``S, Sbar`` index order."""
    t = reshape_operator(np.asarray(rho), cut)
    t = t.transpose(0, 3, 2, 1)
    D = cut.dim_s * cut.dim_sbar
    return t.reshape(D, D)


def partial_transpose_min_eig(rho: DensityMatrix | np.ndarray, cut: Bipartition) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    pt = partial_transpose(m, cut)
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])


def random_biproduct_states(cut: Bipartition, n: int, seed: int = 0) -> np.ndarray:
    """``n`` Haar-random pure states of the form ``x_S (x) y_Sbar`` (rows)."""
    rng = np.random.default_rng(seed)

    def haar(k, dim):
        z = rng.standard_normal((k, dim)) + 1j * rng.standard_normal((k, dim))
        return z / np.linalg.norm(z, axis=1, keepdims=True)

    x = haar(n, cut.dim_s)
    y = haar(n, cut.dim_sbar)
    prod = np.einsum("ia,ib->iab", x, y).reshape(n, -1)
    order = [*cut.s_mask, *cut.sbar]
    shape = [n] + [cut.dims[k] for k in order]
    inv = [0] + [1 + int(i) for i in np.argsort(order)]
    return prod.reshape(shape).transpose(inv).reshape(n, -1)


def witness_expectations(W: np.ndarray, states: np.ndarray) -> np.ndarray:
    """``<chi|W|chi>`` for each row ``chi`` of ``states``."""
    return np.einsum("ia,ab,ib->i", states.conj(), W, states).real
