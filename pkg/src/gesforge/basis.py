"""Finite bases for a continuous product family and projectors onto its span."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _modp
from .constructions import NupbFamily, span_dim
from .poly import exact_matrix_rank

log = logging.getLogger(__name__)

__all__ = [
    "RATIONAL_LADDER",
    "UNIT_CIRCLE",
    "SEEDED_RANDOM",
    "EXACT",
    "FLOAT",
    "EvaluatedBasis",
    "SubspacePair",
    "BasisError",
    "evaluate",
    "evaluate_mod",
    "realize_basis",
    "orthonormalize",
    "subspace_pair",
    "numerical_rank",
    "projector_from_vectors",
]

RATIONAL_LADDER = "RATIONAL_LADDER"
UNIT_CIRCLE = "UNIT_CIRCLE"
SEEDED_RANDOM = "SEEDED_RANDOM"
STRATEGIES = (RATIONAL_LADDER, UNIT_CIRCLE, SEEDED_RANDOM)
EXACT = "EXACT"
FLOAT = "FLOAT"

DEFAULT_TOL = 1e-9
RETRY_BUDGET = 32
# realize_basis only pre-screens sides this small; certify_ges does the rest
PRESCREEN_CAP = 20_000


class BasisError(RuntimeError):
    """No acceptable set of alpha values was found within the retry budget."""


def _kron_lists(a: list, b: list) -> list:
    return [x * y for x in a for y in b]


def evaluate(family: NupbFamily, alpha, parties: Sequence[int] | None = None):
    """Amplitudes of the family member at ``alpha``.

    Exact (list of Fractions) for int/Fraction ``alpha``, otherwise a
    complex ndarray. ``parties`` restricts to a subset of (0-based) parties.
    """
    if parties is None:
        parties = range(family.scenario.N)
    if isinstance(alpha, (int, Fraction)):
        out = [Fraction(1)]
        for k in parties:
            out = _kron_lists(out, family.locals[k].evaluate(alpha))
        return out
    alpha = complex(alpha)
    out = np.ones(1, dtype=complex)
    for k in parties:
        out = np.kron(out, np.array(family.locals[k].evaluate(alpha), dtype=complex))
    return out


def evaluate_mod(family: NupbFamily, alpha, p: int, parties: Sequence[int] | None = None) -> np.ndarray:
    """Residues mod ``p`` of the exact amplitudes at rational ``alpha``."""
    if parties is None:
        parties = range(family.scenario.N)
    a = Fraction(alpha)
    den = a.denominator % p
    if den == 0:
        raise ZeroDivisionError
    a_mod = a.numerator % p * pow(den, -1, p) % p
    out = np.ones(1, dtype=np.int64)
    for k in parties:
        loc = np.array(family.locals[k].evaluate_mod(a_mod, p), dtype=np.int64)
        out = (out[:, None] * loc[None, :] % p).reshape(-1)
    return out


def numerical_rank(mat: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    s = np.linalg.svd(np.asarray(mat, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


@dataclass(frozen=True, eq=False)
class EvaluatedBasis:
    family: NupbFamily
    alphas: tuple
    mode: str
    u: int
    _exact: tuple | None = field(default=None, repr=False)
    _float: np.ndarray | None = field(default=None, repr=False)

    @property
    def D(self) -> int:
        return self.family.scenario.D

    @property
    def exact_rows(self) -> list[list[Fraction]]:
        if self.mode != EXACT:
            raise ValueError("float basis has no exact amplitudes")
        if self._exact is None:
            rows = tuple(tuple(evaluate(self.family, a)) for a in self.alphas)
            object.__setattr__(self, "_exact", rows)
        return [list(r) for r in self._exact]

    @property
    def amplitudes(self) -> np.ndarray:
        """``u x D`` complex matrix (floats even in exact mode)."""
        if self._float is None:
            if self.mode == EXACT:
                arr = np.array([[complex(float(x)) for x in r] for r in self.exact_rows])
            else:
                arr = np.array([evaluate(self.family, a) for a in self.alphas])
            arr.setflags(write=False)
            object.__setattr__(self, "_float", arr)
        return self._float

    def to_json(self) -> dict:
        alphas = [[float(complex(a).real), float(complex(a).imag)] for a in self.alphas]
        amps = self.amplitudes
        out = {
            "mode": self.mode,
            "u": self.u,
            "D": self.D,
            "family": self.family.to_json(),
            "alphas": alphas,
            "amplitudes": [[[float(z.real), float(z.imag)] for z in row] for row in amps],
        }
        if self.mode == EXACT:
            out["alphas_exact"] = [str(Fraction(a)) for a in self.alphas]
        return out


@dataclass(frozen=True, eq=False)
class SubspacePair:
    p_nupb: np.ndarray
    p_ges: np.ndarray
    ges_basis: np.ndarray
    span_basis: np.ndarray
    dims: tuple[int, ...]

    @property
    def u(self) -> int:
        return self.span_basis.shape[0]

    @property
    def D(self) -> int:
        return self.p_nupb.shape[0]

    def to_json(self) -> dict:
        def cmat(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]

        return {"dims": list(self.dims), "u": self.u, "D": self.D,
                "p_nupb": cmat(self.p_nupb), "p_ges": cmat(self.p_ges)}


def exact_basis_rank(family: NupbFamily, alphas: Sequence) -> int:
    """Exact rank over Q of the evaluated rows, via residues with a Q fallback."""
    target = min(len(alphas), family.scenario.D)
    best = 0
    for p in _modp.PRIMES[:2]:
        try:
            mat = np.array([evaluate_mod(family, a, p) for a in alphas])
        except ZeroDivisionError:
            continue
        best = max(best, int(_modp.rank_mod_p(mat, p)))
        if best == target:
            return best
    rows = [evaluate(family, Fraction(a)) for a in alphas]
    return exact_matrix_rank(rows)


def _ladder(u: int, attempt: int, rng: np.random.Generator) -> list[int]:
    if attempt == 0:
        return list(range(u))
    pool = rng.choice(4 * u * (attempt + 1), size=u, replace=False)
    return sorted(int(x) for x in pool)


def _unit_circle(u: int, rng: np.random.Generator) -> list[complex]:
    # one jittered phase per stratum keeps nodes apart on the circle
    offset = rng.random()
    jitter = rng.random(u) * 0.5
    return [cmath.exp(2j * math.pi * ((i + jitter[i]) / u + offset)) for i in range(u)]


def _random_disk(u: int, rng: np.random.Generator) -> list[complex]:
    r = np.sqrt(rng.uniform(0.25, 1.0, size=u))
    t = rng.uniform(0, 2 * math.pi, size=u)
    return [complex(x) for x in r * np.exp(1j * t)]


def realize_basis(
    family: NupbFamily,
    strategy: str = RATIONAL_LADDER,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_retries: int = RETRY_BUDGET,
    prescreen_cap: int = PRESCREEN_CAP,
) -> EvaluatedBasis:
    """Pick ``u = dim span`` values of alpha giving a basis of the span.

    Every attempt is checked for rank ``u`` and, on every cut side whose
    tensor coordinates are independent functions and whose tuple count is
    at most ``prescreen_cap``, for the spanning property. Sides whose
    coordinates are dependent cannot span for any choice of alpha and are
    left to :func:`gesforge.certification.certify_ges` to report.
    """
    from .certification import check_spanning, enumerate_bipartitions, side_is_symbolically_full

    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    u = span_dim(family)
    D = family.scenario.D
    if u >= D:
        raise ValueError(f"span is the whole space (u={u}, D={D}); no GES")
    mode = EXACT if strategy == RATIONAL_LADDER else FLOAT
    rng = np.random.default_rng(seed)

    sides = []
    for cut in enumerate_bipartitions(family.scenario.dims):
        for side in ("S", "SBAR"):
            m = cut.side_dim(side)
            if m <= 1 or u < m or math.comb(u, m) > prescreen_cap:
                continue
            if side_is_symbolically_full(family, cut.side_parties(side)):
                sides.append((cut, side))

    for attempt in range(max_retries):
        if strategy == RATIONAL_LADDER:
            alphas = tuple(_ladder(u, attempt, rng))
            if exact_basis_rank(family, alphas) != u:
                log.debug("ladder attempt %d rank deficient", attempt)
                continue
        else:
            gen = _unit_circle if strategy == UNIT_CIRCLE else _random_disk
            alphas = tuple(gen(u, rng))
            amps = np.array([evaluate(family, a) for a in alphas])
            if numerical_rank(amps, tol) != u:
                log.debug("%s attempt %d rank deficient", strategy, attempt)
                continue
        basis = EvaluatedBasis(family, alphas, mode, u)
        if all(check_spanning(basis, cut, side, tol).all_full_rank for cut, side in sides):
            return basis
        log.debug("attempt %d failed spanning prescreen", attempt)
    raise BasisError(f"no valid alpha set after {max_retries} attempts ({strategy})")


def orthonormalize(basis: EvaluatedBasis, tol: float = DEFAULT_TOL) -> SubspacePair:
    amps = basis.amplitudes
    _, s, vh = np.linalg.svd(amps, full_matrices=True)
    rank = int(np.sum(s > tol * s[0])) if s.size else 0
    if rank < basis.u:
        raise BasisError(f"numerical rank {rank} < {basis.u}; choose other alpha values")
    return _pair_from_vh(vh, basis.u, basis.family.dims)


def _pair_from_vh(vh: np.ndarray, u: int, dims) -> SubspacePair:
    # kets are the rows of vh (unconjugated); projector = sum |v><v|
    span = vh[:u]
    ges = vh[u:]
    p_nupb = span.T @ span.conj()
    p_nupb = (p_nupb + p_nupb.conj().T) / 2
    D = p_nupb.shape[0]
    p_ges = np.eye(D) - p_nupb
    return SubspacePair(p_nupb, p_ges, ges.copy(), span.copy(), tuple(dims))


def subspace_pair(family: NupbFamily, seed: int = 0, tol: float = DEFAULT_TOL) -> SubspacePair:
    """Projectors from a unit-circle basis (the well-conditioned route)."""
    return orthonormalize(realize_basis(family, UNIT_CIRCLE, seed, tol), tol)


def projector_from_vectors(vectors, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the span of the given kets."""
    a = np.array([np.asarray(v, dtype=complex) for v in vectors])
    _, s, vh = np.linalg.svd(a)
    r = int(np.sum(s > tol * s[0]))
    span = vh[:r]
    return span.T @ span.conj()
