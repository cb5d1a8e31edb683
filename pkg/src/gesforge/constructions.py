"""Product families whose span complements are genuinely entangled.

Every family is ``alpha -> psi_1(alpha) (x) ... (x) psi_N(alpha)`` with
polynomial coordinates. Parties ``2..N`` share the same shape: party ``k``
carries ``(1, a^s, a^{2s}, ...)`` with ``s`` the product of the dimensions
of the parties after it, so together they form the full Vandermonde vector
on the last ``N-1`` parties. The variants differ only on party 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .poly import ExpPoly, SymbolicVector, exact_rank, monomial_vector, tensor_coords

__all__ = [
    "Scenario",
    "NupbFamily",
    "VARIANTS",
    "common_local",
    "build_standard",
    "build_custom",
    "build_naive_vandermonde",
    "fixture_shifts_oupb",
    "build_symmetric_nupb",
    "max_ges_dim",
    "max_ces_dim",
    "predicted_ges_dim",
    "optimality_bound",
    "span_dim",
    "family_from_json",
]

VARIANTS = ("V1", "V2", "V3")
TAGS = ("V1", "V2", "V3", "NAIVE", "CUSTOM", "SYMMETRIC", "FIXTURE")


@dataclass(frozen=True)
class Scenario:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 2:
            raise ValueError("need at least two parties")
        if any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must be >= 2, got {dims}")

    @classmethod
    def equal(cls, n: int, d: int) -> "Scenario":
        return cls((d,) * n)

    @property
    def N(self) -> int:
        return len(self.dims)

    @property
    def D(self) -> int:
        return math.prod(self.dims)

    @property
    def is_equal(self) -> bool:
        return len(set(self.dims)) == 1

    @property
    def d(self) -> int:
        """Common local dimension; raises for unequal scenarios."""
        if not self.is_equal:
            raise ValueError(f"scenario {self.dims} has unequal local dimensions")
        return self.dims[0]


@dataclass(frozen=True)
class NupbFamily:
    scenario: Scenario
    locals: tuple[SymbolicVector, ...]
    variant_tag: str = "CUSTOM"

    def __post_init__(self):
        object.__setattr__(self, "locals", tuple(self.locals))
        if self.variant_tag not in TAGS:
            raise ValueError(f"unknown variant tag {self.variant_tag!r}")
        if len(self.locals) != self.scenario.N:
            raise ValueError("one local vector per party required")
        for k, (vec, d) in enumerate(zip(self.locals, self.scenario.dims)):
            if vec.dim != d:
                raise ValueError(f"party {k + 1}: vector has {vec.dim} coords, dimension is {d}")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.scenario.dims

    def coords(self, parties: Sequence[int] | None = None) -> SymbolicVector:
        """Tensor coordinates over ``parties`` (0-based, kept in given order)."""
        if parties is None:
            parties = range(self.scenario.N)
        return tensor_coords([self.locals[k] for k in parties])

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "variant": self.variant_tag,
            "locals": [v.to_json() for v in self.locals],
        }


def family_from_json(data: dict) -> NupbFamily:
    scen = Scenario(tuple(data["dims"]))
    locs = tuple(SymbolicVector.from_json(v) for v in data["locals"])
    return NupbFamily(scen, locs, data.get("variant", "CUSTOM"))


def _tail_step(dims: Sequence[int], k: int) -> int:
    # product of dimensions strictly after 0-based party k
    return math.prod(dims[k + 1:])


def common_local(scenario: Scenario, k: int) -> SymbolicVector:
    """Shared local vector of party ``k`` (1-based, ``2 <= k <= N``)."""
    d = scenario.d
    N = scenario.N
    if not 2 <= k <= N:
        raise ValueError(f"party index must lie in [2, {N}], got {k}")
    step = d ** (N - k)
    return monomial_vector(i * step for i in range(d))


def _tail_locals(dims: Sequence[int]) -> list[SymbolicVector]:
    out = []
    for k in range(1, len(dims)):
        step = _tail_step(dims, k)
        out.append(monomial_vector(i * step for i in range(dims[k])))
    return out


def build_standard(variant: str, scenario: Scenario) -> NupbFamily:
    variant = variant.upper()
    d = scenario.d
    N = scenario.N
    if variant == "V1":
        dt = d ** (N - 1) - d + 1
        first = monomial_vector(i * dt for i in range(d))
    elif variant == "V2":
        p1 = sum(d ** (N - k) for k in range(2, N + 1))
        first = monomial_vector(i * p1 for i in range(d))
    elif variant == "V3":
        coords = [ExpPoly.one()]
        for i in range(1, d):
            coords.append(ExpPoly.from_exponents(i * d ** (N - k) for k in range(2, N + 1)))
        first = SymbolicVector(tuple(coords))
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return NupbFamily(scenario, (first, *_tail_locals(scenario.dims)), variant)


def build_custom(
    dims: Sequence[int],
    party1_coords: SymbolicVector | Sequence[int],
    use_common_rest: bool = True,
    rest: Sequence[SymbolicVector] | None = None,
) -> NupbFamily:
    """Assemble a family from an arbitrary party-1 vector.

    ``party1_coords`` may be a :class:`SymbolicVector` or a list of
    exponents. With ``use_common_rest`` the remaining parties get the
    shared tail vectors; otherwise ``rest`` must supply them. No GES claim
    is made here, certify separately.
    """
    scen = Scenario(tuple(dims))
    if not isinstance(party1_coords, SymbolicVector):
        party1_coords = monomial_vector(party1_coords)
    if party1_coords.dim != scen.dims[0]:
        raise ValueError(f"party-1 vector has {party1_coords.dim} coords, expected {scen.dims[0]}")
    if use_common_rest:
        tail = _tail_locals(scen.dims)
    else:
        if rest is None or len(rest) != scen.N - 1:
            raise ValueError("rest must give one vector per remaining party")
        tail = list(rest)
    return NupbFamily(scen, (party1_coords, *tail), "CUSTOM")


def build_naive_vandermonde(scenario: Scenario) -> NupbFamily:
    d = scenario.d
    v = monomial_vector(range(d))
    return NupbFamily(scenario, (v,) * scenario.N, "NAIVE")


def fixture_shifts_oupb(theta: float = math.pi / 5) -> list[np.ndarray]:
    """Four-element three-qubit orthogonal UPB ``{000, 1 e' e, e 1 e', e' e 1}``."""
    zero = np.array([1.0, 0.0])
    one = np.array([0.0, 1.0])
    e = np.array([math.cos(theta), math.sin(theta)])
    eb = np.array([-math.sin(theta), math.cos(theta)])

    def kron3(a, b, c):
        return np.kron(np.kron(a, b), c).astype(complex)

    return [kron3(zero, zero, zero), kron3(one, eb, e), kron3(e, one, eb), kron3(eb, e, one)]


def symmetric_local(d: int) -> SymbolicVector:
    """``(a^{2^0-1}, a^{2^1-1}, ..., a^{2^{d-1}-1})``.

    Pairwise exponent sums of ``2^i - 1`` are distinct, so the products
    ``e_i e_j`` (``i <= j``) are independent functions and the doubled
    family spans the whole symmetric subspace. For ``d = 2`` this is the
    plain Vandermonde vector ``(1, a)``.
    """
    return monomial_vector(2**i - 1 for i in range(d))


def build_symmetric_nupb(d: int, lambdas: Sequence[int | Fraction] | None = None) -> list[list[Fraction]]:
    """``C(d+1, 2)`` exact vectors ``e(l) (x) e(l)`` at distinct rational ``l``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    count = math.comb(d + 1, 2)
    if lambdas is None:
        lambdas = range(1, count + 1)
    lambdas = [Fraction(x) for x in lambdas]
    if len(lambdas) != count or len(set(lambdas)) != count:
        raise ValueError(f"need {count} distinct parameters")
    e = symmetric_local(d)
    out = []
    for lam in lambdas:
        v = e.evaluate(lam)
        out.append([a * b for a in v for b in v])
    return out


def max_ges_dim(dims: Sequence[int]) -> int:
    ds = sorted(int(x) for x in dims)
    return math.prod(ds) - (ds[0] + math.prod(ds[1:])) + 1


def max_ces_dim(dims: Sequence[int]) -> int:
    ds = [int(x) for x in dims]
    return math.prod(ds) - sum(ds) + len(ds) - 1


def predicted_ges_dim(variant: str, scenario: Scenario) -> int:
    d, N = scenario.d, scenario.N
    variant = variant.upper()
    if variant == "V1":
        return (d - 1) ** 2
    if variant == "V2":
        return d**N - (2 * d ** (N - 1) - 1)
    if variant == "V3":
        return d ** (N - 2) * (d - 1) ** 2
    raise ValueError(f"unknown variant {variant!r}")


def optimality_bound(scenario: Scenario) -> int:
    """Upper bound on the GES dimension of any family with the shared tail."""
    d, N = scenario.d, scenario.N
    return d ** (N - 2) * (d - 1) ** 2


def span_dim(family: NupbFamily) -> int:
    return exact_rank(family.coords().coords)
