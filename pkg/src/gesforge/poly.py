"""Sparse exact polynomials in a single scalar ``alpha``.

Coordinates of every product family in this package are polynomials in
``alpha`` with rational coefficients. Exponents are Python ints (no
overflow) and coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ExpPoly",
    "SymbolicVector",
    "poly_mul",
    "tensor_coords",
    "exact_rank",
    "exact_matrix_rank",
    "monomial_vector",
]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


@dataclass(frozen=True)
class ExpPoly:
    """Immutable sparse polynomial ``sum_k c_k alpha**e_k``.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs sorted by
    exponent with no zero coefficients.
    """

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        prev = -1
        for e, c in self.terms:
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponents must be nonnegative ints, got {e!r}")
            if e <= prev:
                raise ValueError("exponents must be strictly increasing")
            if c == 0:
                raise ValueError("zero coefficient stored")
            prev = e

    @classmethod
    def from_dict(cls, mapping: Mapping[int, object]) -> "ExpPoly":
        acc: dict[int, Fraction] = {}
        for e, c in mapping.items():
            e = int(e)
            acc[e] = acc.get(e, Fraction(0)) + _as_fraction(c)
        return cls(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "ExpPoly":
        c = _as_fraction(coeff)
        if c == 0:
            return cls()
        return cls(((int(exponent), c),))

    @classmethod
    def one(cls) -> "ExpPoly":
        return cls.monomial(0)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "ExpPoly":
        """Sum of monomials with unit coefficients (repeats accumulate)."""
        acc: dict[int, int] = {}
        for e in exponents:
            acc[int(e)] = acc.get(int(e), 0) + 1
        return cls.from_dict(acc)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("degree of the zero polynomial is undefined")
        return self.terms[-1][0]

    def exponents(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.terms)

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return ExpPoly(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return poly_mul(self, other)
        c = _as_fraction(other)
        if c == 0:
            return ExpPoly()
        return ExpPoly(tuple((e, k * c) for e, k in self.terms))

    __rmul__ = __mul__

    def evaluate(self, alpha):
        """Value at ``alpha``; exact for ints/Fractions, float/complex otherwise."""
        if isinstance(alpha, (int, Fraction)):
            return sum((c * Fraction(alpha) ** e for e, c in self.terms), Fraction(0))
        return sum(complex(c) * alpha**e for e, c in self.terms) if self.terms else 0j

    def evaluate_mod(self, alpha: int, p: int) -> int:
        """Value at an integer residue ``alpha`` modulo the prime ``p``."""
        total = 0
        for e, c in self.terms:
            num = c.numerator % p
            den = c.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator {c.denominator} vanishes mod {p}")
            total += num * pow(den, -1, p) * pow(alpha, e, p)
        return total % p

    def to_json(self) -> list[list[int]]:
        return [[e, c.numerator, c.denominator] for e, c in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "ExpPoly":
        terms = tuple((int(e), Fraction(int(n), int(d))) for e, n, d in data)
        return cls(terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "1" if e == 0 else ("a" if e == 1 else f"a^{e}")
            if c == 1:
                parts.append(mono)
            elif e == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


@dataclass(frozen=True)
class SymbolicVector:
    """Ordered tuple of :class:`ExpPoly` coordinates of a local vector."""

    coords: tuple[ExpPoly, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("vector must have at least one coordinate")
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def evaluate(self, alpha) -> list:
        return [p.evaluate(alpha) for p in self.coords]

    def evaluate_mod(self, alpha: int, p: int) -> list[int]:
        return [q.evaluate_mod(alpha, p) for q in self.coords]

    @property
    def is_monomial(self) -> bool:
        return all(c.is_monomial for c in self.coords)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "SymbolicVector":
        return cls(tuple(ExpPoly.from_json(c) for c in data))


def monomial_vector(exponents: Iterable[int]) -> SymbolicVector:
    """``(alpha**e_0, alpha**e_1, ...)``."""
    return SymbolicVector(tuple(ExpPoly.monomial(e) for e in exponents))


def poly_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    if a.is_zero or b.is_zero:
        return ExpPoly()
    if a.is_monomial or b.is_monomial:
        if not a.is_monomial:
            a, b = b, a
        (ea, ca), = a.terms
        return ExpPoly(tuple((ea + e, ca * c) for e, c in b.terms))
    acc: dict[int, Fraction] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            acc[ea + eb] = acc.get(ea + eb, Fraction(0)) + ca * cb
    return ExpPoly(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))


def tensor_coords(vectors: Sequence[SymbolicVector]) -> SymbolicVector:
    """Kronecker product of coordinate lists, first vector slowest-varying."""
    if not vectors:
        raise ValueError("need at least one vector")
    out = list(vectors[0].coords)
    for vec in vectors[1:]:
        out = [poly_mul(a, b) for a in out for b in vec.coords]
    return SymbolicVector(tuple(out))


def exact_rank(polys: Iterable[ExpPoly]) -> int:
    """Rank over Q of the coefficient matrix of ``polys``.

    All-monomial input takes the exponent-set path. Otherwise rows are
    reduced by their leading exponent against previously accepted pivots,
    which is Gaussian elimination on the sparse coefficient matrix.
    """
    polys = [p for p in polys if not p.is_zero]
    if all(p.is_monomial for p in polys):
        return len({p.terms[0][0] for p in polys})

    pivots: dict[int, dict[int, Fraction]] = {}
    for p in polys:
        row = p.as_dict()
        while row:
            lead = max(row)
            piv = pivots.get(lead)
            if piv is None:
                c = row[lead]
                pivots[lead] = {e: v / c for e, v in row.items()}
                break
            factor = row[lead]
            for e, v in piv.items():
                nv = row.get(e, 0) - factor * v
                if nv:
                    row[e] = nv
                else:
                    row.pop(e, None)
    return len(pivots)


def exact_matrix_rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q of a dense matrix of ints/Fractions."""
    m = [[_as_fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        inv = 1 / pr[col]
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            if f:
                f *= inv
                row = m[i]
                for j in range(col, ncols):
                    if pr[j]:
                        row[j] -= f * pr[j]
        rank += 1
        if rank == len(m):
            break
    return rank
