"""Sparse formal linear combinations with exact rational coefficients.

FormalSum is the common container for elements of the three observable
algebras (graphs, permutations, partitions) and for the outputs of the
limiting-cumulant maps.  Keys must be hashable canonical objects; the
product is family-specific and supplied by the caller.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Generic, Hashable, Iterable, Iterator, Mapping, TypeVar

X = TypeVar("X", bound=Hashable)

RationalLike = int | Fraction


class FormalSum(Generic[X]):
    """Finitely supported map from basis objects to exact rationals.

    Zero coefficients are never stored, so equality of FormalSums is
    equality of the underlying algebra elements.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[X, RationalLike] | Iterable[tuple[X, RationalLike]] = ()):
        data: dict[X, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, coeff in items:
            c = Fraction(coeff)
            if c:
                acc = data.get(key, Fraction(0)) + c
                if acc:
                    data[key] = acc
                else:
                    data.pop(key, None)
        self._terms = data

    @classmethod
    def single(cls, key: X, coeff: RationalLike = 1) -> "FormalSum[X]":
        return cls([(key, coeff)])

    @property
    def terms(self) -> dict[X, Fraction]:
        return dict(self._terms)

    def coefficient(self, key: X) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def support(self) -> set[X]:
        return set(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[X, Fraction]]:
        return iter(self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "FormalSum[X]") -> "FormalSum[X]":
        if not isinstance(other, FormalSum):
            raise TypeError("FormalSum only adds with FormalSum")
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            acc = out.get(key, Fraction(0)) + coeff
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        result: FormalSum[X] = FormalSum()
        result._terms = out
        return result

    def __neg__(self) -> "FormalSum[X]":
        result: FormalSum[X] = FormalSum()
        result._terms = {key: -coeff for key, coeff in self._terms.items()}
        return result

    def __sub__(self, other: "FormalSum[X]") -> "FormalSum[X]":
        return self + (-other)

    def __mul__(self, scalar: RationalLike) -> "FormalSum[X]":
        c = Fraction(scalar)
        if not c:
            return FormalSum()
        result: FormalSum[X] = FormalSum()
        result._terms = {key: coeff * c for key, coeff in self._terms.items()}
        return result

    __rmul__ = __mul__

    def __truediv__(self, scalar: RationalLike) -> "FormalSum[X]":
        return self * (Fraction(1) / Fraction(scalar))

    def map_keys(self, fn: Callable[[X], X]) -> "FormalSum[X]":
        """Push every key through `fn` (e.g. a canonicalization), merging collisions."""
        return FormalSum((fn(key), coeff) for key, coeff in self._terms.items())

    def apply(self, fn: Callable[[X], RationalLike | float]):
        """Linear extension of a basis evaluation `fn`; exact iff `fn` is exact."""
        total = None
        for key, coeff in self._terms.items():
            value = fn(key) * coeff
            total = value if total is None else total + value
        return Fraction(0) if total is None else total

    def __repr__(self) -> str:
        if not self._terms:
            return "FormalSum(0)"
        parts = [f"{coeff!s}*{key!r}" for key, coeff in sorted(self._terms.items(), key=lambda kv: repr(kv[0]))]
        return "FormalSum(" + " + ".join(parts) + ")"


def bilinear_product(
    left: FormalSum[X],
    right: FormalSum[X],
    mul: Callable[[X, X], FormalSum[X] | X],
) -> FormalSum[X]:
    """Extend a basis product (which may itself return a FormalSum) bilinearly."""
    out: FormalSum[X] = FormalSum()
    for x, cx in left:
        for y, cy in right:
            prod = mul(x, y)
            if isinstance(prod, FormalSum):
                out = out + prod * (cx * cy)
            else:
                out = out + FormalSum.single(prod, cx * cy)
    return out


def coeff_to_string(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def coeff_from_string(s: str) -> Fraction:
    return Fraction(s)


def to_json_dict(fs: FormalSum[X], key_to_str: Callable[[X], str]) -> dict[str, str]:
    """Serialize as {object-key: "num/den"} with deterministic key strings."""
    return {key_to_str(key): coeff_to_string(coeff) for key, coeff in sorted(fs, key=lambda kv: key_to_str(kv[0]))}


def from_json_dict(d: Mapping[str, str], key_from_str: Callable[[str], X]) -> FormalSum[X]:
    return FormalSum((key_from_str(k), coeff_from_string(v)) for k, v in d.items())
