"""Sparse multivariate polynomials with exact coefficients."""

from __future__ import annotations

import itertools
from typing import Any, Iterable, Mapping, Sequence

from ..errors import ShapeError
from .domains import Domain


class MultiPoly:
    """Polynomial in ``nvars`` indeterminates, stored as exponent tuple -> nonzero coefficient."""

    __slots__ = ("domain", "nvars", "terms")

    def __init__(self, domain: Domain, nvars: int, terms: Mapping[tuple[int, ...], Any] | None = None):
        self.domain = domain
        self.nvars = nvars
        clean: dict[tuple[int, ...], Any] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != nvars:
                raise ShapeError(f"exponent {exp} does not have {nvars} entries")
            if any(e < 0 for e in exp):
                raise ShapeError(f"negative exponent in {exp}")
            c = domain(c)
            if c:
                clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def constant(cls, domain: Domain, nvars: int, c: Any) -> MultiPoly:
        return cls(domain, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, domain: Domain, nvars: int, i: int, coeff: Any = 1) -> MultiPoly:
        exp = [0] * nvars
        exp[i] = 1
        return cls(domain, nvars, {tuple(exp): coeff})

    @classmethod
    def linear(cls, domain: Domain, coeffs: Sequence[Any]) -> MultiPoly:
        """Σ coeffs[i]·t_i."""
        n = len(coeffs)
        return cls(domain, n, {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)})

    def _raw(self, terms: dict[tuple[int, ...], Any]) -> MultiPoly:
        out = MultiPoly.__new__(MultiPoly)
        out.domain = self.domain
        out.nvars = self.nvars
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def _check(self, other: MultiPoly) -> None:
        if other.nvars != self.nvars:
            raise ShapeError(f"polynomials in {self.nvars} and {other.nvars} variables")

    def _lift(self, other: Any) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.domain, self.nvars, other)

    def __add__(self, other: Any) -> MultiPoly:
        o = self._lift(other)
        terms = dict(self.terms)
        for k, v in o.terms.items():
            terms[k] = terms.get(k, self.domain.zero) + v
        return self._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return self._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Any) -> MultiPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> MultiPoly:
        return self._lift(other) - self

    def __mul__(self, other: Any) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            c = self.domain(other)
            return self._raw({k: v * c for k, v in self.terms.items()})
        self._check(other)
        terms: dict[tuple[int, ...], Any] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                prev = terms.get(k)
                terms[k] = va * vb if prev is None else prev + va * vb
        return self._raw(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        result = MultiPoly.constant(self.domain, self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return not other
        return self.terms == {(0,) * self.nvars: other}

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, exp: Iterable[int]) -> Any:
        return self.terms.get(tuple(exp), self.domain.zero)

    @property
    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def evaluate(self, point: Sequence[Any]) -> Any:
        if len(point) != self.nvars:
            raise ShapeError(f"point has {len(point)} coordinates, expected {self.nvars}")
        acc = self.domain.zero
        for exp, c in self.terms.items():
            term = c
            for x, e in zip(point, exp):
                if e:
                    term = term * x**e
            acc = acc + term
        return acc

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            mono = "*".join(f"t{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e)
            c = self.domain.format(self.terms[exp])
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def poly_det(entries: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square matrix of polynomials (Leibniz expansion)."""
    n = len(entries)
    if any(len(r) != n for r in entries):
        raise ShapeError("poly_det needs a square matrix")
    if n == 0:
        raise ShapeError("poly_det of an empty matrix")
    first = entries[0][0]
    k = first.nvars
    if any(e.nvars != k for r in entries for e in r):
        raise ShapeError("entries use different numbers of variables")
    total = MultiPoly(first.domain, k)
    for p in itertools.permutations(range(n)):
        term = None
        for i in range(n):
            e = entries[i][p[i]]
            if not e:
                term = None
                break
            term = e if term is None else term * e
        if term is not None:
            total = total + term if _perm_sign(p) > 0 else total - term
    return total
