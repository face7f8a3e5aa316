"""Exact scalar domains: rationals, integers, prime fields and simple extensions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator, Sequence

from ..errors import DomainMismatchError, InputParseError, UnsupportedDomainError, ValidationError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Domain:
    """Common interface of the scalar domains.

    Elements are plain Python objects (``Fraction``, ``int``, ``Fp``, ``ExtElem``)
    supporting the arithmetic operators; the domain object coerces, parses,
    formats and samples them.
    """

    is_field: bool = True
    characteristic: int = 0

    @property
    def zero(self) -> Any:
        return self(0)

    @property
    def one(self) -> Any:
        return self(1)

    def __call__(self, value: Any) -> Any:
        raise NotImplementedError

    def parse(self, text: str) -> Any:
        return self(text)

    def format(self, x: Any) -> str:
        return str(x)

    def random(self, rng: random.Random, height: int = 4) -> Any:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> Iterator[Any]:
        raise UnsupportedDomainError(f"{self.label} is not finite")

    @property
    def label(self) -> str:
        raise NotImplementedError

    def require_field(self, what: str = "this operation") -> None:
        if not self.is_field:
            raise UnsupportedDomainError(f"{what} needs a field, got {self.label}")

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Rationals(Domain):
    is_field = True
    characteristic = 0

    def __call__(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except ValueError as exc:
                raise InputParseError(f"not a rational number: {value!r}") from exc
        raise DomainMismatchError(f"cannot coerce {value!r} into Q")

    def random(self, rng: random.Random, height: int = 4) -> Fraction:
        return Fraction(rng.randint(-height, height), rng.randint(1, 3))

    @property
    def label(self) -> str:
        return "Q"


@dataclass(frozen=True)
class Integers(Domain):
    is_field = False
    characteristic = 0

    def __call__(self, value: Any) -> int:
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction) and value.denominator == 1:
            return value.numerator
        if isinstance(value, str):
            try:
                return int(value.strip())
            except ValueError as exc:
                raise InputParseError(f"not an integer: {value!r}") from exc
        raise DomainMismatchError(f"cannot coerce {value!r} into Z")

    def random(self, rng: random.Random, height: int = 4) -> int:
        return rng.randint(-height, height)

    @property
    def label(self) -> str:
        return "Z"


class Fp:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, other: Any) -> int | None:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise DomainMismatchError(f"mixing GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return None

    def __add__(self, other: Any) -> Fp:
        o = self._other(other)
        return NotImplemented if o is None else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Fp:
        o = self._other(other)
        return NotImplemented if o is None else Fp(self.v - o, self.p)

    def __rsub__(self, other: Any) -> Fp:
        o = self._other(other)
        return NotImplemented if o is None else Fp(o - self.v, self.p)

    def __mul__(self, other: Any) -> Fp:
        o = self._other(other)
        return NotImplemented if o is None else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> Fp:
        if self.v == 0:
            raise ZeroDivisionError(f"0 is not invertible in GF({self.p})")
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other: Any) -> Fp:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other: Any) -> Fp:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(o, self.p) * self.inverse()

    def __neg__(self) -> Fp:
        return Fp(-self.v, self.p)

    def __pos__(self) -> Fp:
        return self

    def __pow__(self, k: int) -> Fp:
        if k < 0:
            return self.inverse() ** (-k)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.v, self.p))

    def __bool__(self) -> bool:
        return self.v != 0

    def __repr__(self) -> str:
        return f"Fp({self.v}, {self.p})"

    def __str__(self) -> str:
        return str(self.v)


@dataclass(frozen=True)
class PrimeField(Domain):
    p: int
    is_field = True

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValidationError(f"GF({self.p}): {self.p} is not prime")

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.p

    def __call__(self, value: Any) -> Fp:
        if isinstance(value, Fp):
            if value.p != self.p:
                raise DomainMismatchError(f"element of GF({value.p}) used in GF({self.p})")
            return value
        if isinstance(value, bool):
            return Fp(int(value), self.p)
        if isinstance(value, int):
            return Fp(value, self.p)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DomainMismatchError(f"{value} has no image in GF({self.p})")
            return Fp(value.numerator * pow(value.denominator, -1, self.p), self.p)
        if isinstance(value, str):
            return self(Rationals()(value))
        raise DomainMismatchError(f"cannot coerce {value!r} into GF({self.p})")

    def random(self, rng: random.Random, height: int = 4) -> Fp:
        return Fp(rng.randrange(self.p), self.p)

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> Iterator[Fp]:
        return (Fp(v, self.p) for v in range(self.p))

    @property
    def label(self) -> str:
        return f"GF({self.p})"


def polynomial_coefficients(text: str, name: str = "x") -> list[Fraction]:
    """Rational coefficients (constant term first) of a univariate polynomial string."""
    import sympy

    symbol = sympy.Symbol(name)
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={name: symbol})
        poly = sympy.Poly(expr, symbol)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as exc:
        raise InputParseError(f"not a polynomial in {name}: {text!r}") from exc
    coeffs: list[Fraction] = []
    for c in reversed(poly.all_coeffs()):
        if not c.is_Rational:
            raise InputParseError(f"non-rational coefficient {c} in {text!r}")
        coeffs.append(Fraction(int(c.p), int(c.q)))
    return coeffs or [Fraction(0)]


def format_polynomial(coeffs: Sequence[Any], name: str = "x") -> str:
    terms: list[str] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        cs = str(c)
        if k == 0:
            terms.append(cs)
            continue
        mono = name if k == 1 else f"{name}^{k}"
        if cs == "1":
            terms.append(mono)
        elif cs == "-1":
            terms.append("-" + mono)
        else:
            terms.append(f"{cs}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _solve_small(rows: list[list[Any]], rhs: list[Any]) -> list[Any]:
    """Solve a small nonsingular square system over a field by Gaussian elimination."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


@dataclass(frozen=True)
class SimpleExtension(Domain):
    """``base[x]/(f)`` for a monic ``f`` asserted irreducible by the caller.

    ``modulus`` holds the coefficients of ``f`` from the constant term up.
    The base is the rationals or a prime field.
    """

    base: Domain
    modulus: tuple
    name: str = "x"
    irreducibility: str = field(default="asserted", compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.base, (Rationals, PrimeField)):
            raise UnsupportedDomainError("extensions are built over Q or a prime field only")
        mod = tuple(self.base(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) < 2:
            raise ValidationError("extension modulus must have degree at least 1")
        if mod[-1] != 1:
            raise ValidationError(f"extension modulus {format_polynomial(mod, self.name)} is not monic")
        if self.degree <= 3 and self._has_root():
            raise ValidationError(
                f"{format_polynomial(mod, self.name)} has a root in {self.base.label}, so it is reducible"
            )

    def _has_root(self) -> bool:
        if self.degree == 1:
            return False
        mod = self.modulus

        def value(t: Any) -> Any:
            acc = self.base.zero
            for c in reversed(mod):
                acc = acc * t + c
            return acc

        if isinstance(self.base, PrimeField):
            return any(not value(t) for t in self.base.elements())
        # rational root test on the integer-scaled polynomial
        import math

        den = 1
        for c in mod:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in mod]
        lead, const = ints[-1], ints[0]
        if const == 0:
            return True

        def divisors(n: int) -> list[int]:
            n = abs(n)
            return [k for k in range(1, n + 1) if n % k == 0]

        for p in divisors(const):
            for q in divisors(lead):
                for s in (1, -1):
                    if not value(Fraction(s * p, q)):
                        return True
        return False

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def is_field(self) -> bool:  # type: ignore[override]
        return True

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.base.characteristic

    @cached_property
    def _reduction(self) -> list[tuple]:
        """Coefficient vectors of x^k for k = n .. 2n-2."""
        n = self.degree
        zero = self.base.zero
        rows = []
        cur = [-c for c in self.modulus[:n]]  # x^n
        for _ in range(max(n - 1, 1)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [zero] + cur[:-1]
            cur = [a - top * m for a, m in zip(cur, self.modulus[:n])]
        return rows

    def __call__(self, value: Any) -> ExtElem:
        n = self.degree
        if isinstance(value, ExtElem):
            if value.K != self:
                raise DomainMismatchError(f"element of {value.K.label} used in {self.label}")
            return value
        if isinstance(value, str):
            coeffs = polynomial_coefficients(value, self.name)
            return self._reduce([self.base(c) for c in coeffs])
        if isinstance(value, (list, tuple)):
            return self._reduce([self.base(c) for c in value])
        c = self.base(value)
        return ExtElem((c,) + (self.base.zero,) * (n - 1), self)

    def _reduce(self, coeffs: list[Any]) -> ExtElem:
        n = self.degree
        zero = self.base.zero
        out = list(coeffs[:n]) + [zero] * max(0, n - len(coeffs))
        high = list(coeffs[n:])
        # reduce from the top degree down so the precomputed table suffices
        while high:
            k = n + len(high) - 1
            top = high.pop()
            if not top:
                continue
            if k <= 2 * n - 2:
                row = self._reduction[k - n]
                for i in range(n):
                    out[i] = out[i] + top * row[i]
            else:
                # x^k = x^(k-n) * x^n
                shift = k - n
                for i, m in enumerate(self.modulus[:n]):
                    j = shift + i
                    if j < n:
                        out[j] = out[j] - top * m
                    else:
                        high[j - n] = high[j - n] - top * m
        return ExtElem(tuple(out), self)

    @property
    def generator(self) -> ExtElem:
        return self([0, 1])

    def parse(self, text: str) -> ExtElem:
        return self(text)

    def format(self, x: Any) -> str:
        return format_polynomial(self(x).c, self.name)

    def random(self, rng: random.Random, height: int = 4) -> ExtElem:
        return ExtElem(tuple(self.base.random(rng, height) for _ in range(self.degree)), self)

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite

    def elements(self) -> Iterator[ExtElem]:
        import itertools

        for cs in itertools.product(list(self.base.elements()), repeat=self.degree):
            yield ExtElem(tuple(cs), self)

    @property
    def label(self) -> str:
        return f"{self.base.label}[{self.name}]/({format_polynomial(self.modulus, self.name)})"


class ExtElem:
    """Element of a :class:`SimpleExtension`, stored as base coefficients."""

    __slots__ = ("c", "K")

    def __init__(self, c: tuple, K: SimpleExtension):
        self.c = c
        self.K = K

    def _lift(self, other: Any) -> ExtElem | None:
        if isinstance(other, ExtElem):
            if other.K is not self.K and other.K != self.K:
                raise DomainMismatchError(f"mixing {self.K.label} and {other.K.label}")
            return other
        if isinstance(other, (int, Fraction, Fp)):
            return self.K(other)
        return None

    def __add__(self, other: Any) -> ExtElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExtElem(tuple(a + b for a, b in zip(self.c, o.c)), self.K)

    __radd__ = __add__

    def __neg__(self) -> ExtElem:
        return ExtElem(tuple(-a for a in self.c), self.K)

    def __pos__(self) -> ExtElem:
        return self

    def __sub__(self, other: Any) -> ExtElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExtElem(tuple(a - b for a, b in zip(self.c, o.c)), self.K)

    def __rsub__(self, other: Any) -> ExtElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> ExtElem:
        if isinstance(other, (int, Fraction, Fp)):
            return ExtElem(tuple(a * other for a in self.c), self.K)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = self.K.degree
        zero = self.K.base.zero
        prod = [zero] * (2 * n - 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(o.c):
                if b:
                    prod[i + j] = prod[i + j] + a * b
        return self.K._reduce(prod)

    __rmul__ = __mul__

    def inverse(self) -> ExtElem:
        if not self:
            raise ZeroDivisionError(f"0 is not invertible in {self.K.label}")
        n = self.K.degree
        cols = []
        basis = [self.K([0] * i + [1]) for i in range(n)]
        for b in basis:
            cols.append((self * b).c)
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [self.K.base.one] + [self.K.base.zero] * (n - 1)
        return ExtElem(tuple(_solve_small(rows, rhs)), self.K)

    def __truediv__(self, other: Any) -> ExtElem:
        if isinstance(other, (int, Fraction, Fp)):
            if not other:
                raise ZeroDivisionError("division by zero")
            inv = self.K.base(other) ** -1
            return ExtElem(tuple(a * inv for a in self.c), self.K)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> ExtElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> ExtElem:
        if k < 0:
            return self.inverse() ** (-k)
        result = self.K(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExtElem):
            return self.K == other.K and self.c == other.c
        if isinstance(other, (int, Fraction, Fp)):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def __repr__(self) -> str:
        return f"ExtElem({self.K.format(self)!r})"

    def __str__(self) -> str:
        return self.K.format(self)


QQ = Rationals()
ZZ = Integers()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_domain(text: str) -> Domain:
    """Parse "Q", "Z", "GF(p)" or "F_p"."""
    t = text.strip().replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    if t in ("Z", "ZZ"):
        return ZZ
    for prefix in ("GF(", "F_(", "F("):
        if t.startswith(prefix) and t.endswith(")"):
            return _prime_field(t[len(prefix):-1], text)
    if t.startswith("F_") or t.startswith("GF"):
        return _prime_field(t.lstrip("GF_"), text)
    raise InputParseError(f"unknown domain {text!r}")


def _prime_field(digits: str, text: str) -> PrimeField:
    try:
        return PrimeField(int(digits))
    except ValueError as exc:
        raise InputParseError(f"unknown domain {text!r}") from exc
