"""Finite free commutative algebras given by structure constants."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

from .errors import DomainMismatchError, ShapeError, UnsupportedDomainError, ValidationError
from .scalars import Domain, Matrix, PrimeField, Rationals, SimpleExtension, format_polynomial


def sparse_table(base: Domain, constants: Sequence[Sequence[Sequence[Any]]]) -> tuple:
    """Structure constants as table[i][j] = ((k, c_ijk), ...) with zero entries dropped."""
    return tuple(
        tuple(tuple((k, base(c)) for k, c in enumerate(cij) if c) for cij in ci) for ci in constants
    )


def multiply(table: tuple, zero: Any, rank: int, x: Sequence[Any], y: Sequence[Any]) -> tuple:
    out = [zero] * rank
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = table[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            f = xi * yj
            for k, c in row[j]:
                out[k] = out[k] + f * c
    return tuple(out)


def check_associative_unital(base: Domain, table: tuple, unit: Sequence[Any], rank: int) -> None:
    zero = base.zero
    basis = [tuple(base.one if k == i else zero for k in range(rank)) for i in range(rank)]
    for i in range(rank):
        if multiply(table, zero, rank, unit, basis[i]) != basis[i] or multiply(table, zero, rank, basis[i], unit) != basis[i]:
            raise ValidationError(f"unit vector does not act as the identity on basis element {i}")
    for i in range(rank):
        for j in range(rank):
            eij = multiply(table, zero, rank, basis[i], basis[j])
            for k in range(rank):
                left = multiply(table, zero, rank, eij, basis[k])
                right = multiply(table, zero, rank, basis[i], multiply(table, zero, rank, basis[j], basis[k]))
                if left != right:
                    raise ValidationError(f"structure constants are not associative at basis triple ({i}, {j}, {k})")


class FiniteAlgebra:
    """Commutative, associative, unital algebra of finite rank over a scalar domain.

    ``constants[i][j][k]`` is the coefficient of e_k in e_i·e_j. When the algebra
    is presented as base[x]/(f) in the power basis, ``modulus`` records f so the
    algebra can be promoted to a scalar domain.
    """

    def __init__(
        self,
        base: Domain,
        constants: Sequence[Sequence[Sequence[Any]]],
        unit: Sequence[Any],
        name: str = "",
        modulus: Sequence[Any] | None = None,
        validate: bool = True,
    ):
        d = len(constants)
        if len(unit) != d or any(len(ci) != d or any(len(cij) != d for cij in ci) for ci in constants):
            raise ShapeError(f"structure constants of an algebra of rank {d} must form a {d}x{d}x{d} table")
        self.base = base
        self.rank = d
        self.constants = tuple(tuple(tuple(base(c) for c in cij) for cij in ci) for ci in constants)
        self.unit = tuple(base(c) for c in unit)
        self.table = sparse_table(base, self.constants)
        self.name = name
        self.modulus = tuple(base(c) for c in modulus) if modulus is not None else None
        if validate:
            for i in range(d):
                for j in range(i + 1, d):
                    if self.constants[i][j] != self.constants[j][i]:
                        raise ValidationError(f"structure constants are not commutative at basis pair ({i}, {j})")
            check_associative_unital(base, self.table, self.unit, d)

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name or 'rank ' + str(self.rank)} over {self.base.label})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self.base == other.base and self.constants == other.constants and self.unit == other.unit

    def __hash__(self) -> int:
        return hash((self.base, self.constants))

    # elements -----------------------------------------------------------
    def element(self, coords: Sequence[Any]) -> AlgebraElement:
        if len(coords) != self.rank:
            raise ShapeError(f"{len(coords)} coordinates for an algebra of rank {self.rank}")
        return AlgebraElement(self, tuple(self.base(c) for c in coords))

    def basis(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, tuple(self.base.one if k == i else self.base.zero for k in range(self.rank)))

    @property
    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, (self.base.zero,) * self.rank)

    def random_element(self, rng: random.Random, height: int = 4) -> AlgebraElement:
        return AlgebraElement(self, tuple(self.base.random(rng, height) for _ in range(self.rank)))

    def mul(self, x: Sequence[Any], y: Sequence[Any]) -> tuple:
        return multiply(self.table, self.base.zero, self.rank, x, y)

    # representation, trace, norm ---------------------------------------
    def left_matrix(self, x: Sequence[Any]) -> Matrix:
        cols = [self.mul(x, self.basis(j).coords) for j in range(self.rank)]
        return Matrix.from_columns(self.base, cols)

    def trace(self, x: Sequence[Any]) -> Any:
        return self.left_matrix(x).trace()

    def norm(self, x: Sequence[Any]) -> Any:
        return self.left_matrix(x).det()

    @cached_property
    def basis_matrices(self) -> list[Matrix]:
        return [self.left_matrix(self.basis(i).coords) for i in range(self.rank)]

    def trace_form(self) -> Matrix:
        traces = [m.trace() for m in self.basis_matrices]
        rows = []
        for i in range(self.rank):
            row = []
            for j in range(self.rank):
                acc = self.base.zero
                for k, c in self.table[i][j]:
                    acc = acc + c * traces[k]
                row.append(acc)
            rows.append(row)
        return Matrix(self.base, rows, coerce=False)

    def is_etale(self) -> bool:
        self.base.require_field("the étale test")
        return self.trace_form().det() != 0

    def is_split(self) -> bool:
        """True for the standard split algebra base^d (basis of orthogonal idempotents)."""
        zero, one = self.base.zero, self.base.one
        for i in range(self.rank):
            for j in range(self.rank):
                want = tuple(one if (k == i and i == j) else zero for k in range(self.rank))
                if self.constants[i][j] != want:
                    return False
        return self.unit == (one,) * self.rank

    def as_domain(self) -> SimpleExtension:
        """The algebra as a scalar domain, when it was presented as a field base[x]/(f)."""
        if self.modulus is None:
            raise UnsupportedDomainError(f"{self!r} was not presented as base[x]/(f)")
        if isinstance(self.base, (Rationals, PrimeField)) and len(self.modulus) - 1 == 1:
            return self.base  # type: ignore[return-value]
        return SimpleExtension(self.base, self.modulus)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    parent: FiniteAlgebra
    coords: tuple

    def _coords_of(self, other: Any) -> tuple:
        if isinstance(other, AlgebraElement):
            if other.parent is not self.parent and other.parent != self.parent:
                raise DomainMismatchError("elements of different algebras")
            return other.coords
        c = self.parent.base(other)
        return tuple(c * u for u in self.parent.unit)

    def __add__(self, other: Any) -> AlgebraElement:
        o = self._coords_of(other)
        return AlgebraElement(self.parent, tuple(a + b for a, b in zip(self.coords, o)))

    __radd__ = __add__

    def __sub__(self, other: Any) -> AlgebraElement:
        o = self._coords_of(other)
        return AlgebraElement(self.parent, tuple(a - b for a, b in zip(self.coords, o)))

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.parent, self.parent.mul(self.coords, self._coords_of(other)))
        c = self.parent.base(other)
        return AlgebraElement(self.parent, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> AlgebraElement:
        out = self.parent.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgebraElement):
            return self.parent == other.parent and self.coords == other.coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def regular_rep(self) -> Matrix:
        return self.parent.left_matrix(self.coords)

    def norm(self) -> Any:
        return self.parent.norm(self.coords)

    def trace(self) -> Any:
        return self.parent.trace(self.coords)

    def __repr__(self) -> str:
        fmt = self.parent.base.format
        return f"AlgebraElement([{', '.join(fmt(c) for c in self.coords)}])"


def regular_rep(a: AlgebraElement) -> Matrix:
    return a.regular_rep()


def norm_element(a: AlgebraElement) -> Any:
    return a.norm()


def is_etale(A: FiniteAlgebra) -> bool:
    return A.is_etale()


# constructors -------------------------------------------------------------

def split_algebra(base: Domain, d: int) -> FiniteAlgebra:
    zero, one = base.zero, base.one
    consts = [[[one if (k == i and i == j) else zero for k in range(d)] for j in range(d)] for i in range(d)]
    return FiniteAlgebra(base, consts, [one] * d, name=f"{base.label}^{d}")


def polynomial_algebra(base: Domain, modulus: Sequence[Any], name: str | None = None) -> FiniteAlgebra:
    """base[x]/(f) in the power basis 1, x, ..., x^(d-1); f monic, coefficients constant term first."""
    mod = [base(c) for c in modulus]
    d = len(mod) - 1
    if d < 1 or mod[-1] != 1:
        raise ValidationError("polynomial_algebra needs a monic modulus of degree at least 1")
    zero, one = base.zero, base.one
    # powers x^0 .. x^(2d-2) reduced modulo f
    powers: list[list[Any]] = []
    cur = [one] + [zero] * (d - 1)
    for _ in range(2 * d - 1):
        powers.append(cur)
        top = cur[-1]
        nxt = [zero] + cur[:-1]
        cur = [a - top * m for a, m in zip(nxt, mod[:d])]
    consts = [[powers[i + j] for j in range(d)] for i in range(d)]
    label = name or f"{base.label}[x]/({format_polynomial(mod)})"
    return FiniteAlgebra(base, consts, powers[0], name=label, modulus=mod)


def quadratic_algebra(base: Domain, c: Any) -> FiniteAlgebra:
    """base[x]/(x² − c)."""
    c = base(c)
    return polynomial_algebra(base, [-c, base.zero, base.one])


def dual_numbers(base: Domain) -> FiniteAlgebra:
    """base[x]/(x²), the standard non-reduced rank-2 algebra."""
    return polynomial_algebra(base, [0, 0, 1])


def algebra_of_field(K: SimpleExtension) -> FiniteAlgebra:
    """The extension field K viewed as an algebra over its base."""
    return polynomial_algebra(K.base, K.modulus, name=K.label)


def tensor_algebras(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    if A.base != B.base:
        raise DomainMismatchError(f"tensor product of algebras over {A.base} and {B.base}")
    base = A.base
    n, m = A.rank, B.rank
    zero = base.zero
    consts = []
    for i in range(n * m):
        ia, ib = divmod(i, m)
        row = []
        for j in range(n * m):
            ja, jb = divmod(j, m)
            ca, cb = A.constants[ia][ja], B.constants[ib][jb]
            row.append([ca[k // m] * cb[k % m] if ca[k // m] and cb[k % m] else zero for k in range(n * m)])
        consts.append(row)
    unit = [A.unit[k // m] * B.unit[k % m] for k in range(n * m)]
    return FiniteAlgebra(base, consts, unit, name=f"({A.name})⊗({B.name})")


# base change ---------------------------------------------------------------

class FieldEmbedding:
    """A ring map source → target between scalar domains, the target a field.

    For an extension source the map is fixed by the image of the generator,
    which must be a root of the source modulus in the target.
    """

    def __init__(self, source: Domain, target: Domain, generator_image: Any = None):
        if not target.is_field:
            raise UnsupportedDomainError(f"base change target {target.label} is not a field")
        if source.characteristic != target.characteristic:
            raise UnsupportedDomainError(
                f"no ring map {source.label} → {target.label}: characteristics {source.characteristic} and "
                f"{target.characteristic} differ"
            )
        self.source = source
        self.target = target
        self.generator_image = None
        if isinstance(source, SimpleExtension):
            if generator_image is None:
                if source != target:
                    raise UnsupportedDomainError(f"no generator image given for {source.label} → {target.label}")
                generator_image = target.generator  # type: ignore[attr-defined]
            g = target(generator_image)
            acc = target.zero
            for c in reversed(source.modulus):
                acc = acc * g + self._base_map(c)
            if acc:
                raise ValidationError(f"{target.format(g)} is not a root of the modulus of {source.label}")
            self.generator_image = g
            self._powers = [target.one]
            for _ in range(source.degree - 1):
                self._powers.append(self._powers[-1] * g)
        elif isinstance(source, (Rationals, PrimeField)):
            pass
        else:
            raise UnsupportedDomainError(f"base change from {source.label} is not supported")

    def _base_map(self, c: Any) -> Any:
        return self.target(c)

    def __call__(self, x: Any) -> Any:
        if isinstance(self.source, SimpleExtension):
            x = self.source(x)
            acc = self.target.zero
            for c, p in zip(x.c, self._powers):
                if c:
                    acc = acc + self._base_map(c) * p
            return acc
        return self.target(self.source(x))

    def matrix(self, m: Matrix) -> Matrix:
        return m.map(self, self.target)

    def compose(self, first: FieldEmbedding) -> FieldEmbedding:
        """self ∘ first."""
        if first.target != self.source:
            raise DomainMismatchError("embeddings do not compose")
        gen = self(first.generator_image) if first.generator_image is not None else None
        return FieldEmbedding(first.source, self.target, gen)

    @classmethod
    def identity(cls, domain: Domain) -> FieldEmbedding:
        gen = domain.generator if isinstance(domain, SimpleExtension) else None
        return cls(domain, domain, gen)

    def __repr__(self) -> str:
        return f"FieldEmbedding({self.source.label} → {self.target.label})"


def base_change(A: FiniteAlgebra, target: FieldEmbedding | Domain | FiniteAlgebra, generator_image: Any = None) -> FiniteAlgebra:
    """A ⊗ Q for a field Q, with structure constants mapped along the embedding."""
    if isinstance(target, FiniteAlgebra):
        target = target.as_domain()
    emb = target if isinstance(target, FieldEmbedding) else FieldEmbedding(A.base, target, generator_image)
    if emb.source != A.base:
        raise DomainMismatchError(f"embedding starts at {emb.source.label}, algebra is over {A.base.label}")
    consts = [[[emb(c) for c in cij] for cij in ci] for ci in A.constants]
    mod = [emb(c) for c in A.modulus] if A.modulus is not None else None
    return FiniteAlgebra(emb.target, consts, [emb(c) for c in A.unit], name=f"{A.name}⊗{emb.target.label}",
                         modulus=mod, validate=False)
