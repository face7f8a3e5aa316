"""Associative algebras, involutions, quadratic triples and the degree-4 norm triple."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

from .algebra import FiniteAlgebra, check_associative_unital, multiply, sparse_table, split_algebra
from .errors import PreconditionError, ShapeError, UnsupportedDomainError, ValidationError
from .norm import (
    NormAlgebra,
    RelativeAlgebra,
    SplitOracle,
    product_algebra,
    restrict_matrix,
    split_oracle,
)
from .scalars import ZZ, Domain, Matrix, PrimeField, kron, rank_and_kernel, span_rank


class AssocAlgebra:
    """Unital associative algebra with structure constants; ``family`` selects the reduced trace."""

    FAMILIES = ("matrix", "quaternion", "tensor", "generic")

    def __init__(self, base: Domain, constants: Sequence[Sequence[Sequence[Any]]], unit: Sequence[Any],
                 trd: Sequence[Any] | None = None, family: str = "generic", degree: int | None = None,
                 name: str = "", validate: bool = True):
        if family not in self.FAMILIES:
            raise ValidationError(f"unknown algebra family {family!r}")
        r = len(constants)
        if len(unit) != r or any(len(ci) != r or any(len(cij) != r for cij in ci) for ci in constants):
            raise ShapeError(f"structure constants of an algebra of rank {r} must form a {r}x{r}x{r} table")
        self.base = base
        self.rank = r
        self.constants = tuple(tuple(tuple(base(c) for c in cij) for cij in ci) for ci in constants)
        self.unit = tuple(base(c) for c in unit)
        self.table = sparse_table(base, self.constants)
        self.family = family
        if degree is None:
            m = math.isqrt(r)
            degree = m if m * m == r else None
        self.degree = degree
        self.name = name
        self._trd = tuple(base(c) for c in trd) if trd is not None else None
        if validate:
            check_associative_unital(base, self.table, self.unit, r)
            if self._trd is not None:
                self._check_trd()

    def __repr__(self) -> str:
        return f"AssocAlgebra({self.name or self.family}, rank {self.rank} over {self.base.label})"

    def _check_trd(self) -> None:
        if self.degree is not None and self.trd(self.unit) != self.base(self.degree):
            raise ValidationError(f"reduced trace of 1 is not the degree {self.degree}")
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.trd(self.constants[i][j]) != self.trd(self.constants[j][i]):
                    raise ValidationError(f"reduced trace is not symmetric on basis pair ({i}, {j})")

    # elements -------------------------------------------------------------
    def e(self, i: int) -> tuple:
        return tuple(self.base.one if k == i else self.base.zero for k in range(self.rank))

    def mul(self, x: Sequence[Any], y: Sequence[Any]) -> tuple:
        return multiply(self.table, self.base.zero, self.rank, x, y)

    def random_element(self, rng: random.Random, height: int = 4) -> tuple:
        return tuple(self.base.random(rng, height) for _ in range(self.rank))

    def left_matrix(self, x: Sequence[Any]) -> Matrix:
        return Matrix.from_columns(self.base, [self.mul(x, self.e(j)) for j in range(self.rank)])

    def regular_trace(self, x: Sequence[Any]) -> Any:
        return self.left_matrix(x).trace()

    @cached_property
    def trd_functional(self) -> tuple:
        if self._trd is not None:
            return self._trd
        if self.degree is None:
            raise PreconditionError("reduced trace needs a known degree")
        if self.base.characteristic and self.degree % self.base.characteristic == 0:
            raise UnsupportedDomainError(f"(1/{self.degree})·(regular trace) needs {self.degree} invertible")
        inv = self.base.one / self.base(self.degree)
        return tuple(inv * self.regular_trace(self.e(i)) for i in range(self.rank))

    def trd(self, x: Sequence[Any]) -> Any:
        acc = self.base.zero
        for t, c in zip(self.trd_functional, x):
            if t and c:
                acc = acc + t * c
        return acc

    def enveloping_map(self) -> Matrix:
        return enveloping_map(self)

    def is_azumaya(self) -> bool:
        self.base.require_field("the Azumaya test")
        return self.enveloping_map().rank() == self.rank * self.rank


def enveloping_map(A: AssocAlgebra | Any) -> Matrix:
    """Matrix of a⊗b ↦ (x ↦ a·x·b); columns indexed by i·r + j, rows by flattened endomorphisms."""
    r = A.rank
    zero = A.base.zero
    basis = [A.e(i) if hasattr(A, "e") else tuple(A.base.one if k == i else zero for k in range(r)) for i in range(r)]
    cols = []
    left = [[A.mul(basis[i], basis[k]) for k in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(r):
            flat = [zero] * (r * r)
            for k in range(r):
                y = A.mul(left[i][k], basis[j])
                for t, c in enumerate(y):
                    if c:
                        flat[t * r + k] = c
            cols.append(tuple(flat))
    return Matrix.from_columns(A.base, cols)


# constructors --------------------------------------------------------------------

def matrix_algebra(base: Domain, m: int) -> AssocAlgebra:
    """M_m(base) with basis E_ij at index i·m + j; Trd is the matrix trace."""
    r = m * m
    zero, one = base.zero, base.one
    consts = []
    for a in range(r):
        i, j = divmod(a, m)
        row = []
        for b in range(r):
            p, q = divmod(b, m)
            row.append([one if (j == p and c == i * m + q) else zero for c in range(r)])
        consts.append(row)
    unit = [one if a // m == a % m else zero for a in range(r)]
    return AssocAlgebra(base, consts, unit, trd=unit, family="matrix", degree=m, name=f"M_{m}({base.label})",
                        validate=False)


def quaternion_constants(a: Any, b: Any, one: Any, zero: Any, char_two: bool) -> list:
    """Structure constants on 1, i, j, ij (or 1, u, v, uv in characteristic 2) with entries a ring's elements."""
    if not char_two:
        t = [
            [[one, zero, zero, zero], [zero, one, zero, zero], [zero, zero, one, zero], [zero, zero, zero, one]],
            [[zero, one, zero, zero], [a, zero, zero, zero], [zero, zero, zero, one], [zero, zero, a, zero]],
            [[zero, zero, one, zero], [zero, zero, zero, -one], [b, zero, zero, zero], [zero, -b, zero, zero]],
            [[zero, zero, zero, one], [zero, zero, -a, zero], [zero, b, zero, zero], [-(a * b), zero, zero, zero]],
        ]
    else:
        t = [
            [[one, zero, zero, zero], [zero, one, zero, zero], [zero, zero, one, zero], [zero, zero, zero, one]],
            [[zero, one, zero, zero], [a, one, zero, zero], [zero, zero, zero, one], [zero, zero, a, one]],
            [[zero, zero, one, zero], [zero, zero, one, one], [b, zero, zero, zero], [b, b, zero, zero]],
            [[zero, zero, zero, one], [zero, zero, a, zero], [zero, b, zero, zero], [a * b, zero, zero, zero]],
        ]
    return t


def quaternion_conjugation(one: Any, zero: Any, char_two: bool) -> list[list[Any]]:
    if not char_two:
        return [[one if i == j else zero for j in range(4)] if i == 0 else
                [-one if i == j else zero for j in range(4)] for i in range(4)]
    # u ↦ 1 + u, v ↦ v, uv ↦ uv
    rows = [[one if i == j else zero for j in range(4)] for i in range(4)]
    rows[0][1] = one
    return rows


@dataclass
class Involution:
    algebra: AssocAlgebra
    matrix: Matrix

    def __post_init__(self) -> None:
        A = self.algebra
        m = self.matrix
        if m.shape != (A.rank, A.rank):
            raise ShapeError("involution matrix does not match the algebra rank")
        if m @ m != Matrix.identity(A.base, A.rank):
            raise ValidationError("σ∘σ is not the identity")
        if m.apply(A.unit) != A.unit:
            raise ValidationError("σ(1) ≠ 1")
        cols = m.columns
        for i in range(A.rank):
            for j in range(A.rank):
                if m.apply(A.constants[i][j]) != A.mul(cols[j], cols[i]):
                    raise ValidationError(f"σ is not anti-multiplicative on basis pair ({i}, {j})")

    def __call__(self, x: Sequence[Any]) -> tuple:
        return self.matrix.apply(x)

    @cached_property
    def sym_basis(self) -> list[tuple]:
        """Basis of Sym(A, σ) = ker(x ↦ x − σ(x))."""
        A = self.algebra
        return rank_and_kernel(self.matrix - Matrix.identity(A.base, A.rank))[1]


def quaternion_algebra(a: Any, b: Any, base: Domain) -> tuple[AssocAlgebra, Involution]:
    """(a, b) for characteristic ≠ 2, [a, b) in characteristic 2, with its conjugation."""
    a, b = base(a), base(b)
    char_two = base.characteristic == 2
    if (not char_two and (not a or not b)) or (char_two and not b):
        raise ValidationError("degenerate quaternion parameters")
    one, zero = base.one, base.zero
    conj = Matrix(base, quaternion_conjugation(one, zero, char_two), coerce=False)
    consts = quaternion_constants(a, b, one, zero, char_two)
    unit = [one, zero, zero, zero]
    # Trd(x) = coefficient of 1 in x + σ(x)
    trd = [(one if i == 0 else zero) + conj[0, i] for i in range(4)]
    label = f"[{base.format(a)},{base.format(b)})" if char_two else f"({base.format(a)},{base.format(b)})"
    A = AssocAlgebra(base, consts, unit, trd=trd, family="quaternion", degree=2, name=f"{label}_{base.label}")
    return A, Involution(A, conj)


def tensor_assoc(A: AssocAlgebra, B: AssocAlgebra) -> AssocAlgebra:
    if A.base != B.base:
        raise ShapeError("tensor product of algebras over different bases")
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
    ta, tb = A.trd_functional, B.trd_functional
    trd = [ta[k // m] * tb[k % m] for k in range(n * m)]
    deg = A.degree * B.degree if A.degree and B.degree else None
    return AssocAlgebra(base, consts, unit, trd=trd, family="tensor", degree=deg, name=f"{A.name}⊗{B.name}",
                        validate=False)


def tensor_involution(s1: Involution, s2: Involution, algebra: AssocAlgebra | None = None) -> Involution:
    A = algebra or tensor_assoc(s1.algebra, s2.algebra)
    return Involution(A, kron(s1.matrix, s2.matrix))


def adjoint_involution(gram: Matrix) -> Involution:
    """σ(a) = G⁻¹ aᵀ G on M_m, for an invertible Gram matrix G."""
    if not gram.is_square:
        raise ShapeError("Gram matrix must be square")
    if gram.det() == 0:
        raise ValidationError("Gram matrix is singular")
    m = gram.nrows
    base = gram.domain
    inv = gram.inverse()
    A = matrix_algebra(base, m)
    cols = []
    for a in range(m * m):
        i, j = divmod(a, m)
        # G⁻¹ E_ji G = (G⁻¹ e_j)(e_iᵀ G)
        left = inv.column(j)
        right = gram.rows[i]
        cols.append(tuple(left[r] * right[c] for r in range(m) for c in range(m)))
    return Involution(A, Matrix.from_columns(base, cols))


def standard_symplectic(n: int, base: Domain = ZZ) -> Matrix:
    """J_n = [[0, −I_n], [I_n, 0]]."""
    zero, one = base.zero, base.one
    rows = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = -one
        rows[n + i][i] = one
    return Matrix(base, rows, coerce=False)


class InvolutionKind(str, enum.Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    WEAKLY_SYMPLECTIC = "weakly-symplectic"
    UNDETERMINED = "undetermined"


def involution_type(sigma: Involution) -> InvolutionKind:
    A = sigma.algebra
    A.base.require_field("involution_type")
    m = A.degree
    if m is None:
        raise PreconditionError("involution_type needs the degree of the algebra")
    if A.base.characteristic == 2:
        image = sigma.matrix + Matrix.identity(A.base, A.rank)
        try:
            image.solve(A.unit)
        except ValueError:
            return InvolutionKind.WEAKLY_SYMPLECTIC
        return InvolutionKind.SYMPLECTIC
    k = len(sigma.sym_basis)
    if k == m * (m + 1) // 2:
        return InvolutionKind.ORTHOGONAL
    if k == m * (m - 1) // 2:
        return InvolutionKind.SYMPLECTIC
    return InvolutionKind.UNDETERMINED


def _is_orthogonal_kind(kind: InvolutionKind, characteristic: int) -> bool:
    if characteristic == 2:
        return kind in (InvolutionKind.SYMPLECTIC, InvolutionKind.WEAKLY_SYMPLECTIC)
    return kind == InvolutionKind.ORTHOGONAL


@dataclass
class QuadraticTriple:
    """(A, σ, f) with f given by its values on the computed basis of Sym(A, σ)."""

    algebra: AssocAlgebra
    involution: Involution
    sym_basis: list[tuple]
    f_values: list[Any]

    @cached_property
    def _sym_matrix(self) -> Matrix:
        return Matrix.from_columns(self.algebra.base, self.sym_basis)

    def f(self, s: Sequence[Any]) -> Any:
        if tuple(self.involution(s)) != tuple(s):
            raise ValidationError("f is only defined on symmetric elements")
        coords = self._sym_matrix.solve(list(s))
        acc = self.algebra.base.zero
        for c, v in zip(coords, self.f_values):
            acc = acc + c * v
        return acc

    @property
    def kind(self) -> InvolutionKind:
        return involution_type(self.involution)

    def verify(self) -> dict:
        """Check the triple axioms exactly; raises ValidationError on failure."""
        A = self.algebra
        if not _is_orthogonal_kind(self.kind, A.base.characteristic):
            raise ValidationError(f"σ is {self.kind.value}, not orthogonal")
        for i in range(A.rank):
            x = A.e(i)
            s = tuple(a + b for a, b in zip(x, self.involution(x)))
            if self.f(s) != A.trd(x):
                raise ValidationError(f"f(x + σ(x)) ≠ Trd(x) for basis element {i}")
        return {"rank": A.rank, "degree": A.degree, "dim_sym": len(self.sym_basis), "involution": self.kind.value,
                "axioms_checked": A.rank}


def half_trace_triple(A: AssocAlgebra, sigma: Involution) -> QuadraticTriple:
    """(A, σ, ½·Trd|Sym), the unique choice when 2 is invertible."""
    if A.base.characteristic == 2:
        raise UnsupportedDomainError("f = ½·Trd needs 2 invertible")
    half = A.base.one / A.base(2)
    basis = sigma.sym_basis
    return QuadraticTriple(A, sigma, basis, [half * A.trd(s) for s in basis])


def tensor_quadratic_pair(s1: Involution, s2: Involution) -> QuadraticTriple:
    for s in (s1, s2):
        if involution_type(s) != InvolutionKind.SYMPLECTIC:
            raise PreconditionError("tensor_quadratic_pair needs two symplectic involutions")
    if s1.algebra.base.characteristic == 2:
        raise UnsupportedDomainError("tensor_quadratic_pair needs 2 invertible")
    A = tensor_assoc(s1.algebra, s2.algebra)
    return half_trace_triple(A, tensor_involution(s1, s2, A))


# the integral split triple ----------------------------------------------------

class IntegralSplitTriple:
    """The split triple on M_{2n}(ℤ), 2n = ∏ 2n_i, built from the standard symplectic forms."""

    def __init__(self, sizes: Sequence[int]):
        if len(sizes) % 2 or not sizes:
            raise PreconditionError("the split triple needs an even number of factors")
        if any(n < 1 for n in sizes):
            raise PreconditionError("factor sizes must be at least 1")
        self.sizes = tuple(sizes)
        self.js = [standard_symplectic(n) for n in sizes]
        self.gram = kron(*self.js)
        self.dim = self.gram.nrows
        self.gram_inverse = self.gram.inverse()

    def b(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(xi * v for xi, v in zip(x, self.gram.apply(y)))

    def q(self, x: Sequence[int]) -> int:
        bb = self.b(x, x)
        if bb % 2:
            raise ValidationError("b(x, x) is odd")
        return bb // 2

    def sigma(self, a: Matrix) -> Matrix:
        return self.gram_inverse @ a.transpose() @ self.gram

    def f(self, s: Matrix) -> int:
        if self.sigma(s) != s:
            raise ValidationError("f_q is only defined on symmetric elements")
        t = s.trace()
        if t % 2:
            raise ValidationError("trace of a symmetric element is odd")
        return t // 2

    def unit_matrix(self, i: int, j: int, base: Domain = ZZ) -> Matrix:
        rows = [[base.zero] * self.dim for _ in range(self.dim)]
        rows[i][j] = base.one
        return Matrix(base, rows, coerce=False)

    @cached_property
    def sigma_on_units(self) -> dict[int, tuple[int, int]]:
        """σ_q(E_u) = ε·E_u′ as u ↦ (u′, ε); σ_q permutes matrix units up to sign."""
        n = self.dim
        out = {}
        for u in range(n * n):
            i, j = divmod(u, n)
            left = self.gram_inverse.column(j)
            right = self.gram.rows[i]
            nz = [(r * n + c, left[r] * right[c]) for r in range(n) for c in range(n) if left[r] and right[c]]
            if len(nz) != 1 or nz[0][1] not in (1, -1):
                raise ValidationError("σ_q does not permute matrix units up to sign")
            out[u] = nz[0]
        return out

    @cached_property
    def sym_basis(self) -> list[tuple]:
        """A ℤ-basis of Sym(M_{2n}(ℤ), σ_q), as flattened integer matrices."""
        n2 = self.dim * self.dim
        basis = []
        for u, (v, eps) in self.sigma_on_units.items():
            if v == u:
                if eps == 1:
                    basis.append(tuple(int(k == u) for k in range(n2)))
            elif u < v:
                basis.append(tuple(1 if k == u else (eps if k == v else 0) for k in range(n2)))
        return basis

    def as_matrix(self, flat: Sequence[Any], base: Domain = ZZ) -> Matrix:
        n = self.dim
        return Matrix(base, [flat[i * n:(i + 1) * n] for i in range(n)])

    def involution_over(self, base: Domain) -> Involution:
        return adjoint_involution(self.gram.map(base, base))

    def reduce(self, p: int) -> QuadraticTriple:
        """The reduction modulo p as a quadratic triple over 𝔽_p, with f from the integral f_q."""
        F = PrimeField(p)
        sigma = self.involution_over(F)
        basis = [tuple(F(x) for x in s) for s in self.sym_basis]
        if span_rank(F, basis, self.dim**2) != len(basis) or len(sigma.sym_basis) != len(basis):
            raise ValidationError(f"integral Sym basis does not reduce to a basis modulo {p}")
        fvals = [F(self.f(self.as_matrix(s))) for s in self.sym_basis]
        return QuadraticTriple(sigma.algebra, sigma, basis, fvals)

    def verify(self, rng: random.Random | None = None, samples: int = 100) -> dict:
        rng = rng or random.Random(0)
        g = self.gram
        if g.transpose() != g:
            raise ValidationError("Gram matrix is not symmetric")
        d = g.det()
        if d not in (1, -1):
            raise ValidationError(f"Gram matrix has determinant {d}")
        if any(g[i, i] % 2 for i in range(self.dim)):
            raise ValidationError("Gram matrix has an odd diagonal entry")
        for _ in range(samples):
            v = [rng.randint(-9, 9) for _ in range(self.dim)]
            if self.b(v, v) % 2:
                raise ValidationError(f"b(v, v) odd at {v}")
        traces = []
        for s in self.sym_basis:
            m = self.as_matrix(s)
            if self.sigma(m) != m:
                raise ValidationError("Sym basis element is not symmetric")
            traces.append(m.trace())
        if any(t % 2 for t in traces):
            raise ValidationError("f_q is not integral on the Sym basis")
        # σ_q against the Kronecker tensor of the factor involutions
        factors = [standard_symplectic(n) for n in self.sizes]
        invs = [f.inverse() for f in factors]

        def units(k: int) -> list[Matrix]:
            return [self.unit_matrix_of(k, u) for u in range(k * k)]

        pieces = [[(x, inv @ x.transpose() @ f) for x in units(f.nrows)] for f, inv in zip(factors, invs)]
        combos: list[tuple[Matrix, Matrix]] = [(Matrix.identity(ZZ, 1), Matrix.identity(ZZ, 1))]
        for piece in pieces:
            combos = [(kron(a, x), kron(b, y)) for a, b in combos for x, y in piece]
        for x, sx in combos:
            if self.sigma(x) != sx:
                raise ValidationError("σ_q differs from the tensor product of the factor involutions")
        return {
            "sizes": list(self.sizes),
            "dim": self.dim,
            "det_gram": d,
            "dim_sym": len(self.sym_basis),
            "kronecker_checks": len(combos),
        }

    @staticmethod
    def unit_matrix_of(k: int, u: int) -> Matrix:
        i, j = divmod(u, k)
        return Matrix(ZZ, [[int(r == i and c == j) for c in range(k)] for r in range(k)], coerce=False)


def split_triple_Z(*sizes: int) -> IntegralSplitTriple:
    return IntegralSplitTriple(sizes)


# algebras over R′ and the norm triple ---------------------------------------------

@dataclass
class RelativeQuaternion:
    algebra: RelativeAlgebra
    involution_entries: list  # R′-matrix of the canonical involution


def quaternion_over(ext: FiniteAlgebra, a: Sequence[Any], b: Sequence[Any]) -> RelativeQuaternion:
    """Quaternion algebra (a, b) over R′, with a, b given by R-coordinates in R′."""
    if ext.base.characteristic == 2:
        raise UnsupportedDomainError("quaternions over R′ are built only where 2 is invertible")
    ea, eb = ext.element(a), ext.element(b)
    if not ea.norm() or not eb.norm():
        raise ValidationError("quaternion parameters must be units of R′")
    one, zero = ext.one, ext.zero
    consts = quaternion_constants(ea, eb, one, zero, False)
    consts = [[[x.coords for x in cij] for cij in ci] for ci in consts]
    unit = [one.coords, zero.coords, zero.coords, zero.coords]
    alg = RelativeAlgebra(ext, consts, unit, name=f"({ext.base.format(a[0])},{ext.base.format(b[0])})" if not any(a[1:]) and not any(b[1:]) else "quaternion")
    inv = [[(one if i == j == 0 else (-one if i == j else zero)).coords for j in range(4)] for i in range(4)]
    return RelativeQuaternion(alg, inv)


def matrix_quaternion_over(ext: FiniteAlgebra) -> RelativeQuaternion:
    """M_2(R′) with the symplectic involution σ_J (the adjugate)."""
    from .norm import matrix_algebra_over

    alg = matrix_algebra_over(ext, 2)
    sj = adjoint_involution(standard_symplectic(1, ext.base)).matrix
    inv = [[tuple(sj[i, j] * u for u in ext.unit) for j in range(4)] for i in range(4)]
    return RelativeQuaternion(alg, inv)


def split_pair(ext: FiniteAlgebra, first: tuple[AssocAlgebra, Involution],
               second: tuple[AssocAlgebra, Involution]) -> RelativeQuaternion:
    """(B_1, B_2) over the split algebra R², with the componentwise involution."""
    (b1, s1), (b2, s2) = first, second
    alg = product_algebra(ext, [(b1.constants, b1.unit), (b2.constants, b2.unit)], name=f"{b1.name}×{b2.name}")
    inv = [[(s1.matrix[i, j], s2.matrix[i, j]) for j in range(b1.rank)] for i in range(b1.rank)]
    return RelativeQuaternion(alg, inv)


def norm_assoc_algebra(na: NormAlgebra, degree: int) -> AssocAlgebra:
    return AssocAlgebra(na.base, na.constants, na.unit, family="generic", degree=degree, name="N(B′)",
                        validate=False)


@dataclass
class NormTriple:
    triple: QuadraticTriple
    norm_algebra: NormAlgebra
    algebra: AssocAlgebra
    sigma: Involution
    report: dict = field(default_factory=dict)


def a1d2_norm(ext: FiniteAlgebra, quat: RelativeQuaternion, check_azumaya: bool = True) -> NormTriple:
    """The degree-4 quadratic triple (N(B), σ_N, ½Trd) for a quaternion algebra B over quadratic étale R′."""
    if ext.rank != 2:
        raise PreconditionError("a1d2_norm needs a quadratic extension")
    if ext.base.characteristic == 2:
        raise UnsupportedDomainError("a1d2_norm needs 2 invertible in the base")
    if not ext.is_etale():
        raise PreconditionError("a1d2_norm needs an étale extension")
    if quat.algebra.rank != 4:
        raise PreconditionError("B must be a quaternion algebra (rank 4 over R′)")
    na = NormAlgebra(quat.algebra)
    algebra = norm_assoc_algebra(na, 4)
    sigma_src = restrict_matrix(ext, quat.involution_entries)
    sigma = Involution(algebra, na.descend(sigma_src))
    triple = half_trace_triple(algebra, sigma)
    report = triple.verify()
    report["f_one"] = ext.base.format(triple.f(algebra.unit))
    report["dim"] = na.dim
    if check_azumaya:
        report["azumaya"] = algebra.is_azumaya()
    return NormTriple(triple, na, algebra, sigma, report)


def compare_with_tensor_pair(nt: NormTriple, pair: QuadraticTriple, oracle: SplitOracle) -> dict:
    """Transport the split norm triple through the oracle and compare with the tensor pair exactly."""
    O = oracle.matrix
    A, T = nt.algebra, pair.algebra
    if O.shape != (T.rank, A.rank):
        raise ShapeError("oracle does not match the algebras")
    cols = O.columns
    for i in range(A.rank):
        for j in range(A.rank):
            if O.apply(A.constants[i][j]) != T.mul(cols[i], cols[j]):
                raise ValidationError(f"oracle is not multiplicative on basis pair ({i}, {j})")
    if O.apply(A.unit) != T.unit:
        raise ValidationError("oracle does not preserve the unit")
    if O @ nt.sigma.matrix != pair.involution.matrix @ O:
        raise ValidationError("oracle does not intertwine the involutions")
    for i in range(A.rank):
        if A.trd(A.e(i)) != T.trd(cols[i]):
            raise ValidationError("reduced traces differ under the oracle")
    for s in nt.triple.sym_basis:
        if nt.triple.f(s) != pair.f(O.apply(s)):
            raise ValidationError("semitraces differ under the oracle")
    return {"structure_constants": A.rank**2, "sym_checked": len(nt.triple.sym_basis)}


@dataclass
class BrauerShadow:
    matrix: Matrix
    norm_algebra: NormAlgebra
    oracle: SplitOracle
    report: dict


def brauer_shadow_split(A: AssocAlgebra, sigma: Involution, rng: random.Random | None = None,
                        samples: int = 100) -> BrauerShadow:
    """N_{F²/F}(A, A) → A ⊗ A → A ⊗ A^op → End_F(A), verified as an algebra isomorphism."""
    if A.family != "quaternion" and not (A.family == "matrix" and A.degree == 2):
        raise PreconditionError("brauer_shadow_split needs a quaternion algebra")
    rng = rng or random.Random(0)
    base = A.base
    ext = split_algebra(base, 2)
    rel = product_algebra(ext, [(A.constants, A.unit), (A.constants, A.unit)])
    na = NormAlgebra(rel)
    oracle = split_oracle(na.nm)
    r = A.rank
    # a ⊗ b ↦ (x ↦ a·x·σ(b))
    cols = []
    for i in range(r):
        for j in range(r):
            sb = sigma(A.e(j))
            flat = [base.zero] * (r * r)
            for k in range(r):
                y = A.mul(A.mul(A.e(i), A.e(k)), sb)
                for t, c in enumerate(y):
                    if c:
                        flat[t * r + k] = c
            cols.append(tuple(flat))
    sandwich = Matrix.from_columns(base, cols)
    M = sandwich @ oracle.matrix
    if M.det() == 0:
        raise ValidationError("composite map is not bijective")

    def as_end(v: Sequence[Any]) -> Matrix:
        flat = M.apply(v)
        return Matrix(base, [flat[t * r:(t + 1) * r] for t in range(r)], coerce=False)

    if as_end(na.unit) != Matrix.identity(base, r):
        raise ValidationError("composite map is not unital")
    for _ in range(samples):
        x = tuple(base.random(rng) for _ in range(na.dim))
        y = tuple(base.random(rng) for _ in range(na.dim))
        if as_end(na.mul(x, y)) != as_end(x) @ as_end(y):
            raise ValidationError("composite map is not multiplicative")
    return BrauerShadow(M, na, oracle, {"dim": na.dim, "bijective": True, "unital": True, "samples": samples})
