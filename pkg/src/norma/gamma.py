"""Divided powers Γ^d(M) of a free module, realized as symmetric tensors.

Basis vectors are orbit sums of pure tensors e_{i_1}⊗…⊗e_{i_d}, indexed by
exponent vectors a (|a| = d) in ascending lexicographic order. The orbit-sum
coordinate of a symmetric tensor equals its coefficient at the sorted index
tuple, so all products below are computed by expanding tensors and keeping
only sorted keys. Nothing divides by factorials, so every characteristic works.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

from .algebra import FiniteAlgebra
from .errors import ShapeError, ValidationError
from .scalars import Domain, Matrix, MultiPoly, poly_det


@lru_cache(maxsize=None)
def exponent_vectors(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All a ∈ ℕ^n with |a| = d, ascending lexicographic."""
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d + 1):
        for rest in exponent_vectors(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def multiset_of(a: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, e in enumerate(a) for _ in range(e))


def exponents_of(key: Sequence[int], n: int) -> tuple[int, ...]:
    a = [0] * n
    for i in key:
        a[i] += 1
    return tuple(a)


@lru_cache(maxsize=None)
def orbit(key: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Distinct rearrangements of a sorted index tuple."""
    return tuple(sorted(set(itertools.permutations(key))))


def expand_sorted(acc: dict[tuple[int, ...], Any], factors: Sequence[dict[int, Any]], scale: Any = 1) -> None:
    """acc += scale · (factors[0] ⊗ … ⊗ factors[d-1]), keeping only nondecreasing keys."""
    d = len(factors)
    if d == 0:
        acc[()] = acc.get((), 0) + scale
        return
    items = [sorted(f.items()) for f in factors]

    def rec(pos: int, lo: int, key: tuple[int, ...], coeff: Any) -> None:
        if pos == d:
            acc[key] = acc.get(key, 0) + coeff
            return
        for idx, c in items[pos]:
            if idx >= lo:
                rec(pos + 1, idx, key + (idx,), coeff * c)

    rec(0, 0, (), scale)


class GammaSpace:
    """Γ^d of the free module base^n."""

    def __init__(self, base: Domain, n: int, d: int):
        if n < 0 or d < 0:
            raise ShapeError("rank and degree must be non-negative")
        self.base = base
        self.n = n
        self.d = d
        self.basis = exponent_vectors(n, d)
        self.index = {a: i for i, a in enumerate(self.basis)}
        self.keys = tuple(multiset_of(a) for a in self.basis)
        self.key_index = {k: i for i, k in enumerate(self.keys)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"GammaSpace(n={self.n}, d={self.d}, over {self.base.label})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GammaSpace):
            return NotImplemented
        return (self.base, self.n, self.d) == (other.base, other.n, other.d)

    def __hash__(self) -> int:
        return hash((self.base, self.n, self.d))

    def element(self, coords: Sequence[Any]) -> GammaElement:
        if len(coords) != self.dim:
            raise ShapeError(f"{len(coords)} coordinates for Γ^{self.d} of dimension {self.dim}")
        return GammaElement(self, tuple(coords))

    def basis_element(self, a: Sequence[int]) -> GammaElement:
        a = tuple(a)
        if a not in self.index:
            raise ShapeError(f"{a} is not an exponent vector of degree {self.d} in {self.n} variables")
        i = self.index[a]
        z, o = self.base.zero, self.base.one
        return GammaElement(self, tuple(o if k == i else z for k in range(self.dim)))

    def zero_vector(self) -> tuple:
        return (self.base.zero,) * self.dim

    def from_sorted(self, acc: dict[tuple[int, ...], Any], domain: Domain | None = None) -> tuple:
        z = (domain or self.base).zero
        out = [z] * self.dim
        for key, c in acc.items():
            if c:
                out[self.key_index[key]] = out[self.key_index[key]] + c
        return tuple(out)

    def pure_coords(self, m: Sequence[Any]) -> tuple:
        """Coordinates of m^{⊗d}; entries may live in any ring containing m's coordinates."""
        if len(m) != self.n:
            raise ShapeError(f"module element of length {len(m)}, expected {self.n}")
        out = []
        for a in self.basis:
            c: Any = 1
            for x, e in zip(m, a):
                if e:
                    c = c * x**e
            out.append(c)
        if out and all(isinstance(c, int) for c in out):
            out = [self.base(c) for c in out]
        return tuple(out)


@dataclass(frozen=True)
class GammaElement:
    parent: GammaSpace
    coords: tuple

    def __add__(self, other: GammaElement) -> GammaElement:
        if other.parent != self.parent:
            raise ShapeError("adding elements of different divided-power spaces")
        return GammaElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: GammaElement) -> GammaElement:
        if other.parent != self.parent:
            raise ShapeError("subtracting elements of different divided-power spaces")
        return GammaElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, c: Any) -> GammaElement:
        if isinstance(c, GammaElement):
            return divided_product(self, c)
        return GammaElement(self.parent, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        fmt = self.parent.base.format
        terms = [f"{fmt(c)}·basis{a}" for a, c in zip(self.parent.basis, self.coords) if c]
        return " + ".join(terms) if terms else "0"


def gamma_pure(space: GammaSpace, m: Sequence[Any]) -> GammaElement:
    """γ^d(m) = m^{⊗d} in orbit-sum coordinates."""
    return GammaElement(space, space.pure_coords([space.base(x) for x in m]))


def divided_product(u: GammaElement, v: GammaElement) -> GammaElement:
    """Shuffle product Γ^{d1} × Γ^{d2} → Γ^{d1+d2}."""
    if u.parent.n != v.parent.n or u.parent.base != v.parent.base:
        raise ShapeError("divided product of elements over different modules")
    target = GammaSpace(u.parent.base, u.parent.n, u.parent.d + v.parent.d)
    out = list(target.zero_vector())
    for a, x in zip(u.parent.basis, u.coords):
        if not x:
            continue
        for b, y in zip(v.parent.basis, v.coords):
            if not y:
                continue
            mult = 1
            for ai, bi in zip(a, b):
                mult *= math.comb(ai + bi, ai)
            k = target.index[tuple(ai + bi for ai, bi in zip(a, b))]
            out[k] = out[k] + mult * x * y
    return GammaElement(target, tuple(out))


def sparse_columns(m: Matrix) -> list[dict[int, Any]]:
    return [{i: x for i, x in enumerate(col) if x} for col in m.columns]


class ActionTable:
    """Bilinear action A × M → M given by the matrices of each A-basis element on M."""

    def __init__(self, base: Domain, matrices: Sequence[Matrix]):
        if not matrices:
            raise ShapeError("an action needs at least one acting basis element")
        self.base = base
        self.rank = len(matrices)
        self.dim = matrices[0].ncols
        if any(m.shape != (self.dim, self.dim) for m in matrices):
            raise ShapeError("action matrices must be square of one size")
        self.matrices = tuple(matrices)
        self.cols = [sparse_columns(m) for m in matrices]

    @classmethod
    def regular(cls, A: FiniteAlgebra) -> ActionTable:
        return cls(A.base, A.basis_matrices)


def mu_basis(action: ActionTable, ka: tuple[int, ...], km: tuple[int, ...]) -> dict[tuple[int, ...], Any]:
    """Orbit-sum product basis(ka) · basis(km), as sorted-key coefficients."""
    acc: dict[tuple[int, ...], Any] = {}
    for s in orbit(ka):
        for t in orbit(km):
            factors = [action.cols[si][ti] for si, ti in zip(s, t)]
            if all(factors):
                expand_sorted(acc, factors)
    return acc


def mu_table(action: ActionTable, ga: GammaSpace, gm: GammaSpace) -> list[list[tuple]]:
    """table[i][j] = coordinates of basis_i(Γ^d A) · basis_j(Γ^d M)."""
    return [[gm.from_sorted(mu_basis(action, ka, km)) for km in gm.keys] for ka in ga.keys]


def mu_action(action: ActionTable | FiniteAlgebra, ga: GammaElement, gm: GammaElement) -> GammaElement:
    """Componentwise action Γ^d(A) × Γ^d(M) → Γ^d(M)."""
    if isinstance(action, FiniteAlgebra):
        action = ActionTable.regular(action)
    if ga.parent.n != action.rank or gm.parent.n != action.dim or ga.parent.d != gm.parent.d:
        raise ShapeError("mu_action: divided-power spaces do not match the action")
    space = gm.parent
    out = list(space.zero_vector())
    for ka, x in zip(ga.parent.keys, ga.coords):
        if not x:
            continue
        for km, y in zip(space.keys, gm.coords):
            if not y:
                continue
            xy = x * y
            for key, c in mu_basis(action, ka, km).items():
                k = space.key_index[key]
                out[k] = out[k] + xy * c
    return GammaElement(space, tuple(out))


def gamma_map(phi: Matrix, source: GammaSpace, target: GammaSpace) -> Matrix:
    """Matrix of Γ^d(φ) for a linear map φ: base^n → base^m."""
    if phi.shape != (target.n, source.n) or source.d != target.d:
        raise ShapeError("gamma_map: matrix shape does not match the spaces")
    cols_phi = sparse_columns(phi)
    columns = []
    for key in source.keys:
        acc: dict[tuple[int, ...], Any] = {}
        for s in orbit(key):
            factors = [cols_phi[i] for i in s]
            if all(factors):
                expand_sorted(acc, factors)
        columns.append(target.from_sorted(acc, phi.domain))
    return Matrix.from_columns(phi.domain, columns, nrows=target.dim) if columns else Matrix.zeros(phi.domain, target.dim, 0)


def determinant_polynomial(A: FiniteAlgebra) -> MultiPoly:
    """det(Σ t_i · regular_rep(e_i)), the generic norm of A."""
    d = A.rank
    mats = A.basis_matrices
    entries = [
        [MultiPoly.linear(A.base, [mats[i][r, c] for i in range(d)]) for c in range(d)] for r in range(d)
    ]
    return poly_det(entries)


def pi_map(A: FiniteAlgebra) -> tuple:
    """The functional π on Γ^d(A), d = rank A, as coordinates on the orbit-sum basis."""
    poly = determinant_polynomial(A)
    space = GammaSpace(A.base, A.rank, A.rank)
    return tuple(poly.coefficient(a) for a in space.basis)


def law_eval_gamma(space: GammaSpace, ms: Sequence[Sequence[Any]]) -> list[MultiPoly]:
    """Coordinates of γ^d(Σ m_i ⊗ t_i) as polynomials in t_1..t_k."""
    k = len(ms)
    if any(len(m) != space.n for m in ms):
        raise ShapeError("law_eval_gamma: module elements of the wrong length")
    coords = [MultiPoly.linear(space.base, [m[j] for m in ms]) if k else MultiPoly(space.base, 0) for j in range(space.n)]
    out = []
    for a in space.basis:
        p = MultiPoly.constant(space.base, k, 1)
        for x, e in zip(coords, a):
            if e:
                p = p * x**e
        out.append(p)
    return out


@dataclass(frozen=True)
class GammaRelationsReport:
    base: str
    n: int
    d: int
    samples: int
    dimensions: dict
    checks: int


def check_gamma_relations(base: Domain, n: int, d: int, rng: random.Random | None = None,
                          samples: int = 100) -> GammaRelationsReport:
    """Verify the defining relations of divided powers in degrees ≤ d on random elements."""
    rng = rng or random.Random(0)
    spaces = [GammaSpace(base, n, k) for k in range(d + 1)]
    dims = {}
    for k, sp in enumerate(spaces):
        want = math.comb(n + k - 1, k) if n else int(k == 0)
        if sp.dim != want:
            raise ValidationError(f"dimension of Γ^{k}(rank {n}) is {sp.dim}, expected {want}")
        dims[k] = sp.dim
    checks = 0

    def fail(rel: str, detail: str) -> None:
        raise ValidationError(f"divided-power relation '{rel}' fails over {base.label} (n={n}, d={d}): {detail}")

    for _ in range(samples):
        m = [base.random(rng) for _ in range(n)]
        m2 = [base.random(rng) for _ in range(n)]
        r = base.random(rng)
        if gamma_pure(spaces[0], m).coords != (base.one,):
            fail("γ^0(m) = 1", f"m = {m}")
        checks += 1
        for k in range(1, d + 1):
            sp = spaces[k]
            g = gamma_pure(sp, m)
            scaled = gamma_pure(sp, [r * x for x in m])
            if scaled.coords != tuple(r**k * c for c in g.coords):
                fail("γ^k(rm) = r^k γ^k(m)", f"k={k}, r={r}")
            total = gamma_pure(sp, [x + y for x, y in zip(m, m2)])
            acc = sp.element(sp.zero_vector())
            for j in range(k + 1):
                acc = acc + divided_product(gamma_pure(spaces[j], m), gamma_pure(spaces[k - j], m2))
            if acc.coords != total.coords:
                fail("γ^k(m+m') = Σ γ^j(m)γ^(k-j)(m')", f"k={k}")
            for k1 in range(k + 1):
                prod = divided_product(gamma_pure(spaces[k1], m), gamma_pure(spaces[k - k1], m))
                if prod.coords != tuple(math.comb(k, k1) * c for c in g.coords):
                    fail("γ^a(m)γ^b(m) = C(a+b,a) γ^(a+b)(m)", f"a={k1}, b={k - k1}")
            checks += 3
    return GammaRelationsReport(base.label, n, d, samples, dims, checks)
