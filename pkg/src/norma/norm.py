"""The norm functor for a finite free extension R → R′ over a field R.

N(M′) is computed as the quotient of Γ^d_R(M′) (d = rank of R′) by the span
of μ(g, x) − π(g)·x, where g runs over a basis of Γ^d_R(R′) and x over a basis
of Γ^d_R(M′). Quotient coordinates are indexed by the non-pivot columns of the
row-reduced relation matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

from .algebra import FieldEmbedding, FiniteAlgebra, base_change, check_associative_unital, multiply, sparse_table
from .errors import PreconditionError, ShapeError, ValidationError
from .gamma import ActionTable, GammaSpace, gamma_map, law_eval_gamma, mu_basis, pi_map
from .scalars import Domain, Matrix, row_reduce, span_rank

Sparse = dict


def _sparse(v: Sequence[Any]) -> dict[int, Any]:
    return {i: x for i, x in enumerate(v) if x}


def _combine(matrices: Sequence[Matrix], coeffs: Sequence[Any], domain: Domain, size: int) -> Matrix:
    out = Matrix.zeros(domain, size, size)
    for c, m in zip(coeffs, matrices):
        if c:
            out = out + m.scale(c)
    return out


# modules over R' -----------------------------------------------------------

class ExtModule:
    """A finite R′-module given by an R-basis and the matrices of the R′-basis elements acting on it."""

    def __init__(self, ext: FiniteAlgebra, action: Sequence[Matrix], free_rank: int | None = None,
                 name: str = "", validate: bool = True):
        if len(action) != ext.rank:
            raise ShapeError(f"need one action matrix per basis element of R′ ({ext.rank}), got {len(action)}")
        dim = action[0].nrows
        if any(m.shape != (dim, dim) or m.domain != ext.base for m in action):
            raise ShapeError("action matrices must be square, of one size, over the base of R′")
        self.ext = ext
        self.base = ext.base
        self.dim = dim
        self.action = tuple(action)
        self.free_rank = free_rank
        self.name = name
        if validate:
            self._validate()

    def _validate(self) -> None:
        ident = Matrix.identity(self.base, self.dim)
        if self.act(self.ext.unit) != ident:
            raise ValidationError("the unit of R′ does not act as the identity")
        for i in range(self.ext.rank):
            for j in range(i, self.ext.rank):
                if self.action[i] @ self.action[j] != self.act(self.ext.constants[i][j]):
                    raise ValidationError(f"action is not multiplicative on R′ basis pair ({i}, {j})")

    def act(self, r: Sequence[Any]) -> Matrix:
        return _combine(self.action, r, self.base, self.dim)

    def is_linear(self, phi: Matrix, target: ExtModule, twist: Matrix | None = None) -> bool:
        """φ(r·m) = g(r)·φ(m) for all basis r, with g the identity unless a twist is given."""
        for i in range(self.ext.rank):
            image = twist.column(i) if twist is not None else self.ext.basis(i).coords
            if phi @ self.action[i] != target.act(image) @ phi:
                return False
        return True

    def base_change(self, emb: FieldEmbedding) -> ExtModule:
        return ExtModule(base_change(self.ext, emb), [emb.matrix(m) for m in self.action], self.free_rank,
                         name=f"{self.name}⊗{emb.target.label}", validate=False)

    def __repr__(self) -> str:
        return f"ExtModule({self.name or 'dim ' + str(self.dim)} over {self.ext!r})"


def free_module(ext: FiniteAlgebra, n: int) -> ExtModule:
    """R′^n with R-basis e_l·ω_i at index l·d + i."""
    d = ext.rank
    blocks = ext.basis_matrices
    mats = []
    for j in range(d):
        rows = [[ext.base.zero] * (n * d) for _ in range(n * d)]
        for l in range(n):
            for r in range(d):
                for c in range(d):
                    rows[l * d + r][l * d + c] = blocks[j][r, c]
        mats.append(Matrix(ext.base, rows, coerce=False))
    return ExtModule(ext, mats, free_rank=n, name=f"R′^{n}", validate=False)


def split_module(ext: FiniteAlgebra, dims: Sequence[int]) -> ExtModule:
    """E_1 × … × E_d over the split algebra R^d, with E_i = R^{dims[i]} and factor-ordered basis."""
    if not ext.is_split():
        raise PreconditionError("split_module needs the standard split algebra")
    if len(dims) != ext.rank:
        raise ShapeError(f"{len(dims)} factor dimensions for a split algebra of rank {ext.rank}")
    total = sum(dims)
    mats = []
    offset = 0
    for k in dims:
        rows = [[ext.base.zero] * total for _ in range(total)]
        for t in range(offset, offset + k):
            rows[t][t] = ext.base.one
        mats.append(Matrix(ext.base, rows, coerce=False))
        offset += k
    free = dims[0] if len(set(dims)) == 1 else None
    return ExtModule(ext, mats, free_rank=free, name="×".join(f"R^{k}" for k in dims), validate=False)


# the norm module -----------------------------------------------------------

class NormModule:
    def __init__(self, module: ExtModule):
        ext = module.ext
        ext.base.require_field("the norm quotient")
        self.module = module
        self.ext = ext
        self.base = ext.base
        self.degree = ext.rank
        self.etale = ext.is_etale()
        self.gamma_ext = GammaSpace(self.base, ext.rank, ext.rank)
        self.gamma = GammaSpace(self.base, module.dim, ext.rank)
        self.pi = pi_map(ext)
        self.action = ActionTable(self.base, module.action)
        rows = []
        for ka, p in zip(self.gamma_ext.keys, self.pi):
            for km in self.gamma.keys:
                row = _sparse(self.gamma.from_sorted(mu_basis(self.action, ka, km)))
                j = self.gamma.key_index[km]
                if p:
                    v = row.get(j, 0) - p
                    if v:
                        row[j] = v
                    else:
                        row.pop(j, None)
                if row:
                    rows.append(row)
        self.relations, self.pivots = row_reduce(rows, self.gamma.dim)
        pivset = set(self.pivots)
        self.free = [k for k in range(self.gamma.dim) if k not in pivset]
        pos = {k: i for i, k in enumerate(self.free)}
        cols: list[dict[int, Any]] = [dict() for _ in range(self.gamma.dim)]
        for k in self.free:
            cols[k] = {pos[k]: self.base.one}
        for r, p in zip(self.relations, self.pivots):
            cols[p] = {pos[k]: -v for k, v in r.items() if k != p}
        self._proj_cols = cols

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def expected_dim(self) -> int | None:
        if self.etale and self.module.free_rank is not None:
            return self.module.free_rank**self.degree
        return None

    @property
    def labels(self) -> list[tuple[int, ...]]:
        """Exponent vectors of the orbit sums representing the quotient basis."""
        return [self.gamma.basis[k] for k in self.free]

    def __repr__(self) -> str:
        return f"NormModule(dim {self.dim} from {self.module!r})"

    # maps ---------------------------------------------------------------
    def project(self, v: Sequence[Any] | dict[int, Any]) -> tuple:
        items = v.items() if isinstance(v, dict) else enumerate(v)
        out: list[Any] = [self.base.zero] * self.dim
        for k, x in items:
            if not x:
                continue
            for i, c in self._proj_cols[k].items():
                out[i] = out[i] + c * x
        return tuple(out)

    def project_sorted(self, acc: dict[tuple[int, ...], Any]) -> tuple:
        return self.project({self.gamma.key_index[k]: c for k, c in acc.items() if c})

    @cached_property
    def projection_matrix(self) -> Matrix:
        return Matrix.from_sparse_columns(self.base, self._proj_cols, self.dim)

    @cached_property
    def section_matrix(self) -> Matrix:
        cols = [{k: self.base.one} for k in self.free]
        return Matrix.from_sparse_columns(self.base, cols, self.gamma.dim)

    def section_key(self, i: int) -> tuple[int, ...]:
        return self.gamma.keys[self.free[i]]

    def nu(self, m: Sequence[Any]) -> tuple:
        """ν(m′) = class of γ^d(m′)."""
        if len(m) != self.module.dim:
            raise ShapeError(f"element of length {len(m)} for a module of dimension {self.module.dim}")
        return self.project(self.gamma.pure_coords(list(m)))

    def nu_point(self, m: Sequence[Any], emb: FieldEmbedding) -> tuple:
        """ν at a point of M′ ⊗ Q (coordinates in Q), inside N(M′) ⊗ Q."""
        pure = self.gamma.pure_coords([emb.target(x) for x in m])
        out: list[Any] = [emb.target.zero] * self.dim
        for k, x in enumerate(pure):
            if not x:
                continue
            for i, c in self._proj_cols[k].items():
                out[i] = out[i] + emb(c) * x
        return tuple(out)

    def pi_of(self, v: Sequence[Any]) -> Any:
        """π on Γ^d(R′) coordinates."""
        acc = self.base.zero
        for p, x in zip(self.pi, v):
            if p and x:
                acc = acc + p * x
        return acc

    def to_base(self) -> Matrix:
        """For M′ = R′: the isomorphism N(R′) → R induced by π (a 1×1 matrix)."""
        if self.module.dim != self.ext.rank or self.dim != 1:
            raise PreconditionError("to_base applies to the norm of R′ itself")
        k = self.free[0]
        return Matrix(self.base, [[self.pi[k]]], coerce=False)

    def relation_vectors(self) -> list[dict[int, Any]]:
        return self.relations


def build_norm_module(ext: FiniteAlgebra, module: ExtModule | None = None, n: int | None = None) -> NormModule:
    if module is None:
        module = free_module(ext, 1 if n is None else n)
    if module.ext != ext:
        raise ShapeError("module is not over the given extension")
    return NormModule(module)


def nu(nm: NormModule, m: Sequence[Any]) -> tuple:
    return nm.nu(m)


def _check_automorphism(ext: FiniteAlgebra, g: Matrix) -> None:
    if g.shape != (ext.rank, ext.rank) or g.det() == 0:
        raise ValidationError("twist must be an invertible map of R′")
    if g.apply(ext.unit) != ext.unit:
        raise ValidationError("twist does not fix the unit of R′")
    for i in range(ext.rank):
        for j in range(ext.rank):
            if g.apply(ext.constants[i][j]) != ext.mul(g.column(i), g.column(j)):
                raise ValidationError("twist is not multiplicative on R′")


def norm_morphism(nm1: NormModule, nm2: NormModule, phi: Matrix, twist: Matrix | None = None) -> Matrix:
    """N(φ): N(M′₁) → N(M′₂) for an R′-linear φ (or semilinear along an automorphism ``twist`` of R′)."""
    if nm1.ext != nm2.ext:
        raise ShapeError("norm_morphism between modules over different extensions")
    if phi.shape != (nm2.module.dim, nm1.module.dim):
        raise ShapeError(f"map of shape {phi.shape} between modules of dimensions {nm1.module.dim}, {nm2.module.dim}")
    if twist is not None:
        _check_automorphism(nm1.ext, twist)
    if not nm1.module.is_linear(phi, nm2.module, twist):
        raise ValidationError("map is not R′-linear" + (" along the twist" if twist is not None else ""))
    big = gamma_map(phi, nm1.gamma, nm2.gamma)
    cols_big = [_sparse(c) for c in big.columns]
    for rel in nm1.relations:
        image: dict[int, Any] = {}
        for k, x in rel.items():
            for i, c in cols_big[k].items():
                image[i] = image.get(i, 0) + c * x
        if any(nm2.project(image)):
            raise ValidationError("Γ^d(φ) does not preserve the relation subspace")
    columns = [nm2.project(cols_big[k]) for k in nm1.free]
    if not columns:
        return Matrix.zeros(nm1.base, nm2.dim, 0)
    return Matrix.from_columns(nm1.base, columns)


# split case ------------------------------------------------------------------

@dataclass(frozen=True)
class SplitOracle:
    """Isomorphism N(E_1 × … × E_d) → E_1 ⊗ … ⊗ E_d (lexicographic tensor basis)."""

    matrix: Matrix
    factor_dims: tuple[int, ...]
    factor_basis: tuple[tuple[int, ...], ...]
    linearization: tuple[dict[int, Any], ...] = field(repr=False)

    def pure_tensor(self, parts: Sequence[Sequence[Any]]) -> tuple:
        out: list[Any] = [1]
        for p in parts:
            out = [a * b for a in out for b in p]
        return tuple(out)

    def split_vector(self, m: Sequence[Any]) -> list[tuple]:
        return [tuple(m[j] for j in basis) for basis in self.factor_basis]


def _factor_of_basis(module: ExtModule) -> list[int]:
    owner = []
    for j in range(module.dim):
        hits = []
        for i, a in enumerate(module.action):
            col = a.column(j)
            if col == tuple(module.base.one if t == j else module.base.zero for t in range(module.dim)):
                hits.append(i)
            elif any(col):
                hits.append(-1)
        if len(hits) != 1 or hits[0] < 0:
            raise PreconditionError("module basis is not adapted to the factors of the split algebra")
        owner.append(hits[0])
    return owner


def split_oracle(nm: NormModule) -> SplitOracle:
    if not nm.ext.is_split():
        raise PreconditionError("split_oracle needs the standard split algebra R^d")
    owner = _factor_of_basis(nm.module)
    d = nm.degree
    factor_basis = tuple(tuple(j for j in range(nm.module.dim) if owner[j] == i) for i in range(d))
    dims = tuple(len(b) for b in factor_basis)
    position = {j: b.index(j) for b in factor_basis for j in b}
    strides = []
    acc = 1
    for k in reversed(dims):
        strides.append(acc)
        acc *= k
    strides.reverse()
    total = acc
    lin: list[dict[int, Any]] = []
    for key in nm.gamma.keys:
        factors = sorted(owner[j] for j in key)
        if factors != list(range(d)):
            lin.append({})
            continue
        idx = sum(strides[owner[j]] * position[j] for j in key)
        lin.append({idx: nm.base.one})
    for rel in nm.relations:
        image: dict[int, Any] = {}
        for k, x in rel.items():
            for i, c in lin[k].items():
                image[i] = image.get(i, 0) + c * x
        if any(image.values()):
            raise ValidationError("pure-tensor linearization does not vanish on the relations")
    cols = [lin[k] for k in nm.free]
    mat = Matrix.from_sparse_columns(nm.base, cols, total)
    if mat.shape[0] != mat.shape[1] or mat.det() == 0:
        raise ValidationError(f"split oracle is not invertible (shape {mat.shape})")
    return SplitOracle(mat, dims, factor_basis, tuple(lin))


# base change -----------------------------------------------------------------

@dataclass
class ThetaData:
    """θ: N_{R′/R}(M′) ⊗ Q → N_{Q′/Q}(M′ ⊗ Q′) as a matrix over Q."""

    matrix: Matrix
    source: NormModule
    target: NormModule
    embedding: FieldEmbedding


def base_change_theta(nm: NormModule, emb: FieldEmbedding | Domain,
                      presentation: tuple[FiniteAlgebra, Matrix] | None = None) -> ThetaData:
    """Build N over Q for M′ ⊗ Q′ and the comparison map θ.

    Q′ = R′ ⊗ Q is constructed internally. A user presentation (Q′, ψ) with
    ψ: R′ ⊗ Q → Q′ an algebra isomorphism is accepted for free modules; θ is
    then composed with the divided power of ψ.
    """
    if not isinstance(emb, FieldEmbedding):
        emb = FieldEmbedding(nm.base, emb)
    if emb.source != nm.base:
        raise ShapeError(f"embedding starts at {emb.source.label}, norm module is over {nm.base.label}")
    module_q = nm.module.base_change(emb)
    if presentation is None:
        nm_q = NormModule(module_q)
        columns = [nm_q.project({k: emb.target.one}) for k in nm.free]
        return ThetaData(Matrix.from_columns(emb.target, columns), nm, nm_q, emb)
    qprime, psi = presentation
    ext_q = module_q.ext
    if qprime.base != emb.target or psi.shape != (qprime.rank, ext_q.rank) or psi.det() == 0:
        raise ValidationError("ψ must be an invertible map R′⊗Q → Q′ over Q")
    if psi.apply(ext_q.unit) != qprime.unit:
        raise ValidationError("ψ does not preserve the unit")
    for i in range(ext_q.rank):
        for j in range(ext_q.rank):
            if psi.apply(ext_q.constants[i][j]) != qprime.mul(psi.column(i), psi.column(j)):
                raise ValidationError("ψ is not multiplicative")
    n = nm.module.free_rank
    if n is None or nm.module.dim != n * nm.degree:
        raise PreconditionError("a user presentation of Q′ is supported for free modules only")
    d = nm.degree
    big = [[emb.target.zero] * (n * d) for _ in range(n * d)]
    for l in range(n):
        for r in range(d):
            for c in range(d):
                big[l * d + r][l * d + c] = psi[r, c]
    psi_m = Matrix(emb.target, big, coerce=False)
    target_module = free_module(qprime, n)
    nm_q = NormModule(target_module)
    gpsi = gamma_map(psi_m, GammaSpace(emb.target, n * d, d), nm_q.gamma)
    columns = [nm_q.project(gpsi.column(k)) for k in nm.free]
    return ThetaData(Matrix.from_columns(emb.target, columns), nm, nm_q, emb)


@dataclass(frozen=True)
class ThetaCoherenceReport:
    triangle: bool
    pentagon: bool
    dims: tuple[int, ...]


def check_theta_coherence(nm: NormModule, first: FieldEmbedding, second: FieldEmbedding) -> ThetaCoherenceReport:
    """Identity-pushout triangle and composition pentagon for R → Q → W."""
    ident = FieldEmbedding.identity(nm.base)
    th_id = base_change_theta(nm, ident)
    can = norm_morphism(th_id.target, nm, Matrix.identity(nm.base, nm.module.dim))
    if can @ th_id.matrix != Matrix.identity(nm.base, nm.dim):
        raise ValidationError("identity base change: N(can)∘θ is not the canonical identification")
    th_f = base_change_theta(nm, first)
    th_g = base_change_theta(th_f.target, second)
    th_gf = base_change_theta(nm, second.compose(first))
    w = second.target
    can_w = norm_morphism(th_g.target, th_gf.target, Matrix.identity(w, nm.module.dim)) \
        if th_g.target.ext == th_gf.target.ext else None
    if can_w is None:
        raise ValidationError("composite base change: the two pushouts of R′ to W differ")
    lhs = th_gf.matrix
    rhs = can_w @ th_g.matrix @ second.matrix(th_f.matrix)
    if lhs != rhs:
        raise ValidationError("composite base change: θ for R→W differs from N(can)∘θ_(Q→W)∘(θ_(R→Q)⊗W)")
    return ThetaCoherenceReport(True, True, (nm.dim, th_f.target.dim, th_gf.target.dim))


@dataclass(frozen=True)
class NuSpanReport:
    dim: int
    polarization_rank: int
    random_rank: int | None
    random_samples: int

    @property
    def spans(self) -> bool:
        return self.polarization_rank == self.dim


def nu_image_spans(nm: NormModule, rng: random.Random | None = None, max_samples: int | None = None) -> NuSpanReport:
    """Span of ν over the polarization points, and (infinite base only) over random points."""
    k = nm.module.dim
    basis = [tuple(nm.base.one if i == j else nm.base.zero for i in range(k)) for j in range(k)]
    polys = law_eval_gamma(nm.gamma, basis)
    monomials = sorted({e for p in polys for e in p.terms})
    vectors = [nm.project([p.coefficient(e) for p in polys]) for e in monomials]
    pol_rank = span_rank(nm.base, vectors, nm.dim)
    if nm.base.is_finite:
        return NuSpanReport(nm.dim, pol_rank, None, 0)
    rng = rng or random.Random(0)
    limit = max_samples if max_samples is not None else nm.dim + 20
    values: list[tuple] = []
    rank = 0
    used = 0
    while used < limit and rank < nm.dim:
        values.append(nm.nu([nm.base.random(rng) for _ in range(k)]))
        used += 1
        rank = span_rank(nm.base, values, nm.dim)
    return NuSpanReport(nm.dim, pol_rank, rank, used)


# algebras over R' ------------------------------------------------------------

class RelativeAlgebra:
    """An associative algebra B′, free of rank k over R′, with structure constants in R′.

    ``constants[l][m][n]`` are R-coordinates (length d) of the R′-coefficient of
    b_n in b_l·b_m. Restricting scalars gives an R-algebra with basis b_l·ω_i at
    index l·d + i, matching :func:`free_module`.
    """

    def __init__(self, ext: FiniteAlgebra, constants: Sequence[Sequence[Sequence[Sequence[Any]]]],
                 unit: Sequence[Sequence[Any]], name: str = "", validate: bool = True):
        k = len(constants)
        d = ext.rank
        if len(unit) != k:
            raise ShapeError("unit has the wrong length")
        self.ext = ext
        self.base = ext.base
        self.rank = k
        self.constants = tuple(
            tuple(tuple(tuple(ext.base(c) for c in x) for x in cm) for cm in cl) for cl in constants
        )
        if any(len(x) != d for cl in self.constants for cm in cl for x in cm) or any(
            len(cl) != k or any(len(cm) != k for cm in cl) for cl in self.constants
        ):
            raise ShapeError("relative structure constants have the wrong shape")
        self.unit = tuple(tuple(ext.base(c) for c in u) for u in unit)
        self.name = name
        rk = k * d
        zero = self.base.zero
        rc = [[[zero] * rk for _ in range(rk)] for _ in range(rk)]
        for l in range(k):
            for i in range(d):
                for m in range(k):
                    for j in range(d):
                        wij = ext.mul(ext.basis(i).coords, ext.basis(j).coords)
                        for n in range(k):
                            coeff = self.constants[l][m][n]
                            if not any(coeff):
                                continue
                            prod = ext.mul(coeff, wij)
                            for t, c in enumerate(prod):
                                if c:
                                    rc[l * d + i][m * d + j][n * d + t] = rc[l * d + i][m * d + j][n * d + t] + c
        self.restricted_constants = rc
        self.restricted_unit = tuple(c for u in self.unit for c in u)
        self.table = sparse_table(self.base, rc)
        if validate:
            check_associative_unital(self.base, self.table, self.restricted_unit, rk)

    @property
    def dim(self) -> int:
        return self.rank * self.ext.rank

    def mul(self, x: Sequence[Any], y: Sequence[Any]) -> tuple:
        return multiply(self.table, self.base.zero, self.dim, x, y)

    def left_matrix(self, x: Sequence[Any]) -> Matrix:
        cols = [self.mul(x, tuple(self.base.one if t == j else self.base.zero for t in range(self.dim)))
                for j in range(self.dim)]
        return Matrix.from_columns(self.base, cols)

    def module(self) -> ExtModule:
        return free_module(self.ext, self.rank)

    def restrict_matrix(self, entries: Sequence[Sequence[Sequence[Any]]]) -> Matrix:
        """R-matrix of the R′-linear map with matrix ``entries`` (R′-coordinates) on the basis b_l."""
        return restrict_matrix(self.ext, entries)

    def random_element(self, rng: random.Random, height: int = 4) -> tuple:
        return tuple(self.base.random(rng, height) for _ in range(self.dim))

    def __repr__(self) -> str:
        return f"RelativeAlgebra({self.name or 'rank ' + str(self.rank)} over {self.ext!r})"


def restrict_matrix(ext: FiniteAlgebra, entries: Sequence[Sequence[Sequence[Any]]]) -> Matrix:
    k = len(entries)
    d = ext.rank
    zero = ext.base.zero
    rows = [[zero] * (k * d) for _ in range(k * d)]
    for l in range(k):
        for m in range(k):
            a = entries[l][m]
            if not any(a):
                continue
            for j in range(d):
                prod = ext.mul(a, ext.basis(j).coords)
                for t, c in enumerate(prod):
                    rows[l * d + t][m * d + j] = c
    return Matrix(ext.base, rows, coerce=False)


def matrix_algebra_over(ext: FiniteAlgebra, r: int) -> RelativeAlgebra:
    """M_r(R′) with basis E_ij at index i·r + j."""
    one = ext.unit
    zero = (ext.base.zero,) * ext.rank
    k = r * r
    consts = []
    for a in range(k):
        i, j = divmod(a, r)
        row = []
        for b in range(k):
            p, q = divmod(b, r)
            row.append([one if (j == p and c == i * r + q) else zero for c in range(k)])
        consts.append(row)
    unit = [one if a // r == a % r else zero for a in range(k)]
    return RelativeAlgebra(ext, consts, unit, name=f"M_{r}(R′)")


def product_algebra(ext: FiniteAlgebra, parts: Sequence[tuple[Sequence[Sequence[Sequence[Any]]], Sequence[Any]]],
                    name: str = "") -> RelativeAlgebra:
    """B_1 × … × B_d over the split algebra R^d from same-rank R-algebras (constants, unit)."""
    if not ext.is_split() or len(parts) != ext.rank:
        raise PreconditionError("product_algebra needs the split algebra R^d and d factors")
    k = len(parts[0][1])
    consts = [[[tuple(parts[i][0][l][m][n] for i in range(ext.rank)) for n in range(k)] for m in range(k)]
              for l in range(k)]
    unit = [tuple(parts[i][1][l] for i in range(ext.rank)) for l in range(k)]
    return RelativeAlgebra(ext, consts, unit, name=name or "product")


class NormAlgebra:
    """N(B′) with the product descended from the componentwise product on Γ^d(B′)."""

    def __init__(self, source: RelativeAlgebra, check_ideal: bool = True):
        self.source = source
        self.nm = NormModule(source.module())
        nm = self.nm
        base = nm.base
        self.action = ActionTable(base, [source.left_matrix(tuple(base.one if t == j else base.zero
                                                                     for t in range(source.dim)))
                                         for j in range(source.dim)])
        self._mu_cache: dict[tuple[int, int], dict[int, Any]] = {}
        q = nm.dim
        consts = []
        for i in range(q):
            row = []
            for j in range(q):
                row.append(nm.project(self._mu(nm.free[i], nm.free[j])))
            consts.append(row)
        self.constants = consts
        self.table = sparse_table(base, consts)
        self.unit = nm.nu(source.restricted_unit)
        if check_ideal:
            self._check_ideal()
        check_associative_unital(base, self.table, self.unit, q)

    def _mu(self, x: int, y: int) -> dict[int, Any]:
        key = (x, y)
        if key not in self._mu_cache:
            g = self.nm.gamma
            acc = mu_basis(self.action, g.keys[x], g.keys[y])
            self._mu_cache[key] = {g.key_index[k]: c for k, c in acc.items() if c}
        return self._mu_cache[key]

    def _check_ideal(self) -> None:
        nm = self.nm
        for rel in nm.relations:
            for y in range(nm.gamma.dim):
                for left in (True, False):
                    acc: dict[int, Any] = {}
                    for x, c in rel.items():
                        prod = self._mu(x, y) if left else self._mu(y, x)
                        for k, v in prod.items():
                            acc[k] = acc.get(k, 0) + c * v
                    if any(nm.project(acc)):
                        raise ValidationError("relation subspace is not an ideal for the descended product")

    @property
    def dim(self) -> int:
        return self.nm.dim

    @property
    def base(self) -> Domain:
        return self.nm.base

    def mul(self, x: Sequence[Any], y: Sequence[Any]) -> tuple:
        return multiply(self.table, self.base.zero, self.dim, x, y)

    def nu(self, b: Sequence[Any]) -> tuple:
        return self.nm.nu(b)

    def descend(self, phi: Matrix) -> Matrix:
        """N(φ) for an R′-linear endomorphism of B′ (e.g. an involution)."""
        return norm_morphism(self.nm, self.nm, phi)


def build_norm_algebra(source: RelativeAlgebra) -> NormAlgebra:
    return NormAlgebra(source)


# Ψ for endomorphism algebras ---------------------------------------------------

@dataclass
class PsiData:
    """Ψ: N(End_{R′}(Q′)) → End_R(N(Q′)), columns are flattened (row-major) matrices."""

    matrix: Matrix
    algebra: NormAlgebra
    module: NormModule
    endo: RelativeAlgebra

    def apply(self, x: Sequence[Any]) -> Matrix:
        flat = self.matrix.apply(x)
        q = self.module.dim
        return Matrix(self.module.base, [flat[i * q:(i + 1) * q] for i in range(q)], coerce=False)


def psi_endo_iso(ext: FiniteAlgebra, r: int, check: bool = True) -> PsiData:
    if not ext.is_etale():
        raise PreconditionError("Ψ is only an isomorphism for étale R′")
    endo = matrix_algebra_over(ext, r)
    na = NormAlgebra(endo)
    qmod = free_module(ext, r)
    nmq = NormModule(qmod)
    base = ext.base
    d = ext.rank
    # E_ij·ω_k acting on Q′ = R′^r
    mats = []
    for a in range(endo.dim):
        (ij, k) = divmod(a, d)
        i, j = divmod(ij, r)
        wk = ext.basis_matrices[k]
        rows = [[base.zero] * (r * d) for _ in range(r * d)]
        for s in range(d):
            for t in range(d):
                rows[i * d + s][j * d + t] = wk[s, t]
        mats.append(Matrix(base, rows, coerce=False))
    action = ActionTable(base, mats)
    g_b, g_q = na.nm.gamma, nmq.gamma
    cache: dict[tuple[int, int], tuple] = {}

    def mu_proj(x: int, y: int) -> tuple:
        if (x, y) not in cache:
            cache[(x, y)] = nmq.project_sorted(mu_basis(action, g_b.keys[x], g_q.keys[y]))
        return cache[(x, y)]

    def psi_ambient(x: int) -> list[tuple]:
        return [mu_proj(x, y) for y in nmq.free]

    if check:
        for rel in nmq.relations:
            for x in range(g_b.dim):
                acc = [base.zero] * nmq.dim
                for y, c in rel.items():
                    for t, v in enumerate(mu_proj(x, y)):
                        acc[t] = acc[t] + c * v
                if any(acc):
                    raise ValidationError("Γ^d(End) action does not preserve the relations of N(Q′)")
        for rel in na.nm.relations:
            for y in nmq.free:
                acc = [base.zero] * nmq.dim
                for x, c in rel.items():
                    for t, v in enumerate(mu_proj(x, y)):
                        acc[t] = acc[t] + c * v
                if any(acc):
                    raise ValidationError("Ψ does not vanish on the relations of N(End(Q′))")
    q = nmq.dim
    columns = []
    for x in na.nm.free:
        cols = psi_ambient(x)  # column y of the endomorphism
        columns.append(tuple(cols[c][rr] for rr in range(q) for c in range(q)))
    return PsiData(Matrix.from_columns(base, columns), na, nmq, endo)
