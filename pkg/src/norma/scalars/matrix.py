"""Exact matrices and row reduction over the scalar domains."""

from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

from ..errors import DomainMismatchError, ShapeError, UnsupportedDomainError
from .domains import Domain, Integers

Vector = tuple


def _eliminate(target: dict[int, Any], pivot: dict[int, Any], factor: Any) -> None:
    """target -= factor * pivot, in place, dropping zeros."""
    for k, v in pivot.items():
        nv = target.get(k, 0) - factor * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def row_reduce(rows: Iterable[dict[int, Any]], ncols: int, full: bool = True) -> tuple[list[dict[int, Any]], list[int]]:
    """Sparse Gaussian elimination over a field.

    Rows are dicts column -> nonzero entry and are not modified. Returns the
    normalized pivot rows and their pivot columns (ascending). With ``full`` the
    result is the reduced row echelon form; otherwise only an echelon form,
    which is enough for the rank.
    """
    active = [dict(r) for r in rows if r]
    pivot_rows: list[dict[int, Any]] = []
    pivots: list[int] = []
    for col in range(ncols):
        candidates = [r for r in active if col in r]
        if not candidates:
            continue
        pivot = min(candidates, key=len)
        inv = 1 / pivot[col]
        for k in pivot:
            pivot[k] = pivot[k] * inv
        active = [r for r in active if r is not pivot]
        for r in candidates:
            if r is not pivot:
                _eliminate(r, pivot, r[col])
        if full:
            for r in pivot_rows:
                if col in r:
                    _eliminate(r, pivot, r[col])
        pivot_rows.append(pivot)
        pivots.append(col)
        active = [r for r in active if r]
        if not active:
            break
    return pivot_rows, pivots


class Matrix:
    """Immutable rectangular matrix with entries in one scalar domain."""

    __slots__ = ("domain", "rows", "nrows", "ncols")

    def __init__(self, domain: Domain, rows: Sequence[Sequence[Any]], ncols: int | None = None, coerce: bool = True):
        if coerce:
            rows = tuple(tuple(domain(x) for x in r) for r in rows)
        else:
            rows = tuple(tuple(r) for r in rows)
        nc = len(rows[0]) if rows else (ncols or 0)
        if any(len(r) != nc for r in rows):
            raise ShapeError("ragged matrix rows")
        self.domain = domain
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = nc

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, domain: Domain, n: int) -> Matrix:
        z, o = domain.zero, domain.one
        return cls(domain, [[o if i == j else z for j in range(n)] for i in range(n)], coerce=False)

    @classmethod
    def zeros(cls, domain: Domain, nrows: int, ncols: int) -> Matrix:
        z = domain.zero
        return cls(domain, [[z] * ncols for _ in range(nrows)], ncols=ncols, coerce=False)

    @classmethod
    def from_columns(cls, domain: Domain, columns: Sequence[Sequence[Any]], nrows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(domain, nrows or 0, 0)
        n = len(columns[0])
        return cls(domain, [[c[i] for c in columns] for i in range(n)])

    @classmethod
    def from_sparse_columns(cls, domain: Domain, columns: Sequence[dict[int, Any]], nrows: int) -> Matrix:
        z = domain.zero
        rows = [[z] * len(columns) for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                rows[i][j] = domain(v)
        return cls(domain, rows, ncols=len(columns), coerce=False)

    # access -------------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    @property
    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def to_lists(self) -> list[list[Any]]:
        return [list(r) for r in self.rows]

    def map(self, fn: Callable[[Any], Any], domain: Domain) -> Matrix:
        return Matrix(domain, [[fn(x) for x in r] for r in self.rows], ncols=self.ncols, coerce=False)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(self.domain, [[self.rows[i][j] for j in cols] for i in rows], ncols=len(cols), coerce=False)

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other: Matrix) -> None:
        if self.domain != other.domain:
            raise DomainMismatchError(f"matrices over {self.domain} and {other.domain}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.domain, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      ncols=self.ncols, coerce=False)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.domain, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      ncols=self.ncols, coerce=False)

    def __neg__(self) -> Matrix:
        return Matrix(self.domain, [[-a for a in r] for r in self.rows], ncols=self.ncols, coerce=False)

    def scale(self, c: Any) -> Matrix:
        c = self.domain(c)
        return Matrix(self.domain, [[c * a for a in r] for r in self.rows], ncols=self.ncols, coerce=False)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.domain.zero
        cols = other.columns
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in cols:
                acc = z
                for k, a in nz:
                    b = c[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(self.domain, out, ncols=other.ncols, coerce=False)

    def apply(self, v: Sequence[Any]) -> Vector:
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} for a {self.shape} matrix")
        z = self.domain.zero
        nz = [(k, x) for k, x in enumerate(v) if x]
        out = []
        for r in self.rows:
            acc = z
            for k, x in nz:
                a = r[k]
                if a:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def transpose(self) -> Matrix:
        return Matrix(self.domain, [list(c) for c in zip(*self.rows)] if self.rows else [], ncols=self.nrows,
                      coerce=False)

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def __pow__(self, k: int) -> Matrix:
        if not self.is_square:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.domain, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(self.domain.format(x) for x in r) for r in self.rows)
        return f"Matrix({self.domain.label}, [{body}])"

    def trace(self) -> Any:
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        acc = self.domain.zero
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    # linear algebra -----------------------------------------------------
    def sparse_rows(self) -> list[dict[int, Any]]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]

    def rref(self) -> tuple[list[dict[int, Any]], list[int]]:
        self.domain.require_field("row reduction")
        return row_reduce(self.sparse_rows(), self.ncols)

    def rank(self) -> int:
        self.domain.require_field("rank")
        return len(row_reduce(self.sparse_rows(), self.ncols, full=False)[1])

    def kernel(self) -> list[Vector]:
        return rank_and_kernel(self)[1]

    def det(self) -> Any:
        return det(self)

    def inverse(self) -> Matrix:
        if not self.is_square:
            raise ShapeError("inverse of a non-square matrix")
        n = self.nrows
        if isinstance(self.domain, Integers):
            d = det(self)
            if d not in (1, -1):
                raise ZeroDivisionError("integer matrix is not unimodular")
            from .domains import QQ

            inv = Matrix(QQ, self.rows).inverse()
            return Matrix(self.domain, [[int(x) for x in r] for r in inv.rows], coerce=False)
        self.domain.require_field("inverse")
        one = self.domain.one
        aug = [{**{j: x for j, x in enumerate(r) if x}, n + i: one} for i, r in enumerate(self.rows)]
        prow, pivots = row_reduce(aug, 2 * n)
        if pivots != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        z = self.domain.zero
        out = [[z] * n for _ in range(n)]
        for i, r in enumerate(prow):
            for k, v in r.items():
                if k >= n:
                    out[i][k - n] = v
        return Matrix(self.domain, out, coerce=False)

    def solve(self, b: Sequence[Any]) -> Vector:
        """A particular solution x of self·x = b (free variables set to zero)."""
        self.domain.require_field("solving linear systems")
        if len(b) != self.nrows:
            raise ShapeError("right-hand side length mismatch")
        n = self.ncols
        aug = []
        for r, bi in zip(self.rows, b):
            row = {j: x for j, x in enumerate(r) if x}
            if bi:
                row[n] = self.domain(bi)
            aug.append(row)
        prow, pivots = row_reduce(aug, n + 1)
        if pivots and pivots[-1] == n:
            raise ValueError("inconsistent linear system")
        x = [self.domain.zero] * n
        for r, p in zip(prow, pivots):
            x[p] = r.get(n, self.domain.zero)
        return tuple(x)


def rank_and_kernel(m: Matrix) -> tuple[int, list[Vector]]:
    """Rank and a kernel basis (one vector per non-pivot column)."""
    m.domain.require_field("rank_and_kernel")
    prow, pivots = m.rref()
    pivset = set(pivots)
    z, one = m.domain.zero, m.domain.one
    kernel = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [z] * m.ncols
        v[f] = one
        for r, p in zip(prow, pivots):
            c = r.get(f)
            if c:
                v[p] = -c
        kernel.append(tuple(v))
    return len(pivots), kernel


def _bareiss(rows: list[list[Any]]) -> Any:
    """Fraction-free determinant for integral domains."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(m: Matrix) -> Any:
    if not m.is_square:
        raise ShapeError(f"determinant of a {m.shape} matrix")
    n = m.nrows
    if n == 0:
        return m.domain.one
    if isinstance(m.domain, Integers):
        return _bareiss([list(r) for r in m.rows])
    if not m.domain.is_field:
        raise UnsupportedDomainError(f"determinant over {m.domain}")
    a = [list(r) for r in m.rows]
    result = m.domain.one
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return m.domain.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        pk = a[k][k]
        result = result * pk
        inv = 1 / pk
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = a[i][:k] + [x - f * y for x, y in zip(a[i][k:], a[k][k:])]
    return result


def kron(*mats: Matrix) -> Matrix:
    """Kronecker product with lexicographic index order (first factor most significant)."""
    if not mats:
        raise ShapeError("kron of no matrices")
    out = mats[0]
    for m in mats[1:]:
        out._check_same(m)
        rows = []
        for ra in out.rows:
            for rb in m.rows:
                rows.append([a * b for a in ra for b in rb])
        out = Matrix(out.domain, rows, ncols=out.ncols * m.ncols, coerce=False)
    return out


def span_rank(domain: Domain, vectors: Iterable[Sequence[Any]], dim: int) -> int:
    domain.require_field("rank")
    return len(row_reduce(({j: x for j, x in enumerate(v) if x} for v in vectors), dim, full=False)[1])
