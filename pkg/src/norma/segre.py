"""Segre embeddings, tensor-factor permutations and the orthogonal group of the split form."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import InputParseError, PreconditionError, ShapeError, UnsupportedDomainError, ValidationError
from .scalars import ZZ, Domain, Matrix, PrimeField, kron, rank_and_kernel

Perm = tuple[int, ...]


# permutations (0-based images: perm[i] = σ(i)) --------------------------------------

def parse_perm(text: str, d: int) -> Perm:
    """Cycle notation on 1..d, e.g. "(1 2)(3 4)" or "()"."""
    perm = list(range(d))
    cycles = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\(([^()]*)\)", "", text).strip():
        raise InputParseError(f"not a permutation in cycle notation: {text!r}")
    for cyc in cycles:
        tokens = [t for t in re.split(r"[ ,]+", cyc.strip()) if t]
        if not all(t.isdigit() for t in tokens):
            raise InputParseError(f"cycle entries must be integers: ({cyc})")
        items = [int(t) - 1 for t in tokens]
        if any(not 0 <= i < d for i in items) or len(set(items)) != len(items):
            raise InputParseError(f"bad cycle ({cyc}) for d = {d}")
        cycle = list(range(d))
        for a, b in zip(items, items[1:] + items[:1]):
            cycle[a] = b
        # cycles are applied right to left
        perm = [perm[cycle[i]] for i in range(d)]
    return tuple(perm)


def perm_compose(s: Perm, t: Perm) -> Perm:
    """s∘t (apply t first)."""
    return tuple(s[t[i]] for i in range(len(t)))


def perm_inverse(s: Perm) -> Perm:
    inv = [0] * len(s)
    for i, si in enumerate(s):
        inv[si] = i
    return tuple(inv)


def format_perm(s: Perm) -> str:
    seen = set()
    out = []
    for i in range(len(s)):
        if i in seen or s[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = s[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = s[j]
        out.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(out) or "()"


def perm_matrix(sigma: Perm, r: int, d: int, domain: Domain) -> Matrix:
    """j(σ): x_1⊗…⊗x_d ↦ x_{σ⁻¹(1)}⊗…⊗x_{σ⁻¹(d)} on (F^r)^{⊗d}, lexicographic basis."""
    if len(sigma) != d or sorted(sigma) != list(range(d)):
        raise ShapeError(f"{sigma} is not a permutation of {d} letters")
    inv = perm_inverse(sigma)
    size = r**d
    rows = [[domain.zero] * size for _ in range(size)]
    for idx in itertools.product(range(r), repeat=d):
        src = 0
        for i in idx:
            src = src * r + i
        out = tuple(idx[inv[k]] for k in range(d))
        dst = 0
        for i in out:
            dst = dst * r + i
        rows[dst][src] = domain.one
    return Matrix(domain, rows, coerce=False)


# the semidirect product -----------------------------------------------------------------

@dataclass(frozen=True)
class SemidirectElement:
    """(A_1, …, A_d)·σ in (GL_r)^d ⋊ S_d, acting on tensors by Seg(A)∘j(σ)."""

    mats: tuple[Matrix, ...]
    perm: Perm

    def __post_init__(self) -> None:
        if len(self.mats) != len(self.perm) or sorted(self.perm) != list(range(len(self.perm))):
            raise ShapeError("need one matrix per tensor factor and a permutation of the factors")
        r = self.mats[0].nrows
        dom = self.mats[0].domain
        for m in self.mats:
            if m.shape != (r, r) or m.domain != dom:
                raise ShapeError("all factors must be r×r matrices over one field")
            if m.det() == 0:
                raise ValidationError("factor matrix is not invertible")

    @property
    def d(self) -> int:
        return len(self.perm)

    @property
    def r(self) -> int:
        return self.mats[0].nrows

    @property
    def domain(self) -> Domain:
        return self.mats[0].domain

    @classmethod
    def identity(cls, domain: Domain, r: int, d: int) -> SemidirectElement:
        return cls(tuple(Matrix.identity(domain, r) for _ in range(d)), tuple(range(d)))


def semidirect_mul(g: SemidirectElement, h: SemidirectElement) -> SemidirectElement:
    """(A, σ)(B, τ) = ((A_k B_{σ⁻¹(k)})_k, σ∘τ)."""
    if (g.r, g.d) != (h.r, h.d) or g.domain != h.domain:
        raise ShapeError("semidirect_mul: elements of different groups")
    inv = perm_inverse(g.perm)
    mats = tuple(g.mats[k] @ h.mats[inv[k]] for k in range(g.d))
    return SemidirectElement(mats, perm_compose(g.perm, h.perm))


def semidirect_inverse(g: SemidirectElement) -> SemidirectElement:
    mats = tuple(g.mats[g.perm[j]].inverse() for j in range(g.d))
    return SemidirectElement(mats, perm_inverse(g.perm))


def seg(mats: Sequence[Matrix]) -> Matrix:
    return kron(*mats)


def seg_prime(g: SemidirectElement) -> Matrix:
    return kron(*g.mats) @ perm_matrix(g.perm, g.r, g.d, g.domain)


def module_automorphism(g: SemidirectElement) -> tuple[Matrix, Matrix]:
    """The automorphism (x_i) ↦ (A_i x_{σ⁻¹(i)}) of F^r × … × F^r and the permutation it induces on F^d."""
    r, d, dom = g.r, g.d, g.domain
    inv = perm_inverse(g.perm)
    rows = [[dom.zero] * (r * d) for _ in range(r * d)]
    for i in range(d):
        src = inv[i]
        for a in range(r):
            for b in range(r):
                rows[i * r + a][src * r + b] = g.mats[i][a, b]
    twist = [[dom.one if g.perm[j] == i else dom.zero for j in range(d)] for i in range(d)]
    return Matrix(dom, rows, coerce=False), Matrix(dom, twist, coerce=False)


# forms and groups ----------------------------------------------------------------------

class QuadraticFormData:
    """q(x) = xᵀUx for an upper-triangular U; b is its polarization with Gram U + Uᵀ."""

    def __init__(self, upper: Matrix):
        if not upper.is_square:
            raise ShapeError("quadratic form matrix must be square")
        n = upper.nrows
        if any(upper[i, j] for i in range(n) for j in range(i)):
            raise ValidationError("quadratic form must be stored upper-triangular")
        self.upper = upper
        self.gram = upper + upper.transpose()
        self.domain = upper.domain
        self.n = n

    @classmethod
    def from_even_gram(cls, gram: Matrix, domain: Domain) -> QuadraticFormData:
        """From an integral Gram matrix with even diagonal, reduced into ``domain``."""
        n = gram.nrows
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            if gram[i, i] % 2:
                raise ValidationError("Gram matrix diagonal is not even")
            rows[i][i] = gram[i, i] // 2
            for j in range(i + 1, n):
                rows[i][j] = gram[i, j]
        return cls(Matrix(domain, rows))

    def q(self, x: Sequence[Any]) -> Any:
        ux = self.upper.apply(x)
        acc = self.domain.zero
        for a, b in zip(x, ux):
            acc = acc + a * b
        return acc

    def b(self, x: Sequence[Any], y: Sequence[Any]) -> Any:
        gy = self.gram.apply(y)
        acc = self.domain.zero
        for a, c in zip(x, gy):
            acc = acc + a * c
        return acc


def is_symplectic(g: Matrix, J: Matrix) -> bool:
    if g.shape != J.shape:
        raise ShapeError("is_symplectic: shape mismatch")
    return g.transpose() @ J @ g == J


def is_orthogonal(g: Matrix, qd: QuadraticFormData) -> bool:
    if g.shape != (qd.n, qd.n):
        raise ShapeError("is_orthogonal: shape mismatch")
    cols = g.columns
    one, zero = qd.domain.one, qd.domain.zero
    basis = [tuple(one if k == i else zero for k in range(qd.n)) for i in range(qd.n)]
    for i in range(qd.n):
        if qd.q(cols[i]) != qd.q(basis[i]):
            return False
        for j in range(i + 1, qd.n):
            if qd.b(cols[i], cols[j]) != qd.gram[i, j]:
                return False
    return True


def dickson(g: Matrix, qd: QuadraticFormData) -> int:
    if not is_orthogonal(g, qd):
        raise PreconditionError("dickson needs an element of the orthogonal group")
    if qd.domain.characteristic == 2:
        return (g - Matrix.identity(qd.domain, qd.n)).rank() % 2
    return 0 if g.det() == 1 else 1


def standard_J(n: int, domain: Domain) -> Matrix:
    rows = [[domain.zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = -domain.one
        rows[n + i][i] = domain.one
    return Matrix(domain, rows, coerce=False)


def split_form(sizes: Sequence[int], domain: Domain) -> QuadraticFormData:
    """q on ⊗ F^{2n_i} with Gram the Kronecker product of the standard symplectic matrices."""
    if len(sizes) % 2:
        raise PreconditionError("the tensor form is symmetric only for an even number of factors")
    gram = kron(*[standard_J(n, ZZ) for n in sizes])
    return QuadraticFormData.from_even_gram(gram, domain)


def random_symplectic(n: int, domain: Domain, rng: random.Random, steps: int | None = None) -> Matrix:
    """A product of random symplectic transvections x ↦ x + c·ψ(v, x)·v."""
    J = standard_J(n, domain)
    g = Matrix.identity(domain, 2 * n)
    for _ in range(steps or 4 * n + 4):
        v = [domain.random(rng) for _ in range(2 * n)]
        c = domain.random(rng)
        vJ = Matrix(domain, [list(v)]) @ J
        t = Matrix.identity(domain, 2 * n) + Matrix(domain, [[c * a * b for b in vJ.rows[0]] for a in v])
        g = t @ g
    return g


def check_segre_restriction(sizes: Sequence[int], domain: Domain, rng: random.Random | None = None,
                            samples: int = 100) -> dict:
    if len(sizes) % 2:
        raise PreconditionError("check_segre_restriction needs an even number of factors")
    rng = rng or random.Random(0)
    qd = split_form(sizes, domain)
    failures: list[str] = []
    for k in range(samples):
        mats = [random_symplectic(n, domain, rng) for n in sizes]
        for n, m in zip(sizes, mats):
            if not is_symplectic(m, standard_J(n, domain)):
                failures.append(f"sample {k}: generator not symplectic")
        g = seg(mats)
        if not is_orthogonal(g, qd):
            failures.append(f"sample {k}: Segre image not in O_q")
        elif dickson(g, qd) != 0:
            failures.append(f"sample {k}: Segre image has Dickson invariant 1")
    kernel_checks = 0
    for eps in itertools.product((1, -1), repeat=len(sizes)):
        g = seg([Matrix.identity(domain, 2 * n).scale(e) for n, e in zip(sizes, eps)])
        prod = 1
        for e in eps:
            prod *= e
        is_id = g == Matrix.identity(domain, g.nrows)
        if is_id != (domain(prod) == domain.one):
            failures.append(f"scalar tuple {eps}: image {'is' if is_id else 'is not'} the identity")
        kernel_checks += 1
    return {"sizes": list(sizes), "field": domain.label, "samples": samples, "kernel_checks": kernel_checks,
            "failures": failures, "passed": not failures}


def lie_dims(sizes: Sequence[int], domain: Domain) -> tuple[int, int]:
    """(Σ dim sp_{2n_i}, dim o_q) from the linearized conditions."""
    if domain.characteristic == 2:
        raise UnsupportedDomainError("Lie algebra dimensions are computed only in characteristic ≠ 2")

    def dim_preserving(G: Matrix) -> int:
        n = G.nrows
        rows = []
        for a in range(n):
            for b in range(n):
                # (XᵀG + GX)[a, b] = Σ_k X[k, a] G[k, b] + G[a, k] X[k, b]
                row = [domain.zero] * (n * n)
                for k in range(n):
                    row[k * n + a] = row[k * n + a] + G[k, b]
                    row[k * n + b] = row[k * n + b] + G[a, k]
                rows.append(row)
        return len(rank_and_kernel(Matrix(domain, rows, coerce=False))[1])

    sp = sum(dim_preserving(standard_J(n, domain)) for n in sizes)
    qd = split_form(sizes, domain)
    return sp, dim_preserving(qd.gram)


# exhaustive evidence over small prime fields ------------------------------------------

def _sl2(p: int) -> list[tuple[int, int, int, int]]:
    return [(a, b, c, d) for a in range(p) for b in range(p) for c in range(p) for d in range(p)
            if (a * d - b * c) % p == 1]


def _kron2(x: tuple[int, ...], y: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = []
    for i in range(2):
        for k in range(2):
            for j in range(2):
                for l in range(2):
                    out.append(x[2 * i + j] * y[2 * k + l] % p)
    return tuple(out)


def _swap(g: tuple[int, ...]) -> tuple[int, ...]:
    # right multiplication by j((1 2)): exchanges columns 1 and 2 of a 4×4 matrix
    rows = [list(g[4 * i:4 * i + 4]) for i in range(4)]
    for r in rows:
        r[1], r[2] = r[2], r[1]
    return tuple(x for r in rows for x in r)


def exceptional_iso_evidence(p: int) -> dict:
    """Enumerate (Sp₂(𝔽_p)² / ±(I,I)) ⋊ S₂ and test injectivity, containment in O_q and Dickson."""
    if p == 2:
        raise UnsupportedDomainError("exceptional_iso_evidence is for odd characteristic")
    F = PrimeField(p)
    qd = split_form((1, 1), F)
    gram = [[qd.gram[i, j].v for j in range(4)] for i in range(4)]
    upper = [[qd.upper[i, j].v for j in range(4)] for i in range(4)]
    group = _sl2(p)
    images: dict[tuple[int, ...], int] = {}
    not_orthogonal = 0
    dickson_bad = 0

    def orthogonal(g: tuple[int, ...]) -> bool:
        cols = [[g[4 * r + c] for r in range(4)] for c in range(4)]
        for i in range(4):
            v = cols[i]
            qv = sum(v[a] * upper[a][b] * v[b] for a in range(4) for b in range(4)) % p
            if qv != upper[i][i] % p:
                return False
            for j in range(i + 1, 4):
                w = cols[j]
                if sum(v[a] * gram[a][b] * w[b] for a in range(4) for b in range(4)) % p != gram[i][j] % p:
                    return False
        return True

    def det4(g: tuple[int, ...]) -> int:
        total = 0
        for perm in itertools.permutations(range(4)):
            inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
            term = -1 if inversions % 2 else 1
            for i in range(4):
                term *= g[4 * i + perm[i]]
            total += term
        return total % p

    for x in group:
        for y in group:
            base_img = _kron2(x, y, p)
            for swap in (False, True):
                img = _swap(base_img) if swap else base_img
                images[img] = images.get(img, 0) + 1
    for img in images:
        if not orthogonal(img):
            not_orthogonal += 1
    # Dickson invariant in odd characteristic: 0 iff det = 1
    for x in group:
        for y in group:
            base_img = _kron2(x, y, p)
            if det4(base_img) != 1 or det4(_swap(base_img)) != p - 1:
                dickson_bad += 1
    size = 2 * len(group) ** 2
    quotient = size // 2
    injective = len(images) == quotient and all(c == 2 for c in images.values())
    return {
        "field": F.label,
        "sp2_order": len(group),
        "quotient_order": quotient,
        "distinct_images": len(images),
        "injective": injective,
        "in_O_q": not_orthogonal == 0,
        "dickson_compatible": dickson_bad == 0,
        "passed": injective and not_orthogonal == 0 and dickson_bad == 0,
    }
