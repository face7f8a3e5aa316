"""The acceptance suite: thirteen exact checks shared by ``norma verify-suite`` and the tests."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .algebra import FieldEmbedding, FiniteAlgebra, polynomial_algebra, quadratic_algebra, split_algebra
from .azumaya import (
    a1d2_norm,
    brauer_shadow_split,
    compare_with_tensor_pair,
    matrix_quaternion_over,
    quaternion_algebra,
    quaternion_over,
    split_pair,
    split_triple_Z,
    tensor_quadratic_pair,
)
from .errors import NormaError
from .gamma import GammaSpace, check_gamma_relations, exponent_vectors
from .norm import (
    NormModule,
    base_change_theta,
    build_norm_module,
    check_theta_coherence,
    norm_morphism,
    psi_endo_iso,
    restrict_matrix,
    split_module,
    split_oracle,
)
from .scalars import GF, QQ, Matrix, SimpleExtension, det
from .segre import check_segre_restriction, exceptional_iso_evidence, lie_dims, perm_matrix


class CriterionFailure(NormaError):
    """An acceptance check produced a wrong value."""


def require(condition: bool, message: str) -> None:
    if not condition:
        raise CriterionFailure(message)


def etale_fixtures() -> dict[str, FiniteAlgebra]:
    return {
        "Q^2": split_algebra(QQ, 2),
        "Q(sqrt2)": quadratic_algebra(QQ, 2),
        "Q(i)": quadratic_algebra(QQ, -1),
        "F5[x]/(x^2-2)": quadratic_algebra(GF(5), 2),
        "F4/F2": polynomial_algebra(GF(2), [1, 1, 1]),
        "Q^3": split_algebra(QQ, 3),
    }


@dataclass
class SuiteContext:
    seed: int = 0
    samples: int = 100
    cache: dict[str, Any] = field(default_factory=dict)

    def rng(self, salt: int) -> random.Random:
        # one independent stream per criterion keeps results stable when criteria are run alone
        return random.Random(self.seed * 1000 + salt)

    def cached(self, key: str, build: Callable[[], Any]) -> Any:
        if key not in self.cache:
            self.cache[key] = build()
        return self.cache[key]

    def quaternion_norm(self):
        K = quadratic_algebra(QQ, 2)
        return self.cached("a1d2", lambda: a1d2_norm(K, quaternion_over(K, (-1, 0), (-1, 0)), check_azumaya=False))


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict
    error: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f": {self.error}" if self.error else ""
        return f"[{status}] {self.number:2d}. {self.title}{tail}"

    def as_dict(self) -> dict:
        out = {"criterion": self.number, "title": self.title, "status": "pass" if self.passed else "fail",
               "details": self.details}
        if self.error:
            out["error"] = self.error
        return out


def rank_law(ctx: SuiteContext) -> dict:
    dims = {}
    for name, A in etale_fixtures().items():
        for n in ((2,) if A.rank == 3 else (1, 2, 3)):
            nm = build_norm_module(A, n=n)
            require(nm.dim == n**A.rank, f"{name}, n={n}: dim {nm.dim}, expected {n ** A.rank}")
            dims[f"{name}, n={n}"] = nm.dim
    return {"dimensions": dims}


def norm_of_extension(ctx: SuiteContext) -> dict:
    rng = ctx.rng(2)
    checked = {}
    for name, A in etale_fixtures().items():
        nm = build_norm_module(A, n=1)
        require(nm.dim == 1, f"{name}: N(R′) has dimension {nm.dim}")
        to_base = nm.to_base()
        for _ in range(ctx.samples):
            r = A.random_element(rng)
            value = to_base.apply(nm.nu(r.coords))[0]
            require(value == det(A.left_matrix(r.coords)), f"{name}: ν(r′) ≠ det of the regular representation")
        checked[name] = ctx.samples
    return {"samples": checked}


def split_oracle_check(ctx: SuiteContext) -> dict:
    rng = ctx.rng(3)
    cases = [(QQ, (2, 3)), (QQ, (2, 2)), (GF(3), (2, 2)), (QQ, (1, 2, 2))]
    report = {}
    for F, dims in cases:
        S = split_algebra(F, len(dims))
        nm = build_norm_module(S, split_module(S, dims))
        oracle = split_oracle(nm)
        require(nm.dim == math.prod(dims), f"{dims}: dimension {nm.dim}")
        # every choice of one basis vector per factor
        count = 0
        for choice in itertools.product(*[oracle.factor_basis[i] for i in range(len(dims))]):
            m = [F.one if j in choice else F.zero for j in range(nm.module.dim)]
            parts = oracle.split_vector(m)
            require(oracle.matrix.apply(nm.nu(m)) == oracle.pure_tensor(parts), f"{dims}: basis choice {choice}")
            count += 1
        for _ in range(ctx.samples):
            m = [F.random(rng) for _ in range(nm.module.dim)]
            require(oracle.matrix.apply(nm.nu(m)) == oracle.pure_tensor(oracle.split_vector(m)),
                    f"{dims}: random point")
        report[f"{F.label} {dims}"] = {"basis_tuples": count, "random": ctx.samples}
    return report


def normic_identity(ctx: SuiteContext) -> dict:
    rng = ctx.rng(4)
    nt = ctx.quaternion_norm()
    na = nt.norm_algebra
    src = na.source
    ext = src.ext
    action = src.module()
    for _ in range(ctx.samples):
        r = ext.random_element(rng)
        b = src.random_element(rng)
        rb = action.act(r.coords).apply(b)
        require(na.nu(rb) == tuple(r.norm() * c for c in na.nu(b)), "ν(r′b) ≠ N(r′)ν(b)")
    for _ in range(ctx.samples):
        x, y = src.random_element(rng), src.random_element(rng)
        require(na.nu(src.mul(x, y)) == na.mul(na.nu(x), na.nu(y)), "ν is not multiplicative")
    return {"normic_samples": ctx.samples, "multiplicative_samples": ctx.samples, "dim": na.dim}


def base_change_naturality(ctx: SuiteContext) -> dict:
    rng = ctx.rng(5)
    K = quadratic_algebra(QQ, 2)
    Qi = SimpleExtension(QQ, (1, 0, 1), "i")
    emb = FieldEmbedding(QQ, Qi)
    nm = build_norm_module(K, n=2)
    theta = base_change_theta(nm, emb)
    nm_q: NormModule = theta.target
    # full Γ² basis: θ∘(P ⊗ Q) = P_Q
    require(theta.matrix @ emb.matrix(nm.projection_matrix) == nm_q.projection_matrix,
            "naturality square fails on the Γ² basis")
    for _ in range(ctx.samples):
        m = [QQ.random(rng) for _ in range(nm.module.dim)]
        lhs = theta.matrix.apply([emb(c) for c in nm.nu(m)])
        require(lhs == nm_q.nu([emb(c) for c in m]), "θ(ν(m)) ≠ ν_Q(m ⊗ 1)")
    # naturality in the module: θ∘N(φ) = N(φ_Q)∘θ for a random R′-linear φ
    entries = [[K.random_element(rng).coords for _ in range(2)] for _ in range(2)]
    phi = restrict_matrix(K, entries)
    lhs = theta.matrix @ emb.matrix(norm_morphism(nm, nm, phi))
    rhs = norm_morphism(nm_q, nm_q, emb.matrix(phi)) @ theta.matrix
    require(lhs == rhs, "θ is not natural in the module")
    Z8 = SimpleExtension(QQ, (1, 0, 0, 0, 1), "z")
    coherence = [
        check_theta_coherence(nm, emb, FieldEmbedding(Qi, Qi)),
        check_theta_coherence(nm, emb, FieldEmbedding(Qi, Z8, Z8.generator**2)),
    ]
    require(all(c.triangle and c.pentagon for c in coherence), "θ coherence fails")
    return {"gamma_basis": nm.gamma.dim, "random_points": ctx.samples, "theta_det": str(theta.matrix.det()),
            "coherence_chains": ["Q→Q(i)→Q(i)", "Q→Q(i)→Q(zeta8)"]}


def psi_isomorphism(ctx: SuiteContext) -> dict:
    rng = ctx.rng(6)
    K = quadratic_algebra(QQ, 2)
    psi = ctx.cached("psi", lambda: psi_endo_iso(K, 2))
    na, nmq = psi.algebra, psi.module
    require(psi.matrix.shape == (16, 16) and psi.matrix.det() != 0, "Ψ is not bijective")
    require(psi.apply(na.unit) == Matrix.identity(QQ, nmq.dim), "Ψ is not unital")
    for _ in range(ctx.samples):
        x = [QQ.random(rng) for _ in range(na.dim)]
        y = [QQ.random(rng) for _ in range(na.dim)]
        require(psi.apply(na.mul(x, y)) == psi.apply(x) @ psi.apply(y), "Ψ is not multiplicative")
    # Ψ(ν(φ)) = N(φ)
    d = K.rank
    for _ in range(10):
        phi = psi.endo.random_element(rng)
        entries = [[phi[(i * 2 + j) * d:(i * 2 + j + 1) * d] for j in range(2)] for i in range(2)]
        require(psi.apply(na.nu(phi)) == norm_morphism(nmq, nmq, restrict_matrix(K, entries)),
                "Ψ∘ν differs from the norm of the endomorphism")
    return {"shape": list(psi.matrix.shape), "multiplicative_samples": ctx.samples, "eta_samples": 10}


def azumaya_preservation(ctx: SuiteContext) -> dict:
    nt = ctx.quaternion_norm()
    env = nt.algebra.enveloping_map()
    require(env.shape == (256, 256), f"enveloping map has shape {env.shape}")
    rank = env.rank()
    require(rank == 256, f"enveloping map has rank {rank}")
    return {"shape": list(env.shape), "rank": rank}


def integral_split_triple(ctx: SuiteContext) -> dict:
    rng = ctx.rng(8)
    out = {}
    for sizes in ((1, 1), (1, 2)):
        st = split_triple_Z(*sizes)
        report = st.verify(rng, ctx.samples)
        mod2 = st.reduce(2).verify()
        out[str(sizes)] = {"integral": report, "mod2": mod2}
    return out


def segre_parity(ctx: SuiteContext) -> dict:
    out = {}
    for F in (QQ, GF(3)):
        for m, want in ((1, -1), (2, 1)):
            value = perm_matrix((1, 0), 2 * m, 2, F).det()
            require(value == F(want), f"{F.label}, m={m}: det j((1 2)) = {value}")
            out[f"{F.label}, m={m}"] = F.format(value)
    return out


def segre_restriction(ctx: SuiteContext) -> dict:
    report = check_segre_restriction((1, 1), GF(5), ctx.rng(10), ctx.samples)
    require(report["passed"], "; ".join(report["failures"][:3]))
    return {"samples": report["samples"], "kernel_checks": report["kernel_checks"]}


def a1_squared_to_d2(ctx: SuiteContext) -> dict:
    S = split_algebra(QQ, 2)
    H, sH = quaternion_algebra(-1, -1, QQ)
    split = a1d2_norm(S, split_pair(S, (H, sH), (H, sH)), check_azumaya=False)
    cmp = compare_with_tensor_pair(split, tensor_quadratic_pair(sH, sH), split_oracle(split.norm_algebra.nm))
    K = quadratic_algebra(QQ, 2)
    fixtures = {"(-1,-1)": ctx.quaternion_norm(), "M2": a1d2_norm(K, matrix_quaternion_over(K), check_azumaya=False)}
    dims = {}
    for name, nt in fixtures.items():
        report = nt.triple.verify()
        require(report["dim_sym"] == 10, f"{name}: dim Sym = {report['dim_sym']}")
        dims[name] = report["dim_sym"]
    sp, o = lie_dims((1, 1), QQ)
    require((sp, o) == (6, 6), f"Lie dimensions {sp} and {o}")
    evidence = {}
    for p in (3, 5):
        ev = exceptional_iso_evidence(p)
        require(ev["passed"], f"exceptional isomorphism evidence fails over GF({p})")
        evidence[ev["field"]] = ev["quotient_order"]
    return {"split_comparison": cmp, "dim_sym": dims, "lie_dims": [sp, o], "evidence": evidence}


def brauer_shadow(ctx: SuiteContext) -> dict:
    H, sH = quaternion_algebra(-1, -1, QQ)
    shadow = brauer_shadow_split(H, sH, ctx.rng(12), ctx.samples)
    return shadow.report


def gamma_relations(ctx: SuiteContext) -> dict:
    out = {}
    for F in (QQ, GF(2), GF(3)):
        for n, d in ((2, 2), (3, 2), (2, 3)):
            count = sum(1 for _ in itertools.combinations_with_replacement(range(n), d))
            require(len(exponent_vectors(n, d)) == count == GammaSpace(F, n, d).dim == math.comb(n + d - 1, d),
                    f"dimension of Γ^{d} of rank {n}")
            check_gamma_relations(F, n, d, ctx.rng(13), ctx.samples)
            out[f"{F.label} n={n} d={d}"] = count
    return out


CRITERIA: list[tuple[int, str, Callable[[SuiteContext], dict]]] = [
    (1, "rank law dim N(R′^n) = n^d", rank_law),
    (2, "N(R′) = R and ν(r′) = det", norm_of_extension),
    (3, "split oracle carries ν to pure tensors", split_oracle_check),
    (4, "normic identity and multiplicativity", normic_identity),
    (5, "base change naturality and θ coherence", base_change_naturality),
    (6, "Ψ: N(M₂(ℚ(√2))) ≅ M₄(ℚ)", psi_isomorphism),
    (7, "norm of a quaternion algebra is Azumaya", azumaya_preservation),
    (8, "integral split quadratic triple", integral_split_triple),
    (9, "Segre parity of j((1 2))", segre_parity),
    (10, "Segre restriction lands in O_q⁺", segre_restriction),
    (11, "A₁² → D₂ via the norm", a1_squared_to_d2),
    (12, "Brauer shadow N(H, H) ≅ M₄(ℚ)", brauer_shadow),
    (13, "divided power relations", gamma_relations),
]


def run_criterion(number: int, ctx: SuiteContext | None = None) -> CriterionResult:
    ctx = ctx or SuiteContext()
    for num, title, check in CRITERIA:
        if num == number:
            try:
                return CriterionResult(num, title, True, check(ctx))
            except NormaError as exc:
                return CriterionResult(num, title, False, {}, str(exc))
    raise KeyError(f"no acceptance criterion {number}")


def run_suite(seed: int = 0, samples: int = 100, only: list[int] | None = None) -> list[CriterionResult]:
    ctx = SuiteContext(seed, samples)
    return [run_criterion(num, ctx) for num, _, _ in CRITERIA if only is None or num in only]
