import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from norma.algebra import dual_numbers, polynomial_algebra, quadratic_algebra, split_algebra
from norma.azumaya import (
    AssocAlgebra,
    InvolutionKind,
    a1d2_norm,
    adjoint_involution,
    brauer_shadow_split,
    compare_with_tensor_pair,
    involution_type,
    matrix_algebra,
    matrix_quaternion_over,
    quaternion_algebra,
    quaternion_over,
    split_pair,
    split_triple_Z,
    standard_symplectic,
    tensor_quadratic_pair,
)
from norma.errors import PreconditionError, UnsupportedDomainError, ValidationError
from norma.norm import split_oracle
from norma.scalars import GF, QQ, ZZ, Matrix

SQRT2 = quadratic_algebra(QQ, 2)
HAMILTON, CONJ = quaternion_algebra(-1, -1, QQ)
ANTIDIAG = [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]


def sigma_j(base=QQ):
    return adjoint_involution(standard_symplectic(1, base))


# enveloping map -----------------------------------------------------------------------------

def test_matrix_algebra_is_azumaya():
    assert matrix_algebra(QQ, 2).enveloping_map().rank() == 16


def test_hamilton_is_azumaya():
    assert HAMILTON.is_azumaya()


def test_dual_numbers_are_not_azumaya():
    D = dual_numbers(QQ)
    A = AssocAlgebra(QQ, D.constants, D.unit, degree=None)
    assert A.enveloping_map().rank() < 4
    assert not A.is_azumaya()


# involutions ----------------------------------------------------------------------------------

def test_transpose_is_orthogonal():
    sigma = adjoint_involution(Matrix.identity(QQ, 2))
    # E_ij ↦ E_ji
    assert [sigma(tuple(int(k == a) for k in range(4))).index(1) for a in range(4)] == [0, 2, 1, 3]
    assert len(sigma.sym_basis) == 3
    assert involution_type(sigma) == InvolutionKind.ORTHOGONAL


def test_standard_symplectic_involution():
    sigma = sigma_j()
    assert len(sigma.sym_basis) == 1
    assert involution_type(sigma) == InvolutionKind.SYMPLECTIC
    # σ_J is the adjugate: σ_J(a)·a = det(a)·1
    rng = random.Random(0)
    M2 = sigma.algebra
    for _ in range(20):
        a = M2.random_element(rng)
        d = a[0] * a[3] - a[1] * a[2]
        assert M2.mul(sigma(a), a) == (d, 0, 0, d)


def test_quaternion_conjugation_is_symplectic():
    assert involution_type(CONJ) == InvolutionKind.SYMPLECTIC
    assert CONJ.sym_basis == [(1, 0, 0, 0)]


def test_adjoint_of_split_gram():
    split = split_triple_Z(1, 1)
    assert split.gram == Matrix(ZZ, ANTIDIAG)
    assert adjoint_involution(Matrix(QQ, ANTIDIAG)).matrix == split.involution_over(QQ).matrix


def test_singular_gram_is_rejected():
    with pytest.raises(ValidationError):
        adjoint_involution(Matrix(QQ, [[1, 1], [1, 1]]))


def test_involution_type_in_characteristic_two():
    kind = involution_type(adjoint_involution(Matrix.identity(GF(2), 2)))
    assert kind == InvolutionKind.WEAKLY_SYMPLECTIC
    assert involution_type(sigma_j(GF(2))) == InvolutionKind.SYMPLECTIC


# the integral split triple -------------------------------------------------------------------------

def test_split_triple_values():
    split = split_triple_Z(1, 1)
    assert split.q([0, 1, 1, 0]) == -1
    assert split.f(Matrix.identity(ZZ, 4)) == 2
    assert split.verify()["det_gram"] in (1, -1)


@pytest.mark.parametrize("sizes", [(1, 1), (1, 2), (1, 1, 1, 1)])
def test_split_triple_invariants(sizes):
    split = split_triple_Z(*sizes)
    report = split.verify(random.Random(1))
    n = split.dim
    assert report["dim_sym"] == n * (n + 1) // 2
    for s in split.sym_basis:
        assert split.as_matrix(s).trace() % 2 == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=8, max_size=8))
def test_split_form_is_even(v):
    assert split_triple_Z(1, 2).b(v, v) % 2 == 0


def test_odd_factor_count_is_rejected():
    with pytest.raises(PreconditionError):
        split_triple_Z(1, 1, 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_reductions_are_quadratic_triples(p):
    triple = split_triple_Z(1, 1).reduce(p)
    report = triple.verify()
    assert report["dim_sym"] == 10


# quaternions ------------------------------------------------------------------------------------------

def test_split_quaternions():
    A, _ = quaternion_algebra(1, 1, QQ)
    assert A.is_azumaya()
    assert A.trd(A.unit) == 2


def test_hamilton_trace_and_norm():
    i = HAMILTON.e(1)
    assert HAMILTON.trd(i) == 0
    rng = random.Random(2)
    for _ in range(20):
        x = HAMILTON.random_element(rng)
        nrd = sum(c * c for c in x)
        assert HAMILTON.mul(x, CONJ(x)) == (nrd, 0, 0, 0)


def test_characteristic_two_quaternions():
    A, sigma = quaternion_algebra(1, 1, GF(2))
    assert A.is_azumaya()
    u = A.e(1)
    assert A.trd(u) == 1
    assert A.mul(u, u) == tuple(a + b for a, b in zip(u, A.unit))


@pytest.mark.parametrize("a,b", [(0, 1), (1, 0)])
def test_degenerate_quaternions(a, b):
    with pytest.raises(ValidationError):
        quaternion_algebra(a, b, QQ)


# tensor pairs ------------------------------------------------------------------------------------------

def test_hamilton_tensor_pair():
    pair = tensor_quadratic_pair(CONJ, CONJ)
    assert len(pair.sym_basis) == 10
    assert pair.f(pair.algebra.unit) == 2
    assert pair.kind == InvolutionKind.ORTHOGONAL
    pair.verify()


def kronecker_identification():
    """M_2 ⊗ M_2 → M_4, E_ij ⊗ E_kl ↦ E_(2i+k)(2j+l)."""
    cols = []
    for a in range(16):
        (i, j), (k, l) = divmod(a // 4, 2), divmod(a % 4, 2)
        target = (2 * i + k) * 4 + (2 * j + l)
        cols.append(tuple(int(t == target) for t in range(16)))
    return Matrix.from_columns(QQ, cols)


def test_symplectic_pair_matches_split_triple():
    pair = tensor_quadratic_pair(sigma_j(), sigma_j())
    split = split_triple_Z(1, 1)
    K = kronecker_identification()
    sigma_q = split.involution_over(QQ)
    assert K @ pair.involution.matrix == sigma_q.matrix @ K
    M4 = sigma_q.algebra
    cols = K.columns
    for a in range(16):
        for b in range(16):
            assert K.apply(pair.algebra.constants[a][b]) == M4.mul(cols[a], cols[b])
    for s in pair.sym_basis:
        assert pair.f(s) == split.as_matrix(K.apply(s), QQ).trace() / 2


def test_tensor_pair_needs_symplectic_factors():
    with pytest.raises(PreconditionError):
        tensor_quadratic_pair(adjoint_involution(Matrix.identity(QQ, 2)), sigma_j())


def test_tensor_pair_needs_two_invertible():
    _, conj = quaternion_algebra(1, 1, GF(2))
    with pytest.raises(UnsupportedDomainError):
        tensor_quadratic_pair(conj, conj)


# the norm triple ---------------------------------------------------------------------------------------

def test_split_norm_triple_is_the_tensor_pair():
    ext = split_algebra(QQ, 2)
    B1, s1 = quaternion_algebra(-1, -1, QQ)
    B2, s2 = quaternion_algebra(2, 3, QQ)
    nt = a1d2_norm(ext, split_pair(ext, (B1, s1), (B2, s2)), check_azumaya=False)
    pair = tensor_quadratic_pair(s1, s2)
    report = compare_with_tensor_pair(nt, pair, split_oracle(nt.norm_algebra.nm))
    assert report["structure_constants"] == 256


def test_norm_triple_of_matrix_algebra():
    nt = a1d2_norm(SQRT2, matrix_quaternion_over(SQRT2))
    assert nt.report["dim_sym"] == 10
    assert nt.report["f_one"] == "2"
    assert nt.report["azumaya"]


def test_norm_triple_of_hamilton_over_sqrt2():
    nt = a1d2_norm(SQRT2, quaternion_over(SQRT2, [-1, 0], [-1, 0]))
    assert nt.report["dim"] == 16
    assert nt.report["azumaya"]
    assert nt.report["involution"] == "orthogonal"
    assert nt.triple.f(nt.algebra.unit) == 2


def test_norm_triple_preconditions():
    with pytest.raises(PreconditionError):
        a1d2_norm(dual_numbers(QQ), quaternion_over(dual_numbers(QQ), [-1, 0], [-1, 0]))
    cubic = polynomial_algebra(QQ, [1, -1, 0, 1])
    with pytest.raises(PreconditionError):
        a1d2_norm(cubic, quaternion_over(cubic, [-1, 0, 0], [-1, 0, 0]))
    with pytest.raises(UnsupportedDomainError):
        quaternion_over(polynomial_algebra(GF(2), [1, 1, 1]), [1, 0], [1, 0])


def test_quaternion_parameters_must_be_units():
    with pytest.raises(ValidationError):
        quaternion_over(split_algebra(QQ, 2), [1, 0], [1, 1])


# Brauer shadow -----------------------------------------------------------------------------------------

def test_brauer_shadow_of_matrix_algebra():
    shadow = brauer_shadow_split(matrix_algebra(QQ, 2), sigma_j(), samples=20)
    assert shadow.report["bijective"]


@pytest.mark.parametrize("base", [QQ, GF(5)])
def test_brauer_shadow_of_hamilton(base):
    A, conj = quaternion_algebra(-1, -1, base)
    shadow = brauer_shadow_split(A, conj, random.Random(3), samples=100)
    assert shadow.report == {"dim": 16, "bijective": True, "unital": True, "samples": 100}


def test_brauer_shadow_needs_quaternions():
    M3 = matrix_algebra(QQ, 3)
    with pytest.raises(PreconditionError):
        brauer_shadow_split(M3, adjoint_involution(Matrix.identity(QQ, 3)))
