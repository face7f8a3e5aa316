import random

import pytest
import sympy

from norma.algebra import (
    FieldEmbedding,
    FiniteAlgebra,
    base_change,
    dual_numbers,
    is_etale,
    norm_element,
    polynomial_algebra,
    quadratic_algebra,
    regular_rep,
    split_algebra,
    tensor_algebras,
)
from norma.errors import DomainMismatchError, UnsupportedDomainError, ValidationError
from norma.scalars import GF, QQ, ZZ, Matrix, SimpleExtension

SQRT2 = quadratic_algebra(QQ, 2)
SPLIT = split_algebra(QQ, 2)


def test_regular_rep_of_one():
    assert regular_rep(SQRT2.one) == Matrix.identity(QQ, 2)


def test_regular_rep_of_sqrt2():
    assert regular_rep(SQRT2.basis(1)) == Matrix(QQ, [[0, 2], [1, 0]])


def test_regular_rep_split_is_diagonal():
    assert regular_rep(SPLIT.element([3, 5])) == Matrix(QQ, [[3, 0], [0, 5]])


def test_norms():
    assert norm_element(SQRT2.one) == 1
    assert norm_element(SQRT2.element([3, 1])) == 7
    assert norm_element(SPLIT.element([3, 5])) == 15


@pytest.mark.parametrize("A", [SQRT2, SPLIT, quadratic_algebra(GF(5), 2), split_algebra(QQ, 3),
                               polynomial_algebra(QQ, [1, -1, 0, 1])])
def test_regular_rep_is_a_ring_homomorphism(A):
    rng = random.Random(1)
    for _ in range(100):
        a, b = A.random_element(rng), A.random_element(rng)
        assert regular_rep(a * b) == regular_rep(a) @ regular_rep(b)
        assert regular_rep(a + b) == regular_rep(a) + regular_rep(b)
        assert norm_element(a * b) == norm_element(a) * norm_element(b)


def test_norm_matches_sympy_resultant():
    # norm of a + b·x in Q[x]/(f) is the resultant Res(f, a + b·x) for monic f of degree 3
    x = sympy.Symbol("x")
    A = polynomial_algebra(QQ, [1, -1, 0, 1])
    rng = random.Random(5)
    for _ in range(10):
        c = [QQ.random(rng) for _ in range(3)]
        g = sum(sympy.Rational(ci.numerator, ci.denominator) * x**i for i, ci in enumerate(c))
        assert norm_element(A.element(c)) == sympy.resultant(x**3 - x + 1, g, x)


def test_etale_examples():
    assert is_etale(SPLIT)
    assert not is_etale(dual_numbers(QQ))
    F4 = polynomial_algebra(GF(2), [1, 1, 1])
    assert F4.trace_form() == Matrix(GF(2), [[0, 1], [1, 1]])
    assert is_etale(F4)
    assert dual_numbers(QQ).trace_form() == Matrix(QQ, [[2, 0], [0, 0]])


def test_etale_needs_a_field():
    with pytest.raises(UnsupportedDomainError):
        is_etale(split_algebra(ZZ, 2))


def test_base_change_identity():
    assert base_change(SQRT2, FieldEmbedding.identity(QQ)) == SQRT2


def test_base_change_to_gaussian_numbers():
    Qi = SimpleExtension(QQ, (1, 0, 1), "i")
    B = base_change(SQRT2, Qi)
    assert B.rank == 2 and B.base == Qi
    x = B.basis(1)
    assert x * x == B.one * Qi(2)


def test_base_change_across_characteristics_fails():
    with pytest.raises(UnsupportedDomainError):
        base_change(SPLIT, GF(5))


def test_tensor_unit_law():
    Q1 = split_algebra(QQ, 1)
    T = tensor_algebras(Q1, SQRT2)
    assert T.constants == SQRT2.constants


def test_tensor_of_split_algebras_is_split():
    T = tensor_algebras(SPLIT, SPLIT)
    assert T.rank == 4
    assert T.is_split()


def test_tensor_of_sqrt2_has_zero_divisor():
    T = tensor_algebras(SQRT2, SQRT2)
    # basis e_i ⊗ e_j at index 2i + j
    z = T.element([0, -1, 1, 0])  # √2⊗1 − 1⊗√2
    assert z
    assert not (z * (T.element([0, 1, 1, 0])))  # (√2⊗1 − 1⊗√2)(√2⊗1 + 1⊗√2) = 2 − 2
    assert norm_element(z) == 0


def test_tensor_needs_common_base():
    with pytest.raises(DomainMismatchError):
        tensor_algebras(SPLIT, split_algebra(GF(5), 2))


def test_rejects_non_commutative_table():
    # e_0·e_1 = e_1 but e_1·e_0 = e_0
    with pytest.raises(ValidationError, match="commutative"):
        FiniteAlgebra(QQ, [[[1, 0], [0, 1]], [[1, 0], [0, 0]]], [1, 0])


def test_rejects_non_associative_table():
    e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    z = [0, 0, 0]
    consts = [[e[0], e[1], e[2]], [e[1], e[2], z], [e[2], z, e[0]]]
    with pytest.raises(ValidationError, match="associative"):
        FiniteAlgebra(QQ, consts, e[0])


def test_rejects_wrong_unit():
    with pytest.raises(ValidationError):
        FiniteAlgebra(QQ, SPLIT.constants, [1, 0])


def test_field_embedding_checks_root():
    K = SimpleExtension(QQ, (-2, 0, 1), "s")
    Qi = SimpleExtension(QQ, (1, 0, 1), "i")
    with pytest.raises(ValidationError):
        FieldEmbedding(Qi, K, K.generator)
    z8 = SimpleExtension(QQ, (1, 0, 0, 0, 1), "z")
    emb = FieldEmbedding(Qi, z8, z8.generator**2)
    assert emb(Qi.generator) ** 2 == z8(-1)
