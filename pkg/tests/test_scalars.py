import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from norma.errors import InputParseError, ShapeError, UnsupportedDomainError, ValidationError
from norma.scalars import (
    GF,
    QQ,
    ZZ,
    Matrix,
    MultiPoly,
    SimpleExtension,
    det,
    kron,
    parse_domain,
    poly_det,
    polynomial_coefficients,
    rank_and_kernel,
)


def leibniz_det(rows):
    """Independent determinant oracle: the permutation expansion."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


# rank_and_kernel ----------------------------------------------------------------------

def test_identity_has_full_rank():
    assert rank_and_kernel(Matrix.identity(QQ, 3)) == (3, [])


def test_rank_one_kernel():
    # oracle: sympy nullspace of the same matrix
    oracle = sympy.Matrix([[1, 2], [2, 4]]).nullspace()
    assert [list(v) for v in oracle] == [[-2, 1]]
    rank, kernel = rank_and_kernel(Matrix(QQ, [[1, 2], [2, 4]]))
    assert rank == 1
    assert kernel == [(Fraction(-2), Fraction(1))]


def test_zero_matrix_kernel_is_standard_basis():
    rank, kernel = rank_and_kernel(Matrix.zeros(QQ, 2, 2))
    assert rank == 0
    assert kernel == [(1, 0), (0, 1)]


def test_kernel_needs_a_field():
    with pytest.raises(UnsupportedDomainError):
        rank_and_kernel(Matrix(ZZ, [[1, 2]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_nullity(rows, cols, data):
    entries = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=cols, max_size=cols),
                                 min_size=rows, max_size=rows))
    m = Matrix(QQ, entries)
    rank, kernel = rank_and_kernel(m)
    assert rank + len(kernel) == cols
    assert rank == sympy.Matrix(entries).rank()
    for v in kernel:
        assert not any(m.apply(v))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_rank_nullity_mod_p(n, data):
    F = GF(data.draw(st.sampled_from([2, 3, 5])))
    entries = data.draw(st.lists(st.lists(st.integers(0, 4), min_size=n + 1, max_size=n + 1), min_size=n, max_size=n))
    rank, kernel = rank_and_kernel(Matrix(F, entries))
    assert rank + len(kernel) == n + 1


# det -------------------------------------------------------------------------------------

def test_det_identity():
    assert det(Matrix.identity(QQ, 4)) == 1


def test_det_regular_rep_of_sqrt2_element():
    a, b = 3, 1
    rows = [[a, 2 * b], [b, a]]
    assert leibniz_det(rows) == 7
    assert det(Matrix(QQ, rows)) == 7
    assert det(Matrix(ZZ, rows)) == 7


def test_det_symplectic_J():
    assert det(Matrix(QQ, [[0, -1], [1, 0]])) == 1


def test_det_rejects_non_square():
    with pytest.raises(ShapeError):
        det(Matrix(QQ, [[1, 2]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_det_multiplicative(pair):
    a, b = Matrix(QQ, pair[0]), Matrix(QQ, pair[1])
    assert det(a @ b) == det(a) * det(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_integer_det_matches_leibniz(rows):
    assert det(Matrix(ZZ, rows)) == leibniz_det(rows)
    assert det(Matrix(QQ, rows)) == leibniz_det(rows)


def test_unimodular_inverse_over_Z():
    inv = Matrix(ZZ, [[2, 1], [1, 1]]).inverse()
    assert inv == Matrix(ZZ, [[1, -1], [-1, 2]])


def test_solve():
    assert Matrix(QQ, [[1, 2], [3, 4]]).solve([5, 6]) == (Fraction(-4), Fraction(9, 2))


# poly_det ---------------------------------------------------------------------------------

def variables(k):
    return [MultiPoly.variable(QQ, k, i) for i in range(k)]


def test_poly_det_scalar_matrix():
    (t1,) = variables(1)
    zero = MultiPoly.constant(QQ, 1, 0)
    assert poly_det([[t1, zero], [zero, t1]]).terms == {(2,): 1}


def test_poly_det_regular_rep_of_sqrt2():
    t1, t2 = variables(2)
    oracle = sympy.expand(sympy.Matrix([[sympy.Symbol("a"), 2 * sympy.Symbol("b")],
                                        [sympy.Symbol("b"), sympy.Symbol("a")]]).det())
    assert oracle == sympy.Symbol("a") ** 2 - 2 * sympy.Symbol("b") ** 2
    assert poly_det([[t1, t2 * 2], [t2, t1]]).terms == {(2, 0): 1, (0, 2): -2}


def test_poly_det_diagonal():
    t1, t2 = variables(2)
    zero = MultiPoly.constant(QQ, 2, 0)
    assert poly_det([[t1, zero], [zero, t2]]).terms == {(1, 1): 1}


def test_poly_det_rejects_mixed_variable_counts():
    with pytest.raises(ShapeError):
        poly_det([[MultiPoly.variable(QQ, 2, 0), MultiPoly.variable(QQ, 3, 1)],
                  [MultiPoly.constant(QQ, 2, 1), MultiPoly.constant(QQ, 2, 1)]])


def test_poly_det_specializes():
    rng = random.Random(3)
    k, n = 3, 3
    ts = variables(k)
    coeffs = [[[QQ.random(rng) for _ in range(k + 1)] for _ in range(n)] for _ in range(n)]
    entries = [[MultiPoly.constant(QQ, k, c[0]) + sum((t * x for t, x in zip(ts, c[1:])), MultiPoly.constant(QQ, k, 0))
                for c in row] for row in coeffs]
    p = poly_det(entries)
    assert p.total_degree <= n
    for _ in range(50):
        point = [QQ.random(rng) for _ in range(k)]
        concrete = [[c[0] + sum(x * y for x, y in zip(c[1:], point)) for c in row] for row in coeffs]
        assert p.evaluate(point) == det(Matrix(QQ, concrete))


# kron ----------------------------------------------------------------------------------------

def test_kron_identities():
    assert kron(Matrix.identity(QQ, 2), Matrix.identity(QQ, 2)) == Matrix.identity(QQ, 4)


def test_kron_block_layout():
    want = [[1, 0, 2, 0], [0, 1, 0, 2], [3, 0, 4, 0], [0, 3, 0, 4]]
    oracle = sympy.kronecker_product(sympy.Matrix([[1, 2], [3, 4]]), sympy.eye(2))
    assert oracle.tolist() == want
    assert kron(Matrix(QQ, [[1, 2], [3, 4]]), Matrix.identity(QQ, 2)) == Matrix(QQ, want)


def test_kron_determinant():
    rng = random.Random(11)
    for r, s in ((2, 3), (3, 2), (1, 4)):
        a = Matrix(QQ, [[QQ.random(rng) for _ in range(r)] for _ in range(r)])
        b = Matrix(QQ, [[QQ.random(rng) for _ in range(s)] for _ in range(s)])
        assert det(kron(a, b)) == det(a) ** s * det(b) ** r


# domains ---------------------------------------------------------------------------------------

def test_prime_field_arithmetic():
    F = GF(7)
    assert F(3) / F(5) == F(2)
    assert F.format(F(-1)) == "6"
    with pytest.raises(ValidationError):
        GF(6)


@given(st.integers(0, 12), st.integers(1, 12), st.integers(0, 12))
def test_prime_field_axioms(a, b, c):
    F = GF(13)
    x, y, z = F(a), F(b), F(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) / y == x
    assert x - x == F.zero


def test_extension_arithmetic():
    K = SimpleExtension(QQ, (-2, 0, 1), "s")
    s = K.generator
    assert s * s == K(2)
    assert (1 + s) ** -1 == s - 1
    assert K.parse("1/2 + s") == K((Fraction(1, 2), 1))
    assert K.format(1 + s) == "s + 1"


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_extension_field_inverse(a, b):
    K = SimpleExtension(QQ, (1, 0, 1), "i")
    x, y = K(tuple(a)), K(tuple(b))
    if y:
        assert (x / y) * y == x


def test_extension_over_prime_field():
    F4 = SimpleExtension(GF(2), (1, 1, 1), "w")
    w = F4.generator
    assert w**3 == F4.one
    assert len(list(F4.elements())) == 4


def test_reducible_modulus_rejected():
    with pytest.raises(ValidationError):
        SimpleExtension(QQ, (-4, 0, 1))


def test_parse_domain():
    assert parse_domain("Q") == QQ
    assert parse_domain("Z") == ZZ
    assert parse_domain("GF(5)") == GF(5)
    with pytest.raises(InputParseError):
        parse_domain("R")


def test_polynomial_coefficients():
    assert polynomial_coefficients("x^2 - 2") == [-2, 0, 1]
    assert polynomial_coefficients("x/2 + 1") == [1, Fraction(1, 2)]
    with pytest.raises(InputParseError):
        polynomial_coefficients("x^(1/2)")
