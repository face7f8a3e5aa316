import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tensor_oracle as oracle
from norma.algebra import FiniteAlgebra, norm_element, quadratic_algebra, split_algebra
from norma.errors import ShapeError
from norma.gamma import (
    ActionTable,
    GammaSpace,
    check_gamma_relations,
    divided_product,
    exponent_vectors,
    gamma_map,
    gamma_pure,
    law_eval_gamma,
    mu_action,
    pi_map,
)
from norma.scalars import GF, QQ, Matrix

SQRT2 = quadratic_algebra(QQ, 2)

ints = st.integers(-4, 4)


def test_basis_order_is_lexicographic():
    assert exponent_vectors(2, 2) == ((0, 2), (1, 1), (2, 0))


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("d", range(0, 5))
def test_dimension_is_multiset_count(n, d):
    count = len({tuple(sorted(t)) for t in itertools.product(range(n), repeat=d)})
    assert GammaSpace(QQ, n, d).dim == count == math.comb(n + d - 1, d)


# gamma_pure -----------------------------------------------------------------------------------

def test_gamma_square_of_basis_vector():
    space = GammaSpace(QQ, 2, 2)
    assert gamma_pure(space, [1, 0]) == space.basis_element((2, 0))


def test_gamma_square_of_sum():
    space = GammaSpace(QQ, 2, 2)
    want = space.basis_element((2, 0)) + space.basis_element((1, 1)) + space.basis_element((0, 2))
    assert gamma_pure(space, [1, 1]) == want


def test_gamma_square_of_scaled_vector():
    space = GammaSpace(QQ, 2, 2)
    assert gamma_pure(space, [2, 0]) == space.basis_element((2, 0)) * QQ(4)


def test_gamma_pure_rejects_wrong_length():
    with pytest.raises(ShapeError):
        gamma_pure(GammaSpace(QQ, 2, 2), [1, 2, 3])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_gamma_pure_matches_full_tensor(n, d, data):
    m = data.draw(st.lists(ints, min_size=n, max_size=n))
    space = GammaSpace(QQ, n, d)
    assert gamma_pure(space, m).coords == oracle.to_gamma(space, oracle.pure([QQ(x) for x in m], d))


# divided products -------------------------------------------------------------------------------

def test_binomial_products():
    g1 = GammaSpace(QQ, 2, 1)
    g2 = GammaSpace(QQ, 2, 2)
    g3 = GammaSpace(QQ, 2, 3)
    e1, e2 = g1.basis_element((1, 0)), g1.basis_element((0, 1))
    assert divided_product(e1, e1) == g2.basis_element((2, 0)) * QQ(2)
    assert divided_product(e1, e2) == g2.basis_element((1, 1))
    assert divided_product(g2.basis_element((2, 0)), e1) == g3.basis_element((3, 0)) * QQ(3)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.integers(1, 2), st.data())
def test_divided_product_is_the_shuffle_product(n, d1, d2, data):
    s1, s2 = GammaSpace(QQ, n, d1), GammaSpace(QQ, n, d2)
    u = s1.element([QQ(x) for x in data.draw(st.lists(ints, min_size=s1.dim, max_size=s1.dim))])
    v = s2.element([QQ(x) for x in data.draw(st.lists(ints, min_size=s2.dim, max_size=s2.dim))])
    target = GammaSpace(QQ, n, d1 + d2)
    want = oracle.to_gamma(target, oracle.shuffle(oracle.from_gamma(s1, u.coords), d1,
                                                  oracle.from_gamma(s2, v.coords), d2))
    assert divided_product(u, v).coords == want


# mu ---------------------------------------------------------------------------------------------

def test_unit_acts_trivially():
    space_a = GammaSpace(QQ, 2, 2)
    one = gamma_pure(space_a, SQRT2.unit)
    space_m = GammaSpace(QQ, 2, 2)
    for a in space_m.basis:
        x = space_m.basis_element(a)
        assert mu_action(SQRT2, one, x) == x


def test_mu_is_multiplicative_on_pure_elements():
    rng = random.Random(7)
    space = GammaSpace(QQ, 2, 2)
    for _ in range(50):
        r, m = SQRT2.random_element(rng), SQRT2.random_element(rng)
        lhs = mu_action(SQRT2, gamma_pure(space, r.coords), gamma_pure(space, m.coords))
        assert lhs == gamma_pure(space, (r * m).coords)


def test_mixed_orbit_sum_is_idempotent_in_split_algebra():
    S = split_algebra(QQ, 2)
    space = GammaSpace(QQ, 2, 2)
    mixed = space.basis_element((1, 1))
    assert mu_action(S, mixed, mixed) == mixed


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_mu_matches_componentwise_tensor_action(data):
    A = split_algebra(QQ, 3) if data.draw(st.booleans()) else quadratic_algebra(QQ, -1)
    space = GammaSpace(QQ, A.rank, 2)
    g = space.element([QQ(x) for x in data.draw(st.lists(ints, min_size=space.dim, max_size=space.dim))])
    x = space.element([QQ(x) for x in data.draw(st.lists(ints, min_size=space.dim, max_size=space.dim))])
    want = oracle.act(A.basis_matrices, oracle.from_gamma(space, g.coords), oracle.from_gamma(space, x.coords))
    assert mu_action(ActionTable.regular(A), g, x).coords == oracle.to_gamma(space, want)


# pi -----------------------------------------------------------------------------------------------

def test_pi_sqrt2():
    # basis order (0,2), (1,1), (2,0): π(γ²(x)) = −2, π(γ¹(1)γ¹(x)) = 0, π(γ²(1)) = 1
    assert pi_map(SQRT2) == (-2, 0, 1)


def test_pi_split():
    assert pi_map(split_algebra(QQ, 2)) == (0, 1, 0)


@pytest.mark.parametrize("A", [SQRT2, split_algebra(QQ, 3), quadratic_algebra(GF(3), -1),
                               FiniteAlgebra(QQ, [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [1, -1, 0]],
                                                  [[0, 0, 1], [1, -1, 0], [0, 1, -1]]], [1, 0, 0])])
def test_pi_of_gamma_is_norm_and_pi_is_multiplicative(A):
    rng = random.Random(2)
    space = GammaSpace(A.base, A.rank, A.rank)
    pi = pi_map(A)

    def apply_pi(v):
        return sum((p * c for p, c in zip(pi, v)), A.base.zero)

    assert apply_pi(gamma_pure(space, A.unit).coords) == 1
    for _ in range(20):
        r, s = A.random_element(rng), A.random_element(rng)
        gr, gs = gamma_pure(space, r.coords), gamma_pure(space, s.coords)
        assert apply_pi(gr.coords) == norm_element(r)
        assert apply_pi(mu_action(A, gr, gs).coords) == apply_pi(gr.coords) * apply_pi(gs.coords)
    # π is multiplicative on general elements, not only on pure ones
    for _ in range(10):
        u = space.element([A.base.random(rng) for _ in range(space.dim)])
        v = space.element([A.base.random(rng) for _ in range(space.dim)])
        assert apply_pi(mu_action(A, u, v).coords) == apply_pi(u.coords) * apply_pi(v.coords)


# polynomial laws ---------------------------------------------------------------------------------------

def test_law_eval_one_variable_is_homogeneous():
    space = GammaSpace(QQ, 2, 3)
    polys = law_eval_gamma(space, [[QQ(1), QQ(2)]])
    pure = gamma_pure(space, [1, 2]).coords
    for p, c in zip(polys, pure):
        assert p.terms == ({(3,): c} if c else {})


def test_law_eval_two_variables():
    space = GammaSpace(QQ, 2, 2)
    polys = law_eval_gamma(space, [[QQ(1), QQ(0)], [QQ(0), QQ(1)]])
    assert [p.terms for p in polys] == [{(0, 2): 1}, {(1, 1): 1}, {(2, 0): 1}]
    assert [p.evaluate([1, 1]) for p in polys] == list(gamma_pure(space, [1, 1]).coords)


def test_law_eval_specializes_to_gamma_pure():
    rng = random.Random(4)
    space = GammaSpace(QQ, 3, 2)
    ms = [[QQ.random(rng) for _ in range(3)] for _ in range(2)]
    polys = law_eval_gamma(space, ms)
    for _ in range(50):
        t = [QQ.random(rng) for _ in range(2)]
        m = [t[0] * a + t[1] * b for a, b in zip(*ms)]
        assert [p.evaluate(t) for p in polys] == list(gamma_pure(space, m).coords)


def test_gamma_map_is_functorial():
    rng = random.Random(9)
    source, target = GammaSpace(QQ, 2, 3), GammaSpace(QQ, 3, 3)
    phi = Matrix(QQ, [[QQ.random(rng) for _ in range(2)] for _ in range(3)])
    g = gamma_map(phi, source, target)
    for _ in range(50):
        m = [QQ.random(rng) for _ in range(2)]
        assert g.apply(gamma_pure(source, m).coords) == gamma_pure(target, phi.apply(m)).coords


# relations ----------------------------------------------------------------------------------------------

@pytest.mark.parametrize("base,n,d", [(QQ, 3, 2), (GF(2), 2, 2), (QQ, 2, 3), (GF(3), 2, 3)])
def test_gamma_relations(base, n, d):
    report = check_gamma_relations(base, n, d, random.Random(0), 100)
    assert report.dimensions[d] == math.comb(n + d - 1, d)
