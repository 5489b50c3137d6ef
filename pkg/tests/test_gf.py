import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fqzeros.errors import DivisionByZero, FieldMismatch, NotPrimePower, ParseError
from fqzeros.gf import FieldElem, elements, field_make, matrix_rank, rref

QS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_prime_field_shape():
    F = field_make(5)
    assert (F.p, F.e, F.q) == (5, 1, 5)


def test_f4_modulus_is_the_only_irreducible_quadratic():
    F = field_make(4)
    assert (F.p, F.e) == (2, 2)
    assert tuple(F.modulus) == (1, 1, 1)
    assert tuple(F.modulus) == oracles.modulus(4)


@pytest.mark.parametrize("q", [6, 10, 12, 1, 0])
def test_not_prime_power(q):
    with pytest.raises((NotPrimePower, ValueError)):
        field_make(q)


def test_spec_arithmetic_examples():
    assert field_make(2).add(1, 1) == 0
    F4 = field_make(4)
    g = 2  # the class of x
    assert F4.mul(g, g) == F4.add(g, 1)
    assert field_make(7).inv(3) == 5


@pytest.mark.parametrize("q", QS)
def test_modulus_matches_exhaustive_search(q):
    assert tuple(field_make(q).modulus) == oracles.modulus(q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_tables_match_polynomial_arithmetic(q):
    F = field_make(q)
    for a in range(q):
        for b in range(q):
            assert F.add(a, b) == oracles.add(q, a, b)
            assert F.mul(a, b) == oracles.mul(q, a, b)
        assert F.neg(a) == oracles.neg(q, a)
        if a:
            assert F.inv(a) == oracles.inv(q, a)


@pytest.mark.parametrize("q", QS)
def test_generator_is_least_primitive(q):
    F = field_make(q)
    if q <= 27:
        assert F.generator == next(g for g in range(1, q) if oracles.is_primitive(q, g))
    assert F.order(F.generator) == q - 1


@pytest.mark.parametrize("q", [4, 8, 9, 25])
def test_log_antilog_round_trip(q):
    F = field_make(q)
    for a in range(1, q):
        assert F.antilog(F.log(a)) == a
    for k in range(q - 1):
        assert F.log(F.antilog(k)) == k


def test_elements_and_orders():
    assert list(elements(field_make(2))) == [0, 1]
    assert len(elements(field_make(4))) == 4
    F9 = field_make(9)
    els = list(elements(F9))
    assert len(els) == 9
    assert sum(1 for a in els if a and 8 % F9.order(a) == 0) == 8


def test_errors():
    F = field_make(7)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(DivisionByZero):
        F.div(3, 0)
    with pytest.raises(FieldMismatch):
        F(1) + field_make(5)(1)


def test_field_elem_operators():
    F = field_make(9)
    a, b = F(4), F(7)
    assert int(a + b) == F.add(4, 7)
    assert int(a * b) == F.mul(4, 7)
    assert (a / b) * b == a
    assert a - a == F(0)
    assert a ** 8 == F(1)
    assert isinstance(-a, FieldElem)


@pytest.mark.parametrize("q", [3, 4, 9])
def test_format_parse_round_trip(q):
    F = field_make(q)
    for a in range(q):
        assert F.parse(F.format(a)) == a
    with pytest.raises(ParseError):
        F.parse("g^")


def test_pickle_keeps_identity():
    F = field_make(8)
    assert pickle.loads(pickle.dumps(F)) is F


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([4, 8, 9, 25, 27]), st.data())
def test_field_axioms(q, data):
    F = field_make(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    assert F.pow(a, q) == a


def test_vectorised_ops_agree_with_scalar():
    F = field_make(16)
    a = np.arange(16)
    b = (a * 5 + 3) % 16
    assert list(F.mul_arr(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(F.add_arr(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]


def test_rank_and_rref():
    F = field_make(3)
    mat = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 2]])
    assert matrix_rank(F, mat) == 2
    A, piv = rref(F, mat)
    assert piv == [0, 1]
    assert matrix_rank(F, mat) == oracles.rank(3, mat.tolist())


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 4), st.integers(1, 5), st.data())
def test_rank_matches_oracle(q, rows, cols, data):
    F = field_make(q)
    mat = [[data.draw(st.integers(0, q - 1)) for _ in range(cols)] for _ in range(rows)]
    assert matrix_rank(F, np.array(mat)) == oracles.rank(q, mat)
