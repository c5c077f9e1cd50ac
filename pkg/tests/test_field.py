import pytest
from hypothesis import given, strategies as st

from gshift.field import (
    FieldSpec,
    NotPrime,
    SpecMismatch,
    ZeroInverse,
    arith,
    field_make,
    is_prime,
    pow_fermat_check,
    product,
)

PRIMES = [2, 3, 5, 7, 11, 13, 997]


def test_is_prime_small_table():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p", [0, 1, 4, 9, 15, 1001])
def test_non_primes_rejected(p):
    with pytest.raises(NotPrime):
        field_make(p)


def test_values_reduce_mod_p():
    F = FieldSpec(5)
    assert F(7).value == 2
    assert F(-1).value == 4
    assert F(3) + F(4) == F(2)
    assert F(3) * F(4) == F(2)
    assert F(1) - F(3) == F(3)
    assert -F(2) == F(3)


def test_inverse_examples():
    F = FieldSpec(7)
    assert F(3).inverse() == F(5)
    assert F(3) ** -1 == F(5)
    assert arith("inv", F(6)) == F(6)
    with pytest.raises(ZeroInverse):
        F(0).inverse()
    with pytest.raises(ZeroDivisionError):
        arith("inv", F(0))


def test_mixed_fields_refused():
    with pytest.raises(SpecMismatch):
        FieldSpec(2)(1) + FieldSpec(3)(1)


def test_arith_dispatch():
    F = FieldSpec(3)
    assert arith("add", F(2), F(2)) == F(1)
    assert arith("mul", F(2), F(2)) == F(1)
    assert arith("neg", F(1)) == F(2)
    with pytest.raises(ValueError):
        arith("div", F(1), F(1))


def test_empty_product_is_one_only_with_field():
    F = FieldSpec(5)
    assert product([], F) == F.one
    with pytest.raises(ValueError):
        product([])
    assert product([F(2), F(3), F(4)]) == F(4)


def test_truthiness_means_nonzero():
    F = FieldSpec(3)
    assert not F(0)
    assert F(1) and F(2)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_field_axioms(p, a, b, c):
    F = FieldSpec(p)
    x, y, z = F(a), F(b), F(c)
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + (-x) == F.zero
    if x:
        assert x * x.inverse() == F.one


@given(st.sampled_from(PRIMES), st.integers())
def test_fermat(p, a):
    assert pow_fermat_check(FieldSpec(p)(a))


@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=50), st.integers())
def test_power_of_p_multiple_collapses(p, q, a):
    # a^(p*q) == a^q: repeating a cycle product p times changes nothing
    x = FieldSpec(p)(a)
    assert x ** (p * q) == x ** q
