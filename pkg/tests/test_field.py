import itertools

import pytest
from hypothesis import given, strategies as st

from ladderwork.field import (
    ModulusMismatch,
    PrimeFieldElement,
    check_prime,
    elements,
    fp,
    fp_inv,
    fp_pow,
    inv_mod,
)


@pytest.mark.parametrize("p,a,want", [(3, 2, 2), (3, 1, 1), (5, 3, 2)])
def test_inverse_examples(p, a, want):
    assert fp_inv(fp(a, p)) == fp(want, p)
    assert inv_mod(a, p) == want


@pytest.mark.parametrize("p,a,n,want", [(3, 2, 3, 2), (3, 0, 5, 0), (5, 2, 0, 1)])
def test_power_examples(p, a, n, want):
    assert fp_pow(fp(a, p), n) == fp(want, p)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        fp_inv(fp(0, 3))
    with pytest.raises(ZeroDivisionError):
        inv_mod(6, 3)


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -3])
def test_rejects_bad_moduli(bad):
    with pytest.raises(ValueError):
        check_prime(bad)


def test_mixing_moduli_is_an_error():
    with pytest.raises(ModulusMismatch):
        fp(1, 3) + fp(1, 5)
    with pytest.raises(ModulusMismatch):
        fp(1, 3) == fp(1, 5)


def test_elements_are_immutable():
    a = fp(2, 7)
    with pytest.raises(AttributeError):
        a.residue = 3


@pytest.mark.parametrize("p", [3, 5, 7])
def test_field_axioms_exhaustive(p):
    els = elements(p)
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els[1:]:
        assert a * fp_inv(a) == 1
        assert a / a == 1
    for a, b in itertools.product(els, repeat=2):
        assert (a + b) ** p == a ** p + b ** p


@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(), st.integers())
def test_mixed_int_arithmetic(p, m, n):
    a = PrimeFieldElement(m, p)
    assert int(a + n) == (m + n) % p
    assert int(a * n) == (m * n) % p
    assert int(n - a) == (n - m) % p
    assert fp_pow(a, p) == a
