from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from siegelcong.errors import ArithmeticDomainError, InvalidArgumentError
from siegelcong.ring import (FpRing, PrimeFieldElem, is_prime, legendre,
                             reduce_rational, ring_from_tag)

PRIMES = [5, 7, 11, 13, 17, 19, 23]


def test_legendre_examples():
    assert legendre(1, 5) == 1
    assert legendre(2, 5) == -1
    assert legendre(0, 7) == 0


def test_legendre_rejects_non_primes():
    for bad in (1, 2, 4, 9, 15):
        with pytest.raises(InvalidArgumentError):
            legendre(3, bad)


@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=10**6),
       st.integers(min_value=1, max_value=10**6))
def test_legendre_multiplicative(p, a, b):
    if a % p and b % p:
        assert legendre(a, p) * legendre(b, p) == legendre(a * b, p)


@pytest.mark.parametrize("p", PRIMES)
def test_legendre_half_are_squares(p):
    vals = [legendre(b, p) for b in range(1, p)]
    assert vals.count(1) == (p - 1) // 2
    assert vals.count(-1) == (p - 1) // 2


@pytest.mark.parametrize("p", PRIMES)
def test_legendre_euler_criterion(p):
    for a in range(p):
        e = pow(a, (p - 1) // 2, p)
        assert legendre(a, p) % p == e


def test_prime_field_inverse():
    assert PrimeFieldElem(7, 3).inverse().value == 5
    with pytest.raises(ArithmeticDomainError):
        PrimeFieldElem(7, 0).inverse()


def test_prime_field_requires_p_at_least_5():
    with pytest.raises(InvalidArgumentError):
        PrimeFieldElem(3, 1)
    with pytest.raises(InvalidArgumentError):
        PrimeFieldElem(9, 1)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(p, a, b, c):
    x, y, z = (PrimeFieldElem(p, v) for v in (a, b, c))
    assert (x + y).value == (a + b) % p
    assert (x * (y + z)).value == (x * y + x * z).value
    assert (x - x).value == 0
    if x.value:
        assert (x * x.inverse()).value == 1


def test_reduce_examples():
    assert reduce_rational(Fraction(1, 12), 5) == 3
    with pytest.raises(ArithmeticDomainError):
        reduce_rational(Fraction(1, 5), 5)


@given(st.sampled_from(PRIMES),
       st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4),
       st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4))
def test_reduce_is_ring_homomorphism(p, x, y):
    if x.denominator % p == 0 or y.denominator % p == 0:
        return
    # sums and products of p-integral rationals stay p-integral
    assert reduce_rational(x + y, p) == (reduce_rational(x, p) + reduce_rational(y, p)) % p
    assert reduce_rational(x * y, p) == reduce_rational(x, p) * reduce_rational(y, p) % p


def test_ring_from_tag():
    assert ring_from_tag("int").tag == "int"
    assert ring_from_tag("rat").tag == "rat"
    assert isinstance(ring_from_tag("fp:11"), FpRing)
    with pytest.raises(InvalidArgumentError):
        ring_from_tag("fp:6")
    with pytest.raises(InvalidArgumentError):
        ring_from_tag("gf2")


def test_fp_ring_ops():
    r = ring_from_tag("fp:7")
    assert r.inv(3) == 5
    assert r.from_rational(Fraction(1, 12)) == pow(12 % 7, 5, 7)
    with pytest.raises(ArithmeticDomainError):
        r.inv(0)
    with pytest.raises(ArithmeticDomainError):
        ring_from_tag("fp:5").from_rational(Fraction(2, 5))


def test_int_ring_divexact():
    r = ring_from_tag("int")
    assert r.divexact(12, 4) == 3
    with pytest.raises(ArithmeticDomainError):
        r.divexact(13, 4)


def test_is_prime_spot_checks():
    assert all(is_prime(p) for p in PRIMES)
    assert not any(is_prime(n) for n in (0, 1, 4, 21, 91, 561, 1105))
    assert is_prime(2 ** 31 - 1)
