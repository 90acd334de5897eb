"""Coefficient rings: prime fields F_p, exact integers, exact rationals.

Series code throughout the package is generic over a small ring protocol
(`Ring`): elements are plain ``int`` values for the ``int`` and ``fp:<p>``
rings and `fractions.Fraction` for ``rat``.  Prime-field residues are kept
canonical in ``[0, p)``.  Rings are stateless, hashable, and compare by tag,
so they are safe to share between concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArithmeticDomainError, InvalidArgumentError

ExactRat = Fraction

# Witness set sufficient for deterministic Miller-Rabin below 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin primality test (valid for n < 3.3e24)."""
    if not isinstance(n, int) or n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_odd_prime(p, minimum=3):
    if not isinstance(p, int) or p < minimum or p % 2 == 0 or not is_prime(p):
        raise InvalidArgumentError(f"expected an odd prime >= {minimum}, got {p!r}")


def legendre(a, p):
    """Legendre symbol (a/p) in {-1, 0, +1}, by Euler's criterion.

    Requires p an odd prime.  Returns 0 iff p | a, +1 iff a is a nonzero
    square mod p, and -1 otherwise.
    """
    require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class PrimeFieldElem:
    """Canonical residue in [0, p) for an odd prime p >= 5.

    Immutable; all arithmetic returns new elements.  Mixed arithmetic with
    ``int`` coerces the integer into F_p.
    """

    p: int
    value: int

    def __post_init__(self):
        require_odd_prime(self.p, minimum=5)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElem):
            if other.p != self.p:
                raise ArithmeticDomainError(f"mixed primes {self.p} and {other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElem(self.p, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElem(self.p, self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElem(self.p, v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElem(self.p, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElem(self.p, -self.value)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElem(self.p, pow(self.value, e, self.p))

    def inverse(self):
        if self.value == 0:
            raise ArithmeticDomainError(f"0 is not invertible in F_{self.p}")
        return PrimeFieldElem(self.p, pow(self.value, self.p - 2, self.p))

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * PrimeFieldElem(self.p, v).inverse()

    def is_zero(self):
        return self.value == 0

    def legendre(self):
        return legendre(self.value, self.p)


def reduce_rational(x, p):
    """Reduce a p-integral rational (or integer) to its residue in [0, p).

    Raises `ArithmeticDomainError` when p divides the denominator.
    """
    require_odd_prime(p)
    if isinstance(x, int):
        return x % p
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise ArithmeticDomainError(f"{x} is not p-integral for p = {p}")
    return num * pow(den % p, p - 2, p) % p


class Ring:
    """Minimal coefficient-ring protocol used by the series types.

    Elements are plain ints (int / prime fields) or Fractions (rat); the
    ring object only carries the operations.  Subclasses are immutable and
    hashable, equality is by tag.
    """

    tag = "?"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return f"{type(self).__name__}({self.tag!r})"

    # -- element constructors ------------------------------------------------
    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, a):
        raise NotImplementedError

    def from_rational(self, x):
        """Image of a rational number, when it exists in this ring."""
        raise NotImplementedError

    # -- arithmetic ----------------------------------------------------------
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        raise NotImplementedError

    def divexact(self, a, b):
        """a / b when the quotient exists in the ring; domain error otherwise."""
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == self.zero

    def is_unit(self, a):
        raise NotImplementedError

    def pow(self, a, e):
        r = self.one
        for _ in range(e):
            r = self.mul(r, a)
        return r

    # -- reduction into a prime field ---------------------------------------
    def reduce(self, a, p):
        """Residue of a in [0, p); the map is a ring homomorphism."""
        raise NotImplementedError

    def to_token(self, a):
        """JSON-friendly rendering (ints in decimal, rationals as 'n/d')."""
        return int(a)

    def from_token(self, t):
        return self.from_int(int(t))


class IntRing(Ring):
    tag = "int"

    def from_int(self, a):
        return int(a)

    def from_rational(self, x):
        x = Fraction(x)
        if x.denominator != 1:
            raise ArithmeticDomainError(f"{x} is not an integer")
        return x.numerator

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ArithmeticDomainError(f"{a} is not a unit in Z")

    def divexact(self, a, b):
        if b == 0:
            raise ArithmeticDomainError("division by zero")
        q, r = divmod(a, b)
        if r:
            raise ArithmeticDomainError(f"{a} is not divisible by {b}")
        return q

    def is_unit(self, a):
        return a in (1, -1)

    def reduce(self, a, p):
        return a % p


class RatRing(Ring):
    tag = "rat"

    def from_int(self, a):
        return Fraction(a)

    def from_rational(self, x):
        return Fraction(x)

    def inv(self, a):
        if a == 0:
            raise ArithmeticDomainError("0 is not invertible in Q")
        return 1 / Fraction(a)

    def divexact(self, a, b):
        return Fraction(a) / Fraction(b)

    def is_unit(self, a):
        return a != 0

    def reduce(self, a, p):
        return reduce_rational(Fraction(a), p)

    def to_token(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def from_token(self, t):
        return Fraction(str(t))


class FpRing(Ring):
    """The prime field F_p for an odd prime p >= 5, residues in [0, p)."""

    def __init__(self, p):
        require_odd_prime(p, minimum=5)
        self.p = p
        self.tag = f"fp:{p}"
        # numpy int64 rows are safe as long as accumulated convolutions of
        # residues cannot overflow; tiny table-checking primes always fit.
        self.fits64 = p < (1 << 21)

    def from_int(self, a):
        return int(a) % self.p

    def from_rational(self, x):
        return reduce_rational(Fraction(x), self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ArithmeticDomainError(f"0 is not invertible in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def is_unit(self, a):
        return a % self.p != 0

    def pow(self, a, e):
        return pow(a, e, self.p)

    def reduce(self, a, p):
        if p != self.p:
            raise ArithmeticDomainError(f"cannot reduce F_{self.p} values mod {p}")
        return a % p

    def legendre(self, a):
        return legendre(a, self.p)


_INT = IntRing()
_RAT = RatRing()


def ring_from_tag(tag):
    """Resolve a CLI ring selector: 'int', 'rat', or 'fp:<p>'."""
    if tag == "int":
        return _INT
    if tag == "rat":
        return _RAT
    if tag.startswith("fp:"):
        try:
            p = int(tag[3:])
        except ValueError:
            raise InvalidArgumentError(f"bad ring tag {tag!r}") from None
        return FpRing(p)
    raise InvalidArgumentError(f"unknown ring tag {tag!r} (expected int, rat, or fp:<p>)")
