"""Truncated q-expansions of level-1 elliptic modular forms.

Provides the `QSeries` value type, the generators E4, E6, Delta and the
eta-power series used by the Jacobi layer, echelonized monomial bases of the
weight-k spaces, and the finite level-1 zero test mod p.

Precision contract: a series of precision N stores coefficients for the
exponents 0..N inclusive; every binary operation returns the minimum of the
operand precisions and never extrapolates.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from . import _rows as rows
from .errors import (ArithmeticDomainError, InvalidArgumentError,
                     PrecisionError, RingMismatchError)
from .ring import FpRing, RatRing, ring_from_tag


class QSeries:
    """One-variable truncated power series over a coefficient ring."""

    __slots__ = ("ring", "prec", "coeffs", "weight")

    def __init__(self, ring, coeffs, weight=None):
        self.ring = ring
        self.coeffs = coeffs
        self.prec = len(coeffs) - 1
        self.weight = weight
        if self.prec < 0:
            raise InvalidArgumentError("a QSeries needs at least its constant term")

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_ints(cls, ring, ints, weight=None):
        return cls(ring, rows.from_ints(ring, ints), weight=weight)

    @classmethod
    def zero(cls, ring, prec, weight=None):
        return cls(ring, rows.zeros(ring, prec + 1), weight=weight)

    @classmethod
    def const(cls, ring, value, prec, weight=0):
        row = rows.zeros(ring, prec + 1)
        row[0] = ring.from_int(value) if isinstance(value, int) else value
        return cls(ring, row, weight=weight)

    # -- access ---------------------------------------------------------------
    def coeff(self, n):
        if n < 0:
            return self.ring.zero
        if n > self.prec:
            raise PrecisionError(f"coefficient q^{n} beyond precision {self.prec}",
                                 required=n, available=self.prec)
        v = self.coeffs[n]
        return int(v) if isinstance(self.ring, FpRing) else v

    def coeff_list(self):
        return rows.aslist(self.ring, self.coeffs)

    def truncate(self, prec):
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}",
                                 required=prec, available=self.prec)
        return QSeries(self.ring, self.coeffs[:prec + 1], weight=self.weight)

    def is_zero(self, upto=None):
        upto = self.prec if upto is None else min(upto, self.prec)
        return rows.is_zero(self.ring, self.coeffs[:upto + 1])

    def __eq__(self, other):
        return (isinstance(other, QSeries) and self.ring == other.ring
                and self.prec == other.prec
                and rows.eq(self.ring, self.coeffs, other.coeffs))

    def __repr__(self):
        head = ", ".join(str(v) for v in self.coeff_list()[:6])
        return f"QSeries({self.ring.tag}, N={self.prec}, [{head}, ...])"

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring.tag} vs {other.ring.tag}")
        return min(self.prec, other.prec)

    def __add__(self, other):
        n = self._check(other)
        w = self.weight if self.weight == other.weight else None
        return QSeries(self.ring, rows.add(self.ring, self.coeffs[:n + 1], other.coeffs[:n + 1]), weight=w)

    def __sub__(self, other):
        n = self._check(other)
        w = self.weight if self.weight == other.weight else None
        return QSeries(self.ring, rows.sub(self.ring, self.coeffs[:n + 1], other.coeffs[:n + 1]), weight=w)

    def __neg__(self):
        return QSeries(self.ring, rows.neg(self.ring, self.coeffs), weight=self.weight)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            n = self._check(other)
            w = None
            if self.weight is not None and other.weight is not None:
                w = self.weight + other.weight
            out = rows.convolve_trunc(self.ring, self.coeffs, other.coeffs, n + 1)
            return QSeries(self.ring, out, weight=w)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        c = self.ring.from_int(c) if isinstance(c, int) else c
        return QSeries(self.ring, rows.scale(self.ring, self.coeffs, c), weight=self.weight)

    def inverse(self, prec=None):
        """Multiplicative inverse; the constant term must be a unit."""
        n = self.prec if prec is None else prec
        if n > self.prec:
            raise PrecisionError("cannot invert beyond stored precision",
                                 required=n, available=self.prec)
        out = rows.invert_series(self.ring, self.coeffs, n + 1)
        w = -self.weight if self.weight is not None else None
        return QSeries(self.ring, out, weight=w)

    def pow(self, e):
        if e < 0:
            raise InvalidArgumentError("negative powers: invert first")
        w = None if self.weight is None else self.weight * e
        result = QSeries.const(self.ring, 1, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        result.weight = w
        return result

    def reduce_mod(self, p):
        fp = ring_from_tag(f"fp:{p}")
        return QSeries(fp, rows.reduce_row(self.ring, self.coeffs, fp), weight=self.weight)

    def to_json(self):
        return {"kind": "qseries", "ring": self.ring.tag, "weight": self.weight,
                "prec": self.prec,
                "coeffs": [self.ring.to_token(v) for v in self.coeff_list()]}


# -- standard generators -------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(k):
    """Exact Bernoulli number B_k (B_1 = -1/2 convention)."""
    if k == 4:
        return Fraction(-1, 30)
    if k == 6:
        return Fraction(1, 42)
    b = [Fraction(1)]
    for m in range(1, k + 1):
        acc = sum(Fraction(comb(m + 1, j)) * b[j] for j in range(m))
        b.append(-acc / (m + 1))
    return b[k]


def _sigma_table(e, n):
    """sigma_e(1..n) by a divisor sieve; index 0 is unused (zero)."""
    table = [0] * (n + 1)
    for d in range(1, n + 1):
        de = d ** e
        for mult in range(d, n + 1, d):
            table[mult] += de
    return table


def eisenstein_q(k, prec, ring):
    """Normalized Eisenstein series of even weight k >= 4.

    E_k = 1 - (2k/B_k) * sum sigma_{k-1}(n) q^n; the scaling is integral for
    k = 4 and 6 (240 and -504).
    """
    if k % 2 or k < 4:
        raise InvalidArgumentError(f"Eisenstein weight must be even and >= 4, got {k}")
    scale = Fraction(-2 * k) / bernoulli(k)
    c = ring.from_rational(scale)
    sig = _sigma_table(k - 1, prec)
    if isinstance(ring, FpRing):
        ints = [1] + [c * (s % ring.p) % ring.p for s in sig[1:]]
        return QSeries.from_ints(ring, ints, weight=k)
    vals = [ring.one] + [ring.mul(c, ring.from_int(s)) for s in sig[1:]]
    return QSeries(ring, vals, weight=k)


def delta_q(prec, ring):
    """The discriminant cusp form Delta = (E4^3 - E6^2)/1728, leading q^1."""
    if prec < 1:
        raise InvalidArgumentError("Delta needs precision >= 1")
    e4 = eisenstein_q(4, prec, ring)
    e6 = eisenstein_q(6, prec, ring)
    num = e4 * e4 * e4 - e6 * e6
    out = [ring.divexact(v, ring.from_int(1728)) for v in num.coeff_list()]
    if isinstance(ring, FpRing):
        return QSeries.from_ints(ring, out, weight=12)
    return QSeries(ring, out, weight=12)


def eta_pow6(prec, ring):
    """eta^6 with the fractional q-power removed (constant term 1).

    Computed as the square of the eta^3 series sum (-1)^j (2j+1) q^{j(j+1)/2}.
    """
    cube = rows.zeros(ring, prec + 1)
    j = 0
    while j * (j + 1) // 2 <= prec:
        cube[j * (j + 1) // 2] = ring.from_int((2 * j + 1) * (-1) ** j)
        j += 1
    six = rows.convolve_trunc(ring, cube, cube, prec + 1)
    return QSeries(ring, six)


# -- weight-k monomial bases -----------------------------------------------------

def _weight_monomials(k):
    """Exponent triples (a, b, c) with 4a + 6b + 12c = k."""
    out = []
    for c in range(k // 12 + 1):
        rem = k - 12 * c
        for b in range(rem // 6 + 1):
            rest = rem - 6 * b
            if rest % 4 == 0:
                out.append((rest // 4, b, c))
    return out


def _rref_exact(mat):
    """Gauss-Jordan over Q on a list-of-lists of Fractions; returns (rows, pivots)."""
    mat = [list(r) for r in mat]
    nrows, ncols = len(mat), len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(mat):
            break
        sel = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return mat[:len(pivots)], pivots


def mk_basis(k, prec, ring):
    """Echelonized basis of the weight-k level-1 space over `ring`.

    The span of the monomials E4^a E6^b Delta^c with 4a + 6b + 12c = k is row
    reduced so pivot columns strictly increase and pivots equal 1.  The length
    of the result is the dimension of the space; this is computed from the
    rank, not from a closed formula.
    """
    if k % 2:
        raise InvalidArgumentError(f"odd weight {k} not supported")
    if k < 0:
        return []
    if k == 0:
        return [QSeries.const(ring, 1, prec, weight=0)]
    monos = _weight_monomials(k)
    if not monos:
        return []
    upper = k // 12 + 1
    if prec < upper:
        raise PrecisionError(f"mk_basis({k}) needs precision >= {upper}",
                             required=upper, available=prec)
    amax = max(a for a, _, _ in monos)
    bmax = max(b for _, b, _ in monos)
    cmax = max(c for _, _, c in monos)
    e4 = eisenstein_q(4, prec, ring)
    e6 = eisenstein_q(6, prec, ring)
    dl = delta_q(prec, ring) if cmax else None
    pw4 = _power_chain(e4, amax, ring, prec)
    pw6 = _power_chain(e6, bmax, ring, prec)
    pwd = _power_chain(dl, cmax, ring, prec) if cmax else [QSeries.const(ring, 1, prec)]
    series = [pw4[a] * pw6[b] * pwd[c] for a, b, c in monos]
    if isinstance(ring, FpRing):
        from .linalg import FpMatrix, rref
        mat = FpMatrix(ring.p, [s.coeff_list() for s in series])
        red, rank, _ = rref(mat)
        return [QSeries.from_ints(ring, row, weight=k) for row in red.tolist()[:rank]]
    frows = [[Fraction(v) for v in s.coeff_list()] for s in series]
    red, pivots = _rref_exact(frows)
    out = []
    for row in red:
        vals = [ring.from_rational(v) for v in row]
        out.append(QSeries(ring, vals, weight=k))
    return out


def _power_chain(f, emax, ring, prec):
    chain = [QSeries.const(ring, 1, prec, weight=0)]
    for _ in range(emax):
        chain.append(chain[-1] * f)
    return chain


@lru_cache(maxsize=None)
def _mk_dim_cached(k, tag):
    ring = ring_from_tag(tag)
    return len(mk_basis(k, k // 12 + 2 if k > 0 else 1, ring))


def mk_dim(k, p=None):
    """Dimension of the weight-k level-1 space, via the rank of the monomial span.

    Over a prime field the rank agrees with the rational one because the
    echelonized integral basis has unit pivots.
    """
    if k < 0 or k % 2:
        return 0
    return _mk_dim_cached(k, f"fp:{p}" if p is not None else "rat")


def elliptic_sturm_zero(f, k):
    """Finite zero test mod p for f in the weight-k level-1 space.

    True iff f == 0 mod p, decided by vanishing of the coefficients
    0..floor(k/12).  Requires f over a prime field and enough precision.
    """
    if not isinstance(f.ring, FpRing):
        raise InvalidArgumentError("elliptic_sturm_zero needs a prime-field series")
    if k < 0 or k % 2:
        raise InvalidArgumentError(f"not a valid level-1 even weight: {k}")
    bound = k // 12
    if f.prec < bound:
        raise PrecisionError(f"Sturm test at weight {k} needs precision >= {bound}",
                             required=bound, available=f.prec)
    return f.is_zero(upto=bound)
