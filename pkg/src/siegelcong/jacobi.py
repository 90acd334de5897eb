"""Jacobi forms of even weight as truncated two-variable (q, zeta) series.

Covers the weak index-1 generators built from theta quotients, holomorphic
index-1 generators, products, the heat operator, mod-p filtrations and heat
cycles, and the finite congruence criteria.

Storage: a form of index m and precision N keeps a dense row for every
0 <= n <= N over the full admissible range |r| <= isqrt(4nm + m^2); for
holomorphic forms the entries with 4nm - r^2 < 0 are zero.  Forms are
immutable values; every operation returns a new form.

The finite zero test mod p routes through the weak-form decomposition and a
level-1 Sturm check on each component.  There is no published Sturm-type
bound at the Jacobi level; this reduction is this library's own construction
(see README).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from . import _rows as rows
from .errors import (ArithmeticDomainError, DecompositionError,
                     InvalidArgumentError, PrecisionError, RingMismatchError)
from .linalg import FpMatrix, kernel_basis, membership, rref
from .qexp import QSeries, delta_q, eisenstein_q, elliptic_sturm_zero, eta_pow6, mk_basis, mk_dim
from .ring import FpRing, IntRing, RatRing, legendre, ring_from_tag

NEG_INF = float("-inf")


def rbound(index, n):
    """Largest |r| a weak form of the given index may carry at q^n."""
    return isqrt(4 * n * index + index * index)


class JacobiFormSeries:
    """Truncated expansion sum_{n,r} c(n, r) q^n zeta^r of weight k, index m."""

    __slots__ = ("ring", "weight", "index", "prec", "weak", "rows")

    def __init__(self, ring, weight, index, row_list, weak=False):
        if index < 0:
            raise InvalidArgumentError(f"index must be >= 0, got {index}")
        self.ring = ring
        self.weight = weight
        self.index = index
        self.rows = row_list
        self.prec = len(row_list) - 1
        self.weak = weak

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, ring, weight, index, prec, weak=False):
        rl = [rows.zeros(ring, 2 * rbound(index, n) + 1) for n in range(prec + 1)]
        return cls(ring, weight, index, rl, weak=weak)

    def copy(self):
        return JacobiFormSeries(self.ring, self.weight, self.index,
                                [rows.copy(self.ring, r) for r in self.rows],
                                weak=self.weak)

    # -- access -------------------------------------------------------------
    def rb(self, n):
        return rbound(self.index, n)

    def c(self, n, r):
        """Coefficient c(n, r); zero outside the admissible range."""
        if n < 0:
            return self.ring.zero
        if n > self.prec:
            raise PrecisionError(f"row q^{n} beyond precision {self.prec}",
                                 required=n, available=self.prec)
        b = self.rb(n)
        if abs(r) > b:
            return self.ring.zero
        v = self.rows[n][b + r]
        return int(v) if isinstance(self.ring, FpRing) else v

    def is_zero_window(self):
        return all(rows.is_zero(self.ring, row) for row in self.rows)

    def __eq__(self, other):
        return (isinstance(other, JacobiFormSeries) and self.ring == other.ring
                and self.index == other.index and self.prec == other.prec
                and all(rows.eq(self.ring, a, b) for a, b in zip(self.rows, other.rows)))

    def __repr__(self):
        return (f"JacobiFormSeries({self.ring.tag}, k={self.weight}, m={self.index}, "
                f"N={self.prec}, weak={self.weak})")

    def truncate(self, prec):
        if prec > self.prec:
            raise PrecisionError("cannot extend a truncated form",
                                 required=prec, available=self.prec)
        return JacobiFormSeries(self.ring, self.weight, self.index,
                                self.rows[:prec + 1], weak=self.weak)

    # -- ring-level arithmetic ------------------------------------------------
    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring.tag} vs {other.ring.tag}")
        if self.index != other.index:
            raise InvalidArgumentError(f"index mismatch: {self.index} vs {other.index}")
        return min(self.prec, other.prec)

    def __add__(self, other):
        n = self._check(other)
        w = self.weight if self.weight == other.weight else None
        rl = [rows.add(self.ring, self.rows[i], other.rows[i]) for i in range(n + 1)]
        return JacobiFormSeries(self.ring, w, self.index, rl,
                                weak=self.weak or other.weak)

    def __sub__(self, other):
        n = self._check(other)
        w = self.weight if self.weight == other.weight else None
        rl = [rows.sub(self.ring, self.rows[i], other.rows[i]) for i in range(n + 1)]
        return JacobiFormSeries(self.ring, w, self.index, rl,
                                weak=self.weak or other.weak)

    def scale(self, c):
        c = self.ring.from_int(c) if isinstance(c, int) else c
        rl = [rows.scale(self.ring, r, c) for r in self.rows]
        return JacobiFormSeries(self.ring, self.weight, self.index, rl, weak=self.weak)

    def __neg__(self):
        rl = [rows.neg(self.ring, r) for r in self.rows]
        return JacobiFormSeries(self.ring, self.weight, self.index, rl, weak=self.weak)

    def __mul__(self, other):
        if isinstance(other, JacobiFormSeries):
            return jac_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    # -- specializations --------------------------------------------------------
    def z_restrict(self):
        """The weight-k modular form phi(tau, 0): row sums as a QSeries."""
        ring = self.ring
        vals = []
        for row in self.rows:
            if isinstance(ring, FpRing) and ring.fits64:
                vals.append(int(row.sum()) % ring.p)
            else:
                acc = ring.zero
                for v in row:
                    acc = ring.add(acc, v)
                vals.append(acc)
        if isinstance(ring, FpRing):
            return QSeries.from_ints(ring, vals, weight=self.weight)
        return QSeries(ring, vals, weight=self.weight)

    def reduce_mod(self, p):
        fp = ring_from_tag(f"fp:{p}")
        rl = [rows.reduce_row(self.ring, r, fp) for r in self.rows]
        return JacobiFormSeries(fp, self.weight, self.index, rl, weak=self.weak)

    def to_json(self):
        coeffs = []
        for n in range(self.prec + 1):
            for r in range(self.rb(n) + 1):
                v = self.c(n, r)
                if not self.ring.is_zero(v if not isinstance(self.ring, FpRing) else v):
                    coeffs.append([n, r, self.ring.to_token(v)])
        return {"kind": "jacobi", "ring": self.ring.tag, "weight": self.weight,
                "index": self.index, "prec": self.prec, "coeffs": coeffs}

    # -- structural checks (used heavily by the tests) ---------------------------
    def check_symmetry(self):
        for n in range(self.prec + 1):
            for r in range(1, self.rb(n) + 1):
                if not self.ring.is_zero(self.ring.sub(self.c(n, r), self.c(n, -r))):
                    return False
        return True

    def check_transformation_law(self):
        """c(n, r) == c(n + r + m, r + 2m) wherever both keys are stored."""
        m = self.index
        for n in range(self.prec + 1):
            for r in range(-self.rb(n), self.rb(n) + 1):
                n2, r2 = n + r + m, r + 2 * m
                if 0 <= n2 <= self.prec and abs(r2) <= self.rb(n2):
                    if not self.ring.is_zero(self.ring.sub(self.c(n, r), self.c(n2, r2))):
                        return False
        return True

    def check_holomorphic_support(self):
        m = self.index
        for n in range(self.prec + 1):
            for r in range(isqrt(4 * n * m) + 1, self.rb(n) + 1):
                if 4 * n * m - r * r < 0:
                    if not (self.ring.is_zero(self.c(n, r))
                            and self.ring.is_zero(self.c(n, -r))):
                        return False
        return True


def _combine(a, b, coef_b, weight):
    """a + coef_b * b with an explicit result weight (mod-p cross-weight sums)."""
    n = a._check(b)
    ring = a.ring
    cb = ring.from_int(coef_b) if isinstance(coef_b, int) else coef_b
    rl = [rows.add(ring, a.rows[i], rows.scale(ring, b.rows[i], cb)) for i in range(n + 1)]
    return JacobiFormSeries(ring, weight, a.index, rl, weak=a.weak or b.weak)


# -- products ---------------------------------------------------------------------

def jac_mul(a, b):
    """Two-variable Cauchy product; weights and indices add, precision is min."""
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring.tag} vs {b.ring.tag}")
    ring = a.ring
    prec = min(a.prec, b.prec)
    m = a.index + b.index
    w = a.weight + b.weight if a.weight is not None and b.weight is not None else None
    out = []
    for n in range(prec + 1):
        bo = rbound(m, n)
        acc = rows.zeros(ring, 2 * bo + 1)
        for n1 in range(n + 1):
            r1, r2 = a.rows[n1], b.rows[n - n1]
            conv = rows.convolve(ring, r1, r2)
            # centered alignment: conv center = rb_a(n1) + rb_b(n-n1) <= bo
            off = bo - (a.rb(n1) + b.rb(n - n1))
            rows.add_into(ring, acc, off, conv)
        out.append(rows.normalize(ring, acc))
    return JacobiFormSeries(ring, w, m, out, weak=a.weak or b.weak)


def qseries_times_jacobi(f, phi):
    """Multiply a one-variable series into a Jacobi form (q-direction only)."""
    if f.ring != phi.ring:
        raise RingMismatchError(f"{f.ring.tag} vs {phi.ring.tag}")
    ring = phi.ring
    prec = min(f.prec, phi.prec)
    w = None
    if f.weight is not None and phi.weight is not None:
        w = f.weight + phi.weight
    if isinstance(ring, FpRing) and ring.fits64:
        # column-major: each zeta-power is one q-convolution
        big = rbound(phi.index, prec)
        dense = np.zeros((prec + 1, 2 * big + 1), dtype=np.int64)
        for n in range(prec + 1):
            b = phi.rb(n)
            dense[n, big - b:big + b + 1] = phi.rows[n][:2 * b + 1]
        fv = f.coeffs[:prec + 1]
        for c in range(2 * big + 1):
            col = dense[:, c]
            if not np.any(col):
                continue
            dense[:, c] = np.convolve(fv, col)[:prec + 1] % ring.p
        out = [dense[n, big - phi.rb(n):big + phi.rb(n) + 1].copy()
               for n in range(prec + 1)]
        return JacobiFormSeries(ring, w, phi.index, out, weak=phi.weak)
    out = [rows.zeros(ring, 2 * phi.rb(n) + 1) for n in range(prec + 1)]
    for j in range(prec + 1):
        fj = f.coeffs[j]
        if ring.is_zero(int(fj) if isinstance(ring, FpRing) else fj):
            continue
        for n in range(j, prec + 1):
            src = rows.scale(ring, phi.rows[n - j], fj if not isinstance(ring, FpRing) else int(fj))
            off = phi.rb(n) - phi.rb(n - j)
            rows.add_into(ring, out[n], off, src)
    out = [rows.normalize(ring, r) for r in out]
    return JacobiFormSeries(ring, w, phi.index, out, weak=phi.weak)


def heat(phi):
    """Apply the index-m heat operator: c(n, r) -> (4nm - r^2) c(n, r).

    Over a prime field the weight annotation increases by p + 1 (the mod-p
    weight of the image); over exact rings the annotation is left unchanged.
    """
    ring = phi.ring
    m = phi.index
    out = []
    for n in range(phi.prec + 1):
        b = phi.rb(n)
        if isinstance(ring, FpRing) and ring.fits64:
            mult = np.array([(4 * n * m - r * r) % ring.p for r in range(-b, b + 1)],
                            dtype=np.int64)
            out.append(phi.rows[n] * mult % ring.p)
        else:
            row = [ring.mul(v, ring.from_int(4 * n * m - r * r))
                   for r, v in zip(range(-b, b + 1), phi.rows[n])]
            out.append(row)
    w = phi.weight
    if w is not None and isinstance(ring, FpRing):
        w = w + ring.p + 1
    return JacobiFormSeries(ring, w, m, out, weak=phi.weak)


def heat_iterate(phi, times):
    for _ in range(times):
        phi = heat(phi)
    return phi


# -- weak index-1 generators -----------------------------------------------------
#
# Both generators come from theta quotients.  All intermediate work is done
# column-major (per zeta-power q-series), because every division involved is
# by a pure q-series.

def _theta_pair_columns(prec, sign, ring):
    """Columns of (sum_j s^j q^{j(j+1)/2} zeta^j)^2 with s = -1 or +1."""
    terms = []
    j = 0
    while j * (j + 1) // 2 <= prec:
        t = j * (j + 1) // 2
        # j and -j-1 share the same triangular exponent
        terms.append((t, j, sign ** (j % 2)))
        terms.append((t, -j - 1, sign ** ((j + 1) % 2)))
        j += 1
    cols = {}
    for q1, r1, s1 in terms:
        for q2, r2, s2 in terms:
            q = q1 + q2
            if q > prec:
                continue
            col = cols.setdefault(r1 + r2, rows.zeros(ring, prec + 1))
            col[q] = ring.add(col[q] if not isinstance(ring, FpRing) else int(col[q]),
                              ring.from_int(s1 * s2))
    return cols


def _theta3_sq_columns(qprec, ring):
    """Columns of (sum_j Q^{j^2} zeta^j)^2 in the half-integral variable Q."""
    terms = [(0, 0)]
    j = 1
    while j * j <= qprec:
        terms.append((j * j, j))
        terms.append((j * j, -j))
        j += 1
    cols = {}
    for q1, r1 in terms:
        for q2, r2 in terms:
            q = q1 + q2
            if q > qprec:
                continue
            col = cols.setdefault(r1 + r2, rows.zeros(ring, qprec + 1))
            col[q] = ring.add(col[q] if not isinstance(ring, FpRing) else int(col[q]),
                              ring.one)
    return cols


def _columns_to_form(ring, cols, prec, weight, index):
    """Materialize columns into row storage, checking the weak support bound."""
    rl = []
    for n in range(prec + 1):
        b = rbound(index, n)
        row = rows.zeros(ring, 2 * b + 1)
        rl.append(row)
    for r, col in cols.items():
        for n in range(prec + 1):
            v = col[n]
            vz = ring.is_zero(int(v) if isinstance(ring, FpRing) else v)
            b = rbound(index, n)
            if abs(r) > b:
                if not vz:
                    raise ArithmeticDomainError(
                        f"coefficient at (n={n}, r={r}) violates the weak support bound")
                continue
            rl[n][b + r] = v
    return JacobiFormSeries(ring, weight, index, rl, weak=True)


def _col_convolve(ring, cols, series_row, prec):
    return {r: rows.convolve_trunc(ring, col, series_row, prec + 1)
            for r, col in cols.items()}


def _weak_generators_impl(prec, ring):
    # weight -2: zeta * theta_red^2 / eta^6  (fractional powers cancel)
    th2 = _theta_pair_columns(prec, -1, ring)
    eta6_inv = eta_pow6(prec, ring).inverse().coeffs
    cols_m2 = _col_convolve(ring, th2, eta6_inv, prec)
    cols_m2 = {r + 1: col for r, col in cols_m2.items()}
    w_m2 = _columns_to_form(ring, cols_m2, prec, -2, 1)

    # weight 0, piece 1: zeta * S2 / S2(q, 1) from the even theta pair
    s2 = _theta_pair_columns(prec, +1, ring)
    s2_at_1 = rows.zeros(ring, prec + 1)
    for col in s2.values():
        rows.add_into(ring, s2_at_1, 0, col)
    s2_at_1 = rows.normalize(ring, s2_at_1)
    inv_s2 = rows.invert_series(ring, s2_at_1, prec + 1)
    a2 = _col_convolve(ring, s2, inv_s2, prec)
    a2 = {r + 1: col for r, col in a2.items()}

    # weight 0, pieces 2+3 combined: 2(Ee - Oo)/(e^2 - o^2) over Q = q^{1/2};
    # even zeta-powers live on even Q-powers, odd on odd, so everything
    # reindexes to integral q.
    qprec = 2 * prec + 1
    t3 = _theta3_sq_columns(qprec, ring)
    t3_at_1 = rows.zeros(ring, qprec + 1)
    for col in t3.values():
        rows.add_into(ring, t3_at_1, 0, col)
    t3_at_1 = rows.normalize(ring, t3_at_1)
    half = rows.aslist(ring, t3_at_1)
    e_q = _pack_row(ring, [half[2 * t] for t in range(prec + 1)])
    o_q = _pack_row(ring, [half[2 * t + 1] for t in range(prec + 1)])
    ee = rows.convolve_trunc(ring, e_q, e_q, prec + 1)
    oo = rows.convolve_trunc(ring, o_q, o_q, prec + 1)
    denom = rows.sub(ring, ee, _shift_row(ring, oo, 1, prec + 1))
    inv_denom = rows.invert_series(ring, denom, prec + 1)
    a34 = {}
    for r, col in t3.items():
        par = r % 2
        vals = rows.aslist(ring, col)
        for t, v in enumerate(vals):
            # odd zeta-powers must sit on odd Q-powers, even on even
            if (t - par) % 2 and not ring.is_zero(v):
                raise ArithmeticDomainError("theta square breaks the parity coupling")
        folded = _pack_row(ring, [vals[2 * t + par] for t in range((qprec - par) // 2 + 1)])
        base = e_q if par == 0 else o_q
        num = rows.convolve_trunc(ring, folded, base, prec + 1)
        if par == 1:
            num = rows.neg(ring, _shift_row(ring, num, 1, prec + 1))
        num = rows.scale(ring, num, ring.from_int(2))
        a34[r] = rows.convolve_trunc(ring, num, inv_denom, prec + 1)

    cols0 = {}
    for src in (a2, a34):
        for r, col in src.items():
            if r in cols0:
                cols0[r] = rows.add(ring, cols0[r], col)
            else:
                cols0[r] = rows.copy(ring, col)
    cols0 = {r: rows.scale(ring, col, ring.from_int(4)) for r, col in cols0.items()}
    w_0 = _columns_to_form(ring, cols0, prec, 0, 1)
    return w_m2, w_0


def _shift_row(ring, row, k, n):
    out = rows.zeros(ring, n)
    src = row[:max(0, n - k)]
    rows.add_into(ring, out, k, src)
    return rows.normalize(ring, out)


def _pack_row(ring, vals):
    if isinstance(ring, FpRing) and ring.fits64:
        return np.array([int(v) % ring.p for v in vals], dtype=np.int64)
    return list(vals)


_weak_cache = {}


def weak_generators(prec, ring):
    """The weak index-1 generators of weights -2 and 0.

    q^0 rows are (zeta - 2 + zeta^{-1}) and (zeta + 10 + zeta^{-1}); all
    coefficients are integral.  Exact rings are computed through exact
    rationals and cast, which verifies integrality on the fly.
    """
    key = (ring.tag, prec)
    hit = _weak_cache.get(key)
    if hit is not None:
        return hit
    # reuse a longer cached expansion when one exists
    for (tag, p2), val in _weak_cache.items():
        if tag == ring.tag and p2 > prec:
            out = (val[0].truncate(prec), val[1].truncate(prec))
            _weak_cache[key] = out
            return out
    if isinstance(ring, (IntRing,)):
        a, b = weak_generators(prec, ring_from_tag("rat"))
        out = (_cast_form(a, ring), _cast_form(b, ring))
    else:
        out = _weak_generators_impl(prec, ring)
    _weak_cache[key] = out
    return out


def _cast_form(phi, ring):
    rl = []
    for row in phi.rows:
        rl.append([ring.from_rational(Fraction(v)) for v in row])
    return JacobiFormSeries(ring, phi.weight, phi.index, rl, weak=phi.weak)


def _scale_divexact(phi, d):
    ring = phi.ring
    dd = ring.from_int(d)
    rl = []
    for row in phi.rows:
        vals = rows.aslist(ring, row)
        rl.append([ring.divexact(v, dd) for v in vals])
    if isinstance(ring, FpRing):
        rl = [rows.from_ints(ring, r) for r in rl]
    return JacobiFormSeries(ring, phi.weight, phi.index, rl, weak=phi.weak)


def jacobi_eisenstein(k, prec, ring):
    """Holomorphic index-1 Eisenstein series of weight 4 or 6, c(0,0) = 1."""
    if k not in (4, 6):
        raise InvalidArgumentError(f"jacobi_eisenstein supports k in (4, 6), got {k}")
    w_m2, w_0 = weak_generators(prec, ring)
    e4 = eisenstein_q(4, prec, ring)
    e6 = eisenstein_q(6, prec, ring)
    if k == 4:
        num = qseries_times_jacobi(e4, w_0) - qseries_times_jacobi(e6, w_m2)
    else:
        num = qseries_times_jacobi(e6, w_0) - qseries_times_jacobi(e4 * e4, w_m2)
    out = _scale_divexact(num, 12)
    out.weight = k
    out.weak = False
    return out


def jacobi_cusp(k, prec, ring):
    """The index-1 cusp generators Delta*phi_{-2,1} (k=10), Delta*phi_{0,1} (k=12)."""
    if k not in (10, 12):
        raise InvalidArgumentError(f"jacobi_cusp supports k in (10, 12), got {k}")
    w_m2, w_0 = weak_generators(prec, ring)
    d = delta_q(prec, ring)
    out = qseries_times_jacobi(d, w_m2 if k == 10 else w_0)
    out.weight = k
    out.weak = False
    return out


# -- decomposition over the weak generators ----------------------------------------

def _divide_by_weak_m2(psi, w_m2):
    """Exact division by the weight -2 generator; index drops by one.

    Row-by-row synthetic division by the leading row zeta - 2 + zeta^{-1} =
    zeta^{-1} (zeta - 1)^2; any residual means the input was not divisible.
    """
    ring = psi.ring
    mu = psi.index
    if mu < 1:
        raise DecompositionError("cannot divide an index-0 form by the weak generator")
    prec = min(psi.prec, w_m2.prec)
    out = JacobiFormSeries.zero(ring, None if psi.weight is None else psi.weight + 2,
                                mu - 1, prec, weak=True)
    for n in range(prec + 1):
        bt = psi.rb(n)
        t = rows.copy(ring, psi.rows[n])
        for i in range(1, n + 1):
            conv = rows.convolve(ring, w_m2.rows[i], out.rows[n - i])
            off = bt - (w_m2.rb(i) + rbound(mu - 1, n - i))
            neg = rows.neg(ring, conv)
            rows.add_into(ring, t, off, neg)
        t = rows.normalize(ring, t)
        # t spans r in [-bt, bt]; quotient row spans [-bt+1, bt-1] before clipping
        u = _div_by_sq(ring, t)
        bo = out.rb(n)
        row = rows.zeros(ring, 2 * bo + 1)
        for idx, v in enumerate(rows.aslist(ring, u)):
            r = idx - (bt - 1)
            if ring.is_zero(v):
                continue
            if abs(r) > bo:
                raise DecompositionError(
                    f"row q^{n}: quotient support |r|={abs(r)} exceeds index-{mu-1} bound")
            row[bo + r] = v
        out.rows[n] = rows.normalize(ring, row)
    return out


def _div_by_sq(ring, t):
    """Divide the centered Laurent row t by [1, -2, 1]; error on any remainder."""
    lt = len(t)
    if lt < 3:
        if rows.is_zero(ring, t):
            return rows.zeros(ring, 1)
        raise DecompositionError("row too short to be divisible")
    vals = rows.aslist(ring, t)
    u = [ring.zero] * (lt - 2)
    prev2 = prev = ring.zero
    for i in range(lt - 2):
        v = ring.add(vals[i], ring.sub(ring.mul(ring.from_int(2), prev), prev2))
        u[i] = v
        prev2, prev = prev, v
    # t[lt-2] = -2 u[lt-3] + u[lt-4] and t[lt-1] = u[lt-3] must close exactly
    um1 = u[lt - 3] if lt >= 3 else ring.zero
    um2 = u[lt - 4] if lt >= 4 else ring.zero
    chk1 = ring.sub(vals[lt - 2], ring.sub(um2, ring.mul(ring.from_int(2), um1)))
    chk2 = ring.sub(vals[lt - 1], um1)
    if not (ring.is_zero(chk1) and ring.is_zero(chk2)):
        raise DecompositionError("division by the weak generator left a residual")
    if isinstance(ring, FpRing):
        return rows.from_ints(ring, [v % ring.p for v in u])
    return u


def weak_decompose(phi, gens=None):
    """Components f_0..f_m with phi = sum f_j w{-2}^j w{0}^{m-j}.

    Uses the z = 0 specialization (the weight -2 generator vanishes there and
    the weight 0 one restricts to the constant 12) followed by exact division,
    so each step strips one power of the weight 0 generator.  Integer input is
    promoted to exact rationals; components of an integral form in the span
    need not be integral, but are always p-integral alongside phi.
    """
    if isinstance(phi.ring, IntRing):
        phi = _cast_form_rat(phi)
    ring = phi.ring
    if not isinstance(ring, (RatRing, FpRing)):
        raise InvalidArgumentError("weak_decompose needs a field-like ring (rat or fp)")
    m = phi.index
    if phi.weight is None:
        raise InvalidArgumentError("weak_decompose needs a weight annotation")
    if m == 0:
        f = _index0_to_qseries(phi)
        return [f]
    if gens is None:
        gens = weak_generators(phi.prec, ring)
    w_m2, w_0 = gens
    if w_m2.prec < phi.prec:
        raise PrecisionError("generator precision below form precision",
                             required=phi.prec, available=w_m2.prec)
    pow0 = [JacobiFormSeries.zero(ring, 0, 0, phi.prec)]
    pow0[0].rows[0][0] = ring.one
    for _ in range(m):
        pow0.append(jac_mul(pow0[-1], w_0.truncate(phi.prec)))
    fs = []
    cur = phi
    inv12 = ring.inv(ring.from_int(12))
    for mu in range(m, 0, -1):
        f = cur.z_restrict()
        f = f.scale(ring.pow(inv12, mu))
        f.weight = cur.weight
        fs.append(f)
        rem = cur - qseries_times_jacobi(f, pow0[mu])
        rem.weight = cur.weight
        cur = _divide_by_weak_m2(rem, w_m2.truncate(phi.prec))
    fs.append(_index0_to_qseries(cur))
    return fs


def _cast_form_rat(phi):
    rat = ring_from_tag("rat")
    rl = [[Fraction(v) for v in row] for row in phi.rows]
    return JacobiFormSeries(rat, phi.weight, phi.index, rl, weak=phi.weak)


def _index0_to_qseries(phi):
    ring = phi.ring
    vals = []
    for n in range(phi.prec + 1):
        row = rows.aslist(ring, phi.rows[n])
        mid = phi.rb(n)
        for idx, v in enumerate(row):
            if idx != mid and not ring.is_zero(v):
                raise DecompositionError("index-0 residue carries zeta-dependence; "
                                         "input not in the weak span")
        vals.append(row[mid])
    if isinstance(ring, FpRing):
        return QSeries.from_ints(ring, vals, weight=phi.weight)
    return QSeries(ring, vals, weight=phi.weight)


def reconstruct_weak(fs, index, gens):
    """Inverse of weak_decompose: sum f_j w{-2}^j w{0}^{m-j}."""
    w_m2, w_0 = gens
    prec = min(min(f.prec for f in fs), w_m2.prec)
    ring = w_m2.ring
    acc = None
    for j, f in enumerate(fs):
        mono = _weak_monomial(gens, j, index - j, prec)
        term = qseries_times_jacobi(f.truncate(prec), mono)
        acc = term if acc is None else _combine(acc, term, 1, None)
    return acc


_mono_cache = {}


def _weak_monomial(gens, j, i, prec):
    w_m2, w_0 = gens
    key = (w_m2.ring.tag, prec, j, i)
    hit = _mono_cache.get(key)
    if hit is not None:
        return hit
    if j == 0 and i == 0:
        out = JacobiFormSeries.zero(w_m2.ring, 0, 0, prec)
        out.rows[0][0] = w_m2.ring.one
    elif j > 0:
        out = jac_mul(_weak_monomial(gens, j - 1, i, prec), w_m2.truncate(prec))
    else:
        out = jac_mul(_weak_monomial(gens, j, i - 1, prec), w_0.truncate(prec))
    _mono_cache[key] = out
    return out


# -- finite zero test and congruence criteria ---------------------------------------

def zero_test_required_prec(weight, index):
    """Stored rows needed for the finite zero test at the given weight/index."""
    return (weight + 2 * index) // 12 + index + 1


def jac_zero_test(phi, gens=None):
    """True iff phi == 0 mod p, for phi in the weak span at its annotated weight.

    Decomposes over the weak generators and runs the level-1 Sturm test on
    every component at its own weight; components at weights with no forms
    must vanish identically on the window.
    """
    if not isinstance(phi.ring, FpRing):
        raise InvalidArgumentError("jac_zero_test needs a prime-field form")
    k, m = phi.weight, phi.index
    need = zero_test_required_prec(k, m)
    if phi.prec < need:
        raise PrecisionError(f"zero test at weight {k}, index {m} needs precision {need}",
                             required=need, available=phi.prec)
    fs = weak_decompose(phi, gens=gens)
    for j, f in enumerate(fs):
        w = k + 2 * j
        if w >= 4 or w == 0:
            if not elliptic_sturm_zero(f, w):
                return False
        elif not f.is_zero():
            return False
    return True


@dataclass
class JacobiCongruence:
    """Outcome of the heat-operator congruence criterion for one (p, b)."""
    p: int
    b: int
    holds: bool
    witness: tuple | None
    criterion_weight: int
    method: str

    def to_json(self):
        return {"p": self.p, "b": self.b,
                "verdict": "holds" if self.holds else "fails",
                "witness": list(self.witness) if self.witness else None,
                "criterion_weight": self.criterion_weight, "method": self.method}


def jac_congruence(phi, b, gens=None):
    """Decide the Ramanujan-type congruence of phi at b mod p.

    For b not divisible by p this tests the (p+1)/2-fold heat iterate against
    the Legendre-signed single iterate; for b == 0 it compares the (p-1)-fold
    iterate with phi itself.
    """
    if not isinstance(phi.ring, FpRing):
        raise InvalidArgumentError("jac_congruence needs a prime-field form")
    p = phi.ring.p
    k, m = phi.weight, phi.index
    b %= p
    if b:
        kz = k + (p + 1) * (p + 1) // 2
        method = "heat-criterion"
    else:
        kz = k + p * p - 1
        method = "heat-cycle-closure"
    need = zero_test_required_prec(kz, m)
    if phi.prec < need:
        raise PrecisionError(f"congruence test needs precision {need}",
                             required=need, available=phi.prec)
    if b:
        l1 = heat(phi)
        lh = heat_iterate(l1, (p + 1) // 2 - 1)
        combo = _combine(lh, l1, legendre(b, p), kz)
    else:
        lp = heat_iterate(phi, p - 1)
        combo = _combine(lp, phi, p - 1, kz)  # lp - phi
    holds = jac_zero_test(combo, gens=gens)
    witness = None
    if not holds:
        _, witness = jac_direct_scan(phi, p, b)
    return JacobiCongruence(p=p, b=b, holds=holds, witness=witness,
                            criterion_weight=kz, method=method)


def jac_direct_scan(phi, p, b):
    """Necessary-condition scan of the stored window.

    Returns (clean, witness): witness is the first stored (n, r) with
    discriminant congruent to b and a nonvanishing coefficient mod p.
    """
    m = phi.index
    b %= p
    for n in range(phi.prec + 1):
        for r in range(phi.rb(n) + 1):
            if (4 * n * m - r * r) % p != b:
                continue
            v = phi.c(n, r)
            vv = v % p if isinstance(phi.ring, FpRing) else phi.ring.reduce(v, p)
            if vv:
                return False, (n, r)
    return True, None


def nonexistence_applies(k, m, p, b, phi, gens=None):
    """Hypotheses of the non-existence criterion: k >= 4, b != 0, p > k, p ∤ m,
    and the heat image of phi is nonzero mod p.  When true, jac_congruence
    must report a failure."""
    if k < 4 or b % p == 0 or p <= k or m % p == 0:
        return False
    return not jac_zero_test(heat(phi), gens=gens)


# -- holomorphic bases, filtrations, heat cycles --------------------------------------

_holo_cache = {}


def _holo_keys(index, prec):
    return [(n, r) for n in range(prec + 1) for r in range(rbound(index, n) + 1)]


def _form_vector(phi, prec):
    out = []
    for n in range(prec + 1):
        for r in range(rbound(phi.index, n) + 1):
            out.append(phi.c(n, r))
    return out


def holo_basis(k, m, prec, p):
    """Echelonized mod-p basis of the holomorphic weight-k, index-m space.

    Assembles all weak combinations with components in the weight-(k+2j)
    monomial bases and imposes the finitely many vanishing conditions at
    negative discriminants; the surviving combinations are row reduced over
    the stored coefficient window.
    """
    key = (k, m, prec, p)
    hit = _holo_cache.get(key)
    if hit is not None:
        return hit
    ring = ring_from_tag(f"fp:{p}")
    gens = weak_generators(prec, ring)
    cands = []
    for j in range(m + 1):
        w = k + 2 * j
        if w < 0 or w == 2 or w % 2:
            continue
        basis = mk_basis(w, prec, ring)
        if not basis:
            continue
        mono = _weak_monomial(gens, j, m - j, prec)
        for f in basis:
            cands.append(qseries_times_jacobi(f, mono))
    if not cands:
        _holo_cache[key] = []
        return []
    neg_keys = [(n, r) for n in range(prec + 1)
                for r in range(isqrt(4 * n * m) + 1, rbound(m, n) + 1)
                if 4 * n * m - r * r < 0]
    vecs = []
    if neg_keys:
        mat = FpMatrix(p, [[c.c(n, r) for c in cands] for (n, r) in neg_keys])
        combos = kernel_basis(mat)
    else:
        combos = [[1 if i == j else 0 for i in range(len(cands))] for j in range(len(cands))]
    if not combos:
        _holo_cache[key] = []
        return []
    keys = _holo_keys(m, prec)
    rowsmat = []
    for combo in combos:
        acc = None
        for x, cand in zip(combo, cands):
            if x % p == 0:
                continue
            term = cand.scale(x)
            acc = term if acc is None else _combine(acc, term, 1, k)
        rowsmat.append(_form_vector(acc, prec))
    red, rank, _ = rref(FpMatrix(p, rowsmat))
    out = []
    for vec in red.tolist()[:rank]:
        out.append(_form_from_vector(ring, k, m, prec, keys, vec))
    _holo_cache[key] = out
    return out


def _form_from_vector(ring, k, m, prec, keys, vec):
    phi = JacobiFormSeries.zero(ring, k, m, prec, weak=False)
    for (n, r), v in zip(keys, vec):
        b = rbound(m, n)
        phi.rows[n][b + r] = v % ring.p
        phi.rows[n][b - r] = v % ring.p
    return phi


def filtration(phi):
    """The mod-p filtration: least k' = k mod (p-1), 0 <= k' <= k, whose
    holomorphic space contains phi mod p.  Returns -inf for the zero form.

    Membership is decided on a window widened beyond the candidate-space
    dimension to guard against truncation false-positives.
    """
    if not isinstance(phi.ring, FpRing):
        raise InvalidArgumentError("filtration needs a prime-field form")
    p = phi.ring.p
    if phi.is_zero_window():
        return NEG_INF
    k, m = phi.weight, phi.index
    base = k % (p - 1)
    cands = list(range(base, k + 1, p - 1))
    if not cands:
        cands = [k]
    for kp in cands:
        udim = sum(mk_dim(kp + 2 * j, p) for j in range(m + 1)
                   if kp + 2 * j >= 0 and (kp + 2 * j) % 2 == 0)
        if udim == 0:
            continue
        win = udim + m + 1 + 5
        if phi.prec < win:
            raise PrecisionError(f"filtration at candidate weight {kp} needs precision {win}",
                                 required=win, available=phi.prec)
        basis = holo_basis(kp, m, win, p)
        if not basis:
            continue
        vec = _form_vector(phi, win)
        if membership(vec, [_form_vector(f, win) for f in basis], p):
            return kp
    raise InvalidArgumentError(
        f"form is not in the holomorphic mod-{p} span at any weight <= {k}")


def filtration_required_prec(k, m, p):
    """Precision sufficient for every filtration call on weights <= k."""
    best = 0
    for kp in range(k % (p - 1), k + 1, p - 1):
        udim = sum(mk_dim(kp + 2 * j, p) for j in range(m + 1)
                   if kp + 2 * j >= 0 and (kp + 2 * j) % 2 == 0)
        best = max(best, udim + m + 1 + 5)
    return best


@dataclass
class HeatCycleReport:
    """Filtration walk of the p-1 heat iterates of a form."""
    p: int
    weight: int
    index: int
    status: str                      # "ok" | "degenerate" | "theory-silent"
    filtrations: list = field(default_factory=list)   # Omega(L^i phi), i = 1..p-1
    high_points: list = field(default_factory=list)   # iterate indices i
    low_points: list = field(default_factory=list)
    falls: dict = field(default_factory=dict)         # i -> fall size s

    def to_json(self):
        return {"p": self.p, "weight": self.weight, "index": self.index,
                "status": self.status, "filtrations": self.filtrations,
                "high_points": self.high_points, "low_points": self.low_points,
                "falls": {str(k): v for k, v in self.falls.items()}}


def heat_cycle_required_prec(k, m, p):
    need = zero_test_required_prec(k + p + 1, m)
    for i in range(1, p):
        need = max(need, filtration_required_prec(k + i * (p + 1), m, p))
    return need


def heat_cycle(phi, gens=None):
    """Filtrations, high points, low points and fall sizes of the heat cycle.

    Refuses to interpret the cycle when p divides the index (the filtration
    step law degenerates there): the report is returned with status
    "theory-silent".  A vanishing heat image yields status "degenerate".
    """
    if not isinstance(phi.ring, FpRing):
        raise InvalidArgumentError("heat_cycle needs a prime-field form")
    p = phi.ring.p
    k, m = phi.weight, phi.index
    rep = HeatCycleReport(p=p, weight=k, index=m, status="ok")
    if m % p == 0:
        rep.status = "theory-silent"
        return rep
    it = heat(phi)
    if jac_zero_test(it, gens=gens):
        rep.status = "degenerate"
        return rep
    oms = []
    cur = it
    for i in range(1, p):
        oms.append(filtration(cur))
        if i < p - 1:
            cur = heat(cur)
    rep.filtrations = oms
    half = (p + 1) // 2 % p
    for i in range(1, p):
        om = oms[i - 1]
        if om % p == half:
            rep.high_points.append(i)
            nxt = oms[i] if i < p - 1 else oms[0]    # L^p phi == L phi
            s, rem = divmod(om + p + 1 - nxt, p - 1)
            if rem:
                raise InvalidArgumentError(
                    f"heat-cycle step at i={i} violates the fall law: "
                    f"{om} -> {nxt} (mod p={p})")
            rep.falls[i] = s
            rep.low_points.append(i + 1 if i < p - 1 else 1)
    return rep
