import random
from math import isqrt

import pytest

from siegelcong.errors import (InvalidArgumentError, NotInRingError,
                               PrecisionError)
from siegelcong.jacobi import heat, jacobi_cusp, jacobi_eisenstein
from siegelcong.qexp import eisenstein_q
from siegelcong.ring import legendre, ring_from_tag
from siegelcong.siegel import (CongruenceCertificate, GeneratorContext,
                               MatrixIndexT, SiegelFormSeries,
                               congruence_scan, decompose_mod_p, dyadic_trace,
                               enumerate_reduced, fourier_jacobi,
                               igusa_generators, maass_lift, reduce_T,
                               siegel_congruence, siegel_direct_scan,
                               siegel_mul, sturm_zero, targeted_mul,
                               theta_operator, verify_combination,
                               weight_monomials)

INT = ring_from_tag("int")
FP5 = ring_from_tag("fp:5")
FP7 = ring_from_tag("fp:7")


# -- reduction: brute-force oracle over small unimodular transforms -----------------

def _orbit_reduced(n, r, m, cap=400):
    """Minimal reduced representative found by BFS over the basic moves."""
    seen = {(n, r, m)}
    frontier = [(n, r, m)]
    best = None
    while frontier and len(seen) < cap:
        nxt = []
        for (a, b, c) in frontier:
            cands = [(c, b, a), (a, -b, c),
                     (a, b + 2 * a, c + b + a), (a, b - 2 * a, c - b + a)]
            for t in cands:
                if t in seen or min(t[0], t[2]) < 0 or abs(t[1]) > 4 * max(t[0], t[2], 1):
                    continue
                seen.add(t)
                nxt.append(t)
        frontier = nxt
    for (a, b, c) in seen:
        if a == 0 and b == 0 or (0 <= b <= a <= c):
            key = (a, abs(b), c) if a else (0, 0, c)
            if best is None or key < best:
                best = key
    return best


@pytest.mark.parametrize("raw,expect", [
    ((1, 2, 1), (0, 0, 1)),
    ((1, 1, 1), (1, 1, 1)),
    ((1, -1, 1), (1, 1, 1)),
])
def test_reduce_examples(raw, expect):
    assert reduce_T(raw).key() == expect


def test_reduce_matches_bruteforce_orbit():
    for n in range(5):
        for m in range(5):
            top = isqrt(4 * n * m)
            for r in range(-top, top + 1):
                got = reduce_T((n, r, m))
                assert got.det == 4 * n * m - r * r
                assert got.is_reduced
                assert got.key() == _orbit_reduced(n, r, m)


def test_reduce_rejects_indefinite():
    with pytest.raises(InvalidArgumentError):
        reduce_T((1, 3, 1))


def test_dyadic_trace():
    assert dyadic_trace(MatrixIndexT(1, 1, 1)) == 3
    assert dyadic_trace(MatrixIndexT(1, 0, 1)) == 4
    assert dyadic_trace(MatrixIndexT(2, 2, 3)) == 8
    assert dyadic_trace(MatrixIndexT(0, 0, 3)) == 6
    assert dyadic_trace(MatrixIndexT(0, 0, 0)) == 0
    with pytest.raises(InvalidArgumentError):
        dyadic_trace(MatrixIndexT(2, 1, 1))


def _enumerate_oracle(wmax):
    found = set()
    box = wmax + 2
    for n in range(box):
        for m in range(box):
            for r in range(-2 * box, 2 * box + 1):
                if 4 * n * m - r * r < 0:
                    continue
                t = reduce_T((n, r, m))
                if dyadic_trace(t) <= wmax:
                    found.add(t.key())
    return sorted(found)


@pytest.mark.parametrize("wmax,expect", [
    (0, [(0, 0, 0)]),
    (3, [(0, 0, 0), (0, 0, 1), (1, 1, 1)]),
    (4, [(0, 0, 0), (0, 0, 1), (0, 0, 2), (1, 0, 1), (1, 1, 1)]),
])
def test_enumerate_reduced_small(wmax, expect):
    assert sorted(t.key() for t in enumerate_reduced(wmax)) == expect


def test_enumerate_reduced_vs_oracle():
    for wmax in (5, 6, 8):
        assert sorted(t.key() for t in enumerate_reduced(wmax)) == _enumerate_oracle(wmax)


# -- the Maass lift ------------------------------------------------------------------

def test_maass_lift_formula():
    phi = jacobi_cusp(10, 16, INT)
    F = maass_lift(phi, 4)
    assert F.a(1, 1, 1) == phi.c(1, 1)
    assert F.a(2, 0, 2) == phi.c(4, 0) + 2 ** 9 * phi.c(1, 0)
    assert F.a(1, 0, 1) == -2
    assert F.a(0, 0, 0) == 0


def test_maass_lift_needs_precision():
    with pytest.raises(PrecisionError):
        maass_lift(jacobi_cusp(10, 8, INT), 4)


def test_igusa_generators(int_gens):
    E4, E6 = int_gens["E4"], int_gens["E6"]
    c10, c12 = int_gens["chi10"], int_gens["chi12"]
    assert E4.a(0, 0, 0) == 1 and E4.a(1, 0, 0) == 240
    assert E4.a(1, 1, 1) == 13440 and E4.a(1, 0, 1) == 30240
    assert E6.a(0, 0, 0) == 1 and E6.a(1, 0, 0) == -504
    assert c12.a(1, 1, 1) == 1 and c10.a(1, 1, 1) == 1
    assert c10.a(1, 0, 1) == -2
    for g in int_gens.values():
        assert g.check_symmetries()
        assert g.check_unimodular_moves()


def test_fourier_jacobi_slices(int_gens):
    c12 = int_gens["chi12"]
    slice1 = fourier_jacobi(c12, 1)
    p12 = jacobi_cusp(12, 16, INT)
    for n in range(5):
        for r in range(-slice1.rb(n), slice1.rb(n) + 1):
            assert slice1.c(n, r) == p12.c(n, r)
    e4_slice = fourier_jacobi(int_gens["E4"], 0)
    ell = eisenstein_q(4, 4, INT)
    assert [e4_slice.c(n, 0) for n in range(5)] == ell.coeff_list()
    assert fourier_jacobi(int_gens["chi10"], 0).is_zero_window()


def test_lift_slice_round_trip(int_gens):
    for name, k in (("E4", 4), ("E6", 6), ("chi10", 10), ("chi12", 12)):
        builder = jacobi_eisenstein if k in (4, 6) else jacobi_cusp
        phi = builder(k, 16, INT)
        F = maass_lift(phi, 4)
        got = fourier_jacobi(F, 1)
        for n in range(5):
            for r in range(-got.rb(n), got.rb(n) + 1):
                assert got.c(n, r) == phi.c(n, r)


# -- products ----------------------------------------------------------------------------

def _product_oracle(F, G, n, r, m):
    acc = 0
    for n1 in range(n + 1):
        for m1 in range(m + 1):
            b1 = isqrt(4 * n1 * m1)
            for r1 in range(-b1, b1 + 1):
                acc += F.a(n1, r1, m1) * G.a(n - n1, r - r1, m - m1) \
                    if abs(r - r1) <= isqrt(4 * (n - n1) * (m - m1)) else 0
    return acc


def test_siegel_mul_against_bruteforce(int_gens):
    E4, c12 = int_gens["E4"], int_gens["chi12"]
    prod = siegel_mul(E4, c12)
    assert prod.weight == 16
    assert prod.a(1, 1, 1) == _product_oracle(E4, c12, 1, 1, 1) == 1
    rng = random.Random(2)
    for _ in range(12):
        n, m = rng.randrange(4), rng.randrange(4)
        r = rng.randrange(-isqrt(4 * n * m), isqrt(4 * n * m) + 1) if n * m else 0
        assert prod.a(n, r, m) == _product_oracle(E4, c12, n, r, m)


def test_chi10_squared_low_terms(int_gens):
    sq = siegel_mul(int_gens["chi10"], int_gens["chi10"])
    for n in range(3):
        for m in range(3):
            if n + m < 2:
                b = isqrt(4 * n * m)
                assert all(sq.a(n, r, m) == 0 for r in range(-b, b + 1))


def test_e4_squared_constant(int_gens):
    sq = siegel_mul(int_gens["E4"], int_gens["E4"])
    assert sq.a(0, 0, 0) == 1


def test_targeted_mul_matches_full(int_gens):
    E4, c12 = int_gens["E4"], int_gens["chi12"]
    full = siegel_mul(E4, c12)
    targets = [(1, 1, 1), (2, 0, 2), (3, 2, 2), (0, 0, 3)]
    got = targeted_mul(E4, c12, targets)
    for t in targets:
        assert got[t] == full.a(*t)
    with pytest.raises(PrecisionError):
        targeted_mul(E4, c12, [(9, 0, 1)])


# -- theta operator and Sturm verifier ------------------------------------------------------

def test_theta_operator(int_gens):
    c12 = int_gens["chi12"]
    d1 = theta_operator(c12, 1)
    assert d1.a(1, 1, 1) == 3 * c12.a(1, 1, 1)
    assert d1.a(1, 2, 1) == 0        # singular T killed
    assert d1.a(0, 0, 0) == 0
    d2 = theta_operator(c12, 2)
    assert d2.a(1, 0, 1) == 16 * c12.a(1, 0, 1)


def test_theta_operator_e4_mod7(ctx7):
    d = theta_operator(ctx7.generator("E4"), 1)
    assert d.is_zero_window()
    assert d.weight == 4 + 8


def test_sturm_zero_bounds(ctx5):
    z = SiegelFormSeries.zero(FP5, 84, 7)
    with pytest.raises(PrecisionError):
        sturm_zero(z, 84)           # bound 28 needs box 14
    rep = sturm_zero(SiegelFormSeries.zero(FP5, 30, 7), 30)
    assert rep.is_zero and rep.bound == 10
    assert sturm_zero(ctx5.generator("chi12"), 12).is_zero is False
    assert (84 // 3, 220 // 3) == (28, 73)


# -- congruence certificates ------------------------------------------------------------------

def test_siegel_congruence_chi12_mod5(ctx5):
    c12 = ctx5.generator("chi12")
    certs = congruence_scan(c12, 5, label="chi12", include_zero=True)
    assert sorted(b for b in range(1, 5) if certs[b].holds) == [1, 4]
    assert certs[0].holds and certs[0].method == "sieve-identity"
    cert = certs[2]
    assert cert.verdict == "fails" and cert.witness is not None
    t = MatrixIndexT(*cert.witness)
    assert legendre(t.det, 5) == legendre(2, 5)
    assert c12.a_T(t) % 5 != 0
    assert cert.G_weight == 12 + 18 and cert.sturm_bound == 10


def test_certificate_json_schema(ctx5):
    cert = siegel_congruence(ctx5.generator("chi12"), 5, 1, label="chi12")
    doc = cert.to_json()
    assert set(doc) == {"form", "p", "b", "verdict", "G_weight", "sturm_bound",
                        "classes_checked", "witness", "method"}
    assert doc["verdict"] == "holds" and doc["witness"] is None


def test_scan_constant_on_legendre_classes(ctx7):
    F = siegel_mul(ctx7.generator("E4"), ctx7.generator("chi12")) \
        - siegel_mul(ctx7.generator("E6"), ctx7.generator("chi10"))
    F.weight = 16
    certs = congruence_scan(F, 7, include_zero=False)
    for b1 in range(1, 7):
        for b2 in range(1, 7):
            if legendre(b1, 7) == legendre(b2, 7):
                assert certs[b1].verdict == certs[b2].verdict


def test_criterion_agrees_with_direct_scan(ctx5):
    c12 = ctx5.generator("chi12")
    for b in range(5):
        cert = siegel_congruence(c12, 5, b)
        clean, _ = siegel_direct_scan(c12, 5, b)
        assert cert.holds == clean


# -- sieve ---------------------------------------------------------------------------------------

def test_sieve_partition_and_support(ctx5):
    from siegelcong.siegel import sieve
    F = ctx5.monomial(0, 0, 2, 0)
    F.weight = 20
    parts = {s: sieve(F, 5, s) for s in (0, 1, -1)}
    total = parts[0] + parts[1]
    total = total + parts[-1]
    for n in range(8):
        for m in range(8):
            b = isqrt(4 * n * m)
            for r in range(-b, b + 1):
                assert (total.a(n, r, m) - F.a(n, r, m)) % 5 == 0
    for s, form in parts.items():
        for det in form.support_dets():
            assert legendre(det, 5) == s
    # supports are disjoint and their union is the support of F
    union = set()
    for form in parts.values():
        dets = set(form.support_dets())
        assert not (union & dets)
        union |= dets
    assert union == set(F.support_dets())


def test_sieve_exact_ring_partition(int_gens):
    F = siegel_mul(int_gens["chi10"], int_gens["chi10"])
    from siegelcong.siegel import sieve
    parts = [sieve(F, 5, s) for s in (0, 1, -1)]
    total = parts[0] + parts[1]
    total = total + parts[2]
    assert total == F


# -- mod-p decompositions --------------------------------------------------------------------------

def test_weight_monomials():
    assert set(weight_monomials(8)) == {(2, 0, 0, 0)}
    assert set(weight_monomials(10)) == {(1, 1, 0, 0), (0, 0, 1, 0)}
    assert set(weight_monomials(20)) >= {(0, 0, 2, 0), (2, 0, 0, 1), (1, 1, 1, 0)}


def test_decompose_e4_squared():
    ctx = GeneratorContext(FP7, 2)
    sq = siegel_mul(ctx.generator("E4"), ctx.generator("E4"))
    sq.weight = 8
    dec = decompose_mod_p(sq, 8, ctx)
    assert dec.solution == {(2, 0, 0, 0): 1}
    assert dec.kernel_dim == 0
    assert verify_combination(sq, {(2, 0, 0, 0): 1}, 8, ctx)


def test_decompose_rejects_foreign_vector():
    ctx = GeneratorContext(FP7, 2)
    # A(0,0,0) = 0 forces the zero combination, but A(0,0,1) = 1 contradicts it
    bogus = SiegelFormSeries.zero(FP7, 8, 2)
    bogus.tables[0][1][0] = 1
    with pytest.raises(NotInRingError):
        decompose_mod_p(bogus, 8, ctx)


def test_json_dump_shape(int_gens):
    doc = int_gens["chi12"].to_json()
    assert doc["kind"] == "siegel" and doc["weight"] == 12
    assert all(r >= 0 and n <= m for n, r, m, _ in doc["coeffs"])
    assert [1, 1, 1, 1] in doc["coeffs"]
