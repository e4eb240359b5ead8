import itertools
from fractions import Fraction as F
from math import comb

import pytest

from quivergrass.fixedpoints import (
    CarellChart,
    DegreeOverflowError,
    TruncatedRing,
    WindowOverflowError,
    ZWindow,
    buchberger,
    carell_chart,
    carell_dim,
    comonic_inverse,
    count_truncated_solutions,
    gaussian_binomial,
    hilbert_colored,
    qpoly_eval,
    qpoly_str,
    quiver_grass_poincare,
    sl2_enumerate,
    standard_monomials,
)
from quivergrass.symalg import MultiPoly, VarRegistry, aux_var


def test_truncated_ring_axioms():
    ring = TruncatedRing(2, 2)
    els = ring.elements()
    assert len(els) == 4
    for a in els:
        assert ring.add(a, ring.zero()) == a
        assert ring.mul(a, ring.one()) == a
        for b in els:
            assert ring.add(a, b) == ring.add(b, a)
            assert ring.mul(a, b) == ring.mul(b, a)
    eps = (0, 1)
    assert ring.is_nilpotent(eps) and ring.is_zero(ring.mul(eps, eps))
    assert ring.nilpotents() == [(0, 0), (0, 1)]


def test_truncated_ring_inverse():
    ring = TruncatedRing(3, 3)
    for a in ring.elements():
        if ring.is_unit(a):
            assert ring.mul(a, ring.inverse(a)) == ring.one()


def test_comonic_inverse():
    ring = TruncatedRing(2, 2)
    q = ZWindow(ring, 6, {0: ring.one(), -1: (0, 1)})
    inv = comonic_inverse(ring, q)
    assert q.mul(inv).coeffs == {0: ring.one()}


def test_window_overflow_detected():
    ring = TruncatedRing(2, 2)
    with pytest.raises(WindowOverflowError):
        ZWindow(ring, 2, {3: ring.one()})
    with pytest.raises(WindowOverflowError):
        sl2_enumerate(2, 2, 3, 4)  # needs window >= n + e = 5


def test_sl2_counts_and_routes():
    # counts (p^(e-1))^n once the window admits all tails of length n
    for n in range(0, 4):
        rep = sl2_enumerate(2, 2, n, max(n + 2, 2 * n + 1))
        assert rep.s0_count == 2 ** n
        assert rep.routes_agree
        assert rep.bijection_ok


def test_sl2_base_point():
    rep = sl2_enumerate(2, 2, 0, 3)
    assert rep.s0_count == 1


def test_sl2_membership_vs_divisibility():
    # n = 1, m = 1: only P = z divides z; one point
    rep = sl2_enumerate(2, 2, 1, 4, m=1)
    assert rep.sminus_count == 1
    assert rep.routes_agree
    # n = 1, m = 2: (z + eps)^2 = z^2, so both candidates divide
    rep2 = sl2_enumerate(2, 2, 1, 4, m=2)
    assert rep2.sminus_count == 2
    # n = 2, m = 2: only z^2 itself
    rep3 = sl2_enumerate(2, 2, 2, 5, m=2)
    assert rep3.sminus_count == 1


def test_sl2_divisor_counts_match_chart_points():
    # the degree-beta members dividing z^n match the truncated-ring points
    # of the fixed-scheme chart: the two enumerations count the same sets
    ring = TruncatedRing(2, 2)
    for n in range(1, 4):
        for beta in range(0, n + 1):
            window = max(beta + 2, 2 * beta + 1, n + 2)
            rep = sl2_enumerate(2, 2, beta, window, m=n)
            divisor_count = rep.sminus_count
            chart = carell_chart(n, beta)
            assert divisor_count == count_truncated_solutions(chart, ring), (n, beta)


def test_hilbert_colored():
    lat = hilbert_colored({"i": 2})
    assert lat.total == 3
    assert lat.grade_counts() == {0: 1, 1: 1, 2: 1}
    assert hilbert_colored({"i": 1, "j": 1}).total == 4
    assert hilbert_colored({}).total == 1


def test_gaussian_binomials():
    assert gaussian_binomial(2, 1) == [1, 1]
    assert gaussian_binomial(3, 1) == [1, 1, 1]
    assert gaussian_binomial(4, 2) == [1, 1, 2, 1, 1]
    for n in range(0, 6):
        assert gaussian_binomial(n, 0) == [1]
        for p in range(0, n + 1):
            assert qpoly_eval(gaussian_binomial(n, p), 1) == comb(n, p)
    with pytest.raises(ValueError):
        gaussian_binomial(3, 4)


def test_poincare_examples():
    assert qpoly_str(quiver_grass_poincare({"1": 2})) == "3 + q"
    assert qpoly_eval(quiver_grass_poincare({"1": 2}), 1) == 4
    assert qpoly_eval(quiver_grass_poincare({"1": 1}), 1) == 2
    assert qpoly_eval(quiver_grass_poincare({"1": 1, "2": 1}), 1) == 4


def test_poincare_total_identity():
    # q = 1 value equals the product of 2^alpha_i and equals the total of
    # the fixed-scheme dimensions over all subweights
    for alpha in ({"1": 2}, {"1": 3}, {"1": 1, "2": 2}, {"1": 2, "2": 2}):
        total = qpoly_eval(quiver_grass_poincare(alpha), 1)
        expect = 1
        for a in alpha.values():
            expect *= 2 ** a
        assert total == expect
        summed = 0
        for beta in itertools.product(*(range(a + 1) for a in alpha.values())):
            prod = 1
            for a, b in zip(alpha.values(), beta):
                prod *= carell_dim(a, b)
            summed += prod
        assert summed == expect


def test_carell_dims_match_binomials():
    for n in range(0, 5):
        for p in range(0, n + 1):
            assert carell_dim(n, p) == comb(n, p)


def test_carell_weight_series_is_gaussian():
    for n in range(0, 5):
        for p in range(0, n + 1):
            assert carell_chart(n, p).weight_series() == gaussian_binomial(n, p)


def test_carell_overflow():
    with pytest.raises(DegreeOverflowError):
        carell_dim(5, 2)


def test_buchberger_small_ideal():
    x, y = aux_var("x", 1), aux_var("y", 2)
    reg = VarRegistry([x, y], keep_order=True)
    px, py = MultiPoly.var(reg, x), MultiPoly.var(reg, y)
    basis = buchberger([px * py, px - py * py])
    std = standard_monomials(basis, 2)
    assert len(std) == 3  # 1, y, y^2
