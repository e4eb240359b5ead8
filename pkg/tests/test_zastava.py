import itertools
import random
from fractions import Fraction as F
from math import comb

import pytest

from quivergrass.fgl import FormalGroupLaw
from quivergrass.locality import tau_point
from quivergrass.quiver import DilationTorus, default_nakajima, stock_quiver
from quivergrass.thom import KernelContext
from quivergrass.zastava import (
    ColoredDivisor,
    DivisorPoint,
    FlatLimitReport,
    NonGenericError,
    Poset,
    PosetFormatError,
    flat_limit_two_points,
    generic_fiber_factorization,
    ind_fiber,
    ind_rank,
    monotone_maps,
    pair_value,
    sub_leq,
    subscheme_lattice,
)


def ctx_a1():
    q = stock_quiver("a1")
    return KernelContext(q, default_nakajima(q), DilationTorus(1, ((1,), (0,))),
                         FormalGroupLaw.additive())


def ctx_a2():
    q = stock_quiver("a2")
    return KernelContext(q, default_nakajima(q), DilationTorus.diagonal(),
                         FormalGroupLaw.additive())


def test_poset_constructors():
    c = Poset.chain(3)
    assert len(c) == 3 and c.leq("p1", "p3")
    a = Poset.antichain(2)
    assert not a.leq("p1", "p2") and a.leq("p1", "p1")
    with pytest.raises(PosetFormatError):
        Poset(["a", "b"], [("a", "b"), ("b", "a")])  # closure breaks antisymmetry


def test_poset_transitive_closure():
    p = Poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.leq("a", "c")


def test_subscheme_lattice_shapes():
    assert len(subscheme_lattice(ColoredDivisor.parse("a:i:1"))) == 2
    assert len(subscheme_lattice(ColoredDivisor.parse("a:i:2"))) == 3
    grid = subscheme_lattice(ColoredDivisor.parse("a:i:1,b:j:1"))
    assert len(grid) == 4


def test_ind_rank_examples():
    ai = ColoredDivisor.parse("a:i:1")
    assert ind_rank(Poset.chain(1), ai) == 2
    for m in (1, 2, 3):
        assert ind_rank(Poset.chain(m), ai) == m + 1
    assert ind_rank(Poset.antichain(2), ai) == 4


def test_ind_rank_chain_formula():
    # oracle: weakly increasing m-tuples in {0..n} number C(n+m, m)
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            d = ColoredDivisor.parse(f"a:i:{n}")
            brute = 0
            for tup in itertools.product(range(n + 1), repeat=m):
                if all(tup[k] <= tup[k + 1] for k in range(m - 1)):
                    brute += 1
            assert brute == comb(n + m, m)
            assert ind_rank(Poset.chain(m), d) == comb(n + m, m)


def test_ind_rank_multiplicative_over_disjoint_supports():
    p = Poset.chain(1)
    left = ColoredDivisor.parse("a:i:2")
    right = ColoredDivisor.parse("b:j:1")
    both = ColoredDivisor.parse("a:i:2,b:j:1")
    assert ind_rank(p, both) == ind_rank(p, left) * ind_rank(p, right)


def test_ind_fiber_values_and_normalization():
    ctx = ctx_a1()
    tau = tau_point(ctx, [F(1, 3)])
    div = ColoredDivisor(
        [DivisorPoint("a", "1", 1), DivisorPoint("b", "1", 1)],
        {"a": F(0), "b": F(7)},
    )
    fiber = ind_fiber(ctx, Poset.chain(1), div, tau)
    assert fiber.rank == 4
    by_label = dict(zip(
        [tuple(sorted(m["p1"])) for m in fiber.maps], fiber.values
    ))
    assert by_label[(("a", 0), ("b", 0))] == 1  # empty subscheme line
    assert by_label[(("a", 1), ("b", 0))] == 1
    # the full member carries the evaluated pair kernel: (7 + 1/3) / 7
    assert by_label[(("a", 1), ("b", 1))] == F(22, 21)


def test_ind_fiber_rejects_collisions_and_multiplicity():
    ctx = ctx_a1()
    tau = tau_point(ctx, [F(1)])
    bad = ColoredDivisor(
        [DivisorPoint("a", "1", 1), DivisorPoint("b", "1", 1)],
        {"a": F(0), "b": F(1)},  # 0 + tau = 1 collides
    )
    with pytest.raises(NonGenericError):
        ind_fiber(ctx, Poset.chain(1), bad, tau)
    with pytest.raises(NonGenericError):
        ind_fiber(ctx, Poset.chain(1), ColoredDivisor.parse("a:i:2"), tau)


def test_factorization_same_color_points():
    ctx = ctx_a1()
    tau = tau_point(ctx, [F(1, 5)])
    rng = random.Random(21)
    for _ in range(6):
        a, b = rng.sample(range(0, 40), 2)
        left = ColoredDivisor([DivisorPoint("a", "1", 1)], {"a": F(a)})
        right = ColoredDivisor([DivisorPoint("b", "1", 1)], {"b": F(b)})
        from quivergrass.locality import PointConfig, is_m_tau_disjoint

        if not is_m_tau_disjoint(
            ctx, PointConfig({"1": [F(a)]}), PointConfig({"1": [F(b)]}), tau
        ):
            continue
        rep = generic_fiber_factorization(ctx, Poset.chain(1), left, right, tau)
        assert rep.ok


def test_factorization_distinct_colors():
    ctx = ctx_a2()
    tau = tau_point(ctx, [F(1, 7)])
    left = ColoredDivisor([DivisorPoint("a", "1", 1)], {"a": F(2)})
    right = ColoredDivisor([DivisorPoint("b", "2", 1)], {"b": F(11)})
    rep = generic_fiber_factorization(ctx, Poset.chain(1), left, right, tau)
    assert rep.ok


def test_factorization_empty_half():
    ctx = ctx_a1()
    tau = tau_point(ctx, [F(1)])
    left = ColoredDivisor([DivisorPoint("a", "1", 1)], {"a": F(3)})
    right = ColoredDivisor([], {})
    rep = generic_fiber_factorization(ctx, Poset.chain(1), left, right, tau)
    assert rep.ok


def test_pair_value_matches_direct_formula():
    ctx = ctx_a1()
    tau = tau_point(ctx, [F(1, 2)])
    u = DivisorPoint("a", "1", 1)
    v = DivisorPoint("b", "1", 1)
    got = pair_value(ctx, u, v, {"a": F(1), "b": F(5)}, tau)
    assert got == (F(5) - F(1) + F(1, 2)) / (F(5) - F(1))


def test_flat_limit_report():
    ctx = ctx_a1()
    tau = tau_point(ctx, [F(1, 3)])
    rep = flat_limit_two_points(ctx, tau)
    assert rep.on_segre_quadric
    assert rep.off_product_chart
    assert rep.limit_point[3] != 0
    # classical parameter: the limit stays on the product chart
    rep0 = flat_limit_two_points(ctx, tau_point(ctx, [F(0)]))
    assert rep0.on_segre_quadric and not rep0.off_product_chart
