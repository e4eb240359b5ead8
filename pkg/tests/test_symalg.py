import random
from fractions import Fraction as F

import pytest

from quivergrass.symalg import (
    MultiPoly,
    PoleError,
    RationalFunction,
    RegistryMismatchError,
    SymalgError,
    VarRegistry,
    aux_var,
    block_shuffles,
    poly_arith,
    rat_equal,
    rat_sum,
    symmetrize,
    x_var,
    d_var,
)


@pytest.fixture
def xyw():
    x = x_var(1, 0, "i", 1)
    y = x_var(1, 0, "i", 2)
    w = d_var(1)
    reg = VarRegistry([x, y, w])
    return reg, x, y, w


def lin(reg, coeffs, const=0):
    return MultiPoly.linear(reg, coeffs, const)


def test_poly_add_mul_examples(xyw):
    reg, x, y, w = xyw
    px = lin(reg, {x: 1, y: 1})
    qx = lin(reg, {x: 1, y: -1})
    assert poly_arith(px, qx, "add") == lin(reg, {x: 2})
    assert poly_arith(qx, px, "mul") == (
        MultiPoly.var(reg, x) * MultiPoly.var(reg, x)
        - MultiPoly.var(reg, y) * MultiPoly.var(reg, y)
    )
    assert poly_arith(MultiPoly.zero(reg), px, "mul").is_zero()


def test_registry_mismatch(xyw):
    reg, x, y, w = xyw
    other = VarRegistry([x, y])
    with pytest.raises(RegistryMismatchError):
        poly_arith(lin(reg, {x: 1}), MultiPoly.linear(other, {x: 1}), "add")


def test_ring_axioms_randomized(xyw):
    reg, x, y, w = xyw
    rng = random.Random(11)

    def rand_poly():
        terms = {}
        for _ in range(rng.randint(1, 5)):
            e = (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2))
            terms[e] = F(rng.randint(-6, 6))
        return MultiPoly(reg, terms)

    for _ in range(40):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_rat_equal_cross_multiplied(xyw):
    reg, x, y, w = xyw
    num = lin(reg, {x: 1}).pow(2) - lin(reg, {y: 1}).pow(2)
    den = lin(reg, {x: 1, y: -1})
    a = RationalFunction(reg, 1, [(num, 1), (den, -1)])
    b = RationalFunction.from_poly(lin(reg, {x: 1, y: 1}))
    assert rat_equal(a, b)
    c = RationalFunction(reg, 1, [(lin(reg, {x: 1}, 0) + MultiPoly.var(reg, w), 1),
                                  (lin(reg, {x: 1}), -1)])
    d = RationalFunction(reg, 1, [(lin(reg, {x: 1}) - MultiPoly.var(reg, w), 1),
                                  (lin(reg, {x: 1}), -1)])
    assert not rat_equal(c, d)


def test_rat_equal_factored_unit_cancellation(xyw):
    reg, x, y, w = xyw
    f = lin(reg, {x: 1, y: -1})
    a = RationalFunction(reg, F(3), [(f, 1), (f, -1)])
    b = RationalFunction.constant(reg, F(3))
    assert rat_equal(a, b)


def test_rat_equal_is_equivalence(xyw):
    reg, x, y, w = xyw
    rng = random.Random(5)
    polys = [lin(reg, {x: 1, y: rng.randint(-2, 2)}, rng.randint(-2, 2)) for _ in range(4)]
    fns = [RationalFunction(reg, 1, [(p, 1), (q, -1)]) for p in polys for q in polys]
    for f in fns:
        assert rat_equal(f, f)
    # common-factor invariance
    g = RationalFunction(reg, 1, [(polys[0], 1), (polys[1], -1)])
    h = g * RationalFunction(reg, 1, [(polys[2], 1), (polys[2], -1)])
    assert rat_equal(g, h)


def test_evaluate_examples(xyw):
    reg, x, y, w = xyw
    f = RationalFunction(
        reg, 1,
        [(lin(reg, {x: 1}) + MultiPoly.var(reg, w), 1), (lin(reg, {x: 1}), -1)],
    )
    assert f.evaluate({x: F(5), y: F(0), w: F(1)}) == F(6, 5)
    with pytest.raises(PoleError):
        f.evaluate({x: F(0), y: F(0), w: F(1)})
    two = RationalFunction.constant(reg, 2)
    assert two.evaluate({x: F(9), y: F(3), w: F(7)}) == 2


def test_symmetrize_antisymmetric_vanishes(xyw):
    reg, x, y, w = xyw
    f = RationalFunction.from_poly(lin(reg, {x: 1, y: -1}))
    s = symmetrize(f, [[[x], [y]]])
    assert s.is_zero()


def shuffle_sum_oracle(values, omega, terms):
    """Plain-Fraction evaluation of a sum over explicit coordinate orders."""
    total = F(0)
    for order in terms:
        total += order(values, omega)
    return total


def test_symmetrize_two_term_kernel(xyw):
    reg, x, y, w = xyw
    # oracle first: (y-x+w)/(y-x) + (x-y+w)/(x-y) at random points is 2
    rng = random.Random(3)
    for _ in range(10):
        a, b, t = F(rng.randint(1, 60)), F(rng.randint(70, 160)), F(rng.randint(1, 9))
        val = (b - a + t) / (b - a) + (a - b + t) / (a - b)
        assert val == 2
    num = lin(reg, {y: 1, x: -1}) + MultiPoly.var(reg, w)
    den = lin(reg, {y: 1, x: -1})
    f = RationalFunction(reg, 1, [(num, 1), (den, -1)])
    s = symmetrize(f, [[[x], [y]]])
    assert s.is_scalar() and s.scalar_value() == 2


def test_symmetrize_s3_kernel():
    xs = [x_var(1, 0, "i", k) for k in (1, 2, 3)]
    w = d_var(1)
    reg = VarRegistry(xs + [w])
    # oracle: six-term sum evaluates to 6 at random points
    rng = random.Random(7)
    import itertools

    for _ in range(5):
        vals = {}
        pts = rng.sample(range(1, 500), 3)
        t = F(rng.randint(1, 7))
        total = F(0)
        for perm in itertools.permutations(pts):
            term = F(1)
            for i in range(3):
                for j in range(i + 1, 3):
                    term *= F(perm[j] - perm[i] + t) / F(perm[j] - perm[i])
            total += term
        assert total == 6
    f = RationalFunction.one(reg)
    for i in range(3):
        for j in range(i + 1, 3):
            num = MultiPoly.linear(reg, {xs[j]: 1, xs[i]: -1}) + MultiPoly.var(reg, w)
            den = MultiPoly.linear(reg, {xs[j]: 1, xs[i]: -1})
            f = f * RationalFunction(reg, 1, [(num, 1), (den, -1)])
    s = symmetrize(f, [[[v] for v in xs]])
    assert s.is_scalar() and s.scalar_value() == 6


def test_symmetrize_is_linear(xyw):
    reg, x, y, w = xyw
    f = RationalFunction.from_poly(lin(reg, {x: 2}, 1))
    g = RationalFunction.from_poly(lin(reg, {y: 1}))
    blocks = [[[x], [y]]]
    lhs = symmetrize(rat_sum([f, g]), blocks)
    rhs = rat_sum([symmetrize(f, blocks), symmetrize(g, blocks)])
    assert rat_equal(lhs, rhs)


def test_symmetrize_output_invariance(xyw):
    reg, x, y, w = xyw
    f = RationalFunction.from_poly(lin(reg, {x: 3, y: 1}, 2))
    s = symmetrize(f, [[[x], [y]]])
    swapped = s.rename({x: y, y: x}, reg)
    assert rat_equal(s, swapped)


def test_symmetrize_matches_pointwise_sum(xyw):
    reg, x, y, w = xyw
    f = RationalFunction(
        reg, 1,
        [(lin(reg, {x: 1, y: 2}, 1), 1), (lin(reg, {x: 1, y: -1}, 5), -1)],
    )
    s = symmetrize(f, [[[x], [y]]])
    pt = {x: F(2), y: F(9), w: F(0)}
    swapped = {x: F(9), y: F(2), w: F(0)}
    assert s.evaluate(pt) == f.evaluate(pt) + f.evaluate(swapped)


def test_blocks_must_not_overlap(xyw):
    reg, x, y, w = xyw
    with pytest.raises(SymalgError):
        block_shuffles([[x, y], [y]])


def test_cancelled_divides_exactly(xyw):
    reg, x, y, w = xyw
    num = lin(reg, {x: 1}).pow(2) - lin(reg, {y: 1}).pow(2)
    den = lin(reg, {x: 1, y: -1})
    f = RationalFunction(reg, 1, [(num, 1), (den, -1)]).cancelled()
    assert f.is_polynomial()
    assert rat_equal(f, RationalFunction.from_poly(lin(reg, {x: 1, y: 1})))


def test_canonical_factor_form(xyw):
    # content 1, positive leading coefficient; the shed scalar lands in the unit
    reg, x, y, w = xyw
    p = lin(reg, {x: -2, y: 2})
    f = RationalFunction.from_poly(p)
    ((prim, e),) = f.factors
    assert e == 1
    assert f.unit == 2
    assert prim == lin(reg, {x: -1, y: 1})
    q = lin(reg, {x: 2, y: -2})
    g = RationalFunction.from_poly(q)
    assert g.unit == -2 and g.factors == f.factors
