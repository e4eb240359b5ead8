"""The twisted shuffle product and spans of generator products.

Elements of a given weight live on the one-slot chart of that weight
(coordinates x[1, i, s] per vertex i) and are invariant under the
per-vertex permutations of their coordinates.  The product of two
elements places them on disjoint coordinate blocks, multiplies by the
pair kernel of the two blocks, and sums over all per-vertex block
shuffles.  Denominators introduced by the kernel cancel after the sum;
the product of polynomial elements is again polynomial.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction as Frac
from typing import Dict, List, Optional, Sequence, Tuple

from .quiver import ColorWord, DimVector, dim_add, dim_total, dim_zero
from .symalg import (
    MultiPoly,
    RationalFunction,
    SymalgError,
    Variable,
    VarRegistry,
    symmetrize,
)
from .thom import KernelContext, TorusChart


class PoleOnDiagonalError(SymalgError):
    """A product failed to cancel its kernel denominators."""


@dataclass
class ShuffleElement:
    weight: DimVector
    fn: RationalFunction
    polynomial: bool

    def __repr__(self) -> str:
        w = ",".join(f"{v}:{k}" for v, k in sorted(self.weight.items()))
        return f"ShuffleElement({w}; {self.fn})"


def element_chart(ctx: KernelContext, weight: DimVector) -> TorusChart:
    return ctx.chart((weight,))


def unit_element(ctx: KernelContext) -> ShuffleElement:
    chart = element_chart(ctx, dim_zero(ctx.quiver))
    return ShuffleElement(dim_zero(ctx.quiver), RationalFunction.one(chart.registry), True)


def generator(ctx: KernelContext, vertex: str) -> ShuffleElement:
    weight = dim_zero(ctx.quiver)
    if vertex not in weight:
        raise SymalgError(f"unknown vertex {vertex!r}")
    weight[vertex] = 1
    chart = element_chart(ctx, weight)
    return ShuffleElement(weight, RationalFunction.one(chart.registry), True)


def _blocks(chart: TorusChart, alpha: DimVector, beta: DimVector):
    """Per-vertex variable blocks: the first alpha_i slots vs the next beta_i."""
    partition = []
    for v in chart.quiver.vertices:
        a, b = alpha.get(v, 0), beta.get(v, 0)
        if a + b == 0:
            continue
        block1 = [chart.x(1, v, s) for s in range(1, a + 1)]
        block2 = [chart.x(1, v, a + t) for t in range(1, b + 1)]
        blocks = [blk for blk in (block1, block2) if blk]
        partition.append(blocks)
    return partition


def shuffle_product(
    ctx: KernelContext,
    a: ShuffleElement,
    b: ShuffleElement,
    require_polynomial: bool = False,
) -> ShuffleElement:
    gamma = dim_add(a.weight, b.weight)
    chart = element_chart(ctx, gamma)
    reg = chart.registry

    a_map: Dict[Variable, Variable] = {}
    a_chart = element_chart(ctx, a.weight)
    for v in ctx.quiver.vertices:
        for s in range(1, a.weight.get(v, 0) + 1):
            a_map[a_chart.x(1, v, s)] = chart.x(1, v, s)
    b_map: Dict[Variable, Variable] = {}
    b_chart = element_chart(ctx, b.weight)
    for v in ctx.quiver.vertices:
        for t in range(1, b.weight.get(v, 0) + 1):
            b_map[b_chart.x(1, v, t)] = chart.x(1, v, a.weight.get(v, 0) + t)

    fa = a.fn.rename(a_map, reg)
    fb = b.fn.rename(b_map, reg)

    pair = ctx.biextension_kernel(a.weight, b.weight)
    k_map: Dict[Variable, Variable] = {}
    for v in ctx.quiver.vertices:
        for s in range(1, a.weight.get(v, 0) + 1):
            k_map[pair.chart.x(1, v, s)] = chart.x(1, v, s)
        for t in range(1, b.weight.get(v, 0) + 1):
            k_map[pair.chart.x(2, v, t)] = chart.x(1, v, a.weight.get(v, 0) + t)
    fk = pair.fn.rename(k_map, reg)

    product = fa * fb * fk
    partition = _blocks(chart, a.weight, b.weight)
    result = symmetrize(product, partition) if partition else product
    result = result.cancelled()
    polynomial = result.is_regular()
    if require_polynomial and not polynomial:
        raise PoleOnDiagonalError(f"product is not polynomial: {result}")
    return ShuffleElement(gamma, result, polynomial)


def word_product(ctx: KernelContext, word: ColorWord) -> ShuffleElement:
    out = unit_element(ctx)
    for letter in word:
        out = shuffle_product(ctx, out, generator(ctx, letter))
    return out


def verify_ideal(ctx: KernelContext, a: ShuffleElement, b: ShuffleElement) -> bool:
    """True iff the product of two polynomial elements is polynomial."""
    if not (a.polynomial and b.polynomial):
        raise SymalgError("verify_ideal expects polynomial inputs")
    return shuffle_product(ctx, a, b).polynomial


def monomial_element(
    ctx: KernelContext, word: ColorWord, exponents: Sequence[int]
) -> ShuffleElement:
    """Symmetrized monomial multiple of a word's flag kernel.

    The word kernel on the complete-flag chart is pulled to the weight
    chart, multiplied by the monomial x^exponents, and summed over the
    full per-vertex symmetric groups.  These are the raw spanning
    elements of the weight spaces.
    """
    from .quiver import abelianization

    weight = abelianization(ctx.quiver, word)
    chart = element_chart(ctx, weight)
    reg = chart.registry
    if not word:
        return unit_element(ctx)
    kernel = ctx.word_kernel(word)
    mapping: Dict[Variable, Variable] = {}
    seen: Dict[str, int] = {}
    for slot, letter in enumerate(word, start=1):
        seen[letter] = seen.get(letter, 0) + 1
        mapping[kernel.chart.x(slot, letter, 1)] = chart.x(1, letter, seen[letter])
    fn = kernel.fn.rename(mapping, reg)
    xvars = [v for v in reg.variables if v.role == "x"]
    if len(exponents) != len(xvars):
        raise SymalgError("exponent list does not match the weight chart")
    mono = MultiPoly(reg, {tuple(
        exponents[xvars.index(v)] if v in xvars else 0 for v in reg.variables
    ): Frac(1)}) if xvars else MultiPoly.const(reg, 1)
    fn = fn * RationalFunction.from_poly(mono)
    partition = [
        [[chart.x(1, v, s)] for s in range(1, weight.get(v, 0) + 1)]
        for v in ctx.quiver.vertices
        if weight.get(v, 0)
    ]
    result = symmetrize(fn, partition) if partition else fn
    result = result.cancelled()
    return ShuffleElement(weight, result, result.is_regular())


@dataclass
class WeightSpaceBasis:
    weight: DimVector
    degree_bound: int
    elements: List[ShuffleElement]
    dimension: int
    tau_points: List[Dict[Variable, Frac]]

    def __repr__(self) -> str:
        return f"WeightSpaceBasis(weight={self.weight}, dim={self.dimension})"


def _all_words(quiver, alpha: DimVector) -> List[ColorWord]:
    letters: List[str] = []
    for v in quiver.vertices:
        letters.extend([v] * alpha.get(v, 0))
    return sorted(set(itertools.permutations(letters)))


def _random_tau(ctx: KernelContext, rng: random.Random) -> Dict[Variable, Frac]:
    from .symalg import d_var

    # Avoid small coincidences among shift values.
    vals = {}
    for k in range(1, ctx.dilation.rank + 1):
        vals[d_var(k)] = Frac(rng.randint(50, 400), rng.randint(1, 7))
    return vals


def weight_space(
    ctx: KernelContext,
    alpha: DimVector,
    degree_bound: int,
    tau: Optional[Dict[Variable, Frac]] = None,
    seed: int = 7,
) -> WeightSpaceBasis:
    """Span of all generator-order products times bounded-degree monomials.

    The dimension is computed by exact row reduction after specializing
    the dilation coordinates at a random rational point, and confirmed
    at a second point.
    """
    if dim_total(alpha) > 4:
        raise SymalgError("weight spaces are computed for total weight <= 4")
    rng = random.Random(seed)
    taus = [tau or _random_tau(ctx, rng), _random_tau(ctx, rng)]
    chart = element_chart(ctx, alpha)
    xvars = [v for v in chart.registry.variables if v.role == "x"]
    words = _all_words(ctx.quiver, alpha)

    raw: List[ShuffleElement] = []
    if dim_total(alpha) == 0:
        raw.append(unit_element(ctx))
    else:
        for word in words:
            for exps in _bounded_exponents(len(xvars), degree_bound):
                elt = monomial_element(ctx, word, exps)
                if elt.polynomial and elt.fn.numerator().degree() <= degree_bound:
                    raw.append(elt)

    dims = []
    pivots_first: List[ShuffleElement] = []
    for which, tau_pt in enumerate(taus):
        rows = []
        for elt in raw:
            fn = elt.fn.substitute(tau_pt)
            rows.append((elt, fn.numerator()))
        dim, pivots = _rank_over_monomials(rows)
        dims.append(dim)
        if which == 0:
            pivots_first = pivots
    if len(set(dims)) != 1:
        raise SymalgError(f"weight-space dimension unstable across points: {dims}")
    return WeightSpaceBasis(alpha, degree_bound, pivots_first, dims[0], taus)


def _bounded_exponents(n: int, bound: int):
    if n == 0:
        yield ()
        return
    for total in range(0, bound + 1):
        for cuts in itertools.combinations(range(total + n - 1), n - 1):
            exps = []
            prev = -1
            for c in cuts:
                exps.append(c - prev - 1)
                prev = c
            exps.append(total + n - 2 - prev)
            yield tuple(exps)


def _rank_over_monomials(rows) -> Tuple[int, List[ShuffleElement]]:
    basis: Dict[int, MultiPoly] = {}
    pivots: List[ShuffleElement] = []
    for elt, poly in rows:
        current = poly
        while not current.is_zero():
            lead, coeff = current.leading()
            if lead in basis:
                other = basis[lead]
                _, oc = other.leading()
                current = current - other.scale(Frac(coeff) / Frac(oc))
            else:
                basis[lead] = current
                pivots.append(elt)
                break
    return len(basis), pivots
