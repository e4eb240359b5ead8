"""Shifted diagonals, the disjointness predicate, and factorization checks.

Configurations are colored tuples of exact curve coordinates together
with a rational point of the dilation base.  Disjointness is checked
against three families of constraints between two configurations: the
arrow-shifted diagonals (one per arrow of the double), the plain
same-color diagonals, and the symplectically shifted same-color
diagonals.  Both orders of each pair are always tested.

``verify_trivialization`` evaluates the two-sided pair kernel -- the
product of every constraint family's orientation factor in both
directions -- so each violated constraint names the factor that
vanishes or blows up.  ``verify_m_locality`` checks the exact
rational-function factorization of a concatenated word's kernel into
the two word kernels times the one-sided pair kernel, which is the
kernel-level form of the locality isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Frac
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .fgl import Character
from .quiver import ColorWord, DimVector, abelianization
from .symalg import (
    RationalFunction,
    SymalgError,
    Variable,
    VarRegistry,
    d_var,
    rat_equal,
)
from .thom import (
    FactorRecord,
    KernelContext,
    ThomKernel,
    TorusChart,
    evaluate_kernel,
)


class DisjointnessError(SymalgError):
    """A check that requires disjoint configurations got a colliding one."""


TauPoint = Dict[Variable, Frac]


def tau_point(ctx: KernelContext, values: Sequence[Frac]) -> TauPoint:
    if len(values) != ctx.dilation.rank:
        raise SymalgError(
            f"expected {ctx.dilation.rank} dilation coordinates, got {len(values)}"
        )
    return {d_var(k + 1): Frac(v) for k, v in enumerate(values)}


@dataclass
class PointConfig:
    """Exact coordinates per color; multiplicity one per listed point."""

    coords: Dict[str, List[Frac]]

    @staticmethod
    def from_mapping(data: Mapping[str, Sequence]) -> "PointConfig":
        return PointConfig({str(c): [Frac(str(v)) for v in vals] for c, vals in data.items()})

    def weight(self, ctx: KernelContext) -> DimVector:
        return {v: len(self.coords.get(v, [])) for v in ctx.quiver.vertices}

    def is_empty(self) -> bool:
        return all(not vals for vals in self.coords.values())


@dataclass(frozen=True)
class DiagonalDescriptor:
    """One constraint family between two configurations.

    ``order`` records which configuration receives the shift: "12" means
    the second configuration's ``color2`` points, shifted, are tested
    against the first configuration's ``color1`` points; "21" swaps the
    roles.  Both orders of every family are always part of the
    disjointness predicate.
    """

    name: str
    color1: str
    color2: str
    shift: Frac  # group-law point shift applied per the order
    source: str  # "arrow:<id>" | "plain" | "symplectic"
    order: str = "12"

    def describe(self) -> str:
        if self.order == "12":
            return f"{self.name}: D2^{self.color2} shifted by {self.shift} against D1^{self.color1}"
        return f"{self.name}: D1^{self.color2} shifted by {self.shift} against D2^{self.color1}"


@dataclass
class ShiftedDiagonalSet:
    descriptors: List[DiagonalDescriptor]

    def __iter__(self):
        return iter(self.descriptors)


def shifted_diagonals(
    ctx: KernelContext, v1: DimVector, v2: DimVector, tau: TauPoint
) -> ShiftedDiagonalSet:
    """All constraint families between configurations of the two weights."""
    law = ctx.law
    out: List[DiagonalDescriptor] = []
    for k in ctx.quiver.double:
        shift = law.char_value(ctx.mu(k.aid), tau)
        if v1.get(k.tail, 0) and v2.get(k.head, 0):
            out.append(
                DiagonalDescriptor(
                    f"delta_{k.aid}(tau)", k.tail, k.head, shift, f"arrow:{k.aid}", "12"
                )
            )
        if v2.get(k.tail, 0) and v1.get(k.head, 0):
            out.append(
                DiagonalDescriptor(
                    f"delta_{k.aid}(tau)", k.tail, k.head, shift, f"arrow:{k.aid}", "21"
                )
            )
    omega_shift = law.char_value(ctx.omega(), tau)
    for v in ctx.quiver.vertices:
        if v1.get(v, 0) == 0 or v2.get(v, 0) == 0:
            continue
        out.append(DiagonalDescriptor(f"delta_{v}", v, v, law.point_zero(), "plain"))
        out.append(DiagonalDescriptor(f"delta_{v}(tau)", v, v, omega_shift, "symplectic"))
    return ShiftedDiagonalSet(out)


def is_m_tau_disjoint(
    ctx: KernelContext, d1: PointConfig, d2: PointConfig, tau: TauPoint
) -> bool:
    """Both orders of every constraint family must miss.

    For each common color i the sets D1^i (+/- the symplectic shift) and
    D2^i must be disjoint and D1^i, D2^i themselves disjoint; for each
    arrow k of the double, D2^{head} (+/- the arrow shift) must miss
    D1^{tail}.
    """
    law = ctx.law
    omega_shift = law.char_value(ctx.omega(), tau)
    for v in ctx.quiver.vertices:
        a = d1.coords.get(v, [])
        b = d2.coords.get(v, [])
        if not a or not b:
            continue
        for x in a:
            for y in b:
                if x == y:
                    return False
                for s in (omega_shift, law.point_neg(omega_shift)):
                    if law.point_add(x, s) == y:
                        return False
    for k in ctx.quiver.double:
        a = d1.coords.get(k.tail, [])
        b = d2.coords.get(k.head, [])
        if not a or not b:
            continue
        shift = law.char_value(ctx.mu(k.aid), tau)
        for y in b:
            for x in a:
                for s in (shift, law.point_neg(shift)):
                    if law.point_add(y, s) == x:
                        return False
    return True


def pair_check_kernel(ctx: KernelContext, v1: DimVector, v2: DimVector) -> ThomKernel:
    """Two-sided evaluation kernel: one orientation factor per constraint
    family and direction (arrow factors both ways, symplectic factors both
    ways, plain diagonals as denominators both ways)."""
    chart = ctx.chart((v1, v2))
    kernel = ThomKernel(fn=RationalFunction.one(chart.registry), chart=chart)
    omega = ctx.omega()
    for k in ctx.quiver.double:
        mu = ctx.mu(k.aid)
        ctx._hom_block(kernel, "rep_raise", k, None, 1, 2, mu, +1)
        ctx._hom_block(kernel, "rep_lower", k, None, 2, 1, mu, +1)
    for v in ctx.quiver.vertices:
        ctx._hom_block(kernel, "gp_omega", None, v, 1, 2, omega, +1)
        ctx._hom_block(kernel, "gp_omega", None, v, 2, 1, omega, +1)
        ctx._hom_block(kernel, "gp_inv", None, v, 1, 2, Character.zero(), -1)
        ctx._hom_block(kernel, "gp_inv", None, v, 2, 1, Character.zero(), -1)
    return kernel


def config_assignment(
    chart: TorusChart, d1: PointConfig, d2: PointConfig, tau: TauPoint
) -> Dict[Variable, Frac]:
    assignment: Dict[Variable, Frac] = dict(tau)
    for v in chart.quiver.vertices:
        for s, val in enumerate(d1.coords.get(v, []), start=1):
            assignment[chart.x(1, v, s)] = Frac(val)
        for t, val in enumerate(d2.coords.get(v, []), start=1):
            assignment[chart.x(2, v, t)] = Frac(val)
    return assignment


@dataclass
class TrivializationReport:
    disjoint: bool
    value: Optional[Frac]
    culprits: List[Tuple[str, FactorRecord]]

    @property
    def trivializes(self) -> bool:
        return self.value is not None and self.value != 0

    @property
    def ok(self) -> bool:
        """Disjoint pairs must evaluate finite nonzero; colliding pairs
        must hit a named factor."""
        if self.disjoint:
            return self.trivializes
        return bool(self.culprits)

    def describe(self) -> str:
        if self.disjoint:
            return f"disjoint; kernel value {self.value}"
        names = ", ".join(f"{kind} at {rec.label()}" for kind, rec in self.culprits)
        return f"not disjoint; {names or 'no factor hit (one-sided family)'}"


def verify_trivialization(
    ctx: KernelContext, d1: PointConfig, d2: PointConfig, tau: TauPoint
) -> TrivializationReport:
    if d2.is_empty() or d1.is_empty():
        return TrivializationReport(True, Frac(1), [])
    v1, v2 = d1.weight(ctx), d2.weight(ctx)
    kernel = pair_check_kernel(ctx, v1, v2)
    assignment = config_assignment(kernel.chart, d1, d2, tau)
    value, culprits = evaluate_kernel(kernel, assignment)
    disjoint = is_m_tau_disjoint(ctx, d1, d2, tau)
    return TrivializationReport(disjoint, value, culprits)


@dataclass
class MLocalityReport:
    word1: ColorWord
    word2: ColorWord
    identity_holds: bool
    lhs_repr: str
    rhs_repr: str


def verify_m_locality(
    ctx: KernelContext,
    word1: ColorWord,
    word2: ColorWord,
    d1: Optional[PointConfig] = None,
    d2: Optional[PointConfig] = None,
    tau: Optional[TauPoint] = None,
) -> MLocalityReport:
    """Exact kernel-level factorization for a concatenated word.

    The kernel of word1 + word2 must equal the product of the two word
    kernels and the pair kernel of their weights, transported onto the
    combined chart.  When point configurations are supplied they must be
    disjoint in the shifted sense; the identity itself is checked as an
    exact rational-function equality independent of any points.
    """
    if d1 is not None and d2 is not None and tau is not None:
        if not d1.is_empty() and not d2.is_empty():
            if not is_m_tau_disjoint(ctx, d1, d2, tau):
                raise DisjointnessError("configurations collide under the shifts")

    combined: ColorWord = tuple(word1) + tuple(word2)
    if not combined:
        return MLocalityReport(word1, word2, True, "1", "1")
    big = ctx.word_kernel(combined)
    reg = big.chart.registry
    n1 = len(word1)

    parts: List[RationalFunction] = []
    if word1:
        k1 = ctx.word_kernel(word1)
        m1 = {
            k1.chart.x(g, word1[g - 1], 1): big.chart.x(g, word1[g - 1], 1)
            for g in range(1, n1 + 1)
        }
        parts.append(k1.fn.rename(m1, reg))
    if word2:
        k2 = ctx.word_kernel(word2)
        m2 = {
            k2.chart.x(g, word2[g - 1], 1): big.chart.x(n1 + g, word2[g - 1], 1)
            for g in range(1, len(word2) + 1)
        }
        parts.append(k2.fn.rename(m2, reg))
    if word1 and word2:
        alpha = abelianization(ctx.quiver, word1)
        beta = abelianization(ctx.quiver, word2)
        pair = ctx.biextension_kernel(alpha, beta)
        mapping: Dict[Variable, Variable] = {}
        seen1: Dict[str, int] = {}
        for g, letter in enumerate(word1, start=1):
            seen1[letter] = seen1.get(letter, 0) + 1
            mapping[pair.chart.x(1, letter, seen1[letter])] = big.chart.x(g, letter, 1)
        seen2: Dict[str, int] = {}
        for g, letter in enumerate(word2, start=1):
            seen2[letter] = seen2.get(letter, 0) + 1
            mapping[pair.chart.x(2, letter, seen2[letter])] = big.chart.x(n1 + g, letter, 1)
        parts.append(pair.fn.rename(mapping, reg))

    rhs_fn = parts[0]
    for p in parts[1:]:
        rhs_fn = rhs_fn * p
    holds = rat_equal(big.fn, rhs_fn)
    return MLocalityReport(word1, word2, holds, repr(big.fn), repr(rhs_fn))


def parse_point_config(data: Mapping) -> Tuple[PointConfig, PointConfig, List[Frac]]:
    """JSON form: {"tau": [..], "D1": {"1": [0]}, "D2": {"1": [5]}}."""
    tau = [Frac(str(v)) for v in data.get("tau", [])]
    d1 = PointConfig.from_mapping(data.get("D1", {}))
    d2 = PointConfig.from_mapping(data.get("D2", {}))
    return d1, d2, tau
