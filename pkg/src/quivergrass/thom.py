"""Kernels of twisted cotangent extension correspondences on torus charts.

A flag type is a sequence of dimension vectors (v_1, ..., v_m).  Its
chart carries one block of coordinates x[g, i, s] per slot g and vertex
i, plus the dilation coordinates.  Every kernel is a product of
orientation factors of characters

    x[g', j, t] - x[g, i, s] + (dilation character),

assembled along one of two independent decompositions of the same
correspondence:

* the two-operator path: ``kernel_dstar_p`` (Levi-conormal factors with
  the symplectic twist, plus the filtration-lowering part of the doubled
  representation space) times ``kernel_tilde_q`` (the filtration-raising
  part, divided by the untwisted Levi factors);
* the one-pass path: ``appendix_b_kernel`` (conormal factors in their
  dual-resolved presentation, the full off-diagonal doubled block sweep,
  and the same inverse Levi factors).

The two paths must agree up to a unit, which ``crosscheck`` extracts and
reports.  Weight-zero characters (loops on a single slot) never divide:
their factors are treated as units and flagged on the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Frac
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .fgl import Character, FormalGroupLaw
from .quiver import (
    Arrow,
    DilationTorus,
    DimVector,
    NakajimaWeights,
    QuiverSpec,
    incidence_entry,
    incidence_form,
    star,
)
from .symalg import (
    MultiPoly,
    PoleError,
    RationalFunction,
    Variable,
    VarRegistry,
    d_var,
    rat_equal,
    x_var,
)

FlagType = Tuple[DimVector, ...]


class TorusChart:
    """Coordinates of a flag type: x[g, i, s] blocks plus dilation axes."""

    def __init__(self, quiver: QuiverSpec, flag: FlagType, dil_rank: int):
        self.quiver = quiver
        self.flag = tuple(dict(v) for v in flag)
        self.dil_rank = dil_rank
        xs: List[Variable] = []
        for g, block in enumerate(self.flag, start=1):
            for v in quiver.vertices:
                for s in range(1, block.get(v, 0) + 1):
                    xs.append(x_var(g, quiver.vpos[v], v, s))
        self.dvars: Tuple[Variable, ...] = tuple(d_var(k) for k in range(1, dil_rank + 1))
        self.registry = VarRegistry(xs + list(self.dvars))

    @property
    def slots(self) -> int:
        return len(self.flag)

    def dim(self, g: int, vertex: str) -> int:
        return self.flag[g - 1].get(vertex, 0)

    def x(self, g: int, vertex: str, s: int) -> Variable:
        return x_var(g, self.quiver.vpos[vertex], vertex, s)


@dataclass(frozen=True)
class FactorRecord:
    """One orientation factor with enough metadata to name it in reports."""

    family: str
    arrow: Optional[str]
    vertex: Optional[str]
    slots: Tuple[int, int]
    indices: Tuple[int, int]
    char: Character
    exponent: int

    def label(self) -> str:
        carrier = self.arrow if self.arrow is not None else self.vertex
        return f"{self.family}[{carrier}; slots {self.slots}; ({self.char})^{self.exponent}]"


@dataclass
class ThomKernel:
    """A kernel function together with its factor bookkeeping."""

    fn: RationalFunction
    chart: TorusChart
    records: List[Tuple[FactorRecord, RationalFunction]] = field(default_factory=list)
    zero_records: List[FactorRecord] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return bool(self.zero_records)


class KernelContext:
    """Quiver, weight function, dilation torus, and orientation backend."""

    def __init__(
        self,
        quiver: QuiverSpec,
        weights: NakajimaWeights,
        dilation: DilationTorus,
        law: FormalGroupLaw,
    ):
        self.quiver = quiver
        self.weights = dict(weights)
        self.dilation = dilation
        self.law = law

    # -- dilation characters (the d-axes are shared across all charts) --------

    def _dchar(self, rest: Sequence[int]) -> Character:
        return Character.make({d_var(k + 1): c for k, c in enumerate(rest)})

    def mu(self, aid: str) -> Character:
        if aid.endswith("*"):
            ambient = (0, self.weights[aid])
        else:
            ambient = (self.weights[aid], 0)
        return self._dchar(self.dilation.restrict(*ambient))

    def omega(self) -> Character:
        return self._dchar(self.dilation.restrict(1, 1))

    def chart(self, flag: FlagType) -> TorusChart:
        return TorusChart(self.quiver, flag, self.dilation.rank)

    # -- factor assembly ------------------------------------------------------

    def _emit(
        self,
        kernel: ThomKernel,
        family: str,
        arrow: Optional[str],
        vertex: Optional[str],
        g: int,
        gp: int,
        s: int,
        t: int,
        char: Character,
        exponent: int,
    ) -> None:
        rec = FactorRecord(family, arrow, vertex, (g, gp), (s, t), char, exponent)
        if char.is_zero():
            kernel.zero_records.append(rec)
            return
        lam = self.law.lambda_char(kernel.chart.registry, char)
        contribution = lam.pow(exponent)
        kernel.records.append((rec, contribution))
        kernel.fn = kernel.fn * contribution

    def _hom_block(
        self,
        kernel: ThomKernel,
        family: str,
        arrow: Optional[Arrow],
        vertex: Optional[str],
        g: int,
        gp: int,
        twist: Character,
        exponent: int,
    ) -> None:
        """Factors of Hom(slot-g block, slot-g' block) for one arrow or vertex."""
        chart = kernel.chart
        src_vertex = arrow.tail if arrow else vertex
        dst_vertex = arrow.head if arrow else vertex
        for s in range(1, chart.dim(g, src_vertex) + 1):
            for t in range(1, chart.dim(gp, dst_vertex) + 1):
                coeffs: Dict[Variable, int] = {}
                coeffs[chart.x(gp, dst_vertex, t)] = 1
                src = chart.x(g, src_vertex, s)
                coeffs[src] = coeffs.get(src, 0) - 1
                char = Character.make(coeffs).add(twist)
                self._emit(
                    kernel,
                    family,
                    arrow.aid if arrow else None,
                    None if arrow else vertex,
                    g,
                    gp,
                    s,
                    t,
                    char,
                    exponent,
                )

    def _new_kernel(self, chart: TorusChart) -> ThomKernel:
        return ThomKernel(RationalFunction.one(chart.registry), chart)

    # -- public operators ------------------------------------------------------

    def kernel_of_module(
        self,
        chart: TorusChart,
        blocks: Iterable[Tuple[Tuple[int, str], Tuple[int, str], Character, int]],
    ) -> ThomKernel:
        """Product over Hom blocks ((g, i), (g', j), twist, multiplicity)."""
        kernel = self._new_kernel(chart)
        for (g, i), (gp, j), twist, mult in blocks:
            for s in range(1, chart.dim(g, i) + 1):
                for t in range(1, chart.dim(gp, j) + 1):
                    coeffs: Dict[Variable, int] = {chart.x(gp, j, t): 1}
                    src = chart.x(g, i, s)
                    coeffs[src] = coeffs.get(src, 0) - 1
                    char = Character.make(coeffs).add(twist)
                    self._emit(kernel, "module", None, None, g, gp, s, t, char, mult)
        return kernel

    def kernel_dstar_p(self, flag: FlagType, chart: Optional[TorusChart] = None) -> ThomKernel:
        """Twisted conormal factors plus the filtration-lowering doubled blocks."""
        if not flag:
            raise ValueError("flag type must be nonempty")
        chart = chart or self.chart(flag)
        kernel = self._new_kernel(chart)
        omega = self.omega()
        m = chart.slots
        for g in range(1, m + 1):
            for gp in range(g + 1, m + 1):
                for v in self.quiver.vertices:
                    self._hom_block(kernel, "gp_omega", None, v, g, gp, omega, +1)
        for k in self.quiver.double:
            mu = self.mu(k.aid)
            for g in range(1, m + 1):
                for gp in range(1, g):
                    self._hom_block(kernel, "rep_lower", k, None, g, gp, mu, +1)
        return kernel

    def kernel_tilde_q(self, flag: FlagType, chart: Optional[TorusChart] = None) -> ThomKernel:
        """Filtration-raising doubled blocks over the untwisted conormal factors."""
        if not flag:
            raise ValueError("flag type must be nonempty")
        chart = chart or self.chart(flag)
        kernel = self._new_kernel(chart)
        m = chart.slots
        for k in self.quiver.double:
            mu = self.mu(k.aid)
            for g in range(1, m + 1):
                for gp in range(g + 1, m + 1):
                    self._hom_block(kernel, "rep_raise", k, None, g, gp, mu, +1)
        zero = Character.zero()
        for g in range(1, m + 1):
            for gp in range(g + 1, m + 1):
                for v in self.quiver.vertices:
                    self._hom_block(kernel, "gp_inv", None, v, g, gp, zero, -1)
        return kernel

    def flag_kernel(self, flag: FlagType, chart: Optional[TorusChart] = None) -> ThomKernel:
        """The full kernel of a flag type: both operators multiplied."""
        chart = chart or self.chart(flag)
        a = self.kernel_dstar_p(flag, chart)
        b = self.kernel_tilde_q(flag, chart)
        merged = ThomKernel(a.fn * b.fn, chart, a.records + b.records,
                            a.zero_records + b.zero_records)
        return merged

    def biextension_kernel(self, v1: DimVector, v2: DimVector) -> ThomKernel:
        return self.flag_kernel((v1, v2))

    def word_kernel(self, word: Sequence[str]) -> ThomKernel:
        """Kernel of the complete flag whose slots are the word's letters."""
        flag = tuple({v: (1 if v == letter else 0) for v in self.quiver.vertices}
                     for letter in word)
        if not flag:
            raise ValueError("empty word has no flag")
        return self.flag_kernel(flag)

    def appendix_b_kernel(self, flag: FlagType, chart: Optional[TorusChart] = None) -> ThomKernel:
        """Independent assembly: resolved conormal factors, one off-diagonal
        sweep of the doubled blocks, inverse untwisted conormal factors.

        Dual modules are resolved into the same presentation the
        two-operator path uses, so the comparison unit is an honest
        constant; the resolution is recorded on the factor families.
        """
        if not flag:
            raise ValueError("flag type must be nonempty")
        chart = chart or self.chart(flag)
        kernel = self._new_kernel(chart)
        omega = self.omega()
        m = chart.slots
        # Conormal directions of the partial-flag base, symplectic twist,
        # written in the dual-resolved (raising) presentation.
        for g in range(1, m + 1):
            for gp in range(g + 1, m + 1):
                for v in self.quiver.vertices:
                    self._hom_block(kernel, "iota_gp_omega", None, v, g, gp, omega, +1)
        # All off-diagonal blocks of the doubled representation space in a
        # single sweep over ordered slot pairs.
        for k in self.quiver.double:
            mu = self.mu(k.aid)
            for g in range(1, m + 1):
                for gp in range(1, m + 1):
                    if g == gp:
                        continue
                    self._hom_block(kernel, "psi_offdiag", k, None, g, gp, mu, +1)
        zero = Character.zero()
        for g in range(1, m + 1):
            for gp in range(g + 1, m + 1):
                for v in self.quiver.vertices:
                    self._hom_block(kernel, "psi_gp_inv", None, v, g, gp, zero, -1)
        return kernel

    # -- classical layer -----------------------------------------------------

    def classical_divisor(self, v: DimVector) -> "ClassicalDivisorReport":
        """Diagonal multiplicities of the plain representation-space kernel
        with the dilation coordinates at zero."""
        chart = self.chart((v,))
        kernel = self._new_kernel(chart)
        zero = Character.zero()
        for h in self.quiver.arrows:
            self._hom_block(kernel, "classical", h, None, 1, 1, zero, +1)
        counts: Dict[Tuple[str, str], int] = {}
        for h in self.quiver.arrows:
            i, j = h.tail, h.head
            if v.get(i, 0) == 0 or v.get(j, 0) == 0:
                continue
            key = (i, j) if self.quiver.vpos[i] <= self.quiver.vpos[j] else (j, i)
            counts[key] = counts.get(key, 0) + 1
        form = incidence_form(self.quiver)
        matches = {
            pair: (counts.get(pair, 0), form[pair])
            for pair in form
            if v.get(pair[0], 0) and v.get(pair[1], 0)
        }
        return ClassicalDivisorReport(kernel, counts, matches)


@dataclass
class ClassicalDivisorReport:
    kernel: ThomKernel
    multiplicities: Dict[Tuple[str, str], int]
    incidence_match: Dict[Tuple[str, str], Tuple[int, int]]

    @property
    def degenerate(self) -> bool:
        return self.kernel.degenerate

    @property
    def matches_incidence(self) -> bool:
        return all(got == want for got, want in self.incidence_match.values())


@dataclass
class CrossPathReport:
    flag: FlagType
    unit: Optional[RationalFunction]
    is_unit: bool
    main_fn: RationalFunction
    alt_fn: RationalFunction

    @property
    def ok(self) -> bool:
        return self.is_unit


def crosscheck(ctx: KernelContext, flag: FlagType) -> CrossPathReport:
    """Build the kernel along both decompositions and extract the unit."""
    chart = ctx.chart(flag)
    main = ctx.flag_kernel(flag, chart)
    alt = ctx.appendix_b_kernel(flag, chart)
    if main.fn.is_zero() or alt.fn.is_zero():
        both_zero = main.fn.is_zero() and alt.fn.is_zero()
        return CrossPathReport(flag, None, both_zero, main.fn, alt.fn)
    ratio = (alt.fn / main.fn).cancelled()
    if ratio.is_scalar() or ratio.is_monomial_unit():
        return CrossPathReport(flag, ratio, True, main.fn, alt.fn)
    return CrossPathReport(flag, ratio, False, main.fn, alt.fn)


def evaluate_kernel(
    kernel: ThomKernel, assignment: Mapping[Variable, Frac]
) -> Tuple[Optional[Frac], List[Tuple[str, FactorRecord]]]:
    """Evaluate factor by factor; report vanishing and polar factors.

    Returns (value, culprits).  value is None when a pole occurs; a zero
    value comes with the vanishing factors named.
    """
    culprits: List[Tuple[str, FactorRecord]] = []
    total = Frac(1)
    pole = False
    for rec, contribution in kernel.records:
        try:
            val = contribution.evaluate(assignment)
        except PoleError:
            culprits.append(("pole", rec))
            pole = True
            continue
        if val == 0:
            culprits.append(("zero", rec))
        total *= val
    if pole:
        return None, culprits
    return total, culprits
