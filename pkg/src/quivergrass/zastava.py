"""Poset induction over colored divisors: subscheme lattices, monotone
maps, fiber ranks, and product-coordinate data at generic configurations.

The rank layer is pure order combinatorics.  The value layer attaches to
every monotone system of subdivisors the product of evaluated pair
kernels inside each member, normalized so the empty system has value 1;
factorization over disjoint supports is checked exactly through the
canonical pair-kernel trivialization scalars.  Only configurations with
pairwise distinct points enter the value layer; collisions are the
business of the single experimental flat-limit routine at the end.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction as Frac
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple

from .locality import TauPoint, is_m_tau_disjoint, PointConfig
from .symalg import (
    MultiPoly,
    RationalFunction,
    SymalgError,
    Variable,
    VarRegistry,
    aux_var,
)
from .thom import KernelContext


class NonGenericError(SymalgError):
    """The configuration violates the genericity the value layer needs."""


class PosetFormatError(SymalgError):
    """Malformed poset description."""


class Poset:
    """Finite poset: elements plus the reflexive-transitive closure."""

    def __init__(self, elements: Sequence[str], relations: Sequence[Tuple[str, str]]):
        self.elements: Tuple[str, ...] = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetFormatError("duplicate poset elements")
        idx = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        leq = [[False] * n for _ in range(n)]
        for i in range(n):
            leq[i][i] = True
        for a, b in relations:
            if a not in idx or b not in idx:
                raise PosetFormatError(f"relation uses unknown element ({a}, {b})")
            leq[idx[a]][idx[b]] = True
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    row_k = leq[k]
                    row_i = leq[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise PosetFormatError("relation closure violates antisymmetry")
        self._idx = idx
        self._leq = leq

    def leq(self, a: str, b: str) -> bool:
        return self._leq[self._idx[a]][self._idx[b]]

    def __len__(self) -> int:
        return len(self.elements)

    @staticmethod
    def chain(m: int) -> "Poset":
        if m < 1:
            raise PosetFormatError("chain length must be positive")
        els = [f"p{i}" for i in range(1, m + 1)]
        rels = [(els[i], els[i + 1]) for i in range(m - 1)]
        return Poset(els, rels)

    @staticmethod
    def antichain(k: int) -> "Poset":
        if k < 1:
            raise PosetFormatError("antichain size must be positive")
        return Poset([f"p{i}" for i in range(1, k + 1)], [])

    @staticmethod
    def parse(spec: str) -> "Poset":
        """DSL: chain:m | antichain:k | a JSON file path with
        {"elements": [...], "relations": [[a, b], ...]}."""
        if spec.startswith("chain:"):
            return Poset.chain(int(spec.split(":", 1)[1]))
        if spec.startswith("antichain:"):
            return Poset.antichain(int(spec.split(":", 1)[1]))
        with open(spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return Poset(
            [str(e) for e in data["elements"]],
            [(str(a), str(b)) for a, b in data.get("relations", [])],
        )


@dataclass(frozen=True)
class DivisorPoint:
    pid: str
    color: str
    multiplicity: int


@dataclass
class ColoredDivisor:
    points: List[DivisorPoint]
    coords: Dict[str, Frac] = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for pt in self.points:
            key = (pt.pid, pt.color)
            if key in seen:
                raise PosetFormatError(f"duplicate divisor point {key}")
            seen.add(key)
            if pt.multiplicity < 1:
                raise PosetFormatError("multiplicities must be at least 1")

    @staticmethod
    def parse(spec: str) -> "ColoredDivisor":
        """Comma list of id:color:multiplicity entries."""
        pts = []
        if spec.strip():
            for chunk in spec.split(","):
                pid, color, mult = chunk.strip().split(":")
                pts.append(DivisorPoint(pid, color, int(mult)))
        return ColoredDivisor(pts)

    def weight(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for pt in self.points:
            out[pt.color] = out.get(pt.color, 0) + pt.multiplicity
        return out


SubMultiplicity = Tuple[Tuple[str, int], ...]  # ((pid, k), ...) sorted by pid


def subscheme_lattice(divisor: ColoredDivisor) -> List[SubMultiplicity]:
    """All subdivisors as sub-multiplicity tuples; a product of chains."""
    pids = sorted(pt.pid for pt in divisor.points)
    ranges = {pt.pid: range(pt.multiplicity + 1) for pt in divisor.points}
    out = []
    for combo in itertools.product(*(ranges[p] for p in pids)):
        out.append(tuple(zip(pids, combo)))
    return out


def sub_leq(a: SubMultiplicity, b: SubMultiplicity) -> bool:
    return all(ka <= kb for (_, ka), (_, kb) in zip(a, b))


def monotone_maps(poset: Poset, divisor: ColoredDivisor) -> List[Dict[str, SubMultiplicity]]:
    lattice = subscheme_lattice(divisor)
    out: List[Dict[str, SubMultiplicity]] = []
    els = poset.elements

    def rec(k: int, assignment: Dict[str, SubMultiplicity]):
        if k == len(els):
            out.append(dict(assignment))
            return
        e = els[k]
        for candidate in lattice:
            ok = True
            for other, val in assignment.items():
                if poset.leq(other, e) and not sub_leq(val, candidate):
                    ok = False
                    break
                if poset.leq(e, other) and not sub_leq(candidate, val):
                    ok = False
                    break
            if ok:
                assignment[e] = candidate
                rec(k + 1, assignment)
                del assignment[e]

    rec(0, {})
    return out


def ind_rank(poset: Poset, divisor: ColoredDivisor) -> int:
    return len(monotone_maps(poset, divisor))


# ---------------------------------------------------------------------------
# Value layer
# ---------------------------------------------------------------------------

def pair_value(
    ctx: KernelContext,
    u: DivisorPoint,
    v: DivisorPoint,
    coords: Mapping[str, Frac],
    tau: TauPoint,
) -> Frac:
    """Evaluated pair kernel of two single points, in id order."""
    first, second = sorted((u, v), key=lambda p: p.pid)
    v1 = {c: (1 if c == first.color else 0) for c in ctx.quiver.vertices}
    v2 = {c: (1 if c == second.color else 0) for c in ctx.quiver.vertices}
    kernel = ctx.biextension_kernel(v1, v2)
    assignment: Dict[Variable, Frac] = dict(tau)
    assignment[kernel.chart.x(1, first.color, 1)] = Frac(coords[first.pid])
    assignment[kernel.chart.x(2, second.color, 1)] = Frac(coords[second.pid])
    return kernel.fn.evaluate(assignment)


@dataclass
class IndFiberData:
    poset: Poset
    divisor: ColoredDivisor
    maps: List[Dict[str, SubMultiplicity]]
    values: List[Frac]

    @property
    def rank(self) -> int:
        return len(self.maps)


def _sub_points(divisor: ColoredDivisor, sub: SubMultiplicity) -> List[DivisorPoint]:
    by_pid = {pt.pid: pt for pt in divisor.points}
    return [by_pid[pid] for pid, k in sub if k == 1]


def ind_fiber(
    ctx: KernelContext,
    poset: Poset,
    divisor: ColoredDivisor,
    tau: TauPoint,
) -> IndFiberData:
    """Coordinates of the product-of-particles point over the subdivisor
    basis: each monotone system maps to the product over its members of
    the within-member pair-kernel values (empty system = 1)."""
    if any(pt.multiplicity != 1 for pt in divisor.points):
        raise NonGenericError("the value layer needs multiplicity-one points")
    missing = [pt.pid for pt in divisor.points if pt.pid not in divisor.coords]
    if missing:
        raise NonGenericError(f"points without coordinates: {missing}")
    pts = divisor.points
    for a, b in itertools.combinations(pts, 2):
        cfg_a = PointConfig({a.color: [divisor.coords[a.pid]]})
        cfg_b = PointConfig({b.color: [divisor.coords[b.pid]]})
        if not is_m_tau_disjoint(ctx, cfg_a, cfg_b, tau):
            raise NonGenericError(f"points {a.pid}, {b.pid} collide under the shifts")

    maps = monotone_maps(poset, divisor)
    values: List[Frac] = []
    for system in maps:
        total = Frac(1)
        for element in poset.elements:
            members = _sub_points(divisor, system[element])
            for u, v in itertools.combinations(members, 2):
                total *= pair_value(ctx, u, v, divisor.coords, tau)
        values.append(total)
    return IndFiberData(poset, divisor, maps, values)


@dataclass
class FactorizationReport:
    rank_product_ok: bool
    lines: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return self.rank_product_ok and all(flag for _, flag in self.lines)


def generic_fiber_factorization(
    ctx: KernelContext,
    poset: Poset,
    left: ColoredDivisor,
    right: ColoredDivisor,
    tau: TauPoint,
) -> FactorizationReport:
    """Exact factorization of the fiber data over a disjoint union.

    The coordinate of a combined system equals the product of the two
    restricted coordinates times the pair-kernel trivialization scalar
    between the two halves, member by member.
    """
    if {p.pid for p in left.points} & {p.pid for p in right.points}:
        raise NonGenericError("supports must use distinct point ids")
    combined = ColoredDivisor(
        left.points + right.points, {**left.coords, **right.coords}
    )
    fiber = ind_fiber(ctx, poset, combined, tau)
    fl = ind_fiber(ctx, poset, left, tau)
    fr = ind_fiber(ctx, poset, right, tau)

    def restrict(system: Dict[str, SubMultiplicity], ids: FrozenSet[str]):
        return {
            e: tuple((pid, k) for pid, k in sub if pid in ids)
            for e, sub in system.items()
        }

    left_ids = frozenset(p.pid for p in left.points)
    right_ids = frozenset(p.pid for p in right.points)
    index_l = {tuple(sorted(m.items())): v for m, v in zip(fl.maps, fl.values)}
    index_r = {tuple(sorted(m.items())): v for m, v in zip(fr.maps, fr.values)}

    lines: List[Tuple[str, bool]] = []
    for system, value in zip(fiber.maps, fiber.values):
        ml = restrict(system, left_ids)
        mr = restrict(system, right_ids)
        vl = index_l[tuple(sorted(ml.items()))]
        vr = index_r[tuple(sorted(mr.items()))]
        cross = Frac(1)
        for element in poset.elements:
            members_l = _sub_points(combined, system[element])
            pick_l = [p for p in members_l if p.pid in left_ids]
            pick_r = [p for p in members_l if p.pid in right_ids]
            for u in pick_l:
                for v in pick_r:
                    cross *= pair_value(ctx, u, v, combined.coords, tau)
        ok = value == vl * vr * cross
        label = ";".join(
            f"{e}:{'+'.join(pid for pid, k in sub if k)}" for e, sub in sorted(system.items())
        )
        lines.append((label or "empty", ok))
    rank_ok = fiber.rank == fl.rank * fr.rank
    return FactorizationReport(rank_ok, lines)


# ---------------------------------------------------------------------------
# Experimental flat limit for two colliding same-color particles
# ---------------------------------------------------------------------------

@dataclass
class FlatLimitReport:
    segre_coordinates: List[str]
    limit_point: List[Frac]
    on_segre_quadric: bool
    off_product_chart: bool


def flat_limit_two_points(ctx: KernelContext, tau: TauPoint) -> FlatLimitReport:
    """One-parameter family of product points at coordinates (0, eps) on a
    single color, pushed to its limit at eps = 0.

    The four subdivisor coordinates (1, 1, 1, pair kernel) are cleared of
    denominators, divided by the common parameter power, and read at
    eps = 0.  The output is reported, not asserted, beyond lying on the
    product quadric.
    """
    if len(ctx.quiver.vertices) != 1:
        raise NonGenericError("the flat-limit routine is a single-color experiment")
    color = ctx.quiver.vertices[0]
    eps = aux_var("eps", 1)
    kernel = ctx.biextension_kernel({color: 1}, {color: 1})
    reg = kernel.chart.registry
    target = VarRegistry([eps] + list(kernel.chart.dvars))
    zero_sub = {kernel.chart.x(1, color, 1): Frac(0)}
    fn = kernel.fn.substitute(zero_sub).substitute(tau)
    fn = fn.rename({v: eps for v in reg.variables if v.role == "x"}, target)

    one = RationalFunction.one(target)
    coords = [one, one, one, fn]
    denom = fn.denominator()
    cleared = [c.numerator() * (denom if i < 3 else MultiPoly.const(target, 1))
               for i, c in enumerate(coords)]
    cleared[3] = fn.numerator()
    # strip the common eps power
    def eps_valuation(p: MultiPoly) -> int:
        if p.is_zero():
            return 10 ** 9
        pos = target.index(eps)
        return min(exps[pos] for exps, _ in p.items_unpacked())

    val = min(eps_valuation(p) for p in cleared)
    if val:
        shift = MultiPoly(target, {tuple(
            val if v == eps else 0 for v in target.variables
        ): Frac(1)})
        cleared = [p.divide_exact(shift) or p for p in cleared]
    at_zero = [p.substitute({eps: Frac(0)}).constant_value() for p in cleared]
    quad = at_zero[0] * at_zero[3] == at_zero[1] * at_zero[2]
    return FlatLimitReport(
        [repr(p) for p in cleared], at_zero, quad, at_zero[0] == 0
    )
