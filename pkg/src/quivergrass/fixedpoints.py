"""Lattice-model enumeration, colored subscheme counts, and the
Grassmannian fixed-scheme oracle.

Three mechanical layers cross-validate each other:

* ``sl2_enumerate`` lists comonic Laurent candidates over a truncated
  nilpotent ring, tests membership two ways (windowed lattice division
  vs polynomial degree/divisibility), and reports the bijection with
  monic polynomials with nilpotent coefficients;
* ``gaussian_binomial`` / ``quiver_grass_poincare`` give the closed-form
  graded counts;
* ``carell_dim`` presents the fixed scheme of a principal nilpotent on a
  Grassmannian by explicit chart equations and counts standard
  monomials with a small Buchberger engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Frac
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .symalg import (
    MultiPoly,
    RationalFunction,
    SymalgError,
    Variable,
    VarRegistry,
    aux_var,
    _monomial_key,
)


class WindowOverflowError(SymalgError):
    """A Laurent computation escaped the coordinate window."""


class DegreeOverflowError(SymalgError):
    """A request exceeded the supported desk-scale bounds."""


# ---------------------------------------------------------------------------
# Truncated nilpotent coefficient rings F_p[eps]/(eps^e)
# ---------------------------------------------------------------------------

class TruncatedRing:
    """F_p[eps]/(eps^e); elements are length-e tuples of residues."""

    def __init__(self, p: int, e: int):
        if p < 2 or any(p % k == 0 for k in range(2, p)):
            raise ValueError("p must be prime")
        if e < 1:
            raise ValueError("e must be positive")
        self.p = p
        self.e = e

    def zero(self) -> Tuple[int, ...]:
        return (0,) * self.e

    def one(self) -> Tuple[int, ...]:
        return (1,) + (0,) * (self.e - 1)

    def add(self, a, b) -> Tuple[int, ...]:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a) -> Tuple[int, ...]:
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b) -> Tuple[int, ...]:
        out = [0] * self.e
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if i + j >= self.e:
                    break
                out[i + j] = (out[i + j] + x * y) % self.p
        return tuple(out)

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def is_nilpotent(self, a) -> bool:
        return a[0] == 0

    def is_unit(self, a) -> bool:
        return a[0] != 0

    def inverse(self, a) -> Tuple[int, ...]:
        if not self.is_unit(a):
            raise ZeroDivisionError("not a unit in the truncated ring")
        c0_inv = pow(a[0], -1, self.p)
        # Geometric series against the nilpotent tail.
        tail = tuple((-(x * c0_inv)) % self.p for x in a)
        tail = (0,) + tail[1:]
        inv = self.one()
        power = self.one()
        for _ in range(1, self.e):
            power = self.mul(power, tail)
            inv = self.add(inv, power)
        return tuple((x * c0_inv) % self.p for x in inv)

    def elements(self) -> List[Tuple[int, ...]]:
        return [tuple(t) for t in itertools.product(range(self.p), repeat=self.e)]

    def nilpotents(self) -> List[Tuple[int, ...]]:
        return [t for t in self.elements() if t[0] == 0]

    def __repr__(self) -> str:
        return f"TruncatedRing(p={self.p}, e={self.e})"


class ZWindow:
    """Laurent polynomials over a truncated ring within powers [-N, N]."""

    def __init__(self, ring: TruncatedRing, window: int, coeffs: Mapping[int, Tuple[int, ...]]):
        self.ring = ring
        self.window = window
        self.coeffs: Dict[int, Tuple[int, ...]] = {}
        for k, c in coeffs.items():
            if ring.is_zero(c):
                continue
            if abs(k) > window:
                raise WindowOverflowError(f"power z^{k} escapes the window +-{window}")
            self.coeffs[k] = tuple(c)

    def is_zero(self) -> bool:
        return not self.coeffs

    def in_disc(self) -> bool:
        """No negative powers (lies in the Taylor part)."""
        return all(k >= 0 for k in self.coeffs)

    def add(self, other: "ZWindow") -> "ZWindow":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = self.ring.add(out.get(k, self.ring.zero()), c)
        return ZWindow(self.ring, self.window, out)

    def mul(self, other: "ZWindow") -> "ZWindow":
        out: Dict[int, Tuple[int, ...]] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                prod = self.ring.mul(a, b)
                if self.ring.is_zero(prod):
                    continue
                k = i + j
                out[k] = self.ring.add(out.get(k, self.ring.zero()), prod)
        return ZWindow(self.ring, self.window, out)

    def scale_z(self, power: int) -> "ZWindow":
        return ZWindow(self.ring, self.window, {k + power: c for k, c in self.coeffs.items()})

    def __repr__(self) -> str:
        bits = []
        for k in sorted(self.coeffs):
            bits.append(f"z^{k}*{self.coeffs[k]}")
        return " + ".join(bits) or "0"


def comonic_inverse(ring: TruncatedRing, q: ZWindow) -> ZWindow:
    """Inverse of 1 + (nilpotent tail): 1/(1+t) = sum (-t)^j, which
    terminates because products of e nilpotent coefficients vanish."""
    one = ZWindow(ring, q.window, {0: ring.one()})
    tail = q.add(ZWindow(ring, q.window, {0: ring.neg(ring.one())}))  # q - 1
    for _, c in tail.coeffs.items():
        if not ring.is_nilpotent(c):
            raise ValueError("tail coefficients must be nilpotent")
    minus_t = ZWindow(ring, q.window, {k: ring.neg(c) for k, c in tail.coeffs.items()})
    inv = one
    power = one
    for _ in range(1, ring.e):
        power = power.mul(minus_t)
        inv = inv.add(power)
    return inv


@dataclass
class LatticePoint:
    """Rank-two lattice spanned by Q^-1 z^-n e1 and Q z^n e2."""

    ring: TruncatedRing
    n: int
    q_poly: ZWindow          # Q, comonic in z^-1
    q_inv: ZWindow

    @property
    def volume(self) -> int:
        return 0

    def contains_e1_power(self, k: int) -> bool:
        """Is z^k e1 in the lattice?  Divide by the generator: z^k * (z^n Q)."""
        probe = self.q_poly.scale_z(self.n + k)
        return probe.in_disc()

    def contains_e2_power(self, k: int) -> bool:
        """Is z^k e2 in the lattice?  z^k * (z^n Q)^-1 = z^(k-n) Q^-1."""
        probe = self.q_inv.scale_z(k - self.n)
        return probe.in_disc()


@dataclass
class Sl2Candidate:
    tail: Tuple[Tuple[int, ...], ...]  # q_1 .. q_s
    in_s0_lattice: bool
    in_s0_oracle: bool
    monic_poly: Optional[Tuple[Tuple[int, ...], ...]]  # coefficients of z^n Q if in s0
    in_sminus_lattice: Optional[bool] = None
    in_sminus_oracle: Optional[bool] = None


@dataclass
class Sl2Report:
    p: int
    e: int
    n: int
    window: int
    m: Optional[int]
    candidates: List[Sl2Candidate]
    s0_count: int
    s0_expected: int
    sminus_count: Optional[int]
    routes_agree: bool

    @property
    def bijection_ok(self) -> bool:
        return self.s0_count == self.s0_expected and self.routes_agree


def _poly_divides_zm(ring: TruncatedRing, coeffs: Sequence[Tuple[int, ...]], m: int) -> bool:
    """Does the monic polynomial P (coeffs low..high, top == 1) divide z^m?

    Long division of z^m by P over the truncated ring; exact iff the
    remainder vanishes.
    """
    n = len(coeffs) - 1
    if m < n:
        return n == 0
    rem: Dict[int, Tuple[int, ...]] = {m: ring.one()}
    for deg in range(m, n - 1, -1):
        c = rem.get(deg)
        if c is None or ring.is_zero(c):
            continue
        # subtract c * z^(deg-n) * P
        for i, pc in enumerate(coeffs):
            k = deg - n + i
            delta = ring.mul(c, pc)
            rem[k] = ring.add(rem.get(k, ring.zero()), ring.neg(delta))
    return all(ring.is_zero(c) for d, c in rem.items() if d < n)


def sl2_enumerate(
    p: int, e: int, n: int, window: int, m: Optional[int] = None
) -> Sl2Report:
    """Enumerate comonic candidates and test the membership conditions
    along two independent routes."""
    if e < 2:
        raise ValueError("nilpotency order e must be at least 2")
    if window < n + e:
        raise WindowOverflowError(f"window {window} too small; need at least n + e = {n + e}")
    if m is not None and window < m + e:
        raise WindowOverflowError(f"window {window} too small for the z^{m} probe")
    ring = TruncatedRing(p, e)
    smax = window - n
    nils = ring.nilpotents()
    states = len(nils) ** smax
    if states > 2 ** 16:
        raise DegreeOverflowError(f"{states} candidate states exceed the exhaustive budget")

    candidates: List[Sl2Candidate] = []
    for tail in itertools.product(nils, repeat=smax):
        q = ZWindow(ring, window, {0: ring.one(), **{-i: c for i, c in enumerate(tail, start=1)}})
        q_inv = comonic_inverse(ring, q)
        lattice = LatticePoint(ring, n, q, q_inv)
        in_s0_lat = lattice.contains_e1_power(0)
        in_s0_orc = all(ring.is_zero(c) for c in tail[n:])
        monic = None
        cand = Sl2Candidate(tail, in_s0_lat, in_s0_orc, monic)
        if in_s0_orc:
            # z^n Q = z^n + q_1 z^(n-1) + ... + q_n; low-to-high coefficients.
            coeffs = [ring.zero()] * (n + 1)
            coeffs[n] = ring.one()
            for i, c in enumerate(tail[:n], start=1):
                coeffs[n - i] = c
            cand.monic_poly = tuple(coeffs)
            if m is not None:
                cand.in_sminus_lattice = lattice.contains_e2_power(m)
                cand.in_sminus_oracle = _poly_divides_zm(ring, coeffs, m)
        candidates.append(cand)

    s0_count = sum(1 for c in candidates if c.in_s0_lattice)
    s0_expected = len(nils) ** min(n, smax)
    routes = all(c.in_s0_lattice == c.in_s0_oracle for c in candidates)
    sminus_count = None
    if m is not None:
        routes = routes and all(
            c.in_sminus_lattice == c.in_sminus_oracle
            for c in candidates
            if c.monic_poly is not None
        )
        sminus_count = sum(
            1 for c in candidates if c.monic_poly is not None and c.in_sminus_lattice
        )
    return Sl2Report(p, e, n, window, m, candidates, s0_count, s0_expected, sminus_count, routes)


# ---------------------------------------------------------------------------
# Colored subscheme lattices
# ---------------------------------------------------------------------------

@dataclass
class ColoredSubschemeLattice:
    """Product of chains {0..alpha_i}, graded by the sub-dimension vector."""

    alpha: Dict[str, int]
    elements: List[Dict[str, int]]

    @property
    def total(self) -> int:
        return len(self.elements)

    def count_at(self, beta: Mapping[str, int]) -> int:
        return sum(1 for e in self.elements if all(e[k] == beta.get(k, 0) for k in e))

    def grade_counts(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for e in self.elements:
            g = sum(e.values())
            out[g] = out.get(g, 0) + 1
        return out


def hilbert_colored(alpha: Mapping[str, int]) -> ColoredSubschemeLattice:
    colors = sorted(alpha)
    ranges = [range(alpha[c] + 1) for c in colors]
    elements = [dict(zip(colors, combo)) for combo in itertools.product(*ranges)]
    return ColoredSubschemeLattice(dict(alpha), elements)


# ---------------------------------------------------------------------------
# q-polynomials
# ---------------------------------------------------------------------------

QPoly = List[int]  # dense coefficients, low degree first


def qpoly_mul(a: QPoly, b: QPoly) -> QPoly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def qpoly_add(a: QPoly, b: QPoly) -> QPoly:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _qpoly_div_exact(a: QPoly, b: QPoly) -> QPoly:
    rem = list(a)
    out = [0] * (len(rem) - len(b) + 1)
    for top in range(len(rem) - 1, len(b) - 2, -1):
        c = rem[top]
        if c == 0:
            continue
        assert b[-1] != 0
        k = top - (len(b) - 1)
        qc, r = divmod(c, b[-1])
        if r:
            raise SymalgError("inexact q-polynomial division")
        out[k] = qc
        for i, bc in enumerate(b):
            rem[k + i] -= qc * bc
    if any(rem[: len(b) - 1]):
        raise SymalgError("inexact q-polynomial division")
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def gaussian_binomial(n: int, k: int) -> QPoly:
    """The q-binomial coefficient as an integer polynomial in q."""
    if k < 0 or k > n:
        raise ValueError("binomial index out of range")
    result: QPoly = [1]
    for i in range(1, k + 1):
        top = [1] + [0] * (n - k + i - 1) + [-1]   # 1 - q^(n-k+i)
        bot = [1] + [0] * (i - 1) + [-1]           # 1 - q^i
        result = _qpoly_div_exact(qpoly_mul(result, [-c for c in top]), [-c for c in bot])
    return result


def qpoly_eval(a: QPoly, q: int) -> int:
    return sum(c * q ** i for i, c in enumerate(a))


def quiver_grass_poincare(alpha: Mapping[str, int]) -> QPoly:
    """Graded point count of the product of total Grassmannians attached
    to the zero representation of the given dimension."""
    out: QPoly = [1]
    for _, a in sorted(alpha.items()):
        total: QPoly = [0]
        for p in range(a + 1):
            total = qpoly_add(total, gaussian_binomial(a, p))
        out = qpoly_mul(out, total)
    return out


def qpoly_str(a: QPoly) -> str:
    bits = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        if i == 0:
            bits.append(str(c))
        elif i == 1:
            bits.append("q" if c == 1 else f"{c}*q")
        else:
            bits.append(f"q^{i}" if c == 1 else f"{c}*q^{i}")
    return " + ".join(bits).replace("+ -", "- ") or "0"


# ---------------------------------------------------------------------------
# Buchberger engine and the fixed-scheme chart
# ---------------------------------------------------------------------------

def _unpacked_leading(f: MultiPoly) -> Tuple[Tuple[int, ...], Frac]:
    k, c = f.leading()
    return f.registry.unpack(k), c


def _spoly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    fe, fc = _unpacked_leading(f)
    ge, gc = _unpacked_leading(g)
    lcm = tuple(max(a, b) for a, b in zip(fe, ge))
    mf = MultiPoly(f.registry, {tuple(l - a for l, a in zip(lcm, fe)): Frac(1) / Frac(fc)})
    mg = MultiPoly(g.registry, {tuple(l - b for l, b in zip(lcm, ge)): Frac(1) / Frac(gc)})
    return mf * f - mg * g


def _reduce(f: MultiPoly, basis: Sequence[MultiPoly]) -> MultiPoly:
    lead = [(_unpacked_leading(g)[0], _unpacked_leading(g)[1], g) for g in basis]
    rem = MultiPoly.zero(f.registry)
    work = f
    reg = f.registry
    while not work.is_zero():
        e, c = _unpacked_leading(work)
        hit = None
        for ge, gc, g in lead:
            if all(a >= b for a, b in zip(e, ge)):
                hit = (ge, gc, g)
                break
        if hit is None:
            term = MultiPoly(reg, {e: c})
            rem = rem + term
            work = work - term
        else:
            ge, gc, g = hit
            mono = MultiPoly(reg, {tuple(a - b for a, b in zip(e, ge)): Frac(c) / Frac(gc)})
            work = work - mono * g
    return rem


def buchberger(gens: Sequence[MultiPoly]) -> List[MultiPoly]:
    basis = [g for g in gens if not g.is_zero()]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        i, j = pairs.pop()
        fe, _ = _unpacked_leading(basis[i])
        ge, _ = _unpacked_leading(basis[j])
        if all(min(a, b) == 0 for a, b in zip(fe, ge)):
            continue  # coprime leading monomials reduce to zero
        s = _reduce(_spoly(basis[i], basis[j]), basis)
        if s.is_zero():
            continue
        basis.append(s)
        pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis


def standard_monomials(
    basis: Sequence[MultiPoly], nvars: int, cap: int = 4096
) -> List[Tuple[int, ...]]:
    """Monomials outside the leading-term ideal, by breadth-first degree."""
    leads = [_unpacked_leading(g)[0] for g in basis if not g.is_zero()]

    def divisible(e: Tuple[int, ...]) -> bool:
        return any(all(a >= b for a, b in zip(e, le)) for le in leads)

    out: List[Tuple[int, ...]] = []
    frontier = [(0,) * nvars]
    seen: Set[Tuple[int, ...]] = set(frontier)
    while frontier:
        new_frontier = []
        for e in frontier:
            if divisible(e):
                continue
            out.append(e)
            if len(out) > cap:
                raise DegreeOverflowError("standard-monomial staircase exceeds the cap")
            for k in range(nvars):
                ne = tuple(x + (1 if i == k else 0) for i, x in enumerate(e))
                if ne not in seen:
                    seen.add(ne)
                    new_frontier.append(ne)
        frontier = new_frontier
    return out


@dataclass
class CarellChart:
    n: int
    p: int
    variables: List[Variable]
    weights: Dict[Variable, int]
    equations: List[MultiPoly]
    standard: List[Tuple[int, ...]]

    @property
    def dimension(self) -> int:
        return len(self.standard)

    def weight_series(self) -> QPoly:
        if not self.variables:
            return [1]
        wts = [self.weights[v] for v in self.variables]
        counts: Dict[int, int] = {}
        for mono in self.standard:
            w = sum(e * wt for e, wt in zip(mono, wts))
            counts[w] = counts.get(w, 0) + 1
        out = [0] * (max(counts) + 1)
        for w, c in counts.items():
            out[w] = c
        return out


def _nilpotent_move(subset: Tuple[int, ...], n: int) -> List[Tuple[int, ...]]:
    """Images of a wedge basis vector under the principal nilpotent.

    Basis lines are indexed 1..n; the operator sends line i to line i+1
    (and kills line n).  Replacing i by i+1 in a sorted subset keeps the
    order, so every surviving image has coefficient +1.
    """
    out = []
    s = set(subset)
    for i in subset:
        if i == n or (i + 1) in s:
            continue
        out.append(tuple(sorted(s - {i} | {i + 1})))
    return out


def carell_chart(n: int, p: int) -> CarellChart:
    """Chart equations of the fixed scheme of the principal nilpotent at
    its unique fixed point, with the loop-rotation weights."""
    if n > 4:
        raise DegreeOverflowError("the fixed-scheme oracle is bounded at n <= 4")
    if p < 0 or p > n:
        raise ValueError("subspace dimension out of range")
    subsets = [tuple(s) for s in itertools.combinations(range(1, n + 1), p)]
    top = tuple(range(n - p + 1, n + 1))
    others = [s for s in subsets if s != top]
    if not others:
        return CarellChart(n, p, [], {}, [], [()])
    variables = [aux_var("w" + "".join(map(str, s)), i + 1) for i, s in enumerate(others)]
    var_of = dict(zip(others, variables))
    reg = VarRegistry(variables, keep_order=True)

    def w(subset: Tuple[int, ...]) -> MultiPoly:
        if subset == top:
            return MultiPoly.const(reg, 1)
        return MultiPoly.var(reg, var_of[subset])

    # (e.w)_T = sum over S with a move S -> T of w_S.
    image: Dict[Tuple[int, ...], MultiPoly] = {s: MultiPoly.zero(reg) for s in subsets}
    for s in subsets:
        for t in _nilpotent_move(s, n):
            image[t] = image[t] + w(s)
    scale = image[top]
    equations: List[MultiPoly] = []
    for s in others:
        equations.append(image[s] - scale * w(s))
    # Chart form of the quadratic coordinate relations (only n=4, p=2 has one).
    if n == 4 and p == 2:
        rel = w((1, 2)) * w((3, 4)) - w((1, 3)) * w((2, 4)) + w((1, 4)) * w((2, 3))
        equations.append(rel)
    basis = buchberger(equations)
    std = standard_monomials(basis, len(variables))
    weights = {
        var_of[s]: sum(i - 1 for i in top) - sum(i - 1 for i in s) for s in others
    }
    return CarellChart(n, p, variables, weights, equations, std)


def carell_dim(n: int, p: int) -> int:
    return carell_chart(n, p).dimension


def count_truncated_solutions(chart: CarellChart, ring: TruncatedRing) -> int:
    """Points of the chart over a truncated nilpotent ring, brute force.

    Chart variables range over the nilradical (the chart is centered at
    the unique fixed point).  This bridges the Grassmannian fixed-scheme
    presentation and the lattice-model enumeration: the two must count
    the same sets.
    """
    nils = ring.nilpotents()
    if len(nils) ** len(chart.variables) > 2 ** 16:
        raise DegreeOverflowError("too many candidate points for brute force")

    def eval_poly(poly: MultiPoly, assignment) -> Tuple[int, ...]:
        total = ring.zero()
        for exps, coeff in poly.items_unpacked():
            if coeff.denominator != 1:
                raise SymalgError("chart equation with non-integer coefficient")
            c = coeff.numerator % ring.p
            term = (c,) + (0,) * (ring.e - 1)
            for val, e in zip(assignment, exps):
                for _ in range(e):
                    term = ring.mul(term, val)
            total = ring.add(total, term)
        return total

    count = 0
    for assignment in itertools.product(nils, repeat=len(chart.variables)):
        if all(ring.is_zero(eval_poly(eq, assignment)) for eq in chart.equations):
            count += 1
    return count
