"""Formal group backends and the orientation map on torus characters.

Three backends realize the coordinate of the one-dimensional group that
drives every kernel factor:

* additive  -- exact; a character maps to its linear form.
* multiplicative -- exact; the registry variables are read as the
  exponentiated coordinates X_v, and a character sum(n_v * v) maps to
  1 - prod X_v^(-n_v), stored in factored form with non-negative
  exponents.
* series(F, N) -- a truncated law F(u,v) = u + v + sum a_ij u^i v^j;
  a character maps to the F-combination of its coordinates truncated at
  total degree N.

Values are immutable; a law can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Frac
from typing import Dict, Mapping, Tuple

from .symalg import (
    MultiPoly,
    RationalFunction,
    SymalgError,
    Variable,
    VarRegistry,
    aux_var,
)

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
SERIES = "series"


class TruncationOverflowError(SymalgError):
    """Raised when a series-backend computation exceeds safe bounds."""


@dataclass(frozen=True)
class Character:
    """Integer combination of torus coordinates and dilation coordinates."""

    coeffs: Tuple[Tuple[Variable, int], ...]

    @staticmethod
    def make(coeffs: Mapping[Variable, int]) -> "Character":
        items = tuple(
            sorted(((v, int(c)) for v, c in coeffs.items() if c != 0),
                   key=lambda it: it[0].sort_key())
        )
        return Character(items)

    @staticmethod
    def zero() -> "Character":
        return Character(())

    def is_zero(self) -> bool:
        return not self.coeffs

    def neg(self) -> "Character":
        return Character(tuple((v, -c) for v, c in self.coeffs))

    def add(self, other: "Character") -> "Character":
        d: Dict[Variable, int] = dict(self.coeffs)
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return Character.make(d)

    def as_dict(self) -> Dict[Variable, int]:
        return dict(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for v, c in self.coeffs:
            if c == 1:
                bits.append(f"+{v.name}")
            elif c == -1:
                bits.append(f"-{v.name}")
            else:
                bits.append(f"{c:+d}*{v.name}")
        s = "".join(bits)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class FormalGroupLaw:
    """Backend selector plus, for the series case, the law coefficients."""

    backend: str
    coeffs: Tuple[Tuple[Tuple[int, int], Frac], ...] = ()
    order: int = 0

    @staticmethod
    def additive() -> "FormalGroupLaw":
        return FormalGroupLaw(ADDITIVE)

    @staticmethod
    def multiplicative() -> "FormalGroupLaw":
        return FormalGroupLaw(MULTIPLICATIVE)

    @staticmethod
    def series(coeffs: Mapping[Tuple[int, int], Frac], order: int) -> "FormalGroupLaw":
        if order < 2:
            raise TruncationOverflowError("series order must be at least 2")
        items = []
        for (i, j), c in coeffs.items():
            if i < 1 or j < 1:
                raise SymalgError("series coefficients start at a_{11}")
            if i + j > order:
                continue
            if c != 0:
                items.append(((i, j), Frac(c)))
        return FormalGroupLaw(SERIES, tuple(sorted(items)), order)

    # -- law as a polynomial in two auxiliary variables -----------------

    def law_polynomial(self, registry: VarRegistry, u: Variable, v: Variable) -> MultiPoly:
        pu = MultiPoly.var(registry, u)
        pv = MultiPoly.var(registry, v)
        if self.backend == ADDITIVE:
            return pu + pv
        if self.backend == MULTIPLICATIVE:
            return pu + pv - pu * pv
        out = pu + pv
        for (i, j), c in self.coeffs:
            out = out + (pu.pow(i) * pv.pow(j)).scale(c)
        return out

    def f_add(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        """F(a, b), truncated for the series backend."""
        if self.backend == ADDITIVE:
            return a + b
        if self.backend == MULTIPLICATIVE:
            return a + b - a * b
        out = a + b
        for (i, j), c in self.coeffs:
            out = out + (a.pow(i) * b.pow(j)).scale(c)
        return out.truncate(self.order)

    def f_inverse_series(self, a: MultiPoly) -> MultiPoly:
        """The formal inverse i(a) with F(a, i(a)) = 0, degree by degree."""
        if self.backend == ADDITIVE:
            return -a
        if self.backend == MULTIPLICATIVE:
            raise SymalgError("multiplicative inverse is handled in factored form")
        g = -a
        cap = self.order
        for _ in range(cap):
            err = self.f_add(a, g)
            if err.is_zero():
                break
            # F(a, g + delta) = F(a, g) + delta + higher; correct linearly.
            g = (g - err).truncate(cap)
        return g

    # -- the orientation of a character ------------------------------------

    def lambda_char(self, registry: VarRegistry, chi: Character) -> RationalFunction:
        for v, _ in chi.coeffs:
            if v not in registry:
                raise SymalgError(f"character uses {v.name} outside the registry")
        if chi.is_zero():
            return RationalFunction.zero(registry)
        if self.backend == ADDITIVE:
            form = MultiPoly.linear(registry, chi.as_dict())
            return RationalFunction.from_poly(form)
        if self.backend == MULTIPLICATIVE:
            # 1 - prod X_v^(-n_v)  =  (P - N) / P  with
            # P = prod_{n>0} X^n and N = prod_{n<0} X^(-n).
            p_exp = [0] * len(registry)
            n_exp = [0] * len(registry)
            for v, c in chi.coeffs:
                if c > 0:
                    p_exp[registry.index(v)] += c
                else:
                    n_exp[registry.index(v)] += -c
            p_mono = MultiPoly(registry, {tuple(p_exp): Frac(1)})
            n_mono = MultiPoly(registry, {tuple(n_exp): Frac(1)})
            num = p_mono - n_mono
            out = RationalFunction(registry, 1, [(num, 1), (p_mono, -1)])
            return out
        # Series backend: F-combination of the coordinates.
        total_steps = sum(abs(c) for _, c in chi.coeffs)
        if total_steps > 64:
            raise TruncationOverflowError(
                f"character needs {total_steps} law applications; limit is 64"
            )
        acc = MultiPoly.zero(registry)
        for v, c in chi.coeffs:
            base = MultiPoly.var(registry, v)
            step = base if c > 0 else self.f_inverse_series(base)
            for _ in range(abs(c)):
                acc = self.f_add(acc, step)
        return RationalFunction.from_poly(acc)

    # -- scalar group operations (for point evaluation) ----------------------

    def point_zero(self) -> Frac:
        return Frac(1) if self.backend == MULTIPLICATIVE else Frac(0)

    def point_add(self, a: Frac, b: Frac) -> Frac:
        a, b = Frac(a), Frac(b)
        if self.backend == MULTIPLICATIVE:
            return a * b
        if self.backend == ADDITIVE:
            return a + b
        raise SymalgError("series backend has no exact point group")

    def point_neg(self, a: Frac) -> Frac:
        a = Frac(a)
        if self.backend == MULTIPLICATIVE:
            if a == 0:
                raise SymalgError("0 is not a point of the multiplicative group")
            return Frac(1) / a
        if self.backend == ADDITIVE:
            return -a
        raise SymalgError("series backend has no exact point group")

    def char_value(self, dchar: Character, assignment: Mapping[Variable, Frac]) -> Frac:
        """Value of a (dilation) character at a scalar point of the torus."""
        acc = self.point_zero()
        for v, c in dchar.coeffs:
            val = Frac(assignment[v])
            step = val if c > 0 else self.point_neg(val)
            for _ in range(abs(c)):
                acc = self.point_add(acc, step)
        return acc

    def __repr__(self) -> str:
        if self.backend == SERIES:
            return f"FormalGroupLaw(series, N={self.order})"
        return f"FormalGroupLaw({self.backend})"


@dataclass
class AxiomReport:
    """Outcome of the group-law axiom checks."""

    backend: str
    unit_ok: bool
    commutative_ok: bool
    associative_ok: bool
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return self.unit_ok and self.commutative_ok and self.associative_ok


def fgl_verify(law: FormalGroupLaw) -> AxiomReport:
    """Check unit, commutativity and associativity of the law.

    Exact for the additive and multiplicative backends (their laws are
    honest polynomials); modulo the truncation order for a series law.
    """
    u, v, w = aux_var("u", 1), aux_var("v", 2), aux_var("w", 3)
    reg = VarRegistry([u, v, w])
    trunc = law.order if law.backend == SERIES else None

    def cut(p: MultiPoly) -> MultiPoly:
        return p.truncate(trunc) if trunc is not None else p

    pu = MultiPoly.var(reg, u)
    f_uv = law.f_add(pu, MultiPoly.var(reg, v))
    f_u0 = law.f_add(pu, MultiPoly.zero(reg))
    unit_ok = cut(f_u0) == cut(pu)
    f_vu = law.f_add(MultiPoly.var(reg, v), pu)
    comm_ok = cut(f_uv) == cut(f_vu)
    pw = MultiPoly.var(reg, w)
    left = law.f_add(f_uv, pw)
    right = law.f_add(pu, law.f_add(MultiPoly.var(reg, v), pw))
    assoc_ok = cut(left) == cut(right)
    details = {}
    if not assoc_ok:
        details["associativity"] = f"{cut(left)} != {cut(right)}"
    return AxiomReport(law.backend, unit_ok, comm_ok, assoc_ok, details)


def parse_series_file(text: str) -> FormalGroupLaw:
    """Series law description: JSON with keys "N" and "coeffs" {"i,j": a_ij}."""
    import json

    data = json.loads(text)
    order = int(data["N"])
    coeffs: Dict[Tuple[int, int], Frac] = {}
    for key, val in data.get("coeffs", {}).items():
        i, j = (int(t) for t in key.split(","))
        coeffs[(i, j)] = Frac(str(val))
    return FormalGroupLaw.series(coeffs, order)


def select_fgl(spec: str) -> FormalGroupLaw:
    """CLI selector: additive | multiplicative | series:<file>."""
    if spec == ADDITIVE:
        return FormalGroupLaw.additive()
    if spec == MULTIPLICATIVE:
        return FormalGroupLaw.multiplicative()
    if spec.startswith("series:"):
        path = spec.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            return parse_series_file(fh.read())
    raise SymalgError(f"unknown formal group selector {spec!r}")
