"""Exact multivariate polynomial and rational-function arithmetic over Q.

Polynomials are sparse maps from monomials to Fraction coefficients,
always in canonical form (no zero coefficients stored).  Monomials are
packed into integers, sixteen bits per variable, so multiplying
monomials is a single integer addition and the canonical order is a
plain integer comparison; symmetrization sums over many coset
representatives stay fast.  Rational functions are kept factored: a
scalar unit times a list of (primitive polynomial, signed exponent)
pairs.  Kernels are products of short factors, so cancellation is
syntactic factor matching with an exact-division fallback; no
multivariate GCD is ever needed.

Canonical monomial order: graded, ties broken with the *last* registry
variable most significant (that is exactly the packed-integer order).
Factors are normalized to integer coefficients with content 1 and a
positive leading coefficient; the scalar they shed is absorbed into the
unit.  This keeps printed forms stable for golden files.

Everything here is immutable after construction and safe to share; a
parallel reduction over symmetrization terms must reproduce the
sequential canonical-order sum bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Frac = Fraction

ROLE_TORUS = "x"
ROLE_DILATION = "d"
ROLE_AUX = "aux"
_ROLE_RANK = {ROLE_TORUS: 0, ROLE_DILATION: 1, ROLE_AUX: 2}

_BITS = 16
_MASK = (1 << _BITS) - 1


def _coeff(c):
    """Exact coefficient normalization: integers stay plain ints (their
    arithmetic is several times faster than Fraction's), everything else
    becomes a Fraction, demoted to int when integral."""
    if type(c) is int:
        return c
    f = Fraction(c)
    return f.numerator if f.denominator == 1 else f


class SymalgError(Exception):
    """Base error for the arithmetic substrate."""


class RegistryMismatchError(SymalgError):
    """Raised when operands live over different variable registries."""


class PoleError(SymalgError):
    """Raised when a denominator factor evaluates to zero."""

    def __init__(self, factor_repr: str):
        super().__init__(f"denominator factor vanishes: {factor_repr}")
        self.factor_repr = factor_repr


@dataclass(frozen=True)
class Variable:
    """A named coordinate with a role in the canonical ordering.

    role "x": torus coordinate x[slot, vertex, index]; "d": dilation
    coordinate; "aux": free symbol.  ``vpos`` is the vertex position in
    the quiver's declared vertex order (0 for non-torus roles).
    """

    role: str
    slot: int
    vpos: int
    vname: str
    index: int

    def sort_key(self) -> Tuple[int, int, int, int]:
        return (_ROLE_RANK[self.role], self.slot, self.vpos, self.index)

    @property
    def name(self) -> str:
        if self.role == ROLE_TORUS:
            return f"x[{self.slot},{self.vname},{self.index}]"
        if self.role == ROLE_DILATION:
            return f"d{self.index}"
        return self.vname

    def __repr__(self) -> str:
        return self.name


def x_var(slot: int, vpos: int, vname: str, index: int) -> Variable:
    return Variable(ROLE_TORUS, slot, vpos, vname, index)


def d_var(index: int) -> Variable:
    return Variable(ROLE_DILATION, 0, 0, "", index)


def aux_var(name: str, index: int = 0) -> Variable:
    return Variable(ROLE_AUX, 0, index, name, index)


class VarRegistry:
    """An ordered set of variables; the ordering is canonical and total."""

    def __init__(self, variables: Iterable[Variable], *, keep_order: bool = False):
        vs = list(variables)
        if not keep_order:
            vs.sort(key=Variable.sort_key)
        if len(set(vs)) != len(vs):
            raise SymalgError("duplicate variables in registry")
        self.variables: Tuple[Variable, ...] = tuple(vs)
        self.position: Dict[Variable, int] = {v: i for i, v in enumerate(vs)}

    def __len__(self) -> int:
        return len(self.variables)

    def __contains__(self, v: Variable) -> bool:
        return v in self.position

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarRegistry) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def index(self, v: Variable) -> int:
        return self.position[v]

    def pack(self, exponents: Sequence[int]) -> int:
        key = 0
        for i, e in enumerate(exponents):
            if e < 0:
                raise SymalgError("negative exponent in a monomial")
            if e > _MASK:
                raise SymalgError("monomial degree exceeds the packing width")
            key |= e << (_BITS * i)
        return key

    def unpack(self, key: int) -> Tuple[int, ...]:
        out = []
        for _ in range(len(self.variables)):
            out.append(key & _MASK)
            key >>= _BITS
        return tuple(out)

    def __repr__(self) -> str:
        return "VarRegistry(" + ", ".join(v.name for v in self.variables) + ")"


def _degree_of(key: int) -> int:
    total = 0
    while key:
        total += key & _MASK
        key >>= _BITS
    return total


def _divides(ka: int, kb: int) -> bool:
    """Componentwise ka >= kb on packed monomials."""
    while kb:
        if (ka & _MASK) < (kb & _MASK):
            return False
        ka >>= _BITS
        kb >>= _BITS
    return True


def _same_registry(a: "MultiPoly", b: "MultiPoly") -> None:
    if a.registry != b.registry:
        raise RegistryMismatchError("operands use different variable registries")


def _monomial_key(key: int) -> Tuple[int, int]:
    # Graded; ties resolved by the packed integer, i.e. later registry
    # variables are more significant.
    return (_degree_of(key), key)


class MultiPoly:
    """Sparse exact polynomial over a registry.

    The constructor accepts exponent tuples; internal storage is packed.
    """

    __slots__ = ("registry", "terms", "_hash")

    def __init__(
        self,
        registry: VarRegistry,
        terms: Mapping[Tuple[int, ...], Frac] = (),
        _packed: Optional[Dict[int, Frac]] = None,
    ):
        self.registry = registry
        if _packed is not None:
            self.terms: Dict[int, Frac] = {k: c for k, c in _packed.items() if c != 0}
        else:
            self.terms = {}
            for e, c in dict(terms).items():
                c = _coeff(c)
                if c == 0:
                    continue
                key = registry.pack(e)
                prev = self.terms.get(key)
                self.terms[key] = c if prev is None else prev + c
                if self.terms[key] == 0:
                    del self.terms[key]
        self._hash: Optional[int] = None

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(registry: VarRegistry) -> "MultiPoly":
        return MultiPoly(registry, _packed={})

    @staticmethod
    def const(registry: VarRegistry, c) -> "MultiPoly":
        c = _coeff(c)
        return MultiPoly(registry, _packed=({0: c} if c else {}))

    @staticmethod
    def var(registry: VarRegistry, v: Variable) -> "MultiPoly":
        return MultiPoly(registry, _packed={1 << (_BITS * registry.index(v)): 1})

    @staticmethod
    def monomial(registry: VarRegistry, exps: Mapping[Variable, int], coeff=1) -> "MultiPoly":
        key = 0
        for v, e in exps.items():
            key += e << (_BITS * registry.index(v))
        return MultiPoly(registry, _packed={key: _coeff(coeff)})

    @staticmethod
    def linear(registry: VarRegistry, coeffs: Mapping[Variable, int], const=0) -> "MultiPoly":
        packed: Dict[int, Frac] = {}
        for v, c in coeffs.items():
            if c:
                packed[1 << (_BITS * registry.index(v))] = _coeff(c)
        if const:
            packed[0] = packed.get(0, 0) + _coeff(const)
        return MultiPoly(registry, _packed=packed)

    # -- basic structure ----------------------------------------------

    def items_unpacked(self):
        unpack = self.registry.unpack
        for k, c in self.terms.items():
            yield unpack(k), c

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.terms)

    def constant_value(self) -> Frac:
        if self.is_zero():
            return Frac(0)
        if not self.is_constant():
            raise SymalgError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(_degree_of(k) for k in self.terms)

    def leading(self) -> Tuple[int, Frac]:
        """Leading (packed monomial, coefficient) in the canonical order."""
        if not self.terms:
            raise SymalgError("zero polynomial has no leading term")
        k = max(self.terms, key=_monomial_key)
        return k, self.terms[k]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.registry == other.registry
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.registry, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        _same_registry(self, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MultiPoly(self.registry, _packed=out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.registry, _packed={k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        _same_registry(self, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = -c
            else:
                s = s - c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MultiPoly(self.registry, _packed=out)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        _same_registry(self, other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.registry)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: Dict[int, Frac] = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                s = get(k)
                if s is None:
                    out[k] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return MultiPoly(self.registry, _packed=out)

    def scale(self, c) -> "MultiPoly":
        c = _coeff(c)
        if c == 0:
            return MultiPoly.zero(self.registry)
        return MultiPoly(self.registry, _packed={k: c * v for k, v in self.terms.items()})

    def pow(self, n: int) -> "MultiPoly":
        if n < 0:
            raise SymalgError("negative power of a polynomial")
        result = MultiPoly.const(self.registry, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, max_degree: int) -> "MultiPoly":
        return MultiPoly(
            self.registry,
            _packed={k: c for k, c in self.terms.items() if _degree_of(k) <= max_degree},
        )

    # -- evaluation / substitution --------------------------------------

    def evaluate(self, assignment: Mapping[Variable, Frac]) -> Frac:
        values = [Frac(assignment[v]) for v in self.registry.variables]
        total = Frac(0)  # Fraction accumulator; int coefficients promote freely
        for exps, c in self.items_unpacked():
            t = c
            for e, val in zip(exps, values):
                if e:
                    t *= val ** e
            total += t
        return total

    def substitute(self, assignment: Mapping[Variable, Frac]) -> "MultiPoly":
        """Replace a subset of variables by scalars (registry unchanged)."""
        idx = {self.registry.index(v): Frac(c) for v, c in assignment.items()}
        out: Dict[int, Frac] = {}
        for exps, c in self.items_unpacked():
            t = c
            ne = list(exps)
            for i, val in idx.items():
                if exps[i]:
                    t *= val ** exps[i]
                    ne[i] = 0
            if t == 0:
                continue
            key = self.registry.pack(ne)
            s = out.get(key, 0) + t
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return MultiPoly(self.registry, _packed=out)

    def rename(self, mapping: Mapping[Variable, Variable], target: VarRegistry) -> "MultiPoly":
        """Transport along an injective variable map into another registry."""
        shift: List[int] = []
        for v in self.registry.variables:
            w = mapping.get(v, v)
            if w not in target:
                raise RegistryMismatchError(f"target registry misses {w.name}")
            shift.append(_BITS * target.index(w))
        out: Dict[int, Frac] = {}
        for exps, c in self.items_unpacked():
            key = 0
            for e, sh in zip(exps, shift):
                if e:
                    key += e << sh
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return MultiPoly(target, _packed=out)

    # -- normal forms ----------------------------------------------------

    def primitive(self) -> Tuple[Frac, "MultiPoly"]:
        """Split into (unit, primitive part): integer coefficients, content 1,
        positive leading coefficient under the canonical monomial order."""
        if self.is_zero():
            return Frac(0), self
        den_lcm = 1
        for c in self.terms.values():
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
        unit = Frac(num_gcd, den_lcm)
        prim = MultiPoly(
            self.registry, _packed={k: _coeff(c / unit) for k, c in self.terms.items()}
        )
        _, lead = prim.leading()
        if lead < 0:
            unit = -unit
            prim = -prim
        return unit, prim

    def divide_exact(self, divisor: "MultiPoly") -> Optional["MultiPoly"]:
        """Quotient self/divisor if the division is exact, else None."""
        _same_registry(self, divisor)
        if divisor.is_zero():
            raise SymalgError("division by the zero polynomial")
        if self.is_zero():
            return self
        dk, dc = divisor.leading()
        rem = dict(self.terms)
        q: Dict[int, Frac] = {}
        dterms = list(divisor.terms.items())
        while rem:
            k = max(rem, key=_monomial_key)
            c = rem[k]
            if not _divides(k, dk):
                return None
            tk = k - dk
            tc = _coeff(Frac(c) / Frac(dc))
            q[tk] = q.get(tk, 0) + tc
            for fk, fc in dterms:
                nk = tk + fk
                s = rem.get(nk, Frac(0)) - tc * fc
                if s:
                    rem[nk] = s
                else:
                    rem.pop(nk, None)
        return MultiPoly(self.registry, _packed=q)

    # -- display ----------------------------------------------------------

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms, key=_monomial_key, reverse=True):
            c = self.terms[k]
            exps = self.registry.unpack(k)
            mono = "*".join(
                f"{v.name}^{e}" if e > 1 else v.name
                for v, e in zip(self.registry.variables, exps)
                if e
            )
            if not mono:
                bits.append(str(c))
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
        return " + ".join(bits).replace("+ -", "- ")


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Dispatch form of polynomial arithmetic (op = "add" | "mul")."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise SymalgError(f"unknown op {op!r}")


def _factor_sort_key(item: Tuple[MultiPoly, int]):
    p, e = item
    return (
        p.degree(),
        len(p.terms),
        sorted((k, (v.numerator, v.denominator)) for k, v in p.terms.items()),
        e,
    )


class RationalFunction:
    """Scalar unit times a product of primitive-polynomial powers."""

    __slots__ = ("registry", "unit", "factors")

    def __init__(
        self,
        registry: VarRegistry,
        unit,
        factors: Iterable[Tuple[MultiPoly, int]] = (),
    ):
        self.registry = registry
        unit = Frac(unit)
        merged: Dict[MultiPoly, int] = {}
        for p, e in factors:
            if e == 0:
                continue
            if p.registry != registry:
                raise RegistryMismatchError("factor over a different registry")
            if p.is_zero():
                if e < 0:
                    raise SymalgError("zero factor with negative exponent")
                unit = Frac(0)
                continue
            u, prim = p.primitive()
            if prim.is_constant():
                unit *= (u * prim.constant_value()) ** e
                continue
            unit *= u ** e
            merged[prim] = merged.get(prim, 0) + e
        if unit == 0:
            self.unit = Frac(0)
            self.factors: Tuple[Tuple[MultiPoly, int], ...] = ()
            return
        self.unit = unit
        self.factors = tuple(
            sorted(((p, e) for p, e in merged.items() if e != 0), key=_factor_sort_key)
        )

    # -- constructors -----------------------------------------------------

    @staticmethod
    def one(registry: VarRegistry) -> "RationalFunction":
        return RationalFunction(registry, 1)

    @staticmethod
    def zero(registry: VarRegistry) -> "RationalFunction":
        return RationalFunction(registry, 0)

    @staticmethod
    def from_poly(p: MultiPoly) -> "RationalFunction":
        return RationalFunction(p.registry, 1, [(p, 1)])

    @staticmethod
    def constant(registry: VarRegistry, c) -> "RationalFunction":
        return RationalFunction(registry, c)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    def is_scalar(self) -> bool:
        return not self.factors

    def scalar_value(self) -> Frac:
        if not self.is_scalar():
            raise SymalgError("not a scalar")
        return self.unit

    def is_polynomial(self) -> bool:
        return all(e > 0 for _, e in self.factors)

    def is_regular(self) -> bool:
        """Polynomial up to units of the coordinate ring: any denominator
        factor must be a single monomial (invertible on the torus)."""
        return all(e > 0 or len(p.terms) == 1 for p, e in self.factors)

    def is_monomial_unit(self) -> bool:
        """True for c * (product of single-term factors)^Z, c != 0."""
        return self.unit != 0 and all(len(p.terms) == 1 for p, _ in self.factors)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RationalFunction)
            and self.registry == other.registry
            and self.unit == other.unit
            and self.factors == other.factors
        )

    def __hash__(self) -> int:
        return hash((self.registry, self.unit, self.factors))

    # -- arithmetic ----------------------------------------------------------

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.registry != other.registry:
            raise RegistryMismatchError("product over different registries")
        return RationalFunction(
            self.registry, self.unit * other.unit, self.factors + other.factors
        )

    def inverse(self) -> "RationalFunction":
        if self.unit == 0:
            raise SymalgError("inverse of zero")
        return RationalFunction(
            self.registry, Frac(1) / self.unit, [(p, -e) for p, e in self.factors]
        )

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def pow(self, n: int) -> "RationalFunction":
        if self.unit == 0:
            if n <= 0:
                raise SymalgError("zero to a non-positive power")
            return self
        return RationalFunction(
            self.registry, self.unit ** n, [(p, e * n) for p, e in self.factors]
        )

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return rat_sum([self, other])

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return rat_sum([self, RationalFunction(other.registry, -other.unit, other.factors)])

    def numerator(self) -> MultiPoly:
        num = MultiPoly.const(self.registry, self.unit)
        for p, e in self.factors:
            if e > 0:
                num = num * p.pow(e)
        return num

    def denominator(self) -> MultiPoly:
        den = MultiPoly.const(self.registry, 1)
        for p, e in self.factors:
            if e < 0:
                den = den * p.pow(-e)
        return den

    def denominator_factors(self) -> Tuple[Tuple[MultiPoly, int], ...]:
        return tuple((p, -e) for p, e in self.factors if e < 0)

    # -- normalization --------------------------------------------------------

    def cancelled(self) -> "RationalFunction":
        """Push exact-division cancellation of denominators into numerators."""
        if self.unit == 0:
            return self
        nums = [(p, e) for p, e in self.factors if e > 0]
        dens = [(p, e) for p, e in self.factors if e < 0]
        if not nums or not dens:
            return self
        num = self.numerator()
        out_dens: List[Tuple[MultiPoly, int]] = []
        for p, e in dens:
            k = -e
            while k > 0:
                q = num.divide_exact(p)
                if q is None:
                    break
                num = q
                k -= 1
            if k:
                out_dens.append((p, -k))
        return RationalFunction(self.registry, 1, [(num, 1)] + out_dens)

    # -- maps -------------------------------------------------------------------

    def rename(
        self, mapping: Mapping[Variable, Variable], target: VarRegistry
    ) -> "RationalFunction":
        return RationalFunction(
            target,
            self.unit,
            [(p.rename(mapping, target), e) for p, e in self.factors],
        )

    def substitute(self, assignment: Mapping[Variable, Frac]) -> "RationalFunction":
        out: List[Tuple[MultiPoly, int]] = []
        for p, e in self.factors:
            s = p.substitute(assignment)
            if s.is_zero() and e < 0:
                raise PoleError(repr(p))
            out.append((s, e))
        return RationalFunction(self.registry, self.unit, out)

    def evaluate(self, assignment: Mapping[Variable, Frac]) -> Frac:
        if self.unit == 0:
            return Frac(0)
        # Scan all factors before multiplying so poles are reported even
        # when a numerator factor vanishes at the same point.
        vals: List[Tuple[Frac, int]] = []
        for p, e in self.factors:
            v = p.evaluate(assignment)
            if e < 0 and v == 0:
                raise PoleError(repr(p))
            vals.append((v, e))
        total = self.unit
        for v, e in vals:
            total *= v ** e
        return total

    # -- display -------------------------------------------------------------------

    def __repr__(self) -> str:
        if self.unit == 0:
            return "0"
        bits = []
        if self.unit != 1 or not self.factors:
            bits.append(str(self.unit))
        for p, e in self.factors:
            s = f"({p})"
            if e != 1:
                s += f"^{e}"
            bits.append(s)
        return " * ".join(bits)


def rat_sum(terms: Sequence[RationalFunction]) -> RationalFunction:
    """Exact n-ary sum over a common denominator, with cancellation."""
    if not terms:
        raise SymalgError("empty sum needs a registry; use RationalFunction.zero")
    registry0 = terms[0].registry
    terms = [t for t in terms if t.unit != 0]
    if not terms:
        return RationalFunction.zero(registry0)
    registry = terms[0].registry
    for t in terms:
        if t.registry != registry:
            raise RegistryMismatchError("sum over different registries")
    if len(terms) == 1:
        return terms[0]
    common: Dict[MultiPoly, int] = {}
    for t in terms:
        for p, e in t.factors:
            if e < 0:
                common[p] = max(common.get(p, 0), -e)
    total = MultiPoly.zero(registry)
    for t in terms:
        num = MultiPoly.const(registry, t.unit)
        dens = {p: -e for p, e in t.factors if e < 0}
        for p, e in t.factors:
            if e > 0:
                num = num * p.pow(e)
        for p, need in common.items():
            deficit = need - dens.get(p, 0)
            if deficit:
                num = num * p.pow(deficit)
        total = total + num
    result = RationalFunction(
        registry, 1, [(total, 1)] + [(p, -e) for p, e in common.items()]
    )
    return result.cancelled()


def rat_equal(a: RationalFunction, b: RationalFunction) -> bool:
    """Functional equality via cross-multiplied expansion."""
    if a.registry != b.registry:
        raise RegistryMismatchError("comparison over different registries")
    if a.unit == 0 or b.unit == 0:
        return a.unit == b.unit
    if a.unit == b.unit and a.factors == b.factors:
        return True
    # Fast path: the quotient often cancels syntactically to a scalar.
    q = a / b
    if q.is_scalar():
        return q.scalar_value() == 1
    if a.denominator_factors() == b.denominator_factors():
        return a.numerator() == b.numerator()
    left = a.numerator() * b.denominator()
    right = b.numerator() * a.denominator()
    return left == right


def _color_key(v: Variable) -> Tuple[int, int, int]:
    return (_ROLE_RANK[v.role], v.slot, v.vpos)


def block_shuffles(blocks: Sequence[Sequence[Variable]]) -> List[Dict[Variable, Variable]]:
    """Coset representatives of prod(S_block) inside the symmetric group of
    the union, as variable substitution maps.

    Each block keeps its internal order; representatives choose which
    positions of the union each block occupies.  Blocks must be disjoint
    and share a color (same role, slot, vertex).
    """
    allv: List[Variable] = []
    for b in blocks:
        allv.extend(b)
    if len(set(allv)) != len(allv):
        raise SymalgError("blocks overlap")
    colors = {_color_key(v) for v in allv}
    if len(colors) > 1:
        raise SymalgError("blocks span more than one color")
    union = sorted(allv, key=Variable.sort_key)
    n = len(union)
    sizes = [len(b) for b in blocks]
    reps: List[Dict[Variable, Variable]] = []
    position_sets = _ordered_set_partitions(n, sizes)
    for parts in position_sets:
        m: Dict[Variable, Variable] = {}
        for block, positions in zip(blocks, parts):
            for v, pos in zip(block, positions):
                m[v] = union[pos]
        reps.append(m)
    return reps


def _ordered_set_partitions(n: int, sizes: Sequence[int]) -> List[List[Tuple[int, ...]]]:
    if sum(sizes) != n:
        raise SymalgError("block sizes must cover the color")
    out: List[List[Tuple[int, ...]]] = []

    def rec(remaining: Tuple[int, ...], k: int, acc: List[Tuple[int, ...]]):
        if k == len(sizes):
            out.append(list(acc))
            return
        for combo in itertools.combinations(remaining, sizes[k]):
            rest = tuple(i for i in remaining if i not in combo)
            acc.append(combo)
            rec(rest, k + 1, acc)
            acc.pop()

    rec(tuple(range(n)), 0, [])
    return out


def symmetrize(
    f: RationalFunction, partition: Sequence[Sequence[Sequence[Variable]]]
) -> RationalFunction:
    """Sum of f over shuffle representatives, one block family per color.

    ``partition`` is a list of per-color block lists.  The result is the
    sum over the product of each color's representatives, in canonical
    order (deterministic, so a parallel reduction must reproduce it).
    """
    per_color = [block_shuffles(blocks) for blocks in partition]
    terms: List[RationalFunction] = []
    for combo in itertools.product(*per_color):
        m: Dict[Variable, Variable] = {}
        for part in combo:
            m.update(part)
        terms.append(f.rename(m, f.registry))
    if not terms:
        return f
    return rat_sum(terms)
