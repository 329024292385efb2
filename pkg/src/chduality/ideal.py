"""Ideal arithmetic: membership, intersection, colon, saturation, elimination,
radical membership, dimension and power containment."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import NotNilpotentModI, PowerCapExceeded, RingMismatch
from .groebner import GroebnerBasis, buchberger, normal_form
from .poly import MonomialOrder, Polynomial, RingSpec, is_weighted_homogeneous

POWER_CAP = 64


class Ideal:
    """Finitely generated ideal with a lazily computed reduced Groebner basis.

    ``radical`` and ``pure`` record user declarations (J reduced, V(J) pure
    dimensional); they are not verified.
    """

    def __init__(
        self,
        ring: RingSpec,
        generators: Iterable[Polynomial] = (),
        order: MonomialOrder | None = None,
        radical: bool = False,
        pure: bool = False,
        gb: GroebnerBasis | None = None,
    ):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, (int, Fraction)):
                g = Polynomial.constant(ring, g)
            if g.ring != ring:
                raise RingMismatch(f"generator {g} not in ring {ring.variables}")
            if g:
                gens.append(g)
        self.generators = tuple(gens)
        self.order = order or ring.default_order
        self.radical = radical
        self.pure = pure
        if gb is not None:
            if gb.ring != ring:
                raise RingMismatch("supplied basis lives in another ring")
            if any(normal_form(g, gb) for g in self.generators):
                raise ValueError("supplied Groebner basis does not contain the generators")
            own = buchberger(self.generators, self.order, ring=ring)
            if any(normal_form(h, own) for h in gb.generators):
                raise ValueError("supplied Groebner basis generates a larger ideal")
            self.__dict__["gb"] = gb

    @classmethod
    def parse(cls, ring: RingSpec, texts: Sequence[str], **kw) -> Ideal:
        return cls(ring, [ring.parse(t) for t in texts], **kw)

    @cached_property
    def gb(self) -> GroebnerBasis:
        return buchberger(self.generators, self.order, ring=self.ring)

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    def is_weighted_homogeneous(self) -> bool:
        return all(is_weighted_homogeneous(g) for g in self.generators)

    def contains(self, g: Polynomial) -> bool:
        return membership(g, self)

    def contains_ideal(self, other: Ideal) -> bool:
        return all(membership(g, self) for g in other.generators)

    def same_as(self, other: Ideal) -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def reduce(self, g: Polynomial) -> Polynomial:
        return normal_form(g, self.gb)

    def with_flags(self, radical=None, pure=None) -> Ideal:
        J = Ideal(self.ring, self.generators, self.order,
                  self.radical if radical is None else radical,
                  self.pure if pure is None else pure)
        if "gb" in self.__dict__:
            J.__dict__["gb"] = self.gb
        return J

    def __add__(self, other):
        if isinstance(other, Ideal):
            return combine(self, other, "sum")
        if isinstance(other, Polynomial):
            return Ideal(self.ring, self.generators + (other,), self.order)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Ideal):
            return combine(self, other, "product")
        return NotImplemented

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"

    def generator_strings(self) -> list:
        return [str(g) for g in self.generators]


@dataclass(frozen=True)
class DimensionInfo:
    dim: int
    codim: int


def _same_ring(*ideals):
    ring = ideals[0].ring
    for I in ideals[1:]:
        if I.ring != ring:
            raise RingMismatch(f"{I.ring.variables} vs {ring.variables}")


def membership(g: Polynomial, I: Ideal) -> bool:
    if g.ring != I.ring:
        raise RingMismatch("polynomial and ideal in different rings")
    if not g:
        return True
    return normal_form(g, I.gb).is_zero()


def combine(I: Ideal, J: Ideal, op: str = "sum", k: int | None = None) -> Ideal:
    """Sum, product, or ``power`` (of I, with exponent ``k``) at generator level."""
    _same_ring(I, J)
    if op == "sum":
        return Ideal(I.ring, I.generators + J.generators, I.order)
    if op == "product":
        return Ideal(I.ring, _dedupe(a * b for a in I.generators for b in J.generators), I.order)
    if op == "power":
        return ideal_power(I, k if k is not None else 2)
    raise ValueError(f"unknown ideal operation {op!r}")


def ideal_power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise ValueError("negative power")
    result = Ideal(I.ring, [I.ring.one()], I.order)
    for _ in range(k):
        result = Ideal(I.ring, _dedupe(a * b for a in result.generators for b in I.generators), I.order)
    return result


def _dedupe(polys):
    seen = {}
    for p in polys:
        if p:
            seen.setdefault(p.monic(), p)
    return list(seen.values())


def eliminate(I: Ideal, variables: Sequence[str], keep_ring: bool = False) -> Ideal:
    """I intersected with the subring in the remaining variables.

    Uses a block order with the eliminated variables first.  The result lives
    in the subring (same weights) unless ``keep_ring`` is set.
    """
    variables = list(variables)
    for v in variables:
        if v not in I.ring.variables:
            raise ValueError(f"{v!r} is not a variable of the ring")
    if not variables:
        return I
    ring = I.ring
    rest = [v for v in ring.variables if v not in variables]
    ordered = RingSpec(tuple(variables) + tuple(rest),
                       tuple(ring.weights[ring.index(v)] for v in variables + rest))
    order = MonomialOrder.elimination(len(variables), ordered.weights)
    gb = buchberger([g.embed(ordered) for g in I.generators], order, ring=ordered)
    b = len(variables)
    kept = [g for g in gb.generators if all(not any(e[:b]) for e in g.terms)]
    if keep_ring:
        return Ideal(ring, [g.embed(ring) for g in kept])
    if not rest:
        raise ValueError("cannot eliminate every variable")
    sub = RingSpec(tuple(rest), tuple(ring.weights[ring.index(v)] for v in rest))
    return Ideal(sub, [g.embed(sub) for g in kept])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J via elimination of t from t·I + (1 - t)·J."""
    _same_ring(I, J)
    if I.is_zero() or J.is_zero():
        return Ideal(I.ring, [], I.order)
    ring = I.ring
    t = ring.fresh_name("aux")
    big = ring.extend([t])
    tv = big.var(t)
    gens = [tv * g.embed(big) for g in I.generators]
    gens += [(1 - tv) * g.embed(big) for g in J.generators]
    order = MonomialOrder.elimination(1, big.weights)
    gb = buchberger(gens, order, ring=big)
    kept = [g.embed(ring) for g in gb.generators if all(e[0] == 0 for e in g.terms)]
    return Ideal(ring, kept, I.order)


def exact_divide(p: Polynomial, f: Polynomial) -> Polynomial:
    """p / f, raising ArithmeticError when f does not divide p."""
    from .groebner import GroebnerBasis, PositionOverTerm, lift

    G = GroebnerBasis(p.ring, [f], PositionOverTerm(p.ring.default_order), reduced=False)
    rem, (q,) = lift(p, G)
    if rem:
        raise ArithmeticError(f"{f} does not divide {p}")
    return q


def colon(I: Ideal, J) -> Ideal:
    """(I : J) for an ideal or a single polynomial J."""
    if isinstance(J, Polynomial):
        f = J
        if f.ring != I.ring:
            raise RingMismatch("colon across rings")
        if not f:
            raise ValueError("colon by the zero polynomial")
        if f.is_constant():
            return Ideal(I.ring, I.generators, I.order)
        inter = intersect(I, Ideal(I.ring, [f], I.order))
        return Ideal(I.ring, [exact_divide(g, f) for g in inter.generators], I.order)
    _same_ring(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    result = None
    for g in J.generators:
        part = colon(I, g)
        result = part if result is None else intersect(result, part)
    return _interreduced(result)


def _interreduced(I: Ideal) -> Ideal:
    return Ideal(I.ring, I.gb.generators, I.order)


def saturate(I: Ideal, J: Ideal) -> tuple:
    """(I : J^∞) and the first k with (I : J^k) = (I : J^(k+1))."""
    current = I
    k = 0
    while True:
        nxt = colon(current, J)
        if current.contains_ideal(nxt):
            return _interreduced(current), k
        current = nxt
        k += 1


def radical_membership(g: Polynomial, I: Ideal) -> bool:
    """g ∈ √I, decided by 1 ∈ I + (1 - y·g) in one more variable."""
    if g.ring != I.ring:
        raise RingMismatch("polynomial and ideal in different rings")
    if not g or membership(g, I):
        return True
    if g.is_constant():
        return I.is_unit()
    ring = I.ring
    y = ring.fresh_name("rab")
    big = ring.extend([y])
    gens = [h.embed(big) for h in I.generators]
    gens.append(1 - big.var(y) * g.embed(big))
    return buchberger(gens, big.default_order, ring=big).is_unit()


def radical_contains(I: Ideal, J: Ideal) -> bool:
    """√J ⊆ √I, checked generator by generator."""
    return all(radical_membership(g, I) for g in J.generators)


def same_radical(I: Ideal, J: Ideal) -> bool:
    return radical_contains(I, J) and radical_contains(J, I)


def max_independent_set(leads: Sequence, n: int) -> int:
    """Largest |S| with no lead monomial supported inside S."""
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in leads]
    if any(not s for s in supports):
        return -1
    supports = [s for s in supports if not any(t < s for t in supports)]
    if n <= 12:
        for size in range(n, -1, -1):
            for S in combinations(range(n), size):
                S = set(S)
                if not any(s <= S for s in supports):
                    return size
        return 0
    best = 0

    def search(i, chosen):
        nonlocal best
        if len(chosen) + (n - i) <= best:
            return
        if i == n:
            best = max(best, len(chosen))
            return
        chosen.add(i)
        if not any(s <= chosen for s in supports):
            search(i + 1, chosen)
        chosen.discard(i)
        search(i + 1, chosen)

    search(0, set())
    return best


def dimension(I: Ideal) -> DimensionInfo:
    n = I.ring.n
    if I.is_zero():
        return DimensionInfo(n, 0)
    d = max_independent_set(I.gb.leading_monomials, n)
    return DimensionInfo(d, n - d)


def codim(I: Ideal) -> int | None:
    """Ambient codimension of V(I); None when V(I) is empty."""
    info = dimension(I)
    return None if info.dim < 0 else info.codim


def power_containment_index(J: Ideal, I: Ideal, cap: int = POWER_CAP) -> int:
    """Least m ≥ 1 with J^m ⊆ I."""
    _same_ring(I, J)
    for g in J.generators:
        if not radical_membership(g, I):
            raise NotNilpotentModI(f"{g} is not in the radical of I")
    # Track J^m modulo I through normal forms of products.
    current = _dedupe(normal_form(g, I.gb) for g in J.generators)
    m = 1
    while current:
        if m >= cap:
            raise PowerCapExceeded(f"J^m not inside I for m < {cap}")
        current = _dedupe(normal_form(a * b, I.gb) for a in current for b in J.generators)
        m += 1
    return m
