"""Normal forms, Buchberger's algorithm and syzygies.

Internally everything is a *vector*: a dict mapping ``(position, exponents)``
to a nonzero Fraction.  A polynomial is a vector supported in position 0, so
ideals and submodules of free modules share one engine.  Term orders are
objects with a ``key(term)`` method; larger keys are larger terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import RingMismatch
from .poly import MonomialOrder, Polynomial, RingSpec


# -- term orders --------------------------------------------------------------

class PositionOverTerm:
    """Module order comparing positions first (e_0 > e_1 > ...), then the ring order."""

    def __init__(self, base: MonomialOrder):
        self.base = base
        self._cache: dict = {}

    def key(self, t):
        k = self._cache.get(t)
        if k is None:
            k = self._cache[t] = (-t[0], self.base.key(t[1]))
        return k

    def __eq__(self, other):
        return isinstance(other, PositionOverTerm) and other.base == self.base

    def __hash__(self):
        return hash(("pot", self.base))


class SchreyerOrder:
    """Order induced on a free module F_1 by a map F_1 -> F_0 with given lead terms.

    ``m e_i > n e_j`` iff ``m lead(g_i) > n lead(g_j)`` in F_0, ties broken by
    the smaller index being larger.
    """

    def __init__(self, previous, leads: Sequence):
        self.previous = previous
        self.leads = list(leads)
        self._cache: dict = {}

    def key(self, t):
        k = self._cache.get(t)
        if k is None:
            lpos, lexp = self.leads[t[0]]
            image = (lpos, tuple(a + b for a, b in zip(t[1], lexp)))
            k = self._cache[t] = (self.previous.key(image), -t[0])
        return k


# -- vector helpers -----------------------------------------------------------

def _lead(vec, key):
    return max(vec, key=key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _axpy(target: dict, coeff, mono, vec: dict):
    """target -= coeff * x^mono * vec, in place."""
    for (pos, e), a in vec.items():
        t = (pos, tuple(x + y for x, y in zip(e, mono)))
        v = target.get(t, 0) - coeff * a
        if v:
            target[t] = v
        else:
            target.pop(t, None)


def _scale(vec, c):
    return {t: a * c for t, a in vec.items()}


def _monic(vec, key):
    return _scale(vec, 1 / vec[_lead(vec, key)])


class _Basis:
    """Basis elements with cached lead data, used by the reducer."""

    def __init__(self, vecs, key):
        self.key = key
        self.items = []
        for v in vecs:
            self.append(v)

    def append(self, v):
        lt = _lead(v, self.key)
        self.items.append((lt[0], lt[1], v[lt], v))

    def __len__(self):
        return len(self.items)


def reduce_vector(vec: dict, basis: _Basis, full: bool = True, track: bool = False):
    """Divide ``vec`` by ``basis``.

    Returns the remainder, plus the list of quotients (dicts monomial -> coeff)
    when ``track`` is set.  With ``full`` false only lead terms are reduced.
    """
    key = basis.key
    p = dict(vec)
    rem: dict = {}
    quots = [dict() for _ in basis.items] if track else None
    while p:
        t = _lead(p, key)
        c = p[t]
        for idx, (bpos, bexp, bc, bv) in enumerate(basis.items):
            if bpos == t[0] and _divides(bexp, t[1]):
                mono = tuple(x - y for x, y in zip(t[1], bexp))
                f = c / bc
                _axpy(p, f, mono, bv)
                if track:
                    q = quots[idx]
                    v = q.get(mono, 0) + f
                    if v:
                        q[mono] = v
                    else:
                        q.pop(mono, None)
                break
        else:
            if not full:
                rem.update(p)
                break
            rem[t] = c
            del p[t]
    if track:
        return rem, quots
    return rem


def _spair(a, b):
    """S-vector data for basis items a, b (same lead position)."""
    lcm = tuple(max(x, y) for x, y in zip(a[1], b[1]))
    ma = tuple(x - y for x, y in zip(lcm, a[1]))
    mb = tuple(x - y for x, y in zip(lcm, b[1]))
    return lcm, ma, mb


def s_vector(a, b):
    lcm, ma, mb = _spair(a, b)
    s: dict = {}
    _axpy(s, -1 / a[2], ma, a[3])
    _axpy(s, 1 / b[2], mb, b[3])
    return s


def buchberger_vectors(vecs: Sequence[dict], key, product_criterion: bool = False) -> list:
    """Reduced Groebner basis of the span of ``vecs`` (list of monic vectors, ascending leads)."""
    gens = [v for v in vecs if v]
    gens.sort(key=lambda v: (key(_lead(v, key)), len(v)))
    basis = _Basis([], key)
    pairs: set = set()

    def add(v):
        v = _monic(v, key)
        basis.append(v)
        j = len(basis) - 1
        for i in range(j):
            if basis.items[i][0] == basis.items[j][0]:
                pairs.add((i, j))

    for v in gens:
        r = reduce_vector(v, basis)
        if r:
            add(r)

    def pair_key(p):
        i, j = p
        a, b = basis.items[i], basis.items[j]
        lcm = tuple(max(x, y) for x, y in zip(a[1], b[1]))
        return (key((a[0], lcm)), j, i)

    while pairs:
        p = min(pairs, key=pair_key)
        pairs.discard(p)
        i, j = p
        a, b = basis.items[i], basis.items[j]
        lcm, ma, mb = _spair(a, b)
        if product_criterion and all(x == 0 or y == 0 for x, y in zip(a[1], b[1])):
            continue
        if _chain_skip(i, j, lcm, a[0], basis, pairs):
            continue
        r = reduce_vector(s_vector(a, b), basis)
        if r:
            add(r)
    return _reduce_basis([it[3] for it in basis.items], key)


def _chain_skip(i, j, lcm, pos, basis, pairs):
    for k, it in enumerate(basis.items):
        if k in (i, j) or it[0] != pos:
            continue
        if _divides(it[1], lcm):
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                return True
    return False


def _reduce_basis(vecs, key):
    leads = [_lead(v, key) for v in vecs]
    keep = []
    for i, v in enumerate(vecs):
        li = leads[i]
        redundant = False
        for j, lj in enumerate(leads):
            if j == i or lj[0] != li[0] or not _divides(lj[1], li[1]):
                continue
            if lj != li or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(v)
    out = []
    for i, v in enumerate(keep):
        others = _Basis(keep[:i] + keep[i + 1 :], key)
        out.append(_monic(reduce_vector(v, others), key))
    out.sort(key=lambda v: key(_lead(v, key)))
    return out


# -- public types ------------------------------------------------------------

class ModuleElement:
    """Element of the free module R^rank; ``terms`` maps (position, exponents) to coefficients."""

    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring: RingSpec, rank: int, terms: dict | None = None):
        self.ring = ring
        self.rank = rank
        self.terms = {t: Fraction(c) for t, c in (terms or {}).items() if c}
        for pos, e in self.terms:
            if not 0 <= pos < rank or len(e) != ring.n:
                raise RingMismatch(f"term {(pos, e)} does not fit R^{rank}")

    @classmethod
    def from_polynomials(cls, entries: Sequence[Polynomial]) -> ModuleElement:
        ring = entries[0].ring
        terms = {}
        for pos, p in enumerate(entries):
            if p.ring != ring:
                raise RingMismatch("entries from different rings")
            for e, c in p.terms.items():
                terms[(pos, e)] = c
        return cls(ring, len(entries), terms)

    def components(self) -> list:
        comps = [dict() for _ in range(self.rank)]
        for (pos, e), c in self.terms.items():
            comps[pos][e] = c
        return [Polynomial._raw(self.ring, c) for c in comps]

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, ModuleElement)
            and self.ring == other.ring
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        return "ModuleElement(" + ", ".join(str(c) for c in self.components()) + ")"


def _to_vec(g) -> dict:
    if isinstance(g, Polynomial):
        return {(0, e): c for e, c in g.terms.items()}
    return dict(g.terms)


def _from_vec(vec: dict, ring: RingSpec, rank: int | None):
    if rank is None:
        return Polynomial._raw(ring, {e: c for (_, e), c in vec.items()})
    return ModuleElement(ring, rank, vec)


@dataclass
class GroebnerBasis:
    """A (reduced) Groebner basis; ``rank`` is None for ideals."""

    ring: RingSpec
    generators: list
    order: object
    reduced: bool = True
    rank: int | None = None

    def __post_init__(self):
        self._basis = _Basis([_to_vec(g) for g in self.generators if not _is_zero(g)], self.order.key)

    @property
    def leading_terms(self) -> list:
        return [(pos, e) for pos, e, _, _ in self._basis.items]

    @property
    def leading_monomials(self) -> list:
        return [e for _, e, _, _ in self._basis.items]

    def is_unit(self) -> bool:
        return self.rank is None and any(not any(e) for e in self.leading_monomials)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _is_zero(g) -> bool:
    return not g.terms


def _term_order(order, rank):
    if order is None:
        raise ValueError("missing order")
    if hasattr(order, "kind"):
        return PositionOverTerm(order)
    return order


def buchberger(gens: Sequence, order=None, ring: RingSpec | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal or submodule generated by ``gens``.

    ``order`` is a MonomialOrder (lifted position-over-term for modules) or a
    module term order.  Output is deterministic for a fixed order.
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("empty generator list needs an explicit ring")
        ring = gens[0].ring
    rank = None
    if gens and isinstance(gens[0], ModuleElement):
        rank = gens[0].rank
        if any(not isinstance(g, ModuleElement) or g.rank != rank for g in gens):
            raise RingMismatch("module elements of different ranks")
    if any(g.ring != ring for g in gens):
        raise RingMismatch("generators from different rings")
    order = order or ring.default_order
    torder = _term_order(order, rank)
    vecs = buchberger_vectors([_to_vec(g) for g in gens], torder.key, product_criterion=rank is None)
    return GroebnerBasis(ring, [_from_vec(v, ring, rank) for v in vecs], torder, True, rank)


def normal_form(g, G) -> object:
    """Fully reduced remainder of ``g`` on division by ``G``.

    ``G`` is a GroebnerBasis, or a plain list of divisors (ring default order).
    """
    if not isinstance(G, GroebnerBasis):
        G = GroebnerBasis(g.ring, list(G), PositionOverTerm(g.ring.default_order), reduced=False,
                          rank=getattr(g, "rank", None))
    if g.ring != G.ring:
        raise RingMismatch("element and basis in different rings")
    rank = g.rank if isinstance(g, ModuleElement) else None
    if rank != G.rank and G.generators:
        raise RingMismatch("element and basis live in different modules")
    return _from_vec(reduce_vector(_to_vec(g), G._basis), g.ring, rank)


def lift(g, G: GroebnerBasis):
    """Return (remainder, quotients) with g = sum q_i G_i + remainder."""
    rem, quots = reduce_vector(_to_vec(g), G._basis, track=True)
    ring = g.ring
    qs = [Polynomial._raw(ring, q) for q in quots]
    rank = g.rank if isinstance(g, ModuleElement) else None
    return _from_vec(rem, ring, rank), qs


def syzygies(gens: Sequence, order: MonomialOrder | None = None) -> list:
    """Generators of the kernel of e_i -> gens[i].

    Computed from a position-over-term Groebner basis of the graph vectors
    (gens[i], e_i); the elements vanishing in the first block are the syzygies.
    """
    gens = list(gens)
    if not gens:
        return []
    ring = gens[0].ring
    s = len(gens)
    if isinstance(gens[0], ModuleElement):
        r = gens[0].rank
    else:
        r = 1
    vecs = []
    for i, g in enumerate(gens):
        v = _to_vec(g)
        v[(r + i, (0,) * ring.n)] = Fraction(1)
        vecs.append(v)
    torder = PositionOverTerm(order or ring.default_order)
    gb = buchberger_vectors(vecs, torder.key)
    out = []
    for v in gb:
        if all(pos >= r for pos, _ in v):
            out.append(ModuleElement(ring, s, {(pos - r, e): c for (pos, e), c in v.items()}))
    return out
