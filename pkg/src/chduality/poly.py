"""Exact multivariate polynomials over the rationals.

Polynomials live in a :class:`RingSpec` (ordered variable names plus positive
integer weights).  Monomials are plain exponent tuples; coefficients are
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import ast
import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import ParseError, RingMismatch

Monomial = tuple  # tuple[int, ...]
Scalar = Union[int, Fraction]

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class RingSpec:
    variables: tuple
    weights: tuple = ()

    def __post_init__(self):
        variables = tuple(self.variables)
        weights = tuple(self.weights) if self.weights else (1,) * len(variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        for v in variables:
            if not isinstance(v, str) or not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(weights) != len(variables):
            raise ValueError("need exactly one weight per variable")
        if any(int(w) != w or w <= 0 for w in weights):
            raise ValueError(f"weights must be positive integers, got {weights}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "weights", tuple(int(w) for w in weights))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def default_order(self) -> MonomialOrder:
        return _wgrevlex(self.weights)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def one(self) -> Polynomial:
        return Polynomial.constant(self, 1)

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def var(self, name: str) -> Polynomial:
        e = [0] * self.n
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> list:
        return [self.var(v) for v in self.variables]

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)

    def extend(self, names: Iterable[str], weights: Iterable[int] | None = None, front=True) -> RingSpec:
        """Return a ring with extra variables prepended (or appended)."""
        names = tuple(names)
        ws = tuple(weights) if weights is not None else (1,) * len(names)
        if front:
            return RingSpec(names + self.variables, ws + self.weights)
        return RingSpec(self.variables + names, self.weights + ws)

    def fresh_name(self, stem: str) -> str:
        i = 0
        while f"{stem}{i}" in self.variables:
            i += 1
        return f"{stem}{i}"

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "weights": list(self.weights)}

    @classmethod
    def from_json(cls, data: Mapping) -> RingSpec:
        return cls(tuple(data["variables"]), tuple(data.get("weights") or ()))


def _grevlex_tail(e):
    return tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order; ``key`` maps exponents to a tuple where larger means larger.

    kinds: ``lex``, ``grevlex``, ``wgrevlex`` (weighted, needs ``weights``) and
    ``elim`` (block order: the first ``block`` variables are compared first,
    each block by weighted grevlex).
    """

    kind: str = "grevlex"
    weights: tuple = ()
    block: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "wgrevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "weights", tuple(self.weights))

    @classmethod
    def elimination(cls, block: int, weights=()) -> MonomialOrder:
        return cls("elim", tuple(weights), block)

    def key(self, e: Monomial):
        k = self._cache.get(e)
        if k is None:
            k = self._cache[e] = self._key(e)
        return k

    def _key(self, e):
        if self.kind == "lex":
            return e
        if self.kind == "grevlex":
            return (sum(e), _grevlex_tail(e))
        w = self.weights or (1,) * len(e)
        if len(w) != len(e):
            raise RingMismatch(f"order has {len(w)} weights, monomial has {len(e)} entries")
        if self.kind == "wgrevlex":
            return (sum(a * b for a, b in zip(w, e)), _grevlex_tail(e))
        b = self.block
        head, tail = e[:b], e[b:]
        return (
            sum(a * c for a, c in zip(w[:b], head)),
            _grevlex_tail(head),
            sum(a * c for a, c in zip(w[b:], tail)),
            _grevlex_tail(tail),
        )

    def to_json(self) -> dict:
        return {"kind": self.kind, "weights": list(self.weights), "block": self.block}


@lru_cache(maxsize=None)
def _wgrevlex(weights) -> MonomialOrder:
    return MonomialOrder("wgrevlex", weights)


def monomial_compare(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as m1 is smaller than, equal to or greater than m2."""
    if len(m1) != len(m2):
        raise RingMismatch("monomials from different rings")
    if m1 == m2:
        return 0
    return 1 if order.key(tuple(m1)) > order.key(tuple(m2)) else -1


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class DegreeFlag(enum.Enum):
    UNDEFINED = "undefined"
    NOT_HOMOGENEOUS = "not-homogeneous"


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping | None = None):
        self.ring = ring
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != ring.n:
                raise RingMismatch(f"monomial {e} does not fit ring with {ring.n} variables")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, ring: RingSpec, c: Scalar) -> Polynomial:
        c = Fraction(c)
        return cls._raw(ring, {(0,) * ring.n: c} if c else {})

    @classmethod
    def monomial(cls, ring: RingSpec, e: Monomial, c: Scalar = 1) -> Polynomial:
        return cls(ring, {tuple(e): c})

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring.variables} vs {other.ring.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw(self.ring, {})
            return Polynomial._raw(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return Polynomial._raw(self.ring, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, e: Monomial, c: Scalar = 1) -> Polynomial:
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(
            self.ring, {tuple(x + y for x, y in zip(m, e)): a * c for m, a in self.terms.items()}
        )

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.n, Fraction(0))

    def support(self) -> set:
        """Indices of variables that occur in some term."""
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def lead_monomial(self, order: MonomialOrder | None = None) -> Monomial:
        order = order or self.ring.default_order
        return max(self.terms, key=order.key)

    def lead_coefficient(self, order: MonomialOrder | None = None) -> Fraction:
        return self.terms[self.lead_monomial(order)]

    def monic(self, order: MonomialOrder | None = None) -> Polynomial:
        if not self.terms:
            return self
        return self * (1 / self.lead_coefficient(order))

    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        order = order or self.ring.default_order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def derivative(self, var: str | int) -> Polynomial:
        i = var if isinstance(var, int) else self.ring.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                terms[e2] = c * e[i]
        return Polynomial._raw(self.ring, terms)

    def embed(self, target: RingSpec) -> Polynomial:
        """Re-express in ``target``, matching variables by name."""
        if target == self.ring:
            return self
        pos = []
        for i, v in enumerate(self.ring.variables):
            if v in target.variables:
                pos.append(target.index(v))
            else:
                pos.append(None)
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * target.n
            for i, x in enumerate(e):
                if x:
                    if pos[i] is None:
                        raise RingMismatch(f"variable {self.ring.variables[i]} missing from target ring")
                    e2[pos[i]] = x
            terms[tuple(e2)] = c
        return Polynomial._raw(target, terms)

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def weighted_degree(p: Polynomial):
    """Common weighted degree of a weighted-homogeneous polynomial.

    Returns ``DegreeFlag.UNDEFINED`` for zero and ``DegreeFlag.NOT_HOMOGENEOUS``
    when the terms have different weighted degrees.
    """
    if not p.terms:
        return DegreeFlag.UNDEFINED
    w = p.ring.weights
    degrees = {sum(a * b for a, b in zip(w, e)) for e in p.terms}
    if len(degrees) != 1:
        return DegreeFlag.NOT_HOMOGENEOUS
    return degrees.pop()


def is_weighted_homogeneous(p: Polynomial) -> bool:
    return isinstance(weighted_degree(p), int)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring.variables} vs {b.ring.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _format_monomial(ring: RingSpec, e) -> str:
    parts = []
    for v, x in zip(ring.variables, e):
        if x == 1:
            parts.append(v)
        elif x:
            parts.append(f"{v}^{x}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, order: MonomialOrder | None = None) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms(order):
        mono = _format_monomial(p.ring, e)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)


# Parsing goes through Python's own expression grammar with a node whitelist.

@lru_cache(maxsize=4096)
def _parse_tree(text: str):
    try:
        return ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc.msg}") from None


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    if not text or not text.strip():
        raise ParseError("empty polynomial")

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in ring.variables:
                raise ParseError(f"unknown variable {node.id!r}")
            return ring.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(b, Polynomial):
                    if not b.is_constant() or b.is_zero():
                        raise ParseError("division only by nonzero constants")
                    b = b.constant_term()
                if not b:
                    raise ParseError("division by zero")
                return a / b
            if isinstance(node.op, ast.Pow):
                if isinstance(b, Polynomial):
                    if not b.is_constant():
                        raise ParseError("exponent must be a constant")
                    b = b.constant_term()
                if b.denominator != 1 or b < 0:
                    raise ParseError("exponent must be a non-negative integer")
                return a ** int(b)
        raise ParseError(f"unsupported syntax in {ast.dump(node)[:40]}")

    result = ev(_parse_tree(text.strip()))
    if isinstance(result, Fraction):
        return Polynomial.constant(ring, result)
    return result
