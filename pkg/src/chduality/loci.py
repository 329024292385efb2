"""Rank-degeneracy loci Z_k of a resolution, the Jacobian singular locus, and the
intrinsic loci Z^0 = Z_sing, Z^k = Z_(p+k)."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import DegenerateInput, InvalidComplex, MissingDeclaration, NotHomogeneous
from .ideal import Ideal, codim
from .poly import Polynomial
from .resolution import FreeComplex, expected_ranks as _expected_ranks, free_resolution, verify_complex


def expected_ranks(res: FreeComplex) -> list:
    check = verify_complex(res)
    if not check.ok:
        raise InvalidComplex(f"not a complex: {check.problems[0]}")
    return _expected_ranks(res)


class _Minors:
    """All r×r minors of a polynomial matrix, by memoized Laplace expansion."""

    def __init__(self, M, ring):
        self.M = M
        self.ring = ring
        self.memo = {}

    def det(self, rows: tuple, cols: tuple) -> Polynomial:
        if not rows:
            return self.ring.one()
        k = (rows, cols)
        hit = self.memo.get(k)
        if hit is not None:
            return hit
        r0, rest = rows[0], rows[1:]
        acc = self.ring.zero()
        for i, c in enumerate(cols):
            a = self.M[r0][c]
            if not a:
                continue
            sub = self.det(rest, cols[:i] + cols[i + 1 :])
            if sub:
                acc = acc + a * sub if i % 2 == 0 else acc - a * sub
        self.memo[k] = acc
        return acc

    def all(self, r: int) -> list:
        nrows, ncols = len(self.M), len(self.M[0]) if self.M else 0
        out = []
        seen = set()
        for rows in combinations(range(nrows), r):
            for cols in combinations(range(ncols), r):
                d = self.det(rows, cols)
                if d:
                    m = d.monic()
                    if m not in seen:
                        seen.add(m)
                        out.append(m)
        return out


def minors(M: list, r: int, ring) -> list:
    return _Minors(M, ring).all(r)


def rank_drop_locus(res: FreeComplex, k: int) -> Ideal:
    """Ideal of r_k×r_k minors of f_k; its zero set is where f_k drops rank."""
    if not 1 <= k <= res.length:
        raise ValueError(f"k must lie in 1..{res.length}")
    r = expected_ranks(res)[k - 1]
    return Ideal(res.ring, minors(res.differential(k), r, res.ring))


def _require_flags(J: Ideal):
    missing = [name for name, flag in (("radical", J.radical), ("pure", J.pure)) if not flag]
    if missing:
        raise MissingDeclaration("ideal must be declared " + " and ".join(missing))


def singular_locus(J_Z: Ideal) -> Ideal:
    """J_Z plus the p×p minors of the Jacobian matrix (p = codim)."""
    _require_flags(J_Z)
    p = codim(J_Z)
    if p is None:
        raise ValueError("V(J_Z) is empty")
    ring = J_Z.ring
    jac = [[g.derivative(i) for i in range(ring.n)] for g in J_Z.generators]
    sing = Ideal(ring, list(J_Z.generators) + minors(jac, p, ring), J_Z.order)
    if codim(sing) == p:
        # A reduced Z is smooth on a dense open set; this can only fail for non-radical J_Z.
        raise DegenerateInput("the Jacobian criterion marks a whole component singular; J_Z is not radical")
    return sing


@dataclass
class Locus:
    k: int
    ideal: Ideal
    codim: int | None  # None when the locus is empty

    @property
    def empty(self) -> bool:
        return self.codim is None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "generators": self.ideal.generator_strings(),
            "codim": self.codim,
            "empty": self.empty,
        }


@dataclass
class LocusReport:
    """Ambient chain Z_k (codim in C^n) and intrinsic loci Z^k (codim in Z)."""

    p: int
    n: int
    resolution_length: int
    ambient_chain: list = field(default_factory=list)
    intrinsic: list = field(default_factory=list)

    def codim_in_Z(self, k: int) -> int | None:
        for loc in self.intrinsic:
            if loc.k == k:
                return loc.codim
        return None

    def intrinsic_ideal(self, k: int) -> Ideal | None:
        for loc in self.intrinsic:
            if loc.k == k:
                return loc.ideal
        return None

    def nonempty_intrinsic(self) -> list:
        return [loc for loc in self.intrinsic if not loc.empty]

    def is_cohen_macaulay(self) -> bool:
        return all(loc.empty for loc in self.intrinsic if loc.k >= 1)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "resolution_length": self.resolution_length,
            "ambient_chain": [loc.to_json() for loc in self.ambient_chain],
            "intrinsic": [loc.to_json() for loc in self.intrinsic],
        }


def intrinsic_loci(J_Z: Ideal, res: FreeComplex | None = None) -> LocusReport:
    """Build the minimal resolution of R/J_Z and read off Z_k and Z^k.

    Z^k is reported for k = 0 .. N - p + 1; the last entry is always empty.
    """
    _require_flags(J_Z)
    if not J_Z.is_weighted_homogeneous():
        raise NotHomogeneous("intrinsic loci need a weighted-homogeneous J_Z")
    if res is None:
        res = free_resolution(J_Z, minimal=True)
    p = codim(J_Z)
    n = J_Z.ring.n
    N = res.length
    chain = []
    for k in range(1, N + 1):
        I = rank_drop_locus(res, k)
        chain.append(Locus(k, I, codim(I)))
    report = LocusReport(p, n, N, chain)
    sing = singular_locus(J_Z)
    report.intrinsic.append(Locus(0, sing, _in_Z(codim(sing), p)))
    k = 1
    while True:
        if p + k <= N:
            loc = chain[p + k - 1]
            report.intrinsic.append(Locus(k, loc.ideal, _in_Z(loc.codim, p)))
            k += 1
        else:
            report.intrinsic.append(Locus(k, Ideal(J_Z.ring, [J_Z.ring.one()]), None))
            break
    return report


def _in_Z(c, p):
    return None if c is None else c - p
