"""Duality decisions for complete intersections on a singular germ (Z, 0).

Everything here is algebra on weighted-homogeneous ideals, so global
polynomial computations agree with the local ones at the origin.  Verdicts
that claim a failure carry certificate lines that can be replayed through
plain ideal membership and dimension computations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .errors import (
    ChDualityError,
    CodimOutOfRange,
    ConditionNotMet,
    DegenerateInput,
    GenericityExhausted,
    MissingDeclaration,
    NotArtinian,
    NotCM,
    NotCompleteIntersection,
    NotHomogeneous,
    OutOfRange,
    SingularLocusNotCI,
    WitnessUnavailable,
)
from .groebner import normal_form
from .ideal import Ideal, codim, colon, membership, power_containment_index, radical_membership
from .loci import LocusReport, intrinsic_loci
from .poly import Polynomial, RingSpec, weighted_degree
from .resolution import FreeComplex, free_resolution

CERTIFIED_HOLDS = "CertifiedHolds"
FAILS_WITH_WITNESS = "FailsWithWitness"
FAILS_AT_NEARBY_POINT = "FailsAtNearbyPoint"
INDETERMINATE = "Indeterminate"

COEFF_RANGE = 10
MAX_ATTEMPTS = 32


# -- data types ---------------------------------------------------------------

@dataclass
class VarietyContext:
    J_Z: Ideal
    p_Z: int
    dim_Z: int
    loci: LocusReport
    resolution: FreeComplex

    @classmethod
    def from_ideal(cls, J_Z: Ideal, resolution: FreeComplex | None = None) -> VarietyContext:
        if not (J_Z.radical and J_Z.pure):
            raise MissingDeclaration("J_Z must be declared radical and pure-dimensional")
        if not J_Z.is_weighted_homogeneous():
            raise NotHomogeneous("J_Z must be weighted-homogeneous")
        res = resolution if resolution is not None else free_resolution(J_Z, minimal=True)
        loci = intrinsic_loci(J_Z, res)
        p = loci.p
        return cls(J_Z, p, J_Z.ring.n - p, loci, res)

    @property
    def ring(self) -> RingSpec:
        return self.J_Z.ring

    def codims(self) -> dict:
        """codim in Z of each nonempty intrinsic locus, keyed by k."""
        return {loc.k: loc.codim for loc in self.loci.intrinsic if not loc.empty}

    def is_cohen_macaulay(self) -> bool:
        return self.loci.is_cohen_macaulay()

    def with_tuple(self, f: Sequence[Polynomial]) -> Ideal:
        return Ideal(self.ring, list(self.J_Z.generators) + list(f), self.J_Z.order)

    def codim_in_Z(self, I: Ideal) -> int | None:
        c = codim(I)
        return None if c is None else c - self.p_Z


@dataclass
class TupleOnZ:
    f: tuple

    def __post_init__(self):
        self.f = tuple(self.f)

    @property
    def p(self) -> int:
        return len(self.f)

    @classmethod
    def on(cls, Z: VarietyContext, f: Sequence[Polynomial]) -> TupleOnZ:
        for g in f:
            if membership(g, Z.J_Z):
                raise ValueError(f"{g} vanishes identically on Z")
        return cls(tuple(f))

    def strings(self) -> list:
        return [str(g) for g in self.f]


@dataclass
class CertificateLine:
    """A replayable claim: ``member`` / ``non-member`` of ``element`` in the
    ideal, or ``codim`` (ambient codimension of the ideal equals ``value``)."""

    claim: str
    ideal: list
    element: Polynomial | None = None
    value: int | None = None
    note: str = ""

    def check(self, ring: RingSpec) -> bool:
        I = Ideal(ring, self.ideal)
        if self.claim == "member":
            return membership(self.element, I)
        if self.claim == "non-member":
            return not membership(self.element, I)
        if self.claim == "codim":
            return codim(I) == self.value
        raise ValueError(f"unknown claim {self.claim!r}")

    def to_json(self) -> dict:
        out = {"claim": self.claim, "ideal": [str(g) for g in self.ideal]}
        if self.element is not None:
            out["element"] = str(self.element)
        if self.value is not None:
            out["value"] = self.value
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: dict, ring: RingSpec) -> CertificateLine:
        return cls(
            data["claim"],
            [ring.parse(s) for s in data["ideal"]],
            ring.parse(data["element"]) if "element" in data else None,
            data.get("value"),
            data.get("note", ""),
        )


@dataclass
class Witness:
    """g annihilates the Coleff–Herrera product of ``f`` but g ∉ J(f) + J_Z."""

    f: TupleOnZ
    g: Polynomial
    certificate: list
    construction: str
    extra: dict = field(default_factory=dict)

    def verify(self, ring: RingSpec | None = None) -> bool:
        ring = ring or self.g.ring
        return all(line.check(ring) for line in self.certificate)

    def to_json(self) -> dict:
        return {
            "f": self.f.strings(),
            "g": str(self.g),
            "construction": self.construction,
            "certificate": [line.to_json() for line in self.certificate],
            **self.extra,
        }


@dataclass
class DualityVerdict:
    status: str
    condition_table: list = field(default_factory=list)
    witness: Witness | None = None
    branch: str | None = None
    existence_only: bool = False
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"status": self.status, "condition_table": self.condition_table}
        if self.branch:
            out["branch"] = self.branch
        if self.status == FAILS_AT_NEARBY_POINT:
            out["existence_only"] = self.existence_only
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class RegularSequenceResult:
    regular: bool
    failed_index: int | None = None
    witness: Polynomial | None = None
    certificate: list = field(default_factory=list)

    def __bool__(self):
        return self.regular

    def to_json(self) -> dict:
        out = {"regular": self.regular}
        if not self.regular:
            out["failed_index"] = self.failed_index
            out["witness"] = str(self.witness)
            out["certificate"] = [c.to_json() for c in self.certificate]
        return out


@dataclass
class SocleData:
    q: Ideal
    socle_dim: int
    length: int  # dim_C R/q

    def to_json(self) -> dict:
        return {"socle_dim": self.socle_dim, "length": self.length}


# -- complete intersections and the sufficient condition -------------------

def is_complete_intersection_on(Z: VarietyContext, f: TupleOnZ | Sequence[Polynomial]) -> bool:
    polys = f.f if isinstance(f, TupleOnZ) else tuple(f)
    c = codim(Z.with_tuple(polys))
    return c is not None and c == Z.p_Z + len(polys)


def _as_tuple(f) -> TupleOnZ:
    return f if isinstance(f, TupleOnZ) else TupleOnZ(tuple(f))


def duality_certificate(Z: VarietyContext, f) -> DualityVerdict:
    """Check codim_Z(Z^k ∩ Z_f) ≥ k + p + 1 for every nonempty Z^k."""
    f = _as_tuple(f)
    if not is_complete_intersection_on(Z, f):
        raise NotCompleteIntersection(f"{f.strings()} is not a complete intersection on Z")
    p = f.p
    rows = []
    for loc in Z.loci.nonempty_intrinsic():
        I = Z.with_tuple(f.f) + loc.ideal
        c = Z.codim_in_Z(I)
        bound = loc.k + p + 1
        rows.append({"k": loc.k, "codim": c, "bound": bound, "ok": c is None or c >= bound})
    status = CERTIFIED_HOLDS if all(r["ok"] for r in rows) else INDETERMINATE
    return DualityVerdict(status, rows)


def codim_table(Z: VarietyContext, p: int) -> list:
    rows = []
    for k, c in sorted(Z.codims().items()):
        rows.append({"k": k, "codim": c, "holds_bound": p + k + 1, "equality_bound": p + k})
    return rows


def threshold(Z: VarietyContext) -> int | None:
    """Largest p with codim_Z Z^k ≥ p + k for all k; None when Z is smooth."""
    cs = Z.codims()
    if not cs:
        return None
    return min(c - k for k, c in cs.items())


def p_duality_classification(Z: VarietyContext, p: int, seed: int = 0,
                             construct: bool = True) -> DualityVerdict:
    """Classify p-duality of (Z, 0) from the codimensions of the loci Z^k.

    Holds when codim Z^k ≥ p + k + 1 for all k.  Fails (possibly only at
    nearby points) at the threshold p, for every larger p in the
    Cohen–Macaulay case, and for larger p when the threshold is attained at
    k = 0.  Everything else is Indeterminate.
    """
    if not 1 <= p <= Z.dim_Z:
        raise OutOfRange(f"p must lie in 1..{Z.dim_Z}")
    rows = codim_table(Z, p)
    t = threshold(Z)
    if t is None or p < t:
        return DualityVerdict(CERTIFIED_HOLDS, rows)
    cm = Z.is_cohen_macaulay()
    cs = Z.codims()
    equality = [k for k, c in cs.items() if c == p + k]
    if p == t and any(k >= 1 for k in equality):
        branch = "non-cm"
    elif cm:
        branch = "cm"
    elif cs.get(0) == t:
        branch = "nearby-cm"
    else:
        return DualityVerdict(INDETERMINATE, rows,
                              notes=["the sufficient condition fails but no counterexample construction applies"])
    verdict = DualityVerdict(FAILS_AT_NEARBY_POINT, rows, branch=branch)
    if branch == "nearby-cm":
        verdict.existence_only = True
        verdict.notes.append("counterexample lives at a nearby Cohen-Macaulay point of Z^0 \\ Z^1")
        return verdict
    if not construct:
        verdict.existence_only = True
        return verdict
    try:
        if branch == "cm":
            verdict.witness = construct_counterexample_CM(Z, p, seed)
        else:
            verdict.witness = construct_counterexample_nonCM(Z, p, seed)
    except ChDualityError as exc:
        verdict.existence_only = True
        verdict.notes.append(f"{exc.code}: {exc}")
    return verdict


def normality(Z: VarietyContext) -> dict:
    """codim_Z Z^k ≥ k + 2 for all k ≥ 0 (Serre's R1 + S2)."""
    rows = []
    for k, c in sorted(Z.codims().items()):
        rows.append({"k": k, "codim": c, "bound": k + 2, "ok": c >= k + 2})
    return {"normal": all(r["ok"] for r in rows), "table": rows}


def depth_condition_Z1(Z: VarietyContext, q: int) -> bool:
    """depth along Z^1 is ≥ q iff codim_Z Z^k ≥ q + k for all k ≥ 1."""
    if q < 1:
        raise OutOfRange("q must be at least 1")
    return all(c >= q + k for k, c in Z.codims().items() if k >= 1)


def tensor_condition(Z: VarietyContext, f) -> tuple:
    """codim_Z(Z_f ∩ Z^l) ≥ p + l for every l ≥ 1; returns (ok, table)."""
    f = _as_tuple(f)
    if not is_complete_intersection_on(Z, f):
        raise NotCompleteIntersection(f"{f.strings()} is not a complete intersection on Z")
    rows = []
    for loc in Z.loci.nonempty_intrinsic():
        if loc.k < 1:
            continue
        c = Z.codim_in_Z(Z.with_tuple(f.f) + loc.ideal)
        bound = f.p + loc.k
        rows.append({"l": loc.k, "codim": c, "bound": bound, "ok": c is None or c >= bound})
    return all(r["ok"] for r in rows), rows


# -- regular sequences --------------------------------------------------------

def _smallest(polys: Sequence[Polynomial]) -> Polynomial:
    order = polys[0].ring.default_order
    return min(polys, key=lambda g: (order.key(g.lead_monomial()), len(g.terms), str(g)))


def is_regular_sequence_on(Z: VarietyContext, f) -> RegularSequenceResult:
    f = _as_tuple(f)
    ring = Z.ring
    prev = Ideal(ring, Z.J_Z.generators, Z.J_Z.order)
    for k, fk in enumerate(f.f, start=1):
        base = list(prev.generators)
        if membership(fk, prev):
            g = ring.one()
        else:
            quot = colon(prev, fk)
            extra = []
            for h in quot.generators:
                r = normal_form(h, prev.gb)
                if r:
                    extra.append(r.monic())
            if not extra:
                prev = prev + fk
                continue
            g = _smallest(extra)
        cert = [
            CertificateLine("member", base, g * fk, note=f"g*f_{k} in J_Z + (f_1..f_{k - 1})"),
            CertificateLine("non-member", base, g, note=f"g not in J_Z + (f_1..f_{k - 1})"),
        ]
        return RegularSequenceResult(False, k, g, cert)
    return RegularSequenceResult(True)


# -- socle -----------------------------------------------------------------------

def standard_monomials(I: Ideal, limit: int = 100000) -> list:
    """Monomials outside the lead-term ideal; NotArtinian if there are infinitely many."""
    leads = I.gb.leading_monomials
    n = I.ring.n
    if I.is_unit():
        return []
    for i in range(n):
        if not any(all(x == 0 for j, x in enumerate(e) if j != i) and e[i] > 0 for e in leads):
            raise NotArtinian(f"R/I is infinite dimensional (no pure power of {I.ring.variables[i]})")

    def standard(e):
        return not any(all(a <= b for a, b in zip(l, e)) for l in leads)

    found = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for e in frontier:
            for i in range(n):
                e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
                if e2 not in found and standard(e2):
                    found.add(e2)
                    nxt.append(e2)
        if len(found) > limit:
            raise NotArtinian("staircase too large")
        frontier = nxt
    order = I.ring.default_order
    return sorted(found, key=order.key)


def _rank(rows: list) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col] / pv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def socle_dimension(q: Ideal) -> SocleData:
    """dim_C {φ ∈ R/q : x_i φ = 0 for all i}, by linear algebra on the staircase."""
    ring = q.ring
    for v in ring.gens():
        if not radical_membership(v, q):
            raise NotArtinian(f"{v} is not nilpotent modulo q")
    if q.is_unit():
        raise NotArtinian("q is the unit ideal")
    basis = standard_monomials(q)
    index = {e: i for i, e in enumerate(basis)}
    # Column j of the multiplication map holds the coordinates of x_i * s_j.
    rows = [[Fraction(0)] * len(basis) for _ in range(ring.n * len(basis))]
    for j, e in enumerate(basis):
        s = Polynomial.monomial(ring, e)
        for i, x in enumerate(ring.gens()):
            r = normal_form(x * s, q.gb)
            for mono, c in r.terms.items():
                rows[i * len(basis) + index[mono]][j] = c
    return SocleData(q, len(basis) - _rank(rows), len(basis))


# -- generic complete intersections ---------------------------------------------

def _monomials_of_degree(ring: RingSpec, d: int) -> list:
    out = []
    w = ring.weights

    def rec(i, left, acc):
        if i == ring.n:
            if left == 0:
                out.append(tuple(acc))
            return
        for x in range(left // w[i] + 1):
            acc.append(x)
            rec(i + 1, left - x * w[i], acc)
            acc.pop()

    if d >= 0:
        rec(0, d, [])
    return out


def _pools(gens: Sequence[Polynomial], max_pool: int = 60):
    """Yield candidate spanning sets: by weighted degree when homogeneous, else the generators."""
    degs = [weighted_degree(g) for g in gens]
    if not all(isinstance(d, int) for d in degs):
        while True:
            yield list(gens)
    ring = gens[0].ring
    d = min(degs)
    while True:
        pool = []
        for g, dg in zip(gens, degs):
            for e in _monomials_of_degree(ring, d - dg):
                pool.append(g.mul_term(e))
                if len(pool) >= max_pool:
                    break
        if pool:
            yield pool
        d += 1


def _random_combination(pool, rng):
    ring = pool[0].ring
    while True:
        coeffs = [rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in pool]
        if any(coeffs):
            break
    acc = ring.zero()
    for c, h in zip(coeffs, pool):
        if c:
            acc = acc + h * c
    return acc


def _extend_ci(Z: VarietyContext, base: list, gens: list, count: int, rng) -> list:
    """Append ``count`` generic combinations of ``gens``, each cutting codim by one."""
    out = []
    current = list(base)
    target = Z.p_Z + len(base)
    for _ in range(count):
        target += 1
        pools = _pools(gens)
        pool = next(pools)
        for attempt in range(MAX_ATTEMPTS):
            if attempt and attempt % 4 == 0:
                pool = next(pools)
            h = _random_combination(pool, rng)
            if not h or membership(h, Z.J_Z):
                continue
            if codim(Z.with_tuple(current + [h])) == target:
                out.append(h)
                current.append(h)
                break
        else:
            raise GenericityExhausted(f"no generic element found after {MAX_ATTEMPTS} attempts")
    return out


def _useful_generators(V: Ideal, Z: VarietyContext) -> list:
    return [g for g in V.generators if not membership(g, Z.J_Z)]


def generic_ci_through(V: Ideal, Z: VarietyContext, target_codim: int, seed: int = 0) -> TupleOnZ:
    """A complete intersection on Z of length ``target_codim`` vanishing on V(V) ∩ Z."""
    if target_codim < 1:
        raise CodimOutOfRange("target codimension must be at least 1")
    c = Z.codim_in_Z(Z.with_tuple(V.generators))
    if c == 0:
        raise DegenerateInput("V contains Z")
    if c is not None and c < target_codim:
        raise CodimOutOfRange(f"V has codimension {c} in Z, below {target_codim}")
    gens = _useful_generators(V, Z)
    rng = random.Random(seed)
    return TupleOnZ(tuple(_extend_ci(Z, [], gens, target_codim, rng)))


def _is_origin(Z: VarietyContext, I: Ideal) -> bool:
    full = Z.with_tuple(I.generators)
    return all(radical_membership(v, full) for v in Z.ring.gens())


def _maximal_ideal(ring: RingSpec) -> Ideal:
    return Ideal(ring, ring.gens())


# -- counterexamples -------------------------------------------------------------

def construct_counterexample_CM(Z: VarietyContext, q: int, seed: int = 0) -> Witness:
    """f of length q through Z_sing and g ∈ J_V^(m-1) \\ I with g·J_V ⊆ I = J(f) + J_Z.

    Needs Z Cohen–Macaulay with codim_Z Z_sing ≤ q ≤ dim Z.  Explicit
    witnesses are produced when V(I) is the origin, so that J_V = m.
    """
    if not Z.is_cohen_macaulay():
        raise NotCM("Z is not Cohen-Macaulay at 0")
    sing = Z.loci.intrinsic_ideal(0)
    k = Z.loci.codim_in_Z(0)
    if k is None:
        raise CodimOutOfRange("Z is smooth; there is no singular locus to cut")
    if not k <= q <= Z.dim_Z:
        raise CodimOutOfRange(f"q must lie in {k}..{Z.dim_Z}")
    ring = Z.ring
    sing_gens = _maximal_ideal(ring) if _is_origin(Z, sing) else sing
    useful = _useful_generators(sing_gens, Z)
    last_error = None
    for attempt in range(4):
        rng = random.Random(seed + 7919 * attempt)
        try:
            f = _extend_ci(Z, [], useful, k, rng)
        except GenericityExhausted as exc:
            last_error = exc
            continue
        cut = Z.with_tuple(f)
        if all(radical_membership(s, cut) for s in sing.generators):
            break
        last_error = SingularLocusNotCI("the generic cut is larger than Z_sing")
    else:
        if isinstance(last_error, GenericityExhausted):
            raise last_error
        raise SingularLocusNotCI("Z_sing is not a complete intersection in Z")
    if q > k:
        f += _extend_ci(Z, f, ring.gens(), q - k, rng)
    I = Z.with_tuple(f)
    J_V = _maximal_ideal(ring)
    if not all(radical_membership(v, I) for v in ring.gens()):
        raise WitnessUnavailable("V(J(f) + J_Z) is not the origin; its radical ideal is not computed")
    m = power_containment_index(J_V, I)
    candidates = []
    for combo in combinations_with_replacement(J_V.generators, m - 1):
        h = ring.one()
        for x in combo:
            h = h * x
        if not membership(h, I):
            candidates.append(h)
    g = _smallest(candidates)
    base = list(I.generators)
    cert = [
        CertificateLine("codim", base, value=Z.p_Z + q, note="f is a complete intersection on Z"),
        CertificateLine("non-member", base, g, note="g not in J(f) + J_Z"),
    ]
    for h in J_V.generators:
        cert.append(CertificateLine("member", base, g * h, note=f"g*{h} in J(f) + J_Z"))
    return Witness(TupleOnZ(tuple(f)), g, cert, "cohen-macaulay",
                   {"power_index": m, "J_V": [str(h) for h in J_V.generators]})


def construct_counterexample_nonCM(Z: VarietyContext, p: int, seed: int = 0) -> Witness:
    """Zero-divisor witness from a length p+1 complete intersection through Z^1.

    Needs codim_Z Z^k ≥ k + p for all k with equality for some k ≥ 1.  The
    returned tuple is the prefix before the first zero divisor; g·f_j lies in
    the ideal of the prefix while g does not.
    """
    cs = Z.codims()
    if not cs or any(c < k + p for k, c in cs.items()):
        raise ConditionNotMet(f"codim Z^k ≥ k + {p} fails")
    if not any(c == k + p for k, c in cs.items() if k >= 1):
        raise ConditionNotMet(f"no equality codim Z^k = k + {p} with k ≥ 1")
    z1 = Z.loci.intrinsic_ideal(1)
    V = _maximal_ideal(Z.ring) if _is_origin(Z, z1) else z1
    f = generic_ci_through(V, Z, p + 1, seed)
    res = is_regular_sequence_on(Z, f)
    if res.regular:
        raise ConditionNotMet("the generic complete intersection through Z^1 is regular")
    j = res.failed_index
    prefix = TupleOnZ(f.f[: j - 1])
    cert = [CertificateLine("codim", list(Z.J_Z.generators) + list(f.f[:j]), value=Z.p_Z + j,
                            note=f"(f_1..f_{j}) is a complete intersection on Z")]
    cert += res.certificate
    return Witness(prefix, res.witness, cert, "non-cohen-macaulay",
                   {"regular_sequence_tuple": f.strings(), "zero_divisor": str(f.f[j - 1]),
                    "failed_index": j})
