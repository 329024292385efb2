"""Free complexes: Koszul complexes, Schreyer resolutions, graded minimalization,
tensor products and exactness bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import InvalidComplex, NotHomogeneous
from .groebner import (
    PositionOverTerm,
    SchreyerOrder,
    _Basis,
    _lead,
    _spair,
    _divides,
    reduce_vector,
    s_vector,
)
from .ideal import Ideal, codim
from .poly import DegreeFlag, Polynomial, RingSpec, weighted_degree


@dataclass
class FreeComplex:
    """0 <- E_0 <- E_1 <- ... <- E_N.

    ``differentials[k - 1]`` is the matrix of f_k : E_k -> E_(k-1), stored as a
    list of rows (rank E_(k-1) rows, rank E_k columns).  ``grading`` optionally
    lists the weighted degree of each basis element of each E_k.
    """

    ring: RingSpec
    ranks: list
    differentials: list
    grading: list | None = None

    def __post_init__(self):
        if len(self.differentials) != len(self.ranks) - 1:
            raise InvalidComplex("need one differential per pair of adjacent modules")
        for k, M in enumerate(self.differentials, start=1):
            rows, cols = self.ranks[k - 1], self.ranks[k]
            if len(M) != rows or any(len(r) != cols for r in M):
                raise InvalidComplex(f"f_{k} should be {rows}x{cols}")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def differential(self, k: int) -> list:
        return self.differentials[k - 1]

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "ranks": list(self.ranks),
            "differentials": [[[str(p) for p in row] for row in M] for M in self.differentials],
            "grading": self.grading,
        }

    @classmethod
    def from_json(cls, data: dict) -> FreeComplex:
        ring = RingSpec.from_json(data["ring"])
        mats = [[[ring.parse(s) for s in row] for row in M] for M in data["differentials"]]
        return cls(ring, list(data["ranks"]), mats, data.get("grading"))


@dataclass
class ResolutionSummary:
    betti: list
    projective_dimension: int
    depth: int
    codim: int
    is_cohen_macaulay: bool

    def to_json(self) -> dict:
        return {
            "betti": self.betti,
            "projective_dimension": self.projective_dimension,
            "depth": self.depth,
            "codim": self.codim,
            "is_cohen_macaulay": self.is_cohen_macaulay,
        }


# -- matrix helpers ----------------------------------------------------------

def _zero_matrix(ring, rows, cols):
    z = ring.zero()
    return [[z] * cols for _ in range(rows)]


def matmul(A: list, B: list, ring: RingSpec) -> list:
    rows = len(A)
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = _zero_matrix(ring, rows, cols)
    for i in range(rows):
        for j in range(cols):
            acc = ring.zero()
            for t in range(inner):
                a, b = A[i][t], B[t][j]
                if a and b:
                    acc = acc + a * b
            out[i][j] = acc
    return out


# -- Koszul and tensor products ---------------------------------------------

def koszul_complex(f: Sequence[Polynomial]) -> FreeComplex:
    """Koszul complex of f_1..f_p; basis of E_k is the k-subsets in lex order."""
    f = list(f)
    if not f or any(not g for g in f):
        raise ValueError("Koszul complex needs a nonempty list of nonzero polynomials")
    ring = f[0].ring
    p = len(f)
    bases = [list(combinations(range(p), k)) for k in range(p + 1)]
    index = [{S: i for i, S in enumerate(b)} for b in bases]
    mats = []
    for k in range(1, p + 1):
        M = _zero_matrix(ring, len(bases[k - 1]), len(bases[k]))
        for col, S in enumerate(bases[k]):
            for pos, s in enumerate(S):
                row = index[k - 1][S[:pos] + S[pos + 1 :]]
                M[row][col] = f[s] if pos % 2 == 0 else -f[s]
        mats.append(M)
    grading = None
    degs = [weighted_degree(g) for g in f]
    if all(isinstance(d, int) for d in degs):
        grading = [[sum(degs[s] for s in S) for S in b] for b in bases]
    return FreeComplex(ring, [comb(p, k) for k in range(p + 1)], mats, grading)


def tensor_complexes(E: FreeComplex, F: FreeComplex) -> FreeComplex:
    """(E⊗F)_k = ⊕_{i+j=k} E_i⊗F_j with d(ξ⊗η) = dξ⊗η + (-1)^i ξ⊗dη."""
    if E.ring != F.ring:
        raise ValueError("complexes over different rings")
    ring = E.ring
    N = E.length + F.length
    bases = []
    for k in range(N + 1):
        b = []
        for i in range(max(0, k - F.length), min(k, E.length) + 1):
            j = k - i
            b.extend((i, a, j, c) for a in range(E.ranks[i]) for c in range(F.ranks[j]))
        bases.append(b)
    index = [{t: n for n, t in enumerate(b)} for b in bases]
    mats = []
    for k in range(1, N + 1):
        M = _zero_matrix(ring, len(bases[k - 1]), len(bases[k]))
        for col, (i, a, j, c) in enumerate(bases[k]):
            if i >= 1:
                D = E.differentials[i - 1]
                for a2 in range(E.ranks[i - 1]):
                    if D[a2][a]:
                        M[index[k - 1][(i - 1, a2, j, c)]][col] = D[a2][a]
            if j >= 1:
                D = F.differentials[j - 1]
                sign = -1 if i % 2 else 1
                for c2 in range(F.ranks[j - 1]):
                    if D[c2][c]:
                        row = index[k - 1][(i, a, j - 1, c2)]
                        M[row][col] = M[row][col] + D[c2][c] * sign
        mats.append(M)
    grading = None
    if E.grading is not None and F.grading is not None:
        grading = [[E.grading[i][a] + F.grading[j][c] for (i, a, j, c) in b] for b in bases]
    return FreeComplex(ring, [len(b) for b in bases], mats, grading)


# -- exactness bookkeeping ------------------------------------------------------

def expected_ranks(cx: FreeComplex) -> list:
    """r_k = Σ_{i≥k} (-1)^(i-k) rank E_i for k = 1..N (returned as list index k-1)."""
    out = []
    for k in range(1, cx.length + 1):
        out.append(sum((-1) ** (i - k) * cx.ranks[i] for i in range(k, cx.length + 1)))
    return out


@dataclass
class ComplexCheck:
    ok: bool
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_complex(cx: FreeComplex) -> ComplexCheck:
    """Check f_(k-1)∘f_k = 0 exactly and that the expected ranks are non-negative."""
    problems = []
    for k in range(2, cx.length + 1):
        P = matmul(cx.differential(k - 1), cx.differential(k), cx.ring)
        for i, row in enumerate(P):
            for j, entry in enumerate(row):
                if entry:
                    problems.append({"composition": [k - 1, k], "row": i, "col": j, "value": str(entry)})
                    break
            if problems:
                break
        if problems:
            break
    for k, r in enumerate(expected_ranks(cx), start=1):
        if r < 0:
            problems.append({"expected_rank": k, "value": r})
    return ComplexCheck(not problems, problems)


# -- resolutions --------------------------------------------------------------

def _vec_column(vec, rows, ring):
    col = [dict() for _ in range(rows)]
    for (pos, e), c in vec.items():
        col[pos][e] = c
    return [Polynomial._raw(ring, t) for t in col]


def _schreyer_sort(vecs, key, n):
    leads = [_lead(v, key) for v in vecs]
    used = sorted({i for _, e in leads for i, x in enumerate(e) if x})
    if not used:
        return vecs
    v = used[0]
    order = sorted(range(len(vecs)), key=lambda i: -leads[i][1][v])
    return [vecs[i] for i in order]


def _prune(vecs, key):
    leads = [_lead(v, key) for v in vecs]
    keep = []
    for i, li in enumerate(leads):
        dominated = False
        for j, lj in enumerate(leads):
            if j != i and lj[0] == li[0] and _divides(lj[1], li[1]) and (lj != li or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(vecs[i])
    return keep


def schreyer_resolution(I: Ideal) -> FreeComplex:
    """Resolution of R/I by iterated Schreyer syzygies of the reduced Groebner basis."""
    ring = I.ring
    if I.is_zero():
        return FreeComplex(ring, [1], [], [[0]])
    order = PositionOverTerm(I.order)
    current = [{(0, e): c for e, c in g.terms.items()} for g in I.gb.generators]
    ranks = [1]
    mats = []
    key = order.key
    while current:
        current = _schreyer_sort(current, key, ring.n)
        mats.append(list(map(list, zip(*[_vec_column(v, ranks[-1], ring) for v in current]))))
        ranks.append(len(current))
        basis = _Basis(current, key)
        new_order = SchreyerOrder(order, [(it[0], it[1]) for it in basis.items])
        syz = []
        m = len(basis)
        for j in range(m):
            for i in range(j):
                a, b = basis.items[i], basis.items[j]
                if a[0] != b[0]:
                    continue
                lcm, ma, mb = _spair(a, b)
                rem, quots = reduce_vector(s_vector(a, b), basis, track=True)
                if rem:
                    raise InvalidComplex("S-vector did not reduce to zero; basis is not Groebner")
                vec = {(i, ma): 1 / a[2]}
                t = (j, mb)
                vec[t] = vec.get(t, 0) - 1 / b[2]
                for idx, q in enumerate(quots):
                    for mono, c in q.items():
                        t = (idx, mono)
                        v = vec.get(t, 0) - c
                        if v:
                            vec[t] = v
                        else:
                            vec.pop(t, None)
                if vec:
                    syz.append(vec)
        order = new_order
        key = order.key
        current = _prune(syz, key)
    return FreeComplex(ring, ranks, mats, _grading(ring, ranks, mats))


def _grading(ring, ranks, mats):
    degs = [[0]]
    for k, M in enumerate(mats):
        level = []
        for c in range(ranks[k + 1]):
            d = None
            for r in range(ranks[k]):
                e = M[r][c]
                if e:
                    w = weighted_degree(e)
                    if not isinstance(w, int):
                        return None
                    cand = w + degs[k][r]
                    if d is None:
                        d = cand
                    elif d != cand:
                        return None
            if d is None:
                return None
            level.append(d)
        degs.append(level)
    return degs


def _is_unit_entry(p: Polynomial) -> bool:
    return bool(p) and p.is_constant()


def minimalize(cx: FreeComplex) -> FreeComplex:
    """Split off rank-one summands at unit entries until none remain."""
    ring = cx.ring
    ranks = list(cx.ranks)
    mats = [[list(r) for r in M] for M in cx.differentials]
    grading = [list(g) for g in cx.grading] if cx.grading is not None else None
    while True:
        hit = None
        for k, M in enumerate(mats):
            for r, row in enumerate(M):
                for c, e in enumerate(row):
                    if _is_unit_entry(e):
                        hit = (k, r, c)
                        break
                if hit:
                    break
            if hit:
                break
        if hit is None:
            break
        k, r, c = hit
        _split(mats, ranks, k, r, c, ring)
        if grading is not None:
            del grading[k][r]
            del grading[k + 1][c]
    while len(ranks) > 1 and ranks[-1] == 0:
        ranks.pop()
        mats.pop()
        if grading is not None:
            grading.pop()
    return FreeComplex(ring, ranks, mats, grading)


def _split(mats, ranks, k, r, c, ring):
    # mats[k] : F_{k+1} -> F_k, unit at (r, c).
    M = mats[k]
    a = M[r][c].constant_term()
    N = mats[k + 1] if k + 1 < len(mats) else None
    P = mats[k - 1] if k >= 1 else None
    for c2 in range(ranks[k + 1]):
        if c2 == c or not M[r][c2]:
            continue
        lam = M[r][c2] * (1 / a)
        for i in range(ranks[k]):
            if M[i][c]:
                M[i][c2] = M[i][c2] - lam * M[i][c]
        if N is not None:
            N[c] = [x + lam * y for x, y in zip(N[c], N[c2])]
    for r2 in range(ranks[k]):
        if r2 == r or not M[r2][c]:
            continue
        mu = M[r2][c] * (1 / a)
        M[r2] = [x - mu * y for x, y in zip(M[r2], M[r])]
        if P is not None:
            for i in range(ranks[k - 1]):
                if P[i][r2]:
                    P[i][r] = P[i][r] + mu * P[i][r2]
    if N is not None and any(N[c]):
        raise InvalidComplex("split row of the next differential is not zero")
    if P is not None and any(P[i][r] for i in range(ranks[k - 1])):
        raise InvalidComplex("split column of the previous differential is not zero")
    del M[r]
    for row in M:
        del row[c]
    if N is not None:
        del N[c]
    if P is not None:
        for row in P:
            del row[r]
    ranks[k] -= 1
    ranks[k + 1] -= 1


def free_resolution(I: Ideal, minimal: bool = True) -> FreeComplex:
    if minimal and not I.is_weighted_homogeneous():
        raise NotHomogeneous("minimal resolutions need a weighted-homogeneous ideal")
    cx = schreyer_resolution(I)
    return minimalize(cx) if minimal else cx


def is_minimal(cx: FreeComplex) -> bool:
    return all(not e.constant_term() for M in cx.differentials for row in M for e in row)


def summarize(res: FreeComplex, I: Ideal) -> ResolutionSummary:
    """Betti numbers, projective dimension, depth (Auslander–Buchsbaum) and the CM flag."""
    if not I.is_weighted_homogeneous():
        raise NotHomogeneous("summary needs a minimal graded resolution")
    if not is_minimal(res):
        raise InvalidComplex("resolution is not minimal")
    hd = res.length
    c = codim(I)
    c = I.ring.n + 1 if c is None else c
    return ResolutionSummary(list(res.ranks), hd, I.ring.n - hd, c, hd == c)
