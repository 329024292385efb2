"""Execute the analyses of a problem file and assemble a JSON-ready report."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import __version__
from .duality import (
    FAILS_WITH_WITNESS,
    CertificateLine,
    DualityVerdict,
    TupleOnZ,
    VarietyContext,
    codim_table,
    construct_counterexample_CM,
    construct_counterexample_nonCM,
    depth_condition_Z1,
    duality_certificate,
    is_complete_intersection_on,
    is_regular_sequence_on,
    normality,
    p_duality_classification,
    socle_dimension,
    tensor_condition,
)
from .errors import ChDualityError
from .ideal import Ideal, codim, eliminate
from .poly import MonomialOrder, RingSpec
from .problem import Analysis, ProblemFile, parse_p_range
from .resolution import free_resolution, is_minimal, summarize

SCHEMA_VERSION = 1
TIMING_KEYS = ("elapsed_ms",)


@dataclass
class Report:
    problem: ProblemFile
    seed: int
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all("error" not in e for e in self.entries)

    def to_json(self) -> dict:
        p = self.problem
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "seed": self.seed,
            "ring": p.ring.to_json(),
            "ideals": {
                d.name: {"generators": [str(g) for g in d.generators], "radical": d.radical, "pure": d.pure}
                for d in p.ideals.values()
            },
            "tuples": {name: [str(g) for g in gens] for name, gens in p.tuples.items()},
            "analyses": self.entries,
        }


class _Runner:
    def __init__(self, problem: ProblemFile, seed: int):
        self.problem = problem
        self.seed = seed
        self._contexts = {}
        self._ideals = {}

    def ideal(self, a: Analysis) -> Ideal:
        name = a.params.get("ideal") or self.problem.default_ideal()
        if name not in self._ideals:
            d = self.problem.ideals[name]
            self._ideals[name] = Ideal(self.problem.ring, d.generators, radical=d.radical, pure=d.pure)
        return self._ideals[name]

    def context(self, a: Analysis) -> VarietyContext:
        name = a.params.get("ideal") or self.problem.default_ideal()
        if name not in self._contexts:
            self._contexts[name] = VarietyContext.from_ideal(self.ideal(a))
        return self._contexts[name]

    def tuple(self, a: Analysis, Z: VarietyContext) -> TupleOnZ:
        return TupleOnZ.on(Z, self.problem.tuples[a.params["tuple"]])

    def seed_for(self, a: Analysis) -> int:
        return int(a.params.get("seed", self.seed))

    # -- analyses --------------------------------------------------------------

    def run_gb(self, a):
        I = self.ideal(a)
        kind = a.params.get("order", "wgrevlex")
        ring = I.ring
        order = ring.default_order if kind == "wgrevlex" else MonomialOrder(kind)
        J = Ideal(ring, I.generators, order)
        return {"order": kind, "basis": [str(g) for g in J.gb.generators]}

    def run_eliminate(self, a):
        I = self.ideal(a)
        E = eliminate(I, a.params["vars"].split(","))
        return {"ring": E.ring.to_json(), "generators": E.generator_strings()}

    def run_resolution(self, a):
        I = self.ideal(a)
        minimal = a.params.get("minimal", "true") == "true"
        res = free_resolution(I, minimal=minimal)
        out = {
            "ranks": list(res.ranks),
            "length": res.length,
            "minimal": is_minimal(res),
            "grading": res.grading,
            "differentials": [[[str(p) for p in row] for row in M] for M in res.differentials],
        }
        if minimal:
            out["summary"] = summarize(res, I).to_json()
        return out

    def run_loci(self, a):
        Z = self.context(a)
        out = Z.loci.to_json()
        out["cohen_macaulay"] = Z.is_cohen_macaulay()
        return out

    def run_normality(self, a):
        return normality(self.context(a))

    def run_p_duality(self, a):
        Z = self.context(a)
        ps = parse_p_range(a.params["p"]) if "p" in a.params else list(range(1, Z.dim_Z + 1))
        verdicts = []
        for p in ps:
            v = p_duality_classification(Z, p, seed=self.seed_for(a))
            verdicts.append({"p": p, **v.to_json()})
        return {"verdicts": verdicts}

    def run_duality(self, a):
        Z = self.context(a)
        return duality_certificate(Z, self.tuple(a, Z)).to_json()

    def run_complete_intersection(self, a):
        Z = self.context(a)
        f = self.tuple(a, Z)
        c = codim(Z.with_tuple(f.f))
        return {
            "complete_intersection": is_complete_intersection_on(Z, f),
            "codim_in_Z": None if c is None else c - Z.p_Z,
            "length": f.p,
        }

    def run_regular_sequence(self, a):
        Z = self.context(a)
        return is_regular_sequence_on(Z, self.tuple(a, Z)).to_json()

    def run_depth_z1(self, a):
        q = int(a.params["q"])
        return {"q": q, "holds": depth_condition_Z1(self.context(a), q)}

    def run_tensor_condition(self, a):
        Z = self.context(a)
        ok, rows = tensor_condition(Z, self.tuple(a, Z))
        return {"holds": ok, "table": rows}

    def run_socle(self, a):
        I = self.ideal(a)
        data = socle_dimension(I)
        out = data.to_json()
        if I.is_weighted_homogeneous():
            out["top_betti"] = free_resolution(I).ranks[-1]
        return out

    def run_counterexample(self, a):
        Z = self.context(a)
        p = parse_p_range(a.params["p"])
        if len(p) != 1:
            raise ValueError("counterexample takes a single p")
        p = p[0]
        kind = a.params.get("kind", "auto")
        if kind == "auto":
            kind = "cm" if Z.is_cohen_macaulay() else "noncm"
        build = construct_counterexample_CM if kind == "cm" else construct_counterexample_nonCM
        w = build(Z, p, self.seed_for(a))
        verdict = DualityVerdict(FAILS_WITH_WITNESS, codim_table(Z, p), witness=w,
                                 branch="non-cm" if kind == "noncm" else kind)
        return {"p": p, **verdict.to_json()}


def run_analysis(runner: _Runner, a: Analysis) -> dict:
    entry = {"kind": a.kind, "params": dict(a.params)}
    start = time.perf_counter()
    method = getattr(runner, "run_" + a.kind.replace("-", "_"))
    try:
        entry["result"] = method(a)
    except (ChDualityError, ValueError, ArithmeticError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        entry["error"] = {"code": code, "message": str(exc)}
    entry["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return entry


def run(problem: ProblemFile, seed: int = 0, analyses: list | None = None) -> Report:
    """Run ``analyses`` (default: the problem's own) in order; errors are recorded per entry."""
    runner = _Runner(problem, seed)
    report = Report(problem, seed)
    for a in problem.analyses if analyses is None else analyses:
        report.entries.append(run_analysis(runner, a))
    return report


def strip_timing(data):
    """Copy of a report with timing fields removed, for golden comparisons."""
    if isinstance(data, dict):
        return {k: strip_timing(v) for k, v in data.items() if k not in TIMING_KEYS}
    if isinstance(data, list):
        return [strip_timing(v) for v in data]
    return data


def _certificates(data):
    if isinstance(data, dict):
        for k, v in data.items():
            if k == "certificate" and isinstance(v, list):
                yield v
            else:
                yield from _certificates(v)
    elif isinstance(data, list):
        for v in data:
            yield from _certificates(v)


@dataclass
class ReplayResult:
    checked: int
    discrepancies: list

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def replay_certificates(report: dict) -> ReplayResult:
    """Re-check every certificate line of a JSON report from scratch."""
    ring = RingSpec.from_json(report["ring"])
    checked, bad = 0, []
    for cert in _certificates(report.get("analyses", [])):
        for line in cert:
            checked += 1
            try:
                ok = CertificateLine.from_json(line, ring).check(ring)
            except (ChDualityError, ValueError) as exc:
                ok = False
                line = {**line, "error": str(exc)}
            if not ok:
                bad.append(line)
    return ReplayResult(checked, bad)
