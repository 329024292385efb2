"""Line-oriented problem files.

Grammar (one declaration per line, ``#`` starts a comment)::

    ring: z1 z2 z3 z4 weights 1 2 2 3
    ideal J radical pure: z2*z3 - z1*z4, z3^3 - z4^2
    tuple f: z1, z3
    analyze regular-sequence ideal=J tuple=f

``weights`` may be omitted (all ones).  Ideal flags are optional and may be
written bare or in brackets (``ideal J [radical pure]: ...``).  Generators are
separated by commas.  ``analyze`` takes a kind followed by ``key=value``
parameters; ``p`` also accepts a range ``1..3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ChDualityError, ParseError
from .poly import RingSpec

FLAGS = ("radical", "pure")

# kind -> (allowed keys, required keys)
ANALYSES = {
    "gb": ({"ideal", "order"}, set()),
    "eliminate": ({"ideal", "vars"}, {"vars"}),
    "resolution": ({"ideal", "minimal"}, set()),
    "loci": ({"ideal"}, set()),
    "normality": ({"ideal"}, set()),
    "p-duality": ({"ideal", "p", "seed"}, set()),
    "duality": ({"ideal", "tuple"}, {"tuple"}),
    "complete-intersection": ({"ideal", "tuple"}, {"tuple"}),
    "regular-sequence": ({"ideal", "tuple"}, {"tuple"}),
    "depth-z1": ({"ideal", "q"}, {"q"}),
    "tensor-condition": ({"ideal", "tuple"}, {"tuple"}),
    "socle": ({"ideal"}, set()),
    "counterexample": ({"ideal", "kind", "p", "seed"}, {"p"}),
}

INT_KEYS = {"q", "seed"}
ORDERS = ("wgrevlex", "grevlex", "lex")
COUNTEREXAMPLE_KINDS = ("auto", "cm", "noncm")
_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_RANGE = re.compile(r"^(\d+)(?:\.\.(\d+))?$")


@dataclass
class IdealDecl:
    name: str
    generators: list
    radical: bool = False
    pure: bool = False


@dataclass
class Analysis:
    kind: str
    params: dict = field(default_factory=dict)
    line: int | None = field(default=None, compare=False)

    def describe(self) -> str:
        return " ".join([self.kind] + [f"{k}={v}" for k, v in self.params.items()])


@dataclass
class ProblemFile:
    ring: RingSpec
    ideals: dict = field(default_factory=dict)
    tuples: dict = field(default_factory=dict)
    analyses: list = field(default_factory=list)

    def default_ideal(self) -> str | None:
        return next(iter(self.ideals), None)


def parse_p_range(text: str) -> list:
    m = _RANGE.match(text.strip())
    if not m:
        raise ValueError(f"expected an integer or a range a..b, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _split_generators(text: str, ring: RingSpec, lineno: int) -> list:
    parts = [s.strip() for s in text.split(",")]
    if not any(parts):
        return []
    out = []
    for s in parts:
        if not s:
            raise ParseError("empty generator", line=lineno)
        try:
            out.append(ring.parse(s))
        except ChDualityError as exc:
            raise ParseError(str(exc), line=lineno) from None
        except (ValueError, SyntaxError) as exc:
            raise ParseError(f"cannot parse {s!r}: {exc}", line=lineno) from None
    return out


def _parse_ring(body: str, lineno: int) -> RingSpec:
    words = body.split()
    if "weights" in words:
        i = words.index("weights")
        names, wtexts = words[:i], words[i + 1:]
        try:
            weights = [int(w) for w in wtexts]
        except ValueError:
            raise ParseError("weights must be integers", line=lineno) from None
        if len(weights) != len(names):
            raise ParseError(f"{len(names)} variables but {len(weights)} weights", line=lineno)
        bad = [w for w in weights if w <= 0]
        if bad:
            raise ParseError(f"non-positive weight {bad[0]}", line=lineno)
    else:
        names, weights = words, []
    if not names:
        raise ParseError("ring needs at least one variable", line=lineno)
    seen = set()
    for v in names:
        if v in seen:
            raise ParseError(f"duplicate variable {v!r}", line=lineno)
        seen.add(v)
    try:
        return RingSpec(tuple(names), tuple(weights))
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno) from None


def _check_params(kind: str, params: dict, lineno: int):
    allowed, required = ANALYSES[kind]
    for key in params:
        if key not in allowed:
            raise ParseError(f"unknown parameter {key!r} for {kind}", line=lineno)
    for key in required:
        if key not in params:
            raise ParseError(f"{kind} needs {key}=...", line=lineno)
    for key, value in params.items():
        if key in INT_KEYS and not re.fullmatch(r"-?\d+", value):
            raise ParseError(f"{key} must be an integer", line=lineno)
        if key == "p":
            try:
                parse_p_range(value)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
        if key == "order" and value not in ORDERS:
            raise ParseError(f"unknown order {value!r}", line=lineno)
        if key == "kind" and value not in COUNTEREXAMPLE_KINDS:
            raise ParseError(f"kind must be one of {', '.join(COUNTEREXAMPLE_KINDS)}", line=lineno)
        if key == "minimal" and value not in ("true", "false"):
            raise ParseError("minimal must be true or false", line=lineno)


def parse_problem(text: str | bytes) -> ProblemFile:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    ring = None
    ideals, tuples, analyses = {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if line.startswith("ring:"):
            if ring is not None:
                raise ParseError("ring declared twice", line=lineno)
            ring = _parse_ring(line[len("ring:"):], lineno)
            continue
        if head in ("ideal", "tuple"):
            if ring is None:
                raise ParseError(f"{head} before ring declaration", line=lineno)
            decl, sep, body = rest.partition(":")
            if not sep:
                raise ParseError(f"expected ':' in {head} declaration", line=lineno)
            words = decl.replace("[", " ").replace("]", " ").split()
            if not words or not _NAME.match(words[0]):
                raise ParseError(f"{head} needs a name", line=lineno)
            name, flags = words[0], words[1:]
            if name in ideals or name in tuples:
                raise ParseError(f"name {name!r} already declared", line=lineno)
            gens = _split_generators(body, ring, lineno)
            if head == "ideal":
                for fl in flags:
                    if fl not in FLAGS:
                        raise ParseError(f"unknown ideal flag {fl!r}", line=lineno)
                ideals[name] = IdealDecl(name, gens, "radical" in flags, "pure" in flags)
            else:
                if flags:
                    raise ParseError("tuples take no flags", line=lineno)
                if not gens:
                    raise ParseError("empty tuple", line=lineno)
                tuples[name] = gens
            continue
        if head == "analyze":
            if ring is None:
                raise ParseError("analyze before ring declaration", line=lineno)
            words = rest.split()
            if not words:
                raise ParseError("analyze needs a kind", line=lineno)
            kind = words[0]
            if kind not in ANALYSES:
                raise ParseError(f"unknown analysis {kind!r}", line=lineno)
            params = {}
            for w in words[1:]:
                key, eq, value = w.partition("=")
                if not eq or not key or not value:
                    raise ParseError(f"expected key=value, got {w!r}", line=lineno)
                if key in params:
                    raise ParseError(f"parameter {key!r} given twice", line=lineno)
                params[key] = value
            _check_params(kind, params, lineno)
            analyses.append(Analysis(kind, params, lineno))
            continue
        raise ParseError(f"unrecognized line {line!r}", line=lineno)
    if ring is None:
        raise ParseError("missing ring declaration")
    problem = ProblemFile(ring, ideals, tuples, analyses)
    for a in analyses:
        _resolve_names(problem, a)
    return problem


def _resolve_names(problem: ProblemFile, a: Analysis):
    name = a.params.get("ideal")
    if name is None:
        if not problem.ideals:
            raise ParseError(f"{a.kind} needs an ideal but none is declared", line=a.line)
    elif name not in problem.ideals:
        raise ParseError(f"unknown ideal {name!r}", line=a.line)
    t = a.params.get("tuple")
    if t is not None and t not in problem.tuples:
        raise ParseError(f"unknown tuple {t!r}", line=a.line)
    if "vars" in a.params:
        for v in a.params["vars"].split(","):
            if v not in problem.ring.variables:
                raise ParseError(f"unknown variable {v!r}", line=a.line)


def _join(polys) -> str:
    return ", ".join(str(g) for g in polys)


def format_problem(problem: ProblemFile) -> str:
    ring = problem.ring
    lines = [f"ring: {' '.join(ring.variables)} weights {' '.join(map(str, ring.weights))}"]
    for decl in problem.ideals.values():
        flags = [fl for fl in FLAGS if getattr(decl, fl)]
        head = " ".join(["ideal", decl.name] + flags)
        lines.append(f"{head}: {_join(decl.generators)}")
    for name, gens in problem.tuples.items():
        lines.append(f"tuple {name}: {_join(gens)}")
    for a in problem.analyses:
        lines.append("analyze " + a.describe())
    return "\n".join(lines) + "\n"

