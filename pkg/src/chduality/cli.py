"""Command-line front end.

    chduality report surface.problem --json
    chduality loci --corpus quadric3
    chduality duality --corpus quadric4 --p 1..3
    chduality counterexample --corpus cusp --p 1
    chduality verify report.json

Exit codes: 0 success, 1 when an analysis (or a certificate replay) fails,
2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import __version__
from .errors import ParseError
from .problem import Analysis, parse_p_range, parse_problem
from .report import replay_certificates, run

CORPUS = ("cusp", "quadric3", "quadric4", "surface")


def corpus_text(name: str) -> str:
    if name not in CORPUS:
        raise ParseError(f"unknown corpus entry {name!r} (choose from {', '.join(CORPUS)})")
    return resources.files("chduality").joinpath("corpus", f"{name}.problem").read_text("utf-8")


def corpus_expected(name: str) -> dict:
    text = resources.files("chduality").joinpath("corpus", f"{name}.expected.json").read_text("utf-8")
    return json.loads(text)


def _read_input(args) -> str:
    if args.corpus:
        return corpus_text(args.corpus)
    path = args.input or args.file
    if path is None:
        raise ParseError("no input: give a FILE, --input FILE or --corpus NAME")
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8: {exc}") from None


def _analyses_for(args, problem) -> list | None:
    """Analyses requested by a subcommand; None means the file's own list."""
    cmd = args.command
    if cmd == "report":
        return None
    params = {}
    if args.ideal:
        params["ideal"] = args.ideal
    if cmd == "gb":
        if args.order:
            params["order"] = args.order
        return [Analysis("gb", params)]
    if cmd == "resolve":
        return [Analysis("resolution", params)]
    if cmd == "loci":
        return [Analysis("loci", params)]
    if cmd == "duality":
        if args.tuple:
            return [Analysis("duality", {**params, "tuple": args.tuple})]
        if args.p:
            params["p"] = args.p
        return [Analysis("p-duality", params)]
    if cmd == "counterexample":
        if not args.p:
            raise ParseError("counterexample needs --p")
        return [Analysis("counterexample", {**params, "kind": args.kind, "p": args.p})]
    raise AssertionError(cmd)


def _check_names(problem, analyses):
    for a in analyses or []:
        name = a.params.get("ideal")
        if name is not None and name not in problem.ideals:
            raise ParseError(f"unknown ideal {name!r}")
        if name is None and not problem.ideals:
            raise ParseError("the problem declares no ideal")
        t = a.params.get("tuple")
        if t is not None and t not in problem.tuples:
            raise ParseError(f"unknown tuple {t!r}")


def render(value, indent: int = 0) -> list:
    """Plain-text rendering of a JSON value, one fact per line."""
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and not _flat(v):
                sub = render(v, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def format_text(report: dict) -> str:
    ring = report["ring"]
    out = [f"ring {' '.join(ring['variables'])} (weights {' '.join(map(str, ring['weights']))}), seed {report['seed']}"]
    for i, entry in enumerate(report["analyses"], start=1):
        params = " ".join(f"{k}={v}" for k, v in entry["params"].items())
        out.append("")
        out.append(f"[{i}] {entry['kind']} {params}".rstrip() + f"  ({entry['elapsed_ms']:.0f} ms)")
        if "error" in entry:
            out.append(f"  error {entry['error']['code']}: {entry['error']['message']}")
        else:
            out.extend(render(entry["result"], 1))
    return "\n".join(out) + "\n"


def _verify(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return 2
    result = replay_certificates(data)
    if args.json:
        print(json.dumps({"checked": result.checked, "discrepancies": result.discrepancies}, indent=2))
    else:
        print(f"replayed {result.checked} certificate lines, {len(result.discrepancies)} discrepancies")
        for line in result.discrepancies:
            print("  FAILED", json.dumps(line))
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chduality", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", nargs="?", help="problem file ('-' for stdin)")
        p.add_argument("--input", help="problem file (alternative to the positional argument)")
        p.add_argument("--corpus", choices=CORPUS, help="use a bundled example instead of a file")
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--seed", type=int, default=0, help="seed for generic constructions (default 0)")
        p.add_argument("--ideal", help="name of the ideal to analyze (default: first declared)")
        return p

    common(sub.add_parser("report", help="run every analysis listed in the file"))
    gb = common(sub.add_parser("gb", help="reduced Groebner basis"))
    gb.add_argument("--order", choices=("wgrevlex", "grevlex", "lex"))
    common(sub.add_parser("resolve", help="minimal free resolution and its summary"))
    common(sub.add_parser("loci", help="rank-degeneracy loci Z_k and Z^k"))
    d = common(sub.add_parser("duality", help="p-duality classification or a tuple certificate"))
    d.add_argument("--p", help="p or a range a..b (default: 1..dim Z)")
    d.add_argument("--tuple", help="check the sufficient condition for this named tuple")
    c = common(sub.add_parser("counterexample", help="construct a certified counterexample"))
    c.add_argument("--p", help="length of the tuple")
    c.add_argument("--kind", choices=("auto", "cm", "noncm"), default="auto")

    v = sub.add_parser("verify", help="replay the certificates of a JSON report")
    v.add_argument("file")
    v.add_argument("--json", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args)
    try:
        problem = parse_problem(_read_input(args))
        analyses = _analyses_for(args, problem)
        _check_names(problem, analyses)
        for a in analyses or []:
            if "p" in a.params:
                parse_p_range(a.params["p"])
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(problem, seed=args.seed, analyses=analyses)
    data = report.to_json()
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        sys.stdout.write(format_text(data))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
