import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chduality.cli import CORPUS, corpus_expected, corpus_text, main
from chduality.errors import ParseError
from chduality.poly import DegreeFlag, weighted_degree
from chduality.problem import format_problem, parse_p_range, parse_problem
from chduality.report import replay_certificates, run, strip_timing


def entries(name, seed=0):
    return run(parse_problem(corpus_text(name)), seed=seed).to_json()["analyses"]


def result_of(name, kind, **params):
    for e in entries(name):
        if e["kind"] == kind and all(e["params"].get(k) == v for k, v in params.items()):
            return e["result"]
    raise KeyError(kind)


@pytest.mark.parametrize("name", CORPUS)
def test_bundled_files_parse(name):
    problem = parse_problem(corpus_text(name))
    assert problem.default_ideal() == "Z"
    decl = problem.ideals["Z"]
    assert decl.radical and decl.pure
    assert problem.analyses


def test_surface_weights_make_generators_homogeneous():
    problem = parse_problem(corpus_text("surface"))
    assert problem.ring.weights == (1, 2, 2, 3)
    degrees = [weighted_degree(g) for g in problem.ideals["Z"].generators]
    assert not any(isinstance(d, DegreeFlag) for d in degrees)


@pytest.mark.parametrize("text,line,fragment", [
    ("ring: x y x\n", 1, "duplicate"),
    ("ring: x y weights 1 0\n", 1, "weight"),
    ("ring: x y\nideal J: x, u\n", 2, "u"),
    ("ring: x y\nideal J: x\nideal J: y\n", 3, "J"),
    ("ring: x y\nideal J: x\nanalyze gb colour=red\n", 3, "colour"),
    ("ring: x y\nideal J: x\nanalyze frobnicate\n", 3, "frobnicate"),
    ("ring: x y\nideal J: x\nanalyze duality\n", 3, "tuple"),
    ("ideal J: x\n", 1, "ring"),
    ("ring: x y\nideal J weird: x\n", 2, "weird"),
])
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse_problem(text)
    assert str(exc.value).startswith(f"line {line}:")
    assert fragment in str(exc.value)


def test_comments_blank_lines_and_brackets():
    problem = parse_problem("# header\n\nring: a b   # trailing\nideal I [radical]: a*b\n")
    assert problem.ring.variables == ("a", "b")
    assert problem.ideals["I"].radical and not problem.ideals["I"].pure


def test_p_ranges():
    assert parse_p_range("2") == [2]
    assert parse_p_range("1..3") == [1, 2, 3]
    assert parse_p_range("0") == [0]  # range checks happen at classification
    for bad in ("3..1", "x", "1..", "", "-1"):
        with pytest.raises(ValueError):
            parse_p_range(bad)


@pytest.mark.parametrize("name", CORPUS)
def test_format_parse_round_trip_on_corpus(name):
    problem = parse_problem(corpus_text(name))
    assert parse_problem(format_problem(problem)) == problem


names = st.sampled_from(["x", "y", "z"])
monomials = st.lists(names, min_size=0, max_size=3).map(lambda v: "*".join(v) or "1")
terms = st.tuples(st.integers(-5, 5).filter(bool), monomials).map(lambda t: f"{t[0]}*{t[1]}")
generators = st.lists(terms, min_size=1, max_size=3).map(lambda ts: " + ".join(ts))


@settings(max_examples=60, deadline=None)
@given(st.lists(generators, min_size=1, max_size=3), st.lists(st.integers(1, 4), min_size=3, max_size=3))
def test_format_parse_round_trip(gens, weights):
    text = f"ring: x y z weights {' '.join(map(str, weights))}\nideal J radical: {', '.join(gens)}\n"
    text += "tuple f: x, y\nanalyze gb order=lex\nanalyze duality tuple=f\n"
    problem = parse_problem(text)
    assert parse_problem(format_problem(problem)) == problem


def test_quadric3_report():
    verdicts = result_of("quadric3", "p-duality")["verdicts"]
    assert [v["status"] for v in verdicts] == ["CertifiedHolds", "FailsAtNearbyPoint"]
    assert verdicts[1]["witness"]["certificate"]


def test_cusp_report():
    assert result_of("cusp", "normality")["normal"] is False
    ce = result_of("cusp", "counterexample")
    assert ce["status"] == "FailsWithWitness"
    assert ce["witness"]["g"] == "w"


def test_surface_report():
    summary = result_of("surface", "resolution")["summary"]
    assert (summary["projective_dimension"], summary["depth"]) == (3, 1)
    loci = result_of("surface", "loci")
    assert loci["cohen_macaulay"] is False
    reg = result_of("surface", "regular-sequence")
    assert reg["regular"] is False and reg["witness"] == "z2"
    assert result_of("surface", "depth-z1", q="2")["holds"] is False


@pytest.mark.parametrize("name", CORPUS)
def test_reports_match_golden_files(name):
    data = run(parse_problem(corpus_text(name)), seed=0).to_json()
    assert strip_timing(data) == corpus_expected(name)


def test_reports_are_deterministic():
    a, b = (json.dumps(strip_timing(run(parse_problem(corpus_text("surface")), seed=5).to_json()))
            for _ in range(2))
    assert a == b


def test_errors_are_recorded_per_entry():
    text = "ring: x y\nideal J: x^2, y\nanalyze loci\nanalyze socle\n"
    report = run(parse_problem(text))
    loci, socle = report.entries
    assert loci["error"]["code"] and "result" not in loci
    assert socle["result"]["socle_dim"] == 1
    assert not report.ok


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["report", "--corpus", "quadric3"]) == 0
    out = capsys.readouterr().out
    assert "CertifiedHolds" in out
    bad = tmp_path / "bad.problem"
    bad.write_text("ring: x x\n")
    assert main(["report", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    missing = tmp_path / "missing.problem"
    missing.write_text("ring: x y\nideal J: x*y\nanalyze loci\n")
    assert main(["report", str(missing)]) == 1
    assert main(["loci", "--corpus", "cusp", "--ideal", "nope"]) == 2
    assert main(["counterexample", "--corpus", "cusp"]) == 2


def test_cli_subcommands_json(capsys):
    assert main(["gb", "--corpus", "surface", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["analyses"][0]["kind"] == "gb"
    assert main(["duality", "--corpus", "quadric4", "--p", "3", "--json"]) == 0
    (entry,) = json.loads(capsys.readouterr().out)["analyses"]
    assert entry["result"]["verdicts"][0]["status"] == "FailsAtNearbyPoint"
    assert main(["duality", "--corpus", "surface", "--tuple", "g", "--json"]) == 0
    capsys.readouterr()
    assert main(["counterexample", "--corpus", "surface", "--p", "1", "--kind", "noncm", "--json"]) == 0
    (entry,) = json.loads(capsys.readouterr().out)["analyses"]
    assert entry["result"]["branch"] == "non-cm"


def test_cli_reads_stdin(monkeypatch, capsys):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("ring: x y\nideal J: x^2, x*y, y^2\nanalyze socle\n"))
    assert main(["report", "-", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["analyses"][0]["result"]["socle_dim"] == 2


def test_verify_subcommand(tmp_path, capsys):
    data = run(parse_problem(corpus_text("surface"))).to_json()
    good = tmp_path / "report.json"
    good.write_text(json.dumps(data))
    assert main(["verify", str(good)]) == 0
    assert "0 discrepancies" in capsys.readouterr().out
    # Tamper with one non-member claim: the element becomes a member.
    for e in data["analyses"]:
        if e["kind"] == "regular-sequence":
            line = next(c for c in e["result"]["certificate"] if c["claim"] == "non-member")
            line["element"] = "z1"
    assert replay_certificates(data).discrepancies
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data))
    assert main(["verify", str(bad)]) == 1
    assert main(["verify", str(tmp_path / "absent.json")]) == 2
