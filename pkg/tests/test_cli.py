import json

import pytest

from quiverlag import cli


def run(*argv):
    return cli.run(list(argv))


def test_lambda_codim_n5():
    code, text, _ = run("lambda", "codim", "--n", "5")
    assert code == 0
    rows = [l for l in text.splitlines() if l and not l.startswith("#")][1:]
    assert len(rows) == 7 and all(r.endswith("True") for r in rows)


def test_dg_check_json_file():
    code, text, _ = run("dg", "check", "--quiver", "s3.json", "--potential", "xyz-commutator")
    assert code == 0 and "# result: PASS" in text


def test_trunc_print_relative_equations():
    code, text, _ = run("dg", "trunc", "--rel", "s1-in-s3", "--print")
    assert code == 0
    assert "[x_b, x_c] = x_{a*}\n[x_c, x_a] = 0\n[x_a, x_b] = 0" in text


def test_header_echoes_seed():
    _, text, _ = run("repvar", "moment", "--seed", "17")
    assert "# seed: 17" in text.splitlines()[:4]


@pytest.mark.parametrize("argv", [
    ("repvar", "tangent", "--max-n", "2", "--samples", "2", "--seed", "5"),
    ("lambda", "components", "--max-n", "2", "--samples", "2", "--seed", "3"),
    ("hilbert", "components", "--max-n", "2", "--count-up-to", "3", "--seed", "9"),
    ("dg", "cyclic", "--count", "5", "--seed", "2"),
])
def test_deterministic(argv):
    assert run(*argv)[1] == run(*argv)[1]


def test_txt_format():
    code, text, _ = run("hh", "h0dim", "--quiver", "s1", "--max-L", "2", "--format", "txt")
    assert code == 0 and "," not in text.splitlines()[3]


def test_out_file(tmp_path):
    out = tmp_path / "r.csv"
    assert cli.main(["lambda", "codim", "--n", "3", "--out", str(out)]) == 0
    assert out.read_text().startswith("# lambda codim")


def test_missing_file(tmp_path):
    assert run("dg", "check", "--quiver", str(tmp_path / "nope.json"))[0] == 2


def test_malformed_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("dg", "check", "--quiver", str(bad))[0] == 2
    schema = tmp_path / "schema.json"
    schema.write_text(json.dumps({"vertices": ["0"], "edges": [{"id": "a", "src": "0", "tgt": "9"}]}))
    assert run("dg", "check", "--quiver", str(schema))[0] == 2


def test_usage_error_exit():
    assert cli.main(["lambda", "nonsense"]) == 2


def test_bad_partition():
    assert run("lambda", "degeneration", "--partition", "2,0")[0] == 2
    assert run("lambda", "degeneration", "--eps", "0")[0] == 2


def test_repvar_jacobian():
    code, text, _ = run("repvar", "jacobian", "--n", "2", "--samples", "2")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ("dg", "build", "--quiver", "a2tilde", "--potential", "abc"),
    ("dg", "build", "--rel", "s1-in-s3", "--kind", "rel3", "--document"),
    ("hh", "smallcomplex", "--quiver", "s1", "--L", "2"),
    ("lambda", "isotropy", "--mu", "2,1"),
    ("lambda", "degeneration"),
    ("hilbert", "stability", "--max-n", "3"),
    ("hilbert", "strata", "--nested", "2,1;1"),
    ("hilbert", "count-nested", "--max-n", "5"),
])
def test_other_commands_pass(argv):
    code, text, _ = run(*argv)
    assert code == 0, text
