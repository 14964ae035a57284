import json

import pytest

from mixed_moore.cli import cli, run
from mixed_moore.constructions import cycle, pentagonal_prism
from mixed_moore.mgf import parse_mgf


def test_bound(runner):
    """Test the bound command and its options."""
    result = runner.invoke(cli, ["bound", "-r", "1", "-z", "2", "-k", "3"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "34"

    result = runner.invoke(cli, ["bound", "-r", "2", "-z", "1", "-k", "3", "--layers", "--closed-form"])
    lines = result.output.splitlines()
    assert lines[0] == "28"
    assert "layer 1: 2 by edge, 1 by arc" in lines
    assert "layer 3: 10 by edge, 7 by arc" in lines
    assert lines[-1].startswith("closed_form = 2")


def test_bound_validation_error(runner):
    """Test that r = z = 0 exits with status 2 and a message."""
    result = runner.invoke(cli, ["bound", "-r", "0", "-z", "0", "-k", "2"])
    assert result.exit_code == 2
    assert "Error:" in result.output


def test_bound_json(runner):
    """Test the JSON Moore plan and the JSON error body."""
    result = runner.invoke(cli, ["bound", "-r", "2", "-z", "1", "-k", "3", "--format", "json"])
    assert result.exit_code == 0
    plan = json.loads(result.output)
    assert plan["moore_bound"] == 28
    assert plan["layers"][0] == [2, 1]
    assert plan["layers"][-1] == [10, 7]

    error = runner.invoke(cli, ["bound", "-r", "0", "-z", "0", "-k", "2", "--format", "json"])
    assert error.exit_code == 2
    body = json.loads(error.output)
    assert body["status"] == "error"
    assert body["message"]


def test_feasible_text_and_csv(runner):
    """Test the feasibility table in both formats."""
    result = runner.invoke(cli, ["feasible", "--r-list", "4,6", "--z-max", "20"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[1].split() == ["4", "-", "3", "1,4,7,10,...", "26,68,128,206,...", "Unknown"]
    assert lines[2].split()[:3] == ["6", "5", "-"]

    result = runner.invoke(cli, ["feasible", "--r-list", "8", "--format", "csv"])
    assert result.output.splitlines() == ["r,c1,c2,z,n,existence", "8,,5,,,Non-existent"]


def test_feasible_diameter_three(runner):
    """Test the multiplicity screen listing."""
    result = runner.invoke(cli, ["feasible", "--diameter", "3", "--z-max", "3"])
    lines = result.output.splitlines()
    assert lines[0] == "z=1 n=10 a=5 b=2 c=2 feasible"
    assert all(line.endswith("infeasible") for line in lines[1:])


def test_feasible_json(runner):
    """Test the JSON rows for both diameters."""
    result = runner.invoke(cli, ["feasible", "--r-list", "4,8", "--z-max", "10", "--entries", "0", "--format", "json"])
    rows = json.loads(result.output)
    assert rows[0] == {
        "r": 4,
        "c1": None,
        "c2": 3,
        "z": [1, 4, 7, 10],
        "n": [26, 68, 128, 206],
        "existence": "Unknown",
    }
    assert rows[1]["existence"] == "Non-existent"

    result = runner.invoke(cli, ["feasible", "--diameter", "3", "--z-max", "1", "--format", "json"])
    assert json.loads(result.output) == [{"z": 1, "n": 10, "a": 5, "b": 2, "c": 2, "feasible": True}]


def test_verify_h1(runner, mgf_file, h_graphs):
    """Test verifying H1 from a file."""
    result = runner.invoke(cli, ["verify", mgf_file(h_graphs[1]), "-k", "3"])
    assert result.exit_code == 0
    assert "sigma = (01)(23)(45)(67)(89)" in result.output
    assert "cycle_structure = m2=5" in result.output
    assert "equation diameter3 = holds" in result.output
    assert "verdict = almost_moore" in result.output


def test_verify_failure_exit_code(runner, mgf_file):
    """Test that a graph that is not almost Moore exits with status 1."""
    result = runner.invoke(cli, ["verify", mgf_file(pentagonal_prism()), "-k", "3"])
    assert result.exit_code == 1
    assert "failed_stage = order" in result.output


def test_verify_json(runner, mgf_file):
    """Test the JSON report for C6 at diameter 3."""
    result = runner.invoke(cli, ["verify", mgf_file(cycle(6)), "-k", "3", "--format", "json"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["verdict"] == "almost_moore"
    assert report["extrapolated"] is True


def test_verify_input_errors(runner, mgf_file, tmp_path):
    """Test exit status 3 for unreadable input and 2 for usage errors."""
    result = runner.invoke(cli, ["verify", str(tmp_path / "missing.mgf"), "-k", "3"])
    assert result.exit_code == 3
    assert "Error:" in result.output

    result = runner.invoke(cli, ["verify", mgf_file("n 3\nE 0 9\n"), "-k", "2"])
    assert result.exit_code == 3
    assert "line 2" in result.output

    result = runner.invoke(cli, ["verify", mgf_file(cycle(5))])
    assert result.exit_code == 2


def test_construct_then_verify(runner):
    """Test piping a construction into verify through stdin."""
    built = runner.invoke(cli, ["construct", "almost_moore_212"])
    assert built.exit_code == 0
    assert built.output.startswith("# almost_moore_212\nn 10\n")
    assert parse_mgf(built.output).n == 10

    result = runner.invoke(cli, ["verify", "-", "-k", "2"], input=built.output)
    assert result.exit_code == 0
    assert "verdict = almost_moore" in result.output
    assert "sigma_is_automorphism = True" in result.output


def test_construct_list_and_dot(runner):
    """Test the construction listing and Kautz word labels in DOT."""
    listing = runner.invoke(cli, ["construct", "--list"])
    assert "H 1: (r,z,k)=(1,1,3) almost_moore" in listing.output
    assert "kautz 3 2: (r,z,k)=(0,3,2) digraph almost_moore" in listing.output

    dot = runner.invoke(cli, ["construct", "kautz", "2", "2", "--dot"])
    assert dot.output.startswith("digraph kautz {")
    assert '"01"' in dot.output

    unknown = runner.invoke(cli, ["construct", "moore"])
    assert unknown.exit_code == 2

    line = runner.invoke(cli, ["construct", "line", "cycle", "3", "--dot"])
    assert line.exit_code == 0
    assert '"01" -> "10" [dir=none];' in line.output
    assert '"01" -> "12";' in line.output


def test_spectrum(runner, mgf_file, h_graphs):
    """Test the spectrum of H2."""
    result = runner.invoke(cli, ["spectrum", mgf_file(h_graphs[2])])
    assert result.exit_code == 0
    assert "charpoly = [1, 0, -5, 0, 5, -2, 0, 0, 0, 0, 0]" in result.output
    assert "with z = 1" in result.output
    assert "factored = " in result.output
    assert "trace_A2 = 10" in result.output


def test_census_command(runner):
    """Test the census output for the (1,1,2) Moore graphs."""
    result = runner.invoke(cli, ["census", "-r", "1", "-z", "1", "-k", "2", "--moore"])
    assert result.exit_code == 0
    assert result.output.startswith("count = 1\nexhaustive = true\n")
    assert "# representative 1\nn 6\n" in result.output

    empty = runner.invoke(cli, ["census", "-r", "1", "-z", "1", "-k", "2"])
    assert "count = 0" in empty.output
    assert "note: no 1-regular undirected part exists on 5 vertices" in empty.output

    refused = runner.invoke(cli, ["census", "-r", "1", "-z", "2", "-k", "3"])
    assert refused.exit_code == 2


def test_census_json(runner):
    """Test the JSON census with its representative and report."""
    result = runner.invoke(cli, ["census", "-r", "1", "-z", "1", "-k", "2", "--moore", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert (data["count"], data["n"], data["exhaustive"]) == (1, 6, True)
    assert data["spec"]["target"] == "moore"
    (representative,) = data["representatives"]
    assert representative["graph"]["n"] == 6
    assert len(representative["graph"]["edges"]) == 3
    assert representative["report"]["verdict"] == "moore"
    assert representative["report"]["degrees"]["totally_regular"] is True


def test_identities_and_zoo(runner):
    """Test that the identity suite and the zoo pass."""
    result = runner.invoke(cli, ["identities"])
    assert result.exit_code == 0
    assert "A5_cospectral_with_A4 = holds" in result.output
    assert "fails" not in result.output

    result = runner.invoke(cli, ["zoo"])
    assert result.exit_code == 0
    assert "expected" not in result.output


def test_run_returns_exit_codes(monkeypatch, tmp_path, capsys):
    """Test the run() wrapper used by the console script."""
    monkeypatch.setenv("MIXED_MOORE_CONFIG", "testing")
    assert run(["bound", "-r", "1", "-z", "1", "-k", "3"]) == 0
    assert capsys.readouterr().out.strip() == "11"
    assert run(["verify", str(tmp_path / "missing.mgf"), "-k", "3"]) == 3
    assert run(["no-such-command"]) == 2


@pytest.mark.parametrize("args", [["--help"], ["census", "--help"]])
def test_help(runner, args):
    """Test that help texts render."""
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    assert "Usage:" in result.output
