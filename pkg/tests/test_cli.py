import json
import subprocess
import sys

from partiality.actions import bernoulli_partial
from partiality.cli import main
from partiality.exact import ExactMatrix
from partiality.graphs import bouquet
from partiality.groups import cyclic_group


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    text = out.out if code == 0 else out.err
    return code, json.loads(text) if text.strip() else None


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_report_envelope(capsys):
    code, report = run_cli(capsys, "kpar", "--group", "Z2")
    assert code == 0
    assert set(report) == {"tool", "version", "command", "input_sha256", "bounds", "theorems", "result"}
    assert report["result"]["dim"] == report["result"]["span_closure_dim"] == 3


def test_reports_are_byte_identical(capsys):
    main(["spectrum", "--group", "Z4", "--relations", "semi-saturation"])
    first = capsys.readouterr().out
    main(["spectrum", "--group", "Z4", "--relations", "semi-saturation"])
    assert capsys.readouterr().out == first
    result = json.loads(first)["result"]
    assert result["size"] == 4 and result["equals_convex_subsets"]


def test_action_commands(tmp_path, capsys):
    path = write(tmp_path, "bern.json", bernoulli_partial(cyclic_group(3)).to_json())
    code, report = run_cli(capsys, "action-validate", path)
    assert code == 0 and report["result"]["valid"]
    code, report = run_cli(capsys, "globalize", path)
    assert report["result"]["restriction_recovers_action"]
    assert report["result"]["constructions_equivalent"]
    code, report = run_cli(capsys, "crossed-product", path)
    assert report["result"]["dim"] == 8


def test_axiom_failure_is_a_verdict(tmp_path, capsys):
    data = {"group": "Z_n(3)", "carrier": ["p", "q", "r"],
            "domains": {"1": ["q", "r"], "2": ["p", "q"]},
            "maps": {"1": {"p": "q", "q": "r"}, "2": {"q": "p", "r": "q"}}}
    code, report = run_cli(capsys, "action-validate", write(tmp_path, "bad.json", data))
    assert code == 0
    assert report["result"]["valid"] is False
    assert report["result"]["axiom"]


def test_unknown_element_label_exits_2(tmp_path, capsys):
    data = {"group": "Z2", "carrier": ["x"], "domains": {"g": ["x"]}, "maps": {"g": {"x": "x"}}}
    code, report = run_cli(capsys, "action-validate", write(tmp_path, "bad.json", data))
    assert code == 2
    assert report["error"] == "format"


def test_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, report = run_cli(capsys, "action-validate", str(path))
    assert code == 2 and report["error"] == "format"


def test_missing_file_exits_2(capsys):
    code, _ = run_cli(capsys, "graph-analyze", "/nonexistent/graph.json")
    assert code == 2


def test_precondition_failure_exits_1(capsys):
    code, report = run_cli(capsys, "ql-faithful", "--structure", "ZN", "0")
    assert code == 1
    assert report["error"] == "PreconditionError"


def test_argparse_errors_exit_2(capsys):
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_quasilattice_commands(capsys):
    code, report = run_cli(capsys, "ql-wh-mult", "--structure", "ZN", "2", "1", "3", "4")
    assert report["result"]["product"] == "v[4]v[4]*"
    code, report = run_cli(capsys, "ql-join", "a", "b")
    assert report["result"]["join"] is None
    code, report = run_cli(capsys, "ql-sigma-tau", "a b a^-1")
    assert report["result"] == {"defined": True, "sigma": "ab", "tau": "a"}
    code, report = run_cli(capsys, "ql-scarparo", "--bound", "5")
    assert report["result"]["quasi_lattice_fails"]


def test_fell_commands(capsys):
    code, report = run_cli(capsys, "fell-parseval", "bernoulli:Z2", "--count", "5")
    assert report["result"]["holds"]
    code, report = run_cli(capsys, "fell-fourier", "group:Z3")
    assert report["result"]["coefficients_of_fiber_operators"]
    code, report = run_cli(capsys, "fell-grading", "bernoulli:Z3")
    assert report["result"]["grading"]["ok"]


def test_piso_commands(tmp_path, capsys):
    s = ExactMatrix.unit(2, 0, 1)
    path = write(tmp_path, "pair.json", {"s": s.to_json(), "t": (s + ExactMatrix.unit(2, 1, 0)).to_json()})
    code, report = run_cli(capsys, "piso-order", path)
    assert report["result"]["s_leq_t"] and not report["result"]["t_leq_s"]
    path = write(tmp_path, "gens.json", {"generators": [s.to_json()]})
    code, report = run_cli(capsys, "piso-tame", path)
    assert report["result"]["tame_up_to_bound"]


def test_graph_commands(tmp_path, capsys):
    path = write(tmp_path, "bouquet.json", bouquet(2).to_json())
    code, report = run_cli(capsys, "graph-analyze", path)
    assert report["result"]["simple"] is True
    code, report = run_cli(capsys, "graph-tau", path, "--word", "a b^-1", "--path", "b;a")
    assert report["result"]["image"] is not None
    code, report = run_cli(capsys, "graph-semigroup", path, "--x", "v:v|a", "--y", "a|v:v")
    assert report["result"]["product"] != "0"


def test_out_option(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["apar", "--group", "Z3", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["result"]["dim"] == 4


def test_stdin_input():
    data = json.dumps(bouquet(2).to_json())
    proc = subprocess.run([sys.executable, "-m", "partiality.cli", "graph-classify", "-"],
                          input=data, capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["result"]["sinks"] == []
    assert len(report["input_sha256"]) == 64
