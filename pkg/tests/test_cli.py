import io
import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from quanuml.cli import main
from quanuml.library import example_names


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_sim_bell_exact():
    code, out, err = run("sim", "examples:bell", "--exact")
    assert code == 0 and err == ""
    assert out == "00 0.500000000000\n11 0.500000000000\n"


def test_sim_json_and_shots():
    code, out, _ = run("sim", "examples:ghz3", "--json")
    assert json.loads(out) == {"000": 0.5, "111": 0.5}
    code, out, _ = run("sim", "examples:bell", "--shots", "100", "--seed", "3")
    assert code == 0
    assert sum(int(line.split()[1]) for line in out.splitlines()) == 100
    assert out == run("sim", "examples:bell", "--shots", "100", "--seed", "3")[1]


def test_shor_command():
    code, out, _ = run("shor", "--n", "15", "--x", "7", "--backend", "sim", "--seed", "1")
    assert code == 0
    assert "r=4" in out and "15 = 3 x 5" in out


def test_shor_unsupported_modulus_is_error():
    code, _, err = run("shor", "--n", "21", "--backend", "sim")
    assert code == 1 and "N = 21" in err


def test_check_reports_q001():
    code, out, err = run("check", str(FIXTURES / "validator" / "Q001.quml"))
    assert code == 1 and out == ""
    lines = err.splitlines()
    assert len(lines) == 1 and "error[Q001]" in lines[0]


def test_check_warnings_only_exits_zero():
    code, _, err = run("check", str(FIXTURES / "validator" / "Q008.quml"))
    assert code == 0 and "warning[Q008]" in err


def test_check_json():
    code, out, _ = run("check", "--json", str(FIXTURES / "validator" / "Q003.quml"))
    assert code == 1 and json.loads(out)[0]["code"] == "Q003"


def test_parse_error_is_positioned(tmp_path):
    bad = tmp_path / "bad.quml"
    bad.write_text("model M {\n  seq A { gate }\n}\n")
    code, _, err = run("check", str(bad))
    assert code == 1
    assert err.startswith(f"{bad}:2:16: error[parse]: expected gate name")


def test_usage_errors_exit_two(tmp_path):
    assert run()[0] == 2
    assert run("sim")[0] == 2
    assert run("sim", "examples:nope")[0] == 2
    assert run("sim", "examples:bell", "--seq", "Missing")[0] == 2
    assert run("compile", "examples:shor15")[0] == 2  # several top-level diagrams
    assert run("check", str(tmp_path / "absent.quml"))[0] == 2
    assert run("sim", "examples:bell", "--shots", "0")[0] == 2


def test_compile_targets(tmp_path):
    code, out, _ = run("compile", "examples:bell", "--target", "qasm3")
    assert code == 0 and out.startswith("OPENQASM 3.0;")
    target = tmp_path / "bell.json"
    code, out, _ = run("compile", "examples:bell", "--target", "ir-json", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["qubits"] == 2


def test_compile_sub_diagram_fails():
    code, _, err = run("compile", "examples:shor15", "--seq", "QFTDagger")
    assert code == 1 and "QFTDagger" in err


def test_render_and_metrics():
    code, out, _ = run("render", "examples:shor15", "--seq", "QFTDagger")
    assert code == 0 and out.startswith("@startuml QFTDagger\n")
    code, out, _ = run("metrics", "examples:grover2", "--json")
    assert code == 0 and json.loads(out)["ratio"] == 0.5


def test_fmt_is_fixpoint(tmp_path):
    code, first, _ = run("fmt", "examples:teleport-cnot-dynamic")
    path = tmp_path / "t.quml"
    path.write_text(first)
    assert run("fmt", str(path))[1] == first


def test_examples_list_show_export(tmp_path):
    code, out, _ = run("examples", "list")
    assert out.split() == example_names()
    code, out, _ = run("examples", "show", "bell")
    assert code == 0 and "model Bell" in out
    code, out, _ = run("examples", "export", str(tmp_path))
    assert code == 0
    for line in out.splitlines():
        assert run("check", line)[0] == 0
    assert len(out.splitlines()) == len(example_names())


@pytest.mark.parametrize(
    "argv",
    [
        ["sim", "examples:teleport-cnot-dynamic", "--shots", "500", "--seed", "9"],
        ["shor", "--n", "15", "--seed", "4"],
        ["metrics", "examples:fulladder4"],
        ["compile", "examples:shor15", "--seq", "Shor13"],
    ],
)
def test_stdout_is_deterministic(argv):
    assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quanuml", "sim", "examples:bell"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout == "00 0.500000000000\n11 0.500000000000\n"
