"""
test_cli.py
-----------
The command-line surface: reports, exit codes and JSON output.
"""

import os
import sys

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from main import execute
from persistence import load_report

DOCUMENTS = os.path.join(os.path.dirname(__file__), "documents")


def test_eval_prints_the_value(capsys):
    code = execute(["eval", "--ring", "z4", "--module", "regular", "--formula", "E y . x = y*2", "--expect", "2"])
    assert code == 0
    assert capsys.readouterr().out.startswith("eval: 2")


def test_contradicted_expectation_exits_one(capsys):
    code = execute(["eval", "--ring", "z4", "--module", "z2", "--formula", "E y . x = y*2", "--expect", "2"])
    assert code == 1
    assert "Expected '2', got '1'" in capsys.readouterr().out


def test_bad_input_exits_two(capsys):
    assert execute(["validate", os.path.join(DOCUMENTS, "broken_ringoid.json")]) == 2
    assert "❌" in capsys.readouterr().out
    assert execute(["eval", "--ring", "z4", "--module", "regular", "--formula", "x * = 0"]) == 2
    assert execute(["eval", "--ring", "no-such-ring", "--formula", "x = 0"]) == 2
    assert execute(["no-such-command"]) == 2


def test_validate_documents():
    assert execute(["validate", os.path.join(DOCUMENTS, "a2f2_ringoid.json"), "--expect", "valid"]) == 0
    assert execute(["validate", os.path.join(DOCUMENTS, "z2_over_z4_module.json"), "--ring", "z4"]) == 0


def test_demo_writes_a_report(tmp_path):
    out = tmp_path / "demo.json"
    assert execute(["demo-eps", "--json-out", str(out), "--expect", "[8, 4, 2, 4, 2]"]) == 0
    report = load_report(str(out))
    assert report.command == "demo-eps"
    assert report.decision == [8, 4, 2, 4, 2]
    assert report.timings is None
    assert execute(["demo-eps", "--field", "f3", "--expect", "[27, 9, 3, 9, 3]"]) == 0


def test_eliminations_from_the_command_line():
    assert execute(["qe", "--ring", "z6", "--formula", "E y . x = y*2", "--expect", "found"]) == 0
    assert execute(["qe", "--ring", "z4", "--formula", "E y . x = y*2", "--expect", "provably_none"]) == 0
    assert execute(["vnr", "--ring", "z6", "--expect", "yes"]) == 0
    assert execute(["vnr", "--ring", "z4", "--expect", "no"]) == 0


def test_suite_subset():
    assert execute(["suite", "--only", "1,2"]) == 0


def test_demo_4_3_is_the_primary_name(tmp_path):
    out = tmp_path / "demo.json"
    assert execute(["demo-4-3", "--field", "f2", "--json-out", str(out), "--expect", "[8, 4, 2, 4, 2]"]) == 0
    assert load_report(str(out)).command == "demo-4-3"
    assert execute(["pairs", "demo-4-3", "--expect", "[8, 4, 2, 4, 2]"]) == 0
    assert execute(["pairs", "demo", "--expect", "[8, 4, 2, 4, 2]"]) == 0


def test_search_commands_accept_every_bound_flag():
    assert execute(["qe", "--ring", "z6", "--formula", "E y . x = y*2",
                    "--bound-vars", "2", "--bound-cols", "2", "--expect", "found"]) == 0
    assert execute(["embed", "--ring", "z6", "--top", "x = x", "--bottom", "x = 0",
                    "--bound-vars", "1", "--bound-cols", "2"]) == 0
    assert execute(["vnr-harness", "--ring", "z6", "--free-vars", "1", "--bound-vars", "1",
                    "--bound-cols", "1", "--expect", "regular"]) == 0
