"""End-to-end command tests: exit codes, formats, determinism, caps."""

import json

import pytest

from latkit.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return {
        "b2": write(
            "b2.json",
            {
                "elements": ["0", "a", "b", "1"],
                "le": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
            },
        ),
        "c3": write(
            "c3.json",
            {"elements": ["0", "1", "2"], "le": [["0", "1"], ["1", "2"]]},
        ),
        "cyclic": write(
            "cyclic.json",
            {"elements": ["x", "y"], "le": [["x", "y"], ["y", "x"]]},
        ),
        "step": write(
            "step.json",
            {"name": "step", "table": {"0": "1", "1": "2", "2": "2"}},
        ),
        "gam": write(
            "gam.json",
            {"name": "gam", "table": {"0": "0", "a": "1", "b": "1", "1": "1"}},
        ),
        "partial": write("partial.json", {"table": {"0": "1"}}),
        "rules": write(
            "rules.json",
            [{"body": [], "head": "2"}, {"body": ["2"], "head": "1"}],
        ),
        "chain15": write(
            "chain15.json",
            {
                "elements": [f"e{i}" for i in range(15)],
                "le": [[f"e{i}", f"e{i+1}"] for i in range(14)],
            },
        ),
        "dir": tmp_path,
    }


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_validate_json(files, capsys):
    rc, out, _ = run(capsys, ["validate", files["b2"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["structure_level"] == "frame"
    assert doc["bottom"] == "0" and doc["top"] == "1"
    assert ["0", "a"] in doc["covers"]


def test_validate_dot(files, capsys):
    rc, out, _ = run(capsys, ["validate", files["b2"], "--format", "dot"])
    assert rc == 0
    assert out.startswith("digraph {")
    assert '"0" ' not in out  # nodes are n0..nk with label attributes
    assert 'label="0"' in out and "n0 -> n1;" in out


def test_closure_systems_spec_example(files, capsys):
    rc, out, _ = run(capsys, ["closure-systems", files["c3"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["count"] == 4
    assert ["2"] in doc["systems"] and ["0", "1", "2"] in doc["systems"]


def test_generate_spec_example(files, capsys):
    rc, out, _ = run(capsys, ["generate", files["c3"], files["step"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["closure"] == {"0": "2", "1": "2", "2": "2"}
    assert doc["fixpoints"] == ["2"]


def test_tarski_command(files, capsys):
    rc, out, _ = run(capsys, ["tarski", files["c3"], files["step"], "-x", "0"])
    assert rc == 0
    assert json.loads(out)["least_fixpoint"] == "2"


def test_nuclei_spec_example(files, capsys):
    rc, out, _ = run(capsys, ["nuclei", files["b2"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["count"] == 4
    fixsets = [nu["fixpoints"] for nu in doc["nuclei"]]
    assert ["a", "1"] in fixsets and ["1"] in fixsets


def test_nuclei_dot_lattice(files, capsys):
    rc, out, _ = run(capsys, ["nuclei", files["b2"], "--format", "dot"])
    assert rc == 0
    assert out.count("->") == 4  # covering relation of the 4-nucleus diamond


def test_heyting_command(files, capsys):
    rc, out, _ = run(capsys, ["heyting", files["b2"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["implication"]["a"]["0"] == "b"
    assert doc["implication"]["0"]["0"] == "1"


def test_nuclear_core_and_least_nucleus(files, capsys):
    rc, out, _ = run(capsys, ["nuclear-core", files["b2"], files["gam"]])
    assert rc == 0
    assert json.loads(out)["fixpoints"] == ["0", "a", "b", "1"]
    rc, out, _ = run(capsys, ["least-nucleus", files["b2"], files["gam"]])
    assert rc == 0
    assert json.loads(out)["fixpoints"] == ["1"]


def test_hmj_command(files, capsys):
    rc, out, _ = run(capsys, ["hmj", files["b2"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["count"] == 4
    assert {"filter": ["a", "1"], "quotient": ["b", "1"]} in doc["pairs"]


def test_rules_commands(files, capsys):
    rc, out, _ = run(capsys, ["rules", "default", files["c3"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["count"] == 8
    assert {"body": [], "head": "2"} in doc["rules"]

    rc, out, _ = run(capsys, ["rules", "nuclear", files["b2"]])
    assert rc == 0
    assert json.loads(out)["count"] == 9

    rc, out, _ = run(
        capsys, ["rules", "close", files["c3"], files["rules"], "--start", ""]
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["closure"] == ["1", "2"]


def test_convexity_command(files, capsys):
    rc, out, _ = run(capsys, ["convexity", files["c3"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["is_convex_geometry"] and doc["acyclic"]
    rc, out, _ = run(
        capsys, ["convexity", files["b2"], "--operator", "dcclsys"]
    )
    assert rc == 0
    assert json.loads(out)["is_convex_geometry"]


def test_sccore_command(files, capsys):
    rc, out, _ = run(capsys, ["sccore", files["b2"], files["gam"]])
    assert rc == 0
    doc = json.loads(out)
    assert doc["sccore"] == {"0": "0", "a": "1", "b": "1", "1": "1"}


def test_sccore_rejects_non_closure(files, capsys):
    rc, _, err = run(capsys, ["sccore", files["c3"], files["step"]])
    assert rc == 1
    assert "not a closure operator" in err


def test_cycle_is_input_error(files, capsys):
    rc, _, err = run(capsys, ["validate", files["cyclic"]])
    assert rc == 1
    assert "cycle" in err


def test_partial_table_is_parse_error(files, capsys):
    rc, _, err = run(capsys, ["tarski", files["c3"], files["partial"]])
    assert rc == 1
    assert "table not total" in err


def test_missing_file_is_parse_error(files, capsys):
    rc, _, err = run(capsys, ["validate", str(files["dir"] / "nope.json")])
    assert rc == 1
    assert "parse error" in err


def test_cap_exceeded_is_exit_2(files, capsys):
    rc, _, err = run(capsys, ["closure-systems", files["chain15"]])
    assert rc == 2
    assert "cap exceeded" in err and "--force" in err


def test_force_lifts_cap(files, capsys):
    rc, out, _ = run(capsys, ["closure-systems", files["chain15"], "--force"])
    assert rc == 0
    assert json.loads(out)["count"] == 2 ** 14


def test_cap_flag_and_env(files, capsys, monkeypatch):
    rc, _, _ = run(capsys, ["closure-systems", files["c3"], "--cap", "2"])
    assert rc == 2
    monkeypatch.setenv("LATKIT_CAP", "2")
    rc, _, _ = run(capsys, ["closure-systems", files["c3"]])
    assert rc == 2
    monkeypatch.setenv("LATKIT_CAP", "7")
    rc, _, _ = run(capsys, ["closure-systems", files["c3"]])
    assert rc == 0
    monkeypatch.setenv("LATKIT_CAP", "junk")
    rc, _, err = run(capsys, ["closure-systems", files["c3"]])
    assert rc == 1 and "LATKIT_CAP" in err


def test_dot_unsupported_is_input_error(files, capsys):
    rc, _, err = run(
        capsys, ["generate", files["c3"], files["step"], "--format", "dot"]
    )
    assert rc == 1
    assert "dot" in err


def test_unknown_command_is_exit_1(files, capsys):
    rc, _, err = run(capsys, ["frobnicate", files["c3"]])
    assert rc == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_output_to_file_and_determinism(files, capsys, tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["hmj", files["b2"], "--output", str(out1)]) == 0
    assert main(["hmj", files["b2"], "--output", str(out2)]) == 0
    capsys.readouterr()
    b1 = out1.read_bytes()
    assert b1 == out2.read_bytes()
    assert b1.endswith(b"\n")


def test_text_format(files, capsys):
    rc, out, _ = run(capsys, ["closure-systems", files["c3"], "--format", "text"])
    assert rc == 0
    assert out.splitlines()[0] == "4 closure systems"
