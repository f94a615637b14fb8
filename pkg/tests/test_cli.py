import io
import json
import subprocess
import sys

import pytest

from opbkit import corpus
from opbkit.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    return code, json.loads(out) if out else None, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in corpus.NAMES:
        p = tmp_path / f"{name}.json"
        p.write_text(corpus.text(name))
        paths[name] = str(p)
    bad = {"dims": [2, 2], "states": [
        {"label": "a", "factors": [[["1", "0"], ["0", "0"]], [["1", "0"], ["0", "0"]]]},
        {"label": "b", "factors": [[["1", "0"], ["1", "0"]], [["1", "0"], ["0", "0"]]]},
    ]}  # fmt: skip
    (tmp_path / "nonorth.json").write_text(json.dumps(bad))
    paths["nonorth"] = str(tmp_path / "nonorth.json")
    (tmp_path / "broken.json").write_text('{"dims":[2],"states":[{"label":"a","factors":[[["1","0"]]]}]}')
    paths["broken"] = str(tmp_path / "broken.json")
    kb = {"party": 2, "elements": [[[["1", "0"]] + [["0", "0"]] * 5, [["0", "0"], ["1", "0"]] + [["0", "0"]] * 4,
                                    [["0", "0"]] * 2 + [["1", "0"]] + [["0", "0"]] * 3], "rest"]}  # fmt: skip
    (tmp_path / "kb.json").write_text(json.dumps(kb))
    paths["kb"] = str(tmp_path / "kb.json")
    notop = {"party": 1, "elements": [[[["1", "0"], ["1", "0"], ["0", "0"]]], "rest"]}
    (tmp_path / "notop.json").write_text(json.dumps(notop))
    paths["notop"] = str(tmp_path / "notop.json")
    return paths


def test_analyze(files):
    code, obj, _ = run_json("analyze", files["s2"])
    assert code == 0
    assert obj["schema"] == "opbkit/1"
    assert obj["completeness"] == "INCOMPLETE_NON_SUBSPACE"
    assert obj["redundancy"] == [{"party": 2, "split": [2, 3], "redundant": False}]


def test_analyze_nonorthogonal_exit_2(files):
    code, obj, _ = run_json("analyze", files["nonorth"])
    assert code == 2 and obj["orthogonal"] is False and obj["violating_pair"] == ["a", "b"]


def test_other_commands_reject_nonorthogonal(files):
    for cmd in ("distinguish", "upb", "constraints"):
        code, obj, _ = run_json(cmd, files["nonorth"])
        assert code == 2 and obj["violating_pair"] == ["a", "b"]


def test_malformed_input_exit_1(files):
    code, out, err = run("analyze", files["broken"])
    assert code == 1 and out == "" and "states[0].factors[0]" in err
    code, _, err = run("analyze", "/nonexistent/file.json")
    assert code == 1 and "cannot read" in err
    code, _, err = run("analyze", "corpus:nope")
    assert code == 1


def test_bad_flags_exit_1(files):
    assert run("distinguish", files["s1"], "--depth", "x")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("constraints", files["s1"], "--party", "3")[0] == 1
    assert run("strong-local", files["s1"], "--bipartition", "12")[0] == 1
    assert run("render", files["s1"], "--format", "png")[0] == 1


def test_activate_examples(files):
    code, obj, _ = run_json("activate", files["s1"])
    assert code == 0 and obj["verdict"] == "NOT_ACTIVABLE" and obj["reason"] == "CLOSURE"
    code, obj, _ = run_json("activate", files["s2"])
    assert code == 0 and obj["verdict"] == "ACTIVABLE"
    assert obj["steps"][0]["party"] == 2 and obj["steps"][0]["outcome"] == 0
    assert len(obj["terminal"]["states"]) == 5


def test_upb_example(files):
    code, obj, _ = run_json("upb", files["tiles"])
    assert code == 0 and obj["upb"] is True
    code, obj, _ = run_json("upb", files["s2"])
    assert obj["upb"] is False and len(obj["witness"]) == 2


def test_distinguish_tree(files):
    code, obj, _ = run_json("distinguish", files["s1"], "--depth", "6")
    assert obj["verdict"] == "DISTINGUISHABLE"
    root = obj["tree"]
    assert root["type"] == "MEASURE" and root["party"] == 1
    assert [len(el) for el in root["pvm"]] == [1, 2]
    code, obj, _ = run_json("distinguish", files["tiles"])
    assert obj["verdict"] == "INDISTINGUISHABLE_PROJECTIVE" and "tree" not in obj


def test_constraints(files):
    code, obj, _ = run_json("constraints", files["s1"], "--party", "1")
    assert code == 0 and [p["dim_space"] for p in obj["parties"]] == [2]
    code, obj, _ = run_json("constraints", files["s1"])
    assert [p["dim_space"] for p in obj["parties"]] == [2, 1]


def test_measure_literal(files):
    code, obj, _ = run_json("measure", files["s2"], "--pvm", files["kb"])
    assert code == 0 and obj["orthogonality_preserving"] is True
    assert [o["closure"] for o in obj["outcomes"]] == ["NEW_DIRECTIONS", "NEW_DIRECTIONS"]
    code, obj, _ = run_json("measure", files["s1"], "--pvm", files["notop"])
    assert code == 2 and obj["orthogonality_preserving"] is False
    code, obj, _ = run_json("measure", files["s1"], "--party", "1")
    assert obj["enumerated"][0]["complete"] is True and len(obj["enumerated"][0]["pvms"]) == 1


def test_measure_pvm_wrong_party(files):
    code, _, err = run("measure", files["s1"], "--pvm", files["kb"])
    assert code == 1 and "pvm" in err


def test_strong_local(files):
    code, obj, _ = run_json("strong-local", files["s1"])
    assert obj["verdict"] == "STRONGLY_LOCAL" and obj["bipartitions"][0]["bipartition"] == "1|2"
    code, obj, _ = run_json("strong-local", files["s1"], "--bipartition", "1|2")
    assert obj["verdict"] == "NOT_ACTIVABLE"


def test_render(files):
    code, out, _ = run("render", files["s1"])
    assert code == 0 and out.startswith("tiling 3x3")
    code, out, _ = run("render", files["s2"], "--format", "svg", "--highlight", files["kb"])
    assert code == 0 and out.startswith("<svg") and "fill-opacity" in out


def test_corpus_command():
    code, obj, _ = run_json("corpus")
    assert obj["sets"] == list(corpus.NAMES)
    code, out, _ = run("corpus", "tiles")
    assert out == corpus.text("tiles")
    code, obj, _ = run_json("analyze", "corpus:s1")
    assert obj["completeness"] == "COMPLETE"


def test_byte_deterministic(files):
    a = run("activate", files["s2"])[1]
    b = run("activate", files["s2"])[1]
    assert a == b


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "opbkit", "upb", files["tiles"]], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["upb"] is True
