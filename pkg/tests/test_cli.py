import io
import json
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from artinlab.cli import bundled_graphs, main

DOCS = Path(__file__).resolve().parent.parent / "docs"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def validator(name):
    schemas = [json.loads(p.read_text()) for p in DOCS.glob("*.schema.json")]
    registry = Registry().with_resources((s["$id"], Resource.from_contents(s)) for s in schemas)
    schema = next(s for s in schemas if s["$id"].endswith(name))
    return jsonschema.Draft202012Validator(schema, registry=registry)


# -- classify / isomorphic ----------------------------------------------------------

def test_classify_pentagon_json():
    code, data = run_json("classify", "pentagon.graph", "--format", "json")
    assert code == 0
    assert data["properties"]["me_superrigid"]["status"] == "holds"
    validator("verdict.schema.json").validate(data)


def test_classify_text_and_override():
    code, text = run("classify", "square3")
    assert code == 0 and "me_superrigid" in text
    code, _ = run("classify", "square3", "--override", "vertex_rigid=maybe")
    assert code == 2


def test_isomorphic():
    code, data = run_json("isomorphic", "pentagon", "pentagon", "--format", "json")
    assert code == 0 and data["isomorphic"] is True
    assert sorted(data["mapping"]) == list("abcde")
    assert data["me_compare"] == "ME_equivalent_via_isomorphism"
    code, text = run("isomorphic", "square4", "pentagon")
    assert code == 0 and "not isomorphic" in text and "not_ME" in text


# -- dihedral -------------------------------------------------------------------------

def test_dihedral_commands():
    assert run("dihedral", "eq", "-m", "3", "s t s", "t s t") == (0, "equal\n")
    code, text = run("dihedral", "eq", "-m", "3", "s t", "t s")
    assert code == 0 and text.startswith("not equal")
    assert run("dihedral", "nf", "-m", "4", "s t s t s")[1].startswith("D^1 | s")
    assert run("dihedral", "center", "-m", "3")[1].startswith("s t s t s t")
    code, data = run_json("dihedral", "nf", "-m", "3", "a b", "--gens", "a,b", "--format", "json")
    assert code == 0 and data["normal_form"] == "D^0 | a b"


# -- bad input ------------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("classify", "no-such-graph"),
    ("dihedral", "eq", "-m", "3", "s u", "s"),
    ("dihedral", "nf", "-m", "1", "s"),
    ("theta", "ball", "--graph", "edge3", "--base", "G{s,u}"),
    ("theta", "check", "--graph", "edge3"),
    ("theta", "ball", "--graph", "edge3", "--base", "G{s,t}", "--radius", "-1"),
    ("lemma-suite",),
    ("frobnicate",),
])
def test_bad_input_exits_2(argv):
    assert run(*argv)[0] == 2


def test_bad_graph_file(tmp_path):
    path = tmp_path / "broken.graph"
    path.write_text("a b 1\n")
    assert run("classify", str(path))[0] == 2


# -- theta ------------------------------------------------------------------------------------

def test_theta_ball_dot():
    code, dot = run("theta", "ball", "--graph", "edge3.graph", "--base", "G{s,t}", "--radius", "1",
                    "-L", "1", "--format", "dot")
    assert code == 0
    assert dot.count("shape=box") + dot.count("shape=ellipse") == 5


def test_theta_link():
    code, text = run("theta", "link", "--graph", "edge3", "--vertex", "G{s,t}", "-L", "0")
    assert code == 0 and "2 neighbours" in text
    code, data = run_json("theta", "link", "--graph", "edge3", "--vertex", "F{s}", "--format", "json")
    assert code == 0 and [n["ref"] for n in data["neighbours"]] == ["G{s,t}"]


def ball_json(tmp_path, graph="path33", base="F{b}"):
    code, text = run("theta", "ball", "--graph", graph, "--base", base, "--radius", "2",
                     "-L", "1", "-K", "1", "--format", "json")
    assert code == 0
    data = json.loads(text)
    validator("patch.schema.json").validate(data)
    return data


def test_theta_check_clean_patch(tmp_path):
    path = tmp_path / "patch.json"
    path.write_text(json.dumps(ball_json(tmp_path)))
    code, data = run_json("theta", "check", "--graph", "path33", "--patch", str(path), "--format", "json")
    assert code == 0
    report = validator("lemma_report.schema.json")
    report.evolve(schema={"$ref": "artinlab/lemma_report.schema.json#/$defs/report"}).validate(data)


def test_theta_check_detects_injected_edge(tmp_path):
    data = ball_json(tmp_path)
    far = max(range(len(data["vertices"])), key=lambda i: data["vertices"][i]["distance"])
    data["edges"].append({"source": 0, "target": far, "stabilizer": "forged"})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert run("theta", "check", "--graph", "path33", "--patch", str(path))[0] == 1


def test_theta_check_reports_unresolved(tmp_path):
    data = ball_json(tmp_path)
    data["unresolved"] = [[0, 1]]
    path = tmp_path / "open.json"
    path.write_text(json.dumps(data))
    assert run("theta", "check", "--graph", "path33", "--patch", str(path))[0] == 3


def test_theta_check_unreadable_patch(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert run("theta", "check", "--graph", "path33", "--patch", str(path))[0] == 2


# -- lemma suite --------------------------------------------------------------------------------

def test_lemma_suite_edge3():
    code, text = run("lemma-suite", "edge3", "-L", "2")
    assert code == 0 and "== edge3" in text


def test_lemma_suite_pentagon_json():
    code, data = run_json("lemma-suite", "pentagon", "-L", "1", "-K", "1", "--radius", "1", "--format", "json")
    assert code == 0 and data["failed"] == 0
    validator("lemma_report.schema.json").validate(data)


def test_lemma_suite_ignores_worker_count(monkeypatch):
    outputs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("ARTINLAB_THREADS", threads)
        outputs.append(run("lemma-suite", "path33", "-L", "1", "-K", "1", "--radius", "1", "--format", "json"))
    assert outputs[0] == outputs[1] and outputs[0][0] == 0


def test_bundled_graphs_listed():
    names = bundled_graphs()
    assert {"edge3", "pentagon", "square4"} <= set(names)


# -- help --------------------------------------------------------------------------------------------

def test_help_shows_defaults(capsys):
    assert main(["lemma-suite", "--help"]) == 0
    text = capsys.readouterr().out
    assert "default: 2" in text and "--conjugator-length" in text
    assert main(["--help"]) == 0
    assert "ARTINLAB_THREADS" in capsys.readouterr().out
