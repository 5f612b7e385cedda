import io
import json

import pytest

from scount import cli
from scount.corpus import k4_minus_edge, seventeen_vertex_graph
from scount.fallback.counter import CountCertificate, UncertifiedError
from scount.graph import complete_graph, serialize_graph, to_graph6


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return {
        "k4me": write("k4me.json", serialize_graph(k4_minus_edge())),
        "k4": write("k4.json", serialize_graph(complete_graph(4))),
        "L": write("L.json", '{"vertices":3,"edges":[[1,2],[0,1]],"marks":{"edge":[1,2],"apex":0}}'),
        "k3g6": write("k3.g6", to_graph6(complete_graph(3)) + "\n"),
        "big": write("g17.json", serialize_graph(seventeen_vertex_graph())),
        "bad": write("bad.json", '{"vertices": 3, "edges": [[0, 1]'),
        "loop": write("loop.json", '{"vertices": 3, "edges": [[1, 1]]}'),
        "cache": str(tmp_path / "cache.jsonl"),
    }


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


def test_count(files, capsys):
    code, doc, _ = run(capsys, "count", files["k4me"])
    assert code == 0 and doc == {"count": 4, "method": "fallback"}


def test_count_trace(files, capsys):
    code, doc, _ = run(capsys, "count", files["k4me"], "--trace")
    assert doc["tree"]["certificate"]["agreed_count"] == 4


def test_class(files, capsys):
    code, doc, _ = run(capsys, "class", files["L"])
    assert code == 0 and (doc["a"], doc["b"], doc["c"]) == (1, 1, 0)


def test_class_requires_marks(files, capsys):
    code, doc, _ = run(capsys, "class", files["k4me"])
    assert code == 1 and doc["kind"] == "domain"


def test_rigid(files, capsys):
    code, doc, _ = run(capsys, "rigid", files["k4"])
    assert code == 0 and doc["minimally_rigid"] is False


def test_graph6_input(files, capsys):
    code, doc, _ = run(capsys, "rigid", files["k3g6"])
    assert doc["minimally_rigid"] is True


def test_stdin(files, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(serialize_graph(k4_minus_edge())))
    code, doc, _ = run(capsys, "rigid", "-")
    assert doc["minimally_rigid"] is True


def test_split(files, capsys):
    code, doc, _ = run(capsys, "split", files["big"])
    assert code == 0
    sizes = {(len(s["left"]["vertices"]), len(s["right"]["vertices"])) for s in doc["splits"]}
    assert (10, 10) in sizes


def test_fallback_certificate(files, capsys):
    code, doc, _ = run(capsys, "fallback", files["k4me"], "--trials", "2", "--multihom")
    assert code == 0 and doc["count"] == 4
    assert doc["certificate"]["trials"] == [4, 4]
    assert doc["certificate"]["symmetry_pairing_ok"] is True


def test_not_rigid_is_domain_error(files, capsys):
    code, doc, err = run(capsys, "count", files["k4"])
    assert code == 1 and "not minimally rigid" in err


def test_invalid_graph_is_domain_error(files, capsys):
    code, doc, _ = run(capsys, "rigid", files["loop"])
    assert code == 1


@pytest.mark.parametrize("argv", [["frobnicate"], ["count"], ["count", "/nonexistent.json"],
                                  ["count", "--trials", "x", "f"]])
def test_usage_errors(argv, capsys):
    code, doc, _ = run(capsys, *argv)
    assert code == 3 and doc["kind"] == "usage"


def test_parse_error_reports_offset(files, capsys):
    code, doc, _ = run(capsys, "rigid", files["bad"])
    assert code == 3 and "byte" in doc["error"]


def test_numerical_failure(files, capsys, monkeypatch):
    def boom(g, cfg):
        raise UncertifiedError("uncertified: some paths could not be classified", CountCertificate())

    monkeypatch.setattr(cli, "run_fallback", boom)
    code, doc, _ = run(capsys, "fallback", files["k4me"])
    assert code == 2 and doc["kind"] == "numerical" and doc["certificate"]["trials"] == []


def test_cache_persist_stats_clear(files, capsys):
    run(capsys, "count", files["k4me"], "--cache", files["cache"])
    code, doc, _ = run(capsys, "count", files["k4me"], "--cache", files["cache"])
    assert doc["method"] == "cache"
    code, stats, _ = run(capsys, "cache", "stats", "--cache", files["cache"])
    assert stats["counts"] == 1
    code, stats, _ = run(capsys, "cache", "clear", "--cache", files["cache"])
    assert stats["entries"] == 0


def test_env_precedence(files, capsys, monkeypatch):
    _, flag, _ = run(capsys, "fallback", files["k4me"], "--seed", "5", "--trials", "1")
    monkeypatch.setenv("SCOUNT_SEED", "5")
    _, env, _ = run(capsys, "fallback", files["k4me"], "--trials", "1")
    assert flag == env
    monkeypatch.setenv("SCOUNT_SEED", "6")
    _, override, _ = run(capsys, "fallback", files["k4me"], "--seed", "5", "--trials", "1")
    assert override == flag
    _, other, _ = run(capsys, "fallback", files["k4me"], "--trials", "1")
    assert other["certificate"]["records"][0]["seed"] != flag["certificate"]["records"][0]["seed"]


def test_bad_env_value(files, capsys, monkeypatch):
    monkeypatch.setenv("SCOUNT_TRIALS", "many")
    code, doc, _ = run(capsys, "fallback", files["k4me"])
    assert code == 3


def test_identical_runs_identical_output(files, capsys):
    a = run(capsys, "count", files["k4me"], "--trace")
    b = run(capsys, "count", files["k4me"], "--trace")
    assert a == b


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "scount", "cache", "stats"], capture_output=True, text=True,
                         env={"PATH": "/usr/bin:/bin"})
    assert out.returncode == 0 and json.loads(out.stdout)["entries"] == 0
