import io
import json
import subprocess
import sys

import pytest

from toric_ends.cli import main, parse_invariant_document, run_command
from toric_ends.errors import SchemaError

SQRT2 = {"kind": "quadratic", "a": 0, "b": -1, "c": 1, "d": 2}
INF_NA = {"kind": "rational", "slope": "1/0", "attained": False}


def end_doc(target, prefix=(), tail=None, **extra):
    signs = {"prefix": list(prefix)}
    if tail is not None:
        signs["tail"] = tail
    doc = {"boundary": {"slope": "-1/1", "div": 1}, "target": target, "signs": signs}
    doc.update(extra)
    return doc


def invoke(command, doc, *args):
    stdin = sys.stdin
    stdout = sys.stdout
    sys.stdin = io.StringIO(json.dumps(doc))
    sys.stdout = io.StringIO()
    try:
        code = main([command, *args])
        return code, sys.stdout.getvalue()
    finally:
        sys.stdin = stdin
        sys.stdout = stdout


def test_path_command():
    code, out = invoke("path", {"start": "-1/1", "target": SQRT2, "n": 4})
    assert code == 0
    assert json.loads(out) == {"vertices": ["-1/1", "-4/3", "-7/5", "-24/17"]}


def test_blocks_command():
    code, out = invoke("blocks", {"start": "-1/1", "target": SQRT2, "count": 2})
    assert code == 0
    doc = json.loads(out)
    assert doc["blocks"][0] == {
        "start": 0, "end": 2, "length": 3, "witness": [1, 2, -2, -3], "infinite": False}


def test_classify_command_round_trips():
    code, out = invoke("classify", {"end": end_doc(INF_NA, tail={"type": "alternating"})})
    assert code == 0
    doc = json.loads(out)
    assert doc == {"kind": "rational", "f": [], "infinite": {"form": "alt"}}
    parse_invariant_document(doc)


def test_compare_command():
    a = end_doc(INF_NA, tail={"type": "alternating"})
    b = end_doc(INF_NA, prefix=["+", "-"], tail={"type": "alternating", "first": "+"})
    code, out = invoke("compare", {"a": a, "b": b})
    assert code == 0
    assert json.loads(out) == {"equivalent": True}


def test_count_command():
    code, out = invoke("count", {"lengths": [3, 2]})
    assert code == 0
    assert json.loads(out) == {"count": 6}
    code, out = invoke("count", {"lengths": [1, 3]})
    assert json.loads(out)["count"] == 3
    assert "note" in json.loads(out)


def test_euler_command():
    attained = {"kind": "rational", "slope": "-2/1", "attained": True}
    code, out = invoke("euler", {"end": end_doc(attained, prefix=["+"])})
    assert code == 0
    assert json.loads(out) == {"euler": [0, -1], "slices": 1}


def test_extend_check_command():
    code, out = invoke("extend-check", {"end": end_doc(INF_NA, tail={"type": "alternating"})})
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "no-tight-extension"


def test_family_command():
    code, out = invoke("family", {"target": INF_NA, "k": 3})
    assert code == 0
    assert len(json.loads(out)["invariants"]) == 3


def test_family_cap():
    code, out = invoke("family", {"target": INF_NA, "k": 20000})
    assert code == 2


def test_reduce_solid_torus_command():
    code, out = invoke("reduce-solid-torus", {"end": end_doc(SQRT2, tail={"type": "all-positive"})})
    assert code == 0
    doc = json.loads(out)
    assert doc["s"] == "-1/1"
    assert doc["invariant"] == {"kind": "irrational", "f": [], "tail": {"type": "saturated"}}


def test_reduce_t2xr_command():
    plus = end_doc(SQRT2, tail={"type": "all-positive"}, rotative={"n": 1, "sign": "+"})
    minus = {"boundary": {"slope": "1/1", "div": 1}, "target": SQRT2,
             "signs": {"prefix": [], "tail": {"type": "all-positive"}},
             "rotative": {"n": 2, "sign": "+"}}
    code, out = invoke("reduce-t2xr", {"plus": plus, "minus": minus,
                                       "middle": {"slope": "-1/1", "div": 1}})
    assert code == 0
    doc = json.loads(out)
    assert doc["plus"]["rotative"] == {"n": 3, "sign": "+"}
    assert doc["minus"]["rotative"] == {"n": 0, "sign": "+"}


def test_exit_code_validation_violation():
    bad = end_doc({"kind": "rational", "slope": "-3/1", "attained": True},
                  prefix=["+", "+"], tail={"type": "all-positive"})
    code, out = invoke("classify", {"end": bad})
    assert code == 1
    doc = json.loads(out)
    assert "finite path, infinite tail" in doc["violations"]


def test_exit_code_malformed():
    code, out = invoke("classify", {"end": {"boundary": {"slope": "-1/1"},
                                            "target": SQRT2, "bogus": 1}})
    assert code == 2
    assert "unknown fields" in json.loads(out)["error"]


def test_exit_code_bad_json():
    stdin, stdout = sys.stdin, sys.stdout
    sys.stdin = io.StringIO("{not json")
    sys.stdout = io.StringIO()
    try:
        assert main(["classify"]) == 2
    finally:
        sys.stdin, sys.stdout = stdin, stdout


def test_unknown_fields_rejected_everywhere():
    with pytest.raises(SchemaError):
        run_command("path", {"start": "-1/1", "target": SQRT2, "n": 2, "x": 1},
                    {"horizon": 64, "max_family": 100})


def test_batch_run_statuses():
    jobs = [
        {"command": "count", "input": {"lengths": [3, 2]}},
        {"command": "classify",
         "input": {"end": end_doc({"kind": "rational", "slope": "-3/1", "attained": True},
                                  prefix=["+", "+"], tail={"type": "all-positive"})}},
    ]
    code, out = invoke("run", jobs)
    assert code == 1
    results = json.loads(out)
    assert results[0]["status"] == "ok"
    assert results[1]["status"] == "violation"


def test_determinism_byte_identical():
    doc = {"end": end_doc(SQRT2, tail={"type": "periodic", "pattern": ["+", "-"]})}
    _, out1 = invoke("classify", doc)
    _, out2 = invoke("classify", doc)
    assert out1 == out2


def test_human_format():
    code, out = invoke("count", {"lengths": [3, 2]}, "--format", "human")
    assert code == 0
    assert "count: 6" in out


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "toric_ends", "path"],
        input=json.dumps({"start": "-1/1", "target": SQRT2, "n": 3}),
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"vertices": ["-1/1", "-4/3", "-7/5"]}
