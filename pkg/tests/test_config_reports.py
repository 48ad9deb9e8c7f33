import csv
import io
import json
import math

import numpy as np
import pytest

from hslab.config import RunConfig, merge, parse_domain, parse_range, read_config_file
from hslab.domains import Annulus, Ball, ExteriorBall, HalfSpace, PuncturedBall
from hslab.errors import ParameterDomainError
from hslab.reports import dumps_csv, dumps_json, dumps_text, emit, header, to_jsonable


def test_parse_range_forms():
    assert parse_range("1..5", int) == [1, 2, 3, 4, 5]
    assert parse_range("1,2,4") == [1.0, 2.0, 4.0]
    assert parse_range("3") == [3.0]
    for bad in ("5..1", "a,b", "1..x"):
        with pytest.raises(ParameterDomainError):
            parse_range(bad)


def test_parse_domain_kinds():
    d = parse_domain("annulus(center=0, rin=1, rout=8)", 3)
    assert isinstance(d, Annulus) and d.r_in == 1 and d.r_out == 8
    assert np.array_equal(d.center, np.zeros(3))
    assert isinstance(parse_domain("halfspace", 2), HalfSpace)
    b = parse_domain("ball(center=[0, 0, 2], radius=0.5)", 3)
    assert isinstance(b, Ball) and b.radius == 0.5 and b.center[-1] == 2
    assert isinstance(parse_domain("punctured-ball(radius=2)", 2), PuncturedBall)
    assert isinstance(parse_domain("exterior", 2), ExteriorBall)
    swept = parse_domain("annulus(rin=1, rout=8)", 2, {"rout": 16.0})
    assert swept.r_out == 16


@pytest.mark.parametrize("text", ["torus", "ball(radius)", "ball(size=2)",
                                  "ball(center=[0, 1, 2])"])
def test_parse_domain_rejects(text):
    with pytest.raises(ParameterDomainError):
        parse_domain(text, 2)


def test_config_file_and_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nbudget = 50\nseed=3  # trailing\n\nrout-max = 9\n")
    entries = read_config_file(path)
    assert entries == {"budget": "50", "seed": "3", "rout_max": "9"}
    merged = merge({"budget": "1", "seed": "0", "n": "2"}, entries, {"seed": "7", "n": None})
    assert merged == {"budget": "50", "seed": "7", "n": "2", "rout_max": "9"}
    path.write_text("not a pair\n")
    with pytest.raises(ParameterDomainError):
        read_config_file(path)


def test_run_config_echo_is_sorted():
    cfg = RunConfig("minimize", {"seed": "0", "budget": "5"}, None, "json")
    assert list(cfg.echo()["params"]) == ["budget", "seed"]


def test_header_timestamp_toggle():
    assert "timestamp" in header({"a": 1})
    h = header({"a": 1}, timestamp=False, extra=2)
    assert "timestamp" not in h and h["extra"] == 2 and h["tool"] == "hslab"


def test_to_jsonable_handles_numpy_and_non_finite():
    obj = {"a": np.float64(1.5), "b": np.arange(3), "c": np.bool_(True), "d": math.inf,
           "e": math.nan, 1: (np.int64(2),)}
    out = to_jsonable(obj)
    assert out == {"a": 1.5, "b": [0, 1, 2], "c": True, "d": "inf", "e": "nan", "1": [2]}
    json.dumps(out)


def test_csv_round_trip_is_exact():
    head = header({"subcommand": "x"}, timestamp=False)
    rows = [{"x": 0.1 + 0.2, "y": None, "z": {"k": 1}}, {"x": 1e-300, "y": "s", "z": [1]}]
    text = dumps_csv(head, rows, ["x", "y", "z"])
    first, rest = text.split("\n", 1)
    assert json.loads(first[2:]) == to_jsonable(head)
    parsed = list(csv.DictReader(io.StringIO(rest)))
    assert float(parsed[0]["x"]) == 0.1 + 0.2 and parsed[0]["y"] == ""
    assert float(parsed[1]["x"]) == 1e-300


def test_json_and_text_rendering(tmp_path):
    head = header({"subcommand": "demo", "params": {}}, timestamp=False)
    js = json.loads(dumps_json(head, {"v": np.float32(2.0)}))
    assert js["result"]["v"] == 2.0
    txt = dumps_text(head, [{"a": 1, "b": "long value"}], ["a", "b"])
    assert txt.splitlines()[0].startswith("# demo")
    out = tmp_path / "o.json"
    emit(head, {"k": 1}, [], [], "json", str(out))
    assert json.loads(out.read_text(encoding="utf-8"))["result"] == {"k": 1}
    with pytest.raises(ValueError):
        emit(head, {}, [], [], "xml")
