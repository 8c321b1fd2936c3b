"""Serialisation of tables: rounding, complex splitting, CSV/JSON agreement."""

import json
import math

import pytest

from lwqm.export import (FLOAT_FORMAT, TableArtifact, read_csv, render, to_csv, to_json,
                         write_atomic)


def test_build_splits_complex_columns():
    t = TableArtifact.build(("x", "z"), [(1.0, 1 + 2j), (2.0, 3.0)])
    assert t.columns == ("x", "z_re", "z_im")
    assert t.rows[0] == (1.0, 1.0, 2.0)
    # a real cell in a complex column gets a zero imaginary part
    assert t.rows[1] == (2.0, 3.0, 0.0)


def test_cells_rounded_to_twelve_digits():
    t = TableArtifact.build(("v",), [(math.pi,)])
    assert t.rows[0][0] == float(FLOAT_FORMAT % math.pi)
    assert t.rows[0][0] != math.pi


def test_ints_bools_strings_untouched():
    t = TableArtifact.build(("n", "ok", "s"), [(3, True, "a")])
    assert t.rows[0] == (3, True, "a")
    assert to_csv(t).splitlines()[1] == "3,true,a"


def test_csv_and_json_carry_identical_values():
    rows = [(x / 7, math.exp(x / 3), -x * 1e-9) for x in range(1, 30)]
    t = TableArtifact.build(("a", "b", "c"), rows, {"kind": "demo"})
    head, csv_rows = read_csv(to_csv(t))
    doc = json.loads(to_json(t))
    assert head == doc["columns"] == ["a", "b", "c"]
    for cr, jr in zip(csv_rows, doc["rows"]):
        assert [float(c) for c in cr] == jr


def test_nonfinite_become_null_in_json():
    t = TableArtifact.build(("v",), [(math.nan,), (math.inf,), (1.0,)], {"norm": math.nan})
    doc = json.loads(to_json(t))
    assert doc["rows"] == [[None], [None], [1.0]]
    assert doc["meta"]["norm"] is None
    assert to_csv(t).splitlines()[1:3] == ["nan", "inf"]


def test_json_is_deterministic():
    t = TableArtifact.build(("v",), [(0.1,)], {"b": 1, "a": 2})
    assert to_json(t) == to_json(TableArtifact.build(("v",), [(0.1,)], {"a": 2, "b": 1}))


def test_render_dispatch():
    t = TableArtifact.build(("v",), [(1.0,)])
    assert render(t, "csv") == to_csv(t)
    assert render(t, "json") == to_json(t)
    with pytest.raises(ValueError, match="unknown output format"):
        render(t, "xml")


def test_row_length_validated():
    with pytest.raises(ValueError, match="does not match"):
        TableArtifact(("a", "b"), ((1.0,),))


def test_column_lookup():
    t = TableArtifact.build(("a", "b"), [(1, 2), (3, 4)])
    assert t.column("b") == [2, 4]
    with pytest.raises(ValueError):
        t.column("c")


def test_write_atomic(tmp_path):
    target = tmp_path / "sub" / "out.csv"
    write_atomic(target, "a\n1\n")
    write_atomic(target, "a\n2\n")
    assert target.read_text() == "a\n2\n"
    write_atomic(tmp_path / "img.bin", b"\x00\x01")
    assert (tmp_path / "img.bin").read_bytes() == b"\x00\x01"
    # no temporary files left behind
    assert sorted(p.name for p in tmp_path.rglob("*")) == ["img.bin", "out.csv", "sub"]


def test_read_csv_empty():
    assert read_csv("") == ([], [])
