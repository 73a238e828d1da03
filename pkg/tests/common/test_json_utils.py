import io
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import pytest

from common import (
    from_json_file,
    json_dumps,
    json_loads,
    pretty_json,
    to_json_file,
    to_jsonable,
    write_json_lines,
)
from ik_prover.core.models import TraceKind, TraceRecord, Verdict


class Color(Enum):
    RED = "red"
    BLUE = "blue"


@dataclass
class Item:
    id: int
    color: Color
    tags: frozenset
    where: Path


def test_to_jsonable_complex():
    item = Item(id=1, color=Color.RED, tags=frozenset({"b", "a"}), where=Path("out/model.json"))
    data = to_jsonable(item)
    assert data["id"] == 1
    assert data["color"] == "red"
    assert data["tags"] == ["a", "b"]
    assert data["where"] == "out/model.json"


def test_to_jsonable_prefers_to_dict():
    record = TraceRecord(TraceKind.BLOCK, "<1>", blocked=1, blocker=0)
    assert to_jsonable(record) == {"kind": "block", "focus": "<1>", "blocked": 1, "blocker": 0}


def test_sets_of_pairs_are_ordered():
    assert to_jsonable({(2, 3), (0, 1)}) == [[0, 1], [2, 3]]


def test_json_roundtrip():
    original = {"a": 1, "b": [1, 2, 3], "c": {"x": 10}}
    s = json_dumps(original)
    loaded = json_loads(s)
    assert loaded == original


def test_json_dumps_is_compact_and_keeps_unicode():
    assert json_dumps({"sigil": "•", "verdict": Verdict.PROVABLE}) == '{"sigil":"•","verdict":"provable"}'


def test_json_loads_bytes():
    assert json_loads(b'{"ok": true}') == {"ok": True}


def test_json_loads_invalid():
    with pytest.raises(json.JSONDecodeError):
        json_loads("not json")


def test_pretty_json_contains_newlines():
    s = pretty_json({"b": 1, "a": 2})
    assert "\n" in s
    assert s.index('"a"') < s.index('"b"')


def test_write_json_lines():
    stream = io.StringIO()
    count = write_json_lines(stream, [{"b": 1, "a": 2}, TraceRecord(TraceKind.BLOCK, ".", blocked=3, blocker=0)])
    assert count == 2
    lines = stream.getvalue().splitlines()
    assert lines[0] == '{"a":2,"b":1}'
    assert json.loads(lines[1])["kind"] == "block"


def test_json_file_roundtrip(tmp_path):
    target = tmp_path / "nested" / "model.json"
    to_json_file(target, {"worlds": [{"id": 0, "val": []}], "root": 0})
    assert from_json_file(target) == {"worlds": [{"id": 0, "val": []}], "root": 0}
