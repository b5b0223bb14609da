"""JSON reading and writing for settings, local data and reports."""
from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path

from .errors import InvalidSetting
from .quiver_core import QuiverSetting, parse_gamma, validate
from .rep_theory import LocalQuiverData

SCHEMA = "qbs/1"


class ParseError(InvalidSetting):
    def __init__(self, message, line=None, column=None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc


def load(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    return loads(text)


def setting_to_json(S: QuiverSetting, gamma: Mapping | None = None) -> dict:
    verts = []
    for v, d in zip(S.vertices, S.dims):
        entry = {"id": v, "dim": d}
        if gamma is not None:
            entry["gamma"] = gamma.get(v, 0)
        verts.append(entry)
    return {"vertices": verts, "arrows": [[t, h] for t, h in S.arrows]}


def setting_from_json(raw: Mapping) -> tuple[QuiverSetting, dict | None]:
    return validate(raw), parse_gamma(raw)


def read_setting(path) -> tuple[QuiverSetting, dict | None]:
    return setting_from_json(load(path))


def local_to_json(L: LocalQuiverData) -> dict:
    out = setting_to_json(L.setting, L.gamma)
    out["n"] = L.n
    return out


def local_from_json(raw: Mapping) -> LocalQuiverData:
    S, gamma = setting_from_json(raw)
    n = raw.get("n")
    return LocalQuiverData(S, gamma, n)
