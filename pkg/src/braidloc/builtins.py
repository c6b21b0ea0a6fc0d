"""Named matrices shipped as JSON data files.

A reference looks like ``builtin:NAME`` or ``builtin:NAME?key=literal&...``;
query values override the file's default parameters.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from urllib.parse import unquote

from .cyclo import DEFAULT_TOL, parse_literal
from .matrix import SqMatrix

PREFIX = "builtin:"


def builtin_names() -> list[str]:
    files = resources.files("braidloc") / "data"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def _load_raw(name: str) -> dict:
    path = resources.files("braidloc") / "data" / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"unknown builtin matrix {name!r}; known: {', '.join(builtin_names())}")
    return json.loads(path.read_text())


def load_builtin(name: str, **params: str) -> SqMatrix:
    obj = _load_raw(name)
    merged = dict(obj.get("params", {}))
    unknown = set(params) - set(merged)
    if unknown:
        raise KeyError(f"{name} has no parameter(s) {sorted(unknown)}")
    merged.update(params)
    variables = {k: parse_literal(v) for k, v in merged.items()}
    return SqMatrix.from_json(obj, variables)


def _parse_query(query: str) -> dict[str, str]:
    # literals contain '+', so no form decoding (which maps '+' to a space)
    out = {}
    for part in filter(None, query.split("&")):
        key, sep, value = part.partition("=")
        if not sep or not value:
            raise ValueError(f"malformed parameter {part!r}")
        out[unquote(key)] = unquote(value)
    return out


def load_matrix(ref: str, tol: float = DEFAULT_TOL) -> SqMatrix:
    """Resolve ``builtin:...`` references or read a JSON matrix file."""
    if ref.startswith(PREFIX):
        name, _, query = ref[len(PREFIX):].partition("?")
        return load_builtin(name, **_parse_query(query))
    obj = json.loads(Path(ref).read_text())
    variables = {k: parse_literal(v) for k, v in obj.get("params", {}).items()}
    return SqMatrix.from_json(obj, variables, tol)


__all__ = ["builtin_names", "load_builtin", "load_matrix"]
