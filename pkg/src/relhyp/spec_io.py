"""JSON group-spec documents.

A document names the factors once and any number of alphabets over them::

    {"factors": [{"rank": 1, "torsion": []}, ...],
     "alphabets": {"std": [{"symbol": "a", "element": [[0, [1]]], "parabolic": 0}, ...]},
     "order": ["a", "b", "a^-1", "b^-1"]}

``order`` is optional and fixes the letter order (hence the lex order) of
every alphabet whose symbols it lists. Missing inverses are added as
``x^-1`` after the listed letters.
"""

from __future__ import annotations

import json
import os
import tempfile
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import jsonschema

from .errors import AlphabetError, MalformedElementError
from .group import AbelianFactor, GroupSpec, MarkedAlphabet

SCHEMA = {
    "type": "object",
    "required": ["factors", "alphabets"],
    "additionalProperties": False,
    "properties": {
        "factors": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["rank"],
                "additionalProperties": False,
                "properties": {
                    "rank": {"type": "integer", "minimum": 0},
                    "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                },
            },
        },
        "alphabets": {
            "type": "object",
            "minProperties": 1,
            "additionalProperties": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["symbol", "element"],
                    "additionalProperties": False,
                    "properties": {
                        "symbol": {"type": "string", "minLength": 1},
                        "element": {
                            "type": "array",
                            "items": {
                                "type": "array",
                                "minItems": 2,
                                "maxItems": 2,
                                "prefixItems": [
                                    {"type": "integer", "minimum": 0},
                                    {"type": "array", "items": {"type": "integer"}},
                                ],
                            },
                        },
                        "parabolic": {"type": ["integer", "null"], "minimum": 0},
                    },
                },
            },
        },
        "order": {"type": "array", "items": {"type": "string"}},
    },
}

BUNDLED = {"Z": "z.json", "Z2": "z2.json", "F2": "f2.json", "Z2*Z": "z2_star_z.json", "F2+t": "f2_plus_t.json"}


class SchemaError(MalformedElementError):
    code = "schema"


def parse_document(doc: dict) -> Tuple[GroupSpec, Dict[str, MarkedAlphabet]]:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {e.message}") from None
    spec = GroupSpec(tuple(AbelianFactor(f["rank"], tuple(f.get("torsion", ()))) for f in doc["factors"]))
    order = doc.get("order")
    alphabets = {}
    for name, entries in doc["alphabets"].items():
        letters = []
        for e in entries:
            element = spec.from_syllables((w, tuple(v)) for w, v in e["element"])
            letters.append((e["symbol"], element, e.get("parabolic")))
        X = MarkedAlphabet(spec, letters, close_inverses=True)
        if order is not None and set(X.symbols) <= set(order):
            rank = {s: i for i, s in enumerate(order)}
            X = MarkedAlphabet(spec, sorted(X.letters, key=lambda l: rank[l.symbol]))
        alphabets[name] = X
    return spec, alphabets


def emit_document(alphabets: Dict[str, MarkedAlphabet]) -> dict:
    """Canonical document; letters are written out in index order, inverses included."""
    specs = {X.spec for X in alphabets.values()}
    if len(specs) != 1:
        raise AlphabetError("all alphabets in one document must share a group")
    spec = specs.pop()
    return {"factors": spec.to_json(), "alphabets": {n: X.to_json() for n, X in alphabets.items()}}


def dumps(alphabets: Dict[str, MarkedAlphabet]) -> str:
    """The canonical document, one factor or letter per line."""
    doc = emit_document(alphabets)
    lines = ['{"factors": [']
    lines.append(",\n".join("  " + json.dumps(f) for f in doc["factors"]))
    lines.append('], "alphabets": {')
    blocks = []
    for name, letters in doc["alphabets"].items():
        body = ",\n".join("    " + json.dumps(l) for l in letters)
        blocks.append(f"  {json.dumps(name)}: [\n{body}\n  ]")
    lines.append(",\n".join(blocks))
    lines.append("}}")
    return "\n".join(lines) + "\n"


def load(source: Union[str, os.PathLike]) -> Tuple[GroupSpec, Dict[str, MarkedAlphabet]]:
    """Load a document from a path, or a bundled example by name (Z, Z2, F2, Z2*Z, F2+t)."""
    key = str(source)
    if key in BUNDLED and not Path(key).exists():
        text = resources.files("relhyp").joinpath("data").joinpath(BUNDLED[key]).read_text()
    else:
        try:
            text = Path(source).read_text()
        except FileNotFoundError:
            raise SchemaError(f"unknown group {key!r}: no such file, and not one of {sorted(BUNDLED)}") from None
        except OSError as e:
            raise SchemaError(f"cannot read {source}: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source}: invalid JSON ({e.msg} at line {e.lineno})") from None
    return parse_document(doc)


def load_alphabet(source, name: Optional[str] = None) -> MarkedAlphabet:
    _, alphabets = load(source)
    if name is None:
        if len(alphabets) != 1:
            raise AlphabetError(f"document has alphabets {sorted(alphabets)}; pick one")
        return next(iter(alphabets.values()))
    try:
        return alphabets[name]
    except KeyError:
        raise AlphabetError(f"no alphabet {name!r}; have {sorted(alphabets)}") from None


def write_atomic(path: Union[str, os.PathLike], data: Union[str, bytes]) -> None:
    """Write via a temporary file in the same directory and rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
