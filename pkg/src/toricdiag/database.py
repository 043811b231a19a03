"""Canonical fan files, importers and the bundled smooth Fano databases.

Canonical format: one JSON object per line,
``{"dim": d, "index": q, "rays": [[...], ...], "max_cones": [[...], ...]}``,
in ascending index order.  Ray order is the database order.

The bundled files ``data/fano{d}.jsonl`` were converted from the Macaulay2
``NormalToricVarieties`` text files with :func:`import_m2`, so
``load_database(d)[q]`` is ``smoothFanoToricVariety(d, q)``.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from functools import lru_cache
from pathlib import Path

from .fan import Fan, ParseError, VarietyRecord, facets_of_ray_polytope, parse_collection

DATA_DIR = Path(__file__).with_name("data")
ENV_VAR = "TORICDIAG_DB"
FORMATS = ("canonical", "m2", "rays")


def database_dir() -> Path:
    return Path(os.environ.get(ENV_VAR) or DATA_DIR)


def database_path(dim: int, directory: Path | None = None) -> Path:
    return Path(directory or database_dir()) / f"fano{dim}.jsonl"


@lru_cache(maxsize=8)
def _load(path: str) -> tuple[VarietyRecord, ...]:
    return tuple(parse_collection(Path(path).read_text()))


def load_database(dim: int, directory: Path | None = None) -> tuple[VarietyRecord, ...]:
    path = database_path(dim, directory)
    if not path.exists():
        raise FileNotFoundError(f"no database for dimension {dim} at {path}")
    return _load(str(path.resolve()))


def get_variety(dim: int, index: int, directory: Path | None = None) -> VarietyRecord:
    db = load_database(dim, directory)
    if 0 <= index < len(db) and db[index].index == index:
        return db[index]
    for rec in db:
        if rec.index == index:
            return rec
    raise KeyError(f"dimension {dim} database has no index {index}")


# --- importers -------------------------------------------------------------

_M2_LINE = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\{.*\})\s*$")


def _m2_lists(text: str, lineno: int) -> list:
    """Parse a Macaulay2 brace list like ``{{1,0},{0,1}},{{0,1}}`` into Python lists."""
    js = text.replace("{", "[").replace("}", "]")
    try:
        return json.loads("[" + js + "]")
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad Macaulay2 list: {exc.msg}", lineno, exc.colno) from None


def import_m2(text: str) -> list[VarietyRecord]:
    """Convert a Macaulay2 ``smoothFanoToricVarieties*.txt`` dump.

    Each line is ``d,q,{rays},{max cones}[,{extra}]``; trailing fields are
    ignored.
    """
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        m = _M2_LINE.match(line)
        if not m:
            raise ParseError("expected 'dim,index,{rays},{cones}'", lineno, 1)
        dim, index = int(m.group(1)), int(m.group(2))
        fields = _m2_lists(m.group(3), lineno)
        if len(fields) < 2:
            raise ParseError("missing rays or cones", lineno)
        rays, cones = fields[0], fields[1]
        fan = Fan(dim, tuple(map(tuple, rays)), tuple(map(tuple, cones)))
        out.append(VarietyRecord(dim, index, fan, f"Macaulay2:{dim}:{index}"))
    return out


def import_rays(text: str, dim: int | None = None, index: int = 0) -> list[VarietyRecord]:
    """Build a smooth Fano fan from its ray list alone.

    Accepts a JSON list of rays or the brace notation
    ``{(-1,0,0),(0,-1,0),...}``.  Maximal cones are the facets of the
    convex hull of the rays, which is correct for smooth Fano fans only.
    """
    body = text.strip()
    if not body:
        raise ParseError("empty ray list", 1, 1)
    body = body.replace("(", "[").replace(")", "]")
    if body.startswith("{") and body.endswith("}"):
        body = "[" + body[1:-1] + "]"
    try:
        rays = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad ray list: {exc.msg}", exc.lineno, exc.colno) from None
    if not rays or not all(isinstance(r, list) for r in rays):
        raise ParseError("expected a list of integer vectors", 1, 1)
    d = len(rays[0]) if dim is None else dim
    cones = facets_of_ray_polytope(rays)
    fan = Fan(d, tuple(map(tuple, rays)), tuple(cones))
    return [VarietyRecord(d, index, fan, "rays")]


def import_records(text: str, fmt: str, **kw) -> list[VarietyRecord]:
    if fmt == "canonical":
        return parse_collection(text)
    if fmt == "m2":
        return import_m2(text)
    if fmt == "rays":
        return import_rays(text, **kw)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def dump_collection(records) -> str:
    return "".join(rec.to_json() + "\n" for rec in records)


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_collection(records, path: Path) -> str:
    """Write a canonical collection plus ``<path>.sha256``; returns the digest."""
    text = dump_collection(records)
    path = Path(path)
    path.write_text(text)
    digest = sha256(text)
    path.with_name(path.name + ".sha256").write_text(f"{digest}  {path.name}\n")
    return digest


def verify_manifest(directory: Path | None = None) -> dict[str, bool]:
    """Check every ``*.jsonl`` against its recorded checksum."""
    directory = Path(directory or database_dir())
    out = {}
    for path in sorted(directory.glob("*.jsonl")):
        side = path.with_name(path.name + ".sha256")
        if side.exists():
            out[path.name] = side.read_text().split()[0] == sha256(path.read_text())
    return out
