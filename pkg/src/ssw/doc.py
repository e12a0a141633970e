"""Line-oriented JSON documents for complexes and maps.

Canonical serialization sorts keys and id lists, so documents round-trip
byte-identically and diffs stay readable.
"""
from __future__ import annotations

import json

from .core import EZ, SMap, SSet, SSetError
from .decor import MarkedScaled

SCHEMA_VERSION = 1


def complex_to_doc(X: MarkedScaled, name: str | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dim_cap": X.base.dim_cap,
        "cells": {str(n): sorted(X.base.level(n)) for n in range(X.base.dim + 1)},
        "faces": {
            x: [[pair.core, list(pair.op)] for pair in X.base.faces[x]]
            for x in sorted(X.base.faces)
            if X.base.dim_of[x] >= 1
        },
        "marked": sorted(X.marked),
        "thin": sorted(X.thin),
    }
    if name is not None:
        doc["name"] = name
    return doc


def serialize(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def parse(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SSetError(f"document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SSetError("document must be an object")
    return doc


def doc_to_complex(doc: dict) -> MarkedScaled:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SSetError(f"unsupported schema_version {doc.get('schema_version')!r}")
    raw_cells = doc.get("cells", {})
    try:
        levels = sorted(int(k) for k in raw_cells)
    except ValueError as exc:
        raise SSetError("cell levels must be integers") from exc
    if levels and levels != list(range(len(levels))):
        raise SSetError("cell levels must be contiguous from 0")
    cells = [sorted(raw_cells[str(n)]) for n in levels]
    faces = {}
    for x, fs in doc.get("faces", {}).items():
        pairs = []
        for entry in fs:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise SSetError(f"face entry of {x!r} must be [core, word]")
            core, word = entry
            pairs.append(EZ(core, tuple(word)))
        faces[x] = tuple(pairs)
    base = SSet(cells, faces, dim_cap=doc.get("dim_cap", 6))
    marked = doc.get("marked", [])
    thin = doc.get("thin", [])
    for e in marked:
        if base.dim_of.get(e) != 1:
            raise SSetError(f"marked id {e!r} is not a nondegenerate edge")
    for t in thin:
        if base.dim_of.get(t) != 2:
            raise SSetError(f"thin id {t!r} is not a nondegenerate triangle")
    return MarkedScaled(base, frozenset(marked), frozenset(thin))


def map_to_doc(f: SMap, source_name: str | None = None, target_name: str | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "source": source_name or complex_to_doc(MarkedScaled(f.source)),
        "target": target_name or complex_to_doc(MarkedScaled(f.target)),
        "images": {x: [p.core, list(p.op)] for x, p in sorted(f.images.items())},
    }
    return doc


def doc_to_map(doc: dict, resolve) -> SMap:
    """Load a map document; resolve turns a name or inline document into a
    MarkedScaled complex."""
    src = resolve(doc["source"])
    tgt = resolve(doc["target"])
    images = {x: EZ(entry[0], tuple(entry[1])) for x, entry in doc["images"].items()}
    return SMap(src.base, tgt.base, images)
