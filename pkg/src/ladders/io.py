"""JSON and DOT serialisation.

Posets are stored as ``{"elements": [...], "relation_kind": "covers" | "leq",
"pairs": [[x, y], ...]}``.  The canonical export sorts ids and lists cover
pairs only, so equal posets serialise to identical bytes.
"""
import json

from .core_poset import FinitePoset, cover_pairs, label
from .errors import ParseError, PreconditionError


def poset_to_doc(p: FinitePoset) -> dict:
    names = {x: label(x) for x in p.elements}
    if len(set(names.values())) != len(names):
        raise PreconditionError("element labels are not unique")
    pairs = sorted([names[x], names[y]] for x, y in cover_pairs(p))
    return {"elements": sorted(names.values()), "relation_kind": "covers", "pairs": pairs}


def poset_from_doc(doc) -> FinitePoset:
    if not isinstance(doc, dict):
        raise ParseError("poset document must be a JSON object")
    try:
        elements = doc["elements"]
        kind = doc.get("relation_kind", "covers")
        pairs = doc.get("pairs", [])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field {exc}") from None
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise ParseError("'elements' must be a list of strings")
    if kind not in ("covers", "leq"):
        raise ParseError(f"unknown relation_kind {kind!r}")
    if len(set(elements)) != len(elements):
        raise ParseError("duplicate element ids")
    try:
        pairs = [(str(a), str(b)) for a, b in pairs]
    except (TypeError, ValueError):
        raise ParseError("'pairs' must be a list of two-element lists") from None
    return FinitePoset.from_pairs(elements, pairs, kind=kind)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def read_poset(path) -> FinitePoset:
    return poset_from_doc(read_json(path))


def poset_to_dot(p: FinitePoset, name="P") -> str:
    '''Hasse diagram with edges pointing from lower to upper covers.'''
    q = lambda s: '"' + s.replace('"', '\\"') + '"'
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    lines += [f"  {q(x)};" for x in sorted(label(e) for e in p.elements)]
    edges = sorted((label(x), label(y)) for x, y in cover_pairs(p))
    lines += [f"  {q(x)} -> {q(y)};" for x, y in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
