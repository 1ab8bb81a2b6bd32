"""Loading and saving rings as JSON documents.

A ring file is a single JSON document.  Builtins look like

    {"type": "builtin", "name": "su2", "params": {}}

with names zd | free | cyclic | su2 | deformed_su2 | tensor | trivial, and
table rings look like

    {"type": "table",
     "labels": ["e", "g"],
     "unit": "e",
     "conjugate": {"e": "e", "g": "g"},
     "dim": {"e": 1, "g": 1},
     "products": {"e|e": {"e": 1}, "e|g": {"g": 1},
                  "g|e": {"g": 1}, "g|g": {"e": 1}}}

where "A|B" keys name ordered label pairs ("|" is reserved; labels must not
contain it).  Tables must be closed: every pair of labels has an entry and
every entry only references listed labels.  The loader verifies the fusion
axioms on the full table before accepting; a failing table raises
InvalidTable with the axiom report attached.
"""
from __future__ import annotations

import json
import os
from typing import Mapping

from . import catalog
from .core import FusionRing, verify_axioms
from .errors import IncompleteTable, InvalidParam, InvalidTable

PAIR_SEPARATOR = "|"

_BUILTIN_NAMES = ("zd", "free", "cyclic", "su2", "deformed_su2", "tensor", "trivial")


def load_ring(source) -> FusionRing:
    """Load a ring from a path, JSON text, or an already-parsed document."""
    if isinstance(source, Mapping):
        return ring_from_doc(source)
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        return ring_from_doc(doc)
    if isinstance(source, str):
        return ring_from_doc(json.loads(source))
    raise InvalidParam(f"cannot load a ring from {source!r}")


def ring_from_doc(doc: Mapping) -> FusionRing:
    kind = doc.get("type")
    if kind == "builtin":
        return _builtin_from_doc(doc)
    if kind == "table":
        return table_ring_from_doc(doc)
    raise InvalidParam(f"ring document type must be 'builtin' or 'table', got {kind!r}")


def _require_int(params: Mapping, key: str) -> int:
    value = params.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidParam(f"builtin parameter {key!r} must be an integer, got {value!r}")
    return value


def _builtin_from_doc(doc: Mapping) -> FusionRing:
    name = doc.get("name")
    params = doc.get("params", {}) or {}
    if name not in _BUILTIN_NAMES:
        raise InvalidParam(f"unknown builtin ring {name!r}")
    if name == "zd":
        return catalog.integer_lattice_ring(_require_int(params, "d"))
    if name == "free":
        return catalog.free_group_ring(_require_int(params, "rank"))
    if name == "cyclic":
        return catalog.cyclic_ring(_require_int(params, "n"))
    if name == "su2":
        return catalog.build_su2_ring()
    if name == "deformed_su2":
        return catalog.build_deformed_su2_ring(_require_int(params, "n"))
    if name == "trivial":
        return catalog.trivial_ring()
    # tensor: two child documents
    left = params.get("left")
    right = params.get("right")
    if not isinstance(left, Mapping) or not isinstance(right, Mapping):
        raise InvalidParam("tensor builtin needs 'left' and 'right' ring documents")
    return catalog.tensor_product(ring_from_doc(left), ring_from_doc(right))


def _coerce_dim(value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidTable(f"dimension {value!r} is not a number")
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def table_ring_from_doc(doc: Mapping) -> FusionRing:
    """Build and validate a general fusion ring from a full table document."""
    labels = doc.get("labels")
    if not isinstance(labels, list) or not labels:
        raise InvalidTable("table needs a non-empty 'labels' list")
    if len(set(labels)) != len(labels):
        raise InvalidTable("table labels must be unique")
    for label in labels:
        if not isinstance(label, str) or PAIR_SEPARATOR in label or not label:
            raise InvalidTable(
                f"label {label!r} must be non-empty text without {PAIR_SEPARATOR!r}")
    label_set = set(labels)

    unit = doc.get("unit")
    if unit not in label_set:
        raise InvalidTable(f"unit {unit!r} is not among the labels")

    conj_map = doc.get("conjugate")
    if not isinstance(conj_map, Mapping) or set(conj_map) != label_set:
        raise InvalidTable("'conjugate' must map every label")
    for label, image in conj_map.items():
        if image not in label_set:
            raise InvalidTable(f"conjugate of {label!r} is the unknown label {image!r}")

    dim_map = doc.get("dim")
    if not isinstance(dim_map, Mapping) or set(dim_map) != label_set:
        raise InvalidTable("'dim' must map every label")
    dims = {label: _coerce_dim(value) for label, value in dim_map.items()}

    products_raw = doc.get("products")
    if not isinstance(products_raw, Mapping):
        raise InvalidTable("'products' must be a mapping of 'A|B' keys")
    products: dict = {}
    for key, entry in products_raw.items():
        parts = key.split(PAIR_SEPARATOR)
        if len(parts) != 2:
            raise InvalidTable(f"product key {key!r} is not of the form 'A|B'")
        a, b = parts
        if a not in label_set or b not in label_set:
            raise InvalidTable(f"product key {key!r} references unknown labels")
        if not isinstance(entry, Mapping):
            raise InvalidTable(f"product entry {key!r} must be a mapping")
        clean = {}
        for alpha, n in entry.items():
            if alpha not in label_set:
                raise InvalidTable(
                    f"product {key!r} references {alpha!r} outside the label set")
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise InvalidTable(
                    f"coefficient of {alpha!r} in product {key!r} must be an int >= 0")
            if n:
                clean[alpha] = n
        products[(a, b)] = clean
    for a in labels:
        for b in labels:
            if (a, b) not in products:
                raise IncompleteTable(f"missing product entry for '{a}{PAIR_SEPARATOR}{b}'")

    def product_rule(x, y):
        entry = products.get((x, y))
        if entry is None:
            raise IncompleteTable(
                f"missing product entry for '{x}{PAIR_SEPARATOR}{y}'")
        return entry

    description = doc.get("description") or "table ring"
    ring = FusionRing(
        unit=unit,
        product_rule=product_rule,
        conjugate_rule=lambda x: conj_map[x],
        dim_rule=lambda x: dims[x],
        description=description,
        generators=tuple(l for l in labels if l != unit),
        is_label=lambda x: x in label_set,
    )
    report = verify_axioms(ring, labels)
    if not report.passed:
        first = report.failures()[0]
        raise InvalidTable(
            f"table violates {first.name}: {first.counterexample}",
            report=report)
    return ring


def export_table(ring: FusionRing, labels) -> dict:
    """Export a ring restricted to a product-closed window as a table document.

    The window must be closed under products (and conjugation), otherwise
    the exported table could not be complete; a non-closed window raises
    InvalidParam.  Reloading the document yields identical product, dim and
    conjugation maps on the window.
    """
    labels = list(labels)
    if not labels:
        raise InvalidParam("cannot export an empty window")
    label_set = set(labels)
    fmt = ring.format_label
    for label in labels:
        if ring.conj(label) not in label_set:
            raise InvalidParam(
                f"window is not closed under conjugation at {fmt(label)}")
    text = {label: fmt(label) for label in labels}
    if len(set(text.values())) != len(labels):
        raise InvalidParam("label rendering is not injective on the window")
    for rendered in text.values():
        if PAIR_SEPARATOR in rendered or not rendered:
            raise InvalidParam(
                f"rendered label {rendered!r} conflicts with the table format")

    products = {}
    for a in labels:
        for b in labels:
            entry = ring.product(a, b)
            for alpha in entry:
                if alpha not in label_set:
                    raise InvalidParam(
                        f"window is not product-closed: {fmt(a)}*{fmt(b)} "
                        f"reaches {fmt(alpha)}")
            products[f"{text[a]}{PAIR_SEPARATOR}{text[b]}"] = \
                {text[alpha]: n for alpha, n in sorted(entry.items(),
                                                       key=lambda kv: text[kv[0]])}
    return {
        "type": "table",
        "description": ring.description,
        "labels": [text[label] for label in labels],
        "unit": text[ring.unit],
        "conjugate": {text[label]: text[ring.conj(label)] for label in labels},
        "dim": {text[label]: ring.dim(label) for label in labels},
        "products": products,
    }


def save_ring(doc: Mapping, path) -> None:
    """Write a ring document as UTF-8 JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")
