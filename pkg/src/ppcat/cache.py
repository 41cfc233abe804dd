"""Versioned, canonical, byte-stable persistence of catalogues.

The payload holds the base catalogue, the Auslander algebra (with its hom
bases) and the functor catalogue.  Loading for a project re-attaches the
base entries to the project's own algebra object after checking that the
algebra signatures agree, so reloaded data interoperates with freshly
parsed representations and reports are byte-identical."""

from __future__ import annotations

import hashlib
import json

from .artheory import Catalogue
from .errors import CacheError
from .exactfield import FieldSpec, Matrix
from .funcat import AuslanderAlgebra
from .quiver import StructureAlgebra
from .rep import Representation, RepMorphism

CACHE_VERSION = 1


def _matrix_to_json(m: Matrix, field: FieldSpec):
    return [[field.format(x) for x in row] for row in m.data]


def _matrix_from_json(data, field: FieldSpec, rows: int, cols: int) -> Matrix:
    if len(data) != rows or any(len(r) != cols for r in data):
        raise CacheError("matrix shape mismatch in cache payload")
    return Matrix(field, rows, cols, [[field.parse(x) for x in row] for row in data])


def _algebra_to_json(alg: StructureAlgebra, field: FieldSpec):
    table = []
    for i in range(alg.dim):
        row = []
        for j in range(alg.dim):
            cell = alg.table[i][j]
            row.append(None if cell is None else {str(k): field.format(c) for k, c in cell.items()})
        table.append(row)
    return {
        "labels": list(alg.labels),
        "source": list(alg.source),
        "target": list(alg.target),
        "sort_labels": list(alg.sort_labels),
        "idempotent": list(alg.idempotent_index),
        "radical_spanned": alg.radical_spanned,
        "table": table,
    }


def _algebra_from_json(data, field: FieldSpec) -> StructureAlgebra:
    try:
        table = []
        for row in data["table"]:
            out = []
            for cell in row:
                out.append(
                    None if cell is None else {int(k): field.parse(c) for k, c in cell.items()}
                )
            table.append(out)
        return StructureAlgebra(
            field,
            data["labels"],
            data["source"],
            data["target"],
            data["sort_labels"],
            data["idempotent"],
            table,
            radical_spanned=data["radical_spanned"],
        )
    except (KeyError, TypeError) as exc:
        raise CacheError(f"bad algebra payload: {exc}") from None


def _rep_to_json(rep: Representation, field: FieldSpec):
    act = {}
    for i, m in enumerate(rep.act):
        if m is None:
            continue
        act[str(i)] = _matrix_to_json(m, field)
    return {"dims": list(rep.dims), "act": act}


def _rep_from_json(data, alg: StructureAlgebra) -> Representation:
    try:
        dims = data["dims"]
        act = {}
        for k, rows in data["act"].items():
            i = int(k)
            r, c = dims[alg.target[i]], dims[alg.source[i]]
            act[i] = _matrix_from_json(rows, alg.field, r, c)
        return Representation(alg, dims, act)
    except (KeyError, TypeError, IndexError) as exc:
        raise CacheError(f"bad representation payload: {exc}") from None


def _catalogue_to_json(cat: Catalogue, field: FieldSpec):
    return {
        "entries": [_rep_to_json(e, field) for e in cat.entries],
        "projective": list(cat.projective_flags),
        "injective": list(cat.injective_flags),
        "simple": list(cat.simple_flags),
        "complete": cat.complete,
        "provenance": cat.provenance,
    }


def _catalogue_from_json(data, alg: StructureAlgebra) -> Catalogue:
    try:
        entries = [_rep_from_json(e, alg) for e in data["entries"]]
        return Catalogue(
            alg,
            entries,
            data["projective"],
            data["injective"],
            data["simple"],
            complete=data["complete"],
            provenance=data["provenance"],
        )
    except (KeyError, TypeError) as exc:
        raise CacheError(f"bad catalogue payload: {exc}") from None


def bundle_to_text(base_cat: Catalogue, aus: AuslanderAlgebra, fcat: Catalogue) -> str:
    field = base_cat.algebra.field
    hom_json = {}
    for (i, j), morphisms in sorted(aus.hom.items()):
        hom_json[f"{i},{j}"] = [
            [_matrix_to_json(b, field) for b in m.blocks] for m in morphisms
        ]
    payload = {
        "version": CACHE_VERSION,
        "field": repr(field),
        "base_algebra": _algebra_to_json(base_cat.algebra, field),
        "base_catalogue": _catalogue_to_json(base_cat, field),
        "hom": hom_json,
        "aus_algebra": _algebra_to_json(aus.algebra, field),
        "functor_catalogue": _catalogue_to_json(fcat, field),
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def bundle_from_text(
    text: str, base_algebra: StructureAlgebra
) -> tuple[Catalogue, AuslanderAlgebra, Catalogue]:
    """Reconstruct (base catalogue, Auslander algebra, functor catalogue)
    over the given live base algebra object."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CacheError(f"cache is not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or payload.get("version") != CACHE_VERSION:
        raise CacheError(
            f"cache version mismatch (want {CACHE_VERSION}, got {payload.get('version')!r})"
        )
    field = base_algebra.field
    if payload.get("field") != repr(field):
        raise CacheError("cache was written over a different field")
    stored_sig = payload.get("base_algebra")
    live_sig = _algebra_to_json(base_algebra, field)
    if stored_sig != live_sig:
        raise CacheError("cache was written for a different algebra")
    base_cat = _catalogue_from_json(payload["base_catalogue"], base_algebra)
    aus_alg = _algebra_from_json(payload["aus_algebra"], field)
    hom: dict[tuple[int, int], list[RepMorphism]] = {}
    try:
        for key, morphisms in payload["hom"].items():
            i, j = (int(x) for x in key.split(","))
            out = []
            for blocks in morphisms:
                mats = []
                for s, rows in enumerate(blocks):
                    r = base_cat.entries[j].dims[s]
                    c = base_cat.entries[i].dims[s]
                    mats.append(_matrix_from_json(rows, field, r, c))
                out.append(RepMorphism(base_cat.entries[i], base_cat.entries[j], mats))
            hom[(i, j)] = out
    except (KeyError, ValueError, IndexError) as exc:
        raise CacheError(f"bad hom payload: {exc}") from None
    n = len(base_cat.entries)
    index_of = {}
    pair_of = []
    for i in range(n):
        for j in range(n):
            for k in range(len(hom[(i, j)])):
                index_of[(i, j, k)] = len(pair_of)
                pair_of.append((i, j, k))
    if len(pair_of) != aus_alg.dim:
        raise CacheError("hom payload does not match the Auslander algebra dimension")
    aus = AuslanderAlgebra(aus_alg, base_cat, hom, index_of, pair_of)
    fcat = _catalogue_from_json(payload["functor_catalogue"], aus_alg)
    return base_cat, aus, fcat


def project_cache_key(project_text: str) -> str:
    return hashlib.sha256(project_text.encode("utf-8")).hexdigest()
