"""Project files: field, bound quiver, named representations, named pp
formulas and pairs, monoidal structure selection, and bounds.

Line-oriented, strict (unknown keywords are rejected), deterministic.

    # comment
    field Q                      | field F2
    vertices 1 2 3
    arrow a 1 2
    relation b.a - c.d           # signed path words, length-homogeneous
    rep M dims 1 2 3
    rep M map a [[1],[0]]        # row-major, entries integers or n/d
    formula phi := exists y:2 . a*x - y = 0
    pair P := phi / psi
    structure tensor_over_base   | structure diagonal_tensor
    bound max_total_dim 24
    bound max_entries 64
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import ParseError
from .exactfield import FieldSpec, Matrix, field_from_name
from .formulas import parse_pp_formula
from .ppform import PpFormula
from .quiver import BoundQuiver, Path, PathCombo, Quiver
from .rep import Representation


@dataclass
class ProjectFile:
    field: FieldSpec
    bound_quiver: BoundQuiver
    reps: dict[str, Representation]
    formulas: dict[str, PpFormula]
    pairs: dict[str, tuple[str, str]]
    structure: str | None
    bounds: dict[str, int] = dc_field(default_factory=dict)

    @property
    def algebra(self):
        return self.bound_quiver.algebra()


def _parse_matrix_literal(text: str, fieldspec: FieldSpec) -> list[list]:
    """Parse [[a,b],[c,d]] with integer or n/d entries."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"matrix literal must be bracketed: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return []
    if not (inner.startswith("[")):
        raise ParseError("matrix literal must be a list of rows")
    rows = []
    depth = 0
    current = ""
    for ch in inner:
        if ch == "[":
            depth += 1
            if depth == 1:
                current = ""
                continue
        if ch == "]":
            depth -= 1
            if depth == 0:
                entries = [e for e in current.split(",") if e.strip()]
                rows.append([fieldspec.parse(e) for e in entries])
                continue
        if depth == 0:
            if ch not in ", \t":
                raise ParseError(f"unexpected {ch!r} between matrix rows")
            continue
        current += ch
    if depth != 0:
        raise ParseError("unbalanced brackets in matrix literal")
    return rows


def _parse_path_combo(text: str, quiver: Quiver, fieldspec: FieldSpec) -> PathCombo:
    """Signed path words: `b.a - c.d`, `2*e.e`, ..."""
    terms: dict[Path, object] = {}
    tokens = text.replace("-", " - ").replace("+", " + ").split()
    sign = 1
    pending_coeff = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            sign = 1
            i += 1
            continue
        if tok == "-":
            sign = -1
            i += 1
            continue
        coeff = fieldspec.from_int(sign)
        word = tok
        if "*" in tok:
            c, word = tok.split("*", 1)
            coeff = coeff * fieldspec.parse(c)
        arrows = []
        for name in word.split("."):
            arrow = quiver.arrow_by_name.get(name)
            if arrow is None:
                raise ParseError(f"unknown arrow {name!r} in relation")
            arrows.append(arrow)
        p = Path(quiver, arrows)
        terms[p] = terms.get(p, fieldspec.from_int(0)) + coeff
        sign = 1
        i += 1
    return PathCombo(fieldspec, terms)


def parse_project(text: str) -> ProjectFile:
    fieldspec: FieldSpec | None = None
    vertices: list[str] | None = None
    arrows: list[tuple[str, str, str]] = []
    relation_texts: list[str] = []
    rep_dims: dict[str, list[int]] = {}
    rep_maps: dict[str, dict[str, list[list]]] = {}
    formula_texts: dict[str, str] = {}
    pair_decls: dict[str, tuple[str, str]] = {}
    structure: str | None = None
    bounds: dict[str, int] = {}
    order: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        keyword = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        try:
            if keyword == "field":
                if fieldspec is not None:
                    raise ParseError("field declared twice")
                fieldspec = field_from_name(rest)
            elif keyword == "vertices":
                if vertices is not None:
                    raise ParseError("vertices declared twice")
                vertices = rest.split()
                if not vertices:
                    raise ParseError("empty vertex list")
            elif keyword == "arrow":
                bits = rest.split()
                if len(bits) != 3:
                    raise ParseError("arrow NAME SOURCE TARGET")
                arrows.append((bits[0], bits[1], bits[2]))
            elif keyword == "relation":
                relation_texts.append(rest)
            elif keyword == "rep":
                bits = rest.split(None, 2)
                if len(bits) < 2:
                    raise ParseError("rep NAME dims ... | rep NAME map ARROW [[...]]")
                name = bits[0]
                if bits[1] == "dims":
                    dims = [int(x) for x in bits[2].split()] if len(bits) > 2 else []
                    if name in rep_dims:
                        raise ParseError(f"dims of rep {name!r} declared twice")
                    rep_dims[name] = dims
                    rep_maps.setdefault(name, {})
                    order.append(name)
                elif bits[1] == "map":
                    if len(bits) < 3:
                        raise ParseError("rep NAME map ARROW [[...]]")
                    arrow_name, _, literal = bits[2].partition(" ")
                    if name not in rep_dims:
                        raise ParseError(f"rep {name!r} needs dims before maps")
                    rep_maps[name][arrow_name] = literal.strip()
                else:
                    raise ParseError(f"unknown rep clause {bits[1]!r}")
            elif keyword == "formula":
                name, sep, body = rest.partition(":=")
                if not sep:
                    raise ParseError("formula NAME := TEXT")
                formula_texts[name.strip()] = body.strip()
            elif keyword == "pair":
                name, sep, body = rest.partition(":=")
                if not sep or "/" not in body:
                    raise ParseError("pair NAME := PHI / PSI")
                phi, psi = body.split("/", 1)
                pair_decls[name.strip()] = (phi.strip(), psi.strip())
            elif keyword == "structure":
                if structure is not None:
                    raise ParseError("structure declared twice")
                structure = rest.strip()
                if structure not in ("tensor_over_base", "diagonal_tensor"):
                    raise ParseError(f"unknown structure {structure!r}")
            elif keyword == "bound":
                bits = rest.split()
                if len(bits) != 2 or bits[0] not in ("max_total_dim", "max_entries"):
                    raise ParseError("bound max_total_dim N | bound max_entries N")
                bounds[bits[0]] = int(bits[1])
            else:
                raise ParseError(f"unknown keyword {keyword!r}")
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None

    if fieldspec is None:
        raise ParseError("missing field declaration")
    if vertices is None:
        raise ParseError("missing vertices declaration")
    quiver = Quiver(vertices, arrows)
    relations = [_parse_path_combo(t, quiver, fieldspec) for t in relation_texts]
    bq = BoundQuiver(quiver, fieldspec, relations)
    alg = bq.algebra()

    reps: dict[str, Representation] = {}
    for name in order:
        dims = rep_dims[name]
        if len(dims) != len(vertices):
            raise ParseError(f"rep {name!r}: need one dimension per vertex")
        arrow_mats: dict[str, Matrix] = {}
        vidx = quiver.vertex_index
        for a in quiver.arrows:
            r = dims[vidx[a.target]]
            c = dims[vidx[a.source]]
            literal = rep_maps[name].get(a.name)
            if literal is None:
                arrow_mats[a.name] = Matrix.zeros(fieldspec, r, c)
            else:
                data = _parse_matrix_literal(literal, fieldspec)
                if len(data) != r or any(len(row) != c for row in data):
                    raise ParseError(
                        f"rep {name!r}: matrix for arrow {a.name!r} must be {r}x{c}"
                    )
                arrow_mats[a.name] = Matrix(fieldspec, r, c, data)
        for extra in rep_maps[name]:
            if extra not in quiver.arrow_by_name:
                raise ParseError(f"rep {name!r}: unknown arrow {extra!r}")
        reps[name] = representation_from_arrows(bq, dims, arrow_mats)

    formulas = {
        name: parse_pp_formula(body, bq) for name, body in formula_texts.items()
    }
    for pname, (phi, psi) in pair_decls.items():
        if phi not in formulas or psi not in formulas:
            raise ParseError(f"pair {pname!r} references unknown formulas")
    return ProjectFile(fieldspec, bq, reps, formulas, pair_decls, structure, bounds)


def representation_from_arrows(
    bq: BoundQuiver, dims, arrow_matrices: dict[str, Matrix]
) -> Representation:
    """Build a representation of the bound quiver algebra from matrices
    for the arrows; composite basis paths act by matrix products, and the
    relations are verified by the construction-time table check."""
    alg = bq.algebra()
    act = {}
    for i, label in enumerate(alg.labels):
        if alg.is_idempotent_index(i):
            continue
        path = bq.path(label)
        m = None
        for a in reversed(path.arrows):
            am = arrow_matrices[a.name]
            m = am if m is None else am * m
        act[i] = m
    return Representation(alg, dims, act)
