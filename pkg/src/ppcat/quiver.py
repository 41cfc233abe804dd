"""Quivers, paths, admissible relations, and finite-dimensional algebras
presented by structure constants.

Two kinds of algebra live here:

* bound quiver algebras, built from a quiver plus admissible relations by
  the degree-by-degree `path_basis` construction;
* endomorphism-style algebras assembled directly from a basis and a
  multiplication table (see `StructureAlgebra.build`).

Both are instances of `StructureAlgebra`: a field, a basis with a sort
(source/target idempotent) per element, a multiplication table, and the
orthogonal idempotent decomposition of 1.  Path composition is right to
left throughout: the word ``b.a`` means "apply a, then b".
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError, DomainError
from .exactfield import FieldSpec, Matrix


@dataclass(frozen=True)
class Arrow:
    name: str
    source: object
    target: object


class Quiver:
    """Directed multigraph with named vertices and arrows."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex ids")
        self.arrows = tuple(Arrow(*a) if not isinstance(a, Arrow) else a for a in arrows)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise DomainError("duplicate arrow names")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise DomainError(f"arrow {a.name} has undeclared endpoint")
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}


class Path:
    """A path in a quiver: either the lazy path at a vertex or a
    composable arrow sequence stored in composition order (index 0 is
    applied last)."""

    __slots__ = ("quiver", "arrows", "vertex")

    def __init__(self, quiver: Quiver, arrows=(), vertex=None):
        self.quiver = quiver
        self.arrows = tuple(arrows)
        if self.arrows:
            for left, right in zip(self.arrows, self.arrows[1:]):
                if left.source != right.target:
                    raise DomainError(f"non-composable arrows {left.name}, {right.name}")
            self.vertex = None
        else:
            if vertex is None or vertex not in quiver.vertex_index:
                raise DomainError("lazy path needs a declared vertex")
            self.vertex = vertex

    @property
    def source(self):
        return self.vertex if not self.arrows else self.arrows[-1].source

    @property
    def target(self):
        return self.vertex if not self.arrows else self.arrows[0].target

    @property
    def length(self) -> int:
        return len(self.arrows)

    def compose(self, other: "Path") -> "Path | None":
        """self after other (self.source must equal other.target)."""
        if self.source != other.target:
            return None
        if not self.arrows:
            return other
        if not other.arrows:
            return self
        return Path(self.quiver, self.arrows + other.arrows)

    def word(self) -> str:
        if not self.arrows:
            return f"e_{self.vertex}"
        return ".".join(a.name for a in self.arrows)

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.arrows == other.arrows
            and self.vertex == other.vertex
        )

    def __hash__(self):
        return hash((self.arrows, self.vertex))

    def __repr__(self):
        return self.word()


class PathCombo:
    """Formal K-linear combination of parallel paths (a relation, or a raw
    algebra element before reduction).  Zero is the empty combination."""

    def __init__(self, field: FieldSpec, terms: dict):
        self.field = field
        self.terms = {p: c for p, c in terms.items() if c}
        srcs = {p.source for p in self.terms}
        tgts = {p.target for p in self.terms}
        if len(srcs) > 1 or len(tgts) > 1:
            raise DomainError("paths in a combination must be parallel")
        self.source = next(iter(srcs)) if srcs else None
        self.target = next(iter(tgts)) if tgts else None

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {p.length for p in self.terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{p.word()}" for p, c in self.terms.items())


class AlgebraElement:
    """Element of a StructureAlgebra: coefficients over the algebra basis.
    All contributing basis elements must be parallel (same source sort and
    same target sort); zero is the empty support."""

    __slots__ = ("algebra", "coeffs", "source", "target")

    def __init__(self, algebra: "StructureAlgebra", coeffs: dict[int, object]):
        self.algebra = algebra
        self.coeffs = {i: c for i, c in coeffs.items() if c}
        srcs = {algebra.source[i] for i in self.coeffs}
        tgts = {algebra.target[i] for i in self.coeffs}
        if len(srcs) > 1 or len(tgts) > 1:
            raise DomainError("basis elements in an algebra element must be parallel")
        self.source = next(iter(srcs)) if srcs else None
        self.target = next(iter(tgts)) if tgts else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, self.algebra.field.zero()) + c
        return AlgebraElement(self.algebra, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {i: -c for i, c in self.coeffs.items()})

    def scale(self, k) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {i: k * c for i, c in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{self.algebra.labels[i]}" for i, c in sorted(self.coeffs.items()))


class StructureAlgebra:
    """Finite-dimensional associative algebra given by structure constants.

    Attributes:
        field: the ambient FieldSpec.
        labels: one human-readable label per basis element.
        source, target: sort index of each basis element (b = e_tgt b e_src).
        sort_labels: one label per sort.
        idempotent_index: basis index of the identity of each sort; the
            idempotents are orthogonal and sum to 1.
        table: table[i][j] = {k: coeff} expressing b_i * b_j in the basis
            (None for incomposable pairs, meaning zero).
        radical_spanned: when True, the Jacobson radical equals the span of
            the non-idempotent basis elements.  Bound quiver algebras with
            admissible relations and normalized endomorphism algebras of
            catalogues both have this property; radical-dependent
            operations (radical/top/socle, projective covers) require it.
    """

    def __init__(
        self,
        field: FieldSpec,
        labels,
        source,
        target,
        sort_labels,
        idempotent_index,
        table,
        radical_spanned: bool = False,
        validate: bool = True,
    ):
        self.field = field
        self.labels = tuple(labels)
        self.source = tuple(source)
        self.target = tuple(target)
        self.sort_labels = tuple(sort_labels)
        self.idempotent_index = tuple(idempotent_index)
        self.table = table
        self.radical_spanned = radical_spanned
        self.dim = len(self.labels)
        self.nsorts = len(self.sort_labels)
        self._idempotent_set = set(self.idempotent_index)
        self._opposite: StructureAlgebra | None = None
        if validate:
            self._validate()

    # -- queries -------------------------------------------------------
    def is_idempotent_index(self, i: int) -> bool:
        return i in self._idempotent_set

    def radical_indices(self) -> list[int]:
        if not self.radical_spanned:
            raise DomainError("algebra has no recorded radical basis")
        return [i for i in range(self.dim) if i not in self._idempotent_set]

    def basis_element(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, {i: self.field.one()})

    def lazy(self, sort: int) -> AlgebraElement:
        return self.basis_element(self.idempotent_index[sort])

    def zero_element(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def product_indices(self, i: int, j: int) -> dict[int, object]:
        cell = self.table[i][j]
        return cell if cell is not None else {}

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Bilinear extension of the basis multiplication table."""
        if x.algebra is not self or y.algebra is not self:
            raise DomainError("elements from a different algebra")
        out: dict[int, object] = {}
        zero = self.field.zero()
        for i, ci in x.coeffs.items():
            for j, cj in y.coeffs.items():
                cell = self.table[i][j]
                if not cell:
                    continue
                c = ci * cj
                for k, ck in cell.items():
                    out[k] = out.get(k, zero) + c * ck
        return AlgebraElement(self, out)

    # -- construction of the opposite algebra ---------------------------
    def opposite(self) -> "StructureAlgebra":
        """Same basis, reversed multiplication and swapped sorts; involutive."""
        if self._opposite is None:
            table = [[self.table[j][i] for j in range(self.dim)] for i in range(self.dim)]
            op = StructureAlgebra(
                self.field,
                self.labels,
                self.target,
                self.source,
                self.sort_labels,
                self.idempotent_index,
                table,
                radical_spanned=self.radical_spanned,
                validate=False,
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    # -- validation ------------------------------------------------------
    def _validate(self):
        one = self.field.one()
        for s, e in enumerate(self.idempotent_index):
            if self.source[e] != s or self.target[e] != s:
                raise DomainError("idempotent sort mismatch")
            if self.product_indices(e, e) != {e: one}:
                raise DomainError("idempotent not idempotent in table")
        # e_t b = b = b e_s, orthogonality of distinct idempotents
        for b in range(self.dim):
            s, t = self.source[b], self.target[b]
            for u, e in enumerate(self.idempotent_index):
                left = self.product_indices(e, b)
                right = self.product_indices(b, e)
                expect_l = {b: one} if u == t else {}
                expect_r = {b: one} if u == s else {}
                if left != expect_l or right != expect_r:
                    raise DomainError("idempotent action mismatch in table")
        # sort compatibility of products
        for i in range(self.dim):
            for j in range(self.dim):
                cell = self.product_indices(i, j)
                if self.source[i] != self.target[j]:
                    if cell:
                        raise DomainError("nonzero product of incomposable basis elements")
                    continue
                for k in cell:
                    if self.source[k] != self.source[j] or self.target[k] != self.target[i]:
                        raise DomainError("product lands in wrong sorts")
        # associativity on all basis triples
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.product_indices(i, j)
                for k in range(self.dim):
                    jk = self.product_indices(j, k)
                    left: dict[int, object] = {}
                    for m, c in ij.items():
                        for n, d in self.product_indices(m, k).items():
                            left[n] = left.get(n, self.field.zero()) + c * d
                    right: dict[int, object] = {}
                    for m, c in jk.items():
                        for n, d in self.product_indices(i, m).items():
                            right[n] = right.get(n, self.field.zero()) + c * d
                    if {n: c for n, c in left.items() if c} != {n: c for n, c in right.items() if c}:
                        raise DomainError(f"associativity fails on triple ({i},{j},{k})")


class BoundQuiver:
    """A quiver together with a field and admissible relations.

    Relations must be combinations of parallel paths, each of length >= 2
    and all of a common length (the relation ideal is then graded, which
    is what the degree-by-degree basis construction relies on)."""

    def __init__(self, quiver: Quiver, field: FieldSpec, relations=()):
        self.quiver = quiver
        self.field = field
        self.relations = tuple(relations)
        for rel in self.relations:
            if rel.is_zero():
                raise DomainError("zero relation")
            degs = rel.degrees()
            if min(degs) < 2:
                raise DomainError("non-admissible relation: a path of length < 2 appears")
            if len(degs) > 1:
                raise DomainError(
                    "relations mixing path lengths are not supported by the "
                    "degree-by-degree reduction; split them into homogeneous parts"
                )
        self._algebra: StructureAlgebra | None = None
        self._basis_paths: list[Path] | None = None
        self._reduction: dict[Path, dict[int, object]] | None = None

    def lazy(self, vertex) -> Path:
        return Path(self.quiver, (), vertex)

    def path(self, word: str) -> Path:
        """Parse a dotted word like ``b.a`` (composition right to left) or
        ``e_v`` for the lazy path at v."""
        word = word.strip()
        if word.startswith("e_"):
            v = word[2:]
            for cand in self.quiver.vertices:
                if str(cand) == v:
                    return self.lazy(cand)
            raise DomainError(f"unknown vertex in lazy path {word!r}")
        arrows = []
        for name in word.split("."):
            arrow = self.quiver.arrow_by_name.get(name)
            if arrow is None:
                raise DomainError(f"unknown arrow {name!r}")
            arrows.append(arrow)
        return Path(self.quiver, arrows)

    def algebra(self) -> StructureAlgebra:
        if self._algebra is None:
            self._build()
        return self._algebra

    def reduce(self, combo: PathCombo) -> AlgebraElement:
        """Image of a raw path combination in the quotient algebra."""
        alg = self.algebra()
        out: dict[int, object] = {}
        zero = self.field.zero()
        for p, c in combo.terms.items():
            red = self._reduce_path(p)
            for k, ck in red.items():
                out[k] = out.get(k, zero) + c * ck
        return AlgebraElement(alg, out)

    def element(self, word: str) -> AlgebraElement:
        """Reduce a single path word to an algebra element."""
        p = self.path(word)
        return self.reduce(PathCombo(self.field, {p: self.field.one()}))

    def _reduce_path(self, p: Path) -> dict[int, object]:
        red = self._reduction.get(p)
        return red if red is not None else {}

    # -- basis construction ---------------------------------------------
    MAX_DEGREE = 64
    MAX_PATHS_PER_DEGREE = 20000

    def _build(self):
        q = self.quiver
        field = self.field
        paths_by_degree: list[list[Path]] = [[self.lazy(v) for v in q.vertices]]
        basis_by_degree: list[list[Path]] = [list(paths_by_degree[0])]
        # reduction of every enumerated path to a combination of basis paths
        reduction: dict[Path, dict[Path, object]] = {
            p: {p: field.one()} for p in paths_by_degree[0]
        }
        rels_by_degree: dict[int, list[PathCombo]] = {}
        for rel in self.relations:
            rels_by_degree.setdefault(next(iter(rel.degrees())), []).append(rel)

        degree = 0
        while True:
            degree += 1
            if degree > self.MAX_DEGREE:
                raise BudgetError(
                    f"path basis construction exceeded degree {self.MAX_DEGREE}; "
                    "the algebra looks infinite-dimensional"
                )
            prev = paths_by_degree[degree - 1]
            cur: list[Path] = []
            for p in prev:
                for a in q.arrows:
                    if a.source == p.target:
                        cur.append(Path(q, (a,) + p.arrows))
            if len(cur) > self.MAX_PATHS_PER_DEGREE:
                raise BudgetError("too many paths in one degree")
            if not cur:
                break
            paths_by_degree.append(cur)
            index = {p: i for i, p in enumerate(cur)}
            # degree-d part of the relation ideal: p * r * q over all
            # homogeneous splits of the degree
            ideal_rows: list[list[object]] = []
            zero = field.zero()
            for e, rels in rels_by_degree.items():
                if e > degree:
                    continue
                for left_deg in range(degree - e + 1):
                    right_deg = degree - e - left_deg
                    for lp in paths_by_degree[left_deg]:
                        for rel in rels:
                            if rel.target != lp.source:
                                continue
                            for rp in paths_by_degree[right_deg]:
                                if rp.target != rel.source:
                                    continue
                                row = [zero] * len(cur)
                                ok = True
                                for mp, c in rel.terms.items():
                                    full = lp.compose(mp)
                                    full = full.compose(rp) if full else None
                                    if full is None:
                                        ok = False
                                        break
                                    row[index[full]] = row[index[full]] + c
                                if ok and any(row):
                                    ideal_rows.append(row)
            if ideal_rows:
                mat = Matrix(field, len(ideal_rows), len(cur), ideal_rows)
                rref, pivots = mat.rref()
            else:
                rref, pivots = None, []
            pivot_set = set(pivots)
            basis_d = [p for i, p in enumerate(cur) if i not in pivot_set]
            # reduction map for every path of this degree
            for i, p in enumerate(cur):
                if i not in pivot_set:
                    reduction[p] = {p: field.one()}
            for r, pc in enumerate(pivots):
                expr: dict[Path, object] = {}
                for j in range(pc + 1, len(cur)):
                    c = rref.data[r][j]
                    if c and j not in pivot_set:
                        expr[cur[j]] = -c
                reduction[cur[pc]] = expr
            if not basis_d:
                paths_by_degree.pop()
                break
            basis_by_degree.append(basis_d)

        basis_paths: list[Path] = [p for layer in basis_by_degree for p in layer]
        basis_index = {p: i for i, p in enumerate(basis_paths)}
        max_degree = len(basis_by_degree) - 1

        def reduce_to_indices(p: Path) -> dict[int, object]:
            if p.length > max_degree:
                return {}
            out: dict[int, object] = {}
            for bp, c in reduction.get(p, {}).items():
                out[basis_index[bp]] = c
            return out

        vmap = q.vertex_index
        source = [vmap[p.source] for p in basis_paths]
        target = [vmap[p.target] for p in basis_paths]
        table: list[list[dict | None]] = [[None] * len(basis_paths) for _ in basis_paths]
        for i, pi in enumerate(basis_paths):
            for j, pj in enumerate(basis_paths):
                comp = pi.compose(pj)
                if comp is None:
                    continue
                cell = reduce_to_indices(comp)
                table[i][j] = cell
        self._algebra = StructureAlgebra(
            field,
            [p.word() for p in basis_paths],
            source,
            target,
            [str(v) for v in q.vertices],
            [basis_index[self.lazy(v)] for v in q.vertices],
            table,
            radical_spanned=True,
        )
        self._basis_paths = basis_paths
        self._reduction = {p: reduce_to_indices(p) for p in reduction}


def path_basis(bq: BoundQuiver) -> StructureAlgebra:
    """Basis and multiplication table of the bound quiver algebra; the
    basis consists of residue classes of paths, computed degree by degree
    until a degree dies out."""
    return bq.algebra()


def multiply(x: AlgebraElement, y: AlgebraElement, bq: BoundQuiver) -> AlgebraElement:
    """Product x*y in the bound quiver algebra (concatenate, then reduce)."""
    return bq.algebra().multiply(x, y)
