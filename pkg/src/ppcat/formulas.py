"""Surface syntax for pp formulas.

Grammar (whitespace-insensitive):

    formula     := [ 'exists' var ':' SORT (',' var ':' SORT)* '.' ] conj
    conj        := equation ('&' equation)*
    equation    := sum '=' sum
    sum         := term (('+' | '-') term)*
    term        := [ coeff '*' ] [ pathword '*' ] VAR  |  '0'
    pathword    := NAME ('.' NAME)*        (composition right to left)
    coeff       := INT [ '/' INT ]

Sorted variables are written `name:vertex`; the sort of a free variable
may be declared at any occurrence or inferred (from the source vertex of
a path acting on it, or from the row's target sort for bare variables).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ParseError
from .ppform import PpFormula
from .quiver import AlgebraElement, BoundQuiver


@dataclass
class _Token:
    kind: str  # name, int, sym
    text: str


def _tokenize(text: str) -> list[_Token]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Token("int", text[i:j]))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            out.append(_Token("name", text[i:j]))
            i = j
            continue
        if c in ".,:*+-=&/()":
            out.append(_Token("sym", c))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r} in formula")
    return out


@dataclass
class _Term:
    coeff_num: int
    coeff_den: int
    pathword: str | None
    var: str | None  # None for a literal zero term


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of formula")
        self.pos += 1
        return t

    def accept(self, kind, text=None) -> bool:
        t = self.peek()
        if t and t.kind == kind and (text is None or t.text == text):
            self.pos += 1
            return True
        return False

    def expect(self, kind, text=None) -> _Token:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            raise ParseError(f"expected {text or kind}, got {t.text!r}")
        return t

    def parse_formula(self):
        bound = []
        if self.peek() and self.peek().kind == "name" and self.peek().text == "exists":
            self.next()
            while True:
                var = self.expect("name").text
                self.expect("sym", ":")
                sort = self.next().text
                bound.append((var, sort))
                if not self.accept("sym", ","):
                    break
            self.expect("sym", ".")
        equations = [self.parse_equation()]
        while self.accept("sym", "&"):
            equations.append(self.parse_equation())
        if self.peek() is not None:
            raise ParseError(f"trailing input near {self.peek().text!r}")
        return bound, equations

    def parse_equation(self):
        lhs, decls_l = self.parse_sum()
        self.expect("sym", "=")
        rhs, decls_r = self.parse_sum()
        return lhs, rhs, {**decls_l, **decls_r}

    def parse_sum(self):
        terms = []
        decls = {}
        sign = 1
        if self.accept("sym", "-"):
            sign = -1
        t, d = self.parse_term(sign)
        terms.append(t)
        decls.update(d)
        while True:
            if self.accept("sym", "+"):
                sign = 1
            elif self.accept("sym", "-"):
                sign = -1
            else:
                break
            t, d = self.parse_term(sign)
            terms.append(t)
            decls.update(d)
        return terms, decls

    def parse_term(self, sign: int):
        num, den = sign, 1
        decls = {}
        tok = self.peek()
        if tok is None:
            raise ParseError("missing term")
        if tok.kind == "int":
            self.next()
            num *= int(tok.text)
            if self.accept("sym", "/"):
                den = int(self.expect("int").text)
            if not self.accept("sym", "*"):
                if num == 0:
                    return _Term(0, 1, None, None), decls
                raise ParseError("a coefficient must multiply a variable via '*'")
        # pathword or variable: collect dotted names
        names = [self.expect("name").text]
        while self.accept("sym", "."):
            names.append(self.expect("name").text)
        if self.accept("sym", "*"):
            word = ".".join(names)
            var = self.expect("name").text
            if self.accept("sym", ":"):
                decls[var] = self.next().text
            return _Term(num, den, word, var), decls
        if len(names) > 1:
            raise ParseError("a dotted path must act on a variable via '*'")
        var = names[0]
        if self.accept("sym", ":"):
            decls[var] = self.next().text
        return _Term(num, den, None, var), decls


def parse_pp_formula(text: str, bq: BoundQuiver) -> PpFormula:
    """Parse the surface syntax into a PpFormula over the bound quiver
    algebra, inferring free-variable sorts where possible."""
    alg = bq.algebra()
    q = bq.quiver
    vname = {str(v): i for i, v in enumerate(q.vertices)}
    tokens = _tokenize(text)
    bound_decl, equations = _Parser(tokens).parse_formula()

    def sort_index(sortname: str) -> int:
        if sortname not in vname:
            raise DomainError(f"unknown sort {sortname!r}")
        return vname[sortname]

    bound_vars = [(name, sort_index(sort)) for name, sort in bound_decl]
    bound_names = {name for name, _ in bound_vars}

    # collect free variables in order of first occurrence, with sort hints
    free_order: list[str] = []
    sort_hints: dict[str, set[int]] = {}

    def hint(var, sort):
        sort_hints.setdefault(var, set()).add(sort)

    path_cache: dict[str, object] = {}

    def path_info(word):
        if word not in path_cache:
            path_cache[word] = bq.path(word)
        return path_cache[word]

    rows_raw = []
    for lhs, rhs, decls in equations:
        for var, sortname in decls.items():
            hint(var, sort_index(sortname))
        terms = lhs + [
            _Term(-t.coeff_num, t.coeff_den, t.pathword, t.var) for t in rhs
        ]
        target_hints = set()
        for t in terms:
            if t.var is None:
                continue
            if t.var not in bound_names and t.var not in free_order:
                free_order.append(t.var)
            if t.pathword:
                p = path_info(t.pathword)
                hint(t.var, vname[str(p.source)])
                target_hints.add(vname[str(p.target)])
        rows_raw.append((terms, target_hints))

    # resolve sorts: from hints, then bare variables take the row target
    resolved: dict[str, int] = {name: sort for name, sort in bound_vars}
    for var, hints in sort_hints.items():
        if len(hints) > 1:
            raise DomainError(f"conflicting sorts for variable {var!r}")
        if var in resolved:
            if resolved[var] not in hints:
                raise DomainError(f"conflicting sorts for variable {var!r}")
        else:
            resolved[var] = next(iter(hints))
    changed = True
    while changed:
        changed = False
        for terms, target_hints in rows_raw:
            known = set(target_hints)
            for t in terms:
                if t.var is not None and t.pathword is None and t.var in resolved:
                    known.add(resolved[t.var])
            if len(known) > 1:
                raise DomainError("conflicting target sorts in one equation")
            if len(known) == 1:
                target = next(iter(known))
                for t in terms:
                    if t.var is not None and t.pathword is None and t.var not in resolved:
                        resolved[t.var] = target
                        changed = True
    for var in free_order:
        if var not in resolved:
            raise DomainError(
                f"cannot infer the sort of {var!r}; annotate it as {var}:vertex"
            )

    free_vars = [(name, resolved[name]) for name in free_order]
    allvars = free_vars + bound_vars
    var_pos = {name: k for k, (name, _) in enumerate(allvars)}

    field = bq.field
    rows = []
    for terms, target_hints in rows_raw:
        known = set(target_hints)
        for t in terms:
            if t.var is not None and t.pathword is None:
                known.add(resolved[t.var])
        if not known:
            continue  # 0 = 0
        target = next(iter(known))
        entries: list[AlgebraElement | None] = [None] * len(allvars)
        for t in terms:
            if t.var is None:
                continue
            if t.var not in var_pos:
                raise DomainError(f"unknown variable {t.var!r}")
            coeff = field.from_int(t.coeff_num) / field.from_int(t.coeff_den)
            if t.pathword:
                el = bq.element(t.pathword).scale(coeff)
            else:
                el = alg.lazy(resolved[t.var]).scale(coeff)
            k = var_pos[t.var]
            entries[k] = el if entries[k] is None else entries[k] + el
        rows.append((target, tuple(e if (e is None or not e.is_zero()) else None for e in entries)))
    return PpFormula(alg, free_vars, bound_vars, rows)
