"""The workspace text format: one quiver, named representations, and
optional named morphisms, with exact rational matrix literals.

The format is line-oriented and diff-friendly:

    quiver {
      vertices v1 v2 v0
      arrow a1 : v1 -> v0
      arrow a2 : v2 -> v0
    }

    rep M {
      dims v1=1 v2=1 v0=2
      map a1 [1; 0]
      map a2 [0; 1/2]
    }

    morphism h : U -> M {
      at v0 [1; 0]
    }

Matrices are row-major: rows are separated by ';', entries by spaces or
commas, and the matrix for an arrow a: s -> t has shape dims[t] x dims[s].
Omitted dims are zero and omitted matrices are zero matrices.  Scalars are
exact rational literals like 3, -2 or 5/7; floats are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .fields import QQ
from .linalg import Matrix
from .quiver import Quiver, QuiverError, Rep, RepMorphism, direct_sum


class WorkspaceError(ValueError):
    pass


class WorkspaceSyntaxError(WorkspaceError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class WorkspaceShapeError(WorkspaceError):
    pass


@dataclass(frozen=True)
class Workspace:
    quiver: Quiver
    reps: dict
    morphisms: dict
    field: object = QQ

    def rep(self, name: str) -> Rep:
        try:
            return self.reps[name]
        except KeyError:
            raise WorkspaceError(f"unknown representation {name!r}") from None

    def morphism(self, name: str) -> RepMorphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise WorkspaceError(f"unknown morphism {name!r}") from None


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<arrowsym>->)
  | (?P<number>-?\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\];,=:])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise WorkspaceSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "newline":
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(_Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, field=QQ):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise WorkspaceSyntaxError(message, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text if tok.text else "end of input"
            self.fail(f"expected {want!r}, found {got!r}")
        return self.next()

    def expect_name(self) -> _Token:
        tok = self.peek()
        if tok.kind != "name":
            self.fail(f"expected a name, found {tok.text or 'end of input'!r}")
        return self.next()

    # -- grammar ------------------------------------------------------------

    def parse(self) -> Workspace:
        quiver = None
        reps: dict[str, Rep] = {}
        morphisms: dict[str, RepMorphism] = {}
        while self.peek().kind != "eof":
            tok = self.expect_name()
            if tok.text == "quiver":
                if quiver is not None:
                    self.fail("duplicate quiver block", tok)
                quiver = self.parse_quiver()
            elif tok.text == "rep":
                if quiver is None:
                    self.fail("the quiver block must come before representations", tok)
                name_tok = self.expect_name()
                if name_tok.text in reps:
                    self.fail(f"duplicate representation {name_tok.text!r}", name_tok)
                reps[name_tok.text] = self.parse_rep(quiver)
            elif tok.text == "morphism":
                if quiver is None:
                    self.fail("the quiver block must come before morphisms", tok)
                name_tok = self.expect_name()
                if name_tok.text in morphisms:
                    self.fail(f"duplicate morphism {name_tok.text!r}", name_tok)
                morphisms[name_tok.text] = self.parse_morphism(quiver, reps)
            else:
                self.fail(f"expected 'quiver', 'rep' or 'morphism', found {tok.text!r}", tok)
        if quiver is None:
            raise WorkspaceError("workspace contains no quiver block")
        return Workspace(quiver, reps, morphisms, self.field)

    def parse_quiver(self) -> Quiver:
        open_tok = self.expect("punct", "{")
        vertices: list[str] = []
        arrows: list[tuple[str, str, str]] = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "}":
                self.next()
                break
            if tok.kind == "eof":
                self.fail("unterminated quiver block", open_tok)
            head = self.expect_name()
            if head.text == "vertices":
                while self.peek().kind == "name":
                    vertices.append(self.next().text)
            elif head.text == "arrow":
                aname = self.expect_name()
                self.expect("punct", ":")
                src = self.expect_name()
                self.expect("arrowsym")
                dst = self.expect_name()
                arrows.append((aname.text, src.text, dst.text))
            else:
                self.fail(f"expected 'vertices' or 'arrow', found {head.text!r}", head)
        try:
            return Quiver.build(vertices, arrows)
        except QuiverError as exc:
            raise WorkspaceError(str(exc)) from exc

    def parse_matrix(self) -> list[list]:
        self.expect("punct", "[")
        rows: list[list] = []
        current: list = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "]":
                self.next()
                break
            if tok.kind == "number":
                current.append(self.field.of(self.next().text))
            elif tok.kind == "punct" and tok.text == ",":
                self.next()
            elif tok.kind == "punct" and tok.text == ";":
                self.next()
                rows.append(current)
                current = []
            else:
                self.fail(f"expected a rational entry, ';' or ']', found {tok.text or 'end of input'!r}")
        if current or rows:
            rows.append(current)
        return rows

    def _matrix_for(self, rows: list[list], shape: tuple[int, int],
                    what: str, tok: _Token) -> Matrix:
        want_r, want_c = shape
        if want_r == 0 or want_c == 0:
            if rows and any(rows):
                raise WorkspaceShapeError(
                    f"shape mismatch at {what}: expected {want_r}x{want_c}")
            return Matrix.zeros(self.field, want_r, want_c)
        if len(rows) != want_r or any(len(r) != want_c for r in rows):
            got = f"{len(rows)}x{len(rows[0]) if rows else 0}"
            raise WorkspaceShapeError(
                f"shape mismatch at {what}: got {got}, expected {want_r}x{want_c}")
        return Matrix.from_rows(self.field, rows)

    def parse_rep(self, quiver: Quiver) -> Rep:
        open_tok = self.expect("punct", "{")
        dims: dict[str, int] = {}
        pending_maps: list[tuple[_Token, list[list]]] = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "}":
                self.next()
                break
            if tok.kind == "eof":
                self.fail("unterminated rep block", open_tok)
            head = self.expect_name()
            if head.text == "dims":
                while self.peek().kind == "name":
                    v = self.next()
                    if v.text not in quiver.vertices:
                        self.fail(f"unknown vertex {v.text!r}", v)
                    self.expect("punct", "=")
                    num = self.expect("number")
                    if "/" in num.text or int(num.text) < 0:
                        self.fail("dimensions must be nonnegative integers", num)
                    dims[v.text] = int(num.text)
            elif head.text == "map":
                aname = self.expect_name()
                if all(a.name != aname.text for a in quiver.arrows):
                    self.fail(f"unknown arrow {aname.text!r}", aname)
                pending_maps.append((aname, self.parse_matrix()))
            else:
                self.fail(f"expected 'dims' or 'map', found {head.text!r}", head)
        maps = {}
        for aname, rows in pending_maps:
            arrow = quiver.arrow(aname.text)
            shape = (dims.get(arrow.target, 0), dims.get(arrow.source, 0))
            maps[aname.text] = self._matrix_for(rows, shape, f"arrow {aname.text}", aname)
        return Rep.build(quiver, dims, maps, field=self.field)

    def parse_morphism(self, quiver: Quiver, reps: dict[str, Rep]) -> RepMorphism:
        self.expect("punct", ":")
        src = self.expect_name()
        self.expect("arrowsym")
        dst = self.expect_name()
        for t in (src, dst):
            if t.text not in reps:
                self.fail(f"unknown representation {t.text!r}", t)
        source, target = reps[src.text], reps[dst.text]
        open_tok = self.expect("punct", "{")
        blocks = {}
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "}":
                self.next()
                break
            if tok.kind == "eof":
                self.fail("unterminated morphism block", open_tok)
            head = self.expect_name()
            if head.text != "at":
                self.fail(f"expected 'at', found {head.text!r}", head)
            v = self.expect_name()
            if v.text not in quiver.vertices:
                self.fail(f"unknown vertex {v.text!r}", v)
            rows = self.parse_matrix()
            shape = (target.dims[v.text], source.dims[v.text])
            blocks[v.text] = self._matrix_for(rows, shape, f"vertex {v.text}", v)
        try:
            return RepMorphism.from_blocks(source, target, blocks)
        except QuiverError as exc:
            raise WorkspaceError(str(exc)) from exc


def parse_workspace(text: str, field=QQ) -> Workspace:
    """Parse a workspace document; errors carry line/column positions."""
    return _Parser(text, field=field).parse()


# ---------------------------------------------------------------------------
# Emission


def _emit_matrix(m: Matrix, field) -> str:
    return "[" + "; ".join(" ".join(field.to_str(x) for x in row) for row in m.entries) + "]"


def emit_workspace(ws: Workspace) -> str:
    """Canonical text for a workspace; parse(emit(ws)) == ws."""
    field = ws.field
    out = ["quiver {"]
    out.append("  vertices " + " ".join(ws.quiver.vertices))
    for a in ws.quiver.arrows:
        out.append(f"  arrow {a.name} : {a.source} -> {a.target}")
    out.append("}")
    for name, rep in ws.reps.items():
        out.append("")
        out.append(f"rep {name} {{")
        nonzero = [(v, rep.dims[v]) for v in ws.quiver.vertices if rep.dims[v]]
        if nonzero:
            out.append("  dims " + " ".join(f"{v}={d}" for v, d in nonzero))
        for a in ws.quiver.arrows:
            m = rep.map(a.name)
            if not m.is_zero():
                out.append(f"  map {a.name} {_emit_matrix(m, field)}")
        out.append("}")
    for name, mor in ws.morphisms.items():
        src = next(n for n, r in ws.reps.items() if r == mor.source)
        dst = next(n for n, r in ws.reps.items() if r == mor.target)
        out.append("")
        out.append(f"morphism {name} : {src} -> {dst} {{")
        for v in ws.quiver.vertices:
            b = mor.block(v)
            if not b.is_zero():
                out.append(f"  at {v} {_emit_matrix(b, field)}")
        out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Generator for the star family


def gen_star(n: int, points=None, field=QQ) -> Workspace:
    """The star-quiver workspace with representations U, V, M and N = U (+) V.

    The quiver has n arm vertices v1..vn all mapping into the sink v0; the
    n points must be pairwise distinct as projective points (a_i : b_i).
    """
    if n < 3:
        raise WorkspaceError("the star family needs at least 3 arms")
    if points is None:
        points = [(1, 0), (0, 1), (1, 1)] + [(1, k) for k in range(2, n - 1)]
    points = [(field.of(a), field.of(b)) for a, b in points]
    if len(points) != n:
        raise WorkspaceError(f"expected {n} points, got {len(points)}")
    for (a, b) in points:
        if not a and not b:
            raise WorkspaceError("(0, 0) is not a projective point")
    for i in range(n):
        for j in range(i + 1, n):
            ai, bi = points[i]
            aj, bj = points[j]
            if ai * bj == aj * bi:
                raise WorkspaceError(
                    f"points {i + 1} and {j + 1} coincide in the projective line")
    vertices = [f"v{i}" for i in range(1, n + 1)] + ["v0"]
    arrows = [(f"a{i}", f"v{i}", "v0") for i in range(1, n + 1)]
    quiver = Quiver.build(vertices, arrows)
    u = Rep.build(quiver, {"v0": 1}, field=field)
    v = Rep.build(quiver, {w: 1 for w in vertices},
                  {f"a{i}": [[1]] for i in range(1, n + 1)}, field=field)
    m = Rep.build(quiver, {f"v{i}": 1 for i in range(1, n + 1)} | {"v0": 2},
                  {f"a{i}": [[points[i - 1][0]], [points[i - 1][1]]]
                   for i in range(1, n + 1)}, field=field)
    n_rep = direct_sum(u, v).rep
    return Workspace(quiver, {"U": u, "V": v, "M": m, "N": n_rep}, {}, field)
