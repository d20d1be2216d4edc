"""Quivers, representations, morphisms, and Hom-space computation.

A representation assigns an exact matrix to every arrow of a finite acyclic
quiver; morphisms are families of per-vertex matrices satisfying the
intertwining equations exactly.  Only acyclic quivers are accepted: their
path algebras are finite dimensional and hereditary, which is what makes
the degree-one extension machinery in the other modules complete.

All values are immutable after construction and all operations are pure
functions, so values may be freely shared between threads.  Randomized
operations are deterministic given (inputs, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .fields import QQ
from .linalg import LinAlgError, Matrix, RowSpace, block_matrix, hstack, sparse_rank, vstack


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """A finite directed graph without oriented cycles."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise QuiverError(f"arrow {a.name} uses an unknown vertex")
        if self._has_cycle():
            raise QuiverError("quiver must be acyclic")

    def _has_cycle(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        queue = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        queue.append(a.target)
        return seen != len(self.vertices)

    @classmethod
    def build(cls, vertices, arrows) -> "Quiver":
        """Construct from vertex names and (name, source, target) triples."""
        return cls(tuple(vertices), tuple(Arrow(*a) for a in arrows))

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise QuiverError(f"unknown vertex {v!r}") from None

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise QuiverError(f"unknown arrow {name!r}")


@dataclass(frozen=True)
class DimVector:
    """One nonnegative count per vertex, in the quiver's vertex order."""

    quiver: Quiver
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != len(self.quiver.vertices):
            raise QuiverError("dimension vector has wrong length")
        if any(c < 0 for c in self.counts):
            raise QuiverError("dimensions must be nonnegative")

    @classmethod
    def of(cls, quiver: Quiver, dims) -> "DimVector":
        if isinstance(dims, DimVector):
            return dims
        if isinstance(dims, dict):
            unknown = set(dims) - set(quiver.vertices)
            if unknown:
                raise QuiverError(f"unknown vertices in dimension vector: {sorted(unknown)}")
            return cls(quiver, tuple(int(dims.get(v, 0)) for v in quiver.vertices))
        return cls(quiver, tuple(int(d) for d in dims))

    def __getitem__(self, vertex: str) -> int:
        return self.counts[self.quiver.vertex_index(vertex)]

    def __add__(self, other: "DimVector") -> "DimVector":
        if other.quiver != self.quiver:
            raise QuiverError("dimension vectors over different quivers")
        return DimVector(self.quiver, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def scale(self, k: int) -> "DimVector":
        return DimVector(self.quiver, tuple(k * c for c in self.counts))

    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.quiver.vertices, self.counts))


@dataclass(frozen=True)
class Rep:
    """A representation: a dimension vector plus one matrix per arrow.

    The matrix for an arrow a: s -> t has shape dims[t] x dims[s] and acts
    on column vectors.
    """

    quiver: Quiver
    dims: DimVector
    maps: tuple[Matrix, ...]
    field: object = QQ
    summands: tuple = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.dims.quiver != self.quiver:
            raise QuiverError("dimension vector belongs to a different quiver")
        if len(self.maps) != len(self.quiver.arrows):
            raise QuiverError("one matrix per arrow required")
        for a, m in zip(self.quiver.arrows, self.maps):
            want = (self.dims[a.target], self.dims[a.source])
            if (m.rows, m.cols) != want:
                raise QuiverError(
                    f"map for arrow {a.name} has shape {m.rows}x{m.cols}, expected {want[0]}x{want[1]}")
            if m.field != self.field:
                raise QuiverError(f"map for arrow {a.name} lives over a different field")
        if self.summands is None:
            object.__setattr__(self, "summands", (self,))

    @classmethod
    def build(cls, quiver: Quiver, dims, maps=None, field=QQ) -> "Rep":
        """Construct from a dims dict/sequence and a {arrow name: rows} dict.

        Missing arrow matrices default to zero; shapes are validated.
        """
        dv = DimVector.of(quiver, dims)
        maps = dict(maps or {})
        unknown = set(maps) - {a.name for a in quiver.arrows}
        if unknown:
            raise QuiverError(f"unknown arrows in map table: {sorted(unknown)}")
        mats = []
        for a in quiver.arrows:
            shape = (dv[a.target], dv[a.source])
            if a.name in maps:
                given = maps[a.name]
                if isinstance(given, Matrix):
                    m = given
                elif 0 in shape:
                    m = Matrix.zeros(field, *shape)  # empty row data cannot carry the shape
                else:
                    m = Matrix.from_rows(field, given)
            else:
                m = Matrix.zeros(field, *shape)
            mats.append(m)
        return cls(quiver, dv, tuple(mats), field)

    @classmethod
    def zero(cls, quiver: Quiver, field=QQ) -> "Rep":
        return cls.build(quiver, {v: 0 for v in quiver.vertices}, field=field)

    @classmethod
    def simple(cls, quiver: Quiver, vertex: str, field=QQ) -> "Rep":
        if vertex not in quiver.vertices:
            raise QuiverError(f"unknown vertex {vertex!r}")
        return cls.build(quiver, {vertex: 1}, field=field)

    def map(self, arrow_name: str) -> Matrix:
        for a, m in zip(self.quiver.arrows, self.maps):
            if a.name == arrow_name:
                return m
        raise QuiverError(f"unknown arrow {arrow_name!r}")

    def dim(self, vertex: str) -> int:
        return self.dims[vertex]

    def total_dim(self) -> int:
        return self.dims.total()

    def is_zero(self) -> bool:
        return self.total_dim() == 0


@dataclass(frozen=True)
class RepMorphism:
    """A family of per-vertex matrices intertwining two representations.

    The defining equations h_t X_a = Y_a h_s (one per arrow a: s -> t) are
    checked exactly at construction.
    """

    source: Rep
    target: Rep
    blocks: tuple[Matrix, ...]

    def __post_init__(self):
        if self.source.quiver != self.target.quiver:
            raise QuiverError("morphism between representations of different quivers")
        if self.source.field != self.target.field:
            raise QuiverError("morphism between representations over different fields")
        q = self.source.quiver
        if len(self.blocks) != len(q.vertices):
            raise QuiverError("one block per vertex required")
        for v, b in zip(q.vertices, self.blocks):
            want = (self.target.dims[v], self.source.dims[v])
            if (b.rows, b.cols) != want:
                raise QuiverError(f"block at {v} has shape {b.rows}x{b.cols}, expected {want}")
        for i, a in enumerate(q.arrows):
            ht = self.block(a.target)
            hs = self.block(a.source)
            if ht @ self.source.maps[i] != self.target.maps[i] @ hs:
                raise QuiverError(f"intertwining fails at arrow {a.name}")

    @classmethod
    def from_blocks(cls, source: Rep, target: Rep, blocks) -> "RepMorphism":
        """Construct from a {vertex: rows} dict; missing blocks are zero."""
        blocks = dict(blocks or {})
        mats = []
        for v in source.quiver.vertices:
            shape = (target.dims[v], source.dims[v])
            if v in blocks:
                given = blocks[v]
                m = given if isinstance(given, Matrix) else Matrix.from_rows(source.field, given)
            else:
                m = Matrix.zeros(source.field, *shape)
            mats.append(m)
        return cls(source, target, tuple(mats))

    @classmethod
    def identity(cls, rep: Rep) -> "RepMorphism":
        return cls(rep, rep, tuple(Matrix.identity(rep.field, rep.dims[v]) for v in rep.quiver.vertices))

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "RepMorphism":
        return cls(source, target,
                   tuple(Matrix.zeros(source.field, target.dims[v], source.dims[v])
                         for v in source.quiver.vertices))

    def block(self, vertex: str) -> Matrix:
        return self.blocks[self.source.quiver.vertex_index(vertex)]

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self after other (other: A -> B, self: B -> C)."""
        if other.target != self.source:
            raise QuiverError("composition shape mismatch")
        return RepMorphism(other.source, self.target,
                           tuple(b1 @ b2 for b1, b2 in zip(self.blocks, other.blocks)))

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        if other.source != self.source or other.target != self.target:
            raise QuiverError("sum of morphisms with different ends")
        return RepMorphism(self.source, self.target,
                           tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c) -> "RepMorphism":
        return RepMorphism(self.source, self.target, tuple(b.scale(c) for b in self.blocks))

    def __neg__(self) -> "RepMorphism":
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_injective(self) -> bool:
        return all(b.rank() == b.cols for b in self.blocks)

    def is_surjective(self) -> bool:
        return all(b.rank() == b.rows for b in self.blocks)

    def is_invertible(self) -> bool:
        return all(b.rows == b.cols and b.rank() == b.rows for b in self.blocks)

    def flat(self) -> tuple:
        """All block entries as one vector (vertex order, row-major)."""
        return tuple(x for b in self.blocks for row in b.entries for x in row)


# ---------------------------------------------------------------------------
# Hom spaces


def _check_same_quiver(x: Rep, y: Rep) -> None:
    if x.quiver != y.quiver:
        raise QuiverError("representations of different quivers")
    if x.field != y.field:
        raise QuiverError("representations over different fields")


def _hom_offsets(x: Rep, y: Rep):
    offs = []
    total = 0
    for v in x.quiver.vertices:
        offs.append(total)
        total += y.dims[v] * x.dims[v]
    return offs, total


def _hom_equations(x: Rep, y: Rep):
    """Sparse rows of the intertwining system in the flat coordinates."""
    q = x.quiver
    offs, _ = _hom_offsets(x, y)
    vidx = {v: i for i, v in enumerate(q.vertices)}
    rows = []
    for ai, a in enumerate(q.arrows):
        xa = x.maps[ai]
        ya = y.maps[ai]
        xs, xt = x.dims[a.source], x.dims[a.target]
        ys, yt = y.dims[a.source], y.dims[a.target]
        off_t = offs[vidx[a.target]]
        off_s = offs[vidx[a.source]]
        for i in range(yt):
            for j in range(xs):
                row = {}
                for k in range(xt):
                    v = xa.entry(k, j)
                    if v:
                        c = off_t + i * xt + k
                        row[c] = row.get(c, x.field.zero) + v
                for k in range(ys):
                    v = ya.entry(i, k)
                    if v:
                        c = off_s + k * xs + j
                        cur = row.get(c)
                        row[c] = (cur - v) if cur is not None else -v
                row = {c: val for c, val in row.items() if val}
                if row:
                    rows.append(row)
    return rows


def hom_basis(x: Rep, y: Rep) -> list[RepMorphism]:
    """A basis of Hom(x, y), computed from the intertwining equations."""
    _check_same_quiver(x, y)
    offs, total = _hom_offsets(x, y)
    if total == 0:
        return []
    z = x.field.zero
    dense = []
    for row in _hom_equations(x, y):
        r = [z] * total
        for c, v in row.items():
            r[c] = v
        dense.append(r)
    system = Matrix.from_rows(x.field, dense) if dense else Matrix.zeros(x.field, 0, total)
    kernel = system.kernel_basis()
    basis = []
    for j in range(kernel.cols):
        vec = kernel.col(j)
        blocks = []
        for vi, v in enumerate(x.quiver.vertices):
            r, c = y.dims[v], x.dims[v]
            off = offs[vi]
            blocks.append(Matrix.from_rows(
                x.field, [[vec[off + i * c + jj] for jj in range(c)] for i in range(r)])
                if r * c else Matrix.zeros(x.field, r, c))
        basis.append(RepMorphism(x, y, tuple(blocks)))
    return basis


@lru_cache(maxsize=4096)
def _hom_dim_cached(x: Rep, y: Rep) -> int:
    offs, total = _hom_offsets(x, y)
    if total == 0:
        return 0
    return total - sparse_rank(_hom_equations(x, y), x.field)


def hom_dim(x: Rep, y: Rep) -> int:
    """dim Hom(x, y); rank is computed on the sparse intertwining system."""
    _check_same_quiver(x, y)
    return _hom_dim_cached(x, y)


def euler_form(quiver: Quiver, d: DimVector, e: DimVector) -> int:
    """The hereditary Euler form <d, e> = sum_v d_v e_v - sum_a d_s(a) e_t(a)."""
    d = DimVector.of(quiver, d)
    e = DimVector.of(quiver, e)
    if d.quiver != quiver or e.quiver != quiver:
        raise QuiverError("dimension vectors over a different quiver")
    total = sum(dv * ev for dv, ev in zip(d.counts, e.counts))
    for a in quiver.arrows:
        total -= d[a.source] * e[a.target]
    return total


# ---------------------------------------------------------------------------
# Direct sums, kernels, cokernels


@dataclass(frozen=True)
class DirectSum:
    rep: Rep
    inj1: RepMorphism
    inj2: RepMorphism
    proj1: RepMorphism
    proj2: RepMorphism


def direct_sum(x: Rep, y: Rep) -> DirectSum:
    """Block-diagonal direct sum with canonical injections/projections."""
    _check_same_quiver(x, y)
    q = x.quiver
    f = x.field
    dims = x.dims + y.dims
    maps = []
    for xa, ya in zip(x.maps, y.maps):
        maps.append(block_matrix([
            [xa, Matrix.zeros(f, xa.rows, ya.cols)],
            [Matrix.zeros(f, ya.rows, xa.cols), ya],
        ]))
    rep = Rep(q, dims, tuple(maps), f, summands=tuple(x.summands) + tuple(y.summands))
    inj1_blocks, inj2_blocks, proj1_blocks, proj2_blocks = [], [], [], []
    for v in q.vertices:
        dx, dy = x.dims[v], y.dims[v]
        ix = Matrix.identity(f, dx)
        iy = Matrix.identity(f, dy)
        inj1_blocks.append(vstack([ix, Matrix.zeros(f, dy, dx)]))
        inj2_blocks.append(vstack([Matrix.zeros(f, dx, dy), iy]))
        proj1_blocks.append(hstack([ix, Matrix.zeros(f, dx, dy)]))
        proj2_blocks.append(hstack([Matrix.zeros(f, dy, dx), iy]))
    return DirectSum(
        rep,
        RepMorphism(x, rep, tuple(inj1_blocks)),
        RepMorphism(y, rep, tuple(inj2_blocks)),
        RepMorphism(rep, x, tuple(proj1_blocks)),
        RepMorphism(rep, y, tuple(proj2_blocks)),
    )


def direct_sum_rep(x: Rep, y: Rep) -> Rep:
    return direct_sum(x, y).rep


def kernel_rep(h: RepMorphism) -> tuple[Rep, RepMorphism]:
    """The vertex-wise kernel of h with its induced maps and inclusion."""
    x = h.source
    q = x.quiver
    bases = [h.block(v).kernel_basis() for v in q.vertices]
    dims = DimVector(q, tuple(b.cols for b in bases))
    maps = []
    for ai, a in enumerate(q.arrows):
        ks = bases[q.vertex_index(a.source)]
        kt = bases[q.vertex_index(a.target)]
        image = x.maps[ai] @ ks
        sol = kt.solve(image)
        if sol is None:
            raise QuiverError("kernel is not a subrepresentation (internal error)")
        maps.append(sol)
    ker = Rep(q, dims, tuple(maps), x.field)
    incl = RepMorphism(ker, x, tuple(bases))
    return ker, incl


def _quotient_data(target: Rep, image_cols: list[Matrix]):
    """Quotient of ``target`` by the vertex-wise span of ``image_cols``.

    Returns (rep, projection blocks, section blocks).  Quotient coordinates
    are the non-pivot standard coordinates of the reduced image span, so the
    construction is deterministic.
    """
    q = target.quiver
    f = target.field
    proj_blocks, sect_blocks, qdims = [], [], []
    spaces = []
    for v, cols in zip(q.vertices, image_cols):
        n = target.dims[v]
        space = RowSpace(f, n, (cols.col(j) for j in range(cols.cols)))
        spaces.append(space)
        free = [i for i in range(n) if i not in space.pivots]
        qdims.append(len(free))
        z, o = f.zero, f.one
        proj_rows = []
        reduced = []
        for i in range(n):
            e = [z] * n
            e[i] = o
            reduced.append(space.reduce(e))
        for fr in free:
            proj_rows.append([reduced[i][fr] for i in range(n)])
        proj_blocks.append(Matrix.from_rows(f, proj_rows) if free else Matrix.zeros(f, 0, n))
        sect_cols = []
        for fr in free:
            e = [z] * n
            e[fr] = o
            sect_cols.append(e)
        sect_blocks.append(Matrix.from_cols(f, sect_cols, rows=n))
    maps = []
    for ai, a in enumerate(q.arrows):
        si = q.vertex_index(a.source)
        ti = q.vertex_index(a.target)
        maps.append(proj_blocks[ti] @ target.maps[ai] @ sect_blocks[si])
    rep = Rep(q, DimVector(q, tuple(qdims)), tuple(maps), f)
    return rep, proj_blocks, sect_blocks


def _cokernel_data(h: RepMorphism):
    image_cols = [h.block(v) for v in h.source.quiver.vertices]
    rep, proj_blocks, sect_blocks = _quotient_data(h.target, image_cols)
    proj = RepMorphism(h.target, rep, tuple(proj_blocks))
    return rep, proj, sect_blocks


def cokernel_rep(h: RepMorphism) -> tuple[Rep, RepMorphism]:
    """The vertex-wise cokernel of h with its induced maps and projection."""
    rep, proj, _ = _cokernel_data(h)
    return rep, proj


# ---------------------------------------------------------------------------
# Isomorphism testing

_ISO_RANGES = ((0, 1), (-2, 2), (-8, 8))
_ISO_TRIES_PER_RANGE = 24
_ISO_GRID_BUDGET = 4096
_ISO_FALLBACK_ROUNDS = 64


def _combo(basis: list[RepMorphism], coeffs) -> RepMorphism:
    h = basis[0].scale(coeffs[0])
    for b, c in zip(basis[1:], coeffs[1:]):
        h = h + b.scale(c)
    return h


def find_isomorphism(x: Rep, y: Rep, seed: int = 0) -> RepMorphism | None:
    """An invertible morphism x -> y, or None if (certifiably) none exists.

    Searches integer combinations of a Hom basis over growing coefficient
    ranges.  A negative answer is certified either by a cheap Hom-dimension
    disproof, or by evaluating the determinant polynomial of a generic
    combination on a grid exceeding its degree bound; when that grid is too
    large, a long seeded random-evaluation fallback is used instead (the
    miss probability is negligible; see the package docs).
    """
    _check_same_quiver(x, y)
    if x.dims != y.dims:
        return None
    if x.total_dim() == 0:
        return RepMorphism.identity(x)
    basis = hom_basis(x, y)
    m = len(basis)
    if m == 0:
        return None
    # an isomorphism forces [X,X] = [X,Y] = [Y,Y]
    if hom_dim(x, x) != m or hom_dim(y, y) != m:
        return None
    for b in basis:  # single basis elements first: catches identity-like isos
        if b.is_invertible():
            return b
    rng = random.Random(f"{seed}:iso")
    for lo, hi in _ISO_RANGES:
        for _ in range(_ISO_TRIES_PER_RANGE):
            h = _combo(basis, [rng.randint(lo, hi) for _ in range(m)])
            if h.is_invertible():
                return h
    degree = x.total_dim()
    if (degree + 1) ** m <= _ISO_GRID_BUDGET:
        # determinant polynomial has total degree <= dim; a nonzero polynomial
        # cannot vanish on a full grid with degree+1 points per variable
        def walk(prefix):
            if len(prefix) == m:
                h = _combo(basis, prefix)
                return h if h.is_invertible() else None
            for c in range(degree + 1):
                found = walk(prefix + [c])
                if found is not None:
                    return found
            return None

        return walk([])
    bound = 8 * (degree + 1)
    for _ in range(_ISO_FALLBACK_ROUNDS):
        h = _combo(basis, [rng.randint(-bound, bound) for _ in range(m)])
        if h.is_invertible():
            return h
    return None


def is_isomorphic(x: Rep, y: Rep, seed: int = 0) -> bool:
    """Whether an invertible morphism x -> y exists; see find_isomorphism."""
    return find_isomorphism(x, y, seed) is not None
