"""Short exact sequences, Ext^1 via cocycles, delta-invariants, pushouts.

Ext^1(V, U) is computed from the two-term complex

    (+)_v Hom(V_v, U_v)  -->  (+)_a Hom(V_s(a), U_t(a)),
    (h_v)  |->  (U_a h_s(a) - h_t(a) V_a),

which is the cocycle/coboundary presentation specialised to path algebras
of acyclic quivers: a cocycle on the algebra is determined by its values on
arrows, and the cocycle condition is then automatic.  Classes are stored as
canonical coset representatives (reduced against the echelon form of the
coboundary space), so equality of classes is syntactic.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .linalg import Matrix, RowSpace, block_matrix, complement_basis, hstack, vstack
from .quiver import (
    DimVector,
    QuiverError,
    Rep,
    RepMorphism,
    _cokernel_data,
    direct_sum,
    hom_basis,
    hom_dim,
    kernel_rep,
)


class SESError(ValueError):
    """A pair of morphisms fails to form a short exact sequence."""

    def __init__(self, failures):
        self.failures = tuple(failures)
        super().__init__("; ".join(self.failures))


def ses_failures(f: RepMorphism, g: RepMorphism) -> list[str]:
    """Per-vertex exactness defects of 0 -> U -f-> M -g-> V -> 0."""
    failures = []
    if f.target != g.source:
        return [f"middle terms differ: f lands in a different representation than g leaves"]
    quiver = f.source.quiver
    for v in quiver.vertices:
        fb, gb = f.block(v), g.block(v)
        rk_f, rk_g = fb.rank(), gb.rank()
        if rk_f < fb.cols:
            failures.append(f"not injective at vertex {v}")
        if rk_g < gb.rows:
            failures.append(f"not surjective at vertex {v}")
        composed = gb @ fb
        if not composed.is_zero():
            failures.append(f"not a complex at vertex {v}")
        elif rk_f + rk_g != fb.rows:
            failures.append(f"not exact at vertex {v}")
    return failures


@dataclass(frozen=True)
class ShortExactSeq:
    """A validated short exact sequence 0 -> U -f-> M -g-> V -> 0."""

    f: RepMorphism
    g: RepMorphism

    def __post_init__(self):
        failures = ses_failures(self.f, self.g)
        if failures:
            raise SESError(failures)

    @property
    def sub(self) -> Rep:
        return self.f.source

    @property
    def mid(self) -> Rep:
        return self.f.target

    @property
    def quot(self) -> Rep:
        return self.g.target


def make_ses(f: RepMorphism, g: RepMorphism) -> ShortExactSeq:
    """Validate a pair of morphisms as a short exact sequence."""
    return ShortExactSeq(f, g)


def split_ses(u: Rep, v: Rep) -> ShortExactSeq:
    """The canonical split sequence 0 -> U -> U (+) V -> V -> 0."""
    s = direct_sum(u, v)
    return ShortExactSeq(s.inj1, s.proj2)


# ---------------------------------------------------------------------------
# Ext^1 as cocycles modulo coboundaries


def _cocycle_layout(v: Rep, u: Rep):
    """Offsets of the per-arrow blocks inside the flat cocycle vector."""
    offs = []
    total = 0
    for a in v.quiver.arrows:
        offs.append(total)
        total += u.dims[a.target] * v.dims[a.source]
    return offs, total


def _flatten_cocycle(v: Rep, u: Rep, mats) -> tuple:
    return tuple(x for m in mats for row in m.entries for x in row)


def _unflatten_cocycle(v: Rep, u: Rep, vec) -> tuple[Matrix, ...]:
    offs, _ = _cocycle_layout(v, u)
    mats = []
    for a, off in zip(v.quiver.arrows, offs):
        r, c = u.dims[a.target], v.dims[a.source]
        mats.append(Matrix.from_rows(
            u.field, [[vec[off + i * c + j] for j in range(c)] for i in range(r)])
            if r * c else Matrix.zeros(u.field, r, c))
    return tuple(mats)


@lru_cache(maxsize=1024)
def _coboundary_space(v: Rep, u: Rep) -> RowSpace:
    """Echelon form of { (U_a h_s - h_t V_a)_a : h vertex-wise linear }."""
    quiver = v.quiver
    field = u.field
    offs, total = _cocycle_layout(v, u)
    space = RowSpace(field, total)
    for w in quiver.vertices:
        rows_w, cols_w = u.dims[w], v.dims[w]
        for i in range(rows_w):
            for j in range(cols_w):
                # h is the elementary map at vertex w sending basis vector j to i
                mats = []
                for ai, a in enumerate(quiver.arrows):
                    r, c = u.dims[a.target], v.dims[a.source]
                    acc = [[field.zero] * c for _ in range(r)]
                    if a.source == w:
                        ua = u.maps[ai]  # U_a h: column j picks up column i of U_a
                        for rr in range(r):
                            val = ua.entry(rr, i)
                            if val:
                                acc[rr][j] = acc[rr][j] + val
                    if a.target == w:
                        va = v.maps[ai]  # h V_a: row i picks up row j of V_a
                        for cc in range(c):
                            val = va.entry(j, cc)
                            if val:
                                acc[i][cc] = acc[i][cc] - val
                    mats.append(Matrix.from_rows(field, acc) if r * c
                                else Matrix.zeros(field, r, c))
                space.insert(_flatten_cocycle(v, u, mats))
    return space


@dataclass(frozen=True)
class ExtClass:
    """An element of Ext^1(quot, sub) as a canonical cocycle representative.

    ``cocycle`` holds one matrix of shape sub.dims[t(a)] x quot.dims[s(a)]
    per arrow a; it is already reduced against the coboundary space, so two
    classes are equal exactly when their fields are equal.
    """

    quot: Rep
    sub: Rep
    cocycle: tuple[Matrix, ...]

    @classmethod
    def from_matrices(cls, quot: Rep, sub: Rep, mats) -> "ExtClass":
        """Build a class from raw cocycle matrices (reduces to canonical form)."""
        mats = tuple(mats)
        for a, m in zip(quot.quiver.arrows, mats):
            want = (sub.dims[a.target], quot.dims[a.source])
            if (m.rows, m.cols) != want:
                raise QuiverError(f"cocycle block for arrow {a.name} has wrong shape")
        space = _coboundary_space(quot, sub)
        reduced = space.reduce(_flatten_cocycle(quot, sub, mats))
        return cls(quot, sub, _unflatten_cocycle(quot, sub, reduced))

    @classmethod
    def zero(cls, quot: Rep, sub: Rep) -> "ExtClass":
        mats = [Matrix.zeros(sub.field, sub.dims[a.target], quot.dims[a.source])
                for a in quot.quiver.arrows]
        return cls(quot, sub, tuple(mats))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.cocycle)

    def flat(self) -> tuple:
        return _flatten_cocycle(self.quot, self.sub, self.cocycle)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        if other.quot != self.quot or other.sub != self.sub:
            raise QuiverError("classes in different Ext groups")
        return ExtClass.from_matrices(
            self.quot, self.sub, tuple(a + b for a, b in zip(self.cocycle, other.cocycle)))

    def scale(self, c) -> "ExtClass":
        return ExtClass.from_matrices(self.quot, self.sub, tuple(m.scale(c) for m in self.cocycle))


def ext1_dim(v: Rep, u: Rep) -> int:
    """dim Ext^1(v, u) = (total cocycle dimension) - rank(coboundary map)."""
    _, total = _cocycle_layout(v, u)
    return total - _coboundary_space(v, u).dim


def ext1_basis(v: Rep, u: Rep) -> list[ExtClass]:
    """Canonical coset representatives spanning Ext^1(v, u).

    Representatives are the reductions of the standard coordinate vectors of
    the cocycle space at the non-pivot coordinates of the coboundary space.
    """
    space = _coboundary_space(v, u)
    offs, total = _cocycle_layout(v, u)
    field = u.field
    basis = []
    for i in range(total):
        if i in space.pivots:
            continue
        vec = [field.zero] * total
        vec[i] = field.one
        basis.append(ExtClass(v, u, _unflatten_cocycle(v, u, tuple(vec))))
    return basis


def ses_from_ext(e: ExtClass) -> ShortExactSeq:
    """The sequence with middle term in block form [[U_a, Z_a], [0, V_a]]."""
    u, v = e.sub, e.quot
    quiver = u.quiver
    field = u.field
    maps = []
    for ai, a in enumerate(quiver.arrows):
        ua, va, za = u.maps[ai], v.maps[ai], e.cocycle[ai]
        maps.append(block_matrix([
            [ua, za],
            [Matrix.zeros(field, va.rows, ua.cols), va],
        ]))
    mid = Rep(quiver, u.dims + v.dims, tuple(maps), field)
    f_blocks, g_blocks = [], []
    for w in quiver.vertices:
        du, dv = u.dims[w], v.dims[w]
        f_blocks.append(vstack([Matrix.identity(field, du), Matrix.zeros(field, dv, du)]))
        g_blocks.append(hstack([Matrix.zeros(field, dv, du), Matrix.identity(field, dv)]))
    return ShortExactSeq(RepMorphism(u, mid, tuple(f_blocks)),
                         RepMorphism(mid, v, tuple(g_blocks)))


def ext_from_ses(seq: ShortExactSeq) -> ExtClass:
    """The class of a sequence, via deterministic sections and retractions.

    At every vertex a linear section s of g (free variables zero) and a
    linear retraction r of f (through the deterministic complement) are
    chosen; the cocycle is r_t (M_a s_s - s_t V_a).  The class does not
    depend on these choices.
    """
    u, m, v = seq.sub, seq.mid, seq.quot
    quiver = u.quiver
    field = u.field
    sections, retractions = {}, {}
    for w in quiver.vertices:
        gb = seq.g.block(w)
        s = gb.solve(Matrix.identity(field, gb.rows))
        if s is None:
            raise SESError([f"no section at vertex {w} (internal error)"])
        sections[w] = s
        fb = seq.f.block(w)
        comp = complement_basis(fb, fb.rows)
        full = hstack([fb, comp]) if comp.cols else fb
        inv = full.inverse()
        retractions[w] = Matrix.from_rows(field, inv.entries[:fb.cols]) if fb.cols \
            else Matrix.zeros(field, 0, fb.rows)
    mats = []
    for ai, a in enumerate(quiver.arrows):
        ma, va = m.maps[ai], v.maps[ai]
        z = retractions[a.target] @ (ma @ sections[a.source] - sections[a.target] @ va)
        mats.append(z)
    return ExtClass.from_matrices(v, u, mats)


# ---------------------------------------------------------------------------
# delta-invariants and split tests


def delta(seq: ShortExactSeq, x: Rep) -> int:
    """[U (+) V, X] - [M, X]; zero for every X exactly when the sequence splits."""
    return hom_dim(seq.sub, x) + hom_dim(seq.quot, x) - hom_dim(seq.mid, x)


def delta_prime(seq: ShortExactSeq, x: Rep) -> int:
    """[X, U (+) V] - [X, M]."""
    return hom_dim(x, seq.sub) + hom_dim(x, seq.quot) - hom_dim(x, seq.mid)


def is_split(seq: ShortExactSeq) -> bool:
    """Split test via delta(seq, U) = 0, cross-checked with delta'(seq, V) = 0."""
    left = delta(seq, seq.sub) == 0
    right = delta_prime(seq, seq.quot) == 0
    if left != right:
        raise SESError(["split criteria disagree (internal error)"])
    return left


# ---------------------------------------------------------------------------
# Pushouts


@dataclass(frozen=True)
class PushoutResult:
    """Pushout of sigma: 0 -> U -> M -> V -> 0 along h: U -> X.

    ``seq`` is the pushed-forward sequence 0 -> X -> W -> V -> 0, ``mid_map``
    the induced map M -> W, and ``tau`` the auxiliary exact sequence
    0 -> U -> M (+) X -> W -> 0.
    """

    seq: ShortExactSeq
    mid_map: RepMorphism
    tau: ShortExactSeq


def pushout(seq: ShortExactSeq, h: RepMorphism) -> PushoutResult:
    if h.source != seq.sub:
        raise QuiverError("pushout map must start at the subobject of the sequence")
    x = h.target
    m, v = seq.mid, seq.quot
    field = m.field
    ds = direct_sum(m, x)
    embed = ds.inj1.compose(seq.f) + ds.inj2.compose(-h)
    w, q, sections = _cokernel_data(embed)
    mid_map = q.compose(ds.inj1)
    f_new = q.compose(ds.inj2)
    g_blocks = []
    for wv, sect in zip(m.quiver.vertices, sections):
        gm = hstack([seq.g.block(wv), Matrix.zeros(field, v.dims[wv], x.dims[wv])])
        g_blocks.append(gm @ sect)
    g_new = RepMorphism(w, v, tuple(g_blocks))
    new_seq = make_ses(f_new, g_new)
    tau_mono = ds.inj1.compose(seq.f) + ds.inj2.compose(h)
    tau_epi = mid_map.compose(ds.proj1) + (-f_new).compose(ds.proj2)
    tau = make_ses(tau_mono, tau_epi)
    return PushoutResult(new_seq, mid_map, tau)


def ext_pushforward(e: ExtClass, h: RepMorphism) -> ExtClass:
    """The class of the pushout: cocycle blocks Z_a |-> h_t(a) Z_a."""
    if h.source != e.sub:
        raise QuiverError("pushforward map must start at the subobject of the class")
    mats = []
    for a, z in zip(e.quot.quiver.arrows, e.cocycle):
        mats.append(h.block(a.target) @ z)
    return ExtClass.from_matrices(e.quot, h.target, mats)


# ---------------------------------------------------------------------------
# Cancelling direct summands (constructive)


def _split_block_source(seq: ShortExactSeq, y: Rep, i: int) -> Rep:
    """Check that seq.sub is literally U (+) Y^i in block form; return U."""
    s = seq.sub
    quiver = s.quiver
    field = s.field
    ydims = y.dims.scale(i)
    u_counts = tuple(sc - yc for sc, yc in zip(s.dims.counts, ydims.counts))
    if any(c < 0 for c in u_counts):
        raise QuiverError("subobject too small to contain Y^i")
    u_dims = DimVector(quiver, u_counts)
    u_maps = []
    for ai, a in enumerate(quiver.arrows):
        sm = s.maps[ai]
        ut, us = u_dims[a.target], u_dims[a.source]
        yt, ys = y.dims[a.target], y.dims[a.source]
        ya = y.maps[ai]
        for bi in range(i):
            for bj in range(i + 1):
                # block row bi of the Y part against every column block bj
                r0 = ut + bi * yt
                if bj == 0:
                    c0, width, expect = 0, us, None
                else:
                    c0, width = us + (bj - 1) * ys, ys
                    expect = ya if bj - 1 == bi else None
                for r in range(yt):
                    for c in range(width):
                        val = sm.entry(r0 + r, c0 + c)
                        want = expect.entry(r, c) if expect is not None else field.zero
                        if val != want:
                            raise QuiverError(
                                "subobject is not presented as a block direct sum with Y^i")
        for r in range(ut):
            for c in range(i * ys):
                if sm.entry(r, us + c):
                    raise QuiverError(
                        "subobject is not presented as a block direct sum with Y^i")
        u_maps.append(Matrix.from_rows(field, [row[:us] for row in sm.entries[:ut]])
                      if ut * us else Matrix.zeros(field, ut, us))
    return Rep(quiver, u_dims, tuple(u_maps), field)


def cancel_summand(seq: ShortExactSeq, y: Rep, i: int) -> ShortExactSeq:
    """Split one copy of Y off a sequence 0 -> U (+) Y^i -> W -> V -> 0.

    Requires delta(seq, Y) < i.  Finds a nonzero combination of the Y-block
    projections that factors through the monomorphism, locates a coordinate
    where it is a retraction, and splits that copy of Y off the middle term.
    The result satisfies delta(result, X) = delta(seq, X) for every X.
    """
    if i < 1:
        raise QuiverError("need at least one copy of Y to cancel")
    if y.is_zero():
        raise QuiverError("cannot cancel the zero representation")
    d = delta(seq, y)
    if d >= i:
        raise QuiverError(f"delta(seq, Y) = {d} is not smaller than i = {i}")
    u = _split_block_source(seq, y, i)
    s, w = seq.sub, seq.mid
    quiver = s.quiver
    field = s.field

    def y_projection(j: int) -> RepMorphism:
        blocks = []
        for v in quiver.vertices:
            du, dy = u.dims[v], y.dims[v]
            m = Matrix.zeros(field, dy, s.dims[v]).entries
            m = [list(r) for r in m]
            for r in range(dy):
                m[r][du + j * dy + r] = field.one
            blocks.append(Matrix.from_rows(field, m) if dy else
                          Matrix.zeros(field, 0, s.dims[v]))
        return RepMorphism(s, y, tuple(blocks))

    projections = [y_projection(j) for j in range(i)]
    wy_basis = hom_basis(w, y)
    image_cols = [psi.compose(seq.f).flat() for psi in wy_basis]
    proj_cols = [p.flat() for p in projections]
    flat_len = len(proj_cols[0])
    system = Matrix.from_cols(field, image_cols + [tuple(-x for x in col) for col in proj_cols],
                              rows=flat_len)
    kernel = system.kernel_basis()
    chosen = None
    for ci in range(kernel.cols):
        vec = kernel.col(ci)
        lambdas = vec[len(image_cols):]
        if any(lambdas):
            chosen = (vec[:len(image_cols)], lambdas)
            break
    if chosen is None:
        raise QuiverError("no Y-projection factors through the monomorphism (internal error)")
    alphas, lambdas = chosen
    phi = RepMorphism.zero(w, y)
    for a_c, psi in zip(alphas, wy_basis):
        if a_c:
            phi = phi + psi.scale(a_c)
    j0 = next(j for j, l in enumerate(lambdas) if l)
    rho = phi.scale(field.one / lambdas[j0])

    # inclusion of the j0-th copy of Y into the source, and the complement layout
    def y_inclusion(j: int) -> RepMorphism:
        blocks = []
        for v in quiver.vertices:
            du, dy = u.dims[v], y.dims[v]
            m = [[field.zero] * dy for _ in range(s.dims[v])]
            for r in range(dy):
                m[du + j * dy + r][r] = field.one
            blocks.append(Matrix.from_rows(field, m) if s.dims[v] * dy else
                          Matrix.zeros(field, s.dims[v], dy))
        return RepMorphism(y, s, tuple(blocks))

    f_j0 = seq.f.compose(y_inclusion(j0))

    w_prime, incl = kernel_rep(rho)
    proj_blocks = []
    for v in quiver.vertices:
        ident = Matrix.identity(field, w.dims[v])
        complement_proj = ident - f_j0.block(v) @ rho.block(v)
        sol = incl.block(v).solve(complement_proj)
        if sol is None:
            raise QuiverError("middle term does not split off Y (internal error)")
        proj_blocks.append(sol)
    q_hat = RepMorphism(w, w_prime, tuple(proj_blocks))

    # new source U (+) Y^(i-1): the old source with the j0-th block removed
    rest = u
    for _ in range(i - 1):
        rest = direct_sum(rest, y).rep
    incl_blocks = []
    for v in quiver.vertices:
        du, dy = u.dims[v], y.dims[v]
        cols = []
        for c in range(du):
            e = [field.zero] * s.dims[v]
            e[c] = field.one
            cols.append(e)
        kept = [j for j in range(i) if j != j0]
        for j in kept:
            for c in range(dy):
                e = [field.zero] * s.dims[v]
                e[du + j * dy + c] = field.one
                cols.append(e)
        incl_blocks.append(Matrix.from_cols(field, cols, rows=s.dims[v]))
    incl_rest = RepMorphism(rest, s, tuple(incl_blocks))

    f_new = q_hat.compose(seq.f).compose(incl_rest)
    g_new = seq.g.compose(incl)
    return make_ses(f_new, g_new)
