"""The pushout-chain algorithm: hypothesis checking, chain construction,
splitting-index detection, and the rank-one / span verifications.

Given a codimension-two degeneration N = U (+) V of M satisfying
[U,M] = [U,N] and [M,V] = [N,V], the singularity type of the orbit closure
of M at N is the cone over a rational normal curve.  Its degree is computed
constructively: starting from a sequence 0 -> U -> M -> V -> 0 and a
homomorphism g_1 chosen outside the image of composition with the
monomorphism, successive pushouts produce sequences sigma_2, sigma_3, ...
over the same quotient V; the degree is (first split index) - 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .degeneration import codim
from .homological import (
    ExtClass,
    ShortExactSeq,
    delta,
    delta_prime,
    ext1_dim,
    ext_from_ses,
    ext_pushforward,
    is_split,
    make_ses,
    pushout,
)
from .linalg import Matrix, RowSpace, complement_basis
from .quiver import (
    QuiverError,
    Rep,
    RepMorphism,
    direct_sum,
    find_isomorphism,
    hom_basis,
    hom_dim,
)

_SAMPLING_RANGES = ((0, 1), (-2, 2), (-8, 8), (-32, 32))
_TRIES_PER_RANGE = 24


class ChainError(Exception):
    pass


class HypothesesError(ChainError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"hypotheses not satisfied: {report.summary()}")


class VerificationError(ChainError):
    pass


@dataclass(frozen=True, eq=False)
class SingularityType:
    """Either the regular type or the cone over a rational normal curve.

    The regular type and the degree-1 cone are the same singularity type,
    so comparisons use the degree only; the ``regular`` flag records which
    branch produced the answer and drives the display.
    """

    degree: int
    regular: bool = False

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")

    @classmethod
    def regular_type(cls) -> "SingularityType":
        return cls(1, True)

    @classmethod
    def cone(cls, degree: int) -> "SingularityType":
        return cls(degree, False)

    @property
    def is_regular(self) -> bool:
        return self.degree == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, SingularityType) and other.degree == self.degree

    def __hash__(self) -> int:
        return hash(self.degree)

    def __str__(self) -> str:
        return "Reg" if self.regular else f"ConeOverRNC(degree={self.degree})"


@dataclass(frozen=True)
class HypothesesReport:
    hom_u_m: int
    hom_u_n: int
    hom_m_v: int
    hom_n_v: int
    codim: int

    @property
    def left_ok(self) -> bool:
        return self.hom_u_m == self.hom_u_n

    @property
    def right_ok(self) -> bool:
        return self.hom_m_v == self.hom_n_v

    @property
    def codim_ok(self) -> bool:
        return self.codim == 2

    @property
    def ok(self) -> bool:
        return self.left_ok and self.right_ok and self.codim_ok

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        return (f"[U,M]={self.hom_u_m} [U,N]={self.hom_u_n} "
                f"[M,V]={self.hom_m_v} [N,V]={self.hom_n_v} codim={self.codim}")


def check_hypotheses(m: Rep, u: Rep, v: Rep) -> HypothesesReport:
    """Verify [U,M]=[U,N], [M,V]=[N,V] and codim 2 for N = U (+) V."""
    if m.dims != u.dims + v.dims:
        raise QuiverError("dimension vectors do not add up: dims M != dims U + dims V")
    n = direct_sum(u, v).rep
    return HypothesesReport(
        hom_u_m=hom_dim(u, m),
        hom_u_n=hom_dim(u, n),
        hom_m_v=hom_dim(m, v),
        hom_n_v=hom_dim(n, v),
        codim=codim(m, n),
    )


def find_start_sequence(u: Rep, m: Rep, v: Rep, seed=0,
                        tries_per_range: int = _TRIES_PER_RANGE,
                        ranges=_SAMPLING_RANGES) -> ShortExactSeq:
    """A sequence 0 -> U -> M -> V -> 0 whose middle term is literally M.

    Samples integer combinations of a Hom(U, M) basis over growing
    coefficient ranges until one is vertex-wise injective with cokernel
    isomorphic to V; the cokernel presentation is then conjugated so that
    the quotient is literally V.  The set of valid monomorphisms is open in
    Hom(U, M), so sampling terminates quickly whenever a valid one exists.
    """
    from .quiver import cokernel_rep

    if m.dims != u.dims + v.dims:
        raise QuiverError("dimension vectors do not add up: dims M != dims U + dims V")
    basis = hom_basis(u, m)
    rng = random.Random(f"{seed}:start-seq")
    tried = set()
    for lo, hi in ranges:
        for _ in range(tries_per_range):
            coeffs = tuple(rng.randint(lo, hi) for _ in range(len(basis)))
            if coeffs in tried or not any(coeffs):
                continue
            tried.add(coeffs)
            f = RepMorphism.zero(u, m)
            for c, b in zip(coeffs, basis):
                if c:
                    f = f + b.scale(c)
            if not f.is_injective():
                continue
            cok, proj = cokernel_rep(f)
            phi = find_isomorphism(cok, v, seed=seed)
            if phi is None:
                continue
            return make_ses(f, phi.compose(proj))
    raise ChainError("no monomorphism U -> M with cokernel V found within the retry budget")


def choose_g(seq: ShortExactSeq) -> RepMorphism:
    """A homomorphism U0 -> U1 outside the image of composition with f1.

    Deterministic: expresses the image of Hom(U1, U1) -> Hom(U0, U1),
    psi |-> psi f1, in coordinates of a Hom(U0, U1) basis and returns the
    combination given by the first complement vector.
    """
    u0, u1 = seq.sub, seq.mid
    d = delta(seq, u1)
    if d != 1:
        raise ChainError(f"delta(sigma, middle) = {d}, expected 1")
    basis = hom_basis(u0, u1)
    field = u0.field
    flat_len = len(basis[0].flat()) if basis else 0
    if not basis or flat_len == 0:
        raise ChainError("Hom(U0, U1) is trivial; no complement exists")
    coord_matrix = Matrix.from_cols(field, [b.flat() for b in basis], rows=flat_len)
    endos = hom_basis(u1, u1)
    image_flat = [psi.compose(seq.f).flat() for psi in endos]
    coords = coord_matrix.solve(Matrix.from_cols(field, image_flat, rows=flat_len)) \
        if image_flat else Matrix.zeros(field, len(basis), 0)
    if coords is None:
        raise ChainError("image of composition lies outside the Hom space (internal error)")
    space = RowSpace(field, len(basis))
    independent = []
    for j in range(coords.cols):
        col = coords.col(j)
        if space.insert(col):
            independent.append(col)
    comp = complement_basis(Matrix.from_cols(field, independent, rows=len(basis)), len(basis))
    if comp.cols == 0:
        raise ChainError("complement is empty: delta(sigma, middle) vanishes")
    coeffs = comp.col(0)
    g = RepMorphism.zero(u0, u1)
    for c, b in zip(coeffs, basis):
        if c:
            g = g + b.scale(c)
    return g


@dataclass(frozen=True)
class HSpace:
    """The two-dimensional span of f_i and g_i inside Hom(U_{i-1}, U_i)."""

    f: RepMorphism
    g: RepMorphism

    def __post_init__(self):
        if self.f.source != self.g.source or self.f.target != self.g.target:
            raise QuiverError("span generators must share source and target")
        field = self.f.source.field
        flat_f, flat_g = self.f.flat(), self.g.flat()
        if Matrix.from_cols(field, [flat_f, flat_g], rows=len(flat_f)).rank() != 2:
            raise QuiverError("span generators are linearly dependent")


@dataclass(frozen=True)
class ChainReport:
    """The full chain sigma_1, ..., sigma_{n+2} with its diagnostics.

    ``delta_log[i]`` holds (delta(sigma_{i+1}, V), delta'(sigma_{i+1}, V));
    the last entry belongs to the split sequence.  ``links`` holds
    g_1, ..., g_{n+1}.
    """

    sequences: tuple[ShortExactSeq, ...]
    links: tuple[RepMorphism, ...]
    split_index: int
    degree: int
    delta_log: tuple[tuple[int, int], ...]
    seed: object


def run_chain(seq1: ShortExactSeq, g1: RepMorphism, cap: int | None = None,
              seed=0) -> ChainReport:
    """Iterate pushouts until the first split sequence; degree = index - 2.

    Validates, step by step, that delta(sigma_i, V) = 0 and that
    delta'(sigma_i, V) stays 1 until the final split where it drops to 0,
    and that dims(U_i) = dims(U_0) + i * dims(V).
    """
    u0, v = seq1.sub, seq1.quot
    d_mid = delta(seq1, seq1.mid)
    d_v = delta(seq1, v)
    dp_v = delta_prime(seq1, v)
    if (d_mid, d_v, dp_v) != (1, 0, 1):
        raise ChainError(
            f"start sequence must have delta(middle)=1, delta(V)=0, delta'(V)=1; "
            f"got ({d_mid}, {d_v}, {dp_v})")
    if g1.source != u0 or g1.target != seq1.mid:
        raise ChainError("g1 must map the subobject of sigma_1 into its middle term")
    cap_val = cap if cap is not None else ext1_dim(v, u0) + 2
    if seq1.mid.dims != u0.dims + v.dims:
        raise ChainError("dimension bookkeeping fails for sigma_1")
    sequences = [seq1]
    links = [g1]
    log = [(d_v, dp_v)]
    seq, g = seq1, g1
    for i in range(2, cap_val + 1):
        po = pushout(seq, g)
        seq, g = po.seq, po.mid_map
        sequences.append(seq)
        links.append(g)
        d_v = delta(seq, v)
        dp_v = delta_prime(seq, v)
        log.append((d_v, dp_v))
        if d_v != 0 or dp_v > 1:
            raise ChainError(
                f"chain invariant violated at index {i}: delta(V)={d_v}, delta'(V)={dp_v}")
        split = is_split(seq)
        if split != (dp_v == 0):
            raise ChainError(f"split criteria disagree at index {i}")
        if seq.mid.dims != u0.dims + v.dims.scale(i):
            raise ChainError(f"dimension bookkeeping fails at index {i}")
        if split:
            if i == 2:
                raise ChainError("sigma_2 split: g1 factors through f1 (invalid link)")
            links.pop()  # the link created alongside the split sequence is unused
            return ChainReport(tuple(sequences), tuple(links), split_index=i,
                               degree=i - 2, delta_log=tuple(log), seed=seed)
    raise ChainError(
        f"no split sequence within cap {cap_val}: the inputs violate the preconditions")


def singularity_type(m: Rep, u: Rep, v: Rep, seed=0,
                     cap: int | None = None) -> tuple[SingularityType, ChainReport | None]:
    """The singularity type of the orbit closure of M at N = U (+) V.

    Requires the hypotheses to hold (raises HypothesesError otherwise).
    When delta(sigma, M) = 0 the type is regular; otherwise both defects
    are forced to one and the chain computes the cone degree.
    """
    report = check_hypotheses(m, u, v)
    if not report.ok:
        raise HypothesesError(report)
    seq = find_start_sequence(u, m, v, seed=seed)
    d_m = delta(seq, m)
    if d_m == 0:
        return SingularityType.regular_type(), None
    dp_v = delta_prime(seq, v)
    if d_m != 1 or dp_v != 1:
        raise ChainError(
            f"codimension-2 identity violated: delta(M)={d_m}, delta'(V)={dp_v}")
    g1 = choose_g(seq)
    chain = run_chain(seq, g1, cap=cap, seed=seed)
    return SingularityType.cone(chain.degree), chain


def _projective_key(e: ExtClass):
    flat = e.flat()
    lead = next((x for x in flat if x), None)
    if lead is None:
        return None
    return tuple(x / lead for x in flat)


def _sample_classes(report: ChainReport, samples: int, seed):
    """Distinct nonzero classes of sequences with middle term M.

    Attempts cycle the starting coefficient range upward, so repeated draws
    keep producing new points of the class family instead of re-finding the
    smallest ones; classes equal up to a scalar count once.
    """
    seq1 = report.sequences[0]
    u0, u1, v = seq1.sub, seq1.mid, seq1.quot
    collected = []
    seen = set()
    budget = 16 * samples
    for attempt in range(budget):
        if len(collected) >= samples:
            break
        start = attempt % len(_SAMPLING_RANGES)
        s = find_start_sequence(u0, u1, v, seed=f"{seed}:sample:{attempt}",
                                ranges=_SAMPLING_RANGES[start:])
        e = ext_from_ses(s)
        key = _projective_key(e)
        if key is None or key in seen:
            continue
        seen.add(key)
        collected.append(e)
    if len(collected) < samples:
        raise ChainError("could not collect enough distinct sample classes within the budget")
    return collected


def verify_rank_one(report: ChainReport, samples: int = 20, seed=0) -> bool:
    """Check rk F'_1(e) = 1 for sampled nonzero classes e with middle term M.

    F'_1(e) sends h in the span of f_1 and g_1 to the pushforward of e
    along h.  A sampled rank other than one falsifies the construction and
    raises VerificationError.
    """
    if samples <= 0:
        raise ValueError("insufficient samples")
    if report.degree < 1:
        raise ValueError("report must have degree at least 1")
    seq1 = report.sequences[0]
    h_space = HSpace(seq1.f, report.links[0])
    field = seq1.sub.field
    for e in _sample_classes(report, samples, f"{seed}:rank1"):
        col_f = ext_pushforward(e, h_space.f).flat()
        col_g = ext_pushforward(e, h_space.g).flat()
        rank = Matrix.from_cols(field, [col_f, col_g], rows=len(col_f)).rank()
        if rank != 1:
            raise VerificationError(
                f"sampled class has pushforward rank {rank}, expected 1: {e!r}")
    return True


def verify_span(report: ChainReport, samples: int = 20, seed=0) -> bool:
    """Check that sampled classes span exactly (degree + 1) dimensions.

    The sampled classes live on the affine cone over a rational normal
    curve of the computed degree inside Ext^1(V, U0), whose linear span has
    dimension degree + 1.  Returns False when the sample budget failed to
    reach that span; a larger span would falsify the degree and raises.
    """
    if samples <= 0:
        raise ValueError("insufficient samples")
    classes = _sample_classes(report, samples, f"{seed}:span")
    flats = [e.flat() for e in classes]
    field = report.sequences[0].sub.field
    dim = RowSpace(field, len(flats[0]), flats).dim
    if dim > report.degree + 1:
        raise VerificationError(
            f"sampled classes span {dim} dimensions, more than degree+1 = {report.degree + 1}")
    return dim == report.degree + 1
