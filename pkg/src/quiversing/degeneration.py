"""Degeneration-order utilities: orbit codimension, hom-order checks, and
exact-sequence witnesses.

A degeneration N of M (the orbit of N lies in the closure of the orbit of
M) is characterised by an exact sequence 0 -> Z -> Z (+) M -> N -> 0.  This
module does not decide degeneration (the search for Z is unbounded); it
offers the necessary hom-order checks and sufficient explicit witnesses,
each clearly labelled as such.
"""

from __future__ import annotations

from dataclasses import dataclass

from .homological import ShortExactSeq, make_ses, ses_failures
from .quiver import (
    QuiverError,
    Rep,
    RepMorphism,
    direct_sum,
    hom_dim,
    is_isomorphic,
)


def codim(m: Rep, n: Rep) -> int:
    """dim O_M - dim O_N for same-dimension modules: [N,N] - [M,M]."""
    if m.dims != n.dims:
        raise QuiverError("codim requires equal dimension vectors")
    return hom_dim(n, n) - hom_dim(m, m)


@dataclass(frozen=True)
class ProbeResult:
    label: str
    hom_m_y: int
    hom_n_y: int
    hom_y_m: int
    hom_y_n: int

    @property
    def left_ok(self) -> bool:
        return self.hom_m_y <= self.hom_n_y

    @property
    def right_ok(self) -> bool:
        return self.hom_y_m <= self.hom_y_n

    @property
    def ok(self) -> bool:
        return self.left_ok and self.right_ok


@dataclass(frozen=True)
class HomOrderReport:
    results: tuple[ProbeResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def violations(self) -> tuple[ProbeResult, ...]:
        return tuple(r for r in self.results if not r.ok)

    def __bool__(self) -> bool:
        return self.ok


def default_probes(m: Rep, n: Rep) -> list[tuple[str, Rep]]:
    """All simples, M, N, and the distinct direct summands of the inputs."""
    q = m.quiver
    probes: list[tuple[str, Rep]] = [(f"S({v})", Rep.simple(q, v, field=m.field))
                                     for v in q.vertices]
    probes.append(("M", m))
    probes.append(("N", n))
    seen = {rep for _, rep in probes}
    for origin, rep_main in (("M", m), ("N", n)):
        for k, s in enumerate(rep_main.summands):
            if s not in seen and not s.is_zero():
                probes.append((f"summand {k} of {origin}", s))
                seen.add(s)
    return probes


def hom_order_check(m: Rep, n: Rep, probes=None) -> HomOrderReport:
    """Check [M,Y] <= [N,Y] and [Y,M] <= [Y,N] on every probe Y.

    Any violation certifies that N is NOT a degeneration of M.  No
    violation is only necessary evidence, not a proof.
    """
    if m.dims != n.dims:
        raise QuiverError("hom-order check requires equal dimension vectors")
    if probes is None:
        pairs = default_probes(m, n)
    else:
        pairs = [(getattr(y, "label", f"probe {k}"), y) if not isinstance(y, tuple) else y
                 for k, y in enumerate(probes)]
    results = []
    for label, y in pairs:
        results.append(ProbeResult(label, hom_dim(m, y), hom_dim(n, y),
                                   hom_dim(y, m), hom_dim(y, n)))
    return HomOrderReport(tuple(results))


@dataclass(frozen=True)
class DegenerationPair:
    """M together with a claimed degeneration N, optionally witnessed.

    The witness is a module Z and a validated exact sequence whose middle
    term is isomorphic to Z (+) M and whose end terms are Z and N.
    """

    m: Rep
    n: Rep
    witness_z: Rep | None = None
    witness_seq: ShortExactSeq | None = None

    def __post_init__(self):
        if self.m.dims != self.n.dims:
            raise QuiverError("degeneration pair requires equal dimension vectors")
        if (self.witness_z is None) != (self.witness_seq is None):
            raise QuiverError("witness needs both the module Z and the sequence")


def degeneration_from_ses(seq: ShortExactSeq) -> DegenerationPair:
    """The degeneration (M, U (+) V) witnessed by 0 -> U -> U (+) M -> U (+) V -> 0.

    The witness is the direct sum of the trivial sequence on U with the
    given one, so its middle term is literally Z (+) M for Z = U.
    """
    u, m, v = seq.sub, seq.mid, seq.quot
    n = direct_sum(u, v).rep
    zm = direct_sum(u, m)
    nw = direct_sum(u, v)
    mono = zm.inj2.compose(seq.f)
    epi = nw.inj1.compose(zm.proj1) + nw.inj2.compose(seq.g).compose(zm.proj2)
    witness = make_ses(mono, epi)
    return DegenerationPair(m, n, witness_z=u, witness_seq=witness)


@dataclass(frozen=True)
class WitnessReport:
    exact: bool
    sub_matches_z: bool
    middle_matches: bool
    quot_matches_n: bool
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.exact and self.sub_matches_z and self.middle_matches and self.quot_matches_n

    def __bool__(self) -> bool:
        return self.ok


def verify_witness(pair: DegenerationPair, seed: int = 0) -> WitnessReport:
    """Re-validate a witness: exactness, both end terms, and the middle term."""
    if pair.witness_seq is None:
        raise QuiverError("pair carries no witness")
    seq, z = pair.witness_seq, pair.witness_z
    failures = list(ses_failures(seq.f, seq.g))
    exact = not failures
    sub_ok = is_isomorphic(seq.sub, z, seed=seed)
    if not sub_ok:
        failures.append("left term mismatch: not isomorphic to Z")
    mid_ok = is_isomorphic(seq.mid, direct_sum(z, pair.m).rep, seed=seed)
    if not mid_ok:
        failures.append("middle term mismatch: not isomorphic to Z (+) M")
    quot_ok = is_isomorphic(seq.quot, pair.n, seed=seed)
    if not quot_ok:
        failures.append("right term mismatch: not isomorphic to N")
    return WitnessReport(exact, sub_ok, mid_ok, quot_ok, tuple(failures))
