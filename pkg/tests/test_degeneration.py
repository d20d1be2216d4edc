import pytest

from quiversing.degeneration import (
    DegenerationPair,
    codim,
    degeneration_from_ses,
    hom_order_check,
    verify_witness,
)
from quiversing.homological import make_ses, split_ses
from quiversing.quiver import (
    QuiverError,
    Rep,
    RepMorphism,
    cokernel_rep,
    direct_sum,
    hom_dim,
)
from support import kronecker_quiver, kronecker_reg, star_reps


def star_seq(n=3, column=(1, 2)):
    _, u, v, m = star_reps(n)
    f = RepMorphism.from_blocks(u, m, {"v0": [[column[0]], [column[1]]]})
    cok, proj = cokernel_rep(f)
    return u, v, m, make_ses(f, proj)


def kronecker_seq():
    q = kronecker_quiver()
    r = kronecker_reg(1, 0)
    s1 = Rep.simple(q, "1")
    s2 = Rep.simple(q, "2")
    mono = RepMorphism.from_blocks(s2, r, {"2": [[1]]})
    epi = RepMorphism.from_blocks(r, s1, {"1": [[1]]})
    return s2, s1, r, make_ses(mono, epi)


class TestCodim:
    def test_self_codim_zero(self):
        _, _, _, m = star_reps(3)
        assert codim(m, m) == 0

    def test_star_n3(self):
        _, u, v, m = star_reps(3)
        n = direct_sum(u, v).rep
        assert hom_dim(n, n) == 3 and hom_dim(m, m) == 1
        assert codim(m, n) == 2

    def test_star_n5(self):
        _, u, v, m = star_reps(5)
        n = direct_sum(u, v).rep
        assert codim(m, n) == 2

    def test_dims_must_match(self):
        _, u, v, _ = star_reps(3)
        with pytest.raises(QuiverError):
            codim(u, v)


class TestHomOrderCheck:
    def test_equal_modules_all_equalities(self):
        _, _, _, m = star_reps(3)
        report = hom_order_check(m, m)
        assert report.ok
        for r in report.results:
            assert r.hom_m_y == r.hom_n_y and r.hom_y_m == r.hom_y_n

    def test_star_degeneration_satisfies_order(self):
        _, u, v, m = star_reps(3)
        n = direct_sum(u, v).rep
        report = hom_order_check(m, n)
        assert report.ok and not report.violations

    def test_kronecker_violation(self):
        m = kronecker_reg(1, 0)
        n = kronecker_reg(0, 1)
        report = hom_order_check(m, n, probes=[("R(1,0)", m)])
        assert not report.ok
        (bad,) = report.violations
        assert bad.hom_m_y == 1 and bad.hom_n_y == 0

    def test_default_probes_find_kronecker_violation(self):
        report = hom_order_check(kronecker_reg(1, 0), kronecker_reg(0, 1))
        assert not report.ok


class TestDegenerationFromSes:
    def test_split_gives_codim_zero(self):
        _, u, v, _ = star_reps(3)
        pair = degeneration_from_ses(split_ses(u, v))
        assert codim(pair.m, pair.n) == 0
        assert verify_witness(pair).ok

    def test_star_pair_codim_two(self):
        u, v, m, seq = star_seq()
        pair = degeneration_from_ses(seq)
        assert pair.m == m
        assert codim(pair.m, pair.n) == 2
        assert verify_witness(pair).ok
        assert hom_order_check(pair.m, pair.n).ok

    def test_kronecker_pair_codim_one(self):
        s2, s1, r, seq = kronecker_seq()
        pair = degeneration_from_ses(seq)
        assert codim(pair.m, pair.n) == 1
        assert verify_witness(pair).ok


class TestVerifyWitness:
    def test_witness_with_zero_z(self):
        # trivial degeneration M of itself, witnessed by Z = 0
        _, _, _, m = star_reps(3)
        z = Rep.zero(m.quiver)
        s = direct_sum(z, m)
        seq = make_ses(s.inj1, s.proj2)
        pair = DegenerationPair(m, m, witness_z=z, witness_seq=seq)
        assert verify_witness(pair).ok

    def test_tampered_middle_detected(self):
        u, v, m, seq = star_seq()
        good = degeneration_from_ses(seq)
        # claim the same witness for a different M: middle no longer Z (+) M
        n = good.n
        bad = DegenerationPair(n, n, witness_z=good.witness_z,
                               witness_seq=good.witness_seq)
        report = verify_witness(bad)
        assert not report.ok
        assert not report.middle_matches
        assert any("middle term mismatch" in f for f in report.failures)

    def test_missing_witness_rejected(self):
        _, _, _, m = star_reps(3)
        with pytest.raises(QuiverError, match="witness"):
            verify_witness(DegenerationPair(m, m))

    def test_antisymmetry_on_witnessed_pair(self):
        u, v, m, seq = star_seq()
        pair = degeneration_from_ses(seq)
        assert codim(pair.m, pair.n) > 0  # M and N are not isomorphic here
