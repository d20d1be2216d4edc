import random

import pytest

from quiversing.homological import (
    ExtClass,
    SESError,
    delta,
    delta_prime,
    ext1_basis,
    ext1_dim,
    ext_from_ses,
    ext_pushforward,
    cancel_summand,
    is_split,
    make_ses,
    pushout,
    ses_from_ext,
    split_ses,
)
from quiversing.quiver import (
    Rep,
    RepMorphism,
    QuiverError,
    cokernel_rep,
    direct_sum,
    euler_form,
    hom_basis,
    hom_dim,
    is_isomorphic,
)
from support import (
    kronecker_quiver,
    kronecker_reg,
    random_acyclic_quiver,
    random_rep,
    star_reps,
)


def star_start_seq(n=3, column=(1, 2)):
    """A sequence 0 -> U -> M -> coker -> 0 on the n-arm star instance."""
    _, u, v, m = star_reps(n)
    f = RepMorphism.from_blocks(u, m, {"v0": [[column[0]], [column[1]]]})
    cok, proj = cokernel_rep(f)
    return u, v, m, make_ses(f, proj)


def random_ses(rng, q, max_dim=2):
    u = random_rep(rng, q, max_dim=max_dim)
    v = random_rep(rng, q, max_dim=max_dim)
    basis = ext1_basis(v, u)
    e = ExtClass.zero(v, u)
    for b in basis:
        e = e + b.scale(rng.randint(-2, 2))
    return ses_from_ext(e)


class TestMakeSes:
    def test_split_sequence_is_valid(self):
        _, u, v, _ = star_reps(3)
        seq = split_ses(u, v)
        assert seq.sub == u and seq.quot == v

    def test_zero_mono_rejected(self):
        _, u, v, _ = star_reps(3)
        n = direct_sum(u, v)
        with pytest.raises(SESError, match="not injective"):
            make_ses(RepMorphism.zero(u, n.rep), n.proj2)

    def test_star_inclusion_with_cokernel(self):
        u, v, m, seq = star_start_seq()
        assert seq.mid == m
        assert is_isomorphic(seq.quot, v)

    def test_non_exact_pair_rejected(self):
        # mono and epi both valid but im(f) != ker(g)
        _, u, v, _ = star_reps(3)
        n = direct_sum(v, u)
        with pytest.raises(SESError):
            make_ses(n.inj2, n.proj2)


class TestExtDim:
    def test_star_ext_v_u(self):
        q, u, v, _ = star_reps(3)
        assert ext1_dim(v, u) == 2
        # cross-check through the Euler identity
        assert hom_dim(v, u) - ext1_dim(v, u) == euler_form(q, v.dims, u.dims)

    def test_simple_at_source_selfextensions_vanish(self):
        q = kronecker_quiver()
        s1 = Rep.simple(q, "1")
        assert ext1_dim(s1, s1) == 0

    def test_kronecker_regular_selfextension(self):
        r = kronecker_reg(1, 0)
        assert ext1_dim(r, r) == 1

    def test_basis_length_matches_dim(self):
        _, u, v, _ = star_reps(3)
        assert len(ext1_basis(v, u)) == ext1_dim(v, u) == 2

    def test_euler_identity_spotchecks(self):
        rng = random.Random(300)
        for _ in range(30):
            q = random_acyclic_quiver(rng)
            x = random_rep(rng, q, max_dim=2)
            y = random_rep(rng, q, max_dim=2)
            assert hom_dim(x, y) - ext1_dim(x, y) == euler_form(q, x.dims, y.dims)


class TestSesExtRoundtrip:
    def test_zero_class_gives_split(self):
        _, u, v, _ = star_reps(3)
        seq = ses_from_ext(ExtClass.zero(v, u))
        assert is_split(seq)
        assert is_isomorphic(seq.mid, direct_sum(u, v).rep)

    def test_split_sequence_has_zero_class(self):
        _, u, v, _ = star_reps(3)
        assert ext_from_ses(split_ses(u, v)).is_zero()

    def test_roundtrip_on_basis(self):
        _, u, v, _ = star_reps(3)
        for e in ext1_basis(v, u):
            assert ext_from_ses(ses_from_ext(e)) == e

    def test_roundtrip_on_random_classes(self):
        rng = random.Random(301)
        for _ in range(25):
            q = random_acyclic_quiver(rng)
            u = random_rep(rng, q, max_dim=2)
            v = random_rep(rng, q, max_dim=2)
            basis = ext1_basis(v, u)
            e = ExtClass.zero(v, u)
            for b in basis:
                e = e + b.scale(rng.randint(-2, 2))
            assert ext_from_ses(ses_from_ext(e)) == e

    def test_star_class_middle_is_m(self):
        u, v, m, seq = star_start_seq()
        e = ext_from_ses(seq)
        assert not e.is_zero()
        assert is_isomorphic(ses_from_ext(e).mid, m)

    def test_class_independent_of_middle_presentation(self):
        # the same extension written via its block form has the same class
        u, v, m, seq = star_start_seq()
        e = ext_from_ses(seq)
        assert ext_from_ses(ses_from_ext(e)) == e


class TestDelta:
    def test_split_deltas_vanish(self):
        _, u, v, m = star_reps(3)
        seq = split_ses(u, v)
        for x in (u, v, m):
            assert delta(seq, x) == 0
            assert delta_prime(seq, x) == 0

    def test_star_delta_m(self):
        u, v, m, seq = star_start_seq()
        assert delta(seq, m) == (2 + 0) - 1

    def test_star_delta_prime_v(self):
        u, v, m, seq = star_start_seq()
        assert delta_prime(seq, v) == (0 + 1) - 0

    def test_nonnegative_on_random(self):
        rng = random.Random(302)
        for _ in range(20):
            q = random_acyclic_quiver(rng)
            seq = random_ses(rng, q)
            x = random_rep(rng, q, max_dim=2)
            assert delta(seq, x) >= 0
            assert delta_prime(seq, x) >= 0


class TestIsSplit:
    def test_canonical_split(self):
        _, u, v, _ = star_reps(3)
        assert is_split(split_ses(u, v))

    def test_star_sequence_not_split(self):
        *_, seq = star_start_seq()
        assert not is_split(seq)

    def test_split_iff_zero_class_on_basis(self):
        _, u, v, _ = star_reps(3)
        for e in ext1_basis(v, u):
            assert not is_split(ses_from_ext(e))
        assert is_split(ses_from_ext(ExtClass.zero(v, u)))

    def test_split_iff_middle_is_direct_sum_on_random(self):
        rng = random.Random(303)
        for _ in range(20):
            q = random_acyclic_quiver(rng)
            seq = random_ses(rng, q)
            n = direct_sum(seq.sub, seq.quot).rep
            assert is_split(seq) == is_isomorphic(seq.mid, n)


class TestPushout:
    def test_along_identity_keeps_class(self):
        u, v, m, seq = star_start_seq()
        po = pushout(seq, RepMorphism.identity(u))
        assert is_isomorphic(po.seq.mid, m)
        assert ext_from_ses(po.seq) == ext_from_ses(seq)

    def test_along_own_mono_splits(self):
        u, v, m, seq = star_start_seq()
        po = pushout(seq, seq.f)
        assert is_split(po.seq)

    def test_tau_is_exact_and_additivity_holds(self):
        rng = random.Random(304)
        checked = 0
        while checked < 15:
            q = random_acyclic_quiver(rng)
            seq = random_ses(rng, q)
            x = random_rep(rng, q, max_dim=2)
            basis = hom_basis(seq.sub, x)
            if not basis:
                continue
            h = basis[0]
            for b in basis[1:]:
                h = h + b.scale(rng.randint(-2, 2))
            po = pushout(seq, h)
            probes = [seq.sub, seq.quot, seq.mid, x] + \
                [Rep.simple(q, v) for v in q.vertices]
            for y in probes:
                assert delta(seq, y) == delta(po.seq, y) + delta(po.tau, y)
                assert delta_prime(seq, y) == delta_prime(po.seq, y) + delta_prime(po.tau, y)
                assert delta(po.seq, y) <= delta(seq, y)
                assert delta_prime(po.seq, y) <= delta_prime(seq, y)
            checked += 1

    def test_pushforward_matches_pushout_class(self):
        rng = random.Random(305)
        checked = 0
        while checked < 15:
            q = random_acyclic_quiver(rng)
            seq = random_ses(rng, q)
            x = random_rep(rng, q, max_dim=2)
            basis = hom_basis(seq.sub, x)
            if not basis:
                continue
            h = basis[0]
            for b in basis[1:]:
                h = h + b.scale(rng.randint(-2, 2))
            po = pushout(seq, h)
            assert ext_from_ses(po.seq) == ext_pushforward(ext_from_ses(seq), h)
            checked += 1

    def test_pushforward_of_zero_map_kills_class(self):
        u, v, m, seq = star_start_seq()
        e = ext_from_ses(seq)
        assert ext_pushforward(e, RepMorphism.zero(u, m)).is_zero()
        assert ext_pushforward(e, RepMorphism.identity(u)) == e


class TestCancelSummand:
    def test_direct_sum_with_trivial_on_y(self):
        # sigma (+) (0 -> Y -> Y -> 0 -> 0) cancels back to sigma's data
        u, v, m, seq = star_start_seq()
        q = u.quiver
        y = Rep.simple(q, "v1")  # simple at a source vertex: delta(seq, y) = 0
        assert delta(seq, y) == 0
        s_big = direct_sum(u, y)
        m_big = direct_sum(m, y)
        f_big = m_big.inj1.compose(seq.f).compose(s_big.proj1) + \
            m_big.inj2.compose(s_big.proj2)
        g_big = seq.g.compose(m_big.proj1)
        big = make_ses(f_big, g_big)
        shrunk = cancel_summand(big, y, 1)
        assert shrunk.sub.dims == u.dims
        assert is_isomorphic(shrunk.mid, m)
        # middle term decomposes as promised
        assert is_isomorphic(big.mid, direct_sum(shrunk.mid, y).rep)

    def test_delta_profile_preserved_on_random(self):
        rng = random.Random(306)
        checked = 0
        while checked < 10:
            q = random_acyclic_quiver(rng)
            seq = random_ses(rng, q)
            sources = [v for v in q.vertices
                       if all(a.target != v for a in q.arrows)]
            y = Rep.simple(q, sources[0])  # injective simple: delta always 0
            if y.dims == seq.sub.dims or seq.mid.is_zero():
                continue
            s_big = direct_sum(seq.sub, y)
            m_big = direct_sum(seq.mid, y)
            f_big = m_big.inj1.compose(seq.f).compose(s_big.proj1) + \
                m_big.inj2.compose(s_big.proj2)
            big = make_ses(f_big, seq.g.compose(m_big.proj1))
            assert delta(big, y) == delta(seq, y) == 0
            shrunk = cancel_summand(big, y, 1)
            probes = [seq.sub, seq.quot, seq.mid, y] + [Rep.simple(q, v) for v in q.vertices]
            for x in probes:
                assert delta(shrunk, x) == delta(big, x)
            assert is_isomorphic(big.mid, direct_sum(shrunk.mid, y).rep)
            checked += 1

    def test_precondition_enforced(self):
        u, v, m, seq = star_start_seq()
        q = u.quiver
        y = u  # delta(seq, u) = [U,U] + [coker,U] - [M,U]
        s_big = direct_sum(u, y)
        m_big = direct_sum(m, y)
        f_big = m_big.inj1.compose(seq.f).compose(s_big.proj1) + \
            m_big.inj2.compose(s_big.proj2)
        big = make_ses(f_big, seq.g.compose(m_big.proj1))
        if delta(big, y) >= 1:
            with pytest.raises(QuiverError, match="not smaller"):
                cancel_summand(big, y, 1)
