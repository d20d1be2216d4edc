import random

import pytest

from quiversing.fields import QQ
from quiversing.linalg import Matrix
from quiversing.quiver import (
    DimVector,
    Quiver,
    QuiverError,
    Rep,
    RepMorphism,
    cokernel_rep,
    direct_sum,
    euler_form,
    hom_basis,
    hom_dim,
    is_isomorphic,
    kernel_rep,
)
from support import (
    kronecker_quiver,
    kronecker_reg,
    random_acyclic_quiver,
    random_rep,
    star_quiver,
    star_reps,
)


class TestQuiverValidation:
    def test_rejects_cycle(self):
        with pytest.raises(QuiverError, match="acyclic"):
            Quiver.build(["x", "y"], [("a", "x", "y"), ("b", "y", "x")])

    def test_rejects_loop(self):
        with pytest.raises(QuiverError, match="acyclic"):
            Quiver.build(["x"], [("a", "x", "x")])

    def test_rejects_duplicate_names(self):
        with pytest.raises(QuiverError):
            Quiver.build(["x", "x"], [])
        with pytest.raises(QuiverError):
            Quiver.build(["x", "y"], [("a", "x", "y"), ("a", "x", "y")])

    def test_rejects_unknown_vertex(self):
        with pytest.raises(QuiverError):
            Quiver.build(["x"], [("a", "x", "zz")])


class TestRepValidation:
    def test_shape_checked(self):
        q = kronecker_quiver()
        with pytest.raises(QuiverError, match="shape"):
            Rep.build(q, {"1": 1, "2": 1}, {"a": [[1, 2]]})

    def test_missing_maps_are_zero(self):
        q = kronecker_quiver()
        r = Rep.build(q, {"1": 1, "2": 1})
        assert r.map("a").is_zero() and r.map("b").is_zero()

    def test_morphism_intertwining_checked(self):
        r = kronecker_reg(1, 0)
        s = kronecker_reg(0, 1)
        with pytest.raises(QuiverError, match="intertwining"):
            RepMorphism.from_blocks(r, s, {"1": [[1]], "2": [[1]]})


class TestHomStarFamily:
    """Integer Hom dimensions of the 3-arm star instance."""

    def test_hom_u_m(self):
        _, u, _, m = star_reps(3)
        assert hom_dim(u, m) == 2

    def test_unit_homs(self):
        _, u, v, _ = star_reps(3)
        assert hom_dim(u, u) == 1
        assert hom_dim(u, v) == 1
        assert hom_dim(v, v) == 1

    def test_hom_v_u_vanishes(self):
        _, u, v, _ = star_reps(3)
        assert hom_dim(v, u) == 0

    def test_hom_m_m(self):
        _, _, _, m = star_reps(3)
        assert hom_dim(m, m) == 1

    def test_hom_m_v(self):
        _, _, v, m = star_reps(3)
        assert hom_dim(m, v) == 2

    def test_hom_v_m_vanishes(self):
        _, _, v, m = star_reps(3)
        assert hom_dim(v, m) == 0

    def test_basis_matches_dim_and_satisfies_equations(self):
        _, u, _, m = star_reps(3)
        basis = hom_basis(u, m)
        assert len(basis) == 2  # constructing each one re-checks intertwining


class TestEulerForm:
    def test_zero_vector(self):
        q = star_quiver(3)
        z = DimVector.of(q, {})
        assert euler_form(q, z, z) == 0
        assert euler_form(q, DimVector.of(q, {"v0": 2, "v1": 1}), z) == 0

    def test_kronecker_balanced(self):
        q = kronecker_quiver()
        d = DimVector.of(q, {"1": 1, "2": 1})
        assert euler_form(q, d, d) == 0

    def test_star_v_against_u(self):
        q, u, v, _ = star_reps(3)
        assert euler_form(q, v.dims, u.dims) == 1 - 3

    def test_matches_hom_dims_on_projective_source(self):
        # U is projective in the star family, so <dim U, dim X> = [U, X]
        q, u, v, m = star_reps(3)
        for x in (u, v, m):
            assert euler_form(q, u.dims, x.dims) == hom_dim(u, x)


class TestDirectSum:
    def test_sum_with_zero(self):
        _, u, _, _ = star_reps(3)
        z = Rep.zero(u.quiver)
        s = direct_sum(u, z)
        assert s.rep.dims == u.dims
        assert is_isomorphic(s.rep, u)

    def test_dims_add(self):
        _, u, v, _ = star_reps(3)
        n = direct_sum(u, v).rep
        assert n.dims.as_dict() == {"v1": 1, "v2": 1, "v3": 1, "v0": 2}

    def test_hom_additive_double_sum(self):
        _, u, v, _ = star_reps(3)
        n = direct_sum(u, v).rep
        assert hom_dim(n, n) == 3  # 1 + 1 + 0 + 1 from the pairwise table

    def test_projection_of_injection_is_identity(self):
        _, u, v, _ = star_reps(3)
        s = direct_sum(u, v)
        assert s.proj1.compose(s.inj1) == RepMorphism.identity(u)
        assert s.proj2.compose(s.inj2) == RepMorphism.identity(v)
        assert s.proj2.compose(s.inj1).is_zero()

    def test_hom_additivity_on_random(self):
        rng = random.Random(210)
        for _ in range(25):
            q = random_acyclic_quiver(rng)
            x, y, w = (random_rep(rng, q, max_dim=2) for _ in range(3))
            s = direct_sum(x, y).rep
            assert hom_dim(s, w) == hom_dim(x, w) + hom_dim(y, w)
            assert hom_dim(w, s) == hom_dim(w, x) + hom_dim(w, y)


class TestKernelCokernel:
    def test_kernel_of_identity(self):
        _, _, _, m = star_reps(3)
        ker, incl = kernel_rep(RepMorphism.identity(m))
        assert ker.is_zero()
        assert incl.source == ker

    def test_kernel_of_zero(self):
        _, u, v, _ = star_reps(3)
        ker, incl = kernel_rep(RepMorphism.zero(u, v))
        assert ker.dims == u.dims
        assert is_isomorphic(ker, u)

    def test_kronecker_kernel_of_canonical_epi(self):
        # the canonical epi of R(1,0) onto a simple has the other simple as kernel
        q = kronecker_quiver()
        r = kronecker_reg(1, 0)
        s1 = Rep.simple(q, "1")
        epi = RepMorphism.from_blocks(r, s1, {"1": [[1]]})
        assert epi.is_surjective()
        ker, incl = kernel_rep(epi)
        assert is_isomorphic(ker, Rep.simple(q, "2"))
        assert all(epi.compose(incl).block(v).is_zero() for v in q.vertices)

    def test_cokernel_of_identity(self):
        _, _, _, m = star_reps(3)
        cok, proj = cokernel_rep(RepMorphism.identity(m))
        assert cok.is_zero()

    def test_cokernel_of_zero(self):
        _, u, v, _ = star_reps(3)
        cok, proj = cokernel_rep(RepMorphism.zero(u, v))
        assert cok.dims == v.dims
        assert is_isomorphic(cok, v)

    def test_star_inclusion_cokernel_dims(self):
        _, u, _, m = star_reps(3)
        incl = RepMorphism.from_blocks(u, m, {"v0": [[1], [0]]})
        cok, proj = cokernel_rep(incl)
        assert cok.dims.as_dict() == {"v1": 1, "v2": 1, "v3": 1, "v0": 1}
        assert all(proj.compose(incl).block(v).is_zero() for v in u.quiver.vertices)

    def test_rank_dimension_bookkeeping_on_random(self):
        rng = random.Random(211)
        for _ in range(30):
            q = random_acyclic_quiver(rng)
            x = random_rep(rng, q, max_dim=2)
            y = random_rep(rng, q, max_dim=2)
            basis = hom_basis(x, y)
            if not basis:
                continue
            h = basis[0]
            for b in basis[1:]:
                h = h + b.scale(rng.randint(-2, 2))
            ker, _ = kernel_rep(h)
            cok, _ = cokernel_rep(h)
            for v in q.vertices:
                rk = h.block(v).rank()
                assert x.dims[v] == ker.dims[v] + rk
                assert y.dims[v] == rk + cok.dims[v]


class TestIsIsomorphic:
    def test_reflexive(self):
        _, _, _, m = star_reps(3)
        assert is_isomorphic(m, m)

    def test_different_dims(self):
        _, u, v, _ = star_reps(3)
        assert not is_isomorphic(u, v)

    def test_kronecker_distinct_points(self):
        assert not is_isomorphic(kronecker_reg(1, 0), kronecker_reg(0, 1))

    def test_conjugated_rep_is_isomorphic(self):
        # same star data written in a different basis at the sink
        q, _, _, m = star_reps(3)
        g = Matrix.from_rows(QQ, [[1, 1], [0, 1]])
        m2 = Rep.build(q, m.dims.as_dict(),
                       {a.name: g @ m.map(a.name) for a in q.arrows})
        assert is_isomorphic(m, m2)
        assert not is_isomorphic(m, direct_sum(Rep.simple(q, "v0"),
                                               cokernel_rep(RepMorphism.from_blocks(
                                                   Rep.simple(q, "v0"), m, {"v0": [[1], [0]]}))[0]).rep)

    def test_symmetry_on_random(self):
        rng = random.Random(212)
        for _ in range(20):
            q = random_acyclic_quiver(rng)
            x = random_rep(rng, q, max_dim=2)
            y = random_rep(rng, q, max_dim=2)
            assert is_isomorphic(x, y, seed=5) == is_isomorphic(y, x, seed=5)
