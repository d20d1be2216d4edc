"""Shared builders for the test suite: star-family instances, Kronecker
representations, and seeded random quivers/representations."""

from __future__ import annotations

import random

from quiversing.fields import QQ
from quiversing.quiver import Quiver, Rep


def default_points(n):
    pts = [(1, 0), (0, 1), (1, 1)]
    pts += [(1, k) for k in range(2, n - 1)]
    return pts[:n]


def star_quiver(n: int) -> Quiver:
    """n arm vertices v1..vn, one sink v0, arrows ai: vi -> v0."""
    vertices = [f"v{i}" for i in range(1, n + 1)] + ["v0"]
    arrows = [(f"a{i}", f"v{i}", "v0") for i in range(1, n + 1)]
    return Quiver.build(vertices, arrows)


def star_reps(n: int, points=None, field=QQ):
    """The representations U, V, M on the n-arm star quiver.

    U is the simple at the sink; V has every space one-dimensional with
    identity arm maps; M has a 2-dimensional sink and arm i mapping in via
    the column (a_i, b_i)^T.
    """
    q = star_quiver(n)
    pts = points if points is not None else default_points(n)
    if len(pts) != n:
        raise ValueError(f"need {n} points")
    u = Rep.simple(q, "v0", field=field)
    v = Rep.build(q, {f"v{i}": 1 for i in range(1, n + 1)} | {"v0": 1},
                  {f"a{i}": [[1]] for i in range(1, n + 1)}, field=field)
    m = Rep.build(q, {f"v{i}": 1 for i in range(1, n + 1)} | {"v0": 2},
                  {f"a{i}": [[pts[i - 1][0]], [pts[i - 1][1]]] for i in range(1, n + 1)},
                  field=field)
    return q, u, v, m


def kronecker_quiver() -> Quiver:
    return Quiver.build(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


def kronecker_reg(a, b, field=QQ) -> Rep:
    """The (1,1)-dimensional Kronecker representation with maps [a], [b]."""
    return Rep.build(kronecker_quiver(), {"1": 1, "2": 1}, {"a": [[a]], "b": [[b]]}, field=field)


def random_acyclic_quiver(rng: random.Random, max_vertices=5, max_arrows=6) -> Quiver:
    nv = rng.randint(1, max_vertices)
    vertices = [f"w{i}" for i in range(nv)]
    arrows = []
    na = rng.randint(0, max_arrows)
    for k in range(na):
        if nv < 2:
            break
        i = rng.randint(0, nv - 2)
        j = rng.randint(i + 1, nv - 1)  # only forward arrows: acyclic by construction
        arrows.append((f"b{k}", f"w{i}", f"w{j}"))
    return Quiver.build(vertices, arrows)


def random_rep(rng: random.Random, q: Quiver, max_dim=3, lo=-3, hi=3, field=QQ) -> Rep:
    dims = {v: rng.randint(0, max_dim) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        maps[a.name] = [[rng.randint(lo, hi) for _ in range(dims[a.source])]
                        for _ in range(dims[a.target])]
    return Rep.build(q, dims, maps, field=field)
