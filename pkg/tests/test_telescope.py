import math
import random
from fractions import Fraction

import pytest

from ztel.algebra import GroupElement
from ztel.telescope import (
    ProductPoint,
    TelescopePoint,
    act,
    act_product,
    embed_straightline,
    fundamental_domain,
    u_map,
    v_map,
)


def close(a, b, tol=1e-12):
    scale = max(1.0, max(abs(float(v)) for v in b))
    return max(abs(float(u) - float(v)) for u, v in zip(a, b)) <= tol * scale


def test_act_examples(heis):
    p = TelescopePoint((0.0, 0.0), 0.5)
    assert act(heis, heis.t_power(1), p) == TelescopePoint((0.0, 0.0), 1.5)
    assert act(heis, heis.identity(), p) == p
    q = act(heis, heis.embed((0, 1)), TelescopePoint((0.0, 0.0), 1.5))
    assert q == TelescopePoint((1.0, 1.0), 1.5)


def test_act_negative_floor(heis):
    # floor(-0.5) = -1, so the translation is twisted by the inverse matrix
    q = act(heis, heis.embed((0, 1)), TelescopePoint((0.0, 0.0), -0.5))
    assert q == TelescopePoint((-1.0, 1.0), -0.5)


def test_action_axiom_random(heis):
    rng = random.Random(11)
    for _ in range(500):
        a = GroupElement(rng.randint(-4, 4), (rng.randint(-9, 9), rng.randint(-9, 9)))
        b = GroupElement(rng.randint(-4, 4), (rng.randint(-9, 9), rng.randint(-9, 9)))
        p = TelescopePoint((rng.uniform(-20, 20), rng.uniform(-20, 20)), rng.uniform(-5, 5))
        lhs = act(heis, heis.multiply(a, b), p)
        rhs = act(heis, a, act(heis, b, p))
        assert close(lhs.x, rhs.x)
        assert abs(lhs.r - rhs.r) <= 1e-12 * max(1.0, abs(rhs.r))


def test_relator_exact_rational(sol):
    # t^-1 g t acts as phi(g), exactly, at rational sample points
    rng = random.Random(3)
    t = sol.t_power(1)
    for _ in range(100):
        g = sol.embed((rng.randint(-7, 7), rng.randint(-7, 7)))
        conj = sol.multiply(sol.multiply(sol.inverse(t), g), t)
        p = TelescopePoint(
            (Fraction(rng.randint(-40, 40), 8), Fraction(rng.randint(-40, 40), 8)),
            Fraction(rng.randint(-24, 24), 8),
        )
        assert act(sol, conj, p) == act(sol, sol.embed(sol.apply(1, g.g)), p)


def test_integral_equivariance(heis, sol):
    # straightening commutes with the lattice part at integer levels
    rng = random.Random(5)
    for aut in (heis, sol):
        for _ in range(250):
            g = aut.embed((rng.randint(-5, 5), rng.randint(-5, 5)))
            k = rng.randint(-6, 6)
            p = TelescopePoint((rng.uniform(-10, 10), rng.uniform(-10, 10)), float(k))
            lhs = v_map(aut, act(aut, g, p))
            rhs = act_product(aut, g, v_map(aut, p))
            assert close(lhs.x, rhs.x)
            assert lhs.r == rhs.r


def test_v_examples(heis):
    p = TelescopePoint((3.0, -2.0), 0.25)
    assert v_map(heis, p) == ProductPoint((3.0, -2.0), 0.25)
    assert v_map(heis, TelescopePoint((0.0, 1.0), 2.0)) == ProductPoint((-2.0, 1.0), 2.0)


def test_v_seam_continuity(heis):
    # v|x, 1-eps| -> (x, 1) and v|f(x), 1| = (x, 1) agree in the limit
    x = (2.0, 3.0)
    fx = tuple(float(v) for v in heis.apply(1, (2, 3)))
    for eps in (1e-3, 1e-6, 1e-9):
        low = v_map(heis, TelescopePoint(x, 1.0 - eps))
        assert close(low.x, x)
    top = v_map(heis, TelescopePoint(fx, 1.0))
    assert close(top.x, x)


def test_v_level_preserving(sol):
    rng = random.Random(9)
    for _ in range(200):
        p = TelescopePoint((rng.uniform(-5, 5), rng.uniform(-5, 5)), rng.uniform(-8, 8))
        assert v_map(sol, p).r == p.r


def test_u_examples(heis):
    assert u_map(heis, ProductPoint((4.0, 1.0), 0.25)) == TelescopePoint((4.0, 1.0), 0.25)
    assert u_map(heis, ProductPoint((-2.0, 1.0), 2.0)) == TelescopePoint((0.0, 1.0), 2.0)


def test_roundtrip_random(heis, sol):
    rng = random.Random(7)
    for aut in (heis, sol):
        for _ in range(1000):
            p = TelescopePoint(
                (rng.uniform(-10, 10), rng.uniform(-10, 10)), rng.uniform(-8, 8)
            )
            back = u_map(aut, v_map(aut, p))
            assert close(back.x, p.x)
            assert back.r == p.r
            q = ProductPoint((rng.uniform(-10, 10), rng.uniform(-10, 10)), rng.uniform(-8, 8))
            there = v_map(aut, u_map(aut, q))
            assert close(there.x, q.x)
            assert there.r == q.r


def test_embed_examples(heis):
    p = TelescopePoint((4.0, -1.0), 3.0)
    assert embed_straightline(heis, p) == (4.0, -1.0, 3.0)
    mid = embed_straightline(heis, TelescopePoint((0.0, 1.0), 0.5))
    assert mid == (0.5, 1.0, 0.5)


def test_embed_seam_matches_v_seam(heis):
    # endpoints of a cylinder segment land where the next level starts
    x = (1.0, 2.0)
    fx = tuple(float(v) for v in heis.apply(1, (1, 2)))
    top = embed_straightline(heis, TelescopePoint(x, 0.0 + 1.0 - 1e-9))
    nxt = embed_straightline(heis, TelescopePoint(fx, 1.0))
    assert max(abs(a - b) for a, b in zip(top, nxt)) < 1e-6


def test_fundamental_domain_counts(heis):
    assert len(fundamental_domain(heis, 1.0).samples) == 8
    assert len(fundamental_domain(heis, 0.5).samples) == 27
    with pytest.raises(ValueError):
        fundamental_domain(heis, 0.0)
    with pytest.raises(ValueError):
        fundamental_domain(heis, 1.5)


def test_domain_bounds_and_translate_level(heis):
    dom = fundamental_domain(heis, 0.5)
    for p in dom.samples:
        assert all(0.0 <= v <= 1.0 for v in p.x)
        assert 0.0 <= p.r <= 1.0
    t = heis.t_power(1)
    for p in dom.samples:
        q = v_map(heis, act(heis, t, p))
        assert 1.0 <= q.r <= 2.0


def test_point_json(heis):
    p = TelescopePoint((1.5, -0.25), 2.75)
    import json

    data = json.loads(p.to_json())
    assert data == {"x": [1.5, -0.25], "r": 2.75}
