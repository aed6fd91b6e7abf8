"""Mapping telescope of a linear lattice automorphism, with its group action.

The telescope of f = phi over R^n is parameterized by canonical
representatives |x, r| whose coordinates are read off at the domain end of
the cylinder over [floor(r), floor(r) + 1].  Because f is an invertible
linear map, its homotopy inverse is f^-1 exactly and the straightening map
to the product collapses to

    v|x, r| = (f^-(floor r)(x), r)

with exact inverse u(x, r) = |f^(floor r)(x), r|.  Both are
level-preserving.  The group acts by

    g . |x, r| = |phi^(floor r)(g) + x, r|        t . |x, r| = |x, r + 1|

and a normal-form element t^k g acts as the composition t^k after g.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import Automorphism, GroupElement

Vector = tuple  # coordinates may be floats or Fractions


@dataclass(frozen=True)
class TelescopePoint:
    """Canonical representative |x, r| of a telescope point."""

    x: Vector
    r: float

    def to_json(self) -> str:
        return json.dumps({"x": [float(v) for v in self.x], "r": float(self.r)})


@dataclass(frozen=True)
class ProductPoint:
    """A point (x, r) of the product R^n x R."""

    x: Vector
    r: float


def _floor(r) -> int:
    # mathematical floor, also exact for Fraction inputs
    return math.floor(r)


def act(aut: Automorphism, a: GroupElement, p: TelescopePoint) -> TelescopePoint:
    """Left action of t^k g: translate by phi^(floor r)(g), then shift levels.

    The translation power uses the original level because t itself never
    moves the x-coordinate; this is what makes act(a*b, p) = act(a, act(b, p)).
    """
    shift = aut.apply(_floor(p.r), a.g)
    x = tuple(xi + si for xi, si in zip(p.x, shift))
    return TelescopePoint(x, p.r + a.k)


def _apply_matrix(mat, x: Sequence) -> Vector:
    return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in mat)


def v_map(aut: Automorphism, p: TelescopePoint) -> ProductPoint:
    """Straighten the telescope onto the product; level-preserving."""
    k = _floor(p.r)
    return ProductPoint(_apply_matrix(aut.matrix_power(-k), p.x), p.r)


def u_map(aut: Automorphism, q: ProductPoint) -> TelescopePoint:
    """Exact inverse of v_map in the linear case."""
    k = _floor(q.r)
    return TelescopePoint(_apply_matrix(aut.matrix_power(k), q.x), q.r)


def act_product(aut: Automorphism, a: GroupElement, q: ProductPoint) -> ProductPoint:
    """Product-side action: g translates the x-coordinate, t shifts levels."""
    x = tuple(xi + gi for xi, gi in zip(q.x, a.g))
    return ProductPoint(x, q.r + a.k)


def embed_straightline(aut: Automorphism, p: TelescopePoint) -> tuple:
    """Realize |x, r| inside R^(n+1) with cylinder segments drawn straight.

    With r = k + s, s in [0, 1), the segment over x joins (x, k) to
    (f(x), k + 1); the embedding returns its point at parameter s.
    """
    k = _floor(p.r)
    s = p.r - k
    fx = _apply_matrix(aut.matrix, p.x)
    coords = tuple((1 - s) * xi + s * fi for xi, fi in zip(p.x, fx))
    return coords + (p.r,)


@dataclass(frozen=True)
class FundamentalDomain:
    """Grid samples of the compact set whose translates cover the telescope."""

    samples: tuple[TelescopePoint, ...]
    step: float


def fundamental_domain(aut: Automorphism, step: float) -> FundamentalDomain:
    """Sample the unit cylinder [0,1]^n x [0,1] with the given grid pitch."""
    if not 0 < step <= 1:
        raise ValueError("step must lie in (0, 1]")
    ticks = round(1.0 / step)
    axis = [i / ticks for i in range(ticks + 1)]
    pts = []

    def rec(prefix: list[float], dim: int) -> None:
        if dim == aut.n:
            for r in axis:
                pts.append(TelescopePoint(tuple(prefix), r))
            return
        for v in axis:
            rec(prefix + [v], dim + 1)

    rec([], 0)
    return FundamentalDomain(tuple(pts), step)
