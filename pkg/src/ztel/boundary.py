"""Suspension action on the boundary sphere and numeric extension checks.

Lattice translations extend to the identity on the visual sphere of R^n,
so only the stable letter acts nontrivially: t moves boundary directions by
the projectivized inverse matrix (the straightening map conjugates the
t-action into f^-1 on each level).  Both parts fix the suspension
parameter, and the poles are fixed by everything.
"""

from __future__ import annotations

import math
from typing import Sequence

from .algebra import Automorphism, GroupElement
from .compactify import BoundaryPoint, SlopeSpec
from .errors import NotConverging
from .telescope import TelescopePoint, act, v_map


def _project(mat: Sequence[Sequence[int]], z: Sequence[float]) -> tuple:
    w = tuple(sum(float(row[j]) * z[j] for j in range(len(z))) for row in mat)
    norm = math.sqrt(sum(v * v for v in w))
    return tuple(v / norm for v in w)


def boundary_act(aut: Automorphism, a: GroupElement, b: BoundaryPoint) -> BoundaryPoint:
    """Suspension action of t^k g: translations fix the sphere, t applies the
    projectivized inverse matrix; the suspension parameter never moves."""
    if b.is_pole:
        return b
    z = _project(aut.matrix_power(-a.k), b.z)
    return BoundaryPoint(z, b.mu)


def relator_check(
    aut: Automorphism,
    g: Sequence[int],
    b: BoundaryPoint,
    t_forward=None,
    tol: float = 1e-12,
) -> bool:
    """Verify t^-1 g t = phi(g) on a boundary point.

    The left side composes the three suspension maps; the right side acts by
    the normal form directly.  For lattice translations both sides are the
    identity, so the check exists to catch wiring errors: `t_forward` lets a
    test inject a deliberately wrong t-map (e.g. the forward matrix) while
    the inverse path stays canonical, which breaks the equality.
    """
    if b.is_pole:
        return True
    t_elem = aut.t_power(1)
    if t_forward is None:
        lhs = boundary_act(aut, t_elem, b)
    else:
        lhs = BoundaryPoint(_project(t_forward, b.z), b.mu)
    lhs = boundary_act(aut, aut.embed(g), lhs)
    lhs = boundary_act(aut, aut.inverse(t_elem), lhs)
    rhs = boundary_act(aut, aut.embed(aut.apply(1, g)), b)
    err = max(abs(u - v) for u, v in zip(lhs.z, rhs.z))
    return err <= tol and abs(lhs.mu - rhs.mu) <= tol


def convergence_check(
    spec: SlopeSpec,
    aut: Automorphism,
    a: GroupElement,
    seq: Sequence[TelescopePoint],
    limit: BoundaryPoint,
    converge_tol: float = 0.05,
    tail_fraction: float = 1.0 / 3.0,
) -> float:
    """Numeric certificate for the continuity of the extended action.

    First the input sequence itself (heights rounded to integers, since
    whole cylinder segments share the fate of their integer level) must
    approach the limit in chart coordinates; then the translated sequence is
    compared against the boundary image of the limit, returning the largest
    chart distance over the tail.
    """
    if len(seq) < 3:
        raise ValueError("need at least three points")
    rounded = [TelescopePoint(p.x, float(math.floor(p.r))) for p in seq]
    own = [spec.chart_distance(v_map(aut, p), limit) for p in rounded]
    if not (own[-1] < converge_tol and own[-1] <= own[0] + 1e-12):
        raise NotConverging(
            f"input sequence stays {own[-1]:.4g} away from its declared limit"
        )
    target = boundary_act(aut, a, limit)
    tail_start = int(len(rounded) * (1.0 - tail_fraction))
    deviations = [
        spec.chart_distance(v_map(aut, act(aut, a, p)), target)
        for p in rounded[tail_start:]
    ]
    return max(deviations)


def sphere_grid(count: int) -> list[tuple]:
    """Evenly spaced unit vectors on the circle (planar fixtures)."""
    return [
        (math.cos(2.0 * math.pi * i / count), math.sin(2.0 * math.pi * i / count))
        for i in range(count)
    ]
