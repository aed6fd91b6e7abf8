"""Coarse-geometry toolkit: QI constants, control functions, star iteration.

Control functions are kept piecewise linear because that class is closed,
exactly, under pointwise min, inversion, and the constructions below.  The
star function phi*(x) counts applications of a contracting map needed to
drop below 1; fed with the inverse of a lower control function it produces
the iterated-log style growth profile used for spaces where equivariant
maps are only coarse equivalences rather than quasi-isometries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import Automorphism
from .errors import InvalidPair, NotContracting, PreconditionFailed


@dataclass(frozen=True)
class PiecewiseLinear:
    """Strictly increasing piecewise-linear function on [0, inf)."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("need at least two breakpoints")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(b <= a for a, b in zip(self.ys, self.ys[1:])):
            raise ValueError("values must be strictly increasing")

    def _segment(self, x: float) -> int:
        lo, hi = 0, len(self.xs) - 1
        if x <= self.xs[0]:
            return 0
        if x >= self.xs[-1]:
            return len(self.xs) - 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        return lo

    def __call__(self, x: float) -> float:
        i = self._segment(x)
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def inverse(self) -> "PiecewiseLinear":
        return PiecewiseLinear(self.ys, self.xs)

    def inverse_at(self, y: float) -> float:
        return self.inverse()(y)

    @staticmethod
    def from_callable(
        fn: Callable[[float], float],
        x_max: float,
        x_min: float = 0.0,
        ratio: float = 1.1,
    ) -> "PiecewiseLinear":
        """Sample on a geometric grid (plus the left endpoint)."""
        xs = [x_min]
        x = max(x_min, 1e-6) * ratio if x_min == 0.0 else x_min * ratio
        if x_min == 0.0:
            x = 1e-3
        while x < x_max:
            xs.append(x)
            x *= ratio
        xs.append(x_max)
        ys = [fn(v) for v in xs]
        return PiecewiseLinear(tuple(xs), tuple(ys))

    def to_breakpoints(self) -> dict:
        return {"x": list(self.xs), "y": list(self.ys)}


def pl_min(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    """Exact pointwise min: union of breakpoints plus segment crossings."""
    xs = sorted(set(f.xs) | set(g.xs))
    knots = []
    for a, b in zip(xs, xs[1:]):
        knots.append(a)
        da, db = f(a) - g(a), f(b) - g(b)
        if da * db < 0:  # one crossing inside (a, b); both pieces are linear
            t = da / (da - db)
            cross = a + t * (b - a)
            gap = 1e-12 * max(1.0, abs(a), abs(b))
            if cross - a > gap and b - cross > gap:
                knots.append(cross)
    knots.append(xs[-1])
    ys = [min(f(x), g(x)) for x in knots]
    return PiecewiseLinear(tuple(knots), tuple(ys))


# ---------------------------------------------------------------------------
# quasi-isometry constants of the linear map
# ---------------------------------------------------------------------------


def _opnorm_power_iteration(mat: Sequence[Sequence[int]], tol: float = 1e-12) -> float:
    """Largest singular value via power iteration on M^T M."""
    n = len(mat)
    mt_m = [
        [sum(mat[k][i] * mat[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    v = [1.0 / math.sqrt(n)] * n
    lam = 0.0
    for _ in range(10_000):
        w = [sum(mt_m[i][j] * v[j] for j in range(n)) for i in range(n)]
        norm = math.sqrt(sum(c * c for c in w))
        v = [c / norm for c in w]
        new_lam = sum(
            v[i] * sum(mt_m[i][j] * v[j] for j in range(n)) for i in range(n)
        )
        if abs(new_lam - lam) <= tol * max(1.0, new_lam):
            lam = new_lam
            break
        lam = new_lam
    return math.sqrt(lam)


def qi_constants(aut: Automorphism) -> tuple[float, float]:
    """(K, eps) with d(x,y)/K - eps <= d(fx, fy) <= K d(x,y) + eps; eps = 0."""
    k_fwd = _opnorm_power_iteration(aut.matrix)
    k_bwd = _opnorm_power_iteration(aut.inverse_matrix)
    return max(k_fwd, k_bwd), 0.0


# ---------------------------------------------------------------------------
# control-function normalization
# ---------------------------------------------------------------------------


def normalize_controls(
    rho_minus: PiecewiseLinear, rho_plus: PiecewiseLinear
) -> PiecewiseLinear:
    """Replace a control pair by the single function rho = min(rho-, rho+^-1),
    so the sandwich can be written with (rho, rho^-1)."""
    grid = sorted(set(rho_minus.xs) | set(rho_plus.xs))
    for x in grid:
        if rho_minus(x) > rho_plus(x) * (1.0 + 1e-12):
            raise InvalidPair(f"lower control exceeds upper control at x={x}")
    return pl_min(rho_minus, rho_plus.inverse())


# ---------------------------------------------------------------------------
# star function
# ---------------------------------------------------------------------------


def _check_contracting(phi_fn: Callable[[float], float], x_hint: float) -> None:
    grid = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, max(32.0, x_hint)]
    for x in grid:
        if phi_fn(x) > 0.5 * x * (1.0 + 1e-12):
            raise NotContracting(f"phi({x}) = {phi_fn(x)} exceeds x/2")


def star(phi_fn: Callable[[float], float], x: float) -> int:
    """phi*(x) = 1 if x <= 1 else 1 + phi*(phi(x)); terminates since phi <= x/2."""
    _check_contracting(phi_fn, x)
    count = 1
    while x > 1.0:
        x = phi_fn(x)
        count += 1
    return count


def _star_unchecked(phi_fn: Callable[[float], float], x: float) -> int:
    count = 1
    while x > 1.0:
        x = phi_fn(x)
        count += 1
    return count


# ---------------------------------------------------------------------------
# piecewise-linear growth-profile inverse built from the star function
# ---------------------------------------------------------------------------


def psi_inv_from_star(rho: PiecewiseLinear, x_max: float = 1e6) -> PiecewiseLinear:
    """Linearly connect (0,0), (1, (rho^-1)*(1)), (2, (rho^-1)*(2)), ...

    Requires rho(x) >= 3x, which makes rho^-1 contracting and bounds the
    result by log3(x) + 2 (the +2 absorbs the recursion base and ceiling;
    the exact inequality psi_inv(3 y) <= psi_inv(y) + 1, i.e. the tripling
    growth of psi, is what downstream constructions rely on).
    """
    for x in rho.xs:
        if x > 0 and rho(x) < 3.0 * x * (1.0 - 1e-12):
            raise PreconditionFailed(f"rho({x}) = {rho(x)} is below 3x")
    rho_inv = rho.inverse()
    xs = [0.0]
    ys = [0.0]
    j = 1
    while j <= x_max:
        xs.append(float(j))
        ys.append(float(_star_unchecked(rho_inv, float(j))))
        j += 1 if j < 64 else max(1, int(j * 0.25))
    # star values repeat along the ways; strictness comes from the abscissae,
    # so deduplicate flats into single knots to keep PiecewiseLinear strict
    keep_x = [xs[0]]
    keep_y = [ys[0]]
    for x, y in zip(xs[1:], ys[1:]):
        if y > keep_y[-1]:
            keep_x.append(x)
            keep_y.append(y)
    if keep_x[-1] < xs[-1]:
        # keep the final abscissa so evaluation stays interpolative up to x_max
        keep_x.append(xs[-1])
        keep_y.append(ys[-1] + 1e-9)
    return PiecewiseLinear(tuple(keep_x), tuple(keep_y))


# ---------------------------------------------------------------------------
# the limit-ratio verifier
# ---------------------------------------------------------------------------


def limit_ratio_check(
    theta: Callable[[float], float],
    a1: float,
    b1: float,
    a2: float,
    b2: float,
    xs: Sequence[float],
) -> float:
    """Max |theta(log(a1 x + b1)) / theta(log(a2 x + b2)) - 1| over the top
    decade of the sample ladder; the numeric stand-in for the statement that
    the ratio tends to 1 when theta is increasing with eventual slope <= 1."""
    if a1 <= 0 or a2 <= 0:
        raise ValueError("a1 and a2 must be positive")
    xs = sorted(xs)
    # slope precondition, checked by secants over the top half of the ladder
    top_half = xs[len(xs) // 2 :]
    for u, v in zip(top_half, top_half[1:]):
        yu, yv = math.log(u), math.log(v)
        if yv > yu:
            secant = (theta(yv) - theta(yu)) / (yv - yu)
            if secant > 1.0 + 1e-9:
                raise PreconditionFailed("theta grows faster than slope 1")
    cutoff = xs[-1] / 10.0
    deviation = 0.0
    for x in xs:
        if x < cutoff:
            continue
        num = theta(math.log(a1 * x + b1))
        den = theta(math.log(a2 * x + b2))
        deviation = max(deviation, abs(num / den - 1.0))
    return deviation
