"""Slope compactification of the product R^n x R.

The product is compactified by a suspension of the sphere at infinity.
How the suspension is glued on is governed by a radial scale

    p(x) = log(psi_inv(d(x, x0) + psi(0)) + 1)

built from a growth profile psi that dominates two inputs: the control
table eta (diameters of straightened translated fundamental domains per
level) and a collapse rate lambda for the radial compactification of R^n.
Interior points acquire a slope mu(x, r) = r / p(x) (with poles where
p = 0), and basic neighborhoods of boundary points are metric balls in the
(direction, slope) coordinates.  The exponential variant replaces psi by
e^psi, which slows p down enough to absorb quasi-isometry constants of the
automorphism.

Everything here is pure and deterministic; a SlopeSpec is immutable after
build and safe to share between workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .algebra import Automorphism
from .telescope import ProductPoint
from .errors import EtaTooFast, Unfittable

POLE_SCALE_TOL = 1e-9  # p(x) below this counts as the base point
RADIUS_CAP = 1e300  # largest representable radius used by contraction rays
CHART_HEIGHT_SCALE = 10.0  # height squash tanh(r / 10)

LOG3 = math.log(3.0)


# ---------------------------------------------------------------------------
# monotone tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneTable:
    """Piecewise-linear monotone function given by sampled values.

    Beyond the last sample the final segment is continued with slope at
    least 1, keeping the function increasing and unbounded.
    """

    ss: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.ss) != len(self.values) or len(self.ss) < 1:
            raise ValueError("table needs matching, nonempty abscissae/values")
        if any(b <= a for a, b in zip(self.ss, self.ss[1:])):
            raise ValueError("abscissae must be strictly increasing")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be monotone increasing")

    def __call__(self, s: float) -> float:
        ss, vv = self.ss, self.values
        if s <= ss[0]:
            return vv[0]
        if s >= ss[-1]:
            if len(ss) == 1:
                tail_slope = 1.0
            else:
                seg = (vv[-1] - vv[-2]) / (ss[-1] - ss[-2])
                tail_slope = max(seg, 1.0)
            return vv[-1] + tail_slope * (s - ss[-1])
        lo, hi = 0, len(ss) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ss[mid] <= s:
                lo = mid
            else:
                hi = mid
        t = (s - ss[lo]) / (ss[hi] - ss[lo])
        return vv[lo] + t * (vv[hi] - vv[lo])


# ---------------------------------------------------------------------------
# boundary / chart types
# ---------------------------------------------------------------------------

_POLE_SENTINEL = None


@dataclass(frozen=True)
class BoundaryPoint:
    """Suspension point <z, mu>; mu = +-inf canonicalizes to a pole."""

    z: Union[tuple, None]
    mu: float

    @staticmethod
    def pole(sign: int) -> "BoundaryPoint":
        return BoundaryPoint(_POLE_SENTINEL, math.inf if sign > 0 else -math.inf)

    @staticmethod
    def at(z: Sequence[float], mu: float) -> "BoundaryPoint":
        if math.isinf(mu):
            return BoundaryPoint.pole(1 if mu > 0 else -1)
        norm = math.sqrt(sum(v * v for v in z))
        if norm == 0:
            raise ValueError("direction vector must be nonzero")
        return BoundaryPoint(tuple(v / norm for v in z), float(mu))

    @property
    def is_pole(self) -> bool:
        return math.isinf(self.mu)


@dataclass(frozen=True)
class ChartPoint:
    """Numeric coordinates (radial position, squashed slope, squashed height)."""

    xbar: tuple
    s: float
    rho: float


def radial_position(x: Sequence[float]) -> tuple:
    """Radial compactification x -> x / (1 + |x|) of R^n into the open ball."""
    norm = math.hypot(*x)  # hypot avoids overflow of intermediate squares
    if math.isinf(norm):
        raise ValueError("coordinates must be finite")
    return tuple(v / (1.0 + norm) for v in x)


# ---------------------------------------------------------------------------
# collapse rate lambda for the radial compactification
# ---------------------------------------------------------------------------


def _compactified_ball_diam(center_dist: float, radius: float, dirs: int = 64) -> float:
    """Diameter, after radial compactification, of a ball at given distance.

    By rotational symmetry the extremal pairs lie in a 2-plane through the
    center direction, so sampling a circle of directions suffices.
    """
    pts = []
    for i in range(dirs):
        a = 2.0 * math.pi * i / dirs
        y = (center_dist + radius * math.cos(a), radius * math.sin(a))
        pts.append(radial_position(y))
    best = 0.0
    for i in range(dirs):
        for j in range(i + 1, dirs):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            best = max(best, dx * dx + dy * dy)
    return math.sqrt(best)


@dataclass(frozen=True)
class BallDecay:
    """lambda(s) = a*s^2 + b*s, validated so far balls collapse in the chart."""

    a: float = 2.0
    b: float = 2.0

    def __call__(self, s: float) -> float:
        return self.a * s * s + self.b * s


def validated_ball_decay(s_grid: Iterable[float] | None = None) -> BallDecay:
    """Start from lambda(s) = 2s^2 + 2s and raise it until both conditions hold:
    points beyond lambda(s) sit within 1/s of the sphere, and radius-s balls
    beyond lambda(s) have compactified diameter at most 1/s.
    """
    if s_grid is None:
        s_grid = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
    lam = BallDecay()
    for _ in range(60):
        ok = True
        for s in s_grid:
            if not lam(s) > s - 1.0:
                ok = False
                break
            # worst admissible ball sits as close to the origin as allowed
            diam = _compactified_ball_diam(lam(s) + s, s)
            if diam > (1.0 / s) * (1.0 + 1e-9):
                ok = False
                break
        if ok:
            return lam
        lam = BallDecay(lam.a * 2.0, lam.b)
    raise RuntimeError("could not validate a collapse rate")


# ---------------------------------------------------------------------------
# the spec bundle
# ---------------------------------------------------------------------------


class SlopeSpec:
    """Bundle (base point, eta, lambda, growth profile, mode) defining p and mu."""

    def __init__(
        self,
        n: int,
        eta: MonotoneTable,
        ball_decay: BallDecay,
        mode: str = "standard",
        x0: Sequence[float] | None = None,
    ):
        if mode not in ("standard", "exponential"):
            raise ValueError("mode must be 'standard' or 'exponential'")
        self.n = n
        self.eta = eta
        self.ball_decay = ball_decay
        self.mode = mode
        self.x0 = tuple(x0) if x0 is not None else (0.0,) * n
        self._psi0 = self.growth(0.0)
        if mode == "exponential" and self._psi0 > 700.0:
            raise EtaTooFast("psi(0) too large for the exponential variant")
        self._exp_base = math.exp(self._psi0) if mode == "exponential" else None
        self._scale_cap: float | None = None

    # --- growth profile ------------------------------------------------

    def envelope(self, s: float) -> float:
        """Running dominator M(s) = max(eta(s), lambda(s), 1); increasing."""
        return max(self.eta(s), self.ball_decay(s), 1.0)

    def growth(self, s: float) -> float:
        """psi(s) = M(s) * 3^s; ratio psi(s+1)/psi(s) >= 3 by monotony of M."""
        log_part = s * LOG3
        if log_part > 700.0:
            return math.inf
        return self.envelope(s) * math.exp(log_part)

    def growth_inv(self, y: float) -> float:
        """psi^-1 by bisection; exact 0 at and below psi(0)."""
        psi0 = self._psi0
        if y <= psi0:
            return 0.0
        lo, hi = 0.0, 1.0
        while self.growth(hi) < y:
            lo = hi
            hi *= 2.0
            if hi > 4096.0:
                raise OverflowError("growth inverse out of range")
        for _ in range(200):
            if hi - lo <= 1e-12 * max(1.0, lo):
                break
            mid = 0.5 * (lo + hi)
            if self.growth(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    # --- radial scale and slope ----------------------------------------

    def base_distance(self, x: Sequence[float]) -> float:
        return math.hypot(*(a - b for a, b in zip(x, self.x0)))

    def radial_scale(self, x: Sequence[float]) -> float:
        """p(x): zero at the base point, strictly increasing with distance."""
        d = self.base_distance(x)
        if self.mode == "standard":
            return math.log(self.growth_inv(d + self._psi0) + 1.0)
        return math.log(self.growth_inv(math.log(d + self._exp_base)) + 1.0)

    def slope(self, q: ProductPoint) -> float:
        """mu(x, r) = r / p(x), with signed poles where p vanishes."""
        p = self.radial_scale(q.x)
        if p < POLE_SCALE_TOL:
            return math.inf if q.r >= 0 else -math.inf
        return q.r / p

    # --- chart coordinates ----------------------------------------------

    def chart(self, point: Union[ProductPoint, BoundaryPoint]) -> ChartPoint:
        if isinstance(point, BoundaryPoint):
            s = math.tanh(point.mu) if not math.isinf(point.mu) else math.copysign(1.0, point.mu)
            if point.is_pole:
                return ChartPoint((0.0,) * self.n, s, s)
            return ChartPoint(tuple(point.z), s, s)
        mu = self.slope(point)
        s = math.tanh(mu) if not math.isinf(mu) else math.copysign(1.0, mu)
        return ChartPoint(
            radial_position(point.x), s, math.tanh(point.r / CHART_HEIGHT_SCALE)
        )

    def chart_distance(
        self, a: Union[ProductPoint, BoundaryPoint], b: BoundaryPoint
    ) -> float:
        """Distance in the coordinates the basic neighborhoods control.

        Finite-slope targets constrain direction and slope only; poles
        constrain slope and height.
        """
        ca = self.chart(a)
        if b.is_pole:
            sig = math.copysign(1.0, b.mu)
            if isinstance(a, BoundaryPoint):
                if a.is_pole:
                    return 0.0 if math.copysign(1.0, a.mu) == sig else 2.0
                return max(abs(ca.s - sig), 1.0)
            return max(abs(ca.s - sig), abs(ca.rho - sig))
        spatial_a = ca.xbar
        spatial = math.sqrt(sum((u - v) ** 2 for u, v in zip(spatial_a, b.z)))
        return max(spatial, abs(ca.s - math.tanh(b.mu)))

    # --- basic-neighborhood fit ------------------------------------------

    def fits_in_basic(
        self, points: Sequence[ProductPoint]
    ) -> tuple[float, BoundaryPoint]:
        """Smallest delta found with all points inside one basic set U(w, delta).

        Candidates: either pole (when heights and slopes share a sign) and a
        finite witness at the normalized centroid direction with the slope
        midrange.  The finite candidate is a 2-approximation of the optimal
        fit, which is all the decay experiments need.
        """
        if not points:
            raise ValueError("need at least one point")
        rs = [q.r for q in points]
        mus = [self.slope(q) for q in points]
        best: tuple[float, BoundaryPoint] | None = None

        if all(r > 0 for r in rs) and all(m > 0 for m in mus):
            inv_mu = max((1.0 / m) if not math.isinf(m) else 0.0 for m in mus)
            delta = max(1.0 / min(rs), inv_mu)
            best = (delta, BoundaryPoint.pole(+1))
        if all(r < 0 for r in rs) and all(m < 0 for m in mus):
            inv_mu = max((-1.0 / m) if not math.isinf(m) else 0.0 for m in mus)
            delta = max(-1.0 / max(rs), inv_mu)
            cand = (delta, BoundaryPoint.pole(-1))
            if best is None or cand[0] < best[0]:
                best = cand
        if all(math.isfinite(m) for m in mus):
            xbars = [radial_position(q.x) for q in points]
            centroid = tuple(
                sum(xb[i] for xb in xbars) / len(xbars) for i in range(self.n)
            )
            cnorm = math.sqrt(sum(v * v for v in centroid))
            if cnorm > 1e-12:
                z = tuple(v / cnorm for v in centroid)
                spatial = max(
                    math.sqrt(sum((u - v) ** 2 for u, v in zip(xb, z)))
                    for xb in xbars
                )
                mid = 0.5 * (max(mus) + min(mus))
                half_spread = 0.5 * (max(mus) - min(mus))
                cand = (max(spatial, half_spread), BoundaryPoint(z, mid))
                if best is None or cand[0] < best[0]:
                    best = cand
        if best is None:
            raise Unfittable("point set straddles the base region or both poles")
        return best

    # --- contraction rays -------------------------------------------------

    def scale_cap(self) -> float:
        """Largest radial scale reachable with representable coordinates."""
        if self._scale_cap is None:
            probe = (self.x0[0] + RADIUS_CAP,) + self.x0[1:]
            self._scale_cap = self.radial_scale(probe)
        return self._scale_cap

    def radius_for_scale(self, target: float) -> float:
        """Distance d with p at distance d equal to target, capped at RADIUS_CAP."""
        if target <= 0.0:
            return 0.0
        if target >= self.scale_cap():
            return RADIUS_CAP
        axis = (1.0,) + (0.0,) * (self.n - 1)

        def scale_at(d: float) -> float:
            return self.radial_scale(tuple(x + d * u for x, u in zip(self.x0, axis)))

        lo_w, hi_w = -690.0, math.log(RADIUS_CAP)
        for _ in range(120):
            mid_w = 0.5 * (lo_w + hi_w)
            if scale_at(math.exp(mid_w)) < target:
                lo_w = mid_w
            else:
                hi_w = mid_w
        return math.exp(0.5 * (lo_w + hi_w))

    def contraction_ray(
        self, target: Union[ProductPoint, BoundaryPoint], t: float
    ) -> ProductPoint:
        """Point at time t on the ray from (x0, 0) toward the target.

        The radial part moves so its scale p equals the rescaled time and the
        height keeps the ratio height/p pinned to the target slope, so the
        slope along the ray equals the target slope up to bisection error.
        Interior targets are reached and then held (eventually constant rays);
        boundary targets are approached, stalling only at the representable
        radius cap.
        """
        if t < 0:
            raise ValueError("ray time must be >= 0")
        if isinstance(target, BoundaryPoint):
            if target.is_pole:
                return ProductPoint(self.x0, math.copysign(t, target.mu))
            fx = 1.0 / math.sqrt(target.mu**2 + 1.0)
            d = self.radius_for_scale(t * fx)
            x = tuple(a + d * z for a, z in zip(self.x0, target.z))
            return ProductPoint(x, target.mu * self.radial_scale(x))

        mu0 = self.slope(target)
        if math.isinf(mu0):
            # target sits over the base point: climb straight toward its height
            r = math.copysign(min(t, abs(target.r)), target.r) if target.r else 0.0
            return ProductPoint(target.x, r)
        fx = 1.0 / math.sqrt(mu0**2 + 1.0)
        p_target = self.radial_scale(target.x)
        p_ray = t * fx
        if p_ray >= p_target:
            x = target.x
        else:
            dist = self.base_distance(target.x)
            u = tuple((a - b) / dist for a, b in zip(target.x, self.x0))
            d = self.radius_for_scale(p_ray)
            x = tuple(a + d * ui for a, ui in zip(self.x0, u))
        reach = abs(mu0) * fx * t
        r = math.copysign(min(reach, abs(target.r)), target.r) if target.r else 0.0
        return ProductPoint(x, r)

    # --- serialization ----------------------------------------------------

    def to_json(self) -> str:
        def fmt(v: float) -> str:
            return format(v, ".12g")

        sample = [i / 4.0 for i in range(0, 81)]
        data = {
            "n": self.n,
            "mode": self.mode,
            "x0": [float(v) for v in self.x0],
            "eta": {
                "s": [fmt(v) for v in self.eta.ss],
                "value": [fmt(v) for v in self.eta.values],
            },
            "lambda": {"a": fmt(self.ball_decay.a), "b": fmt(self.ball_decay.b)},
            "growth": {
                "s": [fmt(s) for s in sample],
                "value": [fmt(self.growth(s)) for s in sample],
            },
        }
        return json.dumps(data, indent=1)


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------


def _check_eta_growth(eta: MonotoneTable) -> None:
    """Reject tables whose tail outgrows every C * 3^s envelope."""
    if len(eta.ss) < 3:
        return
    mid = len(eta.ss) // 2
    s0, s1 = eta.ss[mid], eta.ss[-1]
    if s1 <= s0:
        return
    v0, v1 = max(eta.values[mid], 1.0), max(eta.values[-1], 1.0)
    rate = (v1 / v0) ** (1.0 / (s1 - s0))
    if rate > 3.0 * (1.0 + 1e-9):
        raise EtaTooFast(
            f"control table grows like {rate:.3f}^s > 3^s; growth profile "
            "cannot dominate it beyond the sampled range"
        )


def build_slope_spec(
    aut: Automorphism,
    eta: MonotoneTable,
    mode: str = "standard",
    ball_decay: BallDecay | None = None,
    x0: Sequence[float] | None = None,
) -> SlopeSpec:
    """Assemble the compactification data for one automorphism fixture."""
    _check_eta_growth(eta)
    lam = ball_decay if ball_decay is not None else validated_ball_decay()
    spec = SlopeSpec(aut.n, eta, lam, mode=mode, x0=x0)
    # invariants on a coarse grid; the dense-grid versions live in the tests
    for i in range(0, 21):
        s = float(i)
        psi_s, psi_s1 = spec.growth(s), spec.growth(s + 1.0)
        if math.isinf(psi_s1):
            break
        assert psi_s1 >= 3.0 * psi_s * (1.0 - 1e-12)
        assert psi_s >= max(eta(s), lam(s)) * (1.0 - 1e-12)
    return spec
