"""Nullity experiments: do translated fundamental domains get small?

The control table eta records, per level k, the straightened (l1) diameter
of the t^(+-k)-translates of a fundamental domain.  The decay experiment
then pushes the domain around by structured families of group elements and
measures, for each translate, the radius delta of the smallest basic
neighborhood in the slope compactification that swallows it.  A Euclidean
baseline does the same measurement against the naive visual sphere of
R^(n+1); on the parabolic fixture its t-power curve stays bounded away from
zero, which is exactly the failure the slope machinery repairs.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .algebra import Automorphism, GroupElement
from .compactify import MonotoneTable, SlopeSpec
from .errors import Unfittable
from .telescope import FundamentalDomain, ProductPoint, act, v_map


# ---------------------------------------------------------------------------
# control table
# ---------------------------------------------------------------------------


def _straightened_coords(
    aut: Automorphism, a: GroupElement, domain: FundamentalDomain
) -> np.ndarray:
    """v-images of the a-translate of the domain as an (m, n+1) float array."""
    rows = []
    for p in domain.samples:
        q = v_map(aut, act(aut, a, p))
        rows.append([float(v) for v in q.x] + [float(q.r)])
    return np.array(rows, dtype=float)


def translate_points(
    aut: Automorphism, a: GroupElement, domain: FundamentalDomain
) -> list[ProductPoint]:
    coords = _straightened_coords(aut, a, domain)
    return [ProductPoint(tuple(row[:-1]), float(row[-1])) for row in coords]


def _l1_diameter(coords: np.ndarray) -> float:
    diffs = np.abs(coords[:, None, :] - coords[None, :, :]).sum(axis=2)
    return float(diffs.max())


def eta_estimate(
    aut: Automorphism, domain: FundamentalDomain, kmax: int
) -> MonotoneTable:
    """Monotone control table eta(|k|).

    Raw values are the l1-diameters of the straightened t^(+-k)-translates
    (max over the two signs), replaced by their running-max envelope, with
    +|k| added so the table is strictly increasing and unbounded.
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    raw = []
    for k in range(kmax + 1):
        d_pos = _l1_diameter(_straightened_coords(aut, aut.t_power(k), domain))
        if k == 0:
            raw.append(d_pos)
            continue
        d_neg = _l1_diameter(_straightened_coords(aut, aut.t_power(-k), domain))
        raw.append(max(d_pos, d_neg))
    env = np.maximum.accumulate(raw)
    values = tuple(float(env[k] + k) for k in range(kmax + 1))
    return MonotoneTable(tuple(float(k) for k in range(kmax + 1)), values)


# ---------------------------------------------------------------------------
# smallness of a single translate
# ---------------------------------------------------------------------------


def smallness(
    spec: SlopeSpec,
    aut: Automorphism,
    a: GroupElement,
    domain: FundamentalDomain,
) -> float:
    """Basic-neighborhood radius for the straightened a-translate; inf when
    no candidate fits (expected only for translates meeting the base region)."""
    points = translate_points(aut, a, domain)
    try:
        delta, _ = spec.fits_in_basic(points)
    except Unfittable:
        return math.inf
    return delta


# ---------------------------------------------------------------------------
# families and decay curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """A structured ladder of group elements pushed toward infinity."""

    name: str
    kind: str  # t_power | axis | mixed
    scales: tuple[float, ...]
    axis: int = 2
    t_power: int = 0
    t_scales: tuple[int, ...] = ()
    final_delta_max: float = math.inf

    def __post_init__(self):
        if self.kind not in ("t_power", "axis", "mixed"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if any(b <= a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scale ladder must be strictly increasing")
        if self.t_scales and len(self.t_scales) != len(self.scales):
            raise ValueError("t_scales must pair up with scales")

    def element(self, aut: Automorphism, index: int) -> GroupElement:
        scale = int(self.scales[index])
        if self.kind == "t_power":
            return aut.t_power(scale)
        vec = tuple(
            scale if j == self.axis - 1 else 0 for j in range(aut.n)
        )
        if self.kind == "axis":
            return aut.embed(vec)
        k = self.t_scales[index] if self.t_scales else self.t_power
        return GroupElement(int(k), vec)


@dataclass
class DecayCurve:
    """Measured (family label, scale, delta) triples, one curve per family."""

    entries: list[tuple[str, float, float]] = field(default_factory=list)

    def family(self, name: str) -> list[tuple[float, float]]:
        return [(s, d) for (n, s, d) in self.entries if n == name]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["family", "scale", "delta"])
            for name, scale, delta in self.entries:
                writer.writerow([name, format(scale, ".12g"), format(delta, ".12g")])


def _worker_count(n_tasks: int) -> int:
    raw = os.environ.get("ZTEL_THREADS", "1")
    try:
        cap = max(1, int(raw))
    except ValueError:
        cap = 1
    return min(cap, max(1, n_tasks))


def _run_families(families, measure) -> DecayCurve:
    tasks = [
        (fam, i) for fam in families for i in range(len(fam.scales))
    ]
    workers = _worker_count(len(tasks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            deltas = list(pool.map(lambda t: measure(*t), tasks))
    else:
        deltas = [measure(fam, i) for fam, i in tasks]
    curve = DecayCurve()
    for (fam, i), delta in zip(tasks, deltas):
        curve.entries.append((fam.name, float(fam.scales[i]), delta))
    return curve


def decay_experiment(
    spec: SlopeSpec,
    aut: Automorphism,
    domain: FundamentalDomain,
    families: Sequence[Family],
    spearman_max: float = -0.9,
) -> tuple[DecayCurve, dict]:
    """Smallness along each family ladder plus a monotone-trend verdict."""

    def measure(fam: Family, i: int) -> float:
        return smallness(spec, aut, fam.element(aut, i), domain)

    curve = _run_families(families, measure)
    verdicts = {}
    for fam in families:
        pts = curve.family(fam.name)
        scales = [s for s, _ in pts]
        deltas = [d for _, d in pts]
        rho = float(stats.spearmanr(scales, deltas).statistic)
        final = deltas[-1]
        passed = rho <= spearman_max and final < fam.final_delta_max
        verdicts[fam.name] = {
            "spearman": rho,
            "final_delta": final,
            "final_delta_max": fam.final_delta_max,
            "strictly_decreasing": all(b < a for a, b in zip(deltas, deltas[1:])),
            "passed": bool(passed),
        }
    verdicts["all_passed"] = all(
        v["passed"] for k, v in verdicts.items() if k != "all_passed"
    )
    return curve, verdicts


# ---------------------------------------------------------------------------
# Euclidean baseline
# ---------------------------------------------------------------------------


def _euclidean_smallness(coords: np.ndarray) -> float:
    """Fit radius against the visual sphere of R^(n+1): the set must be far
    away (1/min |w|) and have small angular extent about its mean direction."""
    norms = np.linalg.norm(coords, axis=1)
    if norms.min() == 0.0:
        return math.inf
    dirs = coords / norms[:, None]
    centroid = dirs.mean(axis=0)
    c_norm = np.linalg.norm(centroid)
    if c_norm < 1e-12:
        return math.inf
    centroid /= c_norm
    cosines = np.clip(dirs @ centroid, -1.0, 1.0)
    angular_radius = float(np.arccos(cosines).max())
    return max(1.0 / float(norms.min()), angular_radius)


def euclidean_baseline(
    aut: Automorphism,
    domain: FundamentalDomain,
    families: Sequence[Family],
) -> DecayCurve:
    """Same ladders, measured in the radial compactification of R^(n+1)."""

    def measure(fam: Family, i: int) -> float:
        coords = _straightened_coords(aut, fam.element(aut, i), domain)
        return _euclidean_smallness(coords)

    return _run_families(families, measure)
