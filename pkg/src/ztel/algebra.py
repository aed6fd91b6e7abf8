"""Exact arithmetic for lattices Z^n x|_phi Z in normal form t^k g.

Elements are pairs (k, g) with k the power of the stable letter t and g a
vector in Z^n.  The defining relation t^-1 g t = phi(g) forces the
multiplication law

    (k, g) * (m, h) = (k + m, phi^m(g) + h)

which is derived once from t^k g t^m h = t^(k+m) (t^-m g t^m) h.  All
arithmetic uses Python integers, so there is no overflow even for the
hyperbolic fixtures whose matrix powers grow exponentially.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotUnimodular, ResourceLimit

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]

DEFAULT_BALL_BUDGET = 10_000_000


def _as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    mat = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("matrix must be square and nonempty")
    return mat


def det_int(mat: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    a = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _minor(mat: IntMatrix, row: int, col: int) -> IntMatrix:
    return tuple(
        tuple(v for j, v in enumerate(r) if j != col)
        for i, r in enumerate(mat)
        if i != row
    )


def adjugate(mat: IntMatrix) -> IntMatrix:
    n = len(mat)
    if n == 1:
        return ((1,),)
    cof = [
        [(-1) ** (i + j) * det_int(_minor(mat, i, j)) for j in range(n)]
        for i in range(n)
    ]
    # adjugate = transpose of the cofactor matrix
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def mat_vec(a: IntMatrix, v: Sequence[int]) -> IntVector:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class GroupElement:
    """Normal form t^k g; equality of normal forms is equality of elements."""

    k: int
    g: IntVector

    def __repr__(self) -> str:
        return f"t^{self.k}*{list(self.g)}"


class Automorphism:
    """A lattice automorphism: unimodular integer matrix with exact inverse."""

    def __init__(self, matrix: Iterable[Iterable[int]]):
        mat = _as_matrix(matrix)
        d = det_int(mat)
        if d not in (1, -1):
            raise NotUnimodular(f"determinant is {d}, must be +1 or -1")
        self.n = len(mat)
        self.matrix = mat
        # for |det| = 1 the exact integer inverse is det * adjugate
        adj = adjugate(mat)
        self.inverse_matrix = tuple(tuple(d * v for v in row) for row in adj)
        assert mat_mul(mat, self.inverse_matrix) == identity_matrix(self.n)
        self._powers: dict[int, IntMatrix] = {0: identity_matrix(self.n)}

    def matrix_power(self, power: int) -> IntMatrix:
        """phi^power as an exact integer matrix (negative powers allowed)."""
        cached = self._powers.get(power)
        if cached is not None:
            return cached
        base = self.matrix if power > 0 else self.inverse_matrix
        acc = self.matrix_power(power - 1 if power > 0 else power + 1)
        result = mat_mul(acc, base)
        self._powers[power] = result
        return result

    def apply(self, power: int, g: Sequence[int]) -> IntVector:
        """phi^power(g), exact."""
        return mat_vec(self.matrix_power(power), g)

    # --- group operations in normal form -------------------------------

    def identity(self) -> GroupElement:
        return GroupElement(0, (0,) * self.n)

    def embed(self, g: Sequence[int]) -> GroupElement:
        return GroupElement(0, tuple(int(v) for v in g))

    def t_power(self, k: int) -> GroupElement:
        return GroupElement(k, (0,) * self.n)

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        g = tuple(x + y for x, y in zip(self.apply(b.k, a.g), b.g))
        return GroupElement(a.k + b.k, g)

    def inverse(self, a: GroupElement) -> GroupElement:
        return GroupElement(-a.k, tuple(-v for v in self.apply(-a.k, a.g)))

    def generators(self) -> list[GroupElement]:
        """Standard basis of Z^n, t, and all inverses."""
        gens = []
        for i in range(self.n):
            e = tuple(1 if j == i else 0 for j in range(self.n))
            gens.append(self.embed(e))
            gens.append(self.embed(tuple(-v for v in e)))
        gens.append(self.t_power(1))
        gens.append(self.t_power(-1))
        return gens

    # --- Cayley-ball search --------------------------------------------

    def ball(
        self, radius: int, budget: int = DEFAULT_BALL_BUDGET
    ) -> dict[GroupElement, int]:
        """Word lengths of all elements within `radius`, by BFS from 1."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        gens = self.generators()
        dist: dict[GroupElement, int] = {self.identity(): 0}
        frontier = deque([self.identity()])
        level = 0
        while frontier and level < radius:
            level += 1
            next_frontier: deque[GroupElement] = deque()
            for a in frontier:
                for s in gens:
                    b = self.multiply(a, s)
                    if b not in dist:
                        dist[b] = level
                        next_frontier.append(b)
                        if len(dist) > budget:
                            raise ResourceLimit(
                                f"ball exceeded budget of {budget} elements"
                            )
            frontier = next_frontier
        return dist

    def growth_series(
        self, max_radius: int, budget: int = DEFAULT_BALL_BUDGET
    ) -> list[int]:
        """counts[r] = number of elements of word length exactly r."""
        dist = self.ball(max_radius, budget=budget)
        counts = [0] * (max_radius + 1)
        for d in dist.values():
            counts[d] += 1
        return counts

    # --- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "matrix": [list(r) for r in self.matrix]})

    @classmethod
    def from_json(cls, text: str) -> "Automorphism":
        data = json.loads(text)
        return cls(data["matrix"])


def make_automorphism(matrix: Iterable[Iterable[int]]) -> Automorphism:
    return Automorphism(matrix)


def write_growth_csv(path, counts: Sequence[int]) -> None:
    """Growth table as CSV with columns r,count."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "count"])
        for r, c in enumerate(counts):
            writer.writerow([r, c])


HEISENBERG = ((1, 1), (0, 1))
SOL = ((2, 1), (1, 1))
