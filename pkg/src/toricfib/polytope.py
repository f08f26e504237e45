"""Exact enumeration helpers for rational H-polytopes.

A polytope is given by equations a.x + b = 0 and inequalities a.x + b >= 0
with rational data.  Vertices are found by solving square subsystems, and
lattice points by scanning the integer bounding box of the vertex set, so
lattice_points() requires the feasible region to be bounded.  Intended for
the small instances arising from level sets of piecewise linear functions
on cones.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

from .lattice import IntMatrix, _row_echelon


def _solve_square(rows, rhs, dim):
    """Unique rational solution of rows.x = rhs or None."""
    work = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots, rank = _row_echelon(work)
    if rank != dim or dim in pivots:
        return None
    sol = [Fraction(0)] * dim
    for i, c in enumerate(pivots):
        sol[c] = work[i][-1]
    for i in range(rank, len(work)):
        if work[i][-1] != 0:
            return None
    return tuple(sol)


def _clear_denoms(row):
    lcm = 1
    for x in row:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return [int(x * lcm) for x in row]


class HPolytope:
    """Rational polytope {x : eq.x + c = 0, ineq.x + c >= 0}."""

    def __init__(self, dim: int, equations=(), inequalities=()):
        self.dim = dim
        self.equations = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in equations]
        self.inequalities = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in inequalities]

    def contains(self, x) -> bool:
        for a, b in self.equations:
            if sum(ai * xi for ai, xi in zip(a, x)) + b != 0:
                return False
        for a, b in self.inequalities:
            if sum(ai * xi for ai, xi in zip(a, x)) + b < 0:
                return False
        return True

    def vertices(self):
        """All vertices, exactly.  Empty list when the polytope has none."""
        d = self.dim
        if d == 0:
            return [tuple()] if self.contains(tuple()) else []
        eq_rows = [a for a, _ in self.equations]
        eq_rhs = [-b for _, b in self.equations]
        if eq_rows:
            base_rank = IntMatrix.from_rows([_clear_denoms(r) for r in eq_rows], ncols=d).rank()
        else:
            base_rank = 0
        need = d - base_rank
        found = set()
        for subset in combinations(range(len(self.inequalities)), need):
            rows = list(eq_rows) + [self.inequalities[i][0] for i in subset]
            rhs = list(eq_rhs) + [-self.inequalities[i][1] for i in subset]
            sol = _solve_square(rows, rhs, d)
            if sol is not None and self.contains(sol):
                found.add(sol)
        return sorted(found)

    def lattice_points(self):
        """All integer points, by exact bounding-box scan (bounded regions only)."""
        verts = self.vertices()
        if not verts:
            return []
        if self.dim == 0:
            return [tuple()]
        ranges = []
        for i in range(self.dim):
            lo = min(v[i] for v in verts)
            hi = max(v[i] for v in verts)
            start = -((-lo.numerator) // lo.denominator)  # ceil
            stop = hi.numerator // hi.denominator  # floor
            ranges.append(range(start, stop + 1))
        return [cand for cand in product(*ranges) if self.contains(cand)]
