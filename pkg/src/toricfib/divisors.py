"""Invariant divisors on a fan and their piecewise linear support data.

Coefficient vectors are aligned with fan.rays.  The support function of a
divisor takes the value -coefficient at each ray; a divisor is Q-Cartier
when a linear piece exists on every maximal cone, and nef when the pieces
bend the right way across every wall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInSupportError, NotQCartierError
from .fan import Cone, Fan
from .lattice import IntMatrix, dot, saturation_basis, solve_rational

Coeffs = tuple[Fraction, ...]


def _as_fraction_tuple(values) -> Coeffs:
    return tuple(Fraction(x) for x in values)


@dataclass(frozen=True)
class InvariantDivisor:
    fan: Fan
    coeffs: Coeffs

    @staticmethod
    def make(fan: Fan, values) -> InvariantDivisor:
        coeffs = _as_fraction_tuple(values)
        if len(coeffs) != len(fan.rays):
            raise ValueError("one coefficient per ray is required")
        return InvariantDivisor(fan, coeffs)

    @staticmethod
    def from_ray_map(fan: Fan, mapping) -> InvariantDivisor:
        """Divisor with the given coefficients at the named rays, zero elsewhere."""
        mapping = {tuple(k): Fraction(v) for k, v in dict(mapping).items()}
        unknown = set(mapping) - set(fan.rays)
        if unknown:
            raise ValueError(f"not rays of the fan: {sorted(unknown)}")
        return InvariantDivisor(
            fan, tuple(mapping.get(r, Fraction(0)) for r in fan.rays))

    @staticmethod
    def canonical(fan: Fan) -> InvariantDivisor:
        return InvariantDivisor(fan, tuple(Fraction(-1) for _ in fan.rays))

    @staticmethod
    def anticanonical(fan: Fan) -> InvariantDivisor:
        return InvariantDivisor(fan, tuple(Fraction(1) for _ in fan.rays))

    def coeff_at(self, ray) -> Fraction:
        return self.coeffs[self.fan.ray_index[tuple(ray)]]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def scale(self, r) -> InvariantDivisor:
        r = Fraction(r)
        return InvariantDivisor(self.fan, tuple(r * c for c in self.coeffs))

    def __add__(self, other: InvariantDivisor) -> InvariantDivisor:
        if self.fan != other.fan:
            raise ValueError("divisors live on different fans")
        return InvariantDivisor(
            self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: InvariantDivisor) -> InvariantDivisor:
        return self + other.scale(-1)

    def __repr__(self):
        return f"InvariantDivisor({dict(zip(self.fan.rays, self.coeffs))})"


@dataclass(frozen=True)
class SupportFunction:
    """Piecewise linear function on the fan support, one covector per
    maximal cone.  Covectors are rational and, on cones of less than full
    dimension, only their restriction to the cone span is meaningful."""

    fan: Fan
    pieces: tuple[Coeffs, ...]

    @staticmethod
    def for_values(fan: Fan, ray_values) -> SupportFunction:
        """Piecewise linear extension of prescribed values at the rays;
        raises NotQCartierError when some cone admits no linear piece."""
        vals = _as_fraction_tuple(ray_values)
        if len(vals) != len(fan.rays):
            raise ValueError("one value per ray is required")
        at_ray = dict(zip(fan.rays, vals))
        pieces = []
        for cone in fan.max_cones:
            rows = IntMatrix.from_rows(list(cone.gens), ncols=fan.rank)
            rhs = [at_ray[g] for g in cone.gens]
            piece = solve_rational(rows, rhs)
            if piece is None:
                raise NotQCartierError(
                    f"no linear piece matches the ray values on {cone}", cone=cone)
            pieces.append(piece)
        return SupportFunction(fan, tuple(pieces))

    @staticmethod
    def for_divisor(div: InvariantDivisor) -> SupportFunction:
        return SupportFunction.for_values(div.fan, [-c for c in div.coeffs])

    def value(self, v) -> Fraction:
        for cone, piece in zip(self.fan.max_cones, self.pieces):
            if cone.contains(v):
                return sum((x * Fraction(y) for x, y in zip(piece, v)),
                           Fraction(0))
        raise NotInSupportError(f"{tuple(v)} is outside the fan support")

    def piece_on(self, cone: Cone) -> Coeffs:
        """A covector valid on the given cone of the fan."""
        for mc, piece in zip(self.fan.max_cones, self.pieces):
            if all(mc.contains(g) for g in cone.gens):
                return piece
        raise NotInSupportError(f"{cone} is not a cone of the fan")


def cartier_index(sf: SupportFunction) -> int:
    """Smallest k >= 1 such that k times the function is integer-valued on
    the lattice points of every cone span."""
    k = 1
    for cone, piece in zip(sf.fan.max_cones, sf.pieces):
        for b in saturation_basis(cone.gens, sf.fan.rank):
            val = sum((x * y for x, y in zip(piece, b)), Fraction(0))
            k = k * val.denominator // math.gcd(k, val.denominator)
    return k


def is_cartier(div: InvariantDivisor) -> bool:
    return div.is_integral() and cartier_index(SupportFunction.for_divisor(div)) == 1


def wall_bends(sf: SupportFunction) -> list[tuple[Cone, Fraction]]:
    """Convexity defect across each wall: nonnegative everywhere means the
    function is the support function of a relatively nef divisor class."""
    out = []
    for wall, i, j in sf.fan.walls:
        other = next(g for g in sf.fan.max_cones[j].gens if not wall.contains(g))
        bend = (sum((x * y for x, y in zip(sf.pieces[i], other)), Fraction(0))
                - sum((x * y for x, y in zip(sf.pieces[j], other)), Fraction(0)))
        out.append((wall, bend))
    return out


def is_nef(div: InvariantDivisor) -> bool:
    """Convexity of the support function across every wall.  For complete
    fans this is nefness of the divisor."""
    sf = SupportFunction.for_divisor(div)
    return all(b >= 0 for _, b in wall_bends(sf))


def is_ample(div: InvariantDivisor) -> bool:
    """Strict convexity across every wall; ampleness on a complete fan."""
    sf = SupportFunction.for_divisor(div)
    bends = wall_bends(sf)
    return bool(bends) and all(b > 0 for _, b in bends)


def ray_matrix(fan: Fan) -> IntMatrix:
    """Rows are the rays; principal divisors are exactly its column span."""
    return IntMatrix.from_rows(list(fan.rays), ncols=fan.rank)


def is_principal_class(fan: Fan, coeffs) -> bool:
    vec = _as_fraction_tuple(coeffs)
    return solve_rational(ray_matrix(fan), vec) is not None


def _principal_reducers(fan: Fan) -> list[tuple[int, Coeffs]]:
    """Reduced row echelon basis of the principal subspace with pivots."""
    n = len(fan.rays)
    rows = [[Fraction(fan.rays[j][i]) for j in range(n)] for i in range(fan.rank)]
    reducers: list[tuple[int, Coeffs]] = []
    for row in rows:
        for p, red in reducers:
            if row[p] != 0:
                f = row[p]
                row = [a - f * b for a, b in zip(row, red)]
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None:
            continue
        f = row[piv]
        row = [a / f for a in row]
        for idx, (p, red) in enumerate(reducers):
            if red[piv] != 0:
                g = red[piv]
                reducers[idx] = (p, tuple(a - g * b for a, b in zip(red, row)))
        reducers.append((piv, tuple(row)))
    return sorted(reducers)


def class_reduce(fan: Fan, coeffs) -> Coeffs:
    """Canonical representative of a coefficient vector modulo principal
    divisors: entries at the pivot rays are cleared to zero."""
    vec = list(_as_fraction_tuple(coeffs))
    if len(vec) != len(fan.rays):
        raise ValueError("one coefficient per ray is required")
    for piv, red in _principal_reducers(fan):
        if vec[piv] != 0:
            f = vec[piv]
            vec = [a - f * b for a, b in zip(vec, red)]
    return tuple(vec)


def classes_equal(fan: Fan, coeffs_a, coeffs_b) -> bool:
    return class_reduce(fan, coeffs_a) == class_reduce(fan, coeffs_b)
