"""Log pairs on toric fans.

A pair is a fan together with boundary data: rational coefficients on the
invariant prime divisors plus "generic members", formal general members of
base-point-free classes carrying a coefficient.  The log-discrepancy
function of the pair is the piecewise linear function with value
1 - coefficient at each ray; generic members never contribute along
invariant valuations (their base loci are empty), entering only through
the bookkeeping minimum 1 - b and through divisor-class arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

from .divisors import (
    Coeffs,
    InvariantDivisor,
    SupportFunction,
    is_cartier,
    is_nef,
    is_principal_class,
    wall_bends,
)
from .errors import (
    AlphaOutOfRangeError,
    CoefficientOutOfRangeError,
    NotSimplicialError,
    ToricError,
)
from .fan import Fan, classify_fan
from .lattice import IntMatrix, Vec, kernel_basis
from .polytope import HPolytope


@dataclass(frozen=True)
class GenericMember:
    """General member of a base-point-free class, with weight coeff."""

    coeff: Fraction
    rep: InvariantDivisor


@dataclass(frozen=True)
class BoundaryData:
    ray_coeffs: Coeffs
    generic: tuple[GenericMember, ...] = ()

    @staticmethod
    def zero(fan: Fan) -> BoundaryData:
        return BoundaryData(tuple(Fraction(0) for _ in fan.rays))

    @staticmethod
    def full(fan: Fan) -> BoundaryData:
        """The reduced invariant boundary: coefficient one at every ray."""
        return BoundaryData(tuple(Fraction(1) for _ in fan.rays))


@dataclass(frozen=True)
class ToricPair:
    fan: Fan
    boundary: BoundaryData
    is_subpair: bool

    @cached_property
    def a_function(self) -> SupportFunction:
        """Log discrepancy as a piecewise linear function: 1 - coeff at rays."""
        return SupportFunction.for_values(
            self.fan, [1 - c for c in self.boundary.ray_coeffs])

    def pair_class_vector(self) -> Coeffs:
        """Ray-coefficient class vector of (canonical divisor + boundary)."""
        vec = [c - 1 for c in self.boundary.ray_coeffs]
        for gm in self.boundary.generic:
            vec = [x + gm.coeff * m for x, m in zip(vec, gm.rep.coeffs)]
        return tuple(vec)

    def is_log_calabi_yau(self) -> bool:
        return is_principal_class(self.fan, self.pair_class_vector())


def build_pair(fan: Fan, boundary: BoundaryData, allow_subpair: bool = False) -> ToricPair:
    """Validate boundary data against the fan and assemble the pair.

    Coefficients must stay <= 1 so the log discrepancy is nonnegative at
    the rays; negative coefficients are accepted only with allow_subpair.
    Each generic member must carry weight in [0,1] and an integral Cartier
    nef representative (the base-point-freeness certificate).
    """
    coeffs = tuple(Fraction(c) for c in boundary.ray_coeffs)
    if len(coeffs) != len(fan.rays):
        raise ValueError("one boundary coefficient per ray is required")
    for ray, c in zip(fan.rays, coeffs):
        if c > 1:
            raise CoefficientOutOfRangeError(
                f"coefficient {c} at ray {ray} exceeds 1")
        if c < 0 and not allow_subpair:
            raise CoefficientOutOfRangeError(
                f"negative coefficient {c} at ray {ray} (pass allow_subpair to accept)")
    generic = []
    for gm in boundary.generic:
        b = Fraction(gm.coeff)
        if not 0 <= b <= 1:
            raise CoefficientOutOfRangeError(
                f"generic member weight {b} is outside [0,1]")
        if gm.rep.fan != fan:
            raise ValueError("generic member class lives on a different fan")
        if not gm.rep.is_integral() or not is_cartier(gm.rep):
            raise ToricError(
                "generic member class must be an integral Cartier divisor")
        if not is_nef(gm.rep):
            raise ToricError("generic member class must be nef")
        generic.append(GenericMember(b, gm.rep))
    data = BoundaryData(coeffs, tuple(generic))
    pair = ToricPair(fan, data, is_subpair=any(c < 0 for c in coeffs))
    pair.a_function  # force the Q-Cartier check now
    return pair


def log_discrepancy_at(pair: ToricPair, u) -> Fraction:
    """Value of the a-function at a lattice point of the support."""
    return pair.a_function.value(u)


@dataclass(frozen=True)
class MldResult:
    mld_toric: Fraction
    eps_lc: bool
    witness: Vec
    generic_floor: Fraction | None


def mld_and_eps_check(pair: ToricPair, eps) -> MldResult:
    """Minimal log discrepancy over invariant valuations, with an eps-lc
    verdict that also honors the 1 - b floor of each generic member.

    The toric minimum is found by enumerating lattice points of the level
    sets {x in sigma : a(x) <= A} with A the smallest ray value; when some
    ray already has a = 0 the minimum is 0 with that ray as witness.
    """
    eps = Fraction(eps)
    fan = pair.fan
    a = pair.a_function
    if not fan.rays:
        raise ToricError("the minimum needs at least one ray")
    ray_values = [1 - c for c in pair.boundary.ray_coeffs]
    bound = min(ray_values)
    if bound == 0:
        witness = min(r for r, v in zip(fan.rays, ray_values) if v == 0)
        best = Fraction(0)
    else:
        best = None
        witness = None
        for cone, piece in zip(fan.max_cones, a.pieces):
            if not cone.gens:
                continue
            eqs = [(tuple(Fraction(x) for x in e), Fraction(0))
                   for e in cone.equations]
            ineqs = [(tuple(Fraction(x) for x in ie), Fraction(0))
                     for ie in cone.inequalities]
            ineqs.append((tuple(-x for x in piece), Fraction(bound)))
            level = HPolytope(fan.rank, eqs, ineqs)
            for pt in level.lattice_points():
                if all(x == 0 for x in pt):
                    continue
                val = sum((x * y for x, y in zip(piece, pt)), Fraction(0))
                if best is None or val < best or (val == best and pt < witness):
                    best, witness = val, pt
        assert best is not None, "ray level set always contains the rays"
    floor = min((1 - gm.coeff for gm in pair.boundary.generic), default=None)
    overall = best if floor is None else min(best, floor)
    return MldResult(best, overall >= eps, witness, floor)


def has_terminal_singularities(fan: Fan) -> bool:
    """No exceptional invariant valuation with log discrepancy <= 1: the
    only nonzero lattice points u of the support with a_X(u) <= 1 are the
    rays themselves."""
    a = SupportFunction.for_values(fan, [1] * len(fan.rays))
    rays = set(fan.rays)
    for cone, piece in zip(fan.max_cones, a.pieces):
        if not cone.gens:
            continue
        eqs = [(tuple(Fraction(x) for x in e), Fraction(0)) for e in cone.equations]
        ineqs = [(tuple(Fraction(x) for x in ie), Fraction(0))
                 for ie in cone.inequalities]
        ineqs.append((tuple(Fraction(-x) for x in piece), Fraction(1)))
        for pt in HPolytope(fan.rank, eqs, ineqs).lattice_points():
            if all(x == 0 for x in pt) or pt in rays:
                continue
            return False
    return True


def positivity_check(pair: ToricPair, div: InvariantDivisor, mode: str,
                     relative_to=None) -> bool:
    """Wall-by-wall convexity of the divisor's support function.

    Absolute mode requires a simplicial complete fan and tests every wall;
    relative mode tests only the walls contracted by the given contraction.
    Ample means strict inequality on every tested wall.
    """
    if mode not in ("nef", "ample"):
        raise ValueError("mode must be 'nef' or 'ample'")
    fan = pair.fan
    cls = classify_fan(fan)
    if not cls.simplicial:
        raise NotSimplicialError("positivity checks require a simplicial fan")
    if relative_to is None:
        if not cls.complete:
            raise ToricError("absolute positivity requires a complete fan")
        tested = range(len(fan.walls))
    else:
        if relative_to.source != fan:
            raise ValueError("contraction source differs from the pair's fan")
        tested = relative_to.contracted_wall_indices
    sf = SupportFunction.for_divisor(div)
    bends = wall_bends(sf)
    if mode == "nef":
        return all(bends[i][1] >= 0 for i in tested)
    return all(bends[i][1] > 0 for i in tested)


def wall_relation_vector(fan: Fan, wall_index: int) -> Coeffs:
    """The curve class of a wall of a simplicial fan, as the coefficient
    vector of the integer relation among the rays of its two adjacent
    maximal cones, normalized positive on the two off-wall rays."""
    wall, i, j = fan.walls[wall_index]
    involved = sorted(set(fan.max_cones[i].gens) | set(fan.max_cones[j].gens))
    ker = kernel_basis(IntMatrix.from_cols(involved, nrows=fan.rank))
    if len(ker) != 1:
        raise NotSimplicialError(
            "wall relation requires simplicial adjacent cones")
    rel = ker[0]
    off = [k for k, g in enumerate(involved) if not wall.contains(g)]
    if any(rel[k] == 0 for k in off):
        raise NotSimplicialError("degenerate wall relation")
    if rel[off[0]] < 0:
        rel = tuple(-x for x in rel)
    out = [Fraction(0)] * len(fan.rays)
    for g, c in zip(involved, rel):
        out[fan.ray_index[g]] += c
    return tuple(out)


def relative_picard_rank_one(pair: ToricPair, contraction) -> bool:
    """Whether the contracted-wall curve classes span a line."""
    fan = pair.fan
    cls = classify_fan(fan)
    if not cls.simplicial:
        raise NotSimplicialError("Picard rank computations require a simplicial fan")
    if not cls.complete:
        raise ToricError("Picard rank computations require a complete fan")
    rows = [wall_relation_vector(fan, i) for i in contraction.contracted_wall_indices]
    if not rows:
        return False
    scaled = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        scaled.append(tuple(int(x * den) for x in r))
    return IntMatrix.from_rows(scaled, ncols=len(fan.rays)).rank() == 1


def average_boundary(boundary: BoundaryData, delta_fan: Fan, alpha) -> BoundaryData:
    """Weighted average with the reduced invariant boundary:
    alpha * boundary + (1 - alpha) * (full boundary); generic weights are
    scaled by alpha and vanishing members dropped."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise AlphaOutOfRangeError(f"averaging weight {alpha} is outside [0,1]")
    if len(boundary.ray_coeffs) != len(delta_fan.rays):
        raise ValueError("boundary does not match the fan")
    coeffs = tuple(alpha * c + (1 - alpha) for c in boundary.ray_coeffs)
    generic = tuple(replace(gm, coeff=alpha * gm.coeff)
                    for gm in boundary.generic if alpha * gm.coeff > 0)
    return BoundaryData(coeffs, generic)


def crepant_transfer(pair: ToricPair, refined: Fan) -> ToricPair:
    """The same pair on a refinement of its fan: new ray coefficients are
    1 - a(ray), so the a-function is unchanged as a function on the space."""
    coeffs = [1 - pair.a_function.value(r) for r in refined.rays]
    sf_reps = [SupportFunction.for_divisor(gm.rep) for gm in pair.boundary.generic]
    generic = tuple(
        GenericMember(gm.coeff, InvariantDivisor.make(
            refined, [-sf.value(r) for r in refined.rays]))
        for gm, sf in zip(pair.boundary.generic, sf_reps))
    return build_pair(refined, BoundaryData(tuple(coeffs), generic),
                      allow_subpair=True)
