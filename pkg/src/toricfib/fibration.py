"""Toric contractions and adjunction over codimension-one points.

A contraction is a surjective lattice map sending every source cone into
some target cone and hitting every target ray from a source ray.  On top
of that sit the fiber computations, the lc threshold over a divisorial
direction, the discriminant/moduli data of the canonical bundle formula,
and the exact infimum of thresholds over all divisorial directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .divisors import InvariantDivisor, class_reduce, ray_matrix
from .errors import (
    ConeNotMappedError,
    DirectionOutsideImageError,
    FinitePartError,
    NotATargetRayError,
    NotPrimitiveError,
    NotRelativelyTrivialError,
    NotSimplicialError,
    RayNotDominatedError,
)
from .fan import Cone, Fan, classify_fan, cone_preimage_section
from .lattice import (
    IntMatrix,
    Sublattice,
    Vec,
    is_primitive,
    is_zero_vec,
    kernel_basis,
    solve_rational,
    split_extension,
)
from .pair import (
    BoundaryData,
    ToricPair,
    build_pair,
    positivity_check,
    relative_picard_rank_one,
)
from .polytope import HPolytope


@dataclass(frozen=True)
class ToricContraction:
    source: Fan
    target: Fan
    pi: IntMatrix

    def image_of(self, v) -> Vec:
        return self.pi.apply(v)

    @cached_property
    def cone_target_indices(self) -> tuple[int, ...]:
        """For each source maximal cone, the first target maximal cone
        containing its image."""
        out = []
        for c in self.source.max_cones:
            images = [self.image_of(g) for g in c.gens]
            idx = next(i for i, t in enumerate(self.target.max_cones)
                       if all(t.contains(u) for u in images))
            out.append(idx)
        return tuple(out)

    @cached_property
    def contracted_wall_indices(self) -> tuple[int, ...]:
        """Walls whose two adjacent cones map into one target cone: the
        corresponding invariant curves are contracted by the morphism."""
        out = []
        for k, (wall, i, j) in enumerate(self.source.walls):
            images = [self.image_of(g) for g in
                      self.source.max_cones[i].gens + self.source.max_cones[j].gens]
            if any(all(t.contains(u) for u in images)
                   for t in self.target.max_cones):
                out.append(k)
        return tuple(out)

    def rays_over(self, w: Vec) -> list[tuple[Vec, int]]:
        """Source rays mapping onto the direction w, with their integer
        multiples: pi(v) = m * w, m > 0."""
        out = []
        for v in self.source.rays:
            m = _positive_multiple(self.image_of(v), w)
            if m is not None:
                out.append((v, m))
        return out

    def __repr__(self):
        return (f"ToricContraction(rank {self.source.rank} -> rank "
                f"{self.target.rank})")


# Threshold sweeps revisit the same (cone, projection, direction) triples;
# the section cones depend on nothing else, so memoize them.
_cached_section = lru_cache(maxsize=None)(cone_preimage_section)


def _positive_multiple(u: Vec, w: Vec) -> int | None:
    """The integer m > 0 with u = m*w, if any (w nonzero)."""
    if is_zero_vec(u):
        return None
    j = next(k for k, x in enumerate(w) if x != 0)
    m = Fraction(u[j], w[j])
    if m <= 0 or m.denominator != 1:
        return None
    m = int(m)
    if tuple(m * x for x in w) != tuple(u):
        return None
    return m


def validate_contraction(src: Fan, tgt: Fan, pi: IntMatrix) -> ToricContraction:
    """Check the contraction axioms.

    Raises FinitePartError carrying the image sublattice when pi is not
    surjective, ConeNotMappedError naming the first cone whose image fits
    in no target cone, and RayNotDominatedError when some target ray has
    no source ray over it.
    """
    if pi.nrows != tgt.rank or pi.ncols != src.rank:
        raise ValueError("projection shape does not match the fans")
    image = Sublattice(tgt.rank, [pi.col(j) for j in range(pi.ncols)])
    if image.rank < tgt.rank:
        raise FinitePartError("lattice map is not surjective (infinite index)",
                              image=image, index=None)
    idx = image.index()
    if idx != 1:
        raise FinitePartError(
            f"lattice map has image of finite index {idx}", image=image, index=idx)
    f = ToricContraction(src, tgt, pi)
    for c in src.max_cones:
        images = [pi.apply(g) for g in c.gens]
        if not any(all(t.contains(u) for u in images) for t in tgt.max_cones):
            raise ConeNotMappedError(
                f"image of {c} lies in no target cone", cone=c)
    for w in tgt.rays:
        if not f.rays_over(w):
            raise RayNotDominatedError(
                f"no source ray lies over the target ray {w}")
    return f


@dataclass(frozen=True)
class FiberData:
    fiber_fan: Fan
    kernel_basis: tuple[Vec, ...]
    split_section: tuple[Vec, ...] | None


def general_fiber_and_split(f: ToricContraction) -> FiberData:
    """Fan of the general fiber, in coordinates on the saturated kernel.

    The fiber fan consists of the source cones lying inside the kernel
    subspace.  When the target fan is trivial (only the zero cone), the
    contraction is a product and a section basis is returned as well.
    """
    ker = kernel_basis(f.pi)
    sub = Sublattice(f.source.rank, ker)
    rank = len(ker)
    cones = {}
    for c in f.source.max_cones:
        for face in c.faces:
            if face.gens in cones:
                continue
            if all(is_zero_vec(f.image_of(g)) for g in face.gens):
                gens = [sub.coordinates_of(g) for g in face.gens]
                assert all(g is not None for g in gens)
                cones[face.gens] = Cone.hull(rank, gens)
    inner = list(cones.values())
    maximal = [c for c in inner
               if not any(set(c.gens) < set(o.gens) for o in inner)]
    fiber = Fan.make(rank, maximal if maximal else [Cone.zero(rank)])
    split = None
    if all(not t.gens for t in f.target.max_cones):
        section = split_extension(f.pi)
        split = tuple(section.col(j) for j in range(section.ncols))
    return FiberData(fiber, tuple(ker), split)


def fiber_multiplicities_over(f: ToricContraction, w) -> list[tuple[Vec, int]]:
    """Source rays over a target ray with their multiplicities."""
    w = tuple(int(x) for x in w)
    if w not in f.target.rays:
        raise NotATargetRayError(f"{w} is not a ray of the target fan")
    return sorted(f.rays_over(w))


@dataclass(frozen=True)
class LctResult:
    t: Fraction
    witness: Vec


def lct_over_direction(pair: ToricPair, f: ToricContraction, w) -> LctResult:
    """Largest t such that the pair stays lc after adding t times the
    fiber divisor over the direction w, over the generic point of w.

    Equals the minimum of a(r)/m(r) over extremal rays r of the cones
    sigma cap pi^{-1}(R>=0 w) with pi(r) = m(r) w, m(r) > 0.  Extremal
    rays suffice because a is linear on each cone and nonnegative on the
    m = 0 part.  Witness ties break lexicographically.
    """
    if pair.fan != f.source:
        raise ValueError("pair and contraction have different source fans")
    w = tuple(int(x) for x in w)
    if is_zero_vec(w) or not is_primitive(w):
        raise NotPrimitiveError(f"direction {w} must be a primitive vector")
    direction = Cone.hull(f.target.rank, [w])
    best = None
    witness = None
    for cone, piece in zip(pair.fan.max_cones, pair.a_function.pieces):
        section = _cached_section(cone, f.pi, direction)
        for r in section.gens:
            m = _positive_multiple(f.image_of(r), w)
            if m is None:
                continue
            val = sum((x * y for x, y in zip(piece, r)), Fraction(0)) / m
            if best is None or val < best or (val == best and r < witness):
                best, witness = val, r
    if best is None:
        raise DirectionOutsideImageError(
            f"no divisorial direction of the source lies over {w}")
    return LctResult(best, witness)


def lct_box_oracle(pair: ToricPair, f: ToricContraction, w, box: int) -> Fraction | None:
    """Brute-force check value: min of a(u)/m over all lattice points u of
    the source support with coordinates at most box and pi(u) = m*w, m > 0."""
    w = tuple(int(x) for x in w)
    best = None
    for u in _box_points(pair.fan.rank, box):
        if is_zero_vec(u):
            continue
        # the multiple test is integer-cheap, the support scan is not
        m = _positive_multiple(f.image_of(u), w)
        if m is None:
            continue
        if not pair.fan.support_contains(u):
            continue
        val = pair.a_function.value(u) / m
        if best is None or val < best:
            best = val
    return best


def _box_points(rank: int, box: int):
    if rank == 0:
        yield ()
        return
    for rest in _box_points(rank - 1, box):
        for x in range(-box, box + 1):
            yield (x,) + rest


def relative_triviality(pair: ToricPair, f: ToricContraction):
    """Target class D_Z with (K+B)-class = (divisorial pullback of D_Z)-class.

    The pullback of the invariant divisor at a target ray w is
    sum of m_v D_v over the source rays v with pi(v) = m_v w.  Returns the
    coefficient vector of D_Z over the target rays, or None when the class
    equation has no solution.
    """
    if pair.fan != f.source:
        raise ValueError("pair and contraction have different source fans")
    n = len(pair.fan.rays)
    cols = []
    for w in f.target.rays:
        col = [0] * n
        for v, m in f.rays_over(w):
            col[pair.fan.ray_index[v]] = m
        cols.append(col)
    princ = ray_matrix(pair.fan)
    for j in range(princ.ncols):
        cols.append(list(princ.col(j)))
    system = IntMatrix.from_cols(cols, nrows=n)
    sol = solve_rational(system, pair.pair_class_vector())
    if sol is None:
        return None
    return tuple(sol[: len(f.target.rays)])


@dataclass(frozen=True)
class AdjunctionData:
    discriminant: InvariantDivisor
    moduli_class: tuple[Fraction, ...]
    witnesses: tuple[tuple[Vec, Vec, Fraction], ...]  # (target ray, u*, lct)
    descended_class: tuple[Fraction, ...]


def discriminant_divisor(pair: ToricPair, f: ToricContraction) -> AdjunctionData:
    """Canonical bundle formula data over every invariant divisor of the
    target: discriminant coefficient 1 - lct at each target ray, and the
    moduli class = descended class - canonical class - discriminant class
    in the ray presentation of the target class group."""
    descended = relative_triviality(pair, f)
    if descended is None:
        raise NotRelativelyTrivialError(
            "the pair class is not a pullback from the target")
    coeffs = []
    witnesses = []
    for w in f.target.rays:
        res = lct_over_direction(pair, f, w)
        coeffs.append(1 - res.t)
        witnesses.append((w, res.witness, res.t))
    disc = InvariantDivisor.make(f.target, coeffs)
    moduli = tuple(d + 1 - c for d, c in zip(descended, coeffs))
    return AdjunctionData(disc, class_reduce(f.target, moduli),
                          tuple(witnesses), descended)


@dataclass(frozen=True)
class DeltaResult:
    delta: Fraction
    witness_direction: Vec
    exact: bool
    oracle_delta: Fraction | None


def base_lct_infimum(pair: ToricPair, f: ToricContraction, box: int) -> DeltaResult:
    """Exact infimum of lct over all primitive divisorial directions of
    the target, with a box-enumeration oracle cross-check.

    For each face F of a maximal source cone on which pi is injective,
    the log discrepancy transports to a linear functional g_F on pi(F);
    the infimum equals the minimum of the g_F over the nonzero lattice
    points of the cones pi(F).  A vanishing g_F on an extremal ray means
    the infimum is 0.  The enumeration is cut off at the best value at
    the primitive generators, which bounds each level set.
    """
    if relative_triviality(pair, f) is None:
        raise NotRelativelyTrivialError(
            "the pair class is not a pullback from the target")
    if not f.target.rays:
        raise DirectionOutsideImageError(
            "the target has no divisorial directions")
    e = f.target.rank
    faces = {}
    for cone, piece in zip(pair.fan.max_cones, pair.a_function.pieces):
        for face in cone.faces:
            if face.dim == 0 or face.gens in faces:
                continue
            images = [f.image_of(g) for g in face.gens]
            if IntMatrix.from_rows(images, ncols=e).rank() != face.dim:
                continue
            values = [sum((x * y for x, y in zip(piece, g)), Fraction(0))
                      for g in face.gens]
            g_f = solve_rational(IntMatrix.from_rows(images, ncols=e), values)
            assert g_f is not None
            faces[face.gens] = (Cone.hull(e, images), g_f)
    zero_dirs = []
    bound = None
    for img_cone, g_f in faces.values():
        for gen in img_cone.gens:
            val = sum((x * y for x, y in zip(g_f, gen)), Fraction(0))
            if val == 0:
                zero_dirs.append(gen)
            elif bound is None or val < bound:
                bound = val
    if zero_dirs:
        delta, witness = Fraction(0), min(zero_dirs)
    else:
        assert bound is not None, "a valid contraction dominates every target ray"
        delta = None
        witness = None
        for img_cone, g_f in faces.values():
            eqs = [(tuple(Fraction(x) for x in eq), Fraction(0))
                   for eq in img_cone.equations]
            ineqs = [(tuple(Fraction(x) for x in ie), Fraction(0))
                     for ie in img_cone.inequalities]
            ineqs.append((tuple(-x for x in g_f), bound))
            for pt in HPolytope(e, eqs, ineqs).lattice_points():
                if is_zero_vec(pt):
                    continue
                val = sum((x * y for x, y in zip(g_f, pt)), Fraction(0))
                if delta is None or val < delta or (val == delta and pt < witness):
                    delta, witness = val, pt
        assert delta is not None
    oracle = _delta_box_oracle(pair, f, box)
    return DeltaResult(delta, witness, oracle == delta, oracle)


def _delta_box_oracle(pair: ToricPair, f: ToricContraction, box: int) -> Fraction | None:
    best = None
    for w in _box_points(f.target.rank, box):
        if is_zero_vec(w) or not is_primitive(w):
            continue
        try:
            res = lct_over_direction(pair, f, w)
        except DirectionOutsideImageError:
            continue
        if best is None or res.t < best:
            best = res.t
    return best


def is_fano_contraction(pair: ToricPair, f: ToricContraction) -> bool:
    """Whether the anticanonical divisor is relatively ample."""
    cls = classify_fan(pair.fan)
    if not cls.simplicial:
        raise NotSimplicialError("Fano contraction checks need a simplicial source")
    anti = InvariantDivisor.anticanonical(pair.fan)
    return positivity_check(pair, anti, "ample", relative_to=f)


def is_mori_fiber_space(pair: ToricPair, f: ToricContraction) -> bool:
    """Fano contraction with a positive dimension drop and relative
    Picard rank one."""
    if not is_fano_contraction(pair, f):
        return False
    if f.source.rank <= f.target.rank:
        return False
    return relative_picard_rank_one(pair, f)


@dataclass(frozen=True)
class TowerReport:
    entries: tuple[tuple[Vec, Fraction, Fraction], ...]
    consistent: bool


def tower_consistency_check(pair: ToricPair, g: ToricContraction,
                            h: ToricContraction) -> TowerReport:
    """Adjunction in stages versus in one step.

    For the invariant-boundary pair on the source of g, the lc threshold
    over each ray of the final target must agree between the composite
    contraction and the intermediate pair (V, discriminant of g).
    """
    if pair.boundary.generic:
        raise ValueError("the tower check works with invariant boundaries")
    if g.target != h.source:
        raise ValueError("the contractions do not compose")
    composite = validate_contraction(g.source, h.target, h.pi @ g.pi)
    mid_coeffs = [1 - lct_over_direction(pair, g, w).t for w in g.target.rays]
    mid_pair = build_pair(g.target, BoundaryData(tuple(mid_coeffs)),
                          allow_subpair=True)
    entries = []
    for w in h.target.rays:
        t_direct = lct_over_direction(pair, composite, w).t
        t_staged = lct_over_direction(mid_pair, h, w).t
        entries.append((w, t_direct, t_staged))
    return TowerReport(tuple(entries),
                       all(a == b for _, a, b in entries))
