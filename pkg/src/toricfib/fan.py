"""Rational polyhedral cones and fans, with exact dual descriptions.

A cone is stored by its primitive extremal generators, lexicographically
sorted.  The facet description (integer equations and inequalities) is
derived on demand and cached.  All cones in this package are strongly
convex; fans are collections of maximal cones over a common lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import (
    InvalidFanError,
    NotInSupportError,
    NotPrimitiveError,
    NotUnimodularError,
)
from .lattice import (
    IntMatrix,
    Sublattice,
    Vec,
    dot,
    is_primitive,
    is_zero_vec,
    kernel_basis,
    kernel_direction,
    primitive_part,
    saturation_basis,
    snf_decompose,
    smith_diagonal,
)


def extreme_rays(rank: int, eqs, ineqs) -> tuple[list[Vec], list[Vec]]:
    """V-description of {x : e.x = 0, a.x >= 0}: (extreme rays, lineality basis).

    Rays are primitive, lexicographically sorted.  A ray is kept exactly
    when its tight constraint set has rank rank-1, which characterizes
    one-dimensional faces.
    """
    rows = list(eqs) + list(ineqs)
    if rows:
        lineality = kernel_basis(IntMatrix.from_rows(rows, ncols=rank))
    else:
        lineality = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    base_rank = IntMatrix.from_rows(list(eqs), ncols=rank).rank() if eqs else 0
    need = rank - 1 - base_rank
    if need < 0 or need > len(ineqs):
        return [], lineality
    found = set()
    for subset in combinations(range(len(ineqs)), need):
        sys_rows = list(eqs) + [ineqs[i] for i in subset]
        if sys_rows:
            v = kernel_direction(IntMatrix.from_rows(sys_rows, ncols=rank))
        elif rank == 1:
            v = (1,)
        else:
            v = None
        if v is None:
            continue
        for w in (v, tuple(-x for x in v)):
            vals = [dot(a, w) for a in ineqs]
            if any(x < 0 for x in vals):
                continue
            if all(x == 0 for x in vals):
                continue  # lineality direction, not a ray
            tight = list(eqs) + [a for a, val in zip(ineqs, vals) if val == 0]
            if IntMatrix.from_rows(tight, ncols=rank).rank() == rank - 1:
                found.add(w)
    return sorted(found), lineality


def _covector_lift(yprime: Vec, basis_matrix: IntMatrix) -> Vec:
    """Integer covector y on the ambient lattice with y . basis = yprime.

    basis_matrix has the (saturated) basis vectors as columns, so an
    integral lift always exists.
    """
    u, d, v = snf_decompose(basis_matrix)
    s = basis_matrix.ncols
    assert all(d.rows[i][i] == 1 for i in range(s))
    yv = tuple(dot(yprime, v.col(j)) for j in range(s))
    z = yv + (0,) * (basis_matrix.nrows - s)
    y = tuple(dot(z, u.col(j)) for j in range(basis_matrix.nrows))
    assert tuple(dot(y, basis_matrix.col(j)) for j in range(s)) == tuple(yprime)
    return y


def _dual_description(rank: int, gens) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Equations and facet inequalities of the cone spanned by gens."""
    gens = [g for g in gens if not is_zero_vec(g)]
    if not gens:
        eqs = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
        return eqs, tuple()
    gmat = IntMatrix.from_rows(gens, ncols=rank)
    eqs = tuple(kernel_basis(gmat))
    span = saturation_basis(gens, rank)
    sub = Sublattice(rank, span)
    primed = [sub.coordinates_of(g) for g in gens]
    assert all(p is not None for p in primed)
    s = len(span)
    normals, lin = extreme_rays(s, [], primed)
    assert not lin, "span coordinates must make the dual pointed"
    bmat = IntMatrix.from_cols(span, nrows=rank)
    ineqs = tuple(_covector_lift(n, bmat) for n in normals)
    return eqs, ineqs


@dataclass(frozen=True)
class Cone:
    """Strongly convex rational cone, canonically presented."""

    rank: int
    gens: tuple[Vec, ...]

    @staticmethod
    def hull(rank: int, vectors) -> Cone:
        """Cone spanned by arbitrary lattice vectors; reduces to extremal
        primitive generators and checks strong convexity."""
        prim = []
        for v in vectors:
            v = tuple(int(x) for x in v)
            if is_zero_vec(v):
                continue
            prim.append(primitive_part(v)[0])
        prim = sorted(set(prim))
        if not prim:
            return Cone(rank, tuple())
        eqs, ineqs = _dual_description(rank, prim)
        rays, lin = extreme_rays(rank, eqs, ineqs)
        if lin:
            raise InvalidFanError(f"cone spanned by {prim} contains a line")
        cone = Cone(rank, tuple(rays))
        object.__setattr__(cone, "_hrep", (eqs, ineqs))
        return cone

    @staticmethod
    def zero(rank: int) -> Cone:
        return Cone(rank, tuple())

    @cached_property
    def _dual(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
        cached = self.__dict__.get("_hrep")
        if cached is not None:
            return cached
        return _dual_description(self.rank, self.gens)

    @property
    def equations(self) -> tuple[Vec, ...]:
        return self._dual[0]

    @property
    def inequalities(self) -> tuple[Vec, ...]:
        return self._dual[1]

    @cached_property
    def dim(self) -> int:
        if not self.gens:
            return 0
        return IntMatrix.from_rows(list(self.gens), ncols=self.rank).rank()

    @cached_property
    def span(self) -> list[Vec]:
        return saturation_basis(self.gens, self.rank)

    def contains(self, v) -> bool:
        return (all(dot(e, v) == 0 for e in self.equations)
                and all(dot(a, v) >= 0 for a in self.inequalities))

    def facets(self) -> tuple[Cone, ...]:
        out = []
        for a in self.inequalities:
            sub = [g for g in self.gens if dot(a, g) == 0]
            out.append(Cone.hull(self.rank, sub))
        return tuple(sorted(out, key=lambda c: c.gens))

    @cached_property
    def faces(self) -> tuple[Cone, ...]:
        """All faces, the cone itself and the zero cone included."""
        seen = {self.gens: self}
        frontier = [self]
        while frontier:
            nxt = []
            for c in frontier:
                for f in c.facets():
                    if f.gens not in seen:
                        seen[f.gens] = f
                        nxt.append(f)
            frontier = nxt
        return tuple(sorted(seen.values(), key=lambda c: (c.dim, c.gens)))

    def intersect(self, other: Cone) -> Cone:
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        eqs = list(self.equations) + list(other.equations)
        ineqs = list(self.inequalities) + list(other.inequalities)
        rays, lin = extreme_rays(self.rank, eqs, ineqs)
        assert not lin
        return Cone.hull(self.rank, rays)

    def is_face_of(self, other: Cone) -> bool:
        if not all(other.contains(g) for g in self.gens):
            return False
        tight = [a for a in other.inequalities
                 if all(dot(a, g) == 0 for g in self.gens)]
        face_gens = [g for g in other.gens
                     if all(dot(a, g) == 0 for a in tight)]
        return set(face_gens) == set(self.gens)

    @property
    def is_simplex(self) -> bool:
        return len(self.gens) == self.dim

    def multiplicity(self) -> int | None:
        """Index of the sublattice generated by the rays of a simplex cone
        inside the lattice points of its span; None for non-simplex cones."""
        if not self.is_simplex:
            return None
        if not self.gens:
            return 1
        divisors = smith_diagonal(IntMatrix.from_rows(list(self.gens), ncols=self.rank))
        out = 1
        for x in divisors:
            out *= x
        return out

    @property
    def is_smooth(self) -> bool:
        return self.is_simplex and self.multiplicity() == 1

    def __repr__(self):
        return f"Cone{list(self.gens)}"


@dataclass(frozen=True)
class Fan:
    rank: int
    max_cones: tuple[Cone, ...]

    @staticmethod
    def make(rank: int, cones) -> Fan:
        uniq = sorted({c.gens: c for c in cones}.values(), key=lambda c: c.gens)
        return Fan(rank, tuple(uniq))

    @staticmethod
    def from_rays_and_cones(rank: int, rays, cone_indices) -> Fan:
        """Build from a primitive ray list and per-cone ray index lists."""
        rays = [tuple(int(x) for x in r) for r in rays]
        for r in rays:
            if is_zero_vec(r) or not is_primitive(r):
                raise NotPrimitiveError(f"ray {r} is not primitive")
        cones = []
        for idx in cone_indices:
            gens = [rays[i] for i in idx]
            c = Cone.hull(rank, gens)
            if set(c.gens) != set(gens):
                raise InvalidFanError(
                    f"cone generators {sorted(gens)} are not extremal (reduce to {list(c.gens)})")
            cones.append(c)
        return Fan.make(rank, cones)

    @cached_property
    def rays(self) -> tuple[Vec, ...]:
        out = set()
        for c in self.max_cones:
            out.update(c.gens)
        return tuple(sorted(out))

    @cached_property
    def ray_index(self) -> dict[Vec, int]:
        return {r: i for i, r in enumerate(self.rays)}

    def support_contains(self, v) -> bool:
        return any(c.contains(v) for c in self.max_cones)

    def cone_containing(self, v) -> Cone | None:
        for c in self.max_cones:
            if c.contains(v):
                return c
        return None

    @cached_property
    def walls(self) -> tuple[tuple[Cone, int, int], ...]:
        """Facets shared by exactly two maximal cones, with the cone indices."""
        facet_map: dict[tuple, list[int]] = {}
        facet_obj: dict[tuple, Cone] = {}
        for i, c in enumerate(self.max_cones):
            for f in c.facets():
                facet_map.setdefault(f.gens, []).append(i)
                facet_obj[f.gens] = f
        out = []
        for key, owners in sorted(facet_map.items()):
            if len(owners) == 2:
                out.append((facet_obj[key], owners[0], owners[1]))
        return tuple(out)

    def __repr__(self):
        return f"Fan(rank {self.rank}, {len(self.max_cones)} maximal cones, rays {list(self.rays)})"


@dataclass(frozen=True)
class FanReport:
    rank: int
    n_rays: int
    n_max_cones: int


def validate_fan(fan: Fan) -> FanReport:
    """Check the fan axioms; raises InvalidFanError naming the first offense."""
    if fan.rank < 0:
        raise InvalidFanError("negative rank")
    if not fan.max_cones:
        raise InvalidFanError("fan has no cones")
    for c in fan.max_cones:
        if c.rank != fan.rank:
            raise InvalidFanError(f"cone {c} lives in rank {c.rank}, fan in rank {fan.rank}")
    for i, j in combinations(range(len(fan.max_cones)), 2):
        ci, cj = fan.max_cones[i], fan.max_cones[j]
        inter = ci.intersect(cj)
        if inter.gens == ci.gens or inter.gens == cj.gens:
            raise InvalidFanError(
                f"listed maximal cone is contained in another: {ci} vs {cj}")
        if not inter.is_face_of(ci) or not inter.is_face_of(cj):
            raise InvalidFanError(
                f"intersection of {ci} and {cj} is not a face of each")
    return FanReport(fan.rank, len(fan.rays), len(fan.max_cones))


@dataclass(frozen=True)
class FanClassification:
    simplicial: bool
    smooth: bool
    complete: bool


def classify_fan(fan: Fan) -> FanClassification:
    simplicial = all(c.is_simplex for c in fan.max_cones)
    smooth = all(c.is_smooth for c in fan.max_cones)
    return FanClassification(simplicial, smooth, _is_complete(fan))


def _is_complete(fan: Fan) -> bool:
    """Exact completeness: pure, full-dimensional, every facet of a maximal
    cone shared by exactly two maximal cones, and wall-connected."""
    if not fan.max_cones:
        return False
    if any(c.dim != fan.rank for c in fan.max_cones):
        return False
    if fan.rank == 0:
        return True
    facet_map: dict[tuple, list[int]] = {}
    for i, c in enumerate(fan.max_cones):
        for f in c.facets():
            facet_map.setdefault(f.gens, []).append(i)
    if any(len(owners) != 2 for owners in facet_map.values()):
        return False
    adj: dict[int, set[int]] = {i: set() for i in range(len(fan.max_cones))}
    for owners in facet_map.values():
        a, b = owners
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        cur = stack.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(fan.max_cones)


def star_subdivide(fan: Fan, u: Vec) -> Fan:
    """Star subdivision of the fan at a primitive lattice point of its support."""
    u = tuple(int(x) for x in u)
    if is_zero_vec(u) or not is_primitive(u):
        raise NotPrimitiveError(f"{u} is not a primitive lattice vector")
    if not fan.support_contains(u):
        raise NotInSupportError(f"{u} is outside the fan support")
    new_cones: list[Cone] = []
    for c in fan.max_cones:
        if not c.contains(u):
            new_cones.append(c)
            continue
        for f in c.facets():
            if not f.contains(u):
                new_cones.append(Cone.hull(fan.rank, f.gens + (u,)))
    out = Fan.make(fan.rank, new_cones)
    validate_fan(out)
    return out


def fans_isomorphic_under(m: IntMatrix, f1: Fan, f2: Fan) -> bool:
    """Whether the unimodular map m sends the cones of f1 onto those of f2."""
    if m.nrows != m.ncols or not m.is_unimodular():
        raise NotUnimodularError("the comparison map must be unimodular")
    if f1.rank != m.ncols or f2.rank != m.nrows:
        raise NotUnimodularError("rank mismatch with the comparison map")
    images = set()
    for c in f1.max_cones:
        img = Cone.hull(f2.rank, [m.apply(g) for g in c.gens])
        images.add(img.gens)
    return images == {c.gens for c in f2.max_cones}


def cone_preimage_section(c: Cone, pi: IntMatrix, target: Cone) -> Cone:
    """The cone c intersected with the preimage of the target cone under pi.

    May be the zero cone; always strongly convex when c is.
    """
    if pi.ncols != c.rank or pi.nrows != target.rank:
        raise ValueError("projection shape mismatch")
    pulled_eqs = [tuple(dot(e, pi.col(j)) for j in range(pi.ncols)) for e in target.equations]
    pulled_ineqs = [tuple(dot(a, pi.col(j)) for j in range(pi.ncols)) for a in target.inequalities]
    eqs = list(c.equations) + pulled_eqs
    ineqs = list(c.inequalities) + pulled_ineqs
    rays, lin = extreme_rays(c.rank, eqs, ineqs)
    assert not lin, "section of a strongly convex cone cannot contain a line"
    return Cone.hull(c.rank, rays)


def product_fan(f1: Fan, f2: Fan) -> Fan:
    """Fan of the product: pairwise sums of embedded maximal cones."""
    rank = f1.rank + f2.rank
    cones = []
    for c1 in f1.max_cones:
        for c2 in f2.max_cones:
            gens = [g + (0,) * f2.rank for g in c1.gens]
            gens += [(0,) * f1.rank + g for g in c2.gens]
            cones.append(Cone.hull(rank, gens))
    return Fan.make(rank, cones)
