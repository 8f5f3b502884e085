"""Newton polyhedra of a support: the local one and the one at infinity.

``Γ₊`` is encoded by its support points (it is the hull of ``supp + Rⁿ₊``);
``Γ∞`` is the lattice polytope ``conv({0} ∪ supp)``.  Restrictions to a
coordinate subset ``S`` are computed in the coordinates of ``Z^S`` and
lifted back, so that normals appear as ambient vectors supported on ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import PreconditionError
from .lattice_geom import (
    Cone,
    Fan,
    LatticePolytope,
    Point,
    dot,
    int_kernel,
    primitive,
    rank,
    saturated_basis,
    LatticeFrame,
)

LOCAL = "local"
INFINITY = "infinity"


@dataclass(frozen=True)
class Support:
    """Exponent vectors of a polynomial; coefficients are kept only as text."""

    n: int
    exponents: tuple[Point, ...]
    coefficients: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.exponents:
            raise PreconditionError("support must be nonempty")
        for e in self.exponents:
            if len(e) != self.n:
                raise PreconditionError(f"exponent {e} does not have {self.n} coordinates")
            if any(x < 0 for x in e):
                raise PreconditionError(f"exponent {e} has a negative entry")

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], n: int | None = None) -> "Support":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise PreconditionError("support must be nonempty")
        return cls(n if n is not None else len(pts[0]), tuple(pts))

    def without_origin(self) -> "Support":
        zero = tuple([0] * self.n)
        return Support(self.n, tuple(p for p in self.exponents if p != zero))

    def restricted(self, s: Sequence[int]) -> list[Point]:
        """Exponents supported in ``R^S``, written in the coordinates of ``Z^S``."""
        off = [i for i in range(self.n) if i not in s]
        return [tuple(p[i] for i in s) for p in self.exponents if all(p[i] == 0 for i in off)]

    def is_convenient(self) -> bool:
        for i in range(self.n):
            if not any(p[i] > 0 and all(p[j] == 0 for j in range(self.n) if j != i)
                       for p in self.exponents):
                return False
        return True


def coordinate_subsets(n: int) -> list[tuple[int, ...]]:
    return [s for k in range(1, n + 1) for s in combinations(range(n), k)]


def lift(v: Sequence, s: Sequence[int], n: int) -> tuple:
    out = [0] * n
    for x, i in zip(v, s):
        out[i] = x
    return tuple(out)


@dataclass(frozen=True)
class BoundaryFacet:
    """A facet used by the zeta formulas, in ambient coordinates.

    ``normal`` is primitive, supported on ``subset``, and ``distance`` is the
    positive lattice distance ``d``; ``volume`` is the normalized volume of
    the facet in its own lattice.
    """

    subset: tuple[int, ...]
    vertices: tuple[Point, ...]
    normal: Point
    distance: int
    volume: int


@dataclass(frozen=True)
class PlusFacet:
    """Facet ``conv(points) + cone(e_i : i in directions)`` of some ``Γ₊``."""

    normal: Point
    value: int
    points: frozenset[Point]
    directions: frozenset[int]

    @property
    def compact(self) -> bool:
        return not self.directions


def minimal_points(points: Iterable[Point]) -> list[Point]:
    """Drop points dominated coordinatewise by another point; ``Γ₊`` is unchanged."""
    pts = sorted(set(points))
    return [p for p in pts if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts)]


def plus_facets(points: Iterable[Point], n: int, compact_only: bool = False) -> list[PlusFacet]:
    """All facets of ``Γ₊(points) ⊂ Rⁿ``, found from normals of spanning subsets."""
    pts = minimal_points(points)
    if not pts:
        return []
    dir_sets: list[tuple[int, ...]] = [()]
    if not compact_only:
        dir_sets = [d for k in range(n) for d in combinations(range(n), k)]
    found: dict[Point, PlusFacet] = {}
    for dirs in dir_sets:
        k = n - len(dirs)
        for sub in combinations(pts, k):
            rows = [[a - b for a, b in zip(p, sub[0])] for p in sub[1:]]
            rows += [[int(i == j) for i in range(n)] for j in dirs]
            if rank(rows, n) != n - 1:
                continue
            (c,) = int_kernel(rows, n)
            c = primitive(c)
            if any(x < 0 for x in c):
                c = tuple(-x for x in c)
            if any(x < 0 for x in c) or not any(c):
                continue
            if compact_only and not all(x > 0 for x in c):
                continue
            if c in found:
                continue
            vals = [dot(c, p) for p in pts]
            m = min(vals)
            if dot(c, sub[0]) != m:
                continue
            found[c] = PlusFacet(c, m, frozenset(p for p, v in zip(pts, vals) if v == m),
                                 frozenset(i for i in range(n) if c[i] == 0))
    return sorted(found.values(), key=lambda f: f.normal)


@dataclass(frozen=True)
class FaceGeometry:
    """Data attached to a face ``γ`` not containing the origin in its affine span.

    ``level`` is the rational ambient vector ``z`` with ``<z, v> = d_γ`` on
    ``γ`` and ``height(v) = d_γ - <z, v>`` on ``span(Δ_γ)``.
    """

    vertices: tuple[Point, ...]
    dim: int
    delta: LatticePolytope
    distance: int
    subset: tuple[int, ...]
    m: int
    level: tuple[Fraction, ...]

    def height(self, v: Sequence[int]) -> Fraction:
        return self.distance - sum(a * b for a, b in zip(self.level, v))

    @property
    def interior(self) -> bool:
        """Whether the relative interior of ``γ`` lies in the open orthant."""
        return len(self.subset) == len(self.vertices[0])


def face_geometry(vertices: Iterable[Sequence[int]]) -> FaceGeometry:
    verts = tuple(sorted({tuple(int(a) for a in v) for v in vertices}))
    n = len(verts[0])
    zero = tuple([0] * n)
    basis = saturated_basis(list(verts), n)
    r = len(basis)
    frame = LatticeFrame(zero, basis)
    c = [frame.coords(v) for v in verts]
    diffs = [[a - b for a, b in zip(ci, c[0])] for ci in c[1:]]
    ker = int_kernel(diffs, r) if diffs else [tuple(int(i == j) for j in range(r)) for i in range(r)]
    if len(ker) != 1:
        raise PreconditionError("the origin lies on the affine span of the face")
    w = primitive(ker[0])
    d = dot(w, c[0])
    if d == 0:
        raise PreconditionError("the origin lies on the affine span of the face")
    if d < 0:
        w, d = tuple(-x for x in w), -d
    subset = tuple(i for i in range(n) if any(v[i] for v in verts))
    dim = r - 1
    return FaceGeometry(verts, dim, LatticePolytope((zero,) + verts), d, subset,
                        len(subset) - dim - 1, frame.functional_to_ambient(w))


class NewtonPolyhedron:
    """``Γ₊(f)`` (``kind='local'``) or ``Γ∞(f)`` (``kind='infinity'``)."""

    def __init__(self, support: Support, kind: str):
        if kind not in (LOCAL, INFINITY):
            raise ValueError(f"unknown kind {kind!r}")
        self.support = support
        self.kind = kind
        self.n = support.n

    # ---- restrictions and facet data ----------------------------------
    def restrict(self, s: Sequence[int]) -> LatticePolytope | list[Point] | None:
        """``Γ ∩ R^S`` in the coordinates of ``Z^S``.

        Local kind returns the minimal generating points (``None`` when
        empty); infinity kind returns the lattice polytope.
        """
        pts = self.support.restricted(s)
        if self.kind == LOCAL:
            pts = minimal_points(pts)
            return pts or None
        return LatticePolytope([tuple([0] * len(s))] + pts)

    def boundary_facets(self, s: Sequence[int]) -> list[BoundaryFacet]:
        s = tuple(s)
        k = len(s)
        out = []
        if self.kind == LOCAL:
            pts = self.restrict(s)
            if pts is None:
                return []
            for f in plus_facets(pts, k, compact_only=True):
                verts = LatticePolytope(sorted(f.points))
                out.append(BoundaryFacet(s, tuple(lift(v, s, self.n) for v in verts.vertices),
                                         lift(f.normal, s, self.n), f.value, verts.normalized_volume))
        else:
            poly = self.restrict(s)
            if poly.dim < k:
                return []
            for f in poly.facets:
                if f.offset >= 0:
                    continue
                face = poly.face_polytope(f.vertices)
                out.append(BoundaryFacet(s, tuple(lift(v, s, self.n) for v in face.vertices),
                                         lift(f.normal, s, self.n), -f.offset, face.normalized_volume))
        return out

    def is_convenient(self) -> bool:
        return self.support.is_convenient()

    # ---- full-dimensional structure -----------------------------------
    @cached_property
    def polytope(self) -> LatticePolytope:
        if self.kind != INFINITY:
            raise ValueError("only Γ∞ is a polytope")
        return LatticePolytope([tuple([0] * self.n)] + list(self.support.exponents))

    @cached_property
    def facets(self) -> list[PlusFacet]:
        if self.kind != LOCAL:
            raise ValueError("facets of Γ∞ are on .polytope")
        return plus_facets(self.support.exponents, self.n)

    def faces_at_infinity(self) -> list[tuple[Point, ...]]:
        """Nonempty faces of ``Γ∞`` avoiding the origin, as sorted vertex tuples."""
        p = self.polytope
        zero = tuple([0] * self.n)
        out = []
        for face, d in p.faces.items():
            if d < 0:
                continue
            verts = tuple(p.face_vertices(face))
            if zero not in verts:
                out.append(verts)
        return sorted(out, key=lambda v: (len(v), v))

    def compact_faces(self) -> list[tuple[Point, ...]]:
        """Nonempty compact faces of ``Γ₊`` (faces of compact facets, plus bounded vertices)."""
        if self.kind != LOCAL:
            raise ValueError("compact faces belong to Γ₊")
        seen: set[tuple[Point, ...]] = set()
        for f in self.facets:
            if not f.compact:
                continue
            poly = LatticePolytope(sorted(f.points))
            for face, d in poly.faces.items():
                if d >= 0:
                    seen.add(tuple(poly.face_vertices(face)))
        for v in self.vertices():
            seen.add((v,))
        return sorted(seen, key=lambda v: (len(v), v))

    def vertices(self) -> list[Point]:
        if self.kind == INFINITY:
            return list(self.polytope.vertices)
        fs = self.facets
        return sorted(p for p in minimal_points(self.support.exponents)
                      if rank([f.normal for f in fs if p in f.points], self.n) == self.n)

    def compact_facet_normals(self) -> list[tuple[Point, int]]:
        return [(f.normal, f.value) for f in self.facets if f.compact]

    def supporting_face(self, u: Sequence[int]):
        """Argmin data of ``<u, ·>``: a vertex index set for Γ∞, points plus directions for Γ₊."""
        if self.kind == INFINITY:
            return self.polytope.supporting_face(u)
        if any(x < 0 for x in u):
            raise PreconditionError("the minimum over Γ₊ does not exist for u with a negative entry")
        pts = minimal_points(self.support.exponents)
        vals = [dot(u, p) for p in pts]
        m = min(vals)
        return (frozenset(p for p, v in zip(pts, vals) if v == m),
                frozenset(i for i in range(self.n) if u[i] == 0)), m

    def dual_fan(self) -> Fan:
        if self.kind == INFINITY:
            return self.polytope.dual_fan()
        fs = self.facets
        faces: set[tuple[frozenset, frozenset]] = set()
        frontier = {(f.points, f.directions) for f in fs}
        faces |= frontier
        while frontier:
            new = set()
            for a in frontier:
                for f in fs:
                    x = (a[0] & f.points, a[1] & f.directions)
                    if x[0] and x not in faces:
                        new.add(x)
            faces |= new
            frontier = new
        fan = Fan()
        for jp, dirs in faces:
            gens = tuple(sorted({f.normal for f in fs if jp <= f.points and dirs <= f.directions}))
            fan.cones[frozenset([jp, dirs])] = Cone(gens, self.n)
        return fan


def gamma_plus(support: Support) -> NewtonPolyhedron:
    return NewtonPolyhedron(support, LOCAL)


def gamma_infinity(support: Support) -> NewtonPolyhedron:
    return NewtonPolyhedron(support, INFINITY)


def atypical_faces(gamma: NewtonPolyhedron, coordinate_condition: bool = True) -> list[tuple[Point, ...]]:
    """Faces through 0, of positive dimension, whose dual cone leaves the closed orthant.

    With ``coordinate_condition`` (the default) a face must in addition have a
    dual cone meeting the orthant away from 0, which for a face through the
    origin means it lies in a proper coordinate subspace.  Without it the
    plain dual-cone test is applied.
    """
    if gamma.kind != INFINITY:
        raise PreconditionError("atypical faces are defined for Γ∞")
    p = gamma.polytope
    zero = tuple([0] * gamma.n)
    fan = p.dual_fan()
    out = []
    for face, d in p.faces.items():
        if d < 1:
            continue
        verts = tuple(p.face_vertices(face))
        if zero not in verts or fan.cones[face].in_quadrant():
            continue
        if coordinate_condition and all(any(v[i] for v in verts) for i in range(gamma.n)):
            continue
        out.append(verts)
    return sorted(out, key=lambda v: (len(v), v))


def properly_contained(p: Support, q: Support) -> bool:
    """Whether ``min_{Γ₊(P)} u > min_{Γ₊(Q)} u`` for every ``u`` in the open orthant.

    ``g(u) = min_P u - min_Q u`` is linear on each maximal cone of the common
    refinement, i.e. on the normal cone of each vertex of ``Γ₊(P) + Γ₊(Q)``.
    It is positive on such a cone's interior part iff it is nonnegative on
    all its rays and the rays where it vanishes do not span an interior
    direction.
    """
    if p.n != q.n:
        raise PreconditionError("supports live in different dimensions")
    n = p.n
    summed = Support.of([tuple(a + b for a, b in zip(x, y)) for x in p.exponents for y in q.exponents], n)
    gp = gamma_plus(summed)
    fs = gp.facets

    def g(u):
        return min(dot(u, x) for x in p.exponents) - min(dot(u, y) for y in q.exponents)

    for v in gp.vertices():
        rays = [f.normal for f in fs if v in f.points]
        vals = [g(r) for r in rays]
        if any(x < 0 for x in vals):
            return False
        zero_sum = [sum(r[i] for r, x in zip(rays, vals) if x == 0) for i in range(n)]
        if all(x > 0 for x in zero_sum):
            return False
    return True


def polynomial_like_sufficient(p: Support, q: Support) -> bool:
    """Convenience of both plus proper containment, which (with non-degeneracy) gives polynomial-likeness."""
    return p.is_convenient() and q.is_convenient() and properly_contained(p, q)
