"""Exact polyhedral geometry on integer lattices.

Everything here works with Python integers (and ``Fraction`` where a
rational value is unavoidable).  A :class:`LatticePolytope` stores its
vertices, its facets with primitive inner normals, and its full face
lattice.  Lower-dimensional polytopes are handled through a lattice frame
of their affine span, so that volumes and interior points are measured in
the induced lattice ``Z^n ∩ aff(P)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, factorial, gcd
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, ...]

# Above this many candidate subsets the facet search asks Qhull for candidates.
_BRUTE_FORCE_LIMIT = 4000


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence[int]) -> Point:
    g = content(v)
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def int_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[Point]:
    """Z-basis of ``{x in Z^ncols : M x = 0}`` for the integer matrix ``M``.

    Column-style Hermite reduction: unimodular column operations bring ``M``
    to echelon form while the same operations are applied to the identity;
    the columns past the last pivot then span the integer kernel.
    """
    m = len(rows)
    cols = [[int(rows[i][j]) for i in range(m)] + [int(k == j) for k in range(ncols)]
            for j in range(ncols)]
    piv = 0
    for i in range(m):
        if piv == ncols:
            break
        while True:
            nz = [j for j in range(piv, ncols) if cols[j][i] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            cols[piv], cols[j0] = cols[j0], cols[piv]
            clean = True
            for j in range(piv + 1, ncols):
                if cols[j][i]:
                    q = cols[j][i] // cols[piv][i]
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[piv])]
                    if cols[j][i]:
                        clean = False
            if clean:
                break
        if cols[piv][i] != 0:
            piv += 1
    return [tuple(c[m:]) for c in cols[piv:]]


def rank(vectors: Sequence[Sequence[int]], n: int) -> int:
    if not vectors:
        return 0
    return n - len(int_kernel(vectors, n))


def saturated_basis(vectors: Sequence[Sequence[int]], n: int) -> list[Point]:
    """Z-basis of ``Z^n ∩ span_R(vectors)``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    orth = int_kernel(vectors, n)
    if not orth:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return int_kernel(orth, n)


class LatticeFrame:
    """Integer coordinates on the affine lattice ``origin + span_Z(basis)``."""

    def __init__(self, origin: Point, basis: Sequence[Point]):
        self.origin = tuple(origin)
        self.basis = [tuple(b) for b in basis]
        self.n = len(origin)
        self.r = len(self.basis)
        # pick r independent ambient columns and invert that square block
        piv: list[int] = []
        for j in range(self.n):
            if len(piv) == self.r:
                break
            trial = piv + [j]
            sub = [[b[c] for c in trial] for b in self.basis]
            if rank([list(col) for col in zip(*sub)], self.r) == len(trial):
                piv = trial
        self.pivots = piv
        block = [[Fraction(b[c]) for c in piv] for b in self.basis]  # r x r, rows = basis
        self._inv = _invert(block) if self.r else []
        den = 1
        for row in self._inv:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        self._den = den
        self._inv_int = [[int(x * den) for x in row] for row in self._inv]

    def coords(self, p: Sequence[int]) -> Point:
        d = [p[c] - self.origin[c] for c in self.pivots]
        out = []
        for j in range(self.r):
            s = sum(d[i] * self._inv_int[i][j] for i in range(self.r))
            if s % self._den:
                raise ValueError("point is not in the frame lattice")
            out.append(s // self._den)
        c = tuple(out)
        if tuple(self.to_ambient(c)) != tuple(p):
            raise ValueError("point is not in the affine span of the frame")
        return c

    def to_ambient(self, c: Sequence[int]) -> Point:
        return tuple(self.origin[i] + sum(c[j] * self.basis[j][i] for j in range(self.r))
                     for i in range(self.n))

    def functional_to_ambient(self, c: Sequence) -> tuple[Fraction, ...]:
        """A rational ambient vector ``z`` with ``<z, p - origin> = <c, coords(p)>``."""
        z = [Fraction(0)] * self.n
        for i, col in enumerate(self.pivots):
            z[col] = sum(Fraction(self._inv_int[i][j], self._den) * c[j] for j in range(self.r))
        return tuple(z)


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    r = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(m)]
    for col in range(r):
        p = next(i for i in range(col, r) if a[i][col] != 0)
        a[col], a[p] = a[p], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(r):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[r:] for row in a]


@dataclass(frozen=True)
class Facet:
    """A facet ``{x : <normal, x> = offset}`` with ``<normal, P> >= offset``.

    ``normal`` and ``offset`` live in the polytope's frame coordinates; for a
    full-dimensional polytope the frame is the ambient lattice itself.
    """

    vertices: frozenset[int]
    normal: Point
    offset: int


@dataclass(frozen=True)
class Cone:
    generators: tuple[Point, ...]
    n: int

    @property
    def dim(self) -> int:
        return rank(list(self.generators), self.n)

    def in_quadrant(self) -> bool:
        return all(x >= 0 for g in self.generators for x in g)


@dataclass
class Fan:
    """Dual cones indexed by the faces they correspond to."""

    cones: dict[frozenset, Cone] = field(default_factory=dict)

    @property
    def rays(self) -> set[Point]:
        return {g for c in self.cones.values() if c.dim == 1 for g in c.generators}

    def maximal_cones(self) -> list[Cone]:
        top = max((c.dim for c in self.cones.values()), default=0)
        return [c for c in self.cones.values() if c.dim == top]


def _candidate_subsets(x: list[Point], r: int) -> Iterable[tuple[int, ...]]:
    if comb(len(x), r) <= _BRUTE_FORCE_LIMIT:
        return combinations(range(len(x)), r)
    try:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(np.array(x, dtype=float))
        return [tuple(int(i) for i in s) for s in hull.simplices]
    except Exception:  # degenerate input for Qhull: fall back to the exact search
        return combinations(range(len(x)), r)


def _hull_facets(x: list[Point], r: int) -> dict[Point, int]:
    if r == 0:
        return {}
    if r == 1:
        vals = [p[0] for p in x]
        return {(1,): min(vals), (-1,): -max(vals)}
    facets: dict[Point, int] = {}
    for sub in _candidate_subsets(x, r):
        base = x[sub[0]]
        diffs = [[x[s][i] - base[i] for i in range(r)] for s in sub[1:]]
        ker = int_kernel(diffs, r)
        if len(ker) != 1:
            continue
        c = primitive(ker[0])
        b = dot(c, base)
        vals = [dot(c, p) for p in x]
        if min(vals) >= b:
            facets[c] = b
        elif max(vals) <= b:
            facets[tuple(-a for a in c)] = -b
    return facets


class LatticePolytope:
    """Convex hull of finitely many lattice points, with its face lattice.

    Faces are identified by frozensets of indices into :attr:`vertices`.
    The empty face (dimension -1) and the polytope itself are included.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(a) for a in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points have different dimensions")
        self.n = n
        origin = pts[0]
        basis = saturated_basis([[p[i] - origin[i] for i in range(n)] for p in pts[1:]], n)
        r = len(basis)
        if r == n:
            origin = tuple([0] * n)
            basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        self.frame = LatticeFrame(origin, basis)
        self.dim = r
        coords = [self.frame.coords(p) for p in pts]
        raw = _hull_facets(coords, r)
        on = {c: frozenset(i for i, p in enumerate(coords) if dot(c, p) == b) for c, b in raw.items()}
        if r == 0:
            vert_idx = [0]
        else:
            vert_idx = [i for i in range(len(pts))
                        if rank([c for c in raw if i in on[c]], r) == r]
        self.vertices: tuple[Point, ...] = tuple(pts[i] for i in vert_idx)
        self._coords: tuple[Point, ...] = tuple(coords[i] for i in vert_idx)
        remap = {old: new for new, old in enumerate(vert_idx)}
        self.facets: tuple[Facet, ...] = tuple(sorted(
            (Facet(frozenset(remap[i] for i in on[c] if i in remap), c, b) for c, b in raw.items()),
            key=lambda f: (sorted(f.vertices), f.normal)))
        self.faces: dict[frozenset[int], int] = self._face_lattice()

    # ---- combinatorics -------------------------------------------------
    def _face_lattice(self) -> dict[frozenset[int], int]:
        full = frozenset(range(len(self.vertices)))
        faces = {full: self.dim, frozenset(): -1}
        frontier = {f.vertices for f in self.facets}
        known = set(frontier)
        while frontier:
            new = set()
            for a in frontier:
                for f in self.facets:
                    x = a & f.vertices
                    if x and x not in known:
                        new.add(x)
            known |= new
            frontier = new
        for s in known:
            faces[s] = self._dim_of(s)
        return faces

    def _dim_of(self, s: frozenset[int]) -> int:
        idx = sorted(s)
        if not idx:
            return -1
        b = self._coords[idx[0]]
        return rank([[self._coords[i][j] - b[j] for j in range(self.dim)] for i in idx[1:]], self.dim)

    def enumerate_faces(self, d: int | None = None) -> list[frozenset[int]]:
        out = [f for f, k in self.faces.items() if d is None or k == d]
        return sorted(out, key=lambda f: (self.faces[f], sorted(f)))

    def face_vertices(self, face: frozenset[int]) -> list[Point]:
        return [self.vertices[i] for i in sorted(face)]

    def face_polytope(self, face: frozenset[int]) -> "LatticePolytope":
        cache = self.__dict__.setdefault("_face_cache", {})
        if face not in cache:
            cache[face] = LatticePolytope(self.face_vertices(face))
        return cache[face]

    def facets_containing(self, face: frozenset[int]) -> list[Facet]:
        return [f for f in self.facets if face <= f.vertices]

    def ambient_normal(self, facet: Facet) -> tuple[Point, int]:
        """Ambient inner normal and offset of a facet (full-dimensional only)."""
        if self.dim != self.n:
            raise ValueError("ambient facet normals need a full-dimensional polytope")
        return facet.normal, facet.offset

    # ---- metric data ---------------------------------------------------
    def contains(self, p: Sequence[int], strict: bool = False) -> bool:
        try:
            c = self.frame.coords(p)
        except ValueError:
            return False
        if self.dim == 0:
            return True
        for f in self.facets:
            v = dot(f.normal, c)
            if v < f.offset or (strict and v == f.offset):
                return False
        return True

    @cached_property
    def _ineq(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        a = np.array([f.normal for f in self.facets], dtype=np.int64).reshape(-1, self.dim)
        b = np.array([f.offset for f in self.facets], dtype=np.int64)
        c = np.array(self._coords, dtype=np.int64).reshape(-1, self.dim)
        return a, b, c.min(axis=0), c.max(axis=0)

    def lattice_points_array(self, k: int = 1, interior: bool = False) -> np.ndarray:
        """Lattice points of ``kP`` (relative interior if ``interior``) as an int array."""
        n = self.n
        origin = np.array(self.frame.origin, dtype=np.int64)
        if k == 0:
            if interior:
                return np.zeros((0, n), dtype=np.int64)
            return np.zeros((1, n), dtype=np.int64)
        if self.dim == 0:
            return (k * origin).reshape(1, n)
        a, b, lo, hi = self._ineq
        lo, hi, rhs = k * lo, k * hi, k * b
        basis = np.array(self.frame.basis, dtype=np.int64)
        chunks = []
        rest = [np.arange(lo[j], hi[j] + 1) for j in range(1, self.dim)]
        for x0 in range(int(lo[0]), int(hi[0]) + 1):
            if rest:
                grid = np.stack(np.meshgrid(*rest, indexing="ij"), axis=-1).reshape(-1, self.dim - 1)
                g = np.concatenate([np.full((grid.shape[0], 1), x0), grid], axis=1)
            else:
                g = np.array([[x0]], dtype=np.int64)
            vals = g @ a.T
            ok = (vals > rhs) if interior else (vals >= rhs)
            g = g[ok.all(axis=1)]
            if g.size:
                chunks.append(g)
        if not chunks:
            return np.zeros((0, n), dtype=np.int64)
        pts = np.concatenate(chunks)
        return pts @ basis + k * origin

    def lattice_points(self, region: str = "full") -> list[Point]:
        """``region`` is ``full``, ``relative-interior`` or ``k-skeleton`` (``1-skeleton`` etc.)."""
        if region == "full":
            arr = self.lattice_points_array(1)
        elif region == "relative-interior":
            arr = self.lattice_points_array(1, interior=True)
        elif region.endswith("-skeleton"):
            return sorted(self.skeleton_points(int(region.split("-")[0])))
        else:
            raise ValueError(f"unknown region {region!r}")
        return sorted(tuple(int(x) for x in row) for row in arr)

    def skeleton_points(self, d: int = 1) -> set[Point]:
        out: set[Point] = set()
        for face, k in self.faces.items():
            if 0 <= k <= d:
                fp = self.face_polytope(face)
                out.update(tuple(int(x) for x in row) for row in fp.lattice_points_array(1))
        return out

    @cached_property
    def normalized_volume(self) -> int:
        """``dim! * vol`` measured in the lattice of the affine span."""
        if self.dim == 0:
            return 1
        if self.dim == 1:
            a, b = self._coords
            return abs(a[0] - b[0])
        v0 = self._coords[0]
        total = 0
        for f in self.facets:
            if 0 in f.vertices:
                continue
            total += (dot(f.normal, v0) - f.offset) * self.face_polytope(f.vertices).normalized_volume
        return total

    def supporting_face(self, u: Sequence[int]) -> tuple[frozenset[int], int]:
        vals = [dot(u, v) for v in self.vertices]
        m = min(vals)
        return frozenset(i for i, x in enumerate(vals) if x == m), m

    def dual_fan(self) -> Fan:
        """Cone of inner facet normals for every nonempty face.

        For a lower-dimensional polytope the cones also contain the lineality
        space orthogonal to the affine span.
        """
        lineality: list[Point] = []
        normals: dict[Facet, Point] = {}
        if self.dim == self.n:
            normals = {f: f.normal for f in self.facets}
        else:
            diffs = [[v[i] - self.vertices[0][i] for i in range(self.n)] for v in self.vertices[1:]]
            orth = int_kernel(diffs, self.n) if diffs else [
                tuple(int(i == j) for j in range(self.n)) for i in range(self.n)]
            for w in orth:
                lineality += [tuple(w), tuple(-x for x in w)]
            for f in self.facets:
                z = self.frame.functional_to_ambient(f.normal)
                den = 1
                for x in z:
                    den = den * x.denominator // gcd(den, x.denominator)
                normals[f] = primitive([int(x * den) for x in z])
        fan = Fan()
        for face in self.faces:
            if not face:
                continue
            gens = tuple(sorted({normals[f] for f in self.facets_containing(face)} | set(lineality)))
            fan.cones[face] = Cone(gens, self.n)
        return fan


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope(points)


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.n != q.n:
        raise ValueError("ambient dimensions differ")
    return LatticePolytope([tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices])


def mixed_volume(polys: Sequence[LatticePolytope | Sequence[Sequence[int]]]) -> int:
    """Normalized mixed volume of ``r`` polytopes in ``Z^r``.

    Inclusion-exclusion over Minkowski sums, scaled so that
    ``mixed_volume([P] * r) == P.normalized_volume`` for full-dimensional ``P``.
    """
    ps = [p if isinstance(p, LatticePolytope) else LatticePolytope(p) for p in polys]
    r = len(ps)
    if r == 0:
        return 1
    if any(p.n != r for p in ps):
        raise ValueError("mixed_volume needs r polytopes in dimension r")
    total = 0
    for size in range(1, r + 1):
        for sub in combinations(range(r), size):
            acc = ps[sub[0]]
            for j in sub[1:]:
                acc = minkowski_sum(acc, ps[j])
            vol = acc.normalized_volume if acc.dim == r else 0
            total += (-1) ** (r - size) * vol
    if total % factorial(r):
        raise ArithmeticError("mixed volume is not integral")
    return total // factorial(r)
