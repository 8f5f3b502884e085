"""Toric g-polynomials, local h-polynomials and weighted Ehrhart data on a subdivision.

Faces and cells are identified by frozensets of their (ambient) vertices, so
the face relation is inclusion of vertex sets.  Univariate polynomials are
coefficient lists indexed by degree; two-variable polynomials are
``{(i, j): c}`` dictionaries standing for ``Σ c u^i v^j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .equivariant_hodge import WeightedPolytope
from .errors import InconsistencyError, PreconditionError
from .lattice_geom import LatticePolytope, Point
from .newton import FaceGeometry, Support, face_geometry, gamma_plus

Poly = list[int]
BiPoly = dict[tuple[int, int], int]
Cell = frozenset[Point]


# ---- polynomial helpers ------------------------------------------------------------


def trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(a: Sequence[int], b: Sequence[int]) -> Poly:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def pmul(a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pscale(a: Sequence[int], c: int) -> Poly:
    return trim([c * x for x in a])


def tminus1_pow(k: int) -> Poly:
    out = [1]
    for _ in range(k):
        out = pmul(out, [-1, 1])
    return out


def reverse(p: Sequence[int], degree: int) -> Poly:
    """``t^degree · p(1/t)``; ``p`` must have degree at most ``degree``."""
    p = trim(p)
    if len(p) > degree + 1:
        raise InconsistencyError("polynomial degree exceeds the reversal degree")
    return trim((p + [0] * (degree + 1 - len(p)))[::-1])


def peval(p: Sequence[int], x: int) -> int:
    return sum(c * x ** i for i, c in enumerate(p))


def bi_add(a: BiPoly, b: BiPoly, c: int = 1) -> BiPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


# ---- face posets ---------------------------------------------------------------------


class PosetCache:
    """Polytopes and face lattices keyed by vertex sets, with memoized toric g-polynomials."""

    def __init__(self):
        self._poly: dict[Cell, LatticePolytope] = {}
        self._faces: dict[Cell, dict[Cell, int]] = {}
        self._g: dict[tuple[Cell, Cell, bool], Poly] = {}

    def polytope(self, cell: Cell) -> LatticePolytope:
        if cell not in self._poly:
            self._poly[cell] = LatticePolytope(sorted(cell))
        return self._poly[cell]

    def dim(self, cell: Cell) -> int:
        return -1 if not cell else self.polytope(cell).dim

    def faces(self, cell: Cell) -> dict[Cell, int]:
        """All faces (including the empty one) of the polytope with these vertices."""
        if cell not in self._faces:
            if not cell:
                self._faces[cell] = {frozenset(): -1}
            else:
                p = self.polytope(cell)
                self._faces[cell] = {frozenset(p.face_vertices(f)): d for f, d in p.faces.items()}
        return self._faces[cell]

    def g(self, lo: Cell, hi: Cell, dual: bool = False) -> Poly:
        """Toric g-polynomial of the interval ``[lo, hi]`` (or of its order dual).

        Coefficients below half the rank come from the defining identity; the
        coefficient at exactly half the rank is taken to be 0 (Stanley's
        normalization), and the full identity is then verified.
        """
        key = (lo, hi, dual)
        if key in self._g:
            return self._g[key]
        faces = self.faces(hi)
        if lo not in faces:
            raise PreconditionError("g-polynomial of a non-comparable pair")
        dlo, dhi = faces[lo], faces[hi]
        rho = dhi - dlo
        if rho == 0:
            self._g[key] = [1]
            return [1]
        between = [(f, d) for f, d in faces.items() if lo <= f]
        rest: Poly = []
        for f, d in between:
            if dual:
                if f == lo:
                    continue
                rest = padd(rest, pmul(tminus1_pow(d - dlo), self.g(f, hi, True)))
            else:
                if f == hi:
                    continue
                rest = padd(rest, pmul(tminus1_pow(dhi - d), self.g(lo, f, False)))
        g = trim([-(rest[i] if i < len(rest) else 0) for i in range((rho + 1) // 2)])
        if reverse(g, rho) != padd(g, rest):
            raise InconsistencyError("toric g recursion is inconsistent on this interval")
        self._g[key] = g
        return g


_DEFAULT_CACHE = PosetCache()


def toric_g(lo: Iterable[Sequence[int]], hi: Iterable[Sequence[int]], dual: bool = False,
            cache: PosetCache | None = None) -> Poly:
    """g-polynomial of ``[lo, hi]`` for faces given by vertex lists (``lo`` may be empty)."""
    c = cache or _DEFAULT_CACHE
    return c.g(frozenset(tuple(v) for v in lo), frozenset(tuple(v) for v in hi), dual)


# ---- subdivision built from a Newton polyhedron ------------------------------------------


@dataclass
class PolySubdivision:
    """The subdivision ``S_ν`` of ``K = conv(0 ∪ Newton boundary)`` and the function ν.

    ``cells`` maps vertex sets to dimensions (the empty cell included).
    ``facets`` are the compact facets ``(u, d)`` of ``Γ₊``; on ``K`` the class
    of ``mν(v/m)`` is ``-min <u, v>/d`` where that minimum is below ``m`` and
    0 otherwise.
    """

    n: int
    base: LatticePolytope
    cells: dict[Cell, int]
    faces: tuple[FaceGeometry, ...]
    facets: tuple[tuple[Point, int], ...]
    cache: PosetCache = field(default_factory=PosetCache)

    def __post_init__(self):
        self._k_faces = {frozenset(self.base.face_vertices(f)): d for f, d in self.base.faces.items()}
        self._weights: dict[Cell, tuple[Fraction, ...]] = {}
        zero = tuple([0] * self.n)
        by_delta = {frozenset((zero,) + fg.vertices): fg for fg in self.faces}
        for cell in self.cells:
            fg = next((by_delta[c] for c in by_delta if cell <= c), None)
            if fg is None:
                self._weights[cell] = tuple([Fraction(0)] * self.n)
            else:
                self._weights[cell] = tuple(-x / fg.distance for x in fg.level)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def k_faces(self) -> dict[Cell, int]:
        return self._k_faces

    def sigma(self, cell: Cell) -> Cell:
        """Smallest face of ``K`` containing ``cell``."""
        if not cell:
            return frozenset()
        containing = [(d, q) for q, d in self._k_faces.items() if q and self._holds(q, cell)]
        return min(containing, key=lambda t: t[0])[1]

    def _holds(self, q: Cell, cell: Cell) -> bool:
        poly = self.cache.polytope(q)
        return all(poly.contains(v) for v in cell)

    def cells_in(self, q: Cell) -> list[Cell]:
        if not q:
            return [frozenset()]
        return [c for c in self.cells if self._holds(q, c)]

    def weighted(self, cell: Cell) -> WeightedPolytope:
        cache = self.__dict__.setdefault("_weighted", {})
        if cell not in cache:
            cache[cell] = WeightedPolytope(self.cache.polytope(cell), self._weights[cell])
        return cache[cell]

    def hstar(self, cell: Cell, lam) -> Poly:
        """``h*_λ`` of a cell with the restriction of ν, memoized."""
        lam = Fraction(lam) % 1
        cache = self.__dict__.setdefault("_hstar", {})
        key = (cell, lam)
        if key not in cache:
            cache[key] = weighted_hstar(self.weighted(cell) if cell else None, lam)
        return cache[key]

    def nu(self, x: Sequence) -> Fraction:
        m = min(sum(Fraction(a) * b for a, b in zip(u, x)) / d for u, d in self.facets)
        return max(Fraction(0), 1 - m)

    def maximal_cells(self) -> list[Cell]:
        return [c for c, d in self.cells.items() if d == self.dim]


def subdivision_from_newton(support: Support) -> PolySubdivision:
    """``S_ν`` as the lower hull of ``(0, 1)`` and ``(w, 0)`` over vertices ``w`` of the Newton boundary."""
    if not support.is_convenient():
        raise PreconditionError("the subdivision needs a convenient support")
    n = support.n
    zero = tuple([0] * n)
    if zero in support.exponents:
        raise PreconditionError("f(0) != 0: the origin is in the support")
    gp = gamma_plus(support)
    faces = tuple(face_geometry(v) for v in gp.compact_faces())
    verts = sorted({v for fg in faces for v in fg.vertices})
    base = LatticePolytope([zero] + verts)
    # The cap at height 2 makes the lifted polytope full-dimensional.
    lifted = LatticePolytope([zero + (1,)] + [v + (0,) for v in verts]
                             + [v + (2,) for v in [zero] + verts])
    maximal = []
    for f in lifted.facets:
        if f.normal[-1] > 0:
            maximal.append(frozenset(p[:-1] for p in lifted.face_vertices(f.vertices)))
    cache = PosetCache()
    cells: dict[Cell, int] = {frozenset(): -1}
    for m in maximal:
        cells.update(cache.faces(m))
    for fg in faces:
        if frozenset((zero,) + fg.vertices) not in cells:
            raise InconsistencyError("a cone Δ_γ over a compact face is not a cell of the subdivision")
    if sum(cache.polytope(m).normalized_volume for m in maximal) != base.normalized_volume:
        raise InconsistencyError("the cells do not subdivide K")
    facets = tuple(gp.compact_facet_normals())
    return PolySubdivision(n, base, cells, faces, facets, cache)


# ---- link and local h -----------------------------------------------------------------------


def _link_rhs(sub: PolySubdivision, cell: Cell, q: Cell, dim_q: int) -> Poly:
    out: Poly = []
    for c in sub.cells_in(q):
        if cell <= c:
            out = padd(out, pmul(sub.cache.g(cell, c), tminus1_pow(dim_q - sub.cells[c])))
    return out


def link_h(sub: PolySubdivision, cell: Cell, q: Cell | None = None) -> Poly:
    """h-polynomial of the link of ``cell`` in ``S`` restricted to the face ``q`` of ``K``."""
    if cell not in sub.cells:
        raise PreconditionError("not a cell of the subdivision")
    q = frozenset(sub.base.vertices) if q is None else q
    dim_q = sub.k_faces[q]
    degree = dim_q - sub.cells[cell]
    return reverse(_link_rhs(sub, cell, q, dim_q), degree)


def local_h(sub: PolySubdivision, cell: Cell) -> Poly:
    """Local h-polynomial ``l_K(S, F; t)``; its palindromic symmetry is checked."""
    cache = sub.__dict__.setdefault("_local_h", {})
    if cell in cache:
        return cache[cell]
    top = frozenset(sub.base.vertices)
    dim_p = sub.dim
    s = sub.sigma(cell)
    out: Poly = []
    for q, dq in sub.k_faces.items():
        if not s <= q:
            continue
        term = pmul(link_h(sub, cell, q), sub.cache.g(q, top, dual=True))
        out = padd(out, pscale(term, (-1) ** (dim_p - dq)))
    degree = dim_p - sub.cells[cell]
    if reverse(out, degree) != out:
        raise InconsistencyError("local h-polynomial is not symmetric")
    cache[cell] = out
    return out


# ---- weighted h* and l* -----------------------------------------------------------------------


def _class_index(w: WeightedPolytope, lam) -> int | None:
    a = Fraction(lam) % 1
    return None if (a * w.den).denominator != 1 else int(a * w.den)


def weighted_hstar(w: WeightedPolytope | None, lam) -> Poly:
    """``h*_λ`` from weighted Ehrhart counts of ``mP``, ``m = 0..dim P + 1``."""
    lam = Fraction(lam) % 1
    if w is None:
        return [1] if lam == 0 else []
    d = w.dim
    i = _class_index(w, lam)
    if i is None:
        return []
    counts = [int(w.count_histograms(m)[0][i]) for m in range(d + 2)]
    return _hstar_from_counts(counts, d)


def _hstar_from_counts(counts: Sequence[int], d: int) -> Poly:
    h = list(counts)
    for _ in range(d + 1):
        h = pmul(h, [1, -1])
    h = h[:d + 2] + [0] * (d + 2 - len(h))
    if h[d + 1]:
        raise InconsistencyError("weighted h* has a nonzero coefficient above the dimension")
    return trim(h[:d + 1])


def weighted_lstar(sub: PolySubdivision, cell: Cell, lam) -> Poly:
    """``l*_λ(F, ν|_F; u)`` as an alternating face sum."""
    lam = Fraction(lam) % 1
    if not cell:
        return [1] if lam == 0 else []
    key = (cell, lam)
    cache = sub.__dict__.setdefault("_lstar", {})
    if key in cache:
        return cache[key]
    dim_f = sub.cells[cell]
    out: Poly = []
    for q, dq in sub.cache.faces(cell).items():
        h = sub.hstar(q, lam)
        if not h:
            continue
        out = padd(out, pscale(pmul(h, sub.cache.g(q, cell, dual=True)), (-1) ** (dim_f - dq)))
    cache[key] = out
    return out


def _mixed(sub: PolySubdivision, lam, second) -> BiPoly:
    out: BiPoly = {}
    for cell, d in sub.cells.items():
        ls = weighted_lstar(sub, cell, lam)
        if not ls:
            continue
        other = second(cell)
        if not other:
            continue
        part: BiPoly = {}
        for i, c in enumerate(ls):
            if c:
                if i > d + 1:
                    raise InconsistencyError("l* has degree above dim + 1")
                for j, e in enumerate(other):
                    if e:
                        key = (i + j, d + 1 - i + j)
                        part[key] = part.get(key, 0) + c * e
        out = bi_add(out, part)
    return out


def mixed_hstar(sub: PolySubdivision, lam) -> BiPoly:
    """``h*_λ(K, ν; u, v) = Σ_F v^{dim F + 1} l*_λ(F; u/v) h(Lk(F); uv)``."""
    return _mixed(sub, lam, lambda c: link_h(sub, c))


def mixed_lstar(sub: PolySubdivision, lam) -> BiPoly:
    """``l*_λ(K, ν; u, v) = Σ_F v^{dim F + 1} l*_λ(F; u/v) l_K(S, F; uv)``."""
    return _mixed(sub, lam, lambda c: local_h(sub, c))


def direct_hstar_on_base(sub: PolySubdivision, lam) -> Poly:
    """``h*_λ(K, ν; u)`` counted directly on ``mK`` with the piecewise weight."""
    lam = Fraction(lam) % 1
    d = sub.dim
    counts = []
    for m in range(d + 2):
        pts = sub.base.lattice_points_array(m)
        c = 0
        for row in pts:
            v = tuple(int(x) for x in row)
            if m == 0:
                cls = Fraction(0)
            else:
                cls = (m * sub.nu(tuple(Fraction(x, m) for x in v))) % 1
            c += cls == lam
        counts.append(c)
    return _hstar_from_counts(counts, d)


def equivariant_E(support: Support, lam, sub: PolySubdivision | None = None) -> BiPoly:
    """``E_λ(F_0; u, v)`` for ``λ != 1`` from ``uv·E_λ = (-1)^{n-1} l*_λ(K, ν; u, v)``."""
    lam = Fraction(lam) % 1
    if lam == 0:
        raise PreconditionError("the mixed l* formula covers λ != 1 only")
    sub = sub or subdivision_from_newton(support)
    n = support.n
    l = mixed_lstar(sub, lam)
    out: BiPoly = {}
    for (i, j), c in l.items():
        if i < 1 or j < 1:
            raise InconsistencyError("l*_λ(K, ν; u, v) is not divisible by uv")
        out[(i - 1, j - 1)] = (-1) ** (n - 1) * c
    return out


# ---- Jordan blocks -----------------------------------------------------------------------------


def staircase(l: Sequence[int], degree: int) -> Poly:
    """Coefficients ``l̃_i`` with ``l = Σ l̃_i (t^i + … + t^{degree-i})``; unimodality is checked."""
    a = list(l) + [0] * (degree + 1 - len(l))
    if a != a[::-1]:
        raise InconsistencyError("local h-polynomial is not symmetric")
    out = []
    for i in range(degree // 2 + 1):
        c = a[i] - (a[i - 1] if i else 0)
        if c < 0:
            raise InconsistencyError("local h-polynomial is not unimodal")
        out.append(c)
    rebuilt = [0] * (degree + 1)
    for i, c in enumerate(out):
        for j in range(i, degree - i + 1):
            rebuilt[j] += c
    if rebuilt != a:
        raise InconsistencyError("staircase decomposition does not reproduce the polynomial")
    return trim(out)


def jordan_full(support: Support, lambdas: Iterable | None = None,
                sub: PolySubdivision | None = None) -> dict[Fraction, dict[int, int]]:
    """Exact-size Jordan block counts for every ``λ != 1`` of the local monodromy."""
    sub = sub or subdivision_from_newton(support)
    n = support.n
    zero = tuple([0] * n)
    if lambdas is None:
        lambdas = sorted({Fraction(a, fg.distance) for fg in sub.faces for a in range(1, fg.distance)})
    out: dict[Fraction, dict[int, int]] = {}
    for lam in lambdas:
        lam = Fraction(lam) % 1
        if lam == 0:
            raise PreconditionError("the Jordan formula covers λ != 1 only")
        poly: dict[int, int] = {}
        for fg in sub.faces:
            cell = frozenset((zero,) + fg.vertices)
            val = peval(weighted_lstar(sub, cell, lam), 1)
            if not val:
                continue
            dim_delta = fg.dim + 1
            tilde = staircase(local_h(sub, cell), n - dim_delta)
            for i, c in enumerate(tilde):
                e = dim_delta + 1 + 2 * i
                poly[e] = poly.get(e, 0) + val * c
        counts = {}
        for e, c in poly.items():
            size = n - (e - 2)
            if size < 1 or c < 0:
                raise InconsistencyError(f"impossible Jordan data at u^{e} for class {lam}")
            if c:
                counts[size] = c
        out[lam] = dict(sorted(counts.items()))
    return out
