"""Monodromy zeta functions, Euler characteristics and Milnor numbers from Newton data.

A zeta function is kept in the factored form ``∏ (1 - t^d)^{e_d}``.  Every
formula here is a sum over nonempty coordinate subsets ``S`` of facet
contributions ``(d, ±K)`` where ``K`` is a normalized volume or a sum of
mixed volumes measured in the lattice ``u^⊥ ∩ Z^S``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import InconsistencyError, PreconditionError
from .lattice_geom import LatticeFrame, LatticePolytope, Point, dot, int_kernel, mixed_volume
from .newton import (
    LOCAL,
    Support,
    coordinate_subsets,
    gamma_infinity,
    gamma_plus,
    minimal_points,
    plus_facets,
)


@dataclass(frozen=True)
class ZetaFunction:
    """``∏_d (1 - t^d)^{e_d}`` with zero exponents removed."""

    factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_table(cls, table: Mapping[int, int]) -> "ZetaFunction":
        return cls(tuple(sorted((int(d), int(e)) for d, e in table.items() if e)))

    @property
    def table(self) -> dict[int, int]:
        return dict(self.factors)

    def __mul__(self, other: "ZetaFunction") -> "ZetaFunction":
        t = Counter(self.table)
        t.update(other.table)
        return ZetaFunction.from_table(t)

    @property
    def degree(self) -> int:
        """Degree of the rational function, i.e. the Euler characteristic it encodes."""
        return sum(d * e for d, e in self.factors)

    def is_one(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "".join(f"(1-t^{d})^{e}" if e != 1 else f"(1-t^{d})" for d, e in self.factors)


@dataclass(frozen=True)
class CharPoly:
    """Eigenvalue multiplicities ``λ -> m``, with ``λ = a/d`` meaning ``exp(2πi a/d)``."""

    multiplicities: tuple[tuple[Fraction, int], ...] = ()

    @property
    def table(self) -> dict[Fraction, int]:
        return dict(self.multiplicities)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.multiplicities)

    def __getitem__(self, lam) -> int:
        return self.table.get(Fraction(lam) % 1, 0)


def cyclotomic_multiset(exponents: Mapping[int, int]) -> dict[Fraction, int]:
    """Roots of ``∏ (t^d - 1)^{m_d}`` with multiplicity (negative when the product is not a polynomial)."""
    out: Counter = Counter()
    for d, m in exponents.items():
        for a in range(d):
            out[Fraction(a, d)] += m
    return {k: v for k, v in out.items() if v}


# ---- facet contributions ---------------------------------------------


def _hyperplane_coords(pieces: Sequence[Sequence[Point]], u: Sequence[int]) -> list[list[Point]]:
    """Translate each piece to the origin and write it in a basis of ``u^⊥ ∩ Z^{len(u)}``."""
    basis = int_kernel([list(u)], len(u))
    frame = LatticeFrame(tuple([0] * len(u)), basis)
    out = []
    for piece in pieces:
        base = piece[0]
        out.append([frame.coords(tuple(a - b for a, b in zip(p, base))) for p in piece])
    return out


def _mixed_sum(pieces: Sequence[Sequence[Point]], u: Sequence[int], counts: Iterable[Sequence[int]]) -> int:
    """``Σ_α MV(piece_1^{α_1}, ..., piece_m^{α_m})`` inside ``u^⊥``."""
    proj = _hyperplane_coords(pieces, u)
    polys = [LatticePolytope(p) for p in proj]
    total = 0
    for alpha in counts:
        args = [polys[q] for q, a in enumerate(alpha) for _ in range(a)]
        total += mixed_volume(args)
    return total


def _compositions(total: int, lows: Sequence[int]) -> list[tuple[int, ...]]:
    """Tuples ``α`` with ``α_q >= lows[q]`` summing to ``total``."""
    return [a for a in product(*(range(lo, total + 1) for lo in lows)) if sum(a) == total]


def _supporting(points: Sequence[Point], u: Sequence[int]) -> tuple[list[Point], int]:
    vals = [dot(u, p) for p in points]
    m = min(vals)
    return sorted(p for p, v in zip(points, vals) if v == m), m


def _sum_points(groups: Sequence[Sequence[Point]]) -> list[Point]:
    acc: set[Point] = {tuple([0] * len(groups[0][0]))}
    for g in groups:
        acc = {tuple(a + b for a, b in zip(x, y)) for x in acc for y in g}
    return sorted(acc)


@dataclass(frozen=True)
class Contribution:
    """One factor ``(1 - t^d)^{sign * K}`` together with where it came from."""

    subset: tuple[int, ...]
    normal: Point
    distance: int
    k: int
    sign: int


def _local_contributions(groups: Sequence[Sequence[Point]], s: Sequence[int],
                         lows: Sequence[int], sign: int, distance_from: int) -> list[Contribution]:
    """Compact facets of ``Σ Γ₊(group)`` in ``R^S`` with their mixed-volume weights."""
    out = []
    dim = len(s)
    for f in plus_facets(_sum_points(groups), dim, compact_only=True):
        u = f.normal
        faces = [_supporting(g, u) for g in groups]
        d = faces[distance_from][1]
        k = _mixed_sum([fc[0] for fc in faces], u, _compositions(dim - 1, lows))
        if k:
            out.append(Contribution(tuple(s), u, d, k, sign))
    return out


def _infinity_contributions(groups: Sequence[Sequence[Point]], s: Sequence[int],
                            lows: Sequence[int], sign: int, distance_from: int) -> list[Contribution]:
    """Facets at infinity of ``Σ conv(0 ∪ group)`` in ``R^S`` with mixed-volume weights."""
    dim = len(s)
    zero = tuple([0] * dim)
    full = [[zero] + list(g) for g in groups]
    total = LatticePolytope(_sum_points(full))
    if total.dim < dim:
        return []
    out = []
    for f in total.facets:
        if f.offset >= 0:
            continue
        u = f.normal
        faces = [_supporting(g, u) for g in full]
        d = -faces[distance_from][1]
        k = _mixed_sum([fc[0] for fc in faces], u, _compositions(dim - 1, lows))
        if k:
            out.append(Contribution(tuple(s), u, d, k, sign))
    return out


def _assemble(contribs: Iterable[Contribution]) -> ZetaFunction:
    t: Counter = Counter()
    for c in contribs:
        t[c.distance] += c.sign * c.k
    return ZetaFunction.from_table(t)


# ---- hypersurfaces -----------------------------------------------------


def _check_local(support: Support) -> None:
    if tuple([0] * support.n) in support.exponents:
        raise PreconditionError("f(0) != 0: the origin is in the support")


def zeta_local(support: Support) -> ZetaFunction:
    """Local monodromy zeta function at the origin (assumes non-degeneracy at 0)."""
    _check_local(support)
    gp = gamma_plus(support)
    t: Counter = Counter()
    for s in coordinate_subsets(support.n):
        for bf in gp.boundary_facets(s):
            t[bf.distance] += (-1) ** (len(s) - 1) * bf.volume
    return ZetaFunction.from_table(t)


def zeta_infinity(support: Support) -> ZetaFunction:
    """Monodromy zeta function at infinity (assumes non-degeneracy at infinity)."""
    gi = gamma_infinity(support)
    t: Counter = Counter()
    for s in coordinate_subsets(support.n):
        for bf in gi.boundary_facets(s):
            t[bf.distance] += (-1) ** (len(s) - 1) * bf.volume
    return ZetaFunction.from_table(t)


@dataclass(frozen=True)
class MilnorData:
    chi: int
    mu: int | None
    e_values: tuple[tuple[tuple[int, ...], int], ...] = field(default=())

    @property
    def isolated(self) -> bool:
        return self.mu is not None


def _kouchnirenko(support: Support, kind: str) -> MilnorData:
    g = gamma_plus(support) if kind == LOCAL else gamma_infinity(support)
    es = {(): 1}
    for s in coordinate_subsets(support.n):
        es[s] = sum(bf.distance * bf.volume for bf in g.boundary_facets(s))
    chi = sum((-1) ** (len(s) - 1) * e for s, e in es.items() if s)
    mu = None
    if support.is_convenient():
        mu = sum((-1) ** (support.n - len(s)) * e for s, e in es.items())
    return MilnorData(chi, mu, tuple(sorted(es.items())))


def milnor_data(support: Support) -> MilnorData:
    """Euler characteristic of the local Milnor fiber and, for convenient supports, μ."""
    _check_local(support)
    return _kouchnirenko(support, LOCAL)


def milnor_data_infinity(support: Support) -> MilnorData:
    """Euler characteristic of the generic fiber and, for convenient supports, the global μ."""
    return _kouchnirenko(support, "infinity")


def milnor_number(support: Support) -> int:
    data = milnor_data(support)
    if data.mu is None:
        raise PreconditionError("μ needs a convenient support (isolated singularity)")
    return data.mu


# ---- complete intersections and meromorphic functions ---------------------


def _restricted_groups(supports: Sequence[Support], s: Sequence[int]) -> list[list[Point] | None]:
    return [minimal_points(sp.restricted(s)) or None for sp in supports]


def local_ci_contributions(supports: Sequence[Support]) -> list[Contribution]:
    k = len(supports)
    n = supports[0].n
    if any(sp.n != n for sp in supports):
        raise PreconditionError("supports live in different dimensions")
    if k > n:
        raise PreconditionError("a complete intersection needs k <= n")
    for sp in supports:
        _check_local(sp)
    out = []
    for s in coordinate_subsets(n):
        groups = _restricted_groups(supports, s)
        if groups[-1] is None:
            continue
        used = [g for g in groups[:-1] if g is not None] + [groups[-1]]
        m = len(used)
        if m > len(s):
            continue
        lows = [1] * (m - 1) + [0]
        out += _local_contributions(used, s, lows, (-1) ** (len(s) - m), m - 1)
    return out


def zeta_local_ci(supports: Sequence[Support]) -> ZetaFunction:
    """Zeta of ``f_k`` on ``{f_1 = … = f_{k-1} = 0}`` at the origin (non-degenerate tuple assumed)."""
    return _assemble(local_ci_contributions(supports))


def infinity_ci_contributions(supports: Sequence[Support]) -> list[Contribution]:
    k = len(supports)
    n = supports[0].n
    if any(sp.n != n for sp in supports):
        raise PreconditionError("supports live in different dimensions")
    if not all(sp.is_convenient() for sp in supports):
        raise PreconditionError("the global complete-intersection formula needs convenient supports")
    out = []
    for s in coordinate_subsets(n):
        if len(s) < k:
            continue
        groups = [sp.restricted(s) for sp in supports]
        lows = [1] * (k - 1) + [0]
        out += _infinity_contributions(groups, s, lows, (-1) ** (len(s) - k), k - 1)
    return out


def zeta_infinity_ci(supports: Sequence[Support]) -> ZetaFunction:
    """Zeta at infinity of ``f_k`` restricted to ``{f_1 = … = f_{k-1} = 0}``."""
    if len(supports) > supports[0].n:
        return ZetaFunction()
    return _assemble(infinity_ci_contributions(supports))


def mero_contributions(p: Support, q: Support) -> list[Contribution]:
    if p.n != q.n:
        raise PreconditionError("supports live in different dimensions")
    _check_local(p)
    out = []
    for s in coordinate_subsets(p.n):
        gp, gq = (minimal_points(sp.restricted(s)) for sp in (p, q))
        if not gp or not gq:
            continue
        dim = len(s)
        for f in plus_facets(_sum_points([gp, gq]), dim, compact_only=True):
            u = f.normal
            (fp, dp), (fq, dq) = _supporting(gp, u), _supporting(gq, u)
            d = dp - dq
            if d <= 0:
                continue
            counts = [(j, dim - 1 - j) for j in range(dim)]
            k = _mixed_sum([fp, fq], u, counts)
            if k:
                out.append(Contribution(tuple(s), u, d, k, (-1) ** (dim - 1)))
    return out


def zeta_mero(p: Support, q: Support) -> ZetaFunction:
    """Zeta function of the meromorphic germ ``P/Q`` at the origin (non-degenerate pair assumed)."""
    return _assemble(mero_contributions(p, q))


# ---- characteristic polynomials -------------------------------------------

CONTEXTS = ("local-isolated", "infinity-tame", "meromorphic")


def charpoly_and_multiplicity(zeta: ZetaFunction, n: int, context: str = "local-isolated") -> CharPoly:
    """Eigenvalue multiplicities of the middle-degree monodromy.

    Uses ``ζ = (1 - t) · det(id - tΦ_{n-1})^{(-1)^{n-1}}``, valid when the
    cohomology is concentrated in degrees 0 and ``n - 1``.  In the
    meromorphic context only ``λ != 1`` is reported.
    """
    if context not in CONTEXTS:
        raise PreconditionError(f"unknown context {context!r}")
    sign = (-1) ** (n - 1)
    lams = {Fraction(a, d) for d, _ in zeta.factors for a in range(d)} | {Fraction(0)}
    out = {}
    for lam in sorted(lams):
        if context == "meromorphic" and lam == 0:
            continue
        s = sum(e for d, e in zeta.factors if (lam * d).denominator == 1)
        mult = sign * (s - (1 if lam == 0 and context != "meromorphic" else 0))
        if mult < 0:
            raise InconsistencyError(f"negative multiplicity {mult} for eigenvalue class {lam}")
        if mult:
            out[lam] = mult
    return CharPoly(tuple(sorted(out.items())))
