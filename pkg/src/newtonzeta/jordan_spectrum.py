"""Hodge realizations of motivic Milnor fibers, Jordan blocks and the spectrum at infinity.

Tables are assembled face by face from :mod:`equivariant_hodge`.  The
eigenvalue convention differs between the two settings: at infinity a
lattice point ``v`` of ``Δ_γ`` carries ``ζ_d^{height(v)}`` and locally it
carries ``ζ_d^{-height(v)}``.  In class form these are ``-<z, v>/d`` and
``+<z, v>/d`` where ``<z, ·> = d`` on ``γ``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Sequence

from .equivariant_hodge import (
    UNDETERMINED,
    EHodgeTable,
    Value,
    WeightedPolytope,
    _add,
    e_table,
    primality,
    pseudo_prime_antidiagonal,
    twist,
)
from .errors import InconsistencyError, PreconditionError
from .lattice_geom import LatticePolytope, Point, content
from .newton import FaceGeometry, Support, face_geometry, gamma_infinity, gamma_plus

LOCAL = "local"
INFINITY = "infinity"


@dataclass
class JordanTable:
    """Exact-size block counts ``(size, λ) -> count``; zero counts are omitted."""

    counts: dict[tuple[int, Fraction], Value] = field(default_factory=dict)

    def get(self, size: int, lam) -> Value:
        return self.counts.get((size, Fraction(lam) % 1), 0)

    def for_lambda(self, lam) -> dict[int, Value]:
        lam = Fraction(lam) % 1
        return {s: c for (s, l), c in sorted(self.counts.items()) if l == lam}

    def lambdas(self) -> list[Fraction]:
        return sorted({l for _, l in self.counts})

    def total(self, lam) -> Value:
        acc: Value = 0
        for s, c in self.for_lambda(lam).items():
            acc = _add(acc, UNDETERMINED if c is UNDETERMINED else s * c)
        return acc


@dataclass
class Spectrum:
    """Puiseux polynomial ``Σ c_β t^β`` with rational exponents."""

    terms: dict[Fraction, int] = field(default_factory=dict)

    def items(self) -> list[tuple[Fraction, int]]:
        return sorted((e, c) for e, c in self.terms.items() if c)

    def support(self) -> list[Fraction]:
        return [e for e, _ in self.items()]

    def is_symmetric(self, n: int) -> bool:
        t = dict(self.items())
        return all(t.get(n - e, 0) == c for e, c in t.items())


def _nz(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


# ---- face data ------------------------------------------------------------------


def _require_convenient(support: Support) -> None:
    if not support.is_convenient():
        raise PreconditionError("this formula needs a convenient support")


def infinity_faces(support: Support) -> list[FaceGeometry]:
    return [face_geometry(v) for v in gamma_infinity(support).faces_at_infinity()]


def compact_faces(support: Support) -> list[FaceGeometry]:
    if tuple([0] * support.n) in support.exponents:
        raise PreconditionError("f(0) != 0: the origin is in the support")
    return [face_geometry(v) for v in gamma_plus(support).compact_faces()]


def face_weight(fg: FaceGeometry, context: str) -> tuple[Fraction, ...]:
    sign = -1 if context == INFINITY else 1
    return tuple(sign * x / fg.distance for x in fg.level)


def weighted_delta(fg: FaceGeometry, context: str) -> WeightedPolytope:
    return WeightedPolytope(fg.delta, face_weight(fg, context))


# ---- assembly -------------------------------------------------------------------


def assemble_infinity(support: Support, mode: str = "auto") -> EHodgeTable:
    """``Σ_γ (1 - L)^{m_γ} [Z*_{Δ_γ}]`` over faces at infinity."""
    _require_convenient(support)
    n = support.n
    total = EHodgeTable(n)
    for fg in infinity_faces(support):
        total = total + twist(e_table(weighted_delta(fg, INFINITY), mode=mode), fg.m)
    total.n = n
    return total


@dataclass
class LocalAssembly:
    """The two sums of the local formula kept apart, and their total."""

    first: EHodgeTable
    second: EHodgeTable

    @property
    def total(self) -> EHodgeTable:
        t = self.first + self.second
        t.n = self.first.n
        return t


def assemble_local_parts(support: Support, mode: str = "auto") -> LocalAssembly:
    _require_convenient(support)
    n = support.n
    first, second = EHodgeTable(n), EHodgeTable(n)
    for fg in compact_faces(support):
        first = first + twist(e_table(weighted_delta(fg, LOCAL), mode=mode), fg.m)
        if fg.dim >= 1:
            own = WeightedPolytope(LatticePolytope(fg.vertices))
            second = second + twist(e_table(own, mode=mode), fg.m + 1)
    first.n = second.n = n
    return LocalAssembly(first, second)


def assemble_local(support: Support, mode: str = "auto") -> EHodgeTable:
    """Hodge realization of the local motivic Milnor fiber at the origin."""
    return assemble_local_parts(support, mode).total


# ---- Jordan blocks from tables ----------------------------------------------------


def _window_sum(table: EHodgeTable, lam: Fraction, rs: Iterable[int]) -> Value:
    acc: Value = 0
    for r in rs:
        acc = _add(acc, table.antidiagonal(r, lam))
    return acc


def _differences(at_least: dict[int, Value], top: int, lam: Fraction) -> dict[int, Value]:
    out: dict[int, Value] = {}
    for k in range(1, top + 1):
        a, b = at_least[k], at_least[k + 1]
        if a is UNDETERMINED or b is UNDETERMINED:
            out[k] = UNDETERMINED
            continue
        c = a - b
        if c < 0:
            raise InconsistencyError(f"negative number of size-{k} blocks for class {lam}")
        out[k] = c
    return out


def at_least_counts(table: EHodgeTable, n: int, lam, context: str,
                    window: str = "default") -> dict[int, Value]:
    """Signed anti-diagonal sums giving the number of blocks of size ``>= k``.

    ``window='low'`` selects the alternative ``λ = 1`` window
    ``{n-2-k, n-1-k}`` (used for the first local sum alone).
    """
    lam = Fraction(lam) % 1
    sign = (-1) ** (n - 1)
    out = {}
    for k in range(1, n + 2):
        if lam != 0:
            rs = (n - 2 + k, n - 1 + k)
        elif context == INFINITY or window == "low":
            rs = (n - 2 - k, n - 1 - k)
        else:
            rs = (n - 1 + k, n + k)
        v = _window_sum(table, lam, [r for r in rs if r >= 0])
        out[k] = v if v is UNDETERMINED else sign * v
    return out


def jordan_blocks(table: EHodgeTable, n: int, context: str, lambdas: Iterable | None = None) -> JordanTable:
    """Exact-size Jordan block counts for the middle-degree monodromy."""
    if context not in (LOCAL, INFINITY):
        raise PreconditionError(f"unknown context {context!r}")
    lams = sorted({Fraction(l) % 1 for l in (lambdas if lambdas is not None else table.lambdas())})
    out = JordanTable()
    for lam in lams:
        top = n if lam != 0 else n - 1
        al = at_least_counts(table, n, lam, context)
        if al.get(top + 1, 0) not in (0, UNDETERMINED):
            raise InconsistencyError(f"a block larger than {top} for class {lam}")
        for k, c in _differences(al, max(top, 0), lam).items():
            if c is UNDETERMINED or c:
                out.counts[(k, lam)] = c
    return out


def local_eigen1_low_window(parts: LocalAssembly, n: int) -> JordanTable:
    """``λ = 1`` block counts from the first local sum alone (the alternative window)."""
    out = JordanTable()
    al = at_least_counts(parts.first, n, 0, LOCAL, window="low")
    for k, c in _differences(al, max(n - 1, 0), Fraction(0)).items():
        if c is UNDETERMINED or c:
            out.counts[(k, Fraction(0))] = c
    return out


def consistency_identity_holds(parts: LocalAssembly, n: int) -> bool:
    """``first^{p,q}_1 = (first + second)^{p+1,q+1}_1`` for ``0 <= p, q <= n-2``."""
    total = parts.total
    for p in range(n - 1):
        for q in range(n - 1):
            a, b = parts.first.get(p, q, 0), total.get(p + 1, q + 1, 0)
            if a is UNDETERMINED or b is UNDETERMINED:
                continue
            if a != b:
                return False
    return True


def check_symmetry(table: EHodgeTable, n: int, context: str) -> list[str]:
    """Violations of the weight symmetry of the assembled table (empty when it holds)."""
    bad = []
    for (p, q, lam), v in table.entries.items():
        if v is UNDETERMINED:
            continue
        if lam != 0:
            if not (0 <= p <= n - 1 and 0 <= q <= n - 1):
                bad.append(f"entry {(p, q, lam)} outside the square")
            elif table.get(n - 1 - q, n - 1 - p, lam) != v:
                bad.append(f"asymmetric entry {(p, q, lam)}")
        elif context == INFINITY:
            if (p, q) == (n - 1, n - 1):
                continue
            if not (0 <= p <= n - 2 and 0 <= q <= n - 2):
                bad.append(f"entry {(p, q, lam)} outside the square")
            elif table.get(n - 2 - q, n - 2 - p, lam) != v:
                bad.append(f"asymmetric entry {(p, q, lam)}")
        else:
            if (p, q) == (0, 0):
                continue
            if not (1 <= p <= n - 1 and 1 <= q <= n - 1):
                bad.append(f"entry {(p, q, lam)} outside the square")
            elif table.get(n - q, n - p, lam) != v:
                bad.append(f"asymmetric entry {(p, q, lam)}")
    corner = (n - 1, n - 1) if context == INFINITY else (0, 0)
    if table.get(*corner, 0) != 1:
        bad.append(f"e^{corner}_1 is {table.get(*corner, 0)}, expected 1")
    return bad


# ---- closed formulas for the largest blocks ---------------------------------------------


def _faces(support: Support, context: str) -> list[FaceGeometry]:
    _require_convenient(support)
    return infinity_faces(support) if context == INFINITY else compact_faces(support)


def relevant_lambdas(support: Support, context: str) -> list[Fraction]:
    """Classes ``a/d != 0`` for the lattice distances ``d`` of all relevant faces."""
    out = set()
    for fg in _faces(support, context):
        for a in range(1, fg.distance):
            out.add(Fraction(a, fg.distance))
    return sorted(out)


def jordan_top_sizes(support: Support, context: str, lambdas: Iterable | None = None) -> JordanTable:
    """Counts of blocks of sizes ``n`` and ``n - 1`` for ``λ != 1`` from vertices and edges."""
    n = support.n
    faces = _faces(support, context)
    lams = sorted({Fraction(l) % 1 for l in (lambdas if lambdas is not None else relevant_lambdas(support, context))})
    out = JordanTable()
    for lam in lams:
        if lam == 0:
            raise PreconditionError("the closed formulas for the largest blocks need λ != 1")
        top = 0
        for fg in faces:
            if fg.dim == 0 and fg.interior and (lam * content(fg.vertices[0])).denominator == 1:
                top += 1
        if top:
            out.counts[(n, lam)] = top
        if n >= 2:
            nxt = 0
            for fg in faces:
                if fg.dim != 1 or not fg.interior:
                    continue
                e = fg.distance
                if (lam * e).denominator != 1:
                    continue
                k = int(lam * e)
                pts = fg.delta.lattice_points_array(1, interior=True)
                heights = [fg.height(tuple(int(x) for x in row)) for row in pts]
                nxt += sum(1 for h in heights if h == k) + sum(1 for h in heights if h == e - k)
            if nxt:
                out.counts[(n - 1, lam)] = nxt
    return out


def jordan_eigen1_top(support: Support, context: str) -> JordanTable:
    """Counts of ``λ = 1`` blocks of sizes ``n - 1`` and ``n - 2``."""
    n = support.n
    faces = _faces(support, context)
    out = JordanTable()
    if n - 1 >= 1:
        pts: set[Point] = set()
        for fg in faces:
            if fg.dim <= 1:
                poly = LatticePolytope(fg.vertices)
                for row in poly.lattice_points_array(1):
                    p = tuple(int(x) for x in row)
                    if all(x > 0 for x in p):
                        pts.add(p)
        if pts:
            out.counts[(n - 1, Fraction(0))] = len(pts)
    if n - 2 >= 1:
        total = 0
        for fg in faces:
            if fg.dim == 2 and fg.interior:
                total += LatticePolytope(fg.vertices).lattice_points_array(1, interior=True).shape[0]
        if total:
            out.counts[(n - 2, Fraction(0))] = 2 * total
    return out


def all_faces_prime(support: Support, context: str) -> bool:
    return all(primality(LatticePolytope(fg.vertices))[0] for fg in _faces(support, context) if fg.dim >= 1)


def jordan_prime_path(support: Support, context: str, lambdas: Iterable | None = None) -> JordanTable:
    """Block counts for ``λ != 1`` from anti-diagonal face sums; needs every face to be prime."""
    n = support.n
    faces = _faces(support, context)
    if not all_faces_prime(support, context):
        raise PreconditionError("the prime-face formula needs every relevant face to be prime")
    lams = sorted({Fraction(l) % 1 for l in (lambdas if lambdas is not None else relevant_lambdas(support, context))})
    out = JordanTable()
    for lam in lams:
        if lam == 0:
            raise PreconditionError("the prime-face formula needs λ != 1")
        e = {}
        for i, fg in enumerate(faces):
            w = weighted_delta(fg, context)
            for r in range(fg.dim + 1):
                e[(i, r)] = pseudo_prime_antidiagonal(w, lam, r)

        def part(i, fg, k):
            s = 0
            for r in range(fg.dim + 1):
                if (n - 2 + k - r) % 2:
                    continue
                dk = (n - 2 + k - r) // 2
                if dk < 0:
                    continue
                s += (-1) ** dk * comb(fg.m, dk) * e[(i, r)]
            return s

        al = {}
        for k in range(1, n + 2):
            al[k] = (-1) ** (n - 1) * sum(part(i, fg, k) + part(i, fg, k + 1) for i, fg in enumerate(faces))
        for k, c in _differences(al, n, lam).items():
            if c:
                out.counts[(k, lam)] = c
    return out


# ---- spectrum ----------------------------------------------------------------------


def spectrum_infinity(support: Support) -> Spectrum:
    """Spectrum at infinity from the Poincaré series of the cones over faces at infinity."""
    n = support.n
    _require_convenient(support)
    terms: dict[Fraction, int] = defaultdict(int)
    terms[Fraction(0)] += (-1) ** n
    for fg in infinity_faces(support):
        series: dict[Fraction, int] = defaultdict(int)
        for row in fg.delta.lattice_points_array(n):
            h = sum(a * int(b) for a, b in zip(fg.level, row)) / fg.distance
            series[h] += 1
        s = len(fg.subset)
        sign = (-1) ** (n - 1 - fg.dim)
        for j in range(s + 1):
            c = sign * (-1) ** j * comb(s, j)
            for e, m in series.items():
                if e + j <= n:
                    terms[e + j] += c * m
    sp = Spectrum(_nz(dict(terms)))
    for e in sp.support():
        if not 0 < e < n:
            raise InconsistencyError(f"spectral number {e} outside (0, {n})")
    if not sp.is_symmetric(n):
        raise InconsistencyError("spectrum at infinity is not symmetric about n/2")
    return sp


def spectrum_from_table(table: EHodgeTable, n: int) -> Spectrum:
    """Spectrum read off an assembled table at infinity (row sums per eigenvalue class)."""
    terms: dict[Fraction, int] = defaultdict(int)
    for (p, q, lam), v in table.entries.items():
        if v is UNDETERMINED:
            raise PreconditionError("the table has undetermined entries")
        beta = lam if lam != 0 else Fraction(1)
        if 0 <= p <= n - 1:
            terms[p + beta] += (-1) ** (n - 1) * v
    terms[Fraction(n)] += (-1) ** n
    return Spectrum(_nz(dict(terms)))
