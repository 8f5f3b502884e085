"""Equivariant Hodge-Deligne numbers of non-degenerate toric hypersurfaces.

A :class:`WeightedPolytope` is a lattice polytope ``Δ`` together with a
rational vector ``y`` such that ``<y, w>`` is an integer on every vertex.
The class of a lattice point ``v`` is ``<y, v> mod 1``; a class ``a`` stands
for the eigenvalue ``exp(2πi a)``.  The torus acting on ``Δ``'s hypersurface
has dimension ``dim Δ`` (the ambient ``n`` of the formulas below).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InconsistencyError, PreconditionError
from .lattice_geom import LatticePolytope, Point


class _Undetermined:
    """Marker for a Hodge number the available formulas do not pin down."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDETERMINED"

    def __reduce__(self):
        return (_Undetermined, ())


UNDETERMINED = _Undetermined()

Value = int | _Undetermined
Key = tuple[int, int, Fraction]


def conj(a: Fraction) -> Fraction:
    return (-a) % 1


def _add(a: Value, b: Value) -> Value:
    if a is UNDETERMINED or b is UNDETERMINED:
        return UNDETERMINED
    return a + b


def _mul(c: int, a: Value) -> Value:
    if c == 0:
        return 0
    return UNDETERMINED if a is UNDETERMINED else c * a


@dataclass
class EHodgeTable:
    """Finitely supported table ``(p, q, λ) -> e^{p,q}_λ``; absent keys are 0."""

    n: int
    entries: dict[Key, Value] = field(default_factory=dict)

    def get(self, p: int, q: int, lam) -> Value:
        return self.entries.get((p, q, Fraction(lam) % 1), 0)

    def set(self, p: int, q: int, lam, v: Value) -> None:
        key = (p, q, Fraction(lam) % 1)
        if v == 0 and v is not UNDETERMINED:
            self.entries.pop(key, None)
        else:
            self.entries[key] = v

    def lambdas(self) -> list[Fraction]:
        return sorted({k[2] for k in self.entries})

    def __add__(self, other: "EHodgeTable") -> "EHodgeTable":
        out = EHodgeTable(max(self.n, other.n), dict(self.entries))
        for k, v in other.entries.items():
            out.set(*k, _add(out.entries.get(k, 0), v))
        return out

    def scaled(self, c: int) -> "EHodgeTable":
        out = EHodgeTable(self.n)
        for k, v in self.entries.items():
            out.set(*k, _mul(c, v))
        return out

    def antidiagonal(self, r: int, lam) -> Value:
        lam = Fraction(lam) % 1
        acc: Value = 0
        for (p, q, l), v in self.entries.items():
            if l == lam and p + q == r:
                acc = _add(acc, v)
        return acc

    def is_determined(self) -> bool:
        return all(v is not UNDETERMINED for v in self.entries.values())

    def sorted_items(self) -> list[tuple[Key, Value]]:
        return sorted(self.entries.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1]))


def twist(table: EHodgeTable, m: int) -> EHodgeTable:
    """Multiply by ``(1 - L)^m`` where ``L`` has the single Hodge number ``e^{1,1} = 1``."""
    if m < 0:
        raise PreconditionError("twist exponent must be nonnegative")
    out = EHodgeTable(table.n + m)
    for (p, q, lam), v in table.entries.items():
        for j in range(m + 1):
            key = (p + j, q + j, lam)
            out.set(*key, _add(out.entries.get(key, 0), _mul((-1) ** j * comb(m, j), v)))
    return out


# ---- weighted lattice counts ------------------------------------------------


class WeightedPolytope:
    """Lattice polytope with the weight ``v -> <y, v> mod 1`` on its lattice points."""

    def __init__(self, polytope: LatticePolytope, weight: Sequence[Fraction] | None = None):
        self.polytope = polytope
        n = polytope.n
        self.weight = tuple(Fraction(x) for x in (weight if weight is not None else [0] * n))
        den = 1
        for x in self.weight:
            den = den * x.denominator // gcd(den, x.denominator)
        self.den = den
        self._yint = np.array([int(x * den) for x in self.weight], dtype=np.int64)
        for v in polytope.vertices:
            if sum(a * b for a, b in zip(self.weight, v)).denominator != 1:
                raise PreconditionError("the weight is not trivial on a vertex")
        self._cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def classes(self) -> list[Fraction]:
        return [Fraction(a, self.den) for a in range(self.den)]

    def class_of(self, v: Sequence[int]) -> Fraction:
        return sum((a * b for a, b in zip(self.weight, v)), Fraction(0)) % 1

    def face(self, face: frozenset[int]) -> "WeightedPolytope":
        cache = self.__dict__.setdefault("_faces", {})
        if face not in cache:
            cache[face] = WeightedPolytope(self.polytope.face_polytope(face), self.weight)
        return cache[face]

    def _hist(self, pts: np.ndarray) -> np.ndarray:
        if pts.shape[0] == 0:
            return np.zeros(self.den, dtype=np.int64)
        cls = (pts @ self._yint) % self.den
        return np.bincount(cls, minlength=self.den)

    def count_histograms(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Class histograms of the lattice points of ``kΔ`` and of its relative interior."""
        if k not in self._cache:
            closed = self.polytope.lattice_points_array(k)
            inner = self.polytope.lattice_points_array(k, interior=True)
            self._cache[k] = (self._hist(closed), self._hist(inner))
        return self._cache[k]

    def _index(self, alpha) -> int | None:
        a = Fraction(alpha) % 1
        if (a * self.den).denominator != 1:
            return None
        return int(a * self.den)

    def weighted_counts(self, k: int, alpha) -> tuple[int, int]:
        """``(l(kΔ)_α, l*(kΔ)_α)``."""
        if k < 0:
            raise PreconditionError("dilation must be nonnegative")
        i = self._index(alpha)
        if i is None:
            return 0, 0
        c, s = self.count_histograms(k)
        return int(c[i]), int(s[i])

    def skeleton_count(self, alpha) -> int:
        """``Π(Δ)_α``: lattice points with class ``α`` on the 1-skeleton."""
        i = self._index(alpha)
        if i is None:
            return 0
        pts = self.polytope.skeleton_points(1)
        return sum(1 for p in pts if self.class_of(p) == Fraction(i, self.den))

    @cached_property
    def _phi_psi(self) -> dict[Fraction, tuple[tuple[int, ...], tuple[int, ...]]]:
        n = self.dim
        top = n + 1
        closed = [self.count_histograms(k)[0] for k in range(top + 2)]
        inner = [self.count_histograms(k)[1] for k in range(top + 2)]
        binom = [(-1) ** j * comb(n + 1, j) for j in range(n + 2)]

        out = {}
        for a in range(self.den):
            phi = [sum(binom[j] * int(inner[i - j][a]) for j in range(n + 2) if i - j >= 0)
                   for i in range(top + 2)]
            psi = [sum(binom[j] * int(closed[i - j][a]) for j in range(n + 2) if i - j >= 0)
                   for i in range(top + 2)]
            if phi[top + 1] or psi[top + 1]:
                raise InconsistencyError("weighted Ehrhart series is not a polynomial of degree <= dim + 1")
            out[Fraction(a, self.den)] = (tuple(phi[:top + 1]), tuple(psi[:top + 1]))
        for a, (phi, _) in out.items():
            psi_bar = out[conj(a)][1]
            for i in range(top + 1):
                if phi[i] != psi_bar[top - i]:
                    raise InconsistencyError(f"reciprocity fails for class {a} at index {i}")
        return out

    def phi_psi(self, alpha) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coefficients of ``P_α(Δ; t)`` and ``Q_α(Δ; t)`` (indices ``0..dim+1``)."""
        i = self._index(alpha)
        if i is None:
            z = tuple([0] * (self.dim + 2))
            return z, z
        return self._phi_psi[Fraction(i, self.den)]

    def phi(self, alpha, i: int) -> int:
        coeffs = self.phi_psi(alpha)[0]
        return coeffs[i] if 0 <= i < len(coeffs) else 0


# ---- closed-form entries ----------------------------------------------------


def _is_one(alpha) -> bool:
    return Fraction(alpha) % 1 == 0


def e_high(n: int, alpha, p: int, q: int) -> int:
    if p + q <= n - 1:
        raise PreconditionError("the closed form only covers p + q > n - 1")
    if _is_one(alpha) and p == q:
        return (-1) ** (n + p + 1) * comb(n, p + 1)
    return 0


def e_row_sum(w: WeightedPolytope, alpha, p: int) -> int:
    n = w.dim
    val = (-1) ** (n + 1) * w.phi(alpha, n - p)
    if _is_one(alpha):
        val += (-1) ** (p + n + 1) * comb(n, p + 1)
    return val


def _faces_of_dim(w: WeightedPolytope, d: int) -> list[frozenset[int]]:
    return w.polytope.enumerate_faces(d)


def e_edge(w: WeightedPolytope, alpha) -> dict[tuple[int, int], int]:
    """``e^{p,0}_α`` and ``e^{0,p}_α`` for ``p > 0`` together with ``e^{0,0}_α``."""
    n = w.dim
    a = Fraction(alpha) % 1
    out: dict[tuple[int, int], int] = {}
    for p in range(1, n):
        out[(p, 0)] = (-1) ** (n - 1) * sum(w.face(f).weighted_counts(1, a)[1] for f in _faces_of_dim(w, p + 1))
        out[(0, p)] = (-1) ** (n - 1) * sum(w.face(f).weighted_counts(1, conj(a))[1]
                                            for f in _faces_of_dim(w, p + 1))
    if a == 0:
        out[(0, 0)] = (-1) ** (n - 1) * (w.skeleton_count(0) - 1)
    else:
        out[(0, 0)] = (-1) ** (n - 1) * w.skeleton_count(conj(a))
    return out


# ---- primality ----------------------------------------------------------------


def primality(p: LatticePolytope) -> tuple[bool, bool]:
    """``(prime, pseudo_prime)`` in the polytope's own dimension."""
    n = p.dim
    edges = p.enumerate_faces(1)
    twos = p.enumerate_faces(2)
    prime = all(sum(1 for e in edges if v in e) == n for v in range(len(p.vertices)))
    pseudo = all(sum(1 for t in twos if e <= t) == n - 1 for e in edges)
    if prime and not pseudo:
        raise InconsistencyError("a prime polytope must be pseudo-prime")
    return prime, pseudo


# ---- tables ---------------------------------------------------------------------


def _pseudo_prime_entry(w: WeightedPolytope, alpha, p: int, q: int) -> int:
    n = w.dim
    pp = w.polytope
    total = 0
    for g in _faces_of_dim(w, p + q + 1):
        for g2, d2 in pp.faces.items():
            if d2 < 0 or not g2 <= g:
                continue
            total += (-1) ** d2 * w.face(g2).phi(alpha, d2 - p)
    return (-1) ** (n + p + q) * total


def pseudo_prime_antidiagonal(w: WeightedPolytope, alpha, r: int) -> int:
    """Anti-diagonal sum ``Σ_{p+q=r} e^{p,q}_α`` from the ``φ̃`` face sum (``α != 1``)."""
    if _is_one(alpha):
        raise PreconditionError("the pseudo-prime closed form needs α != 1")
    n = w.dim
    pp = w.polytope
    total = 0
    for g in _faces_of_dim(w, r + 1):
        for g2, d2 in pp.faces.items():
            if d2 < 0 or not g2 <= g:
                continue
            total += (-1) ** d2 * sum(w.face(g2).phi(alpha, i) for i in range(d2 + 1))
    return (-1) ** (n + r) * total


def _completion(w: WeightedPolytope, alphas: Iterable[Fraction], table: EHodgeTable | None = None) -> EHodgeTable:
    """Fill the table from the closed forms and propagate row sums and conjugation."""
    n = w.dim
    alphas = sorted({Fraction(a) % 1 for a in alphas} | {conj(Fraction(a) % 1) for a in alphas})
    known: dict[Key, int] = {}
    for a in alphas:
        for p in range(n):
            for q in range(n):
                if p + q > n - 1:
                    known[(p, q, a)] = e_high(n, a, p, q)
        for (p, q), v in e_edge(w, a).items():
            known[(p, q, a)] = v
    if table is not None:
        for (p, q, a), v in table.entries.items():
            if v is not UNDETERMINED and a in alphas:
                known[(p, q, a)] = v
    for (p, q, a), v in list(known.items()):
        other = (q, p, conj(a))
        if other in known and known[other] != v:
            raise InconsistencyError(f"conjugation symmetry fails at {(p, q, a)}")
        known[other] = v
    rows = {(p, a): e_row_sum(w, a, p) for a in alphas for p in range(n)}
    changed = True
    while changed:
        changed = False
        for (p, a), target in rows.items():
            missing = [q for q in range(n) if (p, q, a) not in known]
            if len(missing) == 1:
                q = missing[0]
                v = target - sum(known[(p, x, a)] for x in range(n) if x != q)
                known[(p, q, a)] = v
                other = (q, p, conj(a))
                if other in known and known[other] != v:
                    raise InconsistencyError(f"conjugation symmetry fails at {(p, q, a)}")
                known[other] = v
                changed = True
    for (p, a), target in rows.items():
        if all((p, q, a) in known for q in range(n)):
            if sum(known[(p, q, a)] for q in range(n)) != target:
                raise InconsistencyError(f"row sum fails at p={p}, class {a}")
    out = EHodgeTable(n)
    for a in alphas:
        for p in range(n):
            for q in range(n):
                out.set(p, q, a, known.get((p, q, a), UNDETERMINED))
    return out


MODES = ("auto", "completion", "pseudo-prime")


def e_table(w: WeightedPolytope, alphas: Iterable | None = None, mode: str = "auto") -> EHodgeTable:
    """Equivariant numbers ``e^{p,q}(Z*_Δ)_α`` for the requested classes (all classes by default).

    ``completion`` uses only the closed forms plus row sums and conjugation;
    it is complete for ``dim Δ <= 4``.  ``pseudo-prime`` fills ``α != 1``
    from the face-sum formula (requires a pseudo-prime ``Δ``) and completes
    ``α = 1`` as above.
    """
    if mode not in MODES:
        raise PreconditionError(f"unknown mode {mode!r}")
    if w.dim < 1:
        raise PreconditionError("a hypersurface needs dim Δ >= 1")
    alphas = [Fraction(a) % 1 for a in (alphas if alphas is not None else w.classes())]
    pseudo = primality(w.polytope)[1]
    if mode == "auto":
        mode = "completion" if w.dim <= 4 or not pseudo else "pseudo-prime"
    if mode == "completion":
        return _completion(w, alphas)
    if not pseudo:
        raise PreconditionError("the pseudo-prime formula was requested for a polytope that is not pseudo-prime")
    n = w.dim
    seed = EHodgeTable(n)
    for a in set(alphas) | {conj(a) for a in alphas}:
        if a == 0:
            continue
        for p in range(n):
            for q in range(n):
                seed.set(p, q, a, _pseudo_prime_entry(w, a, p, q))
    return _completion(w, list(alphas), seed)


def hodge_table_of(points: Iterable[Sequence[int]], weight: Sequence[Fraction] | None = None,
                   mode: str = "auto") -> EHodgeTable:
    return e_table(WeightedPolytope(LatticePolytope(points), weight), mode=mode)


def nonequivariant(table: EHodgeTable) -> dict[tuple[int, int], Value]:
    """Sum over eigenvalue classes."""
    out: dict[tuple[int, int], Value] = defaultdict(int)
    for (p, q, _), v in table.entries.items():
        out[(p, q)] = _add(out[(p, q)], v)
    return {k: v for k, v in out.items() if v != 0 or v is UNDETERMINED}


def weight_lcm(values: Mapping | Iterable[Fraction]) -> int:
    den = 1
    for x in values:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return den
