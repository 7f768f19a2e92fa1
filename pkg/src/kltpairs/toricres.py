"""Lattice fans, piecewise-linear support functions and toric resolutions.

Fans store primitive ray generators and maximal cones as sorted tuples of ray
indices. Resolutions keep every input ray at its original index and append
new rays after them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Mapping, Sequence

from . import _linalg as la
from .errors import (
    CoefficientOutOfRange,
    InvalidFan,
    NonSimplicial,
    NotQCartier,
    RankCapExceeded,
)
from .ledger import TORIC, DiscrepancyLedger, LedgerEntry
from .rational import format_q, parse_q

RESOLVE_RANK_CAP = 4
FACE_CHECK_RANK = 3

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# Cone geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HRep:
    """``{x : eq . x = 0 for eq in eqs, ineq . x >= 0 for ineq in ineqs}``."""

    eqs: tuple[tuple[Fraction, ...], ...]
    ineqs: tuple[tuple[int, ...], ...]

    def contains(self, x: Sequence) -> bool:
        return all(la.dot(e, x) == 0 for e in self.eqs) and all(
            la.dot(f, x) >= 0 for f in self.ineqs
        )

    def relint_contains(self, x: Sequence) -> bool:
        return all(la.dot(e, x) == 0 for e in self.eqs) and all(
            la.dot(f, x) > 0 for f in self.ineqs
        )


def cone_hrep(gens: Sequence[Sequence[int]], rank: int) -> HRep:
    """Facet description of the cone spanned by ``gens`` (brute force, exact)."""
    gens = [tuple(g) for g in gens]
    eqs = la.nullspace(gens, ncols=rank) if gens else la.nullspace([], ncols=rank)
    d = rank - len(eqs)
    ineqs: set[tuple[int, ...]] = set()
    if d == 0:
        return HRep(tuple(map(tuple, eqs)), ())
    for sub in combinations(gens, d - 1):
        rows = list(sub) + eqs
        if sub and la.rank(list(sub)) != d - 1:
            continue
        ns = la.nullspace(rows, ncols=rank) if rows else la.nullspace([], ncols=rank)
        if len(ns) != 1:
            continue
        normal = ns[0]
        vals = [la.dot(normal, g) for g in gens]
        if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
            ineqs.add(la.primitive(normal))
        elif all(v <= 0 for v in vals) and any(v < 0 for v in vals):
            ineqs.add(la.primitive([-x for x in normal]))
    return HRep(tuple(map(tuple, eqs)), tuple(sorted(ineqs)))


def is_pointed(gens: Sequence[Sequence[int]], rank: int) -> bool:
    h = cone_hrep(gens, rank)
    rows = [list(e) for e in h.eqs] + [list(f) for f in h.ineqs]
    return la.rank(rows) == rank if rows else rank == 0


def extreme_rays(h: HRep, rank: int) -> list[Vector]:
    """Extreme rays of a pointed H-cone by enumerating tight subsystems."""
    found: set[Vector] = set()
    eqs = [list(e) for e in h.eqs]
    for size in range(0, min(rank, len(h.ineqs)) + 1):
        for sub in combinations(h.ineqs, size):
            rows = eqs + [list(f) for f in sub]
            ns = la.nullspace(rows, ncols=rank) if rows else la.nullspace([], ncols=rank)
            if len(ns) != 1:
                continue
            v = ns[0]
            for cand in (v, [-x for x in v]):
                if h.contains(cand):
                    found.add(la.primitive(cand))
    return sorted(found)


def multiplicity(gens: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``gens`` in its saturation."""
    return la.gcd_of_maximal_minors(gens)


def cone_coordinates(gens: Sequence[Sequence[int]], x: Sequence) -> list[Fraction] | None:
    """Coefficients of ``x`` in the independent generators, or None if outside their span."""
    k = len(gens)
    if k == 0:
        return [] if all(v == 0 for v in x) else None
    rank = len(x)
    a = [[gens[j][i] for j in range(k)] for i in range(rank)]
    return la.solve(a, list(x), k)


def _extremal(gens: Sequence[Vector], rank: int) -> list[int]:
    """Positions of generators that span extreme rays of their cone."""
    out = []
    for i, g in enumerate(gens):
        others = [h for j, h in enumerate(gens) if j != i and la.primitive(h) != la.primitive(g)]
        if not others or not cone_hrep(others, rank).contains(g):
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# Fans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]
    check: bool = field(default=True, compare=False, repr=False)
    _hreps: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "cones", tuple(tuple(sorted(set(c))) for c in self.cones))
        if self.check:
            self._validate()

    # -- accessors --------------------------------------------------------
    def cone_rays(self, cone: int | Sequence[int]) -> list[Vector]:
        idx = self.cones[cone] if isinstance(cone, int) else cone
        return [self.rays[i] for i in idx]

    def hrep(self, cone_id: int) -> HRep:
        if cone_id not in self._hreps:
            self._hreps[cone_id] = cone_hrep(self.cone_rays(cone_id), self.rank)
        return self._hreps[cone_id]

    @property
    def simplicial(self) -> bool:
        return all(
            not c or la.rank(self.cone_rays(c)) == len(c) for c in self.cones
        )

    @property
    def validated(self) -> bool:
        """Whether pairwise cone intersections were checked to be common faces."""
        return self.rank <= FACE_CHECK_RANK

    def cone_containing(self, x: Sequence) -> int | None:
        for k in range(len(self.cones)):
            if self.hrep(k).contains(x):
                return k
        return None

    # -- validation -------------------------------------------------------
    def _validate(self) -> None:
        r = self.rank
        if r < 0:
            raise InvalidFan("rank must be non-negative")
        seen = set()
        for v in self.rays:
            if len(v) != r:
                raise InvalidFan(f"ray {list(v)} does not have {r} coordinates")
            g = 0
            for x in v:
                g = gcd(g, x)
            if g == 0:
                raise InvalidFan("zero ray")
            if g != 1:
                raise InvalidFan(f"ray {list(v)} is not primitive")
            if v in seen:
                raise InvalidFan(f"duplicate ray {list(v)}")
            seen.add(v)
        for k, c in enumerate(self.cones):
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise InvalidFan(f"cone {k} refers to missing ray {i}")
            gens = self.cone_rays(c)
            if not is_pointed(gens, r):
                raise InvalidFan(f"cone {k} is not strongly convex")
            if len(_extremal(gens, r)) != len(gens):
                raise InvalidFan(f"cone {k} lists a ray that is not an edge")
        if r <= FACE_CHECK_RANK:
            for a, b in combinations(range(len(self.cones)), 2):
                if not self._meet_in_face(a, b):
                    raise InvalidFan(f"cones {a} and {b} do not meet along a common face")

    def _is_face(self, cone_id: int, subset: set[int]) -> bool:
        h = self.hrep(cone_id)
        tight = [f for f in h.ineqs if all(la.dot(f, self.rays[i]) == 0 for i in subset)]
        face = {i for i in self.cones[cone_id] if all(la.dot(f, self.rays[i]) == 0 for f in tight)}
        return face == subset

    def _meet_in_face(self, a: int, b: int) -> bool:
        common = set(self.cones[a]) & set(self.cones[b])
        ha, hb = self.hrep(a), self.hrep(b)
        meet = HRep(ha.eqs + hb.eqs, tuple(sorted(set(ha.ineqs) | set(hb.ineqs))))
        common_dirs = {self.rays[i] for i in common}
        if any(v not in common_dirs for v in extreme_rays(meet, self.rank)):
            return False
        return self._is_face(a, common) and self._is_face(b, common)

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(v) for v in self.rays],
            "cones": [list(c) for c in self.cones],
        }


@dataclass(frozen=True)
class ToricBoundary:
    """Coefficient ``d_i`` on the G-stable divisor of each ray."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(parse_q(x) for x in self.coefficients))

    @classmethod
    def zero(cls, fan: Fan) -> "ToricBoundary":
        return cls(tuple(Fraction(0) for _ in fan.rays))

    def check(self, fan: Fan) -> None:
        if len(self.coefficients) != len(fan.rays):
            raise CoefficientOutOfRange(
                f"{len(self.coefficients)} coefficients for {len(fan.rays)} rays"
            )
        for i, d in enumerate(self.coefficients):
            if not 0 <= d <= 1:
                raise CoefficientOutOfRange(f"d on ray {i} is {d}, outside [0, 1]")

    def floor_is_zero(self) -> bool:
        return all(d < 1 for d in self.coefficients)


def fan_from_json(obj: Mapping) -> tuple[Fan, ToricBoundary | None]:
    try:
        rank = int(obj["rank"])
        rays = [tuple(int(x) for x in v) for v in obj["rays"]]
        cones = [tuple(int(i) for i in c) for c in obj["cones"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidFan(f"malformed fan JSON: {exc}") from None
    fan = Fan(rank, tuple(rays), tuple(cones))
    d = obj.get("d")
    return fan, (ToricBoundary(tuple(d)) if d is not None else None)


# ---------------------------------------------------------------------------
# Smoothness and resolution
# ---------------------------------------------------------------------------

def is_smooth_cone(fan: Fan, cone: int | Sequence[int]) -> bool:
    gens = fan.cone_rays(cone)
    if gens and la.rank(gens) != len(gens):
        raise NonSimplicial(f"cone {cone} is not simplicial")
    return multiplicity(gens) == 1


def hj_continued_fraction(n: int, q: int) -> list[int]:
    """``n/q = b1 - 1/(b2 - 1/(...))`` with every ``b_i >= 2``."""
    out = []
    while q:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return out


def hirzebruch_jung_rays(u: Vector, v: Vector) -> list[Vector]:
    """Interior rays of the minimal resolution of the 2-dimensional cone (u, v), from u to v."""
    if la.det([u, v]) < 0:
        return list(reversed(hirzebruch_jung_rays(v, u)))
    out = []
    d = int(la.det([u, v]))
    while d > 1:
        k = next(k for k in range(d) if all((vi + k * ui) % d == 0 for ui, vi in zip(u, v)))
        u = tuple((vi + k * ui) // d for ui, vi in zip(u, v))
        out.append(u)
        d = k
    return out


def _triangulate(rays: Sequence[Vector], cone: tuple[int, ...], rank: int) -> list[tuple[int, ...]]:
    """Pulling triangulation from the lowest-indexed ray; consistent across shared faces."""
    gens = [rays[i] for i in cone]
    if not gens or la.rank(gens) == len(gens):
        return [cone]
    apex = min(cone)
    h = cone_hrep(gens, rank)
    out = []
    for f in h.ineqs:
        facet = tuple(i for i in cone if la.dot(f, rays[i]) == 0)
        if apex in facet:
            continue
        for simplex in _triangulate(rays, facet, rank):
            out.append(tuple(sorted(simplex + (apex,))))
    return out


def stellar_subdivide(rays: list[Vector], cones: list[tuple[int, ...]], p: Vector) -> list[tuple[int, ...]]:
    """Star-subdivide simplicial cones at the primitive vector ``p`` (appended to ``rays``)."""
    if p in rays:
        return cones
    rays.append(p)
    new = len(rays) - 1
    out = []
    for c in cones:
        gens = [rays[i] for i in c]
        coords = cone_coordinates(gens, p)
        if coords is None or any(x < 0 for x in coords):
            out.append(c)
            continue
        for j, x in enumerate(coords):
            if x > 0:
                out.append(tuple(sorted(c[:j] + (new,) + c[j + 1:])))
    return out


def _best_interior_point(gens: Sequence[Vector], m: int) -> Vector:
    """Shortest nonzero lattice point of the half-open parallelepiped, smallest support first."""
    k = len(gens)
    rank = len(gens[0])
    for size in range(1, k + 1):
        found = []
        for support in combinations(range(k), size):
            for nums in product(range(1, m), repeat=size):
                pt = [Fraction(0)] * rank
                for j, c in zip(support, nums):
                    for t in range(rank):
                        pt[t] += Fraction(c, m) * gens[j][t]
                if all(x.denominator == 1 for x in pt):
                    v = tuple(int(x) for x in pt)
                    found.append((sum(x * x for x in v), v))
        if found:
            return la.primitive(min(found)[1])
    raise AssertionError("non-smooth cone without interior lattice point")


def resolve_fan(fan: Fan) -> tuple[Fan, dict[int, int]]:
    """Smooth refinement of ``fan`` and a map from each new ray to the input cone it subdivides."""
    if fan.rank > RESOLVE_RANK_CAP:
        raise RankCapExceeded(f"resolution is implemented for rank <= {RESOLVE_RANK_CAP}")
    rays = list(fan.rays)
    cones: list[tuple[int, ...]] = []
    for c in fan.cones:
        cones.extend(_triangulate(rays, c, fan.rank))
    cones = sorted(set(cones))
    if fan.rank == 2:
        out = []
        for c in cones:
            if len(c) == 2:
                chain = [c[0]]
                for w in hirzebruch_jung_rays(rays[c[0]], rays[c[1]]):
                    rays.append(w)
                    chain.append(len(rays) - 1)
                chain.append(c[1])
                out.extend(tuple(sorted(pair)) for pair in zip(chain, chain[1:]))
            else:
                out.append(c)
        cones = out
    else:
        while True:
            bad = [(multiplicity([rays[i] for i in c]), -k) for k, c in enumerate(cones)]
            m, negk = max(bad, default=(1, 0))
            if m == 1:
                break
            p = _best_interior_point([rays[i] for i in cones[-negk]], m)
            cones = stellar_subdivide(rays, cones, p)
    resolved = Fan(fan.rank, tuple(rays), tuple(sorted(set(cones))), check=fan.rank <= FACE_CHECK_RANK)
    provenance = {}
    for k in range(len(fan.rays), len(rays)):
        provenance[k] = fan.cone_containing(rays[k])
    return resolved, provenance


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every cone of ``fine`` lies in some cone of ``coarse``."""
    return all(
        any(all(coarse.hrep(k).contains(v) for v in fine.cone_rays(c)) for k in range(len(coarse.cones)))
        for c in fine.cones
    )


# ---------------------------------------------------------------------------
# Piecewise-linear support functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PLDivisor:
    fan: Fan
    functionals: tuple[tuple[Fraction, ...], ...]
    ray_values: tuple[Fraction, ...]

    def value(self, x: Sequence) -> Fraction:
        k = self.fan.cone_containing(x)
        if k is None:
            raise ValueError(f"point {list(x)} lies outside the support of the fan")
        return la.dot(self.functionals[k], x)


def solve_support_function(
    fan: Fan, constraints: Sequence[Sequence[tuple[Sequence[int], Fraction]]]
) -> tuple[tuple[Fraction, ...], ...]:
    """One linear functional per cone meeting every ``(point, value)`` constraint of that cone."""
    out = []
    for k, cons in enumerate(constraints):
        a = [list(p) for p, _ in cons]
        b = [Fraction(v) for _, v in cons]
        m = la.solve(a, b, fan.rank)
        if m is None:
            raise NotQCartier(k)
        out.append(tuple(m))
    # shared rays carry one value, so adjacent functionals agree on common faces
    for a, b in combinations(range(len(fan.cones)), 2):
        for i in set(fan.cones[a]) & set(fan.cones[b]):
            if la.dot(out[a], fan.rays[i]) != la.dot(out[b], fan.rays[i]):
                raise NotQCartier(b)
    return tuple(out)


def pl_function(fan: Fan, ray_values: Sequence) -> PLDivisor:
    values = tuple(parse_q(v) for v in ray_values)
    if len(values) != len(fan.rays):
        raise ValueError(f"{len(values)} values for {len(fan.rays)} rays")
    cons = [[(fan.rays[i], values[i]) for i in c] for c in fan.cones]
    return PLDivisor(fan, solve_support_function(fan, cons), values)


@dataclass(frozen=True)
class ToricDiscrepancies:
    ledger: DiscrepancyLedger
    strictly_effective: bool
    psi: PLDivisor


def ray_label(v: Sequence[int]) -> str:
    return "Y(" + ",".join(str(x) for x in v) + ")"


def toric_discrepancies(
    fan: Fan, resolved: Fan, provenance: Mapping[int, int], d: ToricBoundary
) -> ToricDiscrepancies:
    """Discrepancy ``psi(v) - 1`` of every new ray, where ``psi`` supports ``-K_X - D``."""
    d.check(fan)
    psi = pl_function(fan, [1 - x for x in d.coefficients])
    entries = []
    for k in sorted(provenance):
        v = resolved.rays[k]
        entries.append(LedgerEntry(ray_label(v), TORIC, psi.value(v) - 1, ray=v))
    return ToricDiscrepancies(
        DiscrepancyLedger(tuple(entries)),
        strictly_effective=all(x > 0 for x in psi.ray_values),
        psi=psi,
    )


def resolution_to_json(fan: Fan, provenance: Mapping[int, int]) -> dict:
    out = fan.to_json()
    out["new_rays"] = [
        {"ray": list(fan.rays[k]), "index": k, "input_cone": provenance[k]} for k in sorted(provenance)
    ]
    return out


def format_values(xs) -> list[str]:
    return [format_q(x) for x in xs]
