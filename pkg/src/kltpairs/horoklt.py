"""Composite discrepancy ledgers for horospherical pairs (X, D).

A horospherical variety is described by a colored fan: a fan whose rays are
the G-stable divisors X_i, plus colors (simple roots outside I) with an image
point in the lattice and the cones they color. A colored cone is spanned by
its rays together with the images of its colors.

The log resolution is V' = Z x^P Y, where Y is a smooth subdivision of the
colored fan in which every color image spans an edge. Its ledger is the union
of a toric part (one entry per ray of Y) and the Bott-Samelson part of the
flag variety G/P.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import _linalg as la
from .errors import CoefficientOutOfRange, InvalidFan, Unsupported
from .flagklt import FlagBoundary, flag_discrepancies
from .ledger import TORIC, TORIC_STRICT, DiscrepancyLedger, LedgerEntry
from .rational import format_q, parse_q
from .rootcore import ParabolicData, build_root_system, pairing, parabolic, parse_index_set
from .toricres import (
    Fan,
    PLDivisor,
    ToricBoundary,
    _extremal,
    _triangulate,
    fan_from_json,
    ray_label,
    resolve_fan,
    solve_support_function,
    stellar_subdivide,
)


@dataclass(frozen=True)
class Color:
    alpha: int
    point: tuple[int, ...]
    cones: tuple[int, ...] = ()


@dataclass(frozen=True)
class ColoredFan:
    fan: Fan
    colors: tuple[Color, ...] = ()

    def __post_init__(self):
        for c in self.colors:
            if len(c.point) != self.fan.rank or not any(c.point):
                raise InvalidFan(f"color image {list(c.point)} must be a nonzero lattice point")
            for k in c.cones:
                if not 0 <= k < len(self.fan.cones):
                    raise InvalidFan(f"color refers to missing cone {k}")

    def colors_of(self, cone_id: int) -> list[Color]:
        return [c for c in self.colors if cone_id in c.cones]


@dataclass(frozen=True)
class HorosphericalPair:
    parab: ParabolicData
    colored_fan: ColoredFan
    d_G: ToricBoundary
    d_B: FlagBoundary

    def __post_init__(self):
        for c in self.colored_fan.colors:
            if c.alpha in self.parab.I:
                raise InvalidFan(f"color {self.parab.datum.simple_name(c.alpha)} lies in I")
        self.d_G.check(self.colored_fan.fan)
        self.d_B.check(self.parab)

    @property
    def floor_is_zero(self) -> bool:
        return self.d_G.floor_is_zero() and self.d_B.floor_is_zero()


# ---------------------------------------------------------------------------
# Colored support and toroidal resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColoredSupport:
    """The fan spanned by rays and color images, before any subdivision."""

    fan: Fan
    color_rays: Mapping[int, tuple[int, ...]]  # aux ray index -> colors spanning it
    interior_colors: tuple[tuple[int, int], ...]  # (color index, cone id) not on an edge


def colored_support(cf: ColoredFan) -> ColoredSupport:
    fan = cf.fan
    rays = list(fan.rays)
    cones = []
    color_rays: dict[int, list[int]] = {}
    interior = []
    for k, cone in enumerate(fan.cones):
        dirs = [fan.rays[i] for i in cone]
        for c in cf.colors_of(k):
            direction = la.primitive(c.point)
            if direction not in dirs:
                dirs.append(direction)
        ext = set(_extremal(dirs, fan.rank))
        idx = []
        for j, g in enumerate(dirs):
            owners = [ci for ci, c in enumerate(cf.colors) if k in c.cones and la.primitive(c.point) == g]
            if j not in ext:
                if g in fan.rays:
                    raise InvalidFan(f"G-stable ray {list(g)} is not an edge of colored cone {k}")
                interior.extend((ci, k) for ci in owners)
                continue
            if g not in rays:
                rays.append(g)
            r = rays.index(g)
            idx.append(r)
            for ci in owners:
                color_rays.setdefault(r, [])
                if ci not in color_rays[r]:
                    color_rays[r].append(ci)
        cones.append(tuple(idx))
    aux = Fan(fan.rank, tuple(rays), tuple(cones))
    return ColoredSupport(
        aux,
        {r: tuple(sorted(v)) for r, v in sorted(color_rays.items())},
        tuple(sorted(set(interior))),
    )



@dataclass(frozen=True)
class ToroidalResolution:
    fan: Fan
    provenance: Mapping[int, int]  # new ray index -> colored cone it subdivides
    color_rays: Mapping[int, tuple[int, ...]]  # ray index -> colors whose image spans it
    support: ColoredSupport

    def to_json(self, cf: ColoredFan, names) -> dict:
        out = self.fan.to_json()
        out["new_rays"] = [
            {
                "ray": list(self.fan.rays[k]),
                "index": k,
                "input_cone": self.provenance[k],
                "colors": [names(cf.colors[ci].alpha) for ci in self.color_rays.get(k, ())],
            }
            for k in sorted(self.provenance)
        ]
        return out


@lru_cache(maxsize=256)
def toroidal_resolution(cf: ColoredFan) -> ToroidalResolution:
    """Smooth fan refining the colored fan, with every color image on an edge.

    Memoized on the colored fan, which is immutable and hashes by value.
    """
    sup = colored_support(cf)
    aux = sup.fan
    rays = list(aux.rays)
    color_rays = dict(sup.color_rays)
    if sup.interior_colors:
        cones = []
        for c in aux.cones:
            cones.extend(_triangulate(rays, c, aux.rank))
        cones = sorted(set(cones))
        for ci, _ in sup.interior_colors:
            p = la.primitive(cf.colors[ci].point)
            cones = stellar_subdivide(rays, cones, p)
            r = rays.index(p)
            color_rays[r] = tuple(sorted(set(color_rays.get(r, ())) | {ci}))
        base = Fan(aux.rank, tuple(rays), tuple(sorted(set(cones))))
    else:
        base = aux
    resolved, _ = resolve_fan(base)
    m = len(cf.fan.rays)
    provenance = {k: aux.cone_containing(resolved.rays[k]) for k in range(m, len(resolved.rays))}
    return ToroidalResolution(resolved, provenance, color_rays, sup)


# ---------------------------------------------------------------------------
# Discrepancies
# ---------------------------------------------------------------------------

def anticanonical_horospherical(pair: HorosphericalPair) -> tuple[tuple[int, ...], dict[int, Fraction]]:
    """Coefficients of ``-K_X``: 1 on every X_i and ``<2 rho^P, alpha^vee>`` on D_alpha."""
    parab = pair.parab
    datum = parab.datum
    flag = {
        a: pairing(datum, parab.two_rho_superP, datum.simple_root(a)) for a in parab.complement
    }
    return tuple(1 for _ in pair.colored_fan.fan.rays), flag


def boundary_support_function(pair: HorosphericalPair, sup: ColoredSupport | None = None) -> PLDivisor:
    """PL function of ``-K_X - D`` on the colored support.

    Rays carry ``1 - d_i``; color images carry ``a_alpha - d_alpha`` on the
    cones they color.
    """
    cf = pair.colored_fan
    sup = sup or colored_support(cf)
    _, a_flag = anticanonical_horospherical(pair)
    constraints = []
    for k, cone in enumerate(cf.fan.cones):
        cons = [(cf.fan.rays[i], 1 - pair.d_G.coefficients[i]) for i in cone]
        for c in cf.colors_of(k):
            cons.append((c.point, a_flag[c.alpha] - pair.d_B.get(c.alpha)))
        constraints.append(cons)
    functionals = solve_support_function(sup.fan, constraints)
    psi = PLDivisor(sup.fan, functionals, ())
    values = tuple(psi.value(v) for v in sup.fan.rays)
    return PLDivisor(sup.fan, functionals, values)


@dataclass(frozen=True)
class HorosphericalLedger:
    ledger: DiscrepancyLedger
    resolution: ToroidalResolution
    strictly_effective: bool

    @property
    def toric(self) -> DiscrepancyLedger:
        return self.ledger.of_kind(TORIC, TORIC_STRICT)

    @property
    def flag(self) -> DiscrepancyLedger:
        return self.ledger.of_kind("flag-exceptional")


def horospherical_discrepancies(pair: HorosphericalPair) -> HorosphericalLedger:
    cf = pair.colored_fan
    res = toroidal_resolution(cf)
    if res.support.interior_colors:
        ci, k = res.support.interior_colors[0]
        raise Unsupported(
            f"color {pair.parab.datum.simple_name(cf.colors[ci].alpha)} has its image inside "
            f"cone {k} rather than on an edge"
        )
    psi = boundary_support_function(pair, res.support)
    m = len(cf.fan.rays)
    entries = []
    for i in range(m):
        v = res.fan.rays[i]
        entries.append(
            LedgerEntry(f"X{i + 1}", TORIC_STRICT, psi.value(v) - 1, ray=v, exceptional=False)
        )
    for k in range(m, len(res.fan.rays)):
        v = res.fan.rays[k]
        entries.append(LedgerEntry(ray_label(v), TORIC, psi.value(v) - 1, ray=v))
    flag = flag_discrepancies(pair.parab, pair.d_B).to_ledger(pair.parab)
    _, a_flag = anticanonical_horospherical(pair)
    effective = all(psi.value(v) > 0 for v in res.fan.rays) and all(
        a_flag[a] - pair.d_B.get(a) > 0 for a in pair.parab.complement
    )
    return HorosphericalLedger(DiscrepancyLedger(tuple(entries)) + flag, res, effective)


@dataclass(frozen=True)
class HorosphericalVerdict:
    floor_is_zero: bool
    ledger_min: Fraction | None
    verdict: bool
    consistency_failure: bool
    strictly_effective: bool
    result: HorosphericalLedger

    def to_json(self, names) -> dict:
        return {
            "verdict": "klt" if self.verdict else "not-klt",
            "floor_is_zero": self.floor_is_zero,
            "ledger_min": None if self.ledger_min is None else format_q(self.ledger_min),
            "consistency_failure": self.consistency_failure,
            "strictly_effective": self.strictly_effective,
            "ledger": self.result.ledger.to_json(),
        }


def is_klt_horospherical(pair: HorosphericalPair) -> HorosphericalVerdict:
    """Verdict from the floor of D, cross-checked against the computed ledger."""
    result = horospherical_discrepancies(pair)
    low = result.ledger.min
    ledger_ok = low is None or low > -1
    floor = pair.floor_is_zero
    return HorosphericalVerdict(
        floor_is_zero=floor,
        ledger_min=low,
        verdict=floor,
        consistency_failure=floor != ledger_ok,
        strictly_effective=result.strictly_effective,
        result=result,
    )


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def pair_from_json(obj: Mapping) -> HorosphericalPair:
    try:
        datum = build_root_system(str(obj["root_system"]))
        parab = parabolic(datum, parse_index_set(obj.get("parabolic_I", []), datum))
        fan, _ = fan_from_json(obj["fan"])
        colors = tuple(
            Color(
                datum.parse_simple(str(c["alpha"])),
                tuple(int(x) for x in c["point"]),
                tuple(int(k) for k in c.get("cones", [])),
            )
            for c in obj.get("colors", [])
        )
        d_G = obj.get("d_G")
        d_B_raw: Mapping = obj.get("d_B", {})
    except (KeyError, TypeError) as exc:
        raise InvalidFan(f"malformed pair JSON: {exc}") from None
    d_G = ToricBoundary(tuple(d_G)) if d_G is not None else ToricBoundary.zero(fan)
    d_B = {a: Fraction(0) for a in parab.complement}
    for name, v in d_B_raw.items():
        a = datum.parse_simple(name)
        if a in parab.I:
            raise CoefficientOutOfRange(f"d_B given for {name}, which lies in I")
        d_B[a] = parse_q(v)
    return HorosphericalPair(parab, ColoredFan(fan, colors), d_G, FlagBoundary(d_B))


def pair_to_json(pair: HorosphericalPair) -> dict:
    datum = pair.parab.datum
    return {
        "root_system": datum.label,
        "parabolic_I": [datum.simple_name(i) for i in sorted(pair.parab.I)],
        "fan": pair.colored_fan.fan.to_json(),
        "colors": [
            {"alpha": datum.simple_name(c.alpha), "point": list(c.point), "cones": list(c.cones)}
            for c in pair.colored_fan.colors
        ],
        "d_G": [format_q(x) for x in pair.d_G.coefficients],
        "d_B": {datum.simple_name(a): format_q(pair.d_B.get(a)) for a in pair.parab.complement},
    }
