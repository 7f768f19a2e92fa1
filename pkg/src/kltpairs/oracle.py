"""Exhaustive sweeps over root systems and parabolic subsets.

Each (type, I) cell is checked independently; ``run_sweep`` maps over cells
(optionally in a process pool) and merges results in a fixed order.
"""
from __future__ import annotations

import time
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .horoklt import HorosphericalPair, is_klt_horospherical
from .toricres import ToricBoundary
from .flagklt import FlagBoundary, beta_sequence, flag_discrepancies, is_klt_flag, klt_weight
from .rational import format_q
from .rootcore import (
    ParabolicData,
    RootDatum,
    Weight,
    build_root_system,
    element_of,
    parabolic,
    pairing,
    _reflect_root,
    support,
    weyl_apply,
)

SWEEP_TYPES = ("A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2")
D_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def types_up_to(max_rank: int, types: Iterable[str] = SWEEP_TYPES) -> list[str]:
    return [t for t in types if int(t[1:]) <= max_rank]


def proper_subsets(n: int) -> list[frozenset[int]]:
    return [frozenset(c) for k in range(n) for c in combinations(range(n), k)]


# ---------------------------------------------------------------------------
# Root-system identities
# ---------------------------------------------------------------------------

def _sum_fundamental(datum: RootDatum, idx: Iterable[int]) -> Weight:
    w = Weight(tuple(Fraction(0) for _ in range(datum.n)))
    for i in idx:
        w = w + datum.fundamental_weight(i)
    return w


def pairing_bound_values(parab: ParabolicData) -> dict[int, tuple[Fraction, Fraction, Fraction]]:
    """Per outer root: (first form, reformulated form, value via the Levi longest element)."""
    datum = parab.datum
    direct = klt_weight(parab, FlagBoundary.uniform(parab, 1))
    sum_I = _sum_fundamental(datum, parab.I)
    reformulated = sum_I - parab.levi_root_sum
    out = {}
    for k in sorted(parab.outer_roots):
        co = datum.positive_coroots[k]
        moved = weyl_apply(datum, parab.w0_levi_word, co, coroot=True)
        out[k] = (pairing(datum, direct, co), pairing(datum, reformulated, co), pairing(datum, sum_I, moved))
    return out


def equality_witnesses_expected(parab: ParabolicData) -> set[int]:
    """Outer roots sent by the Levi longest element into the roots supported off I."""
    datum = parab.datum
    out = set()
    for k in parab.outer_roots:
        image = weyl_apply(datum, parab.w0_levi_word, datum.positive_roots[k])
        if all(x >= 0 for x in image) and not (support(image) & parab.I):
            out.add(k)
    return out


def verify_pairing_bound(parab: ParabolicData) -> dict:
    vals = pairing_bound_values(parab)
    first = [v[0] for v in vals.values()]
    witnesses = {k for k, v in vals.items() if v[0] == 0}
    return {
        "min_pairing": min(first, default=None),
        "nonnegative": all(x >= 0 for x in first),
        "forms_agree": all(a == b for a, b, _ in vals.values()),
        "levi_route_agrees": all(a == c for a, _, c in vals.values()),
        "witnesses": sorted(witnesses),
        "has_witness": bool(witnesses) or len(parab.I) == parab.datum.n,
    }


def verify_levi_identity(parab: ParabolicData) -> bool:
    datum = parab.datum
    sum_I = _sum_fundamental(datum, parab.I)
    lhs = weyl_apply(datum, parab.w0_levi_word, sum_I)
    return lhs == sum_I - parab.levi_root_sum


def verify_equality_characterization(parab: ParabolicData) -> bool:
    witnesses = set(verify_pairing_bound(parab)["witnesses"])
    expected = equality_witnesses_expected(parab)
    exists = bool(witnesses) or len(parab.I) == parab.datum.n
    return witnesses == expected and exists


# ---------------------------------------------------------------------------
# Reduced words
# ---------------------------------------------------------------------------

def braid_order(datum: RootDatum, i: int, j: int) -> int:
    return {0: 2, 1: 3, 2: 4, 3: 6}[datum.cartan[i][j] * datum.cartan[j][i]]


def reduced_words(datum: RootDatum, word: Sequence[int], budget: int | None = None) -> list[tuple[int, ...]]:
    """Reduced words of the same element, by breadth-first braid moves from ``word``.

    Complete when fewer than ``budget`` words exist; otherwise the first
    ``budget`` words in BFS order.
    """
    start = tuple(word)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue and (budget is None or len(order) < budget):
        w = queue.popleft()
        for pos in range(len(w)):
            for i, j in _pairs(datum, w, pos):
                m = braid_order(datum, i, j)
                seg = w[pos:pos + m]
                if len(seg) == m and all(x == (i if t % 2 == 0 else j) for t, x in enumerate(seg)):
                    swapped = tuple(j if t % 2 == 0 else i for t in range(m))
                    new = w[:pos] + swapped + w[pos + m:]
                    if new not in seen:
                        seen.add(new)
                        order.append(new)
                        queue.append(new)
                        if budget is not None and len(order) >= budget:
                            return order
    return order


def _pairs(datum: RootDatum, w: tuple[int, ...], pos: int):
    if pos + 1 < len(w) and w[pos] != w[pos + 1]:
        yield w[pos], w[pos + 1]


def all_reduced_words_by_descent(datum: RootDatum, word: Sequence[int]) -> set[tuple[int, ...]]:
    """Independent enumeration: peel off every left descent recursively."""
    memo: dict = {}

    def rec(elem):
        if elem in memo:
            return memo[elem]
        out = set()
        for i in range(datum.n):
            if _length_drops(datum, elem, i):
                shorter = tuple(_reflect_root(datum.cartan, i, col) for col in elem)
                out.update((i,) + rest for rest in rec(shorter))
        memo[elem] = out or {()}
        return memo[elem]

    return rec(element_of(datum, word))


def _length_drops(datum: RootDatum, elem, i: int) -> bool:
    # s_i w < w iff w^{-1}(alpha_i) < 0 iff alpha_i lies among the images w(beta<0)
    # equivalently some positive root beta has w(beta) = -alpha_i.
    target = tuple(-int(k == i) for k in range(datum.n))
    n = datum.n
    for r in datum.positive_roots:
        img = tuple(sum(r[j] * elem[j][t] for j in range(n)) for t in range(n))
        if img == target:
            return True
    return False


def verify_beta_set_and_word_independence(
    parab: ParabolicData, word_budget: int | None = None, d_value=Fraction(1, 2)
) -> dict:
    datum = parab.datum
    d = FlagBoundary.uniform(parab, d_value)
    words = reduced_words(datum, parab.w0P_word, word_budget)
    target = parab.outer_roots
    reference = None
    ok_sets = ok_multisets = True
    for w in words:
        betas = beta_sequence(parab, w)
        if set(betas) != target or len(betas) != len(target):
            ok_sets = False
        ms = Counter(flag_discrepancies(parab, d, w).discrepancies)
        if reference is None:
            reference = ms
        elif ms != reference:
            ok_multisets = False
    return {"words": len(words), "beta_sets": ok_sets, "multisets": ok_multisets}


# ---------------------------------------------------------------------------
# klt grid on flag varieties
# ---------------------------------------------------------------------------

def verify_flag_klt_grid(parab: ParabolicData, d_grid: Sequence[Fraction] = D_GRID) -> dict:
    datum = parab.datum
    comp = parab.complement
    interior_ok = boundary_ok = True
    checked = 0
    for values in product(d_grid, repeat=len(comp)):
        d = FlagBoundary(dict(zip(comp, values)))
        verdict = is_klt_flag(parab, d)
        low = verdict.ledger.min_discrepancy
        if not verdict.klt or (low is not None and low <= -1):
            interior_ok = False
        for pos, alpha in enumerate(comp):
            bumped = dict(zip(comp, values))
            bumped[alpha] = Fraction(1)
            v1 = is_klt_flag(parab, FlagBoundary(bumped))
            sharp = weyl_apply(datum, parab.w0_levi_word, datum.simple_root(alpha))
            k = datum.root_index(sharp)
            ledger = v1.ledger
            at_sharp = [a for b, a in zip(ledger.betas, ledger.discrepancies) if b == k]
            if v1.klt or ledger.min_discrepancy != -1 or at_sharp != [-1]:
                boundary_ok = False
        checked += 1
    return {"grid_points": checked, "interior_klt": interior_ok, "boundary_sharp": boundary_ok}


# ---------------------------------------------------------------------------
# Sweep driver
# ---------------------------------------------------------------------------

@dataclass
class CellRecord:
    root_system: str
    I: tuple[str, ...]
    pairing_bound: dict
    levi_identity: bool
    equality: bool
    words: dict
    klt: dict
    seconds: float = field(default=0.0, compare=False)

    @property
    def failures(self) -> list[str]:
        out = []
        p = self.pairing_bound
        if not (p["nonnegative"] and p["forms_agree"] and p["levi_route_agrees"] and p["has_witness"]):
            out.append("pairing_bound")
        if not self.levi_identity:
            out.append("levi_identity")
        if not self.equality:
            out.append("equality")
        if self.words and not (self.words["beta_sets"] and self.words["multisets"]):
            out.append("words")
        if self.klt and not (self.klt["interior_klt"] and self.klt["boundary_sharp"]):
            out.append("klt")
        return out

    def to_json(self) -> dict:
        p = self.pairing_bound
        return {
            "root_system": self.root_system,
            "I": list(self.I),
            "min_pairing": None if p["min_pairing"] is None else format_q(p["min_pairing"]),
            "equality_witnesses": p["witnesses"],
            "pairing_bound": not ("pairing_bound" in self.failures),
            "levi_identity": self.levi_identity,
            "equality_characterization": self.equality,
            "word_check": self.words,
            "klt_check": self.klt,
            "failures": self.failures,
        }


@dataclass
class SweepReport:
    records: list[CellRecord]
    seconds: float = 0.0

    @property
    def failures(self) -> list[CellRecord]:
        return [r for r in self.records if r.failures]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "cells": len(self.records),
            "failures": len(self.failures),
            "records": [r.to_json() for r in self.records],
        }

    def table(self) -> str:
        lines = [f"{'type':<6} {'I':<14} {'min':>5} {'witn':>5} {'words':>6}  status"]
        for r in self.records:
            words = r.words.get("words", "-") if r.words else "-"
            mp = r.pairing_bound["min_pairing"]
            lines.append(
                f"{r.root_system:<6} {','.join(r.I) or '{}':<14} "
                f"{format_q(mp) if mp is not None else '-':>5} {len(r.pairing_bound['witnesses']):>5} "
                f"{words:>6}  {'ok' if not r.failures else 'FAIL ' + ','.join(r.failures)}"
            )
        lines.append(f"{len(self.records)} cells, {len(self.failures)} failing")
        return "\n".join(lines)


def word_budget_for(rank: int, small_rank: int = 3, budget: int = 100) -> int | None:
    return None if rank <= small_rank else budget


def check_cell(
    root_system: str,
    I: Sequence[int],
    word_budget: int | None = None,
    words: bool = True,
    klt: bool = True,
    d_grid: Sequence[Fraction] = D_GRID,
) -> CellRecord:
    start = time.perf_counter()
    datum = build_root_system(root_system)
    parab = parabolic(datum, I)
    record = CellRecord(
        root_system=root_system,
        I=tuple(datum.simple_name(i) for i in sorted(parab.I)),
        pairing_bound=verify_pairing_bound(parab),
        levi_identity=verify_levi_identity(parab),
        equality=verify_equality_characterization(parab),
        words=verify_beta_set_and_word_independence(parab, word_budget) if words else {},
        klt=verify_flag_klt_grid(parab, d_grid) if klt else {},
    )
    record.seconds = time.perf_counter() - start
    return record


def _cell_task(args):
    return check_cell(*args)


def run_sweep(
    types: Sequence[str] = SWEEP_TYPES,
    max_rank: int = 4,
    word_budget: int = 100,
    words: bool = True,
    klt: bool = True,
    workers: int = 1,
) -> SweepReport:
    start = time.perf_counter()
    tasks = []
    for t in types_up_to(max_rank, types):
        n = build_root_system(t).n
        for I in proper_subsets(n):
            tasks.append((t, tuple(sorted(I)), word_budget_for(n, budget=word_budget), words, klt))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_cell_task, tasks))
    else:
        records = [_cell_task(t) for t in tasks]
    return SweepReport(records, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Horospherical consistency corpus
# ---------------------------------------------------------------------------

@dataclass
class CorpusReport:
    pairs: int = 0
    klt: int = 0
    not_klt: int = 0
    consistency_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pairs > 0 and not self.consistency_failures


def boundary_variants(pair: HorosphericalPair, d_grid: Sequence[Fraction] = D_GRID):
    """Yield ``(label, pair)`` over the grid, then with each coefficient in turn set to 1.

    The boundary variants keep the other coefficients at each grid value.
    """
    n_rays = len(pair.colored_fan.fan.rays)
    comp = pair.parab.complement
    k = n_rays + len(comp)

    def build(values):
        d_G = ToricBoundary(tuple(values[:n_rays]))
        d_B = FlagBoundary(dict(zip(comp, values[n_rays:])))
        return replace(pair, d_G=d_G, d_B=d_B)

    for values in product(d_grid, repeat=k):
        yield "d=" + ",".join(format_q(x) for x in values), build(values)
    for pos in range(k):
        for rest in product(d_grid, repeat=k - 1):
            values = rest[:pos] + (Fraction(1),) + rest[pos:]
            yield "d=" + ",".join(format_q(x) for x in values), build(values)


def check_corpus(named_pairs: Iterable[tuple[str, HorosphericalPair]],
                 d_grid: Sequence[Fraction] = D_GRID) -> CorpusReport:
    """``floor_is_zero`` must agree with ``ledger_min > -1`` on every grid variant."""
    report = CorpusReport()
    for name, base in named_pairs:
        for label, pair in boundary_variants(base, d_grid):
            verdict = is_klt_horospherical(pair)
            report.pairs += 1
            if verdict.verdict:
                report.klt += 1
            else:
                report.not_klt += 1
            if verdict.consistency_failure:
                report.consistency_failures.append(f"{name} {label}")
    return report
