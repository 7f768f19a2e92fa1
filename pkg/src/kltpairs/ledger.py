"""Labelled discrepancy ledgers, the common output of every resolution."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .rational import format_q

FLAG = "flag-exceptional"  # F_i x^P Y, or E_i on Z/P
TORIC = "toric-exceptional"  # Z x^P Y_i for an exceptional ray
TORIC_STRICT = "toric-strict"  # strict transform of a G-stable divisor X_i


@dataclass(frozen=True)
class LedgerEntry:
    divisor: str
    kind: str
    discrepancy: Fraction
    beta: tuple[int, ...] | None = None
    ray: tuple[int, ...] | None = None
    exceptional: bool = True

    def to_json(self) -> dict:
        out: dict = {"divisor": self.divisor}
        if self.beta is not None:
            out["beta"] = list(self.beta)
        if self.ray is not None:
            out["ray"] = list(self.ray)
        out["discrepancy"] = format_q(self.discrepancy)
        out["kind"] = self.kind
        out["exceptional"] = self.exceptional
        return out


@dataclass(frozen=True)
class DiscrepancyLedger:
    entries: tuple[LedgerEntry, ...] = ()

    def __post_init__(self):
        ids = [e.divisor for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("ledger divisor ids must be unique")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __add__(self, other: "DiscrepancyLedger") -> "DiscrepancyLedger":
        return DiscrepancyLedger(self.entries + other.entries)

    def of_kind(self, *kinds: str) -> "DiscrepancyLedger":
        return DiscrepancyLedger(tuple(e for e in self.entries if e.kind in kinds))

    @property
    def values(self) -> list[Fraction]:
        return [e.discrepancy for e in self.entries]

    @property
    def min(self) -> Fraction | None:
        return min(self.values, default=None)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]

    @classmethod
    def of(cls, entries: Iterable[LedgerEntry]) -> "DiscrepancyLedger":
        return cls(tuple(entries))
