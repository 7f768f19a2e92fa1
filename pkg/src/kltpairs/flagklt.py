"""Bott-Samelson discrepancy ledgers for B-stable pairs (G/P, D).

The resolution is never built; everything is read off the beta-sequence of a
reduced word whose inversion set is R+ minus R+_I.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CoefficientOutOfRange, NotPCharacter, NotReducedWord, WrongCosetWord
from .ledger import FLAG, DiscrepancyLedger, LedgerEntry
from .rootcore import (
    FUNDAMENTAL,
    ROOT,
    ParabolicData,
    Weight,
    inversion_set,
    is_reduced,
    pairing,
    weyl_apply,
)


@dataclass(frozen=True)
class FlagBoundary:
    """Coefficients ``d_alpha`` of D on the Schubert divisors ``D_alpha``."""

    coefficients: Mapping[int, Fraction]

    @classmethod
    def zero(cls, parab: ParabolicData) -> "FlagBoundary":
        return cls({a: Fraction(0) for a in parab.complement})

    @classmethod
    def uniform(cls, parab: ParabolicData, value) -> "FlagBoundary":
        return cls({a: Fraction(value) for a in parab.complement})

    def get(self, alpha: int) -> Fraction:
        return Fraction(self.coefficients.get(alpha, 0))

    def floor_is_zero(self) -> bool:
        return all(Fraction(v) < 1 for v in self.coefficients.values())

    def check(self, parab: ParabolicData) -> None:
        for alpha, v in self.coefficients.items():
            if alpha in parab.I or not 0 <= alpha < parab.datum.n:
                raise CoefficientOutOfRange(
                    f"d given for {parab.datum.simple_name(alpha)}, which is not in S minus I"
                )
            if not 0 <= Fraction(v) <= 1:
                raise CoefficientOutOfRange(
                    f"d_{parab.datum.simple_name(alpha)} = {v} is outside [0, 1]"
                )


@dataclass(frozen=True)
class BSLedger:
    word: tuple[int, ...]
    betas: tuple[int, ...]
    discrepancies: tuple[Fraction, ...]
    exceptional: tuple[bool, ...]

    @property
    def min_discrepancy(self) -> Fraction | None:
        return min(self.discrepancies, default=None)

    def to_ledger(self, parab: ParabolicData) -> DiscrepancyLedger:
        roots = parab.datum.positive_roots
        return DiscrepancyLedger(
            tuple(
                LedgerEntry(
                    divisor=f"E{i + 1}",
                    kind=FLAG,
                    discrepancy=a,
                    beta=roots[b],
                    exceptional=exc,
                )
                for i, (b, a, exc) in enumerate(zip(self.betas, self.discrepancies, self.exceptional))
            )
        )


@dataclass(frozen=True)
class FlagVerdict:
    klt: bool
    min_pairing: Fraction | None
    witness: int | None  # positive-root index attaining a non-positive pairing
    witness_pairing: Fraction | None
    ledger: BSLedger


def _resolve_word(parab: ParabolicData, word: Sequence[int] | None) -> tuple[int, ...]:
    if word is None:
        return parab.w0P_word
    word = tuple(word)
    key = ("valid", word)
    if key not in parab._cache:
        datum = parab.datum
        if not is_reduced(datum, word):
            raise NotReducedWord(f"word {word} is not reduced")
        if inversion_set(datum, word) != parab.outer_roots:
            raise WrongCosetWord("word does not have inversion set R+ minus R+_I")
        parab._cache[key] = True
    return word


def beta_sequence(parab: ParabolicData, word: Sequence[int] | None = None) -> list[int]:
    """Positive-root indices of ``beta_i = s_1 ... s_{i-1}(alpha_i)``, in word order."""
    word = _resolve_word(parab, word)
    key = ("betas", word)
    if key not in parab._cache:
        parab._cache[key] = tuple(_betas(parab, word))
    return list(parab._cache[key])


def _betas(parab: ParabolicData, word: tuple[int, ...]) -> list[int]:
    datum = parab.datum
    betas = []
    for i, letter in enumerate(word):
        beta = weyl_apply(datum, word[:i], datum.simple_root(letter))
        k = datum.root_index(beta)
        if k is None:
            raise NotReducedWord(f"prefix of {word} sends a simple root negative")
        betas.append(k)
    if len(set(betas)) != len(betas):
        raise NotReducedWord(f"word {word} repeats a root in its beta-sequence")
    return betas


def _check_character(lam: Weight, parab: ParabolicData) -> None:
    datum = parab.datum
    for i in sorted(parab.I):
        if pairing(datum, lam, datum.simple_root(i)) != 0:
            raise NotPCharacter(
                f"weight pairs nonzero with {datum.simple_name(i)}^vee, which lies in I"
            )


def pullback_coefficients(
    lam: Weight, parab: ParabolicData, word: Sequence[int] | None = None
) -> list[Fraction]:
    """Coefficients ``<lam, beta_i^vee>`` of the pulled-back divisor on each E_i."""
    _check_character(lam, parab)
    datum = parab.datum
    return [pairing(datum, lam, datum.positive_coroots[b]) for b in beta_sequence(parab, word)]


def schubert_divisor_of_character(lam: Weight, parab: ParabolicData) -> dict[int, Fraction]:
    """Coefficient ``<lam, alpha^vee>`` on each Schubert divisor ``D_alpha``."""
    _check_character(lam, parab)
    datum = parab.datum
    return {a: pairing(datum, lam, datum.simple_root(a)) for a in parab.complement}


def anticanonical_bs(parab: ParabolicData, word: Sequence[int] | None = None) -> list[Fraction]:
    # rho is not a P-character in general; the formula only needs the pairings.
    datum = parab.datum
    rho = datum.rho()
    return [pairing(datum, rho, datum.positive_coroots[b]) + 1 for b in beta_sequence(parab, word)]


def klt_weight(parab: ParabolicData, d: FlagBoundary) -> Weight:
    """``2 rho^P - rho - sum_alpha d_alpha varpi_alpha`` in the simple-root basis."""
    datum = parab.datum
    w = parab.two_rho_superP - datum.rho()
    for alpha in parab.complement:
        c = d.get(alpha)
        if c:
            w = w - c * datum.fundamental_weight(alpha)
    return w


def exceptional_flags(parab: ParabolicData, word: Sequence[int]) -> list[bool]:
    """Whether each E_i is contracted by the resolution.

    E_i maps onto a divisor exactly when deleting letter i leaves a reduced
    word whose inverse product is a minimal coset representative. Reporting
    only; the klt test looks at every E_i regardless.
    """
    key = ("exceptional", tuple(word))
    if key in parab._cache:
        return list(parab._cache[key])
    datum = parab.datum
    flags = []
    for i in range(len(word)):
        rest = word[:i] + word[i + 1:]
        if not is_reduced(datum, rest):
            flags.append(True)
            continue
        # v = rest^{-1}; minimal in v W_P iff v(alpha) > 0 for alpha in I
        inv = tuple(reversed(rest))
        minimal = all(
            all(x >= 0 for x in weyl_apply(datum, inv, datum.simple_root(a))) for a in parab.I
        )
        flags.append(not minimal)
    parab._cache[key] = tuple(flags)
    return flags


def flag_discrepancies(
    parab: ParabolicData, d: FlagBoundary, word: Sequence[int] | None = None
) -> BSLedger:
    d.check(parab)
    word = _resolve_word(parab, word)
    datum = parab.datum
    lam = klt_weight(parab, d)
    betas = beta_sequence(parab, word)
    disc = tuple(pairing(datum, lam, datum.positive_coroots[b]) - 1 for b in betas)
    return BSLedger(
        word=word,
        betas=tuple(betas),
        discrepancies=disc,
        exceptional=tuple(exceptional_flags(parab, word)),
    )


def is_klt_flag(parab: ParabolicData, d: FlagBoundary, word: Sequence[int] | None = None) -> FlagVerdict:
    """Decide klt-ness: every pairing over R+ minus R+_I must be strictly positive."""
    ledger = flag_discrepancies(parab, d, word)
    pairings = [a + 1 for a in ledger.discrepancies]
    witness = witness_pairing = None
    for b, p in sorted(zip(ledger.betas, pairings)):
        if p <= 0:
            witness, witness_pairing = b, p
            break
    return FlagVerdict(
        klt=witness is None,
        min_pairing=min(pairings, default=None),
        witness=witness,
        witness_pairing=witness_pairing,
        ledger=ledger,
    )


def weight_from_fundamental(parab: ParabolicData, coords: Sequence) -> Weight:
    return parab.datum.to_basis(Weight(tuple(coords), FUNDAMENTAL), ROOT)
