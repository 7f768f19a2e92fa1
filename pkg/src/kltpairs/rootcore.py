"""Root data, Weyl group words and parabolic subsets, in exact arithmetic.

Conventions
-----------
* Simple roots are indexed ``0..n-1`` internally and named ``a1..an`` in
  user-facing text; several components are numbered consecutively.
* ``cartan[i][j] = <alpha_j, alpha_i^vee>``.
* Roots are integer vectors in the simple-root basis, coroots integer vectors
  in the simple-coroot basis. Weights carry rational coordinates in either
  the simple-root basis or the fundamental-weight basis.
* A word ``(i1, ..., ik)`` denotes ``s_i1 s_i2 ... s_ik`` and acts right to
  left.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from .errors import DimensionMismatch, InvalidCartan, UnsupportedRank

RANK_CAP = 8
ROOT = "root"
FUNDAMENTAL = "fundamental"

Vector = tuple[int, ...]
WeylWord = tuple[int, ...]


# ---------------------------------------------------------------------------
# Cartan matrices
# ---------------------------------------------------------------------------

def _min_rank(letter: str) -> int:
    return {"A": 1, "B": 2, "C": 2, "D": 4, "E": 6, "F": 4, "G": 2}[letter]


def check_type(letter: str, n: int) -> None:
    if letter not in "ABCDEFG" or len(letter) != 1:
        raise InvalidCartan(f"unknown Cartan type {letter!r}")
    if n < _min_rank(letter) or n > RANK_CAP:
        raise UnsupportedRank(f"{letter}{n} is not a supported finite type")
    if (letter == "E" and n not in (6, 7, 8)) or (letter == "F" and n != 4) or (
        letter == "G" and n != 2
    ):
        raise UnsupportedRank(f"{letter}{n} is not a valid finite type")


def cartan_matrix(letter: str, n: int) -> list[list[int]]:
    """Bourbaki-numbered Cartan matrix with ``cartan[i][j] = <alpha_j, alpha_i^vee>``."""
    check_type(letter, n)
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, a_ij=-1, a_ji=-1):
        a[i][j] = a_ij
        a[j][i] = a_ji

    if letter in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if letter == "B":
            # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
            a[n - 1][n - 2] = -2
        elif letter == "C":
            # alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2
            a[n - 2][n - 1] = -2
    elif letter == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif letter == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif letter == "F":
        link(0, 1)
        link(1, 2)
        link(2, 3)
        a[2][1] = -2  # alpha_2 long, alpha_3 short
    elif letter == "G":
        link(0, 1)
        a[0][1] = -3  # alpha_1 short, alpha_2 long
    return a


def positive_root_count(letter: str, n: int) -> int:
    if letter == "A":
        return n * (n + 1) // 2
    if letter in "BC":
        return n * n
    if letter == "D":
        return n * (n - 1)
    return {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}[(letter, n)]


def _components_of(a: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(a)
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and a[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def validate_cartan(a: Sequence[Sequence[int]]) -> None:
    """Reject anything that is not a finite-type Cartan matrix."""
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise InvalidCartan("Cartan matrix must be a non-empty square matrix")
    for i in range(n):
        for j in range(n):
            x = a[i][j]
            if not isinstance(x, int) or isinstance(x, bool):
                raise InvalidCartan("Cartan entries must be integers")
            if i == j and x != 2:
                raise InvalidCartan("diagonal entries must be 2")
            if i != j and (x > 0 or (x == 0) != (a[j][i] == 0)):
                raise InvalidCartan(f"bad off-diagonal pair at ({i}, {j})")
    for comp in _components_of(a):
        if len(comp) > RANK_CAP:
            raise UnsupportedRank(f"component of rank {len(comp)} exceeds cap {RANK_CAP}")
    # symmetrize: d_i a_ij = d_j a_ji
    d: list[Fraction | None] = [None] * n
    for comp in _components_of(a):
        d[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in comp:
                if j == i or a[i][j] == 0:
                    continue
                want = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    raise InvalidCartan("matrix is not symmetrizable")
    sym = [[d[i] * a[i][j] for j in range(n)] for i in range(n)]
    if not la.is_positive_definite(sym):
        raise InvalidCartan("symmetrized matrix is not positive definite (not finite type)")


@dataclass(frozen=True)
class RootSystemSpec:
    """Either a list of named components or an explicit Cartan matrix."""

    components: tuple[tuple[str, int], ...] = ()
    matrix: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def parse(cls, text: str) -> "RootSystemSpec":
        """Parse ``"A3"``, ``"B2xA1"`` or a JSON integer matrix."""
        text = text.strip()
        if text.startswith("["):
            try:
                rows = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidCartan(f"bad Cartan matrix JSON: {exc}") from None
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise InvalidCartan("Cartan matrix JSON must be a list of lists")
            return cls(matrix=tuple(tuple(r) for r in rows))
        comps = []
        for part in text.split("x"):
            m = re.fullmatch(r"([A-Za-z])(\d+)", part.strip())
            if not m:
                raise InvalidCartan(f"cannot parse root system component {part!r}")
            comps.append((m.group(1).upper(), int(m.group(2))))
        return cls(components=tuple(comps))

    def label(self) -> str:
        if self.matrix is not None:
            return json.dumps([list(r) for r in self.matrix])
        return "x".join(f"{c}{r}" for c, r in self.components)

    def cartan(self) -> list[list[int]]:
        if self.matrix is not None:
            a = [list(r) for r in self.matrix]
            validate_cartan(a)
            return a
        if not self.components:
            raise InvalidCartan("empty root system")
        blocks = [cartan_matrix(c, r) for c, r in self.components]
        n = sum(len(b) for b in blocks)
        a = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b):
                a[off + i][off:off + len(b)] = row
            off += len(b)
        return a


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    coords: tuple[Fraction, ...]
    basis: str = ROOT

    def __post_init__(self):
        if self.basis not in (ROOT, FUNDAMENTAL):
            raise ValueError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    def _check(self, other: "Weight") -> None:
        if self.basis != other.basis or len(self.coords) != len(other.coords):
            raise DimensionMismatch("weights live in different bases or ranks")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(x + y for x, y in zip(self.coords, other.coords)), self.basis)

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(x - y for x, y in zip(self.coords, other.coords)), self.basis)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-x for x in self.coords), self.basis)

    def __mul__(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * x for x in self.coords), self.basis)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)


# ---------------------------------------------------------------------------
# Root datum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootDatum:
    n: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Vector, ...]
    positive_coroots: tuple[Vector, ...]
    fundamental_weights: tuple[tuple[Fraction, ...], ...]
    label: str = ""
    components: tuple[tuple[str, int], ...] = ()
    _root_index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._root_index.update({r: k for k, r in enumerate(self.positive_roots)})

    # -- lookups ----------------------------------------------------------
    def root_index(self, root: Sequence[int]) -> int | None:
        return self._root_index.get(tuple(root))

    def simple_root(self, i: int) -> Vector:
        return tuple(int(k == i) for k in range(self.n))

    def height(self, root: Sequence[int]) -> int:
        return sum(root)

    def simple_name(self, i: int) -> str:
        return f"a{i + 1}"

    def parse_simple(self, name: str) -> int:
        m = re.fullmatch(r"(?:a|alpha|s)?(\d+)", name.strip())
        if not m or not 1 <= int(m.group(1)) <= self.n:
            raise ValueError(f"unknown simple root {name!r} (expected a1..a{self.n})")
        return int(m.group(1)) - 1

    # -- weights ----------------------------------------------------------
    def fundamental_weight(self, i: int) -> Weight:
        return Weight(self.fundamental_weights[i], ROOT)

    def rho(self) -> Weight:
        """Half sum of positive roots, in the simple-root basis."""
        total = [sum(r[k] for r in self.positive_roots) for k in range(self.n)]
        return Weight(tuple(Fraction(x, 2) for x in total), ROOT)

    def to_basis(self, w: Weight, basis: str) -> Weight:
        if len(w.coords) != self.n:
            raise DimensionMismatch(f"weight has {len(w.coords)} coordinates, rank is {self.n}")
        if w.basis == basis:
            return w
        if basis == FUNDAMENTAL:
            # fundamental coordinates are the pairings with simple coroots
            return Weight(
                tuple(sum(c * self.cartan[k][j] for j, c in enumerate(w.coords)) for k in range(self.n)),
                FUNDAMENTAL,
            )
        out = [Fraction(0)] * self.n
        for i, f in enumerate(w.coords):
            if f:
                for j, x in enumerate(self.fundamental_weights[i]):
                    out[j] += f * x
        return Weight(tuple(out), ROOT)

    def root_weight(self, root: Sequence[int]) -> Weight:
        return Weight(tuple(Fraction(x) for x in root), ROOT)


def build_root_system(spec: RootSystemSpec | str) -> RootDatum:
    """Build positive roots and coroots by reflection closure of the simple ones."""
    if isinstance(spec, str):
        spec = RootSystemSpec.parse(spec)
    a = spec.cartan()
    n = len(a)
    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    coroot_of = {r: r for r in simple}
    queue = list(simple)
    while queue:
        root = queue.pop()
        co = coroot_of[root]
        for i in range(n):
            new = _reflect_root(a, i, root)
            if all(x >= 0 for x in new) and new not in coroot_of:
                coroot_of[new] = _reflect_coroot(a, i, co)
                queue.append(new)
    roots = sorted(coroot_of, key=lambda r: (sum(r), tuple(-x for x in r)))
    fw = la.inverse(la.transpose(a))
    return RootDatum(
        n=n,
        cartan=tuple(tuple(r) for r in a),
        positive_roots=tuple(roots),
        positive_coroots=tuple(coroot_of[r] for r in roots),
        fundamental_weights=tuple(tuple(row) for row in fw),
        label=spec.label(),
        components=spec.components,
    )


# ---------------------------------------------------------------------------
# Pairing and reflections
# ---------------------------------------------------------------------------

def _reflect_root(a, i: int, x: Sequence) -> tuple:
    c = sum(xj * a[i][j] for j, xj in enumerate(x))
    return tuple(xj - c if j == i else xj for j, xj in enumerate(x))


def _reflect_coroot(a, i: int, e: Sequence) -> tuple:
    c = sum(ek * a[k][i] for k, ek in enumerate(e))
    return tuple(ek - c if k == i else ek for k, ek in enumerate(e))


def _reflect_fundamental(a, i: int, f: Sequence) -> tuple:
    c = f[i]
    return tuple(fk - c * a[k][i] for k, fk in enumerate(f))


def pairing(datum: RootDatum, w: Weight | Sequence, coroot: Sequence[int]) -> Fraction:
    """Exact ``<w, coroot>``; a bare sequence is read as simple-root coordinates."""
    if not isinstance(w, Weight):
        w = Weight(tuple(w), ROOT)
    if len(w.coords) != datum.n or len(coroot) != datum.n:
        raise DimensionMismatch("weight and coroot must both have rank-many coordinates")
    if w.basis == FUNDAMENTAL:
        return sum((f * e for f, e in zip(w.coords, coroot)), Fraction(0))
    a = datum.cartan
    total = Fraction(0)
    for k, e in enumerate(coroot):
        if e:
            total += e * sum(c * a[k][j] for j, c in enumerate(w.coords))
    return total


def _check_word(datum: RootDatum, word: Sequence[int]) -> None:
    for i in word:
        if not 0 <= i < datum.n:
            raise IndexError(f"simple reflection index {i} out of range for rank {datum.n}")


def weyl_apply(datum: RootDatum, word: Sequence[int], x, coroot: bool = False):
    """Apply ``s_{w1} ... s_{wk}`` to a weight, a root, or (``coroot=True``) a coroot."""
    _check_word(datum, word)
    a = datum.cartan
    if isinstance(x, Weight):
        if len(x.coords) != datum.n:
            raise DimensionMismatch("weight rank mismatch")
        step = _reflect_fundamental if x.basis == FUNDAMENTAL else _reflect_root
        v = x.coords
        for i in reversed(word):
            v = step(a, i, v)
        return Weight(v, x.basis)
    if len(x) != datum.n:
        raise DimensionMismatch("vector rank mismatch")
    step = _reflect_coroot if coroot else _reflect_root
    v = tuple(x)
    for i in reversed(word):
        v = step(a, i, v)
    return v


def _is_negative(v: Sequence) -> bool:
    return any(x < 0 for x in v)


def inversion_set(datum: RootDatum, word: Sequence[int]) -> frozenset[int]:
    """Indices of positive roots ``beta`` with ``word^{-1}(beta) < 0``."""
    inv = element_of(datum, tuple(reversed(word)))
    return frozenset(
        k for k, r in enumerate(datum.positive_roots) if _is_negative(apply_element(inv, r))
    )


def is_reduced(datum: RootDatum, word: Sequence[int]) -> bool:
    return len(inversion_set(datum, word)) == len(word)


# ---------------------------------------------------------------------------
# Weyl group elements as images of the simple roots
# ---------------------------------------------------------------------------

Element = tuple[Vector, ...]  # element[j] = w(alpha_j)


def identity(datum: RootDatum) -> Element:
    return tuple(datum.simple_root(j) for j in range(datum.n))


def times_simple(datum: RootDatum, w: Element, i: int) -> Element:
    """``w * s_i``."""
    a = datum.cartan
    wi = w[i]
    return tuple(
        col if a[i][j] == 0 else tuple(c - a[i][j] * d for c, d in zip(col, wi))
        for j, col in enumerate(w)
    )


def element_of(datum: RootDatum, word: Sequence[int]) -> Element:
    _check_word(datum, word)
    w = identity(datum)
    for i in word:
        w = times_simple(datum, w, i)
    return w


def apply_element(w: Element, x: Sequence) -> tuple:
    n = len(w)
    return tuple(sum(x[j] * w[j][k] for j in range(n)) for k in range(n))


def multiply(u: Element, v: Element) -> Element:
    return tuple(apply_element(u, col) for col in v)


def reduced_word(datum: RootDatum, w: Element) -> WeylWord:
    """Reduced word by repeatedly stripping the smallest right descent."""
    letters = []
    while True:
        i = next((j for j, col in enumerate(w) if _is_negative(col)), None)
        if i is None:
            break
        letters.append(i)
        w = times_simple(datum, w, i)
    return tuple(reversed(letters))


def longest_word(datum: RootDatum, subset: Iterable[int]) -> WeylWord:
    """Longest element of the subgroup generated by ``subset`` by greedy ascent."""
    subset = sorted(set(subset))
    w = identity(datum)
    word = []
    while True:
        i = next((j for j in subset if not _is_negative(w[j])), None)
        if i is None:
            return tuple(word)
        word.append(i)
        w = times_simple(datum, w, i)


# ---------------------------------------------------------------------------
# Parabolic data
# ---------------------------------------------------------------------------

def support(root: Sequence[int]) -> frozenset[int]:
    return frozenset(k for k, x in enumerate(root) if x)


@dataclass(frozen=True)
class ParabolicData:
    datum: RootDatum
    I: frozenset[int]
    levi_positive_roots: tuple[int, ...]
    levi_root_sum: Weight
    two_rho_superP: Weight
    w0P_word: WeylWord
    w0_levi_word: WeylWord
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def complement(self) -> tuple[int, ...]:
        """Simple roots not in I, i.e. the labels of the Schubert divisors."""
        return tuple(i for i in range(self.datum.n) if i not in self.I)

    @property
    def outer_roots(self) -> frozenset[int]:
        """Indices of R+ minus R+_I."""
        levi = set(self.levi_positive_roots)
        return frozenset(k for k in range(len(self.datum.positive_roots)) if k not in levi)

    @property
    def dimension(self) -> int:
        return len(self.datum.positive_roots) - len(self.levi_positive_roots)


def parabolic(datum: RootDatum, I: Iterable[int]) -> ParabolicData:
    I = frozenset(I)
    for i in I:
        if not 0 <= i < datum.n:
            raise IndexError(f"simple root index {i} out of range")
    levi = tuple(k for k, r in enumerate(datum.positive_roots) if support(r) <= I)
    levi_sum = [0] * datum.n
    outer_sum = [0] * datum.n
    for k, r in enumerate(datum.positive_roots):
        target = levi_sum if k in levi else outer_sum
        for j, x in enumerate(r):
            target[j] += x
    w0_levi = longest_word(datum, I)
    w0 = longest_word(datum, range(datum.n))
    # w_{0,P} * w_0 has inversion set exactly R+ \ R+_I
    elem = multiply(element_of(datum, w0_levi), element_of(datum, w0))
    return ParabolicData(
        datum=datum,
        I=I,
        levi_positive_roots=levi,
        levi_root_sum=Weight(tuple(levi_sum), ROOT),
        two_rho_superP=Weight(tuple(outer_sum), ROOT),
        w0P_word=reduced_word(datum, elem),
        w0_levi_word=w0_levi,
    )


def format_word(word: Sequence[int]) -> str:
    return "".join(f"s{i + 1}" for i in word) or "e"


def parse_word(text: str, datum: RootDatum) -> WeylWord:
    text = text.strip()
    if text in ("", "e"):
        return ()
    tokens = [t for t in re.split(r"[,\s]+", text) if t]
    if len(tokens) == 1 and re.fullmatch(r"(?:s\d+){2,}", tokens[0]):
        tokens = re.findall(r"s\d+", tokens[0])
    return tuple(datum.parse_simple(t) for t in tokens)


def parse_index_set(text: str | Sequence[str], datum: RootDatum) -> frozenset[int]:
    if isinstance(text, str):
        items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    else:
        items = list(text)
    return frozenset(datum.parse_simple(t) for t in items)
