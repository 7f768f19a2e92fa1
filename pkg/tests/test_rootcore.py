from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclid import cartan as euclid_cartan
from euclid import positive_coroots_in_simple_basis, positive_roots_in_simple_basis
from kltpairs.errors import DimensionMismatch, InvalidCartan, UnsupportedRank
from kltpairs.rootcore import (
    FUNDAMENTAL,
    ROOT,
    Weight,
    build_root_system,
    cartan_matrix,
    format_word,
    inversion_set,
    is_reduced,
    longest_word,
    element_of,
    pairing,
    parabolic,
    parse_word,
    weyl_apply,
)

CLOSED_FORM = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
}
EXCEPTIONAL = {"G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}


def names(n_max=8):
    for letter, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 4)):
        for n in range(lo, n_max + 1):
            yield f"{letter}{n}", CLOSED_FORM[letter](n)
    yield from EXCEPTIONAL.items()


@pytest.mark.parametrize("name,count", list(names()))
def test_positive_root_count_matches_closed_form(name, count):
    assert len(build_root_system(name).positive_roots) == count


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "B4", "C4"])
def test_roots_and_coroots_match_euclidean_model(name):
    datum = build_root_system(name)
    letter, n = name[0], int(name[1:])
    assert [list(map(Fraction, r)) for r in datum.cartan] == euclid_cartan(letter, n)
    assert {tuple(map(Fraction, r)) for r in datum.positive_roots} == positive_roots_in_simple_basis(letter, n)
    assert {tuple(map(Fraction, c)) for c in datum.positive_coroots} == positive_coroots_in_simple_basis(letter, n)


def test_small_examples():
    a1 = build_root_system("A1")
    assert a1.positive_roots == ((1,),)
    assert a1.fundamental_weight(0).coords == (Fraction(1, 2),)
    a2 = build_root_system("A2")
    assert set(a2.positive_roots) == {(1, 0), (0, 1), (1, 1)}
    assert len(build_root_system("G2").positive_roots) == 6


def test_g2_coroots_swap_lengths():
    g2 = build_root_system("G2")
    # long and short roots exchange roles under the coroot map
    assert set(g2.positive_coroots) == {(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)}


def test_product_types_number_components_consecutively():
    d = build_root_system("B2xA1")
    assert d.n == 3
    assert len(d.positive_roots) == 5
    assert d.cartan[2][0] == 0 and d.cartan[0][2] == 0


def test_explicit_cartan_json():
    d = build_root_system("[[2,-1],[-1,2]]")
    assert len(d.positive_roots) == 3


@pytest.mark.parametrize(
    "bad",
    [
        "[[2,-2],[-2,2]]",  # affine A1
        "[[2,-3],[-3,2]]",  # indefinite
        "[[2,1],[1,2]]",
        "[[2,0],[-1,2]]",
        "[[3]]",
    ],
)
def test_invalid_cartan_rejected(bad):
    with pytest.raises(InvalidCartan):
        build_root_system(bad)


def test_rank_cap():
    with pytest.raises(UnsupportedRank):
        build_root_system("A9")
    with pytest.raises(UnsupportedRank):
        build_root_system("E9")


@pytest.mark.parametrize("name", ["A3", "B3", "C4", "D4", "G2", "F4"])
def test_fundamental_weights_are_dual_to_simple_coroots(name):
    d = build_root_system(name)
    for i in range(d.n):
        for j in range(d.n):
            assert pairing(d, d.fundamental_weight(i), d.simple_root(j)) == int(i == j)


def test_pairing_examples():
    a2 = build_root_system("A2")
    assert pairing(a2, a2.rho(), (1, 1)) == 2
    lam = Weight((Fraction(-1), Fraction(3, 2)), FUNDAMENTAL)
    assert pairing(a2, lam, (1, 1)) == Fraction(1, 2)
    assert pairing(a2, a2.to_basis(lam, ROOT), (1, 1)) == Fraction(1, 2)
    with pytest.raises(DimensionMismatch):
        pairing(a2, a2.rho(), (1, 1, 0))


@pytest.mark.parametrize("name", ["A4", "B3", "C3", "D4", "G2"])
def test_rho_pairs_to_one_with_simple_coroots(name):
    d = build_root_system(name)
    assert all(pairing(d, d.rho(), d.simple_root(i)) == 1 for i in range(d.n))


@pytest.mark.parametrize("name", ["A4", "B3", "C3", "D4", "G2"])
def test_rho_pairs_to_coroot_height(name):
    d = build_root_system(name)
    for c in d.positive_coroots:
        assert pairing(d, d.rho(), c) == sum(c)


def test_weyl_apply_examples():
    a2 = build_root_system("A2")
    assert weyl_apply(a2, (), (1, 0)) == (1, 0)
    assert weyl_apply(a2, (0,), (0, 1)) == (1, 1)
    w1 = a2.fundamental_weight(0)
    assert weyl_apply(a2, (0,), w1) == w1 - a2.root_weight((1, 0))


def test_weyl_apply_acts_right_to_left():
    a2 = build_root_system("A2")
    # s1 s2 (alpha_1) = s1(alpha_1 + alpha_2) = alpha_2
    assert weyl_apply(a2, (0, 1), (1, 0)) == (0, 1)


def test_inversion_set_examples():
    a2 = build_root_system("A2")
    idx = lambda *roots: frozenset(a2.root_index(r) for r in roots)  # noqa: E731
    assert inversion_set(a2, (1, 0)) == idx((0, 1), (1, 1))
    assert inversion_set(a2, (0, 1)) == idx((1, 0), (1, 1))
    assert inversion_set(a2, ()) == frozenset()


def _permutation_inversions(n, word):
    """Inversion set of a word in S_{n+1}, as simple-root coordinate vectors.

    The permutation model is independent of the Cartan matrix: e_i - e_j is
    inverted by w exactly when w^{-1} reverses i < j.
    """
    perm = list(range(n + 1))
    for i in word:  # w = s_{w1} ... s_{wk}; compose as permutations of positions
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    inv = {v: k for k, v in enumerate(perm)}
    out = set()
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if inv[i] > inv[j]:
                out.add(tuple(int(i <= k < j) for k in range(n)))
    return out


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=8))
def test_inversion_set_matches_permutation_model(word):
    a4 = build_root_system("A4")
    got = {a4.positive_roots[k] for k in inversion_set(a4, word)}
    assert got == _permutation_inversions(4, word)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["A3", "B3", "G2", "C3"]), st.data())
def test_reduced_iff_inversion_count_equals_length(name, data):
    d = build_root_system(name)
    word = data.draw(st.lists(st.integers(0, d.n - 1), max_size=10))
    size = len(inversion_set(d, word))
    assert size <= len(word)
    assert is_reduced(d, word) == (size == len(word))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=9))
def test_reduced_matches_permutation_length(word):
    # a word in S_5 is reduced iff the permutation has exactly len(word) inversions
    a4 = build_root_system("A4")
    assert is_reduced(a4, word) == (len(_permutation_inversions(4, word)) == len(word))


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["A3", "B3", "G2"]),
    st.lists(st.integers(-4, 4), min_size=3, max_size=3),
    st.lists(st.integers(-4, 4), min_size=3, max_size=3),
    st.integers(-3, 3),
)
def test_pairing_is_bilinear(name, u, v, c):
    d = build_root_system(name)
    u, v = u[: d.n], v[: d.n]
    wu, wv = Weight(tuple(map(Fraction, u)), ROOT), Weight(tuple(map(Fraction, v)), ROOT)
    for co in d.positive_coroots:
        assert pairing(d, wu + wv, co) == pairing(d, wu, co) + pairing(d, wv, co)
        assert pairing(d, c * wu, co) == c * pairing(d, wu, co)
    c1, c2 = d.positive_coroots[0], d.positive_coroots[-1]
    summed = tuple(a + b for a, b in zip(c1, c2))
    assert pairing(d, wu, summed) == pairing(d, wu, c1) + pairing(d, wu, c2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A3", "B3", "C3", "G2"]), st.lists(st.fractions(), min_size=3, max_size=3))
def test_basis_round_trip(name, coords):
    d = build_root_system(name)
    w = Weight(tuple(coords[: d.n]), ROOT)
    back = d.to_basis(d.to_basis(w, FUNDAMENTAL), ROOT)
    assert back == w


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A3", "B3", "G2"]), st.data())
def test_reflections_preserve_pairing(name, data):
    # <w(lam), w(beta^vee)> = <lam, beta^vee>
    d = build_root_system(name)
    word = data.draw(st.lists(st.integers(0, d.n - 1), max_size=6))
    lam = Weight(tuple(Fraction(x) for x in data.draw(st.lists(st.integers(-5, 5), min_size=d.n, max_size=d.n))))
    for co in d.positive_coroots:
        assert pairing(d, weyl_apply(d, word, lam), weyl_apply(d, word, co, coroot=True)) == pairing(d, lam, co)


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "C3", "D4", "G2", "F4"])
def test_longest_word_inverts_every_positive_root(name):
    d = build_root_system(name)
    w0 = longest_word(d, range(d.n))
    assert len(w0) == len(d.positive_roots)
    assert is_reduced(d, w0)
    assert all(all(x <= 0 for x in col) for col in element_of(d, w0))


class TestParabolic:
    def test_full_I(self):
        d = build_root_system("B3")
        p = parabolic(d, range(3))
        assert p.w0P_word == ()
        assert p.two_rho_superP.is_zero()
        assert len(p.levi_positive_roots) == 9

    def test_a2_I1(self):
        d = build_root_system("A2")
        p = parabolic(d, {0})
        assert [d.positive_roots[k] for k in p.levi_positive_roots] == [(1, 0)]
        assert d.to_basis(p.two_rho_superP, FUNDAMENTAL).coords == (0, 3)
        assert p.w0P_word == (1, 0)
        assert format_word(p.w0P_word) == "s2s1"

    def test_borel(self):
        d = build_root_system("C3")
        p = parabolic(d, ())
        assert p.w0_levi_word == ()
        assert p.two_rho_superP == 2 * d.rho()

    @pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "D4"])
    def test_structural_invariants(self, name):
        d = build_root_system(name)
        for mask in range(2 ** d.n):
            I = {i for i in range(d.n) if mask >> i & 1}
            p = parabolic(d, I)
            assert inversion_set(d, p.w0P_word) == p.outer_roots
            assert len(p.w0P_word) == p.dimension == len(d.positive_roots) - len(p.levi_positive_roots)
            for a in I:
                assert pairing(d, p.levi_root_sum, d.simple_root(a)) == 2
            for k, r in enumerate(d.positive_roots):
                image = weyl_apply(d, p.w0_levi_word, r)
                assert (any(x < 0 for x in image)) == (k in p.levi_positive_roots)


def test_parse_word_forms():
    d = build_root_system("A3")
    assert parse_word("s2,s1", d) == (1, 0)
    assert parse_word("s2 s1 s3", d) == (1, 0, 2)
    assert parse_word("s2s1s3", d) == (1, 0, 2)
    assert parse_word("e", d) == ()
    with pytest.raises(ValueError):
        parse_word("s5", d)


def test_cartan_matrix_convention():
    # a[i][j] = <alpha_j, alpha_i^vee>: in B2 the short root alpha_2 has coroot 2 alpha_2 / |alpha_2|^2
    b2 = cartan_matrix("B", 2)
    assert b2 == [[2, -1], [-2, 2]]
