import pytest

from fgindex.config import Budget
from fgindex.errors import BudgetExceeded, EmptyInput
from fgindex.gamma import Stream, all_matches, gamma, gamma_bound, match, star_index
from fgindex.prefix_suffix import loops
from fgindex.words import EPSILON, invert

import oracles

ALL = ["rank3", "rank4", "fibonacci", "rank6", "rank14"]

SIDES = ("minus", "plus")


@pytest.fixture(params=ALL)
def phi(request):
    return request.getfixturevalue(request.param)


def affixes(phi, k, side):
    """Nonempty rotation seeds of the given side: loop prefixes rotate on the
    minus side (the word grows leftward), loop suffixes on the plus side."""
    picked = set()
    for t in loops(phi, k):
        word = t.p if side == "minus" else t.s
        if word != EPSILON:
            picked.add(word)
    return sorted(picked)


# -- single rotation steps -------------------------------------------------------


def test_gamma_matches_oracle(phi):
    for k in (1, 2, 3):
        for side in SIDES:
            seeds = affixes(phi, k, side) + [(a,) for a in phi.alphabet.letters()]
            for u in seeds:
                assert gamma(phi, k, side, u) == oracles.gamma_step(
                    phi, k, side, u
                )


def test_gamma_length_recurrence(phi):
    for side in SIDES:
        for u in affixes(phi, 2, side):
            eaten = u[-1] if side == "minus" else u[0]
            out = gamma(phi, 2, side, u)
            assert len(out) == len(u) - 1 + len(phi.letter_image(eaten, 2))


def test_gamma_rejects_empty_words(fibonacci):
    with pytest.raises(EmptyInput):
        gamma(fibonacci, 1, "minus", EPSILON)


def test_gamma_rejects_unknown_side(fibonacci):
    with pytest.raises(ValueError):
        gamma(fibonacci, 1, "sideways", (1,))


# -- streams ----------------------------------------------------------------------


def test_stream_yields_the_rotation_orbit(phi):
    for k in (1, 2):
        for side in SIDES:
            for u in affixes(phi, k, side)[:4]:
                stream = Stream(phi, k, side, u)
                stream.ensure_steps(6)
                orbit = oracles.gamma_iterates(phi, k, side, u, 6)
                for i in range(7):
                    assert stream.word_at(i) == orbit[i]


def test_stream_hashes_separate_unequal_windows(rank4):
    seeds = affixes(rank4, 1, "minus")
    streams = [Stream(rank4, 1, "minus", u) for u in seeds]
    for s in streams:
        s.ensure_steps(5)
    windows = [
        (s.window_hash(i), s.word_at(i))
        for s in streams
        for i in range(6)
    ]
    for ha, wa in windows:
        for hb, wb in windows:
            assert (ha == hb) == (wa == wb)


def test_stream_window_equal_is_word_equality(rank3):
    seeds = affixes(rank3, 2, "plus")
    sa = Stream(rank3, 2, "plus", seeds[0])
    sb = Stream(rank3, 2, "plus", seeds[-1])
    sa.ensure_steps(5)
    sb.ensure_steps(5)
    for i in range(6):
        for j in range(6):
            assert sa.window_equal(i, sb, j) == (
                sa.word_at(i) == sb.word_at(j)
            )


# -- the overhang bound -------------------------------------------------------------


def test_gamma_bound_matches_definition(phi):
    for k in (1, 2, 3):
        for side in SIDES:
            assert gamma_bound(phi, k, side) == oracles.overhang_bound(
                phi, k, side
            )


def test_gamma_bound_is_cached(fibonacci):
    first = gamma_bound(fibonacci, 2, "minus")
    assert fibonacci.gamma_bound_cache[(2, "minus")] == first
    assert gamma_bound(fibonacci, 2, "minus") == first


def test_gamma_bound_rejects_unknown_side(fibonacci):
    with pytest.raises(ValueError):
        gamma_bound(fibonacci, 1, "diagonal")


# -- cutoff indices ------------------------------------------------------------------


def test_star_index_matches_direct_search(phi):
    for k in (1, 2):
        for side in SIDES:
            g = gamma_bound(phi, k, side)
            for u in affixes(phi, k, side)[:4]:
                stream = Stream(phi, k, side, u)
                got = star_index(phi, k, side, stream, g)
                assert got == oracles.star_scan(phi, k, side, u, g)


# -- rotation matching ---------------------------------------------------------------


def test_match_agrees_with_grid_scan(phi):
    for k in (1, 2):
        for side in SIDES:
            seeds = affixes(phi, k, side)
            for xi in range(len(seeds)):
                for yi in range(xi + 1, len(seeds)):
                    x, y = seeds[xi], seeds[yi]
                    got = match(phi, k, side, x, y)
                    scanned = oracles.match_scan(phi, k, side, x, y)
                    if got is None:
                        assert scanned is None
                        continue
                    i, j, w = got
                    if max(i, j) <= 10:
                        assert scanned is not None
                        si, sj, sval = scanned
                        assert (i, j) == (si, sj)
                        expected = sval if side == "minus" else invert(sval)
                        assert w == expected


def test_match_root_is_minimal_and_forward_invariant(phi):
    for side in SIDES:
        seeds = affixes(phi, 2, side)
        for xi in range(len(seeds)):
            for yi in range(xi + 1, len(seeds)):
                got = match(phi, 2, side, seeds[xi], seeds[yi])
                if got is None:
                    continue
                i, j, _ = got
                depth = max(i, j) + 2
                xs = oracles.gamma_iterates(phi, 2, side, seeds[xi], depth)
                ys = oracles.gamma_iterates(phi, 2, side, seeds[yi], depth)
                assert xs[i] == ys[j]
                assert xs[i + 1] == ys[j + 1]
                if i > 0 and j > 0:
                    assert xs[i - 1] != ys[j - 1]


def test_match_of_equal_affixes_is_immediate(rank4):
    u = affixes(rank4, 1, "minus")[0]
    assert match(rank4, 1, "minus", u, u) == (0, 0, u)
    p = affixes(rank4, 1, "plus")[0]
    assert match(rank4, 1, "plus", p, p) == (0, 0, invert(p))


def test_match_with_blank_affixes(rank4):
    u = affixes(rank4, 1, "minus")[0]
    assert match(rank4, 1, "minus", EPSILON, EPSILON) == (0, 0, EPSILON)
    assert match(rank4, 1, "minus", EPSILON, u) is None
    assert match(rank4, 1, "minus", u, EPSILON) is None


def test_all_matches_equals_pairwise_matching(phi):
    for k in (1, 2):
        for side in SIDES:
            seeds = affixes(phi, k, side)
            joint = all_matches(phi, k, side, seeds)
            for xi in range(len(seeds)):
                for yi in range(xi + 1, len(seeds)):
                    lone = match(phi, k, side, seeds[xi], seeds[yi])
                    assert joint.get((xi, yi)) == lone


def test_all_matches_rejects_blank_affixes(rank4):
    with pytest.raises(ValueError):
        all_matches(rank4, 1, "minus", [EPSILON, (1,)])


def test_all_matches_needs_two_affixes(rank4):
    assert all_matches(rank4, 1, "minus", []) == {}
    assert all_matches(rank4, 1, "minus", [(1, 2)]) == {}


def test_all_matches_is_deterministic(rank6):
    seeds = affixes(rank6, 2, "minus")
    assert all_matches(rank6, 2, "minus", seeds) == all_matches(
        rank6, 2, "minus", seeds
    )


def test_matching_respects_the_letter_budget(rank4):
    seeds = affixes(rank4, 2, "minus")
    with pytest.raises(BudgetExceeded):
        budget = Budget(20)
        for xi in range(len(seeds)):
            for yi in range(xi + 1, len(seeds)):
                match(rank4, 2, "minus", seeds[xi], seeds[yi], budget)
