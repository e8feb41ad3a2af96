from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import tournaments
import oracles
from u5free.core import (
    Tournament,
    TournamentError,
    are_isomorphic,
    cyclic_triangles,
    dual,
    empty,
    from_arcs,
    induced,
    is_homogeneous,
    is_isomorphism,
    is_transitive,
    make_tournament,
    relabel,
    strong_components,
    transitive,
)
from u5free.generators import gen_family


def u5_orientation() -> dict:
    # v2 -> v1; otherwise v_i -> v_j when j - i = 1, 2 (mod 5), 1-based
    orient = {}
    for i in range(1, 6):
        for j in range(i + 1, 6):
            if (i, j) == (1, 2):
                orient[(0, 1)] = 1
            else:
                orient[(i - 1, j - 1)] = i - 1 if (j - i) % 5 in (1, 2) else j - 1
    return orient


def test_make_tournament_u5_definition():
    t = make_tournament(5, u5_orientation())
    assert t == gen_family("U", 5)
    # reversing v2 -> v1 moves one win from v1 to v2
    assert t.scores() == (1, 3, 2, 2, 2)
    # vertex 1 (0-based), i.e. v_2, beats v_1, v_3, v_4
    assert sorted(v for v in range(5) if t.beats(1, v)) == [0, 2, 3]


def test_make_tournament_small_cases():
    assert make_tournament(0, {}) == empty()
    cyc = make_tournament(3, {(0, 1): 0, (1, 2): 1, (0, 2): 2})
    assert cyc.scores() == (1, 1, 1)


@pytest.mark.parametrize("orient, msg", [
    ({(0, 1): 0}, "missing pair (0, 2)"),
    ({(0, 1): 0, (1, 0): 1, (0, 2): 0, (1, 2): 1}, "duplicate pair"),
    ({(0, 1): 0, (0, 2): 0, (1, 5): 1}, "out of range"),
    ({(0, 0): 0, (0, 1): 0, (0, 2): 0}, "self-pair"),
    ({(0, 1): 2, (0, 2): 0, (1, 2): 1}, "winner"),
])
def test_make_tournament_errors_name_the_pair(orient, msg):
    with pytest.raises(TournamentError, match=msg.replace("(", r"\(").replace(")", r"\)")):
        make_tournament(3, orient)


def test_constructor_rejects_bad_rows():
    with pytest.raises(TournamentError):
        Tournament(2, (0b10, 0b01))
    with pytest.raises(TournamentError):
        Tournament(2, (0, 0))
    with pytest.raises(TournamentError):
        Tournament(2, (0b1,))


def test_dual_examples():
    t5 = gen_family("T", 5)
    assert are_isomorphic(dual(t5), t5) is not None
    i3 = transitive(3)
    assert is_transitive(dual(i3)) == (2, 1, 0)
    w7 = gen_family("W", 7)
    assert are_isomorphic(w7, dual(w7)) is not None


@given(tournaments())
def test_dual_is_an_involution(t):
    assert dual(dual(t)) == t


@given(tournaments(max_n=7), st.data())
def test_induced_commutes_with_dual(t, data):
    s = data.draw(st.integers(0, t.full))
    assert dual(induced(t, s)[0]) == induced(dual(t), s)[0]


def test_induced_examples():
    u5 = gen_family("U", 5)
    assert induced(u5, u5.full) == (u5, (0, 1, 2, 3, 4))
    assert induced(u5, 0)[0] == empty()
    # the four vertices v2..v5 of U5 are not transitive: v2 -> v3 -> v5 -> v2
    sub, labels = induced(u5, {1, 2, 3, 4})
    assert is_transitive(sub) is None
    assert (1, 2, 4) in [tuple(sorted(c)) for c in cyclic_triangles(u5, 0b11110)]
    with pytest.raises(TournamentError):
        induced(u5, {7})


def test_is_transitive_examples():
    assert is_transitive(transitive(6)) == tuple(range(6))
    assert is_transitive(gen_family("T", 3)) is None
    w5 = gen_family("W", 5)
    assert is_transitive(induced(w5, {1, 2, 3, 4})[0]) == (0, 1, 2, 3)


@given(tournaments(max_n=9))
def test_is_transitive_iff_no_cyclic_triangle(t):
    order = is_transitive(t)
    assert (order is not None) == (not oracles.has_cyclic_triangle(t, range(t.n)))
    if order is not None:
        assert all(t.beats(order[i], order[j]) for i in range(t.n) for j in range(i + 1, t.n))


def test_strong_components_examples():
    assert strong_components(transitive(4)) == [1, 2, 4, 8]
    assert strong_components(gen_family("T", 5)) == [0b11111]
    assert strong_components(empty()) == []


@given(tournaments(max_n=9))
def test_strong_components_match_networkx_and_dominate(t):
    comps = strong_components(t)
    sets = {frozenset(v for v in range(t.n) if c >> v & 1) for c in comps}
    assert sets == oracles.strong_component_sets(t)
    for i, j in itertools.combinations(range(len(comps)), 2):
        for u in range(t.n):
            for v in range(t.n):
                if comps[i] >> u & 1 and comps[j] >> v & 1:
                    assert t.beats(u, v)


def test_are_isomorphic_examples():
    assert are_isomorphic(gen_family("T", 3), gen_family("U", 3)) is not None
    assert are_isomorphic(gen_family("T", 5), gen_family("U", 5)) is None


@given(tournaments(max_n=7), st.permutations(range(7)))
def test_are_isomorphic_finds_relabellings(t, perm):
    perm = [p for p in perm if p < t.n]
    r = relabel(t, perm)
    f = are_isomorphic(t, r)
    assert f is not None and is_isomorphism(t, r, f)
    assert are_isomorphic(r, t) is not None


@given(tournaments(max_n=6), tournaments(max_n=6))
def test_are_isomorphic_matches_networkx(a, b):
    assert (are_isomorphic(a, b) is not None) == oracles.isomorphic(a, b)


def test_are_isomorphic_returns_least_bijection():
    t = gen_family("T", 5)
    autos = [p for p in itertools.permutations(range(5)) if is_isomorphism(t, t, p)]
    assert are_isomorphic(t, t) == min(autos)


@given(tournaments())
def test_score_sum(t):
    assert sum(t.scores()) == t.n * (t.n - 1) // 2
    assert all(popcnt + bin(t.pred[u]).count("1") == t.n - 1 for u, popcnt in enumerate(t.scores()))


def test_from_arcs_and_homogeneous():
    t = from_arcs(3, [(0, 1), (1, 2), (0, 2)])
    assert t == transitive(3)
    assert is_homogeneous(t, 0b110)
    assert not is_homogeneous(gen_family("T", 3), 0b011)
