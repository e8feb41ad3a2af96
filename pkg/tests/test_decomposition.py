from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import tournaments
from u5free.core import bits, from_predicate, is_homogeneous, is_transitive, popcount, transitive
from u5free.decomposition import (
    LEAF,
    LINEAR,
    PRIME,
    ContractViolation,
    find_nontrivial_homogeneous_set,
    is_prime,
    maximal_modules_avoiding,
    module_closure,
    quotient,
    recompose,
    substitution_decomposition,
)
from u5free.detection import enumerate_tournaments, find_embedding
from u5free.generators import compose, gen_extremal, gen_family, gen_random

U5 = gen_family("U", 5)


def t5_plus_vertex(b: set[int]):
    """T5 on 0..4 plus vertex 5 that loses exactly to the vertices in ``b``."""
    t5 = gen_family("T", 5)
    return from_predicate(6, lambda i, j: t5.beats(i, j) if j < 5 else i in b)


def test_homogeneous_set_examples():
    assert find_nontrivial_homogeneous_set(gen_family("T", 5)) is None
    t, _ = compose(gen_family("T", 3), [transitive(2), transitive(1), transitive(1)])
    m = find_nontrivial_homogeneous_set(t)
    assert m is not None and popcount(m) >= 2 and is_homogeneous(t, m)
    assert m & 0b11 == 0b11 or popcount(m) == 2


def test_six_vertex_extension_with_adjacent_predecessors_has_a_module():
    # u = 5 loses to v1 and v2 (indices 0, 1); then {u, v3} is homogeneous
    h = t5_plus_vertex({0, 1})
    assert is_homogeneous(h, (1 << 5) | (1 << 2))
    m = find_nontrivial_homogeneous_set(h)
    assert m is not None and is_homogeneous(h, m)
    assert not is_prime(h)


@given(tournaments(max_n=7))
def test_homogeneous_set_search_matches_brute_force(t):
    m = find_nontrivial_homogeneous_set(t)
    brute = oracles.homogeneous_sets(t)
    assert (m is None) == (not brute)
    if m is not None:
        assert frozenset(bits(m)) in brute


def test_module_closure_is_least_module():
    t = gen_random(7, 3)
    for u in range(7):
        for w in range(u + 1, 7):
            c = module_closure(t, (1 << u) | (1 << w))
            assert is_homogeneous(t, c)
            for s in oracles.homogeneous_sets(t):
                if u in s and w in s:
                    assert set(bits(c)) <= s


@given(tournaments(min_n=2, max_n=7), st.data())
def test_maximal_modules_avoiding_vertex(t, data):
    v = data.draw(st.integers(0, t.n - 1))
    parts = maximal_modules_avoiding(t, v)
    assert sum(parts) == t.full & ~(1 << v) and sum(map(popcount, parts)) == t.n - 1
    modules = [s for s in oracles.homogeneous_sets(t) if v not in s]
    for p in parts:
        assert is_homogeneous(t, p)
        # nothing strictly larger avoiding v contains it
        assert not any(set(bits(p)) < s for s in modules)


def test_primality_small_counts():
    assert all(is_prime(t) for n in range(3) for t in enumerate_tournaments(n))
    assert not any(is_prime(t) for t in enumerate_tournaments(4))
    assert sum(is_prime(t) for t in enumerate_tournaments(5)) == 3


def test_quotient_examples():
    t = gen_random(8, 1)
    assert quotient(t, 1 << 3) == t
    a, b, c = gen_family("T", 3), transitive(2), gen_family("W", 5)
    comp, blocks = compose(gen_family("T", 3), [a, b, c])
    q = quotient(comp, sum(1 << v for v in blocks[0]))
    assert q.n == b.n + c.n + 1
    with pytest.raises(ContractViolation):
        quotient(t, 0)
    with pytest.raises(ContractViolation):
        quotient(gen_family("T", 5), 0b11)


def test_u5_freeness_passes_through_quotients():
    inner = gen_family("W", 5)
    comp, blocks = compose(gen_family("T", 5), [inner] + [transitive(1)] * 4)
    x = sum(1 << v for v in blocks[0])
    assert find_embedding(comp, U5) is None
    assert find_embedding(quotient(comp, x), U5) is None
    bad, blocks = compose(gen_family("T", 3), [U5, transitive(1), transitive(1)])
    assert find_embedding(bad, U5) is not None
    assert find_embedding(quotient(bad, sum(1 << v for v in blocks[0])), U5) is None


def test_decomposition_examples():
    t5 = gen_family("T", 5)
    tree = substitution_decomposition(t5)
    assert tree.kind == PRIME and tree.quotient == t5 and all(popcount(b) == 1 for b in tree.blocks)
    i4 = substitution_decomposition(transitive(4))
    assert i4.kind == LINEAR and i4.quotient == transitive(4)
    g2 = substitution_decomposition(gen_extremal(2))
    assert g2.kind == PRIME and g2.quotient == gen_family("T", 3)
    assert g2.blocks == (0b111, 0b111000, 0b111000000)
    assert all(c.kind == PRIME and c.quotient == gen_family("T", 3) for c in g2.children)


def _check_tree(t, node):
    assert node.quotient.n == len(node.blocks)
    assert sum(node.blocks) == node.vertices
    if node.kind == LEAF:
        assert popcount(node.vertices) == 1
        return
    assert node.quotient.n > 1
    for i, b in enumerate(node.blocks):
        assert is_homogeneous(t, b, node.vertices)
        for j, b2 in enumerate(node.blocks):
            if i != j:
                assert t.beats(min(bits(b)), min(bits(b2))) == node.quotient.beats(i, j)
    if node.kind == PRIME:
        assert is_prime(node.quotient) and node.quotient.n >= 3
        # blocks of a strongly connected node are maximal modules
        for i, b in enumerate(node.blocks):
            for w in bits(node.vertices & ~b):
                assert not is_homogeneous(t, b | (1 << w), node.vertices) or (b | (1 << w)) == node.vertices
    else:
        assert is_transitive(node.quotient) == tuple(range(node.quotient.n))
    for c in node.children:
        _check_tree(t, c)


@given(tournaments(min_n=1, max_n=12))
def test_decomposition_invariants_and_round_trip(t):
    tree = substitution_decomposition(t)
    _check_tree(t, tree)
    assert recompose(tree, t.n) == t


def test_round_trip_on_seeded_random():
    for seed in range(1000):
        n = 1 + seed % 12
        t = gen_random(n, seed)
        assert recompose(substitution_decomposition(t), n) == t


def test_six_vertex_extension_with_one_predecessor_contains_u5_and_w5():
    from u5free.core import are_isomorphic, induced

    h = t5_plus_vertex({0})
    u = 5
    assert are_isomorphic(induced(h, {1, u, 3, 4, 0})[0], U5) is not None
    assert are_isomorphic(induced(h, {4, 0, u, 1, 2})[0], gen_family("W", 5)) is not None


def test_six_vertex_extension_with_spread_predecessors_contains_u5_and_w5():
    from u5free.core import are_isomorphic, induced

    h = t5_plus_vertex({0, 2})
    assert is_prime(h)
    assert are_isomorphic(induced(h, {1, 0, 2, 5, 4})[0], U5) is not None
    assert are_isomorphic(induced(h, {1, 2, 5, 3, 4})[0], gen_family("W", 5)) is not None
