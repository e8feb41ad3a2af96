from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from u5free.core import are_isomorphic, induced, is_homogeneous, mask_of, transitive
from u5free.decomposition import is_prime
from u5free.detection import find_embedding
from u5free.generators import (
    FamilySpec,
    ParameterError,
    SplitMix64,
    compose,
    gen_extremal,
    gen_family,
    gen_random,
    gen_random_u5free,
    grow_partition_prime,
    partition_tournament,
    small_u5free_primes,
    splitmix64,
)

U5 = gen_family("U", 5)


def test_splitmix64_reference_outputs():
    # first outputs of the published reference stream seeded with 0
    rng = SplitMix64(0)
    assert [rng.next() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F,
    ]
    assert splitmix64(0) == 0xE220A8397B1DCDAF


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_circular_definition(n):
    t = gen_family("T", n)
    for i in range(n):
        for j in range(n):
            if i != j:
                assert t.beats(i, j) == ((j - i) % n in range(1, (n - 1) // 2 + 1))
    assert set(t.scores()) == {(n - 1) // 2}


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_u_differs_from_t_inside_the_first_half(n):
    t, u = gen_family("T", n), gen_family("U", n)
    half = (n - 1) // 2
    for i in range(n):
        for j in range(i + 1, n):
            assert (t.beats(i, j) != u.beats(i, j)) == (j < half)


def test_w_definition():
    w = gen_family("W", 7)
    for i in range(1, 7):
        for j in range(i + 1, 7):
            assert w.beats(i, j)
        assert w.beats(0, i) == (i % 2 == 1)


def test_paley_seven():
    q = gen_family("Q7")
    assert set(q.scores()) == {3}
    for i in range(7):
        for j in range(7):
            if i != j:
                assert q.beats(i, j) == ((j - i) % 7 in (1, 2, 4))


def test_p4_is_not_prime_but_other_p_are():
    assert not is_prime(gen_family("P", 4))
    assert all(is_prime(gen_family("P", n)) for n in (1, 2, 3, 5, 6, 7, 8, 9))


@pytest.mark.parametrize("kind, n", [("T", 4), ("U", 0), ("W", -1), ("extremalG", 0), ("P", 0), ("bogus", 3), ("Q7", 5)])
def test_bad_parameters(kind, n):
    with pytest.raises(ParameterError):
        FamilySpec(kind, n)


def test_compose_examples():
    t = gen_family("T", 3)
    c, blocks = compose(t, [t, t, t])
    assert c.n == 9 and blocks == ((0, 1, 2), (3, 4, 5), (6, 7, 8))
    a, b = gen_family("T", 3), transitive(2)
    s, _ = compose(transitive(2), [a, b])
    assert all(s.beats(u, v) for u in range(3) for v in range(3, 5))
    assert induced(s, {0, 1, 2})[0] == a
    one, _ = compose(transitive(1), [U5])
    assert one == U5
    with pytest.raises(ParameterError):
        compose(t, [t])
    with pytest.raises(ParameterError):
        compose(transitive(1), [transitive(0)])


@given(st.integers(1, 5), st.data())
def test_compose_blocks_are_homogeneous(m, data):
    quotient = gen_random(m, data.draw(st.integers(0, 2**64 - 1)))
    factors = [gen_random(data.draw(st.integers(1, 3)), data.draw(st.integers(0, 99))) for _ in range(m)]
    c, blocks = compose(quotient, factors)
    assert c.n == sum(f.n for f in factors)
    for i, b in enumerate(blocks):
        assert is_homogeneous(c, mask_of(b))
        assert induced(c, b)[0] == factors[i]
        for j, b2 in enumerate(blocks):
            if i != j:
                assert c.beats(b[0], b2[0]) == quotient.beats(i, j)


def test_extremal_family():
    assert are_isomorphic(gen_extremal(1), gen_family("T", 3)) is not None
    g2 = gen_extremal(2)
    assert g2.n == 9
    assert find_embedding(g2, U5) is None
    for k in (2, 3):
        g = gen_extremal(k)
        assert induced(g, range(3 ** (k - 1)))[0] == gen_extremal(k - 1)


def test_gen_random_determinism_and_edge_cases():
    assert gen_random(12, 99) == gen_random(12, 99)
    assert gen_random(12, 99) != gen_random(12, 100)
    assert gen_random(0, 5).n == 0


def test_gen_random_frozen_instance():
    # pair p (row-major over i < j) goes to the smaller vertex iff output p has its top bit set
    t = gen_random(4, 0)
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    stream = SplitMix64(0)
    for p in pairs:
        assert t.beats(*p) == bool(stream.next() >> 63)
    assert t.succ == (0b0010, 0b0100, 0b0001, 0b0111)


def test_gen_random_vertex_degree_concentrates():
    mean = sum(gen_random(11, s).out_degree(0) for s in range(1000)) / 1000
    assert abs(mean - 5.0) <= 5 * 0.15


@pytest.mark.parametrize("n", range(1, 10))
def test_gen_random_u5free_is_u5free_small(n):
    for seed in range(6):
        t = gen_random_u5free(n, seed)
        assert t.n == n
        assert find_embedding(t, U5) is None


def test_gen_random_u5free_determinism():
    assert gen_random_u5free(1, 3).n == 1
    assert gen_random_u5free(60, 7) == gen_random_u5free(60, 7)


def test_small_primes_table():
    for t in small_u5free_primes():
        assert is_prime(t) and oracles.is_prime(t)
        assert find_embedding(t, U5) is None
        assert find_embedding(t, gen_family("T", 5)) is None
        assert all(are_isomorphic(gen_family(k, 7), t) is None for k in "PW")


def test_random_partition_tournaments_avoid_t5_and_u5():
    rng = SplitMix64(11)
    for _ in range(10):
        t = partition_tournament((rng.between(1, 3), rng.between(1, 3), rng.between(1, 3)), rng)
        assert find_embedding(t, U5) is None and find_embedding(t, gen_family("T", 5)) is None
    for m in (5, 6, 8, 9):
        t = grow_partition_prime(m, rng)
        assert t.n == m and is_prime(t)
        assert not oracles.contains(t, U5)
