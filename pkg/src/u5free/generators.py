"""Named tournament families, substitution, and seeded random instances.

Randomness comes from SplitMix64 (Steele, Lea and Flood 2014): the output for
state ``x`` is a fixed mixing of ``x + 0x9E3779B97F4A7C15``.  ``gen_random``
draws the orientation of the ``p``-th pair (row-major over ``i < j``) from the
``p``-th output of the stream seeded with ``seed``, so any pair can be drawn
independently and the result does not depend on the platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Tournament, from_predicate, induced, popcount, transitive

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

KINDS = ("T", "U", "W", "P", "I", "Q7", "extremalG")


class ParameterError(ValueError):
    pass


def splitmix64(state: int) -> int:
    z = (state + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 stream; ``next()`` returns the k-th output for k = 0, 1, ..."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next(self) -> int:
        out = splitmix64(self.state)
        self.state = (self.state + GOLDEN) & MASK64
        return out

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next()
            if x < limit:
                return x % bound

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "Q7":
            if self.n not in (None, 7):
                raise ParameterError("Q7 takes no size parameter")
            return
        if self.n is None:
            raise ParameterError(f"family {self.kind} needs a size parameter")
        if self.kind in ("T", "U", "W"):
            if self.n < 1 or self.n % 2 == 0:
                raise ParameterError(f"{self.kind}_n requires odd n >= 1, got {self.n}")
        elif self.kind == "extremalG":
            if self.n < 1:
                raise ParameterError(f"extremalG requires k >= 1, got {self.n}")
        elif self.n < 0 or (self.kind == "P" and self.n < 1):
            raise ParameterError(f"{self.kind}_n requires n >= 1, got {self.n}")


def _circular(n: int, residues: set[int]) -> Tournament:
    return from_predicate(n, lambda i, j: (j - i) % n in residues)


def gen_family(spec: FamilySpec | str, n: Optional[int] = None) -> Tournament:
    """Build a named family member; ``gen_family("T", 5)`` or ``gen_family(FamilySpec("T", 5))``.

    Vertex ``v_i`` of the usual 1-based definitions is index ``i - 1``.  For
    ``W_n`` the apex ``v`` is index 0 and the chain vertex ``w_i`` is index ``i``.
    """
    if isinstance(spec, str):
        spec = FamilySpec(spec, n)
    kind, n = spec.kind, spec.n
    if kind == "T":
        return _circular(n, set(range(1, (n - 1) // 2 + 1)))
    if kind == "U":
        half = (n - 1) // 2
        base = _circular(n, set(range(1, half + 1)))
        return from_predicate(n, lambda i, j: base.beats(j, i) if j < half else base.beats(i, j))
    if kind == "W":
        # apex 0 loses to even-indexed chain vertices and beats odd ones
        return from_predicate(n, lambda i, j: j % 2 == 1 if i == 0 else True)
    if kind == "P":
        return from_predicate(n, lambda i, j: j - i >= 2)
    if kind == "I":
        return transitive(n)
    if kind == "Q7":
        return _circular(7, {1, 2, 4})
    return gen_extremal(n)


def compose(quotient: Tournament, factors: Sequence[Tournament]) -> tuple[Tournament, tuple[tuple[int, ...], ...]]:
    """Substitute ``factors[i]`` for quotient vertex ``i``.

    Block ``i`` occupies a consecutive range of the result, in quotient order.
    Returns ``(result, blocks)``.
    """
    if len(factors) != quotient.n:
        raise ParameterError(f"quotient has {quotient.n} vertices but {len(factors)} factors were given")
    for i, f in enumerate(factors):
        if f.n == 0:
            raise ParameterError(f"factor {i} is empty")
    offsets = []
    total = 0
    for f in factors:
        offsets.append(total)
        total += f.n
    block_masks = [((1 << f.n) - 1) << off for f, off in zip(factors, offsets)]
    rows = []
    for i, (f, off) in enumerate(zip(factors, offsets)):
        outside = 0
        for j in range(quotient.n):
            if quotient.beats(i, j):
                outside |= block_masks[j]
        for row in f.succ:
            rows.append((row << off) | outside)
    blocks = tuple(tuple(range(off, off + f.n)) for f, off in zip(factors, offsets))
    return Tournament(total, tuple(rows)), blocks


def gen_extremal(k: int) -> Tournament:
    """``G_1`` is the cyclic triangle and ``G_{k+1} = T_3(G_k, G_k, G_k)``; 3^k vertices."""
    if k < 1:
        raise ParameterError(f"extremalG requires k >= 1, got {k}")
    t3 = gen_family("T", 3)
    g = t3
    for _ in range(k - 1):
        g, _ = compose(t3, [g, g, g])
    return g


def gen_random(n: int, seed: int) -> Tournament:
    """Uniform random tournament; pair ``p`` goes to the smaller vertex iff output ``p`` has its top bit set."""
    if n < 0:
        raise ParameterError(f"negative vertex count {n}")
    rows = [0] * n
    base = seed & MASK64
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            if splitmix64((base + p * GOLDEN) & MASK64) >> 63:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            p += 1
    return Tournament(n, tuple(rows))


# The two 7-vertex U5-free primes other than T_7, W_7 and P_7 (canonical labelling;
# character v of row u is 1 iff u -> v).  The test suite rechecks both.
SMALL_U5FREE_PRIMES: tuple[tuple[str, ...], ...] = (
    ("0000001", "1000000", "1100001", "1110010", "1111001", "1110101", "0101000"),
    ("0000001", "1000011", "1100000", "1110011", "1111000", "1010101", "0010100"),
)


def _from_rows(rows: Sequence[str]) -> Tournament:
    n = len(rows)
    return Tournament(n, tuple(sum(1 << v for v, ch in enumerate(r) if ch == "1") for r in rows))


def small_u5free_primes() -> list[Tournament]:
    return [_from_rows(r) for r in SMALL_U5FREE_PRIMES]


_PAIRS = ((0, 1), (1, 2), (2, 0))


def _from_merges(part_of: Sequence[int], merges: Sequence[Sequence[int]]) -> Tournament:
    """Tournament whose part pairs are given by the merged orders of ``_PAIRS``.

    Inside a part, the order in any merge containing it is used.
    """
    rank: list[dict[int, int]] = [{v: i for i, v in enumerate(m)} for m in merges]
    which = {frozenset(pq): k for k, pq in enumerate(_PAIRS)}

    def wins(u: int, v: int) -> bool:
        pu, pv = part_of[u], part_of[v]
        k = which[frozenset((pu, pv))] if pu != pv else next(k for k, pq in enumerate(_PAIRS) if pu in pq)
        return rank[k][u] < rank[k][v]

    return from_predicate(len(part_of), wins)


def partition_tournament(sizes: Sequence[int], rng: SplitMix64) -> Tournament:
    """Random tournament on parts X, Y, Z whose pairwise unions are transitive.

    Each part is a chain and each pair of parts is merged by a uniformly random
    interleaving.  Such a tournament has no T5 or U5 (any five vertices put
    four into one of the three unions).
    """
    bounds = [0, sizes[0], sizes[0] + sizes[1], sum(sizes)]
    parts = [list(range(bounds[i], bounds[i + 1])) for i in range(3)]
    part_of = [i for i in range(3) for _ in parts[i]]
    merges = []
    for a, b in _PAIRS:
        slots = [a] * len(parts[a]) + [b] * len(parts[b])
        rng.shuffle(slots)
        its = {a: iter(parts[a]), b: iter(parts[b])}
        merges.append([next(its[w]) for w in slots])
    return _from_merges(part_of, merges)


def grow_partition_prime(m: int, rng: SplitMix64, tries: int = 40) -> Tournament:
    """Random prime with a triangle partition on ``m >= 5`` vertices.

    Starts from W_5 and inserts vertices at random positions of the three
    merged orders, keeping a step only if the result is prime.  When single
    insertions keep failing, two vertices are inserted at once.
    """
    from .core import mask_of, transitive_order
    from .decomposition import is_prime

    if m < 5:
        raise ParameterError("grow_partition_prime needs m >= 5")
    w5 = gen_family("W", 5)
    start_parts = [0, 1, 2, 1, 2]  # apex / odd chain / even chain
    start_merges = []
    for a, b in _PAIRS:
        members = mask_of(v for v in range(5) if start_parts[v] in (a, b))
        start_merges.append(list(transitive_order(w5, members)))
    while True:
        part_of = list(start_parts)
        merges = [list(x) for x in start_merges]
        while len(part_of) < m:
            for attempt in range(tries):
                step = 2 if attempt >= tries // 2 and len(part_of) + 2 <= m else 1
                cand_part = list(part_of)
                cand = [list(x) for x in merges]
                for _ in range(step):
                    _insert_vertex(cand_part, cand, rng)
                if is_prime(_from_merges(cand_part, cand)):
                    part_of, merges = cand_part, cand
                    break
            else:
                break  # stuck; start over
        if len(part_of) == m:
            return _from_merges(part_of, merges)


def _insert_vertex(part_of: list[int], merges: list[list[int]], rng: SplitMix64) -> None:
    v = len(part_of)
    p = rng.below(3)
    size = part_of.count(p)
    k = rng.below(size + 1)  # new position in the chain of part p
    for merge, pair in zip(merges, _PAIRS):
        if p not in pair:
            continue
        own = [i for i, u in enumerate(merge) if part_of[u] == p]
        lo = own[k - 1] + 1 if k > 0 else 0
        hi = own[k] if k < size else len(merge)
        merge.insert(rng.between(lo, hi), v)
    part_of.append(p)


def _random_prime(m: int, rng: SplitMix64) -> Tournament:
    """A U5-free prime on exactly ``m`` vertices (``m != 4``) from the allowed families."""
    if m <= 2:
        return transitive(m)
    options = ["P", "partition"]
    if m % 2 == 1:
        options += ["T", "W", "T"]
    small = [t for t in small_u5free_primes() if t.n == m]
    if small:
        options.append("small")
    kind = rng.choice(options)
    if kind in ("T", "W"):
        return gen_family(kind, m)
    if kind == "small":
        return rng.choice(small)
    if kind == "partition" and m >= 5:
        return grow_partition_prime(m, rng)
    return gen_family("P", m)


def gen_random_u5free(target_n: int, seed: int, max_quotient: int = 16) -> Tournament:
    """Random U5-free tournament on ``target_n`` vertices built by nested substitution.

    Every quotient is a U5-free prime, so the composite is U5-free.  Nesting
    depth is at most ``ceil(log2 target_n)``; once depth runs out the remaining
    block is an induced prefix of a U5-free prime, which stays U5-free.
    """
    if target_n < 1:
        raise ParameterError(f"target_n must be >= 1, got {target_n}")
    rng = SplitMix64(seed)
    depth = math.ceil(math.log2(target_n)) if target_n > 1 else 0
    return _build(target_n, depth, rng, max_quotient)


def _build(size: int, depth: int, rng: SplitMix64, max_quotient: int) -> Tournament:
    if size == 1:
        return transitive(1)
    if depth == 0:
        m = size if size != 4 else 5
        t = _random_prime(m, rng)
        return induced(t, (1 << size) - 1)[0]
    choices = [m for m in range(2, min(size, max_quotient) + 1) if m != 4]
    m = rng.choice(choices)
    quotient = _random_prime(m, rng)
    # random composition of size into m positive parts
    cuts = sorted(_sample_distinct(rng, size - 1, m - 1))
    edges = [0] + [c + 1 for c in cuts] + [size]
    parts = [edges[i + 1] - edges[i] for i in range(m)]
    factors = [_build(p, depth - 1, rng, max_quotient) for p in parts]
    return compose(quotient, factors)[0]


def _sample_distinct(rng: SplitMix64, population: int, k: int) -> list[int]:
    pool = list(range(population))
    out = []
    for i in range(k):
        j = i + rng.below(population - i)
        pool[i], pool[j] = pool[j], pool[i]
        out.append(pool[i])
    return out
