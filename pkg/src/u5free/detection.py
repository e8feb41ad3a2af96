"""Brute-force pattern search and exhaustive enumeration of small tournaments.

This is the ground truth the structural algorithms are checked against, so
everything here is deliberately direct.

Canonical form: the adjacency bit string read column by column over the upper
triangle, ``(0,1), (0,2), (1,2), (0,3), ...``, bit ``1`` meaning the earlier
vertex beats the later one, first pair most significant.  The canonical code
of a tournament is the least such string over all vertex orderings.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .core import Tournament, bits

MAX_ENUM_N = 7


class EnumerationLimit(ValueError):
    pass


@dataclass(frozen=True)
class Embedding:
    """``image[i]`` is the host vertex playing pattern vertex ``i``."""

    pattern: Tournament
    image: tuple[int, ...]

    def verify(self, host: Tournament) -> bool:
        p, img = self.pattern, self.image
        if len(img) != p.n or len(set(img)) != p.n:
            return False
        if any(not 0 <= v < host.n for v in img):
            return False
        return all(
            p.beats(i, j) == host.beats(img[i], img[j])
            for i in range(p.n) for j in range(i + 1, p.n)
        )


def _subset_code(t: Tournament, verts: Sequence[int]) -> int:
    code = 0
    for j in range(1, len(verts)):
        row_j = verts[j]
        for i in range(j):
            code = (code << 1) | (t.succ[verts[i]] >> row_j & 1)
    return code


@lru_cache(maxsize=64)
def _pattern_table(pattern: Tournament) -> dict[int, tuple[int, ...]]:
    """Map the code of each labelled copy of ``pattern`` to the least position map.

    For a sorted host subset ``s`` with code ``c``, ``table[c] = pos`` means
    pattern vertex ``i`` sits at ``s[pos[i]]``.
    """
    k = pattern.n
    table: dict[int, tuple[int, ...]] = {}
    for perm in itertools.permutations(range(k)):
        # perm[i] = subset position of pattern vertex i
        inv = [0] * k
        for i, p in enumerate(perm):
            inv[p] = i
        code = 0
        for j in range(1, k):
            for i in range(j):
                code = (code << 1) | int(pattern.beats(inv[i], inv[j]))
        if code not in table or perm < table[code]:
            table[code] = perm
    return table


def find_embedding(host: Tournament, pattern: Tournament) -> Optional[Embedding]:
    """First copy of ``pattern`` in ``host``: subsets in lexicographic order, then least bijection."""
    k = pattern.n
    if k > host.n:
        return None
    table = _pattern_table(pattern)
    for subset in itertools.combinations(range(host.n), k):
        hit = table.get(_subset_code(host, subset))
        if hit is not None:
            emb = Embedding(pattern, tuple(subset[p] for p in hit))
            assert emb.verify(host)
            return emb
    return None


def is_pattern_free(host: Tournament, pattern: Tournament) -> bool:
    return find_embedding(host, pattern) is None


def iter_embeddings_subsets(host: Tournament, pattern: Tournament) -> Iterator[tuple[int, ...]]:
    """All host vertex subsets inducing a copy of ``pattern``."""
    table = _pattern_table(pattern)
    for subset in itertools.combinations(range(host.n), pattern.n):
        if _subset_code(host, subset) in table:
            yield subset


# -- canonical forms ---------------------------------------------------------

def code_of(t: Tournament) -> int:
    return _subset_code(t, range(t.n))


def from_code(n: int, code: int) -> Tournament:
    rows = [0] * n
    pos = n * (n - 1) // 2 - 1
    for j in range(1, n):
        for i in range(j):
            if code >> pos & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            pos -= 1
    return Tournament(n, tuple(rows))


def canonical_code(t: Tournament, stop_unless_identity: bool = False) -> Optional[int]:
    """Least column-ordered code over all vertex orderings.

    Positions are filled one at a time; the bits of column ``j`` only depend
    on the first ``j + 1`` chosen vertices, so at each level only the
    orderings that reach the least column value survive.  With
    ``stop_unless_identity`` the search returns None as soon as the identity
    ordering falls behind, which makes "is this labelling canonical?" cheap.
    """
    n = t.n
    if n <= 1:
        return 0
    frontier: list[tuple[tuple[int, ...], int]] = [((v,), t.full & ~(1 << v)) for v in range(n)]
    code = 0
    for j in range(1, n):
        best = None
        nxt: list[tuple[tuple[int, ...], int]] = []
        for prefix, left in frontier:
            for c in bits(left):
                col = 0
                for p in prefix:
                    col = (col << 1) | (t.succ[p] >> c & 1)
                if best is None or col < best:
                    best = col
                    nxt = [(prefix + (c,), left & ~(1 << c))]
                elif col == best:
                    nxt.append((prefix + (c,), left & ~(1 << c)))
        if stop_unless_identity:
            own = 0
            for i in range(j):
                own = (own << 1) | (t.succ[i] >> j & 1)
            if best < own:
                return None
        code = (code << j) | best
        frontier = nxt
    return code


def canonical_form(t: Tournament) -> Tournament:
    return from_code(t.n, canonical_code(t))


def _perm_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """For every permutation: source pair index and flip flag of each target pair."""
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    index = {p: k for k, p in enumerate(pairs)}
    npairs = len(pairs)
    perms = list(itertools.permutations(range(n)))
    src = np.zeros((len(perms), npairs), dtype=np.int64)
    flip = np.zeros((len(perms), npairs), dtype=np.int64)
    for r, perm in enumerate(perms):
        for k, (i, j) in enumerate(pairs):
            a, b = perm[i], perm[j]
            if a < b:
                src[r, k] = npairs - 1 - index[(a, b)]
            else:
                src[r, k] = npairs - 1 - index[(b, a)]
                flip[r, k] = 1
    return src, flip


def canonical_codes_exhaustive(n: int, codes: np.ndarray) -> np.ndarray:
    """Second canonicaliser: try every one of the n! orderings, vectorised over ``codes``."""
    codes = np.asarray(codes, dtype=np.int64)
    if n <= 1:
        return np.zeros_like(codes)
    src, flip = _perm_tables(n)
    npairs = n * (n - 1) // 2
    best = np.full(codes.shape, np.iinfo(np.int64).max, dtype=np.int64)
    for r in range(src.shape[0]):
        out = np.zeros_like(codes)
        for k in range(npairs):
            bit = ((codes >> src[r, k]) & 1) ^ flip[r, k]
            out |= bit << (npairs - 1 - k)
        np.minimum(best, out, out=best)
    return best


def count_classes_burnside(n: int) -> int:
    """Number of isomorphism classes of n-vertex tournaments by Burnside's lemma.

    A permutation fixes some tournament only if all its cycles are odd; it then
    fixes ``2^N`` of them, N being the number of its orbits on unordered pairs.
    """
    total = 0
    for perm in itertools.permutations(range(n)):
        seen = [False] * n
        cycles = []
        for s in range(n):
            if not seen[s]:
                length = 0
                x = s
                while not seen[x]:
                    seen[x] = True
                    x = perm[x]
                    length += 1
                cycles.append(length)
        if any(c % 2 == 0 for c in cycles):
            continue
        orbits = sum((c - 1) // 2 for c in cycles)
        orbits += sum(math.gcd(a, b) for a, b in itertools.combinations(cycles, 2))
        total += 2 ** orbits
    return total // math.factorial(n)


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[Tournament, ...]:
    if n <= 6:
        npairs = n * (n - 1) // 2
        reps = []
        for code in range(1 << npairs):
            t = from_code(n, code)
            if canonical_code(t, stop_unless_identity=True) == code:
                reps.append(code)
        return tuple(from_code(n, c) for c in sorted(reps))
    # orderly augmentation: every n-vertex class has a one-vertex deletion in some (n-1)-class
    found: set[int] = set()
    for base in _enumerate(n - 1):
        for wins in range(1 << (n - 1)):
            rows = list(base.succ) + [0]
            for u in range(n - 1):
                if wins >> u & 1:
                    rows[n - 1] |= 1 << u
                else:
                    rows[u] |= 1 << (n - 1)
            found.add(canonical_code(Tournament._derived(n, tuple(rows))))
    return tuple(from_code(n, c) for c in sorted(found))


def enumerate_tournaments(n: int, allow_n8: bool = False) -> Iterator[Tournament]:
    """One canonical representative per isomorphism class, in increasing code order."""
    limit = 8 if allow_n8 else MAX_ENUM_N
    if n > limit:
        raise EnumerationLimit(
            f"enumeration is limited to n <= {MAX_ENUM_N}" + ("" if allow_n8 else " (n = 8 needs the opt-in)")
        )
    if n < 0:
        raise EnumerationLimit("n must be nonnegative")
    yield from _enumerate(n)
