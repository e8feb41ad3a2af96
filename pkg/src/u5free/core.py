"""Immutable tournaments on bit-row adjacency and the basic predicates on them.

Vertices are ``0 .. n-1``.  Row ``succ[u]`` is an integer whose bit ``v`` is set
iff ``u -> v``.  Vertex sets are plain integer bitmasks throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence


class TournamentError(ValueError):
    """Raised when an orientation does not describe a tournament."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Tournament:
    n: int
    succ: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.succ) != self.n:
            raise TournamentError(f"expected {self.n} rows, got {len(self.succ)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.succ):
            if row & ~full:
                raise TournamentError(f"row {u} has bits outside 0..{self.n - 1}")
            if row >> u & 1:
                raise TournamentError(f"vertex {u} is its own successor")
        for u in range(self.n):
            for v in range(u + 1, self.n):
                a = self.succ[u] >> v & 1
                b = self.succ[v] >> u & 1
                if a == b:
                    raise TournamentError(f"pair ({u}, {v}) is not oriented exactly once")

    @classmethod
    def _derived(cls, n: int, succ: tuple[int, ...]) -> "Tournament":
        # rows computed from an already valid tournament; skip the O(n^2) check
        t = object.__new__(cls)
        object.__setattr__(t, "n", n)
        object.__setattr__(t, "succ", succ)
        return t

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def pred(self) -> tuple[int, ...]:
        full = self.full
        return tuple(full ^ row ^ (1 << u) for u, row in enumerate(self.succ))

    def beats(self, u: int, v: int) -> bool:
        return bool(self.succ[u] >> v & 1)

    def out_degree(self, u: int) -> int:
        return popcount(self.succ[u])

    def scores(self) -> tuple[int, ...]:
        return tuple(popcount(row) for row in self.succ)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.succ[u]):
                yield u, v

    def __str__(self) -> str:
        return f"Tournament(n={self.n}, scores={list(self.scores())})"


def empty() -> Tournament:
    return Tournament(0, ())


def from_predicate(n: int, wins: Callable[[int, int], bool]) -> Tournament:
    """Build a tournament where, for ``u < v``, ``u -> v`` iff ``wins(u, v)``."""
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if wins(u, v):
                rows[u] |= 1 << v
            else:
                rows[v] |= 1 << u
    return Tournament(n, tuple(rows))


def from_arcs(n: int, arcs: Iterable[tuple[int, int]]) -> Tournament:
    """Build a tournament from ``(u, v)`` arcs meaning ``u -> v``; every pair exactly once."""
    orient: dict[tuple[int, int], int] = {}
    for u, v in arcs:
        key = (min(u, v), max(u, v))
        if key in orient:
            raise TournamentError(f"duplicate pair {key}")
        orient[key] = u
    return make_tournament(n, orient)


def make_tournament(n: int, orient: Mapping[tuple[int, int], int]) -> Tournament:
    """Build a tournament from a map ``{pair: winner}`` covering all C(n, 2) pairs.

    Pairs may be given in either order but only once.
    """
    if n < 0:
        raise TournamentError(f"negative vertex count {n}")
    rows = [0] * n
    seen: set[tuple[int, int]] = set()
    for pair, winner in orient.items():
        u, v = pair
        if u == v:
            raise TournamentError(f"self-pair ({u}, {v})")
        if not (0 <= u < n and 0 <= v < n):
            raise TournamentError(f"pair ({u}, {v}) out of range for n={n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise TournamentError(f"duplicate pair ({u}, {v})")
        seen.add(key)
        if winner not in (u, v):
            raise TournamentError(f"winner {winner} is not in pair ({u}, {v})")
        loser = v if winner == u else u
        rows[winner] |= 1 << loser
    if len(seen) != n * (n - 1) // 2:
        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) not in seen:
                    raise TournamentError(f"missing pair ({u}, {v})")
    return Tournament(n, tuple(rows))


def transitive(n: int) -> Tournament:
    """The transitive tournament I_n with ``i -> j`` for ``i < j``."""
    return from_predicate(n, lambda u, v: True)


def dual(t: Tournament) -> Tournament:
    return Tournament._derived(t.n, t.pred)


def induced(t: Tournament, s: int | Iterable[int]) -> tuple[Tournament, tuple[int, ...]]:
    """Subtournament on the vertex set ``s`` (a bitmask or an iterable).

    Returns ``(sub, labels)`` where ``labels[i]`` is the host vertex of sub-vertex ``i``;
    labels are in increasing host order.
    """
    m = s if isinstance(s, int) else mask_of(s)
    if m < 0 or m >> t.n:
        raise TournamentError(f"vertex set {m:#x} out of range for n={t.n}")
    labels = tuple(bits(m))
    index = {v: i for i, v in enumerate(labels)}
    rows = []
    for v in labels:
        row = 0
        for w in bits(t.succ[v] & m):
            row |= 1 << index[w]
        rows.append(row)
    return Tournament._derived(len(labels), tuple(rows)), labels


def relabel(t: Tournament, perm: Sequence[int]) -> Tournament:
    """Tournament ``r`` with ``r.beats(perm[u], perm[v]) == t.beats(u, v)``."""
    if sorted(perm) != list(range(t.n)):
        raise TournamentError("relabelling must be a permutation of the vertices")
    rows = [0] * t.n
    for u in range(t.n):
        row = 0
        for v in bits(t.succ[u]):
            row |= 1 << perm[v]
        rows[perm[u]] = row
    return Tournament._derived(t.n, tuple(rows))


def is_transitive_set(t: Tournament, s: int) -> bool:
    """A set is transitive iff its internal scores are pairwise distinct."""
    seen = 0
    for v in bits(s):
        d = popcount(t.succ[v] & s)
        if seen >> d & 1:
            return False
        seen |= 1 << d
    return True


def transitive_order(t: Tournament, s: int) -> Optional[tuple[int, ...]]:
    """The source-first order of ``s`` if ``s`` is transitive, else ``None``."""
    by_score: dict[int, int] = {}
    for v in bits(s):
        d = popcount(t.succ[v] & s)
        if d in by_score:
            return None
        by_score[d] = v
    return tuple(by_score[d] for d in sorted(by_score, reverse=True))


def is_transitive(t: Tournament) -> Optional[tuple[int, ...]]:
    return transitive_order(t, t.full)


def is_order_transitive(t: Tournament, order: Sequence[int]) -> bool:
    """Check directly that ``order[i] -> order[j]`` for all ``i < j``."""
    for i, u in enumerate(order):
        for w in order[i + 1:]:
            if not t.beats(u, w):
                return False
    return True


def is_homogeneous(t: Tournament, x: int, within: Optional[int] = None) -> bool:
    """True iff every vertex of ``within`` outside ``x`` beats all of ``x`` or none."""
    within = t.full if within is None else within
    for w in bits(within & ~x):
        hit = t.succ[w] & x
        if hit and hit != x:
            return False
    return True


def strong_components(t: Tournament, within: Optional[int] = None) -> list[int]:
    """Strong components of ``t[within]`` ordered so earlier ones dominate later ones.

    In a tournament the components are cut off by score: after sorting by
    decreasing score, a prefix of size k is a union of leading components iff
    its internal wins account for every arc leaving it.
    """
    within = t.full if within is None else within
    verts = sorted(bits(within), key=lambda v: (-popcount(t.succ[v] & within), v))
    size = len(verts)
    comps: list[int] = []
    current = 0
    score_sum = 0
    for k, v in enumerate(verts, start=1):
        current |= 1 << v
        score_sum += popcount(t.succ[v] & within)
        # the first k vertices beat all the rest exactly when their scores sum
        # to C(k, 2) + k * (size - k)
        if score_sum == k * (k - 1) // 2 + k * (size - k):
            comps.append(current)
            current = 0
    return comps


def is_strongly_connected(t: Tournament, within: Optional[int] = None) -> bool:
    within = t.full if within is None else within
    return len(strong_components(t, within)) <= 1


def cyclic_triangles(t: Tournament, within: Optional[int] = None) -> Iterator[tuple[int, int, int]]:
    """Yield each cyclic triangle once as ``(a, b, c)`` with ``a -> b -> c -> a`` and ``a`` least."""
    within = t.full if within is None else within
    for a in bits(within):
        higher = within & ~((2 << a) - 1)
        for b in bits(t.succ[a] & higher):
            for c in bits(t.succ[b] & t.pred[a] & higher):
                yield a, b, c


def _colour_refine(ts: Sequence[Tournament]) -> list[list[int]]:
    """Joint out-degree colour refinement; colours are comparable across ``ts``."""
    colours = [[t.out_degree(v) for v in range(t.n)] for t in ts]
    classes = len({c for cs in colours for c in cs})
    while True:
        sigs = []
        for t, cs in zip(ts, colours):
            sigs.append([
                (cs[v], tuple(sorted(cs[w] for w in bits(t.succ[v]))))
                for v in range(t.n)
            ])
        palette = {s: i for i, s in enumerate(sorted({s for ss in sigs for s in ss}))}
        colours = [[palette[s] for s in ss] for ss in sigs]
        new_classes = len(palette)
        if new_classes == classes:
            return colours
        classes = new_classes


def are_isomorphic(a: Tournament, b: Tournament) -> Optional[tuple[int, ...]]:
    """Return the lexicographically least isomorphism ``f`` (as ``f[u]`` for ``u`` in ``a``), or None.

    Candidates are pruned by joint colour refinement, which only discards
    vertex pairs that no isomorphism can match, so the first bijection found by
    the ordered backtrack is the least one.
    """
    if a.n != b.n:
        return None
    n = a.n
    if sorted(a.scores()) != sorted(b.scores()):
        return None
    ca, cb = _colour_refine([a, b])
    if sorted(ca) != sorted(cb):
        return None
    cands = [[w for w in range(n) if cb[w] == ca[u]] for u in range(n)]
    f = [-1] * n
    used = [False] * n

    def ok(u: int, w: int) -> bool:
        for k in range(u):
            if a.beats(k, u) != b.beats(f[k], w):
                return False
        return True

    def extend(u: int) -> bool:
        if u == n:
            return True
        for w in cands[u]:
            if not used[w] and ok(u, w):
                f[u] = w
                used[w] = True
                if extend(u + 1):
                    return True
                used[w] = False
        f[u] = -1
        return False

    return tuple(f) if extend(0) else None


def is_isomorphism(a: Tournament, b: Tournament, f: Sequence[int]) -> bool:
    if a.n != b.n or len(f) != a.n or sorted(f) != list(range(a.n)):
        return False
    return all(a.beats(u, v) == b.beats(f[u], f[v]) for u in range(a.n) for v in range(a.n) if u != v)
