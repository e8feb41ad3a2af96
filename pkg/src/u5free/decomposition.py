"""Homogeneous sets (modules), primality, quotients and the substitution decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    Tournament,
    TournamentError,
    bits,
    induced,
    is_homogeneous,
    popcount,
    strong_components,
)


class ContractViolation(ValueError):
    """An operation was called outside its documented precondition."""


def module_closure(t: Tournament, seed: int, within: Optional[int] = None) -> int:
    """Smallest homogeneous set of ``t[within]`` containing the vertex set ``seed``.

    Adding ``x`` to a set that already holds ``u`` forces in every vertex that
    sees ``u`` and ``x`` differently, i.e. the outside part of
    ``succ[u] ^ succ[x]``.
    """
    within = t.full if within is None else within
    anchor = (seed & -seed).bit_length() - 1
    ref = t.succ[anchor]
    m = seed
    queue = list(bits(seed & ~(1 << anchor)))
    while queue:
        x = queue.pop()
        new = (ref ^ t.succ[x]) & within & ~m
        if new:
            m |= new
            if m == within:
                return m
            queue.extend(bits(new))
    return m


def maximal_modules_avoiding(t: Tournament, v: int, within: Optional[int] = None) -> list[int]:
    """Partition of ``within - {v}`` into the maximal homogeneous sets of ``t[within]`` not containing ``v``.

    Plain partition refinement: any part that some outside vertex splits is cut
    along that vertex's successors.  Parts come out ordered by least member.
    """
    within = t.full if within is None else within
    rest = within & ~(1 << v)
    parts = [p for p in (t.succ[v] & rest, t.pred[v] & rest) if p]
    pending = rest
    while pending:
        w = (pending & -pending).bit_length() - 1
        pending &= pending - 1
        sw = t.succ[w]
        nxt = []
        for p in parts:
            if p >> w & 1:
                nxt.append(p)
                continue
            a = p & sw
            if a and a != p:
                b = p & ~sw
                nxt.append(a)
                nxt.append(b)
                # members of the two halves have not yet acted on each other
                pending |= p
            else:
                nxt.append(p)
        parts = nxt
    parts.sort(key=lambda p: p & -p)
    return parts


def find_nontrivial_homogeneous_set(t: Tournament, within: Optional[int] = None) -> Optional[int]:
    """A homogeneous set ``X`` of ``t[within]`` with ``1 < |X| < |within|``, or None.

    Grows the closure of ``{u, w}`` for the least vertex ``u`` and each other
    ``w``; that finds every module containing ``u``.  Modules avoiding ``u`` sit
    inside a part of :func:`maximal_modules_avoiding`.
    """
    within = t.full if within is None else within
    size = popcount(within)
    if size < 3:
        return None
    u = (within & -within).bit_length() - 1
    for w in bits(within & ~(1 << u)):
        c = module_closure(t, (1 << u) | (1 << w), within)
        if c != within:
            assert is_homogeneous(t, c, within)
            return c
    for p in maximal_modules_avoiding(t, u, within):
        if popcount(p) > 1:
            assert is_homogeneous(t, p, within)
            return p
    return None


def is_prime(t: Tournament, within: Optional[int] = None) -> bool:
    return find_nontrivial_homogeneous_set(t, within) is None


def quotient(t: Tournament, x: int) -> Tournament:
    """``t`` with the homogeneous set ``x`` contracted to its least vertex."""
    if x == 0:
        raise ContractViolation("cannot contract an empty set")
    if x >> t.n:
        raise TournamentError("vertex set out of range")
    if not is_homogeneous(t, x):
        raise ContractViolation(f"set {sorted(bits(x))} is not homogeneous")
    rep = x & -x
    return induced(t, (t.full & ~x) | rep)[0]


PRIME = "prime"
LINEAR = "linear"
LEAF = "leaf"


@dataclass(frozen=True)
class DecompositionTree:
    """One node of the substitution decomposition, in host vertex labels.

    ``kind`` is ``"leaf"`` (one vertex), ``"prime"`` (strongly connected node:
    blocks are the maximal proper modules and ``quotient`` is prime on at
    least three vertices) or ``"linear"`` (not strongly connected: blocks are
    the strong components in dominance order and ``quotient`` is transitive
    with ``i -> j`` for ``i < j``).  Quotient vertex ``i`` is block ``i``,
    represented by its least member.
    """

    kind: str
    vertices: int
    quotient: Tournament
    blocks: tuple[int, ...]
    children: tuple["DecompositionTree", ...]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple((b & -b).bit_length() - 1 for b in self.blocks)

    def is_prime_tournament(self) -> bool:
        """Whether the node's own subtournament is prime (all blocks single vertices)."""
        return self.kind == LEAF or all(popcount(b) == 1 for b in self.blocks) and (
            self.kind == PRIME or len(self.blocks) == 2
        )

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()


def _prime_blocks(t: Tournament, within: int) -> list[int]:
    v = (within & -within).bit_length() - 1
    own = 1 << v
    others = []
    for p in maximal_modules_avoiding(t, v, within):
        probe = (p & -p) | (1 << v)
        if module_closure(t, probe, within) != within:
            own |= p
        else:
            others.append(p)
    blocks = [own] + others
    blocks.sort(key=lambda b: b & -b)
    return blocks


def substitution_decomposition(t: Tournament, within: Optional[int] = None) -> DecompositionTree:
    within = t.full if within is None else within
    if within == 0:
        raise ContractViolation("decomposition needs at least one vertex")
    if popcount(within) == 1:
        return DecompositionTree(LEAF, within, Tournament(1, (0,)), (within,), ())
    comps = strong_components(t, within)
    if len(comps) > 1:
        kind = LINEAR
        blocks = comps
    else:
        kind = PRIME
        blocks = _prime_blocks(t, within)
    reps = [(b & -b).bit_length() - 1 for b in blocks]
    pos = {r: i for i, r in enumerate(reps)}
    rows = []
    for r in reps:
        row = 0
        for w in bits(t.succ[r]):
            if w in pos:
                row |= 1 << pos[w]
        rows.append(row)
    q = Tournament._derived(len(reps), tuple(rows))
    children = tuple(substitution_decomposition(t, b) for b in blocks)
    return DecompositionTree(kind, within, q, tuple(blocks), children)


def recompose(tree: DecompositionTree, n: Optional[int] = None) -> Tournament:
    """Rebuild the tournament described by ``tree`` in its own host labels."""
    n = tree.vertices.bit_length() if n is None else n
    rows = [0] * n

    def fill(node: DecompositionTree) -> None:
        if node.kind == LEAF:
            return
        for i, b in enumerate(node.blocks):
            outside = 0
            for j in bits(node.quotient.succ[i]):
                outside |= node.blocks[j]
            for v in bits(b):
                rows[v] |= outside
        for c in node.children:
            fill(c)

    fill(tree)
    return Tournament(n, tuple(rows))
