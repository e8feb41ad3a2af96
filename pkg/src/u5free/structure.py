"""Prime U5-free tournaments: triangle partitions and the constructive recognizer.

A *triangle partition* of a tournament is a split of its vertices into three
parts X, Y, Z such that X∪Y, Y∪Z and Z∪X are all transitive.  Such a
partition rules out T5 and U5 (five vertices always put four into one of the
unions, and neither pattern has a transitive four-set).  For prime inputs the
converse holds, and :func:`find_triangle_partition_prime` builds the partition
by adding vertices one at a time along a chain of prime subtournaments.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

from .core import (
    Tournament,
    are_isomorphic,
    bits,
    cyclic_triangles,
    dual,
    induced,
    is_order_transitive,
    is_strongly_connected,
    is_transitive_set,
    mask_of,
    popcount,
    transitive_order,
)
from .decomposition import (
    LEAF,
    LINEAR,
    ContractViolation,
    DecompositionTree,
    is_prime,
    substitution_decomposition,
)
from .detection import find_embedding
from .generators import gen_family

log = logging.getLogger(__name__)


class InvariantViolation(AssertionError):
    """A step that cannot fail on valid input failed: a bug, or an input outside the contract."""


class ConsistencyViolation(InvariantViolation):
    """A consistency check of the inductive partition extension failed."""

    def __init__(self, failures: list[str], state: dict):
        self.failures = failures
        self.state = state
        lines = "\n  ".join(failures)
        dump = "\n  ".join(f"{k} = {v}" for k, v in state.items())
        super().__init__(f"partition extension checks failed:\n  {lines}\nstate:\n  {dump}")


class CriticalInput(ContractViolation):
    """The input is one of T_n, U_n, W_n; use :func:`identify_critical` instead."""


@dataclass(frozen=True)
class TrianglePartition:
    """Three parts, each listed in its transitive (source-first) order."""

    x: tuple[int, ...]
    y: tuple[int, ...]
    z: tuple[int, ...]

    @property
    def parts(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.x, self.y, self.z

    def masks(self) -> tuple[int, int, int]:
        return mask_of(self.x), mask_of(self.y), mask_of(self.z)

    def relabel(self, labels: Sequence[int]) -> "TrianglePartition":
        return TrianglePartition(*(tuple(labels[v] for v in part) for part in self.parts))


def verify_triangle_partition(t: Tournament, p: TrianglePartition, within: Optional[int] = None) -> bool:
    within = t.full if within is None else within
    seen = 0
    for part in p.parts:
        for v in part:
            if not 0 <= v < t.n or seen >> v & 1:
                return False
            seen |= 1 << v
    if seen != within:
        return False
    for part in p.parts:
        if not is_order_transitive(t, part):
            return False
    mx, my, mz = p.masks()
    return is_transitive_set(t, mx | my) and is_transitive_set(t, my | mz) and is_transitive_set(t, mz | mx)


def orders_from_parts(t: Tournament, masks: Sequence[int]) -> Optional[TrianglePartition]:
    orders = [transitive_order(t, m) for m in masks]
    if any(o is None for o in orders):
        return None
    return TrianglePartition(*orders)


# -- insertion profiles -----------------------------------------------------

def insertion_profile(t: Tournament, u: int, order: Sequence[int]) -> Optional[int]:
    """Split position ``s`` with ``order[:s] => u => order[s:]``, or None if no clean split exists."""
    s = 0
    while s < len(order) and t.beats(order[s], u):
        s += 1
    for w in order[s:]:
        if t.beats(w, u):
            return None
    return s


def merge_positions(profiles: Sequence[Optional[int]]) -> bool:
    """Two transitive parts merge into a transitive set iff the profiles are defined and nondecreasing."""
    if any(s is None for s in profiles):
        return False
    return all(a <= b for a, b in zip(profiles, profiles[1:]))


def merge_witness(t: Tournament, xs: Sequence[int], ys: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """A cyclic triangle inside ``xs ∪ ys``, or None if the union is transitive."""
    return next(cyclic_triangles(t, mask_of(xs) | mask_of(ys)), None)


# -- critical tournaments ---------------------------------------------------

class CriticalMatch(NamedTuple):
    kind: str
    n: int
    mapping: tuple[int, ...]  # family vertex i -> vertex of the input


def _match_circular(t: Tournament) -> Optional[tuple[int, ...]]:
    """Isomorphism T_n -> t: walk from vertex 0, always stepping to the source of the successor set."""
    n = t.n
    half = (n - 1) // 2
    if any(popcount(row) != half for row in t.succ):
        return None
    order = [0]
    used = 1
    cur = 0
    for _ in range(n - 1):
        out = t.succ[cur]
        step = None
        for w in bits(out & ~used):
            if (t.succ[w] | (1 << w)) & out == out:
                step = w
                break
        if step is None:
            return None
        order.append(step)
        used |= 1 << step
        cur = step
    for i in range(n):
        for d in range(1, half + 1):
            if not t.beats(order[i], order[(i + d) % n]):
                return None
    return tuple(order)


def match_w(t: Tournament) -> Optional[tuple[int, ...]]:
    """Isomorphism W_n -> t (apex first, then w_1 .. w_{n-1}), or None."""
    n = t.n
    if n % 2 == 0:
        return None
    for apex in range(n):
        chain = transitive_order(t, t.full & ~(1 << apex))
        if chain is None:
            continue
        # chain[i] is w_{i+1}: odd-indexed w are beaten by the apex
        if all(t.beats(apex, w) == (i % 2 == 0) for i, w in enumerate(chain)):
            return (apex,) + chain
    return None


def _u_scores(n: int) -> list[int]:
    return sorted(gen_family("U", n).scores())


def identify_critical(t: Tournament) -> Optional[CriticalMatch]:
    """Recognise T_n, U_n or W_n; at n <= 3 the three coincide and kind T is reported."""
    n = t.n
    if n == 0 or n % 2 == 0:
        return None
    m = _match_circular(t)
    if m is not None:
        return CriticalMatch("T", n, m)
    if n <= 3:
        return None
    if sorted(t.scores()) == _u_scores(n):
        f = are_isomorphic(gen_family("U", n), t)
        if f is not None:
            return CriticalMatch("U", n, f)
    w = match_w(t)
    if w is not None:
        return CriticalMatch("W", n, w)
    return None


def w_partition(mapping: Sequence[int]) -> TrianglePartition:
    """The apex alone, odd chain vertices, even chain vertices."""
    apex, chain = mapping[0], mapping[1:]
    return TrianglePartition((apex,), tuple(chain[0::2]), tuple(chain[1::2]))


# -- triangle sequences -----------------------------------------------------

Triple = tuple[int, int, int]


def _is_cyclic(t: Tournament, a: int, b: int, c: int) -> bool:
    if t.beats(a, b):
        return t.beats(b, c) and t.beats(c, a)
    return t.beats(c, b) and t.beats(a, c)


def _sequence(t: Tournament, parts: Sequence[Sequence[int]], size: int) -> list[Triple]:
    x, y, z = parts
    cur = (0, 0, 0)
    if not _is_cyclic(t, x[0], y[0], z[0]):
        raise InvariantViolation("first triangle (x1, y1, z1) is not cyclic")
    seq = [cur]
    lens = (len(x), len(y), len(z))
    for _ in range(size - 3):
        for coord in range(3):
            nxt = list(cur)
            nxt[coord] += 1
            if nxt[coord] < lens[coord] and _is_cyclic(t, x[nxt[0]], y[nxt[1]], z[nxt[2]]):
                cur = tuple(nxt)
                break
        else:
            raise InvariantViolation(f"triangle sequence cannot be extended past {cur}")
        seq.append(cur)
    return seq


def triangle_sequence(t: Tournament, p: TrianglePartition, within: Optional[int] = None) -> list[Triple]:
    """Cyclic triangles C_1 .. C_{n-2} as index triples into ``p.x, p.y, p.z``.

    Starts at ``(0, 0, 0)`` and at each step advances the first of x, y, z
    whose increment still gives a cyclic triangle.
    """
    within = t.full if within is None else within
    size = popcount(within)
    if size < 3:
        raise ContractViolation("a triangle sequence needs at least three vertices")
    if not is_strongly_connected(t, within):
        raise ContractViolation("a triangle sequence needs a strongly connected tournament")
    if not verify_triangle_partition(t, p, within):
        raise ContractViolation("not a valid triangle partition")
    if not all(p.parts):
        raise ContractViolation("all three parts must be non-empty")
    return _sequence(t, p.parts, size)


# -- forbidden configurations around one vertex ------------------------------

class Violation(NamedTuple):
    rule: str  # "a" .. "e"
    triangle: tuple[int, ...]
    other: tuple[int, ...]


def scan_forbidden_configurations(t: Tournament, v: int) -> list[Violation]:
    """Configurations around ``v`` that cannot occur when ``t`` is T5-free and U5-free.

    With A the successors and B the predecessors of ``v``, for cyclic triangles
    ``C`` avoiding ``v`` (and pairs ``C = {x, y, z}``, ``C' = {x', y, z}`` with
    ``y -> z`` and ``x -> x'``):

    * a: ``|C ∩ A| = 1`` and some ``u => C`` lies in A
    * b: ``|C ∩ A| = 2`` and some ``u <= C`` lies in B
    * c: C meets A but C' does not
    * d: C lies in A but C' does not
    * e: ``y ∈ B``, ``z ∈ A`` and exactly one of ``x, x'`` is in A
    """
    rest = t.full & ~(1 << v)
    a_set = t.succ[v]
    b_set = t.pred[v]
    out: list[Violation] = []
    for tri in cyclic_triangles(t, rest):
        a, b, c = tri
        k = (a_set >> a & 1) + (a_set >> b & 1) + (a_set >> c & 1)
        if k == 1:
            for u in bits(t.pred[a] & t.pred[b] & t.pred[c] & a_set):
                out.append(Violation("a", tri, (u,)))
        elif k == 2:
            for u in bits(t.succ[a] & t.succ[b] & t.succ[c] & b_set):
                out.append(Violation("b", tri, (u,)))
    for y in bits(rest):
        for z in bits(t.succ[y] & rest):
            ks = t.succ[z] & t.pred[y] & rest
            if popcount(ks) < 2:
                continue
            ka, kb = ks & a_set, ks & b_set
            ya, za = a_set >> y & 1, a_set >> z & 1
            if ya == za:
                rule = "d" if ya else "c"
                pairs = [(x, xp) for x in bits(ka) for xp in bits(t.succ[x] & kb)]
            elif za:
                rule = "e"
                pairs = [(x, xp) for x in bits(ka) for xp in bits(t.succ[x] & kb)]
                pairs += [(x, xp) for x in bits(kb) for xp in bits(t.succ[x] & ka)]
            else:
                continue
            for x, xp in pairs:
                out.append(Violation(rule, (x, y, z), (xp,)))
    return out


# -- prime chains and the inductive extension --------------------------------

def find_prime_chain(t: Tournament) -> list[int]:
    """Nested vertex sets ``V = S_k ⊃ S_{k-1} ⊃ ...``, each one vertex smaller and inducing a prime.

    Deletions are tried in increasing vertex order.  The chain stops at five
    vertices or at the first stage that is itself critical (T_m, U_m, W_m),
    since critical tournaments have no prime one-vertex deletion.
    """
    if not is_prime(t):
        raise ContractViolation("find_prime_chain needs a prime tournament")
    if t.n >= 6 and identify_critical(t) is not None:
        raise CriticalInput("input is critical; use identify_critical")
    cur = t.full
    chain = [cur]
    while popcount(cur) > 5:
        if len(chain) > 1 and identify_critical(induced(t, cur)[0]) is not None:
            break
        for v in bits(cur):
            if is_prime(t, cur & ~(1 << v)):
                cur &= ~(1 << v)
                break
        else:
            raise InvariantViolation(
                f"no prime one-vertex deletion of a non-critical prime on {popcount(cur)} vertices"
            )
        chain.append(cur)
    return chain


def extend_partition(g: Tournament, p: TrianglePartition, v: int) -> TrianglePartition:
    """Insert ``v`` into a triangle partition of ``g - v``.

    ``g`` and ``g - v`` must be prime (so ``g - v`` is strongly connected) and
    ``g`` must be T5-free and U5-free; the last condition is not checked up
    front, a violation surfaces as :class:`ConsistencyViolation`.
    """
    if not 0 <= v < g.n:
        raise ContractViolation(f"vertex {v} out of range")
    rest = g.full & ~(1 << v)
    if not verify_triangle_partition(g, p, rest):
        raise ContractViolation("p is not a triangle partition of g - v")
    if popcount(rest) < 3 or not is_strongly_connected(g, rest):
        raise ContractViolation("g - v must be strongly connected with at least three vertices")
    if not is_prime(g) or not is_prime(g, rest):
        raise ContractViolation("g and g - v must both be prime")
    if not all(p.parts):
        raise ContractViolation("all three parts must be non-empty")

    seq = _sequence(g, p.parts, popcount(rest))
    a_set = g.succ[v] & rest
    counts = [sum(a_set >> part[i] & 1 for part, i in zip(p.parts, tri)) for tri in seq]
    if not any(c in (1, 2) for c in counts):
        raise InvariantViolation("every triangle lies inside A or inside B, so g - v is a module of g")
    if 2 in counts:
        parts = _insert(g, p.parts, seq, v)
    else:
        # in the dual every part order reverses and the sequence runs backwards
        h = dual(g)
        lens = [len(part) for part in p.parts]
        rev_parts = [tuple(reversed(part)) for part in p.parts]
        rev_seq = [tuple(l - 1 - i for l, i in zip(lens, tri)) for tri in reversed(seq)]
        parts = _insert(h, rev_parts, rev_seq, v)
    result = orders_from_parts(g, [mask_of(part) for part in parts])
    if result is None or not verify_triangle_partition(g, result):
        raise InvariantViolation(f"extended partition {parts} is not valid")
    return result


def _insert(h: Tournament, parts: Sequence[Sequence[int]], seq: list[Triple], v: int) -> list[tuple[int, ...]]:
    rest = h.full & ~(1 << v)
    a_set = h.succ[v] & rest

    def in_a(u: int) -> bool:
        return bool(a_set >> u & 1)

    r0 = next(r for r, tri in enumerate(seq) if sum(in_a(part[i]) for part, i in zip(parts, tri)) == 2)
    corners = [part[i] for part, i in zip(parts, seq[r0])]
    zb = next(s for s in range(3) if not in_a(corners[s]))
    sx, sy = [s for s in range(3) if s != zb]
    if not h.beats(corners[zb], corners[sx]):
        sx, sy = sy, sx
    X, Y, Z = parts[sx], parts[sy], parts[zb]
    tris = [(tri[sx], tri[sy], tri[zb]) for tri in seq]
    i0, j0, k0 = tris[r0]

    s = next(j for j, y in enumerate(Y) if in_a(y))
    t_ = max(k for k, z in enumerate(Z) if not in_a(z)) + 1
    prof_y = [insertion_profile(h, x, Y) for x in X]
    prof_z = [insertion_profile(h, x, Z) for x in X]

    bad: list[str] = []
    if None in prof_y or None in prof_z:
        bad.append("part profiles are not clean splits")
    else:
        for r, (i, j, k) in enumerate(tris):
            x, y, z = X[i], Y[j], Z[k]
            if not (h.beats(x, y) and h.beats(y, z) and h.beats(z, x)):
                bad.append(f"orientation: C_{r} = {(x, y, z)} is not oriented x -> y -> z -> x")
            pattern = (in_a(x), in_a(y), in_a(z))
            if pattern == (False, True, False) and not (prof_y[i] <= s and prof_z[i] <= t_):
                bad.append(f"profile upper bound: C_{r} profiles ({prof_y[i]}, {prof_z[i]}) exceed ({s}, {t_})")
            if pattern == (True, True, False) and not (prof_y[i] >= s and prof_z[i] >= t_):
                bad.append(f"profile lower bound: C_{r} profiles ({prof_y[i]}, {prof_z[i]}) below ({s}, {t_})")
            if r < r0 and not (not in_a(x) and not in_a(z) and in_a(y) == (j >= s)):
                bad.append(f"membership before r0: C_{r} has membership {pattern}")
            if r >= r0 and not (in_a(x) and in_a(y) and in_a(z) == (k >= t_)):
                bad.append(f"membership from r0: C_{r} has membership {pattern}")
        if r0 > 0 and not (tris[r0 - 1] == (i0 - 1, j0, k0) and not in_a(X[i0 - 1])):
            bad.append(f"step into r0: C_(r0-1) = {tris[r0 - 1]}")
        for i, x in enumerate(X):
            if in_a(x) != (i >= i0):
                bad.append(f"x split: x_{i} on the wrong side of v")
        for j, y in enumerate(Y):
            if in_a(y) != (j >= s):
                bad.append(f"y split: y_{j} on the wrong side of v")
        for k, z in enumerate(Z):
            if in_a(z) != (k >= t_):
                bad.append(f"z split: z_{k} on the wrong side of v")
        if not (s <= prof_y[i0] and (i0 == 0 or prof_y[i0 - 1] <= s)):
            bad.append(f"y position: s = {s} does not fit between neighbouring profiles")
        if not (t_ <= prof_z[i0] and (i0 == 0 or prof_z[i0 - 1] <= t_)):
            bad.append(f"z position: t = {t_} does not fit between neighbouring profiles")
    if bad:
        raise ConsistencyViolation(bad, {
            "v": v, "X": X, "Y": Y, "Z": Z, "A": sorted(bits(a_set)),
            "sequence": tris, "r0": r0, "s": s, "t": t_, "profiles_y": prof_y, "profiles_z": prof_z,
        })
    out = [tuple(part) for part in parts]
    out[sx] = tuple(X[:i0]) + (v,) + tuple(X[i0:])
    return out


def _contains_t5_or_u5(t: Tournament) -> bool:
    return find_embedding(t, gen_family("U", 5)) is not None or find_embedding(t, gen_family("T", 5)) is not None


def find_triangle_partition_prime(t: Tournament, strict: bool = False) -> Optional[TrianglePartition]:
    """A triangle partition of the prime ``t``, or None if ``t`` contains T5 or U5.

    Small and W_n inputs use the fixed partition of W_n; otherwise the
    partition of the bottom of :func:`find_prime_chain` is extended one vertex
    at a time.  If an extension step fails, the input is confirmed to contain
    T5 or U5 by direct search (``strict`` re-raises instead).
    """
    if not is_prime(t):
        raise ContractViolation("find_triangle_partition_prime needs a prime tournament")
    if t.n <= 2:
        return TrianglePartition(transitive_order(t, t.full), (), ())
    w = match_w(t)
    if w is not None:
        return w_partition(w)
    if t.n <= 5 or identify_critical(t) is not None:
        return None
    chain = find_prime_chain(t)
    base, labels = induced(t, chain[-1])
    w = match_w(base)
    if w is None:
        return None
    part = w_partition(w).relabel(labels)
    for k in range(len(chain) - 2, -1, -1):
        g, labels = induced(t, chain[k])
        local = {h: i for i, h in enumerate(labels)}
        (v_host,) = bits(chain[k] & ~chain[k + 1])
        try:
            ext = extend_partition(g, part.relabel(local), local[v_host])
        except InvariantViolation:
            if strict or not _contains_t5_or_u5(g):
                raise
            log.debug("extension failed on a %d-vertex stage containing T5 or U5", g.n)
            return None
        part = ext.relabel(labels)
    assert verify_triangle_partition(t, part)
    return part


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenCopy:
    """``image[i]`` plays vertex ``i`` of U5 (index 0 is v_1 of its definition)."""

    image: tuple[int, ...]


@dataclass(frozen=True)
class Critical:
    """``mapping[i]`` plays vertex ``i`` of T_n."""

    n: int
    mapping: tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    partition: TrianglePartition


@dataclass(frozen=True)
class Composite:
    """A node of the substitution decomposition.

    ``quotient`` certifies the subtournament on the block representatives
    (least member of each block); ``children[i]`` certifies block ``i``.
    """

    node: str
    vertices: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    quotient: "Certificate"
    children: tuple["Certificate", ...] = field(default=())


Certificate = Union[ForbiddenCopy, Critical, Partition, Composite]


def is_free(cert: Certificate) -> bool:
    return not isinstance(cert, ForbiddenCopy)


class _FoundCopy(Exception):
    def __init__(self, image: tuple[int, ...]):
        self.image = image


def _quotient_certificate(node: DecompositionTree) -> Certificate:
    reps = node.representatives
    if node.kind == LINEAR:
        return Partition(TrianglePartition(reps, (), ()))
    q = node.quotient
    crit = identify_critical(q)
    if crit is not None and crit.kind == "T":
        return Critical(crit.n, tuple(reps[i] for i in crit.mapping))
    part = find_triangle_partition_prime(q)
    if part is not None:
        return Partition(part.relabel(reps))
    emb = find_embedding(q, gen_family("U", 5))
    if emb is None:
        raise InvariantViolation("prime quotient has neither a certificate of freeness nor a U5")
    raise _FoundCopy(tuple(reps[i] for i in emb.image))


def _certify_node(node: DecompositionTree) -> Certificate:
    if node.kind == LEAF:
        return Partition(TrianglePartition(tuple(bits(node.vertices)), (), ()))
    qcert = _quotient_certificate(node)
    if node.is_prime_tournament():
        return qcert
    children = tuple(_certify_node(c) for c in node.children)
    return Composite(
        node.kind,
        tuple(bits(node.vertices)),
        tuple(tuple(bits(b)) for b in node.blocks),
        qcert,
        children,
    )


def certify_u5_status(t: Tournament, tree: Optional[DecompositionTree] = None) -> Certificate:
    """Certificate that ``t`` is U5-free, or a U5 copy in host labels.

    Each prime quotient of the decomposition is tried as T_n first, then for a
    triangle partition, and only then searched for a copy of U5.
    """
    if t.n == 0:
        return Partition(TrianglePartition((), (), ()))
    tree = substitution_decomposition(t) if tree is None else tree
    try:
        return _certify_node(tree)
    except _FoundCopy as found:
        return ForbiddenCopy(found.image)
