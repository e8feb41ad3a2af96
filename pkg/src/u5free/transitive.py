"""Largest transitive subtournaments, the constructive n^γ lower bound, and γ = log_3 2 arithmetic."""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath.ctx_iv import MPIntervalContext

from .core import Tournament, bits, is_transitive_set, popcount
from .decomposition import LEAF, LINEAR, ContractViolation, DecompositionTree, substitution_decomposition
from .structure import Certificate, Composite, Critical, ForbiddenCopy, Partition

Real = Union[int, Fraction, float]


# -- exact maximum -----------------------------------------------------------

@dataclass(frozen=True)
class WeightedQuotientInstance:
    quotient: Tournament
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != self.quotient.n:
            raise ValueError("need one weight per quotient vertex")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive")


def max_weight_transitive(inst: WeightedQuotientInstance) -> int:
    """Heaviest transitive vertex set of the quotient, as a mask.

    A transitive set is a source ``v`` followed by a transitive set inside
    ``succ(v)``, so ``best(S) = max_v w(v) + best(S ∩ succ(v))``, memoised on
    ``S``.  Sources are tried heaviest first and a branch is skipped when even
    taking all of ``S ∩ succ(v)`` could not beat the incumbent.
    """
    q, w = inst.quotient, inst.weights
    memo: dict[int, tuple[int, int]] = {0: (0, 0)}

    def weight(s: int) -> int:
        return sum(w[v] for v in bits(s))

    def best(s: int) -> tuple[int, int]:
        hit = memo.get(s)
        if hit is not None:
            return hit
        top = (0, 0)
        for v in sorted(bits(s), key=lambda u: (-w[u], u)):
            rest = s & q.succ[v]
            if w[v] + weight(rest) <= top[0]:
                continue
            val, chosen = best(rest)
            if w[v] + val > top[0]:
                top = (w[v] + val, chosen | (1 << v))
        memo[s] = top
        return top

    return best(q.full)[1]


def max_transitive_exact(t: Tournament, tree: Optional[DecompositionTree] = None) -> int:
    """A maximum transitive vertex set of ``t`` (mask).

    A transitive set meets each block of a decomposition node in a transitive
    set and touches a transitive set of quotient vertices, so the optimum is a
    weighted search on each quotient with block optima as weights.  Fast while
    prime quotients stay around two dozen vertices or fewer.
    """
    if t.n == 0:
        return 0
    node = substitution_decomposition(t) if tree is None else tree
    result = _best_in(node)
    assert is_transitive_set(t, result)
    return result


def _best_in(node: DecompositionTree) -> int:
    if node.kind == LEAF:
        return node.vertices
    subs = [_best_in(c) for c in node.children]
    if node.kind == LINEAR:
        chosen = node.quotient.full
    else:
        chosen = max_weight_transitive(WeightedQuotientInstance(node.quotient, tuple(popcount(s) for s in subs)))
    out = 0
    for i in bits(chosen):
        out |= subs[i]
    return out


# -- the lower-bound construction -------------------------------------------

def u5free_lower_bound_set(t: Tournament, freeness: Certificate) -> int:
    """Transitive set of size at least ``n^γ`` read off a U5-freeness certificate.

    At each node the chosen quotient vertices are: for a triangle partition,
    the two parts of largest total block size; for T_m, the heaviest vertex
    and the heavier of its two transitive half-circles.  Blocks are taken
    recursively.
    """
    from .certificates import verify_certificate

    if isinstance(freeness, ForbiddenCopy):
        raise ContractViolation("the certificate shows a copy of U5; no bound applies")
    problems = verify_certificate(t, freeness)
    if problems:
        raise ContractViolation(f"certificate does not match the tournament: {problems[0]}")
    if t.n == 0:
        return 0
    result = _bound(freeness, {v: 1 for v in range(t.n)}, lambda v: 1 << v)
    if not is_transitive_set(t, result):
        raise AssertionError("lower-bound set is not transitive")
    if gamma_compare(popcount(result), t.n) < 0:
        raise AssertionError(f"lower-bound set of size {popcount(result)} is below {t.n}^γ")
    return result


def _bound(cert: Certificate, size: dict[int, int], take) -> int:
    """Union of ``take(v)`` over the vertices picked from ``cert``, weighted by ``size``."""
    if isinstance(cert, Composite):
        subs = {}
        sizes = {}
        for block, child in zip(cert.blocks, cert.children):
            rep = min(block)
            subs[rep] = _bound(child, {v: 1 for v in block}, lambda v: 1 << v)
            sizes[rep] = len(block)
        picked = _bound(cert.quotient, sizes, lambda r: 1 << r)
        out = 0
        for r in bits(picked):
            out |= subs[r]
        return out
    out = 0
    for v in _pick(cert, size):
        out |= take(v)
    return out


def _pick(cert: Certificate, size: dict[int, int]) -> list[int]:
    if isinstance(cert, Partition):
        parts = cert.partition.parts
        totals = [sum(size[v] for v in p) for p in parts]
        drop = totals.index(min(totals))
        return [v for k, p in enumerate(parts) if k != drop for v in p]
    if isinstance(cert, Critical):
        m, ring = cert.n, cert.mapping
        if m == 1:
            return [ring[0]]
        heavy = max(range(m), key=lambda i: (size[ring[i]], -i))
        rot = [ring[(heavy + i) % m] for i in range(m)]
        half = (m - 1) // 2
        front = sum(size[v] for v in rot[1:half + 1])
        back = sum(size[v] for v in rot[half + 1:])
        # rot[0..half] and rot[half+1..m-1] + rot[0] are both transitive arcs of the circle
        return rot[:half + 1] if front >= back else rot[half + 1:] + rot[:1]
    raise ContractViolation(f"cannot take a bound from {type(cert).__name__}")


# -- gamma arithmetic ----------------------------------------------------------

def _below_gamma(p: int, q: int) -> bool:
    """p/q < log_3 2, i.e. 3^p < 2^q (never equal for q > 0)."""
    return 3 ** p < 2 ** q


def gamma_compare(size: int, n: int, max_steps: int = 1 << 16) -> int:
    """Sign of ``size - n^γ``: -1 below, 0 equal, 1 above.  Exact, no floating point.

    Equality holds only at ``(2^k, 3^k)``.  Otherwise the Stern-Brocot
    interval around γ is narrowed until ``size^d >= n^c`` (for an upper bound
    c/d) or ``size^b <= n^a`` (for a lower bound a/b) settles it.
    """
    if size < 1 or n < 1:
        raise ValueError("gamma_compare takes positive integers")
    if n == 1:
        return (size > 1) - (size < 1)
    k = 0
    m = n
    while m % 3 == 0:
        m //= 3
        k += 1
    if m == 1 and size == 2 ** k:
        return 0
    lo, hi = (0, 1), (1, 1)
    for _ in range(max_steps):
        a, b = lo
        c, d = hi
        if size ** d >= n ** c:
            return 1
        if size ** b <= n ** a:
            return -1
        mp, mq = a + c, b + d
        if _below_gamma(mp, mq):
            lo = (mp, mq)
        else:
            hi = (mp, mq)
    raise ArithmeticError(f"could not separate {size} from {n}^γ")


@dataclass(frozen=True)
class GammaBound:
    """The threshold ``n^γ`` for host size ``n``."""

    n: int

    @property
    def exact(self) -> Optional[int]:
        """``2^k`` when ``n = 3^k``, else None."""
        m, k = self.n, 0
        while m > 1 and m % 3 == 0:
            m //= 3
            k += 1
        return 2 ** k if m == 1 else None

    def decimal(self, digits: int = 30) -> decimal.Decimal:
        with decimal.localcontext() as ctx:
            ctx.prec = digits + 10
            g = decimal.Decimal(2).ln() / decimal.Decimal(3).ln()
            val = (decimal.Decimal(self.n).ln() * g).exp()
            ctx.prec = digits
            return +val

    def compare(self, size: int) -> int:
        return gamma_compare(size, self.n)

    def __str__(self) -> str:
        e = self.exact
        return str(e) if e is not None else f"{self.decimal(20)}"


def _decide(lhs_terms: Sequence[Real], rhs_terms: Sequence[Real], exponent: Optional[Real], max_prec: int = 4096) -> bool:
    """sum x^e over lhs >= sum y^e over rhs, by interval arithmetic at widening precision.

    ``exponent=None`` means γ.  Sides that stay inseparable at ``max_prec``
    bits are treated as equal.
    """
    iv = MPIntervalContext()  # private context: precision changes stay local

    def num(x: Real):
        if isinstance(x, Fraction):
            return iv.mpf(x.numerator) / x.denominator
        return iv.mpf(x)

    prec = 64
    while prec <= max_prec:
        iv.prec = prec
        e = iv.log(2) / iv.log(3) if exponent is None else num(exponent)
        diff = iv.mpf(0)
        for sign, terms in ((1, lhs_terms), (-1, rhs_terms)):
            for x in terms:
                if x != 0:
                    diff += sign * iv.exp(e * iv.log(num(x)))
        if diff.a > 0:
            return True
        if diff.b < 0:
            return False
        prec *= 2
    return True


def majorization_premise(xs: Sequence[Real], ys: Sequence[Real]) -> Optional[str]:
    """Why ``ys`` fails to majorize ``xs`` (both descending, nonnegative), or None if it does."""
    for name, seq in (("xs", xs), ("ys", ys)):
        if any(v < 0 for v in seq):
            return f"{name} has a negative entry"
        if any(a < b for a, b in zip(seq, seq[1:])):
            return f"{name} is not descending"
    px = py = Fraction(0)
    for i, (x, y) in enumerate(zip(xs, ys)):
        px += Fraction(x)
        py += Fraction(y)
        if px > py:
            return f"prefix {i + 1}: sum of xs exceeds sum of ys"
    if px != py:
        return "totals differ"
    return None


def karamata_check(xs: Sequence[Real], ys: Sequence[Real], exponent: Optional[Real] = None) -> Optional[bool]:
    """For the concave ``x^exponent``: if ``ys`` majorizes ``xs``, whether sum f(x) >= sum f(y).

    ``exponent=None`` means γ.  Returns None when the premises fail;
    :func:`majorization_premise` says which.
    """
    if len(xs) != len(ys):
        raise ValueError("sequences must have equal length")
    if exponent is not None and not 0 < exponent < 1:
        raise ValueError("exponent must lie in (0, 1)")
    if majorization_premise(xs, ys) is not None:
        return None
    if list(xs) == list(ys):
        return True
    return _decide(xs, ys, exponent)


def two_of_three_check(a: Real, b: Real, c: Real) -> bool:
    """Whether ``a^γ + b^γ >= (a + b + c)^γ`` for nonnegative ``a, b`` and ``c = min(a, b, c)``."""
    if min(a, b, c) < 0:
        raise ContractViolation("arguments must be nonnegative")
    if c > a or c > b:
        raise ContractViolation("c must be the smallest of the three")
    if a == b == c:
        return True  # 2 a^γ = (3a)^γ exactly
    if c == 0:
        # subadditivity of x^γ; equality iff a or b is zero
        return True
    return _decide([a, b], [a + b + c], None)
