"""Exhaustive checks of the structural theorems over all small isomorphism classes.

Each check returns a :class:`CheckResult`; the command line and the acceptance
tests both run these.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .certificates import verify_certificate
from .core import Tournament, are_isomorphic, induced, transitive
from .decomposition import is_prime
from .detection import (
    canonical_codes_exhaustive,
    code_of,
    count_classes_burnside,
    enumerate_tournaments,
    find_embedding,
)
from .generators import gen_family
from .structure import certify_u5_status, find_triangle_partition_prime, is_free, verify_triangle_partition

KNOWN_CLASS_COUNTS = {0: 1, 1: 1, 2: 1, 3: 2, 4: 4, 5: 12, 6: 56, 7: 456, 8: 6880}


@dataclass
class CheckResult:
    name: str
    n: Optional[int]
    passed: bool
    detail: str
    counterexample: Optional[Tournament] = None

    def line(self) -> str:
        where = f" n={self.n}" if self.n is not None else ""
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}{where}: {self.detail}"


@dataclass(frozen=True)
class ClassFacts:
    t: Tournament
    prime: bool
    has_t5: bool
    has_u5: bool
    has_w5: bool


@lru_cache(maxsize=None)
def class_facts(n: int, allow_n8: bool = False) -> tuple[ClassFacts, ...]:
    t5, u5, w5 = (gen_family(k, 5) for k in "TUW")
    out = []
    for t in enumerate_tournaments(n, allow_n8=allow_n8):
        out.append(ClassFacts(
            t,
            is_prime(t),
            find_embedding(t, t5) is not None,
            find_embedding(t, u5) is not None,
            find_embedding(t, w5) is not None,
        ))
    return tuple(out)


def check_class_counts(n: int, allow_n8: bool = False) -> CheckResult:
    """Enumeration, Burnside count and the brute-force canonicaliser must agree."""
    reps = [f.t for f in class_facts(n, allow_n8)]
    burnside = count_classes_burnside(n)
    codes = np.array([code_of(t) for t in reps], dtype=np.int64)
    canon = canonical_codes_exhaustive(n, codes) if n <= 7 else codes
    fixed = bool((canon == codes).all())
    distinct = len(set(codes.tolist())) == len(reps)
    ok = len(reps) == burnside == KNOWN_CLASS_COUNTS[n] and fixed and distinct
    return CheckResult("class-count", n, ok, f"{len(reps)} classes (Burnside {burnside})")


def check_soundness(n: int, allow_n8: bool = False) -> CheckResult:
    """Certificate verdict equals 5-subset search, and every certificate verifies."""
    for f in class_facts(n, allow_n8):
        cert = certify_u5_status(f.t)
        if is_free(cert) == f.has_u5:
            return CheckResult("recognizer-soundness", n, False, "verdict disagrees with brute force", f.t)
        problems = verify_certificate(f.t, cert)
        if problems:
            return CheckResult("recognizer-soundness", n, False, f"certificate rejected: {problems[0]}", f.t)
    free = sum(not f.has_u5 for f in class_facts(n, allow_n8))
    return CheckResult("recognizer-soundness", n, True, f"{len(class_facts(n, allow_n8))} classes agree, {free} U5-free")


def check_prime_census(n: int, allow_n8: bool = False) -> CheckResult:
    primes = [f.t for f in class_facts(n, allow_n8) if f.prime]
    detail = f"{len(primes)} prime classes"
    if n == 4:
        return CheckResult("prime-census", n, not primes, detail, primes[0] if primes else None)
    if n == 5:
        fams = [gen_family(k, 5) for k in "TUW"]
        matched = all(sum(are_isomorphic(f, p) is not None for p in primes) == 1 for f in fams)
        return CheckResult("prime-census", n, len(primes) == 3 and matched, detail + " (T5, U5, W5)")
    return CheckResult("prime-census", n, True, detail)


def check_small_primes_hit_a_pattern(n: int, allow_n8: bool = False) -> CheckResult:
    """Every prime on at least five vertices contains T5, U5 or W5."""
    for f in class_facts(n, allow_n8):
        if f.prime and not (f.has_t5 or f.has_u5 or f.has_w5):
            return CheckResult("prime-contains-T5-U5-or-W5", n, False, "prime avoiding all three", f.t)
    return CheckResult("prime-contains-T5-U5-or-W5", n, True, "no exceptions")


def check_t5_primes(n: int, allow_n8: bool = False) -> CheckResult:
    """A prime containing T5 is T_n or contains both U5 and W5."""
    tn = gen_family("T", n) if n % 2 else None
    count = 0
    for f in class_facts(n, allow_n8):
        if not (f.prime and f.has_t5):
            continue
        count += 1
        circular = tn is not None and are_isomorphic(tn, f.t) is not None
        if not circular and not (f.has_u5 and f.has_w5):
            return CheckResult("T5-primes", n, False, "prime with T5, not T_n, missing U5 or W5", f.t)
    return CheckResult("T5-primes", n, True, f"{count} prime classes contain T5")


def expected_w5free_primes(n: int) -> list[Tournament]:
    out = []
    if n in (0, 2):
        out.append(transitive(n))
    if n % 2 == 1:
        out.append(gen_family("T", n))
        if n >= 5:
            out.append(gen_family("U", n))
    if n == 6:
        q7 = gen_family("Q7")
        out.append(induced(q7, q7.full & ~1)[0])
    if n == 7:
        out.append(gen_family("Q7"))
    return out


def check_w5free_primes(n: int, allow_n8: bool = False) -> CheckResult:
    found = [f.t for f in class_facts(n, allow_n8) if f.prime and not f.has_w5]
    expected = expected_w5free_primes(n)
    matched = [sum(are_isomorphic(e, t) is not None for t in found) for e in expected]
    ok = len(found) == len(expected) and all(m == 1 for m in matched)
    witness = None
    if not ok:
        witness = next((t for t in found if all(are_isomorphic(e, t) is None for e in expected)), None)
    return CheckResult("W5-free-primes", n, ok, f"{len(found)} prime W5-free classes, {len(expected)} expected", witness)


def check_partitions(n: int, allow_n8: bool = False) -> CheckResult:
    """Prime and free of T5 and U5 iff a triangle partition is found (strict: no swallowed checks)."""
    count = 0
    for f in class_facts(n, allow_n8):
        if not f.prime:
            continue
        free = not (f.has_t5 or f.has_u5)
        p = find_triangle_partition_prime(f.t, strict=free)
        if (p is not None) != free or (p is not None and not verify_triangle_partition(f.t, p)):
            return CheckResult("triangle-partitions", n, False, "partition search disagrees with brute force", f.t)
        count += p is not None
    return CheckResult("triangle-partitions", n, True, f"{count} prime classes partitioned")


CHECKS: tuple[Callable[[int, bool], CheckResult], ...] = (
    check_class_counts,
    check_soundness,
    check_prime_census,
    check_small_primes_hit_a_pattern,
    check_t5_primes,
    check_w5free_primes,
    check_partitions,
)


def run_all(max_n: int = 7, allow_n8: bool = False, min_n: int = 1, log: Optional[Callable[[str], None]] = None) -> list[CheckResult]:
    results = []
    for n in range(min_n, max_n + 1):
        for check in CHECKS:
            if n < 5 and check in (check_small_primes_hit_a_pattern, check_t5_primes, check_partitions):
                continue
            start = time.perf_counter()
            r = check(n, allow_n8)
            r.detail += f" [{time.perf_counter() - start:.2f}s]"
            results.append(r)
            if log is not None:
                log(r.line())
    return results
