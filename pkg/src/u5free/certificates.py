"""Independent certificate checking and the YAML certificate document.

The checker relies only on direct adjacency scans of the input tournament.
It never calls the recognizer or the decomposition code, so a certificate that
passes here stands on its own.
"""

from __future__ import annotations

import itertools
from typing import Any, Optional, Sequence

import yaml

from .core import Tournament
from .structure import Certificate, Composite, Critical, ForbiddenCopy, Partition, TrianglePartition

FORMAT = "u5free-certificate"
VERSION = 1
VALID = "VALID"
INVALID = "INVALID"


class CertificateFormatError(ValueError):
    pass


# -- direct predicates -------------------------------------------------------

def _u5_beats(i: int, j: int) -> bool:
    # U5 on 0..4: circular i -> i+1, i+2 (mod 5) with the arc between 0 and 1 reversed
    if {i, j} == {0, 1}:
        return i == 1
    return (j - i) % 5 in (1, 2)


def _circular_beats(n: int, i: int, j: int) -> bool:
    return 1 <= (j - i) % n <= (n - 1) // 2


def _chain_break(t: Tournament, order: Sequence[int]) -> Optional[tuple[int, int]]:
    """First pair listed earlier-to-later whose arc points backwards."""
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if not t.beats(order[i], order[j]):
                return order[i], order[j]
    return None


def _cycle(t: Tournament, verts: Sequence[int]) -> Optional[tuple[int, int, int]]:
    scores = [sum(t.beats(u, w) for w in verts if w != u) for u in verts]
    if len(set(scores)) == len(scores):
        return None
    for a, b, c in itertools.combinations(verts, 3):
        if t.beats(a, b) == t.beats(b, c) == t.beats(c, a):
            return (a, b, c)
    raise AssertionError("repeated score without a cyclic triangle")


class _Checker:
    def __init__(self, t: Tournament):
        self.t = t
        self.problems: list[str] = []

    def fail(self, path: str, msg: str) -> None:
        self.problems.append(f"{path}: {msg}")

    def labels(self, path: str, seq: Sequence[int]) -> bool:
        ok = True
        for v in seq:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self.t.n:
                self.fail(path, f"label {v!r} out of range")
                ok = False
        if len(set(seq)) != len(seq):
            self.fail(path, "repeated label")
            ok = False
        return ok

    def check(self, cert: Certificate, expected: set[int], path: str, top: bool) -> None:
        t = self.t
        if isinstance(cert, ForbiddenCopy):
            if not top:
                self.fail(path, "forbidden copy nested inside a composite")
            img = list(cert.image)
            if len(img) != 5 or not self.labels(path, img):
                self.fail(path, "image must be five distinct vertices")
                return
            for i in range(5):
                for j in range(i + 1, 5):
                    if t.beats(img[i], img[j]) != _u5_beats(i, j):
                        self.fail(path, f"pair ({img[i]}, {img[j]}) does not match U5")
            return
        if isinstance(cert, Critical):
            m = list(cert.mapping)
            if cert.n != len(m) or cert.n % 2 == 0:
                self.fail(path, "circular tournament needs an odd size equal to the mapping length")
                return
            if not self.labels(path, m):
                return
            if set(m) != expected:
                self.fail(path, "mapping does not cover exactly the certified vertex set")
            for i in range(cert.n):
                for j in range(i + 1, cert.n):
                    if t.beats(m[i], m[j]) != _circular_beats(cert.n, i, j):
                        self.fail(path, f"pair ({m[i]}, {m[j]}) does not match the circular tournament")
            return
        if isinstance(cert, Partition):
            parts = [list(p) for p in cert.partition.parts]
            flat = [v for p in parts for v in p]
            if not self.labels(path, flat):
                return
            if set(flat) != expected:
                self.fail(path, "parts do not cover exactly the certified vertex set")
            for name, p in zip("xyz", parts):
                bad = _chain_break(t, p)
                if bad is not None:
                    self.fail(path, f"part {name} is not in transitive order: {bad[1]} -> {bad[0]}")
            for i, j in ((0, 1), (1, 2), (2, 0)):
                cyc = _cycle(t, parts[i] + parts[j])
                if cyc is not None:
                    self.fail(path, f"union of parts {'xyz'[i]} and {'xyz'[j]} has cyclic triangle {cyc}")
            return
        if isinstance(cert, Composite):
            self.composite(cert, expected, path)
            return
        self.fail(path, f"unknown certificate type {type(cert).__name__}")

    def composite(self, cert: Composite, expected: set[int], path: str) -> None:
        t = self.t
        verts = list(cert.vertices)
        if not self.labels(path + ".vertices", verts):
            return
        if verts != sorted(verts):
            self.fail(path, "vertices must be listed in increasing order")
        if set(verts) != expected:
            self.fail(path, "vertices differ from the certified vertex set")
        if cert.node not in ("prime", "linear"):
            self.fail(path, f"unknown node kind {cert.node!r}")
        blocks = [list(b) for b in cert.blocks]
        if len(blocks) < 2:
            self.fail(path, "a composite needs at least two blocks")
            return
        flat = [v for b in blocks for v in b]
        if not self.labels(path + ".blocks", flat):
            return
        if set(flat) != set(verts):
            self.fail(path, "blocks do not partition the vertices")
        for k, b in enumerate(blocks):
            if not b:
                self.fail(path, f"block {k} is empty")
                return
            if b != sorted(b):
                self.fail(path, f"block {k} must be listed in increasing order")
        inside = set(verts)
        for k, b in enumerate(blocks):
            members = set(b)
            for w in inside - members:
                hits = {t.beats(w, u) for u in b}
                if len(hits) > 1:
                    self.fail(path, f"vertex {w} splits block {k}")
                    break
        if len(cert.children) != len(blocks):
            self.fail(path, "need exactly one child certificate per block")
            return
        reps = {min(b) for b in blocks}
        self.check(cert.quotient, reps, path + ".quotient", top=False)
        for k, (b, child) in enumerate(zip(blocks, cert.children)):
            self.check(child, set(b), f"{path}.children[{k}]", top=False)


def verify_certificate(t: Tournament, cert: Certificate) -> list[str]:
    """Problems found with ``cert`` as a certificate for ``t``; empty means valid."""
    c = _Checker(t)
    c.check(cert, set(range(t.n)), "certificate", top=True)
    return c.problems


def verdict(t: Tournament, cert: Certificate) -> str:
    return VALID if not verify_certificate(t, cert) else INVALID


# -- serialisation -----------------------------------------------------------

def to_data(cert: Certificate) -> dict[str, Any]:
    if isinstance(cert, ForbiddenCopy):
        return {"type": "forbidden-copy", "pattern": "U5", "image": list(cert.image)}
    if isinstance(cert, Critical):
        return {"type": "circular", "n": cert.n, "mapping": list(cert.mapping)}
    if isinstance(cert, Partition):
        p = cert.partition
        return {"type": "partition", "x": list(p.x), "y": list(p.y), "z": list(p.z)}
    return {
        "type": "composite",
        "node": cert.node,
        "vertices": list(cert.vertices),
        "blocks": [list(b) for b in cert.blocks],
        "quotient": to_data(cert.quotient),
        "children": [to_data(c) for c in cert.children],
    }


def _ints(data: dict, key: str) -> tuple[int, ...]:
    val = data.get(key)
    if not isinstance(val, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in val):
        raise CertificateFormatError(f"field {key!r} must be a list of integers")
    return tuple(val)


def from_data(data: Any) -> Certificate:
    if not isinstance(data, dict) or "type" not in data:
        raise CertificateFormatError("certificate node must be a mapping with a 'type'")
    kind = data["type"]
    if kind == "forbidden-copy":
        if data.get("pattern", "U5") != "U5":
            raise CertificateFormatError("only U5 copies are supported")
        return ForbiddenCopy(_ints(data, "image"))
    if kind == "circular":
        n = data.get("n")
        if not isinstance(n, int):
            raise CertificateFormatError("circular certificate needs an integer 'n'")
        return Critical(n, _ints(data, "mapping"))
    if kind == "partition":
        return Partition(TrianglePartition(_ints(data, "x"), _ints(data, "y"), _ints(data, "z")))
    if kind == "composite":
        blocks = data.get("blocks")
        children = data.get("children")
        if not isinstance(blocks, list) or not isinstance(children, list):
            raise CertificateFormatError("composite needs 'blocks' and 'children' lists")
        return Composite(
            str(data.get("node")),
            _ints(data, "vertices"),
            tuple(_ints({"b": b}, "b") for b in blocks),
            from_data(data.get("quotient")),
            tuple(from_data(c) for c in children),
        )
    raise CertificateFormatError(f"unknown certificate type {kind!r}")


def dump_document(cert: Certificate, n: int) -> str:
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "n": n,
        "verdict": "u5-free" if not isinstance(cert, ForbiddenCopy) else "contains-u5",
        "certificate": to_data(cert),
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_document(text: str) -> tuple[int, str, Certificate]:
    """Parse a certificate document; returns ``(n, verdict, certificate)``."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise CertificateFormatError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise CertificateFormatError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise CertificateFormatError(f"unsupported version {doc.get('version')!r}")
    n = doc.get("n")
    if not isinstance(n, int) or n < 0:
        raise CertificateFormatError("document needs a nonnegative integer 'n'")
    claimed = doc.get("verdict")
    if claimed not in ("u5-free", "contains-u5"):
        raise CertificateFormatError(f"unknown verdict {claimed!r}")
    return n, claimed, from_data(doc.get("certificate"))


def verify_document(t: Tournament, text: str) -> list[str]:
    """Check a whole document against ``t``: size, claimed verdict and certificate."""
    n, claimed, cert = load_document(text)
    problems = []
    if n != t.n:
        problems.append(f"document is for n = {n}, tournament has n = {t.n}")
    actual = "u5-free" if not isinstance(cert, ForbiddenCopy) else "contains-u5"
    if claimed != actual:
        problems.append(f"verdict {claimed!r} does not match a {actual!r} certificate")
    if not problems:
        problems += verify_certificate(t, cert)
    return problems
