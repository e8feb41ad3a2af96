"""Text formats: the tournament matrix file and DOT export.

A tournament file starts with ``tournament <n>`` and then has one row per
vertex: character ``v`` of row ``u`` is ``1`` if ``u -> v``, ``0`` if
``v -> u`` and ``-`` on the diagonal.
"""

from __future__ import annotations

from .core import Tournament


class FormatError(ValueError):
    pass


def render_tournament(t: Tournament) -> str:
    lines = [f"tournament {t.n}"]
    for u in range(t.n):
        lines.append("".join("-" if u == v else ("1" if t.beats(u, v) else "0") for v in range(t.n)))
    return "\n".join(lines) + "\n"


def parse_tournament(text: str) -> Tournament:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tournament":
        raise FormatError("first line must be 'tournament <n>'")
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"bad vertex count {head[1]!r}") from None
    if n < 0:
        raise FormatError("vertex count must be nonnegative")
    rows = lines[1:]
    if len(rows) != n:
        raise FormatError(f"expected {n} rows, found {len(rows)}")
    succ = []
    for u, row in enumerate(rows):
        if len(row) != n:
            raise FormatError(f"row {u} has {len(row)} entries, expected {n}")
        mask = 0
        for v, ch in enumerate(row):
            if u == v:
                if ch != "-":
                    raise FormatError(f"diagonal entry ({u}, {u}) must be '-'")
            elif ch == "1":
                mask |= 1 << v
            elif ch != "0":
                raise FormatError(f"entry ({u}, {v}) is {ch!r}; expected 0, 1 or -")
        succ.append(mask)
    for u in range(n):
        for v in range(u + 1, n):
            if (succ[u] >> v & 1) == (succ[v] >> u & 1):
                raise FormatError(f"entries ({u}, {v}) and ({v}, {u}) must differ")
    return Tournament(n, tuple(succ))


def read_tournament(path: str) -> Tournament:
    with open(path, encoding="utf-8") as fh:
        return parse_tournament(fh.read())


def to_dot(t: Tournament, name: str = "T") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(t.n):
        lines.append(f"  v{v};")
    for u, v in t.arcs():
        lines.append(f"  v{u} -> v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
