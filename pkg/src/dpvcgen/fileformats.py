"""Text formats: rule files, graph files and the stats CSV."""

from __future__ import annotations

import csv
import os
from pathlib import Path
from typing import TextIO

from .branching import SubgraphBranchingRule
from .dpvc import HostGraph
from .genloop import RuleList, RunStats
from .graphs import SmallGraph, bits, mask_of

FORMAT_VERSION = 1
STATS_HEADER = ["d", "beta", "rules", "seconds"]


class FormatError(ValueError):
    pass


def dump_rules(rules: RuleList) -> str:
    out = [
        f"dpvc-rules {FORMAT_VERSION}",
        f"d {rules.d}",
        f"beta {rules.beta!r}",
        f"psi {rules.psi if rules.rules else 0}",
        f"rules {len(rules.rules)}",
    ]
    for i, r in enumerate(rules.rules):
        h = r.pattern
        out.append(f"rule {i}")
        out.append(f"n {h.n}")
        out.append("edges" + "".join(f" {u}-{v}" for u, v in h.edges()))
        out.append("red" + "".join(f" {v}" for v in bits(r.red)))
        for b in r.branches:
            out.append("branch" + "".join(f" {v}" for v in bits(b)))
        out.append("end")
    return "\n".join(out) + "\n"


def _expect(lines: list[str], pos: int, key: str) -> tuple[list[str], int]:
    if pos >= len(lines):
        raise FormatError(f"unexpected end of file, wanted '{key}'")
    parts = lines[pos].split()
    if not parts or parts[0] != key:
        raise FormatError(f"line {pos + 1}: expected '{key}', got {lines[pos]!r}")
    return parts[1:], pos + 1


def _int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{where}: not an integer: {tok!r}") from None


def parse_rules(text: str) -> RuleList:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    args, pos = _expect(lines, 0, "dpvc-rules")
    if args != [str(FORMAT_VERSION)]:
        raise FormatError(f"unsupported rule file version {args}")
    args, pos = _expect(lines, pos, "d")
    d = _int(args[0], "d")
    args, pos = _expect(lines, pos, "beta")
    try:
        beta = float(args[0])
    except (ValueError, IndexError):
        raise FormatError("bad beta") from None
    args, pos = _expect(lines, pos, "psi")
    psi = _int(args[0], "psi")
    args, pos = _expect(lines, pos, "rules")
    count = _int(args[0], "rules")
    rules = []
    for i in range(count):
        args, pos = _expect(lines, pos, "rule")
        if args != [str(i)]:
            raise FormatError(f"rule blocks out of order at rule {i}")
        args, pos = _expect(lines, pos, "n")
        n = _int(args[0], "n")
        args, pos = _expect(lines, pos, "edges")
        edges = []
        for tok in args:
            u, _, v = tok.partition("-")
            a, b = _int(u, "edge"), _int(v, "edge")
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise FormatError(f"rule {i}: bad edge {tok}")
            edges.append((a, b))
        args, pos = _expect(lines, pos, "red")
        red = [_int(t, "red") for t in args]
        branches = []
        while pos < len(lines) and lines[pos].split()[0] == "branch":
            verts = [_int(t, "branch") for t in lines[pos].split()[1:]]
            branches.append(mask_of(verts))
            pos += 1
        _, pos = _expect(lines, pos, "end")
        if any(not 0 <= v < n for v in red):
            raise FormatError(f"rule {i}: red vertex out of range")
        try:
            rules.append(SubgraphBranchingRule(SmallGraph.from_edges(n, edges), mask_of(red), tuple(branches)))
        except ValueError as exc:
            raise FormatError(f"rule {i}: {exc}") from None
    if pos != len(lines):
        raise FormatError(f"trailing content at line {pos + 1}")
    out = RuleList(rules, d, beta)
    if rules and out.psi != psi:
        raise FormatError(f"header psi {psi} disagrees with rules ({out.psi})")
    return out


def write_rules(path: str | os.PathLike, rules: RuleList) -> None:
    Path(path).write_text(dump_rules(rules))


def read_rules(path: str | os.PathLike) -> RuleList:
    return parse_rules(Path(path).read_text())


def parse_graph(text: str) -> HostGraph:
    toks = text.split()
    if len(toks) < 2:
        raise FormatError("graph file needs a 'n m' header")
    n, m = _int(toks[0], "n"), _int(toks[1], "m")
    if n < 0 or m < 0 or len(toks) != 2 + 2 * m:
        raise FormatError(f"expected {m} edges after the header")
    seen = set()
    edges = []
    for i in range(m):
        u, v = _int(toks[2 + 2 * i], "edge"), _int(toks[3 + 2 * i], "edge")
        if u == v:
            raise FormatError(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"edge {u} {v} out of range")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge {u} {v}")
        seen.add(key)
        edges.append(key)
    return HostGraph.from_edges(n, edges)


def dump_graph(g: HostGraph) -> str:
    ids = g.vertices()
    if ids != list(range(len(ids))):
        raise ValueError("graph files need vertex ids 0..n-1")
    edges = g.edges()
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


def read_graph(path: str | os.PathLike) -> HostGraph:
    return parse_graph(Path(path).read_text())


def append_stats(path: str | os.PathLike, stats: RunStats, rules: int) -> str:
    """Append one ``d,beta,rules,seconds`` row, writing the header on a new file."""
    path = Path(path)
    row = stats.csv_row(rules)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a") as fh:
        if new:
            fh.write(",".join(STATS_HEADER) + "\n")
        fh.write(row + "\n")
    return row


def read_stats(fh: TextIO) -> list[dict[str, str]]:
    reader = csv.DictReader(fh)
    if reader.fieldnames != STATS_HEADER:
        raise FormatError(f"stats header must be {','.join(STATS_HEADER)}")
    return list(reader)
