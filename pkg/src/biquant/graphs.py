"""Admissible directed graphs indexing polydifferential operators.

A graph has s first-type vertices ``i1..is`` (interior), m lower boundary
vertices ``d1..dm`` and n upper boundary vertices ``u1..un``.  Edges run

    first -> first      (inner; repetitions allowed),
    first -> lower      (external),
    upper -> first      (external),

so every edge touches at least one first-type vertex and no edge is a loop.
External edges may not repeat.  Each first-type vertex carries total orders on
its outgoing set Star(v) and incoming set End(v); these labels feed the input
and output slots of the tensor placed at v, and fix the ordering of form
factors in the configuration-space integrand.

The edge budget 2*#inner + #external of a graph equals
``edge_budget(m, n, s) = m + n + 3s - 3`` exactly when the associated
integrand is a top-degree form on the configuration space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

Vertex = tuple[str, int]  # ("i"|"d"|"u", 1-based index)
Edge = tuple[Vertex, Vertex]

_KIND_RANK = {"i": 0, "d": 1, "u": 2}


def vertex_token(v: Vertex) -> str:
    return f"{v[0]}{v[1]}"


def parse_vertex(tok: str) -> Vertex:
    kind, idx = tok[0], tok[1:]
    if kind not in _KIND_RANK or not idx.isdigit() or int(idx) < 1:
        raise ValueError(f"bad vertex token {tok!r}")
    return (kind, int(idx))


def _vkey(v: Vertex) -> tuple[int, int]:
    return (_KIND_RANK[v[0]], v[1])


def _ekey(e: Edge) -> tuple:
    return (_vkey(e[0]), _vkey(e[1]))


def edge_token(e: Edge) -> str:
    return f"{vertex_token(e[0])}>{vertex_token(e[1])}"


def is_inner(e: Edge) -> bool:
    return e[0][0] == "i" and e[1][0] == "i"


def edge_budget(m: int, n: int, s: int) -> int:
    """Budget 2*#inner + #external for a top-degree integrand."""
    return m + n + 3 * s - 3


@dataclass(frozen=True)
class AdmissibleGraph:
    """Directed labeled graph; ``star``/``end`` hold 0-based edge indices per
    first-type vertex, each a permutation of that vertex's out/in edges."""

    s: int
    m: int
    n: int
    edges: tuple[Edge, ...]
    star: tuple[tuple[int, ...], ...] = field(default=())
    end: tuple[tuple[int, ...], ...] = field(default=())

    # -- structure helpers ---------------------------------------------------

    def inner_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if is_inner(e)]

    def external_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if not is_inner(e)]

    def budget(self) -> int:
        return 2 * len(self.inner_edges()) + len(self.external_edges())

    def star_of(self, k: int) -> list[int]:
        """Out-edges of i<k> (1-based) in stored label order."""
        return list(self.star[k - 1])

    def end_of(self, k: int) -> list[int]:
        return list(self.end[k - 1])

    def profile(self, k: int) -> tuple[int, int]:
        """(#Star, #End) of first-type vertex k: the tensor shape it accepts."""
        return (len(self.star[k - 1]), len(self.end[k - 1]))

    # -- validation ------------------------------------------------------------

    def violations(self) -> list[str]:
        errs: list[str] = []
        if self.s < 0 or self.m < 0 or self.n < 0:
            errs.append("negative vertex count")
            return errs
        if 3 * self.s + self.m + self.n < 3:
            errs.append("too few vertices: 3s+m+n < 3")
        seen_ext: set[Edge] = set()
        for k, (src, dst) in enumerate(self.edges):
            if not self._in_range(src) or not self._in_range(dst):
                errs.append(f"edge e{k+1} uses out-of-range vertex")
                continue
            if src[0] not in ("i", "u"):
                errs.append(f"edge e{k+1} starts at a lower vertex")
            if dst[0] not in ("i", "d"):
                errs.append(f"edge e{k+1} ends at an upper vertex")
            if src[0] == "u" and dst[0] == "d":
                errs.append(f"edge e{k+1} joins two boundary vertices")
            if src == dst:
                errs.append(f"edge e{k+1} is a loop")
            if not is_inner((src, dst)):
                if (src, dst) in seen_ext:
                    errs.append(f"edge e{k+1} repeats an external edge")
                seen_ext.add((src, dst))
        if len(self.star) != self.s or len(self.end) != self.s:
            errs.append("label blocks do not cover every first-type vertex")
            return errs
        for k in range(1, self.s + 1):
            want_star = {j for j, e in enumerate(self.edges) if e[0] == ("i", k)}
            want_end = {j for j, e in enumerate(self.edges) if e[1] == ("i", k)}
            got_star = self.star[k - 1]
            got_end = self.end[k - 1]
            if len(got_star) != len(set(got_star)) or set(got_star) != want_star:
                errs.append(f"star labels of i{k} are not a permutation of Star(i{k})")
            if len(got_end) != len(set(got_end)) or set(got_end) != want_end:
                errs.append(f"end labels of i{k} are not a permutation of End(i{k})")
        return errs

    def _in_range(self, v: Vertex) -> bool:
        limit = {"i": self.s, "d": self.m, "u": self.n}[v[0]]
        return 1 <= v[1] <= limit

    # -- canonical key -----------------------------------------------------------

    def canonical_key(self) -> str:
        """Space-free key; equal iff graphs agree after sorting the edge list.

        Label sequences are re-expressed as edge tokens, so two labelings that
        differ only by swapping copies of a repeated inner edge coincide.
        """
        edge_tokens = ",".join(edge_token(e) for e in sorted(self.edges, key=_ekey))
        bits = [f"m{self.m}n{self.n}s{self.s}", f"E={edge_tokens}"]
        for k in range(1, self.s + 1):
            seq = ",".join(edge_token(self.edges[j]) for j in self.star[k - 1])
            bits.append(f"S{k}={seq}")
        for k in range(1, self.s + 1):
            seq = ",".join(edge_token(self.edges[j]) for j in self.end[k - 1])
            bits.append(f"T{k}={seq}")
        return ";".join(bits)

    def shape_key(self) -> str:
        """Key of the underlying edge multiset, ignoring label orders."""
        edge_tokens = ",".join(edge_token(e) for e in sorted(self.edges, key=_ekey))
        return f"m{self.m}n{self.n}s{self.s};E={edge_tokens}"

    # -- text format -------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.s} {self.m} {self.n}"]
        for src, dst in self.edges:
            lines.append(f"{vertex_token(src)} {vertex_token(dst)}")
        for k in range(1, self.s + 1):
            if self.star[k - 1]:
                refs = " ".join(f"e{j+1}" for j in self.star[k - 1])
                lines.append(f"star i{k}: {refs}")
        for k in range(1, self.s + 1):
            if self.end[k - 1]:
                refs = " ".join(f"e{j+1}" for j in self.end[k - 1])
                lines.append(f"end i{k}: {refs}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "AdmissibleGraph":
        header = None
        edges: list[Edge] = []
        star_lines: dict[int, tuple[int, ...]] = {}
        end_lines: dict[int, tuple[int, ...]] = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if header is None:
                parts = line.split()
                if len(parts) != 3:
                    raise ValueError(f"bad graph header {raw!r}")
                header = tuple(int(p) for p in parts)
                continue
            if line.startswith(("star ", "end ")):
                which, rest = line.split(None, 1)
                vtok, _, refs = rest.partition(":")
                v = parse_vertex(vtok.strip())
                if v[0] != "i":
                    raise ValueError(f"labels may only be attached to first-type vertices: {raw!r}")
                seq = tuple(_parse_edge_ref(r) for r in refs.split())
                (star_lines if which == "star" else end_lines)[v[1]] = seq
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"bad edge line {raw!r}")
            edges.append((parse_vertex(parts[0]), parse_vertex(parts[1])))
        if header is None:
            raise ValueError("empty graph text")
        s, m, n = header
        star = []
        end = []
        for k in range(1, s + 1):
            star.append(
                star_lines.get(
                    k, tuple(j for j, e in enumerate(edges) if e[0] == ("i", k))
                )
            )
            end.append(
                end_lines.get(
                    k, tuple(j for j, e in enumerate(edges) if e[1] == ("i", k))
                )
            )
        g = cls(s, m, n, tuple(edges), tuple(star), tuple(end))
        bad = [j for seq in (g.star + g.end) for j in seq if not 0 <= j < len(edges)]
        if bad:
            raise ValueError(f"label references edge out of range: e{bad[0]+1}")
        return g


def _parse_edge_ref(tok: str) -> int:
    if not tok.startswith("e") or not tok[1:].isdigit():
        raise ValueError(f"bad edge reference {tok!r}")
    return int(tok[1:]) - 1


def validate(g: AdmissibleGraph) -> tuple[bool, list[str]]:
    errs = g.violations()
    return (not errs, errs)


def parse_graphs(text: str) -> list[AdmissibleGraph]:
    """Parse a stream of blank-line-separated graph blocks.

    Full-line comments are dropped without acting as separators, so headered
    artifacts round-trip."""
    blocks: list[list[str]] = [[]]
    for raw in text.splitlines():
        if raw.split("#", 1)[0].strip():
            blocks[-1].append(raw)
        elif not raw.strip() and blocks[-1]:
            blocks.append([])
    return [AdmissibleGraph.from_text("\n".join(b)) for b in blocks if b]


def format_graphs(graphs: list[AdmissibleGraph]) -> str:
    return "\n\n".join(g.to_text() for g in graphs)


def enumerate_graphs(m: int, n: int, s: int, budget: int | None = None) -> list[AdmissibleGraph]:
    """All admissible labeled graphs at the given budget (default: top budget).

    Deterministic: results are sorted by canonical key.  Labelings that differ
    only by permuting copies of a repeated inner edge are identified.
    """
    if budget is None:
        budget = edge_budget(m, n, s)
    if budget < 0 or 3 * s + m + n < 3:
        return []
    ext_candidates: list[Edge] = []
    for k in range(1, s + 1):
        for j in range(1, m + 1):
            ext_candidates.append((("i", k), ("d", j)))
    for j in range(1, n + 1):
        for k in range(1, s + 1):
            ext_candidates.append((("u", j), ("i", k)))
    inner_candidates: list[Edge] = [
        (("i", a), ("i", b))
        for a in range(1, s + 1)
        for b in range(1, s + 1)
        if a != b
    ]

    seen: dict[str, AdmissibleGraph] = {}
    max_inner = budget // 2
    for n_inner in range(max_inner + 1):
        n_ext = budget - 2 * n_inner
        if n_ext > len(ext_candidates):
            continue
        for ext_choice in itertools.combinations(range(len(ext_candidates)), n_ext):
            ext_edges = [ext_candidates[i] for i in ext_choice]
            for inner_mult in _distributions(n_inner, len(inner_candidates)):
                inner_edges: list[Edge] = []
                for cand, mult in zip(inner_candidates, inner_mult):
                    inner_edges.extend([cand] * mult)
                edges = tuple(sorted(inner_edges + ext_edges, key=_ekey))
                for g in _labelings(m, n, s, edges):
                    key = g.canonical_key()
                    if key not in seen:
                        seen[key] = g
    return [seen[k] for k in sorted(seen)]


def _distributions(total: int, bins: int) -> list[tuple[int, ...]]:
    if bins == 0:
        return [()] if total == 0 else []
    if bins == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _distributions(total - first, bins - 1):
            out.append((first, *rest))
    return out


def _labelings(m: int, n: int, s: int, edges: tuple[Edge, ...]):
    per_vertex: list[list[tuple[int, ...]]] = []
    for k in range(1, s + 1):
        outs = [j for j, e in enumerate(edges) if e[0] == ("i", k)]
        ins = [j for j, e in enumerate(edges) if e[1] == ("i", k)]
        opts = [
            (so, eo)
            for so in itertools.permutations(outs)
            for eo in itertools.permutations(ins)
        ]
        per_vertex.append(opts)
    for combo in itertools.product(*per_vertex) if per_vertex else [()]:
        star = tuple(c[0] for c in combo)
        end = tuple(c[1] for c in combo)
        yield AdmissibleGraph(s, m, n, edges, star, end)
