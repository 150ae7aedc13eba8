"""Directed graphs over 1-based node ids.

Holds both graphs the game needs: the follower graph (an edge u -> v means
v follows u and sees u's posts in his feed) and the interference graph
derived from it (an edge j -> i means player j's action enters player i's
cost). Graphs are immutable after construction and safe to share.
"""
from __future__ import annotations

from typing import Iterable


class EdgeListParseError(ValueError):
    """Raised by load_edge_list on malformed input; names the offending line."""


class Digraph:
    """Immutable simple digraph on nodes 1..n.

    Invariants enforced at construction: no self-loops, no duplicate
    edges, all endpoints in range.
    """

    __slots__ = ("n", "_edges", "_out", "_in")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise ValueError(f"node count must be >= 1, got {n}")
        seen: set[tuple[int, int]] = set()
        out: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
        inn: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
        for e in edges:
            u, v = e
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) not allowed")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            out[u].append(v)
            inn[v].append(u)
        self.n = n
        self._edges = tuple(sorted(seen))
        self._out = {i: tuple(sorted(out[i])) for i in out}
        self._in = {i: tuple(sorted(inn[i])) for i in inn}

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges as (u, v) pairs in canonical sorted order."""
        return self._edges

    def _check_node(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValueError(f"node id {i} out of range 1..{self.n}")

    def in_neighbors(self, i: int) -> set[int]:
        """Nodes j with an edge j -> i (the users i follows)."""
        self._check_node(i)
        return set(self._in[i])

    def out_neighbors(self, i: int) -> set[int]:
        """Nodes j with an edge i -> j (the followers of i)."""
        self._check_node(i)
        return set(self._out[i])

    def in_list(self, i: int) -> tuple[int, ...]:
        """in_neighbors in ascending order (fixed iteration order for sums)."""
        self._check_node(i)
        return self._in[i]

    def out_list(self, i: int) -> tuple[int, ...]:
        """out_neighbors in ascending order."""
        self._check_node(i)
        return self._out[i]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out.get(u, ())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={len(self._edges)})"


def strongly_connected_components(g: Digraph) -> list[set[int]]:
    """Tarjan's SCC algorithm, iterative to avoid recursion limits."""
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[set[int]] = []
    counter = 0

    for root in range(1, g.n + 1):
        if root in index:
            continue
        # explicit DFS stack of (node, iterator position into successors)
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            succ = g.out_list(v)
            advanced = False
            for k in range(pi, len(succ)):
                w = succ[k]
                if w not in index:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def is_strongly_connected(g: Digraph) -> bool:
    """True iff every node reaches every other along directed edges."""
    return len(strongly_connected_components(g)) == 1


def build_interference(g_c: Digraph) -> Digraph:
    """Interference graph: j -> i iff j -> i in g_c, or j and i share a follower.

    The first clause covers j's posts landing in i's feed; the second covers
    j and i competing for the attention of a common follower. No self-loops.
    """
    edges: set[tuple[int, int]] = set(g_c.edges)
    for l in range(1, g_c.n + 1):
        feeders = g_c.in_list(l)
        for a in feeders:
            for b in feeders:
                if a != b:
                    edges.add((a, b))
    return Digraph(g_c.n, edges)


def load_edge_list(text: str) -> Digraph:
    """Parse the plain-text edge-list format.

    First non-blank line is a header ``n=<count>``; each following
    non-blank line is one ``u v`` pair.
    """
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise EdgeListParseError(f"line {lineno}: expected header 'n=<count>', got {line!r}")
            try:
                n = int(line[2:])
            except ValueError:
                raise EdgeListParseError(f"line {lineno}: bad node count in {line!r}") from None
            if n < 1:
                raise EdgeListParseError(f"line {lineno}: node count must be >= 1")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: non-integer endpoint in {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise EdgeListParseError(f"line {lineno}: endpoint out of range 1..{n} in {line!r}")
        if u == v:
            raise EdgeListParseError(f"line {lineno}: self-loop {u} {v}")
        if (u, v) in seen:
            raise EdgeListParseError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add((u, v))
        edges.append((u, v))
    if n is None:
        raise EdgeListParseError("empty input: missing 'n=<count>' header")
    return Digraph(n, edges)


def save_edge_list(g: Digraph) -> str:
    """Canonical text form; load_edge_list(save_edge_list(g)) == g."""
    lines = [f"n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
