"""Directed-multigraph calculus for invariants.

A tableau is a list of directed edges (a, b); the edge a -> b stands for the
Plücker minor p_ab = x_a y_b - x_b y_a, vertex 0 being the binary-form slot
(x0, y0).  Reversing an edge flips the sign and a self-loop is zero.

Vertices sit on a line in the order 0, 1, ..., n.  Two edges (a, c), (b, d)
with a < b < c < d cross; a tableau is standard when it is normalized and has
no crossing pair.  The three-term Plücker relation

    p_ac p_bd = p_ab p_cd + p_ad p_bc

uncrosses a pair and strictly lowers the crossing number, so straightening
terminates in noncrossing graphs, which form a basis of the invariants.

Two text forms are accepted: the 2 x m bracket matrix ``[[0,0,1],[1,2,3]]``
(top row sources, bottom row targets) and the edge list ``[[0,1],[0,2],[1,3]]``.
"""

from __future__ import annotations

import heapq
import json
from functools import lru_cache
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .polyring import ONE, ZERO, Multidegree, Polynomial, plucker

Edge = tuple[int, int]


@dataclass(frozen=True, order=True)
class Tableau:
    """Ordered edge list of a directed multigraph on vertices 0..n."""

    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        for a, b in edges:
            if a < 0 or b < 0:
                raise ValueError(f"negative vertex in edge ({a}, {b})")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def of(cls, edges: Iterable[Iterable[int]]) -> "Tableau":
        return cls(tuple(tuple(e) for e in edges))

    @classmethod
    def from_rows(cls, top: Iterable[int], bottom: Iterable[int]) -> "Tableau":
        top, bottom = list(top), list(bottom)
        if len(top) != len(bottom):
            raise ValueError("tableau rows have different lengths")
        return cls(tuple(zip(top, bottom)))

    @classmethod
    def parse(cls, text: str, form: str = "rows") -> "Tableau":
        """Parse ``[[sources...],[targets...]]`` (form "rows") or ``[[a,b],[c,d],...]`` (form "edges")."""
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed tableau {text!r}") from exc
        if not (
            isinstance(rows, list)
            and all(isinstance(r, list) for r in rows)
            and all(isinstance(v, int) and not isinstance(v, bool) for r in rows for v in r)
        ):
            raise ValueError(f"tableau must be lists of vertex indices, got {text!r}")
        if form == "rows":
            if len(rows) != 2:
                raise ValueError(f"tableau must be two rows, got {text!r}")
            return cls.from_rows(rows[0], rows[1])
        if form == "edges":
            if any(len(r) != 2 for r in rows):
                raise ValueError(f"every edge needs two endpoints, got {text!r}")
            return cls.of(rows)
        raise ValueError(f"unknown tableau form {form!r}")

    def to_text(self, form: str = "rows") -> str:
        if form == "edges":
            return "[" + ",".join(f"[{a},{b}]" for a, b in self.edges) + "]"
        top = ",".join(str(a) for a, _ in self.edges)
        bottom = ",".join(str(b) for _, b in self.edges)
        return f"[[{top}],[{bottom}]]"

    def __str__(self) -> str:
        return self.to_text()

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        return 1 + max((max(e) for e in self.edges), default=0)

    def degrees(self, n: int | None = None) -> tuple[int, ...]:
        """Vertex degrees (deg w0, deg w1, ..., deg wn)."""
        size = self.num_vertices if n is None else n + 1
        deg = [0] * max(size, self.num_vertices)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return tuple(deg)

    def multidegree(self, n: int | None = None) -> Multidegree:
        deg = self.degrees(n)
        return Multidegree(0, deg[0], deg[1:])

    def has_self_loop(self) -> bool:
        return any(a == b for a, b in self.edges)


class GraphElement:
    """Formal rational combination of normalized tableaux."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tableau, object] | None = None):
        clean: dict[Tableau, Fraction] = {}
        for t, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                c = clean.get(t, 0) + c
                if c:
                    clean[t] = c
                else:
                    clean.pop(t, None)
        self.terms = clean

    @classmethod
    def of(cls, t: Tableau, c=1) -> "GraphElement":
        """The element c * t, normalized."""
        return normalize(t) * c

    def __add__(self, other: "GraphElement") -> "GraphElement":
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = out.get(t, 0) + c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return GraphElement(out)

    def __neg__(self) -> "GraphElement":
        return GraphElement({t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "GraphElement") -> "GraphElement":
        return self + (-other)

    def __mul__(self, c) -> "GraphElement":
        c = Fraction(c)
        return GraphElement({t: c * v for t, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Tableau, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].edges)

    def to_text(self, form: str = "rows") -> str:
        if not self.terms:
            return "0"
        parts = []
        for t, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign}{abs(c)}*{t.to_text(form)}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GraphElement({self.to_text()})"


# -- relations (a) and (b) ------------------------------------------------------

def normalize(t: Tableau) -> GraphElement:
    """Orient every edge low -> high (one sign per reversal) and sort; self-loops give 0."""
    if t.has_self_loop():
        return GraphElement()
    sign = 1
    edges = []
    for a, b in t.edges:
        if a > b:
            sign = -sign
            a, b = b, a
        edges.append((a, b))
    edges.sort()
    return GraphElement({Tableau(tuple(edges)): sign})


def _crosses(e: Edge, f: Edge) -> bool:
    (a, c), (b, d) = sorted((e, f))
    return a < b < c < d


def crossing_number(t: Tableau) -> int:
    """Number of crossing edge pairs of a normalized tableau."""
    e = t.edges
    return sum(1 for k in range(len(e)) for l in range(k + 1, len(e)) if _crosses(e[k], e[l]))


def first_violation(t: Tableau) -> tuple[int, int] | None:
    """Positions (k, l), k < l, of the first crossing edge pair of a normalized t."""
    e = t.edges
    for l in range(1, len(e)):
        for k in range(l):
            if _crosses(e[k], e[l]):
                return k, l
    return None


def is_standard(t: Tableau) -> bool:
    """Normalized (edges low -> high, sorted) and noncrossing."""
    e = t.edges
    if any(a >= b for a, b in e):
        return False
    if list(e) != sorted(e):
        return False
    return first_violation(t) is None


def _uncross(t: Tableau, k: int, l: int) -> list[tuple[Tableau, int]]:
    # a < b < c < d:  p_ac p_bd = p_ab p_cd + p_ad p_bc
    (a, c), (b, d) = sorted((t.edges[k], t.edges[l]))
    rest = tuple(e for i, e in enumerate(t.edges) if i not in (k, l))
    return [(Tableau(tuple(sorted(rest + pair))), 1) for pair in (((a, b), (c, d)), ((a, d), (b, c)))]


def straighten(g: GraphElement | Tableau) -> GraphElement:
    """Rewrite ``g`` as a combination of standard (noncrossing) tableaux.

    Each uncrossing strictly lowers the crossing number, so popping tableaux
    in decreasing crossing number visits each one once with its fully
    accumulated coefficient.
    """
    if isinstance(g, Tableau):
        g = normalize(g)
    pending: dict[Tableau, Fraction] = dict(g.terms)
    heap = [(-crossing_number(t), t.edges) for t in pending]
    heapq.heapify(heap)
    out: dict[Tableau, Fraction] = {}
    while heap:
        neg, edges = heapq.heappop(heap)
        t = Tableau(edges)
        c = pending.pop(t, 0)
        if not c:
            continue
        v = first_violation(t)
        if v is None:
            out[t] = out.get(t, 0) + c
            continue
        for t2, s in _uncross(t, *v):
            if t2 not in pending:
                x = crossing_number(t2)
                if x >= -neg:
                    raise AssertionError(f"uncrossing {t} did not lower the crossing number")
                heapq.heappush(heap, (-x, t2.edges))
            pending[t2] = pending.get(t2, 0) + s * c
    return GraphElement(out)


def to_polynomial(g: GraphElement | Tableau) -> Polynomial:
    """Sum of coefficient times product of Plücker minors over edges."""
    if isinstance(g, Tableau):
        if g.has_self_loop():
            return ZERO
        g = GraphElement({g: 1})
    acc = ZERO
    for t, c in g.terms.items():
        p = ONE
        for a, b in t.edges:
            p = p * plucker(a, b)
        acc = acc + p * c
    return acc


# -- colorings and cycles ----------------------------------------------------------

@dataclass(frozen=True)
class TwoColoring:
    assignment: dict[int, int]

    def color(self, v: int) -> int:
        return self.assignment[v]


def _adjacency(t: Tableau) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in t.edges:
        if a == 0 or b == 0:
            continue
        adj[a].append(b)
        if a != b:
            adj[b].append(a)
    return adj


def _central_mass(t: Tableau) -> dict[int, int]:
    mass: dict[int, int] = defaultdict(int)
    for a, b in t.edges:
        if a == 0 and b != 0:
            mass[b] += 1
        elif b == 0 and a != 0:
            mass[a] += 1
    return mass


def find_two_coloring(t: Tableau, m: int) -> TwoColoring | None:
    """A proper 2-coloring of the vertices != 0 splitting the vertex-0 edges m / m, if any."""
    if t.degrees()[0] != 2 * m:
        raise ValueError(f"vertex 0 has degree {t.degrees()[0]}, expected {2 * m}")
    if any(a == b for a, b in t.edges):
        return None
    adj = _adjacency(t)
    mass = _central_mass(t)
    vertices = sorted({v for e in t.edges for v in e if v != 0})
    # BFS each component; the root gets color 1
    colour: dict[int, int] = {}
    components: list[tuple[list[int], int, int]] = []
    for root in vertices:
        if root in colour:
            continue
        colour[root] = 1
        members = [root]
        queue = [root]
        while queue:
            u = queue.pop()
            for w in adj.get(u, ()):
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    members.append(w)
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
        zero_mass = sum(mass.get(v, 0) for v in members if colour[v] == 0)
        one_mass = sum(mass.get(v, 0) for v in members if colour[v] == 1)
        components.append((members, zero_mass, one_mass))
    # subset-sum over component orientations: color-0 mass must be m
    reach: list[dict[int, bool]] = [{0: False}]
    for _, z, o in components:
        nxt: dict[int, bool] = {}
        for s in reach[-1]:
            for flip, add in ((False, z), (True, o)):
                if s + add <= m and s + add not in nxt:
                    nxt[s + add] = flip
        reach.append(nxt)
    if m not in reach[-1]:
        return None
    s = m
    for k in range(len(components) - 1, -1, -1):
        members, z, o = components[k]
        flip = reach[k + 1][s]
        s -= o if flip else z
        if flip:
            for v in members:
                colour[v] = 1 - colour[v]
    return TwoColoring(dict(sorted(colour.items())))


def find_odd_cycle(t: Tableau) -> list[int] | None:
    """Some odd cycle among vertices != 0 (as a vertex list), or None."""
    for a, b in t.edges:
        if a == b and a != 0:
            return [a]
    adj = _adjacency(t)
    depth: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for root in sorted(adj):
        if root in depth:
            continue
        depth[root] = 0
        parent[root] = None
        stack = [root]
        while stack:
            u = stack.pop()
            for w in sorted(adj[u]):
                if w not in depth:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    stack.append(w)
                elif (depth[w] - depth[u]) % 2 == 0:
                    return _tree_cycle(u, w, depth, parent)
    return None


def _tree_cycle(u: int, w: int, depth, parent) -> list[int]:
    left, right = [u], [w]
    while depth[left[-1]] > depth[right[-1]]:
        left.append(parent[left[-1]])
    while depth[right[-1]] > depth[left[-1]]:
        right.append(parent[right[-1]])
    while left[-1] != right[-1]:
        left.append(parent[left[-1]])
        right.append(parent[right[-1]])
    return left + right[-2::-1]


# -- the moves t1 and t' -------------------------------------------------------------

def t1_move(t: Tableau, i: int) -> Tableau:
    """Add a double edge w0 -> wi."""
    if i < 1:
        raise ValueError("t1_move needs a factor index i >= 1")
    return Tableau(t.edges + ((0, i), (0, i)))


def tprime_move(t: Tableau, i: int) -> GraphElement:
    """Re-root the two vertex-0 edges at wi (w0->wk becomes wi->wk)."""
    if i < 1:
        raise ValueError("tprime_move needs a factor index i >= 1")
    deg0 = t.degrees()[0]
    if deg0 != 2:
        raise ValueError(f"tprime_move needs deg(w0) = 2, got {deg0}")
    if any(a == b == 0 for a, b in t.edges):
        return GraphElement()
    edges = tuple((i if a == 0 else a, i if b == 0 else b) for a, b in t.edges)
    return normalize(Tableau(edges))


# -- standard tableaux -----------------------------------------------------------------

def enumerate_standard(l: Multidegree | Iterable[int]) -> list[Tableau]:
    """All standard tableaux with vertex degrees (l.v0, l.factors...), sorted by edge list.

    Each vertex v is blown up into deg(v) points on the line; noncrossing
    perfect matchings of those points with no edge inside a block are in
    bijection with the noncrossing loopless multigraphs of that degree.
    """
    if not isinstance(l, Multidegree):
        l = Multidegree(0, 0, tuple(l))
    if l.sym:
        raise ValueError("graphs carry no symmetric-power grade")
    if l.is_empty():
        return []
    labels = tuple(v for v, k in enumerate((l.v0,) + l.factors) for _ in range(k))
    if len(labels) % 2:
        return []

    @lru_cache(maxsize=None)
    def match(i: int, j: int) -> tuple[tuple[Edge, ...], ...]:
        # noncrossing matchings of points i..j-1
        if i == j:
            return ((),)
        out = []
        for q in range(i + 1, j, 2):
            if labels[q] == labels[i]:
                continue
            inner, outer = match(i + 1, q), match(q + 1, j)
            for a in inner:
                for b in outer:
                    out.append(((labels[i], labels[q]),) + a + b)
        return tuple(out)

    found = {tuple(sorted(m)) for m in match(0, len(labels))}
    return [Tableau(e) for e in sorted(found)]
