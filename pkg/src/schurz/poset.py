"""Carriers ``L(r1..rs)``, the 2-labeled posets ``P(d1 r1 ... d(s+1))`` and friends."""

from __future__ import annotations

import json
from functools import cached_property

from .errors import CapExceeded, NotProperError
from .notation import (
    BLACK,
    CLOSE,
    DOWN,
    OPEN,
    UP,
    WHITE,
    Dot,
    LabeledSeq,
    _as_connectors,
)

DEFAULT_ELEMENT_CAP = 20


def build_support(connectors) -> list:
    """Columns ``Y_1..Y_(s+1)`` as sorted tuples of integers."""
    connectors = _as_connectors(connectors)
    cols = [frozenset({0})]
    for x, r in enumerate(connectors, start=1):
        y = cols[-1]
        plus = {v + 1 for v in y}
        minus = {v - 1 for v in y}
        if r is UP:
            nxt = plus
        elif r is DOWN:
            nxt = minus
        elif r is OPEN:
            nxt = plus | minus
        else:
            nxt = plus & minus
        if not nxt:
            raise NotProperError(f"column {x + 1} is empty: connector word is not weakly proper")
        cols.append(frozenset(nxt))
    return [tuple(sorted(c)) for c in cols]


def carrier(connectors) -> list:
    return [(x, y) for x, col in enumerate(build_support(connectors), start=1) for y in col]


class TwoLabeledPoset:
    """A finite poset whose elements carry a label in {BLACK, WHITE}.

    ``covers`` holds pairs ``(p, q)`` with ``p < q`` and nothing in between.
    """

    def __init__(self, elements, relations, labels, reduce=True):
        self.elements = tuple(sorted(elements))
        self._index = {p: i for i, p in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate elements")
        self.labels = {p: _as_dot(labels[p]) for p in self.elements}
        rel = {(tuple(p), tuple(q)) for p, q in relations}
        for p, q in rel:
            if p not in self._index or q not in self._index:
                raise ValueError(f"relation {(p, q)} mentions an unknown element")
        self._generators = frozenset(rel)
        self._check_acyclic()
        self.covers = frozenset(self._reduction()) if reduce else self._generators

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"TwoLabeledPoset({len(self)} elements, {len(self.covers)} covers)"

    def __eq__(self, other):
        if not isinstance(other, TwoLabeledPoset):
            return NotImplemented
        return (self.elements, self.covers, self.labels) == (other.elements, other.covers, other.labels)

    def __hash__(self):
        return hash((self.elements, self.covers))

    def _check_acyclic(self):
        n = len(self.elements)
        succ = [[] for _ in range(n)]
        indeg = [0] * n
        for p, q in self._generators:
            succ[self._index[p]].append(self._index[q])
            indeg[self._index[q]] += 1
        stack = [i for i in range(n) if indeg[i] == 0]
        seen = 0
        while stack:
            i = stack.pop()
            seen += 1
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        if seen != n:
            raise ValueError("relations contain a cycle")

    @cached_property
    def _less(self):
        """Strict order as a list of bitmasks: bit j of ``_less[i]`` set iff element i < element j."""
        n = len(self.elements)
        up = [0] * n
        for p, q in self._generators:
            up[self._index[p]] |= 1 << self._index[q]
        # Floyd-Warshall style closure on bitsets
        for k in range(n):
            bit = 1 << k
            for i in range(n):
                if up[i] & bit:
                    up[i] |= up[k]
        return up

    def _reduction(self):
        n = len(self.elements)
        less = self._less
        out = []
        for i in range(n):
            above = less[i]
            implied = 0
            for j in range(n):
                if above >> j & 1:
                    implied |= less[j]
            direct = above & ~implied
            for j in range(n):
                if direct >> j & 1:
                    out.append((self.elements[i], self.elements[j]))
        return out

    def less(self, p, q) -> bool:
        return bool(self._less[self._index[p]] >> self._index[q] & 1)

    def leq(self, p, q) -> bool:
        return p == q or self.less(p, q)

    def index(self, p) -> int:
        return self._index[p]

    def down_masks(self) -> list:
        """Bitmask of the strict lower set of each element, by index."""
        n = len(self.elements)
        down = [0] * n
        for i, mask in enumerate(self._less):
            for j in range(n):
                if mask >> j & 1:
                    down[j] |= 1 << i
        return down

    def maximal(self) -> list:
        return [p for i, p in enumerate(self.elements) if self._less[i] == 0]

    def minimal(self) -> list:
        down = self.down_masks()
        return [p for i, p in enumerate(self.elements) if down[i] == 0]

    # -------------------------------------------------------------- export

    def to_json(self) -> dict:
        return {
            "elements": [list(p) for p in self.elements],
            "covers": [[list(p), list(q)] for p, q in sorted(self.covers)],
            "labels": {f"{p[0]},{p[1]}": self.labels[p].value for p in self.elements},
        }

    @classmethod
    def from_json(cls, doc) -> "TwoLabeledPoset":
        if isinstance(doc, str):
            doc = json.loads(doc)
        elements = [tuple(p) for p in doc["elements"]]
        covers = [(tuple(p), tuple(q)) for p, q in doc["covers"]]
        labels = {}
        for key, v in doc["labels"].items():
            x, y = key.split(",")
            labels[(int(x), int(y))] = v
        return cls(elements, covers, labels)


def _as_dot(v) -> Dot:
    if isinstance(v, Dot):
        return v
    return {"b": BLACK, "o": WHITE, "•": BLACK, "∘": WHITE}[v]


def build_poset(ls: LabeledSeq) -> TwoLabeledPoset:
    """``P(d1 r1 ... rs d(s+1))``: carrier ``L(r)``, column x labeled ``d_x``."""
    if isinstance(ls, str):
        ls = LabeledSeq.parse(ls)
    cols = build_support(ls.connectors)
    elements, relations, labels = [], [], {}
    for x, col in enumerate(cols, start=1):
        for y in col:
            elements.append((x, y))
            labels[(x, y)] = ls.dots[x - 1]
    present = set(elements)
    for x, y in elements:
        if (x + 1, y + 1) in present:
            relations.append(((x, y), (x + 1, y + 1)))
        if (x + 1, y - 1) in present:
            relations.append(((x + 1, y - 1), (x, y)))
    return TwoLabeledPoset(elements, relations, labels)


def is_admissible_poset(p: TwoLabeledPoset) -> bool:
    return all(p.labels[q] is WHITE for q in p.maximal()) and all(
        p.labels[q] is BLACK for q in p.minimal()
    )


def linear_extension_orders(p: TwoLabeledPoset, cap: int = DEFAULT_ELEMENT_CAP):
    """Yield every linear extension as a tuple of elements, smallest first.

    Backtracking always tries the available minimal element with the
    smallest carrier position first, so output is lexicographic.
    """
    n = len(p)
    if n > cap:
        raise CapExceeded(f"poset has {n} elements, cap is {cap}")
    down = p.down_masks()
    order = []

    def rec(placed):
        if len(order) == n:
            yield tuple(p.elements[i] for i in order)
            return
        for i in range(n):
            if not placed >> i & 1 and down[i] & ~placed == 0:
                order.append(i)
                yield from rec(placed | 1 << i)
                order.pop()

    yield from rec(0)


def linear_extensions(p: TwoLabeledPoset, cap: int = DEFAULT_ELEMENT_CAP) -> list:
    """Label words (``'b'``/``'o'`` strings) of all linear extensions, in lexicographic order."""
    return ["".join(p.labels[q].value for q in ext) for ext in linear_extension_orders(p, cap)]


def to_dot(p: TwoLabeledPoset, name: str = "poset") -> str:
    """Hasse diagram in Graphviz DOT; edges point from smaller to larger element."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [shape=circle, label="", width=0.2];']
    for q in p.elements:
        if p.labels[q] is BLACK:
            attrs = 'style=filled, fillcolor=black, xlabel="%d,%d"' % q
        else:
            attrs = 'style=solid, fillcolor=white, xlabel="%d,%d"' % q
        lines.append(f'  "{q[0]},{q[1]}" [{attrs}];')
    for a, b in sorted(p.covers):
        lines.append(f'  "{a[0]},{a[1]}" -> "{b[0]},{b[1]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
