"""Connected skew Young diagrams, diagonal-constant tableaux and the SSYT series.

Rows grow downward, columns rightward; diagonal ``d = col - row``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import AdmissibilityError, CapExceeded, NotProperError, ShapeError
from .notation import CLOSE, DOWN, OPEN, UP, SeqIndex, is_proper
from .series_eval import DEFAULT_LOOP_BUDGET, FLOAT, RATIONAL, EvalResult, _Arith, _check_mode, _check_N

_STEP_TO_CONNECTOR = {(0, 1): OPEN, (1, 0): CLOSE, (1, 1): UP, (0, 0): DOWN}
_CONNECTOR_TO_STEP = {v: k for k, v in _STEP_TO_CONNECTOR.items()}


def _normalize(cells):
    cells = {(int(i), int(j)) for i, j in cells}
    if not cells:
        raise ShapeError("empty diagram")
    r0 = min(i for i, _ in cells) - 1
    c0 = min(j for _, j in cells) - 1
    return frozenset((i - r0, j - c0) for i, j in cells), (r0, c0)


class SkewDiagram:
    """A connected skew Young diagram, stored translated so that min row = min col = 1."""

    def __init__(self, cells):
        self.cells, _ = _normalize(cells)
        self._validate()

    def _validate(self):
        rows = {}
        for i, j in self.cells:
            rows.setdefault(i, []).append(j)
        n_rows = max(rows)
        if sorted(rows) != list(range(1, n_rows + 1)):
            raise ShapeError("rows of the diagram are not consecutive")
        spans = []
        for i in range(1, n_rows + 1):
            cols = sorted(rows[i])
            if cols != list(range(cols[0], cols[-1] + 1)):
                raise ShapeError(f"row {i} is not contiguous")
            spans.append((cols[0], cols[-1]))
        for i in range(1, n_rows):
            (l1, r1), (l2, r2) = spans[i - 1], spans[i]
            if l2 > l1 or r2 > r1:
                raise ShapeError(f"rows {i} and {i + 1} do not form a skew shape")
        sources = [
            (i, j) for i, j in self.cells if (i - 1, j) not in self.cells and (i, j + 1) not in self.cells
        ]
        if len(sources) != 1:
            raise ShapeError(f"diagram is not connected ({len(sources)} top-right source cells)")

    def __eq__(self, other):
        return isinstance(other, SkewDiagram) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __len__(self):
        return len(self.cells)

    def __repr__(self):
        return f"SkewDiagram({sorted(self.cells)})"

    def __contains__(self, cell):
        return cell in self.cells

    def corners(self) -> list:
        return sorted(
            (i, j) for i, j in self.cells if (i + 1, j) not in self.cells and (i, j + 1) not in self.cells
        )

    def diagonals(self) -> dict:
        out = {}
        for i, j in self.cells:
            out.setdefault(j - i, []).append(i)
        return {d: sorted(rs) for d, rs in out.items()}


@dataclass(frozen=True)
class GeneralTableau:
    """A skew diagram with an arbitrary positive exponent in every cell."""

    shape: SkewDiagram
    exponents: dict

    def __post_init__(self):
        if set(self.exponents) != set(self.shape.cells):
            raise ValueError("exponents must be given for exactly the cells of the shape")
        if any(int(k) < 1 for k in self.exponents.values()):
            raise ValueError("exponents must be positive")

    @classmethod
    def from_cells(cls, cells: dict) -> "GeneralTableau":
        norm, (r0, c0) = _normalize(cells)
        shape = SkewDiagram(norm)
        return cls(shape, {(i - r0, j - c0): int(k) for (i, j), k in cells.items()})

    def is_admissible(self) -> bool:
        return all(self.exponents[c] >= 2 for c in self.shape.corners())

    def is_diagonal_constant(self) -> bool:
        return all(
            self.exponents[(i, j)] == self.exponents[(i + 1, j + 1)]
            for i, j in self.shape.cells
            if (i + 1, j + 1) in self.shape.cells
        )

    def to_diagonal(self) -> "DiagonalTableau":
        if not self.is_diagonal_constant():
            raise ValueError("tableau is not constant along diagonals")
        return DiagonalTableau(self.shape, {j - i: k for (i, j), k in self.exponents.items()})

    def rows(self) -> list:
        """Rows as lists with ``None`` for cells outside the shape."""
        n_rows = max(i for i, _ in self.shape.cells)
        n_cols = max(j for _, j in self.shape.cells)
        return [[self.exponents.get((i, j)) for j in range(1, n_cols + 1)] for i in range(1, n_rows + 1)]

    def to_json(self) -> dict:
        return {"cells": [{"row": i, "col": j, "k": self.exponents[(i, j)]} for i, j in sorted(self.exponents)]}


@dataclass(frozen=True)
class DiagonalTableau:
    """A skew diagram with one exponent per diagonal ``d = col - row``."""

    shape: SkewDiagram
    diag_exponents: dict

    def __post_init__(self):
        diags = set(self.shape.diagonals())
        if set(self.diag_exponents) != diags:
            raise ValueError(f"need one exponent per diagonal {sorted(diags)}")
        if any(int(k) < 1 for k in self.diag_exponents.values()):
            raise ValueError("exponents must be positive")

    @classmethod
    def from_rows(cls, rows) -> "DiagonalTableau":
        """Build from a row picture, ``None`` marking empty positions."""
        cells = {
            (i, j): k for i, row in enumerate(rows, start=1) for j, k in enumerate(row, start=1) if k is not None
        }
        return GeneralTableau.from_cells(cells).to_diagonal()

    def exponent(self, cell) -> int:
        i, j = cell
        return self.diag_exponents[j - i]

    def to_general(self) -> GeneralTableau:
        return GeneralTableau(self.shape, {c: self.exponent(c) for c in self.shape.cells})

    def is_admissible(self) -> bool:
        return all(self.exponent(c) >= 2 for c in self.shape.corners())

    def rows(self) -> list:
        return self.to_general().rows()

    def to_json(self) -> dict:
        return self.to_general().to_json()


def load_tableau(doc, diagonal: bool = False):
    """Read ``{"cells": [{"row": i, "col": j, "k": k}, ...]}`` (dict, JSON text or file path)."""
    if isinstance(doc, str):
        text = doc
        if not doc.lstrip().startswith("{"):
            with open(doc) as fh:
                text = fh.read()
        doc = json.loads(text)
    try:
        cells = {(int(c["row"]), int(c["col"])): int(c["k"]) for c in doc["cells"]}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed tableau document: {exc}") from None
    t = GeneralTableau.from_cells(cells)
    return t.to_diagonal() if diagonal else t


# --------------------------------------------------------------- conversion


def diagonal_profile(t: DiagonalTableau) -> list:
    """``[(d, (a_d, b_d), k_d), ...]`` for diagonals in decreasing d."""
    diags = t.shape.diagonals()
    out = []
    for d in sorted(diags, reverse=True):
        rows = diags[d]
        if rows != list(range(rows[0], rows[-1] + 1)):
            raise ShapeError(f"diagonal {d} does not occupy contiguous rows")
        out.append((d, (rows[0], rows[-1]), t.diag_exponents[d]))
    for (d1, (a, b), _), (d2, (a2, b2), _) in zip(out, out[1:]):
        if d2 != d1 - 1 or (a2 - a, b2 - b) not in _STEP_TO_CONNECTOR:
            raise ShapeError(f"diagonals {d1} -> {d2} do not join as in a connected shape")
    return out


def tableau_to_sequence(t: DiagonalTableau) -> SeqIndex:
    prof = diagonal_profile(t)
    connectors = [
        _STEP_TO_CONNECTOR[(a2 - a, b2 - b)] for (_, (a, b), _), (_, (a2, b2), _) in zip(prof, prof[1:])
    ]
    return SeqIndex(tuple(k for _, _, k in prof), tuple(connectors))


def sequence_to_tableau(s: SeqIndex) -> DiagonalTableau:
    if isinstance(s, str):
        s = SeqIndex.parse(s)
    if not is_proper(s.connectors):
        raise NotProperError("only proper connector words describe a finite connected diagram")
    d, a, b = 0, 1, 1
    cells, diag_k = {}, {0: s.exponents[0]}
    spans = [(d, a, b)]
    for r, k in zip(s.connectors, s.exponents[1:]):
        da, db = _CONNECTOR_TO_STEP[r]
        d, a, b = d - 1, a + da, b + db
        spans.append((d, a, b))
        diag_k[d] = k
    for d, a, b in spans:
        for i in range(a, b + 1):
            cells[(i, i + d)] = diag_k[d]
    g = GeneralTableau.from_cells(cells)
    return g.to_diagonal()


# ------------------------------------------------------------- SSYT series


def _ssyt_plan(cells):
    """Filling order plus, after each step, which filled cells are still needed.

    Row-major and column-major orders both fill a cell after its left and
    upper neighbours; the one with the narrower frontier is used.
    """
    row_major = _plan_for(sorted(cells))
    col_major = _plan_for(sorted(cells, key=lambda c: (c[1], c[0])))
    return min(row_major, col_major, key=lambda plan: max(len(l) for l in plan[1]))


def _plan_for(order):
    pos = {c: n for n, c in enumerate(order)}
    last_use = {}
    for n, (i, j) in enumerate(order):
        for nb in ((i, j - 1), (i - 1, j)):
            if nb in pos:
                last_use[nb] = max(last_use.get(nb, -1), n)
    live_after = []
    for n in range(len(order)):
        live_after.append(tuple(c for c in order[: n + 1] if last_use.get(c, -1) > n))
    return order, live_after


def ssyt_partial_sum(t: GeneralTableau, N: int, mode: str, loop_budget: int = DEFAULT_LOOP_BUDGET):
    """Sum over fillings with entries <= N, rows weak, columns strict.

    Cells are filled in reading order; the partial sum only depends on
    the values of already-filled cells that neighbour an unfilled one, so
    sub-results are memoised on that frontier.
    """
    cells = t.shape.cells
    order, live_after = _ssyt_plan(cells)
    arith = _Arith(N, mode)
    w = {c: arith.weights(t.exponents[c]) for c in order}
    widest = max(len(l) for l in live_after)
    if N ** (widest + 1) * len(order) > loop_budget:
        raise CapExceeded(f"SSYT enumeration would visit up to {N ** (widest + 1) * len(order):.3g} states")
    n_cells = len(order)
    memo = [dict() for _ in range(n_cells)]
    # frontier before step n is a tuple laid out like live_after[n - 1]
    slots = [()] + [tuple(live) for live in live_after[:-1]]
    steps = []
    for n, (i, j) in enumerate(order):
        here = {c: k for k, c in enumerate(slots[n])}
        left, up = here.get((i, j - 1)), here.get((i - 1, j))
        keep = [here.get(c, -1) for c in live_after[n]]  # -1 marks the new cell
        steps.append((left, up, keep, w[order[n]]))

    def rec(n, frontier):
        if n == n_cells:
            return 1
        hit = memo[n].get(frontier)
        if hit is not None:
            return hit
        left, up, keep, wc = steps[n]
        lo = 1
        if left is not None:
            lo = max(lo, frontier[left])
        if up is not None:
            lo = max(lo, frontier[up] + 1)
        total = 0
        for v in range(lo, N + 1):
            sub = rec(n + 1, tuple(v if k < 0 else frontier[k] for k in keep))
            if sub:
                total += wc[v] * sub
        memo[n][frontier] = total
        return total

    total = rec(0, ())
    arith.scale_power = sum(t.exponents.values())
    return arith.finish(total)


def eval_ssyt_series(t, N: int, mode: str = RATIONAL, loop_budget: int = DEFAULT_LOOP_BUDGET) -> EvalResult:
    """Truncated SMZV of an admissible tableau (any exponents, not only diagonal-constant)."""
    if isinstance(t, DiagonalTableau):
        t = t.to_general()
    _check_mode(mode)
    _check_N(N)
    if not t.is_admissible():
        raise AdmissibilityError("tableau has an exponent 1 on a corner cell")
    value = ssyt_partial_sum(t, N, mode, loop_budget)
    half = ssyt_partial_sum(t, N // 2, mode, loop_budget) if N >= 2 else (Fraction(0) if mode == RATIONAL else 0.0)
    return EvalResult(value, N, abs(float(value - half)), mode, {"cells": len(t.shape)})
