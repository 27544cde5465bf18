"""Truncated evaluation of sequence-index SMZVs, their F-weighted generalization and classical MZVs.

All summation variables share one bound ``N``.  In ``rational`` mode every
weight ``m**-k`` is stored as the integer ``(L // m)**k`` with ``L =
lcm(1..N)``; the final sum is divided by the accumulated power of ``L``, so
results are exact :class:`fractions.Fraction` values.

The Schur-type sum is computed column by column (columns are the diagonals
of the diagram).  The running partial sum is kept as a signed sum of
products of one-dimensional arrays, one per variable of the current column;
summing out a variable over an interval ``[lo, hi)`` becomes a difference of
two prefix sums, so each step costs ``O(terms * N)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import AdmissibilityError, CapExceeded
from .notation import (
    SeqIndex,
    check_t_parameters,
    format_sequence,
    is_admissible_generalized,
    require_admissible,
)
from .poset import build_support

RATIONAL, FLOAT = "rational", "float"
DEFAULT_LOOP_BUDGET = 10**9


@dataclass(frozen=True)
class EvalResult:
    """A truncated sum ``S(N)`` with the heuristic error estimate ``|S(N) - S(N//2)|``."""

    value: object
    N: int
    error_estimate: float
    mode: str
    meta: dict = field(default_factory=dict, compare=False)

    def __float__(self):
        return float(self.value)

    def to_json(self) -> dict:
        if self.mode == RATIONAL and isinstance(self.value, Fraction):
            value = f"{self.value.numerator}/{self.value.denominator}"
        else:
            value = float(self.value)
        return {"value": value, "N": self.N, "error_estimate": self.error_estimate, "mode": self.mode}


def _check_mode(mode):
    if mode not in (RATIONAL, FLOAT):
        raise ValueError(f"mode must be 'rational' or 'float', got {mode!r}")


def _check_N(N):
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")


class _Arith:
    """Weight arrays and final normalisation for one evaluation at bound N."""

    def __init__(self, N, mode):
        self.N = N
        self.mode = mode
        self.scale_power = 0
        if mode == RATIONAL:
            self.L = math.lcm(*range(1, N + 1))
            self._m = np.array([0] + [self.L // m for m in range(1, N + 1)], dtype=object)
        else:
            self._m = np.arange(N + 1, dtype=float)
        self._cache = {}

    def weights(self, k):
        """Array ``a`` with ``a[m]`` standing for ``m**-k`` (m = 1..N), ``a[0] = 0``."""
        if k not in self._cache:
            if self.mode == RATIONAL:
                a = self._m**k
            else:
                a = np.zeros(self.N + 1)
                a[1:] = self._m[1:] ** (-float(k))
            a[0] = 0
            self._cache[k] = a
        self.scale_power += k
        return self._cache[k]

    def ones(self):
        if self.mode == RATIONAL:
            a = np.ones(self.N + 1, dtype=object)
        else:
            a = np.ones(self.N + 1)
        a[0] = 0
        return a

    def powers(self, t):
        """``a[m] = t**m`` for m = 0..N (index 0 is unused by the sums)."""
        if self.mode == RATIONAL:
            t = Fraction(t)
            a = np.empty(self.N + 1, dtype=object)
            cur = Fraction(1)
            for m in range(self.N + 1):
                a[m] = cur
                cur *= t
        else:
            with np.errstate(under="ignore"):
                a = float(t) ** np.arange(self.N + 1, dtype=float)
        return a

    def finish(self, total):
        if self.mode == RATIONAL:
            return Fraction(total) / Fraction(self.L) ** self.scale_power
        return float(total)


def _shifted_prefix(a):
    """``S[c] = sum_{1 <= m < c} a[m]`` for c = 0..N; S[0] = 0."""
    s = np.empty_like(a)
    s[0] = 0
    s[1:] = np.cumsum(a[:-1])
    return s


def _column_dp(exponents, cols, arith, budget, t=None):
    """Run the transfer recursion; return the (unnormalised) total."""
    N = arith.N
    terms = [(1, (arith.weights(exponents[0]),))]
    work = 0
    for x in range(1, len(cols)):
        old, new = cols[x - 1], cols[x]
        new_pos = {y: i for i, y in enumerate(new)}
        w = arith.weights(exponents[x])
        # choices[i]: list of (sign, new position, kind) for old variable i
        choices = []
        for y in old:
            lo = new_pos.get(y - 1)
            hi = new_pos.get(y + 1)
            if lo is not None and hi is not None:
                choices.append([(1, hi, "S"), (-1, lo, "S")])
            elif hi is not None:
                choices.append([(1, hi, "S")])
            elif lo is not None:
                choices.append([(1, lo, "T")])
            else:
                choices.append([(1, None, "total")])
        n_new_terms = len(terms) * math.prod(len(c) for c in choices)
        work += n_new_terms * len(new) * N
        if work > budget:
            raise CapExceeded(
                f"predicted work {work:.3g} exceeds loop budget {budget:.3g} "
                f"(column {x + 1}, {n_new_terms} terms)"
            )
        merged = {}
        alive = []  # keeps factor arrays referenced so their ids stay unique
        for coef, arrays in terms:
            derived = []
            alive.append(derived)
            for a in arrays:
                s = _shifted_prefix(a)
                total = s[-1] + a[-1]
                derived.append({"S": s, "T": total - s, "total": total})
            for pick in itertools.product(*choices):
                sign = coef
                factors = [[] for _ in new]
                scalar = 1
                for i, (sg, pos, kind) in enumerate(pick):
                    sign *= sg
                    if pos is None:
                        scalar = scalar * derived[i]["total"]
                    else:
                        factors[pos].append(derived[i][kind])
                out = []
                for fs in factors:
                    arr = w.copy()
                    for f in fs:
                        arr = arr * f
                    out.append(arr)
                if scalar != 1:
                    out[0] = out[0] * scalar
                key = tuple(tuple(id(f) for f in fs) for fs in factors)
                merged.setdefault(key, [0, out])[0] += sign
        terms = [(c, tuple(arrs)) for c, arrs in merged.values() if c != 0]
        terms = _compress(terms)
    return _final_sum(terms, arith, t)


def _compress(terms):
    """Merge terms whose arrays agree in all but one position (same objects)."""
    if len(terms) < 2:
        return terms
    h = len(terms[0][1])
    if h == 1:
        acc = None
        for c, (a,) in terms:
            acc = c * a if acc is None else acc + c * a
        return [(1, (acc,))]
    for pos in range(h):
        groups = {}
        for c, arrs in terms:
            key = tuple(id(a) for i, a in enumerate(arrs) if i != pos)
            g = groups.get(key)
            if g is None:
                groups[key] = [arrs, c * arrs[pos]]
            else:
                g[1] = g[1] + c * arrs[pos]
        terms = []
        for arrs, merged in groups.values():
            new = list(arrs)
            new[pos] = merged
            terms.append((1, tuple(new)))
    return terms


def _final_sum(terms, arith, t):
    if t is None:
        total = 0
        for c, arrs in terms:
            (a,) = arrs
            total = total + c * a[1:].sum()
        return total
    # F(t_1..t_j ; m_1..m_(j-1)) expanded by permutations, summed over m_1 < ... < m_(j-1)
    h = len(terms[0][1])
    pows = [arith.powers(tv) for tv in t]
    total = 0
    for perm in itertools.permutations(range(h + 1)):
        sign = _perm_sign(perm)
        # perm[0] is the column taken by the row of ones; perm[i] for variable i
        for c, arrs in terms:
            total = total + sign * c * _chain_sum([arrs[i] * pows[perm[i + 1]] for i in range(h)])
    return total


def _chain_sum(arrays):
    """``sum_{1 <= m_1 < m_2 < ... <= N} prod_i arrays[i][m_i]``."""
    acc = arrays[0].copy()
    acc[0] = 0
    for a in arrays[1:]:
        acc = a * _shifted_prefix(acc)
        acc[0] = 0
    return acc[1:].sum()


def _perm_sign(perm):
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _as_seq(s):
    return SeqIndex.parse(s) if isinstance(s, str) else s


def _schur_value(s, N, mode, budget, t=None):
    cols = build_support(s.connectors)
    if N * sum(map(len, cols)) > budget:
        raise CapExceeded(f"N={N} over {sum(map(len, cols))} variables exceeds loop budget {budget:.3g}")
    arith = _Arith(N, mode)
    total = _column_dp(s.exponents, cols, arith, budget, t)
    # weights() was called once per column; each column has |Y_x| variables
    arith.scale_power = sum(k * len(c) for k, c in zip(s.exponents, cols))
    return arith.finish(total)


def _result(fn, N, mode, **meta):
    value = fn(N)
    half = fn(N // 2) if N >= 2 else (Fraction(0) if mode == RATIONAL else 0.0)
    return EvalResult(value, N, abs(float(value - half)), mode, meta)


def eval_schur_series(s, N: int, mode: str = FLOAT, loop_budget: int = DEFAULT_LOOP_BUDGET) -> EvalResult:
    """Truncated ``zeta(k1 r1 ... k(s+1))`` with every variable at most N.

    >>> eval_schur_series("2", 3, "rational").value
    Fraction(49, 36)
    """
    s = _as_seq(s)
    _check_mode(mode)
    _check_N(N)
    require_admissible(s)
    return _result(lambda n: _schur_value(s, n, mode, loop_budget), N, mode, index=format_sequence(s))


def f_determinant(t: Sequence, n: Sequence):
    """Determinant with a first row of ones and row i+1 equal to ``(t_0**n_i, ..., t_j**n_i)``.

    Exact for int/Fraction inputs (fraction-free elimination), float otherwise.
    """
    t = list(t)
    n = list(n)
    if len(t) != len(n) + 1:
        raise ValueError(f"need len(t) == len(n) + 1, got {len(t)} and {len(n)}")
    rows = [[1] * len(t)] + [[tv**ni for tv in t] for ni in n]
    return _det(rows)


def _det(rows):
    """Bareiss elimination when all entries are exact, Gaussian with pivoting otherwise."""
    m = [list(r) for r in rows]
    size = len(m)
    if size == 0:
        return 1
    exact = all(isinstance(v, (int, Fraction)) for r in m for v in r)
    if not exact:
        return float(np.linalg.det(np.array(m, dtype=float)))
    m = [[Fraction(v) for v in r] for r in m]
    sign = 1
    prev = Fraction(1)
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[-1][-1]


def eval_schur_series_generalized(
    s, t: Sequence, N: int, mode: str = FLOAT, loop_budget: int = DEFAULT_LOOP_BUDGET
) -> EvalResult:
    """Truncated ``zeta(s; t_1..t_j)``: the Schur sum weighted by ``F(t ; last-column variables)``.

    Rational mode requires every ``t`` to be an int or Fraction.
    """
    s = _as_seq(s)
    _check_mode(mode)
    _check_N(N)
    t = list(t)
    check_t_parameters(s, t)
    if mode == RATIONAL and not all(isinstance(v, (int, Fraction)) for v in t):
        raise ValueError("rational mode needs int or Fraction t-parameters")
    if not is_admissible_generalized(s, t):
        raise AdmissibilityError(f"({format_sequence(s)}; {t}) is not admissible")
    return _result(
        lambda n: _schur_value(s, n, mode, loop_budget, t=t), N, mode, index=format_sequence(s), t=[str(v) for v in t]
    )


def _mzv_value(word, star, N, mode):
    arith = _Arith(N, mode)
    acc = None
    for k in word:
        w = arith.weights(k)
        if acc is None:
            acc = w.copy()
        else:
            prefix = np.cumsum(acc)
            # strict: sum over m < n; star: sum over m <= n
            below = prefix if star else _shifted_prefix(acc)
            acc = w * below
        acc[0] = 0
    return arith.finish(acc[1:].sum())


def check_mzv_index(word):
    word = tuple(int(k) for k in word)
    if not word or any(k < 1 for k in word):
        raise ValueError(f"MZV index must be a non-empty tuple of positive integers: {word}")
    if word[-1] < 2:
        raise AdmissibilityError(f"MZV index {word} is not admissible (last exponent must be >= 2)")
    return word


def eval_mzv(
    word: Sequence[int], star: bool = False, N: int = 10**4, mode: str = FLOAT, loop_budget: int = DEFAULT_LOOP_BUDGET
) -> EvalResult:
    """Truncated ``sum_{n_1 < ... < n_r <= N} prod n_i**-k_i`` (``<=`` when ``star``).

    ``k_1`` sits on the smallest variable, so admissibility means ``k_r >= 2``.
    """
    word = check_mzv_index(word)
    _check_mode(mode)
    _check_N(N)
    if N * len(word) > loop_budget:
        raise CapExceeded(f"N={N} at depth {len(word)} exceeds loop budget {loop_budget:.3g}")
    return _result(lambda n: _mzv_value(word, star, n, mode), N, mode, word=list(word), star=star)


mzv_partial_sum = _mzv_value
schur_partial_sum = _schur_value
