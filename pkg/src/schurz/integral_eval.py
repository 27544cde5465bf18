"""Integral-side evaluations: linear extensions, quadrature checks and Monte Carlo.

The poset integral ``I(X)`` is split over the linear extensions of ``X``;
each extension is a simplex iterated integral, i.e. a classical MZV.  The
recursive identities between the F-weighted series are checked by
iterated adaptive quadrature (QUADPACK via :func:`scipy.integrate.quad`).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import AdmissibilityError, CapExceeded, SchurzError
from .notation import (
    BLACK,
    CLOSE,
    DOWN,
    OPEN,
    UP,
    WHITE,
    SeqIndex,
    excess,
    format_sequence,
    is_weakly_proper,
)
from .poset import DEFAULT_ELEMENT_CAP, TwoLabeledPoset, build_support, is_admissible_poset
from .series_eval import FLOAT, RATIONAL, EvalResult, _check_mode, _check_N, eval_mzv, eval_schur_series_generalized, f_determinant

MAX_QUAD_DEPTH = 2


# ------------------------------------------------------- linear extensions


def expand_linear_extensions(p: TwoLabeledPoset, cap: int = DEFAULT_ELEMENT_CAP) -> Counter:
    """Multiset of label words of all linear extensions, as a ``Counter``.

    Counted by dynamic programming over down-sets, so the cost is the
    number of order ideals rather than the number of extensions.
    """
    if not is_admissible_poset(p):
        raise AdmissibilityError("poset is not admissible")
    n = len(p)
    if n > cap:
        raise CapExceeded(f"poset has {n} elements, cap is {cap}")
    down = p.down_masks()
    labels = [p.labels[q].value for q in p.elements]
    full = (1 << n) - 1
    memo = {full: Counter({"": 1})}

    def words_from(placed):
        hit = memo.get(placed)
        if hit is not None:
            return hit
        out = Counter()
        for i in range(n):
            if not placed >> i & 1 and down[i] & ~placed == 0:
                for w, c in words_from(placed | 1 << i).items():
                    out[labels[i] + w] += c
        memo[placed] = out
        return out

    return words_from(0)


def word_to_mzv(w: str) -> tuple:
    """``'b' 'o'*(a1-1) 'b' 'o'*(a2-1) ...`` (smallest variable first) -> ``(a1, a2, ...)``."""
    w = str(w)
    if not w or set(w) - {"b", "o"}:
        raise ValueError(f"label word must be a non-empty string over 'b'/'o': {w!r}")
    if w[0] != "b" or w[-1] != "o":
        raise AdmissibilityError(f"word {w!r} must start with 'b' and end with 'o'")
    blocks = w.split("b")[1:]
    return tuple(1 + len(b) for b in blocks)


def eval_via_extensions(
    p: TwoLabeledPoset, N: int, mode: str = FLOAT, cap: int = DEFAULT_ELEMENT_CAP
) -> EvalResult:
    """``sum over extensions`` of truncated strict MZVs; estimates ``I(p)``."""
    _check_mode(mode)
    _check_N(N)
    words = expand_linear_extensions(p, cap)
    by_index = Counter()
    for w, c in words.items():
        by_index[word_to_mzv(w)] += c
    value = 0
    estimate = 0
    for idx in sorted(by_index):
        r = eval_mzv(idx, False, N, mode)
        value += by_index[idx] * r.value
        estimate += by_index[idx] * (r.value - _half_value(r, idx, mode))
    return EvalResult(
        value, N, abs(float(estimate)), mode, {"extensions": sum(words.values()), "mzv_indices": len(by_index)}
    )


def _half_value(r, idx, mode):
    from .series_eval import mzv_partial_sum

    if r.N < 2:
        return 0
    return mzv_partial_sum(idx, False, r.N // 2, mode)


# ----------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    accepted: int = 0
    generator: str = "numpy.PCG64"

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "accepted": self.accepted,
            "generator": self.generator,
        }


def mc_integral(p: TwoLabeledPoset, u=None, samples: int = 10**6, seed: int = 0, batches: int = 16) -> McEstimate:
    """Uniform rejection estimate of ``I(p, u)``.

    ``u`` maps elements to ``(lo, hi)`` (default ``[0, 1]`` everywhere).  The
    integrand can be heavy-tailed near the endpoints; the batch-means
    standard error is a diagnostic, not a guarantee.
    """
    if not is_admissible_poset(p):
        raise AdmissibilityError("Monte Carlo is only run on admissible posets")
    if batches < 16:
        raise ValueError("at least 16 batches are required")
    if samples < 16 * batches:
        raise ValueError(f"need at least {16 * batches} samples")
    u = dict(u or {})
    elems = p.elements
    idx = {q: i for i, q in enumerate(elems)}
    lo = np.array([float(u.get(q, (0.0, 1.0))[0]) for q in elems])
    hi = np.array([float(u.get(q, (0.0, 1.0))[1]) for q in elems])
    if np.any(lo > hi) or np.any(lo < 0) or np.any(hi > 1):
        raise ValueError("intervals must satisfy 0 <= lo <= hi <= 1")
    volume = float(np.prod(hi - lo))
    black = np.array([p.labels[q] is BLACK for q in elems])
    covers = np.array([(idx[a], idx[b]) for a, b in sorted(p.covers)], dtype=int).reshape(-1, 2)
    children = np.random.SeedSequence(seed).spawn(batches)
    sizes = [samples // batches + (1 if b < samples % batches else 0) for b in range(batches)]
    means, accepted = [], 0
    for child, size in zip(children, sizes):
        rng = np.random.Generator(np.random.PCG64(child))
        total = 0.0
        for start in range(0, size, 1 << 16):
            m = min(1 << 16, size - start)
            t = lo + (hi - lo) * rng.random((m, len(elems)))
            ok = np.all(t[:, covers[:, 0]] < t[:, covers[:, 1]], axis=1) if len(covers) else np.ones(m, bool)
            ts = t[ok]
            accepted += len(ts)
            if len(ts):
                with np.errstate(divide="ignore"):
                    dens = np.where(black, 1.0 / (1.0 - ts), 1.0 / ts)
                total += float(np.prod(dens, axis=1).sum())
        means.append(total * volume / size)
    if accepted == 0:
        raise SchurzError("Monte Carlo accepted no samples")
    means = np.array(means)
    weights = np.array(sizes, dtype=float) / samples
    mean = float(np.dot(weights, means))
    stderr = float(np.std(means, ddof=1) / math.sqrt(batches))
    return McEstimate(mean, stderr, samples, seed, accepted)


# ------------------------------------------------------------ verification


@dataclass
class VerificationReport:
    lhs: object
    rhs: object
    abs_diff: float
    tolerance: float
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.abs_diff <= self.tolerance

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            return float(v)

        return {
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "abs_diff": float(self.abs_diff),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "meta": self.meta,
        }


def _perm_sign(perm):
    inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inv % 2 else 1


def _nested_quad(f, bounds, quad_tol):
    """Iterated adaptive quadrature of ``f(t_1..t_j)`` over the box ``prod [lo_c, hi_c]``."""
    if len(bounds) > MAX_QUAD_DEPTH:
        raise CapExceeded(f"quadrature nesting capped at depth {MAX_QUAD_DEPTH}, got {len(bounds)}")
    if not bounds:
        return f(), 0.0
    errors = []

    def level(depth, prefix):
        lo, hi = bounds[depth]
        if depth == len(bounds) - 1:
            val, err = integrate.quad(lambda t: f(*prefix, t), lo, hi, epsabs=quad_tol, epsrel=0, limit=200)
        else:
            val, err = integrate.quad(
                lambda t: level(depth + 1, prefix + (t,)), lo, hi, epsabs=quad_tol, epsrel=0, limit=200
            )
        errors.append(err)
        return val

    value = level(0, ())
    return value, max(errors)


def _omega(form, t):
    return 1.0 / t if form == "o" else 1.0 / (1.0 - t)


def _lemma1_lhs_exact(u, n):
    """Case I left side: Leibniz-expand the determinant, integrate each monomial exactly."""
    j = len(n)
    total = Fraction(0)
    for perm in itertools.permutations(range(j)):
        term = Fraction(_perm_sign(perm))
        for c in range(j):
            e = n[perm[c]]  # t_c**e * dt/t_c has antiderivative t_c**e / e
            term *= (Fraction(u[c + 1]) ** e - Fraction(u[c]) ** e) / e
        total += term
    return total


def _geometric_tail(u_max, N, log_power=0):
    """``sum_{m > N} (1 + log m)**log_power * u_max**m / m``, summed until negligible."""
    if u_max >= 1:
        return math.inf
    total, m = 0.0, N + 1
    term = 1.0
    while True:
        term = (1 + math.log(m)) ** log_power * u_max**m / m
        total += term
        if term < 1e-30 or m > N + 100000:
            break
        m += 1
    # remaining geometric tail beyond the loop
    return total + term * u_max / (1 - u_max)


def verify_lemma1(case: str, u: Sequence, n: Sequence, N: int = 200, quad_tol: float = 1e-8) -> VerificationReport:
    """Check one instance of the three determinant integral identities.

    case ``"I"``: ``u_0 < .. < u_j``, ``n_1..n_j > 0``; exact rational comparison.
    case ``"II"``: ``u_j < 1``, ``0 <= n_1 < .. < n_j``; quadrature vs sum truncated at N.
    case ``"III"``: ``u_j < 1``, ``0 <= n_1 < .. < n_(j+1)``; quadrature vs finite sum.
    """
    u = list(u)
    n = [int(v) for v in n]
    if any(a >= b for a, b in zip(u, u[1:])) or u[0] < 0 or u[-1] > 1:
        raise ValueError(f"need 0 <= u_0 < ... < u_j <= 1, got {u}")
    j = len(u) - 1
    if case == "I":
        if len(n) != j or any(v <= 0 for v in n):
            raise ValueError("case I needs j positive exponents")
        u = [Fraction(v) for v in u]
        lhs = _lemma1_lhs_exact(u, n)
        rhs = Fraction(f_determinant(u, n)) / math.prod(n)
        return VerificationReport(lhs, rhs, abs(float(lhs - rhs)), 0.0, {"case": "I", "exact": lhs == rhs})
    if u[-1] >= 1:
        raise ValueError(f"case {case} needs u_j < 1")
    uf = [float(v) for v in u]
    bounds = [(uf[c], uf[c + 1]) for c in range(j)]
    if case == "II":
        if len(n) != j or n[0] < 0 or any(a >= b for a, b in zip(n, n[1:])):
            raise ValueError("case II needs 0 <= n_1 < ... < n_j")
        rows = n

        def integrand(*t):
            m = np.array([[tc**e for tc in t] for e in rows])
            return float(np.linalg.det(m)) * math.prod(_omega("b", tc) for tc in t)

        lhs, qerr = _nested_quad(integrand, bounds, quad_tol)
        ranges = [range(n[i] + 1, n[i + 1] + 1) for i in range(j - 1)] + [range(n[-1] + 1, N + 1)]
        rhs = _x_sum(uf, ranges)
        lower = math.prod(sum(1.0 / m for m in r) for r in ranges[:-1])
        tail = math.factorial(j + 1) * lower * _geometric_tail(uf[-1], max(N, n[-1]))
    elif case == "III":
        if len(n) != j + 1 or n[0] < 0 or any(a >= b for a, b in zip(n, n[1:])):
            raise ValueError("case III needs 0 <= n_1 < ... < n_(j+1)")
        rows = n

        def integrand(*t):
            m = np.array([[tc**e for tc in t] + [1.0] for e in rows])
            return float(np.linalg.det(m)) * math.prod(_omega("b", tc) for tc in t)

        lhs, qerr = _nested_quad(integrand, bounds, quad_tol)
        ranges = [range(n[i] + 1, n[i + 1] + 1) for i in range(j)]
        rhs = _x_sum(uf, ranges)
        tail = 0.0
    else:
        raise ValueError(f"case must be 'I', 'II' or 'III', got {case!r}")
    tol = 10 * quad_tol + tail
    return VerificationReport(
        lhs, rhs, abs(lhs - rhs), tol, {"case": case, "N": N, "quad_error": qerr, "tail_bound": tail}
    )


def _x_sum(u, ranges):
    """``sum over m in X`` (X given as per-variable ranges, all increasing) of F(u; m) / prod m."""
    total = 0.0
    for ms in itertools.product(*ranges):
        if any(a >= b for a, b in zip(ms, ms[1:])):
            continue
        total += f_determinant(u, ms) / math.prod(ms)
    return total


# ----------------------------------------------------------- relation checks

APPEND_CASES = ("exp", "open", "up", "down", "close")


def extend_word(s: SeqIndex, appended: str) -> SeqIndex:
    """The longer word on the left of each recursive relation."""
    if appended == "exp":
        return SeqIndex(s.exponents[:-1] + (s.exponents[-1] + 1,), s.connectors)
    conn = {"open": OPEN, "up": UP, "down": DOWN, "close": CLOSE}[appended]
    return SeqIndex(s.exponents + (1,), s.connectors + (conn,))


def _inner_params(appended, t):
    if appended in ("exp", "up"):
        return [0.0, *t]
    if appended == "open":
        return list(t)
    if appended == "down":
        return [*t, 1.0]
    return [0.0, *t, 1.0]


def relation_depth(s: SeqIndex, appended: str) -> int:
    """Number ``j`` of integration variables in the relation."""
    e = excess(s.connectors)
    return {"exp": e + 1, "up": e + 1, "down": e + 1, "open": e + 2, "close": e}[appended]


def verify_relation2(
    s, appended: str, u: Sequence, N: int = 200, quad_tol: float = 1e-8
) -> VerificationReport:
    """Compare ``zeta(extended; u_0..u_j)`` with the integral of the shorter series over ``D(u)``."""
    if isinstance(s, str):
        s = SeqIndex.parse(s)
    if appended not in APPEND_CASES:
        raise ValueError(f"appended must be one of {APPEND_CASES}")
    if not is_weakly_proper(s.connectors):
        raise ValueError("base word must be weakly proper")
    j = relation_depth(s, appended)
    if j > MAX_QUAD_DEPTH:
        raise CapExceeded(f"relation needs {j} nested integrals; cap is {MAX_QUAD_DEPTH}")
    u = [float(v) for v in u]
    if len(u) != j + 1:
        raise ValueError(f"need {j + 1} u-parameters, got {len(u)}")
    longer = extend_word(s, appended)
    lhs_res = eval_schur_series_generalized(longer, u, N)
    form = "o" if appended == "exp" else "b"

    def integrand(*t):
        inner = eval_schur_series_generalized(s, _inner_params(appended, t), N).value
        return inner * math.prod(_omega(form, tc) for tc in t)

    bounds = [(u[c], u[c + 1]) for c in range(j)]
    rhs, qerr = _nested_quad(integrand, bounds, quad_tol)
    if form == "o":
        tail, tail_kind = 0.0, "exact"  # termwise polynomial integrals: same truncation on both sides
    elif u[-1] < 1:
        cells = sum(len(c) for c in build_support(s.connectors))
        harmonic = sum(1.0 / m for m in range(1, N + 1))
        tail = math.factorial(j + 1) * harmonic**cells * _geometric_tail(u[-1], N, j - 1)
        tail_kind = "geometric"
    else:
        tail, tail_kind = lhs_res.error_estimate, "heuristic"
    tol = 10 * quad_tol + tail
    return VerificationReport(
        lhs_res.value,
        rhs,
        abs(lhs_res.value - rhs),
        tol,
        {
            "relation": appended,
            "base": format_sequence(s),
            "extended": format_sequence(longer),
            "u": u,
            "N": N,
            "quad_error": qerr,
            "tail_bound": tail,
            "tail_kind": tail_kind,
        },
    )


def base_case_identity(u0: float, u1: float, N: int = 2000) -> VerificationReport:
    """``zeta(1; u0, u1) = log((1 - u0) / (1 - u1))`` for ``u1 < 1``."""
    lhs = eval_schur_series_generalized(SeqIndex((1,)), [u0, u1], N).value
    rhs = math.log((1 - u0) / (1 - u1))
    tail = 2 * _geometric_tail(u1, N)
    return VerificationReport(lhs, rhs, abs(lhs - rhs), tail + 1e-14, {"N": N, "tail_bound": tail})
