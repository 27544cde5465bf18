"""Labeled words, the block map theta, the involutions and the duality relations they induce."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import CapExceeded, MembershipError
from .notation import (
    BLACK,
    CLOSE,
    DOWN,
    OPEN,
    UP,
    WHITE,
    LabeledSeq,
    SeqIndex,
    enumerate_H,
    format_labeled,
    format_sequence,
    in_H,
    is_proper,
)

DEFAULT_WEIGHT_CAP = 12

# Patterns that put a wrongly labeled element at the top or bottom of P(w).
FORBIDDEN_HEAD = frozenset({(BLACK, DOWN), (WHITE, UP)})
FORBIDDEN_TAIL = frozenset({(UP, BLACK), (DOWN, WHITE)})
FORBIDDEN_TRIPLES = frozenset(
    {
        (UP, BLACK, DOWN),
        (UP, BLACK, CLOSE),
        (OPEN, BLACK, DOWN),
        (OPEN, BLACK, CLOSE),
        (DOWN, WHITE, UP),
        (DOWN, WHITE, CLOSE),
        (OPEN, WHITE, UP),
        (OPEN, WHITE, CLOSE),
    }
)

_REVERSE = {UP: DOWN, DOWN: UP, OPEN: CLOSE, CLOSE: OPEN}  # r''
_FLIP = {UP: DOWN, DOWN: UP, OPEN: OPEN, CLOSE: CLOSE}  # r'
_TILDE = {UP: UP, DOWN: DOWN, OPEN: CLOSE, CLOSE: OPEN}


def _word(w) -> LabeledSeq:
    return LabeledSeq.parse(w) if isinstance(w, str) else w


def _seq(s) -> SeqIndex:
    return SeqIndex.parse(s) if isinstance(s, str) else s


@dataclass(frozen=True)
class GMembership:
    word: LabeledSeq
    is_member: bool
    violated_rule: Optional[str] = None

    def __bool__(self):
        return self.is_member


def g_membership(w) -> GMembership:
    """Membership in G, reporting the first violated rule and its (1-based) position."""
    w = _word(w)
    d, r = w.dots, w.connectors
    s = len(r)
    if s == 0:
        return GMembership(w, False, "a single dot is both maximal and minimal")
    if not is_proper(r):
        return GMembership(w, False, "connector word is not proper")
    if (d[0], r[0]) in FORBIDDEN_HEAD:
        return GMembership(w, False, f"d1 r1 = {d[0].symbol}{r[0].symbol} is forbidden")
    for i in range(s - 1):
        triple = (r[i], d[i + 1], r[i + 1])
        if triple in FORBIDDEN_TRIPLES:
            shown = "".join(x.symbol for x in triple)
            return GMembership(w, False, f"r{i + 1} d{i + 2} r{i + 2} = {shown} is forbidden")
    if (r[-1], d[-1]) in FORBIDDEN_TAIL:
        return GMembership(w, False, f"r{s} d{s + 1} = {r[-1].symbol}{d[-1].symbol} is forbidden")
    return GMembership(w, True)


def in_G(w) -> bool:
    return g_membership(w).is_member


def enumerate_G(max_dots: int):
    """Every word in G with at most ``max_dots`` dots, by length then in generation order."""
    dots, conns = (BLACK, WHITE), (UP, DOWN, OPEN, CLOSE)

    def grow(d, r, e, length):
        if len(d) == length:
            if e == 0 and (r[-1], d[-1]) not in FORBIDDEN_TAIL:
                yield LabeledSeq(tuple(d), tuple(r))
            return
        for c in conns:
            e2 = e + c.excess
            if e2 < 0 or e2 > length - len(d) - 1:
                continue
            if len(d) == 1 and (d[0], c) in FORBIDDEN_HEAD:
                continue
            if r and (r[-1], d[-1], c) in FORBIDDEN_TRIPLES:
                continue
            for nd in dots:
                yield from grow(d + [nd], r + [c], e2, length)

    for length in range(2, max_dots + 1):
        for first in dots:
            yield from grow([first], [], 0, length)


def _require_G(w):
    m = g_membership(w)
    if not m:
        raise MembershipError(f"{format_labeled(m.word)} is not in G: {m.violated_rule}")
    return m.word


# ------------------------------------------------------------------ theta


def theta(s) -> LabeledSeq:
    """Replace each exponent k by the block ``b (u o)^(k-1)``."""
    s = _seq(s)
    if not in_H(s):
        raise MembershipError(f"{format_sequence(s)} is not in H")
    dots, conns = [], []
    for i, k in enumerate(s.exponents):
        dots.append(BLACK)
        for _ in range(k - 1):
            conns.append(UP)
            dots.append(WHITE)
        if i < len(s.connectors):
            conns.append(s.connectors[i])
    return LabeledSeq(tuple(dots), tuple(conns))


def theta_image_violation(w) -> Optional[str]:
    """``None`` if w lies in theta(H); otherwise the first failing condition."""
    w = _word(w)
    m = g_membership(w)
    if not m:
        return m.violated_rule
    for i, d in enumerate(w.dots):
        if d is WHITE and (i == 0 or w.connectors[i - 1] is not UP):
            return f"d{i + 1} is hollow but is not preceded by an up-connector"
    return None


def in_theta_image(w) -> bool:
    return theta_image_violation(w) is None


def theta_inverse(w) -> SeqIndex:
    w = _word(w)
    why = theta_image_violation(w)
    if why is not None:
        raise MembershipError(f"{format_labeled(w)} is not in theta(H): {why}")
    exps, conns = [1], []
    for r, d in zip(w.connectors, w.dots[1:]):
        if d is WHITE:
            exps[-1] += 1
        else:
            conns.append(r)
            exps.append(1)
    return SeqIndex(tuple(exps), tuple(conns))


# -------------------------------------------------------------- involutions


def tau_ud(w) -> LabeledSeq:
    w = _require_G(_word(w))
    return LabeledSeq(tuple(d.flipped() for d in w.dots), tuple(_FLIP[r] for r in w.connectors))


def tau_lr(w) -> LabeledSeq:
    w = _require_G(_word(w))
    return LabeledSeq(tuple(reversed(w.dots)), tuple(_REVERSE[r] for r in reversed(w.connectors)))


def tau(w) -> LabeledSeq:
    return tau_ud(tau_lr(w))


# -------------------------------------------------------------- T and T'


def in_T(s) -> bool:
    """Indices whose theta-image is also a tau_lr-image of theta(H).

    Membership test: every exponent other than 1 equals 2, is not the
    last one, and is followed by a down-connector.
    """
    s = _seq(s)
    if not in_H(s):
        raise MembershipError(f"{format_sequence(s)} is not in H")
    last = len(s.exponents) - 1
    for i, k in enumerate(s.exponents):
        if k != 1 and (i == last or k != 2 or s.connectors[i] is not DOWN):
            return False
    return True


def in_Tprime(s) -> bool:
    s = _seq(s)
    if not in_H(s):
        raise MembershipError(f"{format_sequence(s)} is not in H")
    if s.exponents[-1] < 2:
        return False
    return all(r is UP or k >= 2 for k, r in zip(s.exponents, s.connectors))


def dual_lr(s) -> SeqIndex:
    s = _seq(s)
    if not in_T(s):
        raise MembershipError(f"{format_sequence(s)} is not in T")
    return theta_inverse(tau_lr(theta(s)))


def _segments(s: SeqIndex):
    """Split ``(1u)^(a-1) (b+1) r ...`` into ``[(a, b), ...]`` and the joining connectors."""
    segs, joins, ones = [], [], 0
    for i, k in enumerate(s.exponents):
        if k == 1:
            if i == len(s.connectors) or s.connectors[i] is not UP:
                raise MembershipError(f"{format_sequence(s)} is not in T'")
            ones += 1
            continue
        segs.append((ones + 1, k - 1))
        ones = 0
        if i < len(s.connectors):
            joins.append(s.connectors[i])
    return segs, joins


def dual_tau_closed_form(s) -> SeqIndex:
    """The tau-dual written out on the ``(a_i, b_i)`` segment decomposition."""
    s = _seq(s)
    segs, joins = _segments(s)
    exps, conns = [], []
    for n, (a, b) in enumerate(reversed(segs)):
        if n:
            conns.append(_TILDE[joins[len(segs) - 1 - n]])
        exps.extend([1] * (b - 1))
        conns.extend([UP] * (b - 1))
        exps.append(a + 1)
    return SeqIndex(tuple(exps), tuple(conns))


def dual_tau(s, check: bool = True) -> SeqIndex:
    s = _seq(s)
    if not in_Tprime(s):
        raise MembershipError(f"{format_sequence(s)} is not in T'")
    out = theta_inverse(tau(theta(s)))
    if check:
        other = dual_tau_closed_form(s)
        if other != out:
            raise AssertionError(
                f"tau-dual mismatch for {format_sequence(s)}: {format_sequence(out)} vs {format_sequence(other)}"
            )
    return out


# ------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class Relation:
    lhs: SeqIndex
    rhs: SeqIndex
    self_dual: bool
    verified: Optional[dict] = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {"lhs": format_sequence(self.lhs), "rhs": format_sequence(self.rhs), "self_dual": self.self_dual}
        if self.verified is not None:
            out["verified"] = self.verified
        return out


DUAL = {"lr": (in_T, dual_lr), "tau": (in_Tprime, dual_tau)}


def enumerate_relations(weight_max: int, kind: str = "lr", cap: int = DEFAULT_WEIGHT_CAP) -> list:
    """Every duality pair with exponent sum <= ``weight_max``, each unordered pair once."""
    if kind not in DUAL:
        raise ValueError(f"kind must be 'lr' or 'tau', got {kind!r}")
    if weight_max > cap:
        raise CapExceeded(f"weight_max {weight_max} exceeds cap {cap}")
    member, dual = DUAL[kind]
    seen, out = set(), []
    for s in enumerate_H(weight_max):
        if not member(s):
            continue
        d = dual(s)
        a, b = sorted([format_sequence(s), format_sequence(d)])
        if (a, b) in seen:
            continue
        seen.add((a, b))
        out.append(Relation(SeqIndex.parse(a), SeqIndex.parse(b), a == b))
    out.sort(key=lambda rel: (rel.lhs.weight, format_sequence(rel.lhs), format_sequence(rel.rhs)))
    return out


def verify_relation(rel: Relation, N: int = 10**4) -> Relation:
    """Attach truncated evaluations of both sides to a relation."""
    from .series_eval import eval_schur_series

    a = eval_schur_series(rel.lhs, N)
    b = eval_schur_series(rel.rhs, N)
    diff = abs(a.value - b.value)
    info = {
        "N": N,
        "abs_diff": diff,
        "tolerance": a.error_estimate + b.error_estimate,
        "pass": diff <= a.error_estimate + b.error_estimate + 1e-12,
    }
    return Relation(rel.lhs, rel.rhs, rel.self_dual, info)
