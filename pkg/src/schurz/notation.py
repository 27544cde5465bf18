"""Sequence indices ``k1 r1 k2 ... rs k(s+1)`` and their connector calculus.

Connectors are written in ASCII as ``u`` (up), ``d`` (down), ``(`` (open) and
``)`` (close).  Dots of a labeled word are written ``b`` (filled, dt/(1-t))
and ``o`` (hollow, dt/t).

>>> s = parse_sequence("2u4(2)3(2)1")
>>> s.exponents
(2, 4, 2, 3, 2, 1)
>>> format_sequence(s)
'2u4(2)3(2)1'
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AdmissibilityError, NotProperError, ParseError


class Connector(enum.Enum):
    UP = "u"
    DOWN = "d"
    OPEN = "("
    CLOSE = ")"

    @property
    def excess(self) -> int:
        return _EXCESS[self]

    @property
    def symbol(self) -> str:
        return _UNICODE[self]

    def __repr__(self):
        return f"Connector.{self.name}"


_EXCESS = {Connector.UP: 0, Connector.DOWN: 0, Connector.OPEN: 1, Connector.CLOSE: -1}
_UNICODE = {Connector.UP: "↑", Connector.DOWN: "↓", Connector.OPEN: "⟨", Connector.CLOSE: "⟩"}
_FROM_CHAR = {c.value: c for c in Connector}
_FROM_CHAR.update({v: k for k, v in _UNICODE.items()})

UP, DOWN, OPEN, CLOSE = Connector.UP, Connector.DOWN, Connector.OPEN, Connector.CLOSE


class Dot(enum.Enum):
    BLACK = "b"  # omega = dt/(1-t)
    WHITE = "o"  # omega = dt/t

    @property
    def symbol(self) -> str:
        return "•" if self is Dot.BLACK else "∘"

    def flipped(self) -> "Dot":
        return Dot.WHITE if self is Dot.BLACK else Dot.BLACK

    def __repr__(self):
        return f"Dot.{self.name}"


BLACK, WHITE = Dot.BLACK, Dot.WHITE
_DOT_FROM_CHAR = {"b": BLACK, "o": WHITE, "•": BLACK, "∘": WHITE}


def _as_connectors(connectors) -> tuple:
    if isinstance(connectors, str):
        try:
            return tuple(_FROM_CHAR[c] for c in connectors)
        except KeyError as exc:
            raise ParseError(f"unknown connector {exc.args[0]!r}") from None
    return tuple(connectors)


@dataclass(frozen=True)
class SeqIndex:
    """Exponents ``k1..k(s+1)`` interleaved with connectors ``r1..rs``.

    Properness is not checked here so that words can be built up piecewise;
    use :func:`is_proper` / :func:`in_H` where required.
    """

    exponents: tuple
    connectors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(k) for k in self.exponents))
        object.__setattr__(self, "connectors", _as_connectors(self.connectors))
        if len(self.exponents) != len(self.connectors) + 1:
            raise ValueError(
                f"need exactly one more exponent than connectors, got "
                f"{len(self.exponents)} and {len(self.connectors)}"
            )
        if any(k < 1 for k in self.exponents):
            raise ValueError(f"exponents must be positive integers: {self.exponents}")

    @classmethod
    def parse(cls, text: str) -> "SeqIndex":
        return parse_sequence(text)

    @property
    def depth(self) -> int:
        """Number of connectors ``s``."""
        return len(self.connectors)

    @property
    def weight(self) -> int:
        """Sum of the exponents, i.e. the number of dots of ``theta(self)``."""
        return sum(self.exponents)

    @property
    def column_sizes(self) -> tuple:
        return column_sizes(self.connectors)

    @property
    def total_weight(self) -> int:
        """Sum of exponents over all cells of the diagram (the SMZV weight)."""
        return sum(k * h for k, h in zip(self.exponents, self.column_sizes))

    def __str__(self):
        return format_sequence(self)

    def pretty(self) -> str:
        out = [str(self.exponents[0])]
        for r, k in zip(self.connectors, self.exponents[1:]):
            out.append(r.symbol)
            out.append(str(k))
        return "".join(out)


@dataclass(frozen=True)
class LabeledSeq:
    """Dots ``d1..d(s+1)`` interleaved with connectors ``r1..rs``."""

    dots: tuple
    connectors: tuple = ()

    def __post_init__(self):
        dots = self.dots
        if isinstance(dots, str):
            try:
                dots = [_DOT_FROM_CHAR[c] for c in dots]
            except KeyError as exc:
                raise ParseError(f"unknown dot {exc.args[0]!r}") from None
        object.__setattr__(self, "dots", tuple(dots))
        object.__setattr__(self, "connectors", _as_connectors(self.connectors))
        if len(self.dots) != len(self.connectors) + 1:
            raise ValueError(
                f"need exactly one more dot than connectors, got "
                f"{len(self.dots)} and {len(self.connectors)}"
            )

    @classmethod
    def parse(cls, text: str) -> "LabeledSeq":
        return parse_labeled(text)

    def __str__(self):
        return format_labeled(self)

    def __len__(self):
        return len(self.dots)

    def pretty(self) -> str:
        out = [self.dots[0].symbol]
        for r, d in zip(self.connectors, self.dots[1:]):
            out.append(r.symbol)
            out.append(d.symbol)
        return "".join(out)


# ---------------------------------------------------------------- text syntax


def parse_sequence(text: str) -> SeqIndex:
    """Parse ``seq := number (connector number)*`` with greedy numerals.

    Unicode arrows ``↑↓⟨⟩`` are accepted as synonyms of ``u d ( )``.
    """
    if not isinstance(text, str):
        raise TypeError("expected str")
    exponents, connectors = [], []
    pos, n = 0, len(text)
    expect_number = True
    while True:
        if expect_number:
            start = pos
            while pos < n and text[pos].isascii() and text[pos].isdigit():
                pos += 1
            if start == pos:
                what = repr(text[pos]) if pos < n else "end of input"
                raise ParseError(f"expected exponent, found {what}", _byte_offset(text, pos))
            k = int(text[start:pos])
            if k == 0:
                raise ParseError("exponent must be positive", _byte_offset(text, start))
            exponents.append(k)
            if pos == n:
                break
        else:
            c = text[pos]
            if c not in _FROM_CHAR:
                raise ParseError(f"expected connector, found {c!r}", _byte_offset(text, pos))
            connectors.append(_FROM_CHAR[c])
            pos += 1
        expect_number = not expect_number
    return SeqIndex(tuple(exponents), tuple(connectors))


def format_sequence(s: SeqIndex) -> str:
    out = [str(s.exponents[0])]
    for r, k in zip(s.connectors, s.exponents[1:]):
        out.append(r.value)
        out.append(str(k))
    return "".join(out)


def parse_labeled(text: str) -> LabeledSeq:
    """Parse a labeled word such as ``b(buo)b`` (or ``•⟨•↑∘⟩•``)."""
    dots, connectors = [], []
    for pos, c in enumerate(text):
        want_dot = len(dots) == len(connectors)
        if want_dot:
            if c not in _DOT_FROM_CHAR:
                raise ParseError(f"expected dot, found {c!r}", _byte_offset(text, pos))
            dots.append(_DOT_FROM_CHAR[c])
        else:
            if c not in _FROM_CHAR:
                raise ParseError(f"expected connector, found {c!r}", _byte_offset(text, pos))
            connectors.append(_FROM_CHAR[c])
    if len(dots) != len(connectors) + 1:
        raise ParseError("labeled word must end with a dot", _byte_offset(text, len(text)))
    return LabeledSeq(tuple(dots), tuple(connectors))


def format_labeled(w: LabeledSeq) -> str:
    out = [w.dots[0].value]
    for r, d in zip(w.connectors, w.dots[1:]):
        out.append(r.value)
        out.append(d.value)
    return "".join(out)


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


# ---------------------------------------------------------- connector calculus


def excess(connectors: Sequence[Connector]) -> int:
    return sum(r.excess for r in _as_connectors(connectors))


def prefix_excesses(connectors) -> list:
    """``[E(r1..rj) for j = 0..s]``."""
    out, e = [0], 0
    for r in _as_connectors(connectors):
        e += r.excess
        out.append(e)
    return out


def is_weakly_proper(connectors) -> bool:
    return min(prefix_excesses(connectors)) >= 0


def is_proper(connectors) -> bool:
    pe = prefix_excesses(connectors)
    return min(pe) >= 0 and pe[-1] == 0


def column_sizes(connectors) -> tuple:
    """Sizes ``|Y_x|`` of the support columns implied by the excess law."""
    return tuple(1 + e for e in prefix_excesses(connectors))


def _constrained_positions(connectors, last_counts=True) -> list:
    """0-based positions i whose exponent must exceed 1."""
    s = len(connectors)
    out = []
    for i in range(s + 1):
        starts = i == 0 or connectors[i - 1] in (UP, OPEN)
        ends = (i == s and last_counts) or (i < s and connectors[i] in (DOWN, CLOSE))
        if starts and ends:
            out.append(i)
    return out


def corner_positions(s: SeqIndex) -> list:
    """0-based positions of the exponents sitting on corner cells."""
    return _constrained_positions(s.connectors)


def is_admissible(s: SeqIndex) -> bool:
    if not is_proper(s.connectors):
        raise NotProperError(f"connectors of {format_sequence(s)} are not proper")
    return all(s.exponents[i] > 1 for i in corner_positions(s))


def in_H(s: SeqIndex) -> bool:
    return is_proper(s.connectors) and is_admissible(s)


def check_t_parameters(s: SeqIndex, t: Sequence) -> None:
    if not is_weakly_proper(s.connectors):
        raise NotProperError(f"connectors of {format_sequence(s)} are not weakly proper")
    need = excess(s.connectors) + 2
    if len(t) != need:
        raise ValueError(f"expected {need} t-parameters, got {len(t)}")
    if not (0 <= t[0] and t[-1] <= 1):
        raise ValueError(f"t-parameters must lie in [0, 1]: {list(t)}")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise ValueError(f"t-parameters must be strictly increasing: {list(t)}")


def is_admissible_generalized(s: SeqIndex, t: Sequence) -> bool:
    """Admissibility of ``(s; t1..tj)``; the last-position constraint applies only if ``tj == 1`` exactly."""
    check_t_parameters(s, t)
    positions = _constrained_positions(s.connectors, last_counts=(t[-1] == 1))
    return all(s.exponents[i] > 1 for i in positions)


def require_admissible(s: SeqIndex) -> None:
    if not in_H(s):
        if not is_proper(s.connectors):
            raise NotProperError(f"{format_sequence(s)}: connectors are not proper")
        bad = [i + 1 for i in corner_positions(s) if s.exponents[i] == 1]
        raise AdmissibilityError(
            f"{format_sequence(s)} is not admissible: exponent 1 at corner position(s) {bad}"
        )


# ------------------------------------------------------------------ enumeration


def proper_words(max_len: int, weakly: bool = False) -> Iterator[tuple]:
    """All (weakly) proper connector words of length <= ``max_len``, shortest first."""

    def extend(prefix, e, length):
        if len(prefix) == length:
            if weakly or e == 0:
                yield tuple(prefix)
            return
        remaining = length - len(prefix)
        for r in Connector:
            e2 = e + r.excess
            if e2 < 0 or (not weakly and e2 > remaining - 1):
                continue
            prefix.append(r)
            yield from extend(prefix, e2, length)
            prefix.pop()

    for length in range(max_len + 1):
        yield from extend([], 0, length)


def _compositions(total_max, sizes, lower):
    """Exponent vectors with ``k_i >= lower[i]`` and ``sum k_i * sizes[i] <= total_max``."""
    n = len(sizes)
    base = sum(l * h for l, h in zip(lower, sizes))
    if base > total_max:
        return

    def rec(i, budget, acc):
        if i == n:
            yield tuple(acc)
            return
        k = lower[i]
        while True:
            cost = (k - lower[i]) * sizes[i]
            if cost > budget:
                break
            acc.append(k)
            yield from rec(i + 1, budget - cost, acc)
            acc.pop()
            k += 1

    yield from rec(0, total_max - base, [])


def enumerate_H(weight_max: int, cells: bool = False) -> Iterator[SeqIndex]:
    """Every index of H with ``weight <= weight_max``.

    ``weight`` is the exponent sum by default; with ``cells=True`` it is the
    cell weight ``sum k_x |Y_x|`` instead.  Output order: by connector word
    (shortest first), then exponents lexicographically.
    """
    for word in proper_words(max(weight_max - 1, 0)):
        sizes = column_sizes(word) if cells else (1,) * (len(word) + 1)
        corners = set(_constrained_positions(word))
        lower = [2 if i in corners else 1 for i in range(len(word) + 1)]
        for ks in _compositions(weight_max, sizes, lower):
            yield SeqIndex(ks, word)
