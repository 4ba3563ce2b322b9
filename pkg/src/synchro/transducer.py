"""Synchronous transducers over the alphabet {0, ..., n-1}.

A :class:`Transducer` stores its transition and output functions as two
``(states, n)`` integer tables: ``delta[q, x]`` is the state reached from
state ``q`` on letter ``x`` and ``out[q, x]`` is the letter emitted.  States
are addressed by index internally; the public functions take and return the
human-readable labels.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DuplicateState,
    DuplicateTransition,
    LetterOutOfRange,
    MachineError,
    MissingTransition,
    NotInvertible,
    TdxSyntaxError,
    UnknownState,
)

Word = tuple[int, ...]

_INVERSE_SUFFIX = "^-1"


def _check_label(label: str) -> None:
    if not isinstance(label, str) or not label:
        raise MachineError(f"state label must be a non-empty string, got {label!r}")
    if re.search(r"\s", label) or label.startswith("#"):
        raise MachineError(f"state label {label!r} contains whitespace or starts with '#'")


def _frozen(table) -> np.ndarray:
    arr = np.array(table, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Transducer:
    n: int
    states: tuple[str, ...]
    delta: np.ndarray
    out: np.ndarray

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        if self.n < 1:
            raise MachineError(f"alphabet size must be positive, got {self.n}")
        if not states:
            raise MachineError("a transducer needs at least one state")
        for label in states:
            _check_label(label)
        if len(set(states)) != len(states):
            seen = set()
            dup = next(s for s in states if s in seen or seen.add(s))
            raise DuplicateState(f"state {dup!r} declared twice")
        delta, out = _frozen(self.delta), _frozen(self.out)
        shape = (len(states), self.n)
        if delta.shape != shape or out.shape != shape:
            raise MachineError(f"tables must have shape {shape}")
        if delta.min() < 0 or delta.max() >= len(states):
            raise UnknownState("transition table refers to a missing state")
        if out.min() < 0 or out.max() >= self.n:
            raise LetterOutOfRange("output letter outside the alphabet")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "out", out)

    @classmethod
    def from_edges(cls, n: int, states: Sequence[str],
                   edges: Iterable[tuple[str, int, int, str]]) -> Transducer:
        """Build a machine from ``(state, in, out, next)`` quadruples."""
        states = tuple(states)
        index = {s: i for i, s in enumerate(states)}
        if len(index) != len(states):
            raise DuplicateState("duplicate state label")
        delta = np.full((len(states), n), -1, dtype=np.int64)
        out = np.full((len(states), n), -1, dtype=np.int64)
        for src, x, y, dst in edges:
            for label in (src, dst):
                if label not in index:
                    raise UnknownState(f"unknown state {label!r}")
            for letter in (x, y):
                if not 0 <= letter < n:
                    raise LetterOutOfRange(f"letter {letter} not in 0..{n - 1}")
            q = index[src]
            if delta[q, x] >= 0:
                raise DuplicateTransition(f"state {src!r} has two rows for letter {x}")
            delta[q, x] = index[dst]
            out[q, x] = y
        missing = np.argwhere(delta < 0)
        if len(missing):
            q, x = missing[0]
            raise MissingTransition(f"state {states[q]!r} has no row for letter {x}")
        return cls(n, states, delta, out)

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    @property
    def size(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise UnknownState(f"unknown state {label!r}") from None

    def edges(self):
        for q, label in enumerate(self.states):
            for x in range(self.n):
                yield label, x, int(self.out[q, x]), self.states[self.delta[q, x]]

    def same_tables(self, other: Transducer) -> bool:
        """Equality up to relabeling of states, keeping the state order."""
        return (self.n == other.n and self.delta.shape == other.delta.shape
                and np.array_equal(self.delta, other.delta)
                and np.array_equal(self.out, other.out))

    def relabel(self, labels: Sequence[str]) -> Transducer:
        return Transducer(self.n, tuple(labels), self.delta, self.out)

    def restrict(self, keep: Sequence[int]) -> Transducer:
        """Sub-machine on the state indices ``keep``, which must be closed."""
        keep = np.asarray(keep, dtype=np.int64)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[keep] = np.arange(len(keep))
        delta = pos[self.delta[keep]]
        assert (delta >= 0).all(), "restriction to a set not closed under transitions"
        return Transducer(self.n, tuple(self.states[i] for i in keep), delta, self.out[keep])

    def __eq__(self, other):
        if not isinstance(other, Transducer):
            return NotImplemented
        return self.states == other.states and self.same_tables(other)

    def __hash__(self):
        return hash((self.n, self.states, self.delta.tobytes(), self.out.tobytes()))

    def __repr__(self):
        return f"Transducer(n={self.n}, states={list(self.states)})"


def identity(n: int, label: str = "e") -> Transducer:
    """One state, every letter loops and is copied to the output."""
    row = np.arange(n)
    return Transducer(n, (label,), np.zeros((1, n), dtype=np.int64), row[None, :])


def check_word(T: Transducer, word: Iterable[int]) -> Word:
    word = tuple(int(x) for x in word)
    for x in word:
        if not 0 <= x < T.n:
            raise LetterOutOfRange(f"letter {x} not in 0..{T.n - 1}")
    return word


def run(T: Transducer, q: int, word: Sequence[int]) -> tuple[int, Word]:
    """Index-level :func:`read_word` without argument checking."""
    output = []
    for x in word:
        output.append(int(T.out[q, x]))
        q = int(T.delta[q, x])
    return q, tuple(output)


def read_word(T: Transducer, q: str, word: Iterable[int]) -> tuple[str, Word]:
    """Read ``word`` from state ``q``; return the final state and the output.

    The empty word leaves the state unchanged and produces the empty output.
    """
    final, output = run(T, T.state_index(q), check_word(T, word))
    return T.states[final], output


def is_invertible(T: Transducer) -> bool:
    ordered = np.sort(T.out, axis=1)
    return bool((ordered == np.arange(T.n)).all())


def inverse_label(label: str) -> str:
    if label.endswith(_INVERSE_SUFFIX):
        return label[: -len(_INVERSE_SUFFIX)]
    return label + _INVERSE_SUFFIX


def invert(T: Transducer) -> Transducer:
    """Automaton-theoretic inverse: every edge ``q -y|x-> p`` becomes ``q' -x|y-> p'``.

    State ``q`` of ``T`` corresponds to state ``q^-1`` of the result, and
    inverting twice gives back the original labels.
    """
    if not is_invertible(T):
        raise NotInvertible("some state does not permute the alphabet")
    rows = np.arange(T.size)[:, None]
    delta = np.empty_like(T.delta)
    out = np.empty_like(T.out)
    delta[rows, T.out] = T.delta
    out[rows, T.out] = np.arange(T.n)[None, :]
    return Transducer(T.n, tuple(inverse_label(s) for s in T.states), delta, out)


def dual(T: Transducer) -> Transducer:
    """Swap the roles of states and letters.

    The result has one state per letter of ``T`` (labelled ``"0"``, ``"1"``, ...)
    and reads the state indices of ``T`` as its alphabet: from state ``x`` on
    letter ``q`` it moves to ``out[q, x]`` and emits ``delta[q, x]``.
    """
    return Transducer(T.size, tuple(str(x) for x in range(T.n)), T.out.T, T.delta.T)


# ---------------------------------------------------------------------------
# .tdx text format

def parse(text: str) -> Transducer:
    """Parse ``.tdx`` text.

    Line 1 is ``alphabet <n>``, line 2 is ``states <label> ...``, every further
    line is ``<state> <in> <out> <next>``.  ``#`` starts a comment.
    """
    n = None
    states: tuple[str, ...] | None = None
    index: dict[str, int] = {}
    delta = out = None
    seen_at: dict[tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if n is None:
            if len(fields) != 2 or fields[0] != "alphabet":
                raise TdxSyntaxError("expected 'alphabet <n>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise TdxSyntaxError(f"alphabet size {fields[1]!r} is not an integer", lineno) from None
            if n < 1:
                raise TdxSyntaxError("alphabet size must be positive", lineno)
            continue
        if states is None:
            if fields[0] != "states" or len(fields) < 2:
                raise TdxSyntaxError("expected 'states <label> ...'", lineno)
            states = tuple(fields[1:])
            states_line = lineno
            for i, label in enumerate(states):
                if label in index:
                    raise DuplicateState(f"state {label!r} declared twice", lineno)
                index[label] = i
            delta = np.full((len(states), n), -1, dtype=np.int64)
            out = np.full((len(states), n), -1, dtype=np.int64)
            continue
        if len(fields) != 4:
            raise TdxSyntaxError("expected '<state> <in> <out> <next>'", lineno)
        src, x, y, dst = fields
        for label in (src, dst):
            if label not in index:
                raise UnknownState(f"unknown state {label!r}", lineno)
        try:
            x, y = int(x), int(y)
        except ValueError:
            raise TdxSyntaxError("letters must be integers", lineno) from None
        for letter in (x, y):
            if not 0 <= letter < n:
                raise LetterOutOfRange(f"letter {letter} not in 0..{n - 1}", lineno)
        q = index[src]
        if (q, x) in seen_at:
            raise DuplicateTransition(
                f"row for ({src}, {x}) already given on line {seen_at[q, x]}", lineno)
        seen_at[q, x] = lineno
        delta[q, x] = index[dst]
        out[q, x] = y

    if n is None:
        raise TdxSyntaxError("empty machine description")
    if states is None:
        raise TdxSyntaxError("missing 'states' line")
    missing = np.argwhere(delta < 0)
    if len(missing):
        q, x = missing[0]
        # point at the last row of that state, or the states line if it has none
        rows = [ln for (p, _), ln in seen_at.items() if p == q]
        line = max(rows) if rows else states_line
        raise MissingTransition(f"state {states[q]!r} has no row for letter {x}", line)
    return Transducer(n, states, delta, out)


def serialize(T: Transducer) -> str:
    lines = [f"alphabet {T.n}", "states " + " ".join(T.states)]
    lines.extend(f"{src} {x} {y} {dst}" for src, x, y, dst in T.edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------

def _primitive_length(cycle: Word) -> int:
    p = len(cycle)
    for d in range(1, p + 1):
        if p % d == 0 and cycle == cycle[d:] + cycle[:d]:
            return d
    return p


@dataclass(frozen=True, eq=False)
class PeriodicWord:
    """A bi-infinite periodic sequence given by one period.

    ``cycle[i]`` is the letter at every position congruent to ``i`` modulo the
    period.  Equality ignores the phase and the chosen period, so ``(0, 1)``,
    ``(1, 0)`` and ``(0, 1, 0, 1)`` are all equal; use :meth:`aligned_with`
    for position-by-position comparison.
    """

    cycle: Word

    def __post_init__(self):
        cycle = tuple(int(x) for x in self.cycle)
        if not cycle:
            raise ValueError("a periodic word needs a non-empty cycle")
        if min(cycle) < 0:
            raise LetterOutOfRange("letters must be non-negative")
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def from_string(cls, text: str) -> PeriodicWord:
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(int(p) for p in parts))

    @property
    def period(self) -> int:
        return len(self.cycle)

    def at(self, i: int) -> int:
        return self.cycle[i % len(self.cycle)]

    def rotate(self, r: int = 1) -> PeriodicWord:
        """Shift left by ``r``: position ``i`` of the result holds position ``i + r``."""
        r %= len(self.cycle)
        return PeriodicWord(self.cycle[r:] + self.cycle[:r])

    def primitive(self) -> PeriodicWord:
        """Same sequence and phase, shortest period."""
        return PeriodicWord(self.cycle[: _primitive_length(self.cycle)])

    def canonical(self) -> Word:
        root = self.cycle[: _primitive_length(self.cycle)]
        return min(root[r:] + root[:r] for r in range(len(root)))

    def aligned_with(self, other: PeriodicWord) -> bool:
        """True iff both describe the same sequence with the same origin."""
        p = np.lcm(self.period, other.period)
        return all(self.at(i) == other.at(i) for i in range(p))

    def __eq__(self, other):
        if not isinstance(other, PeriodicWord):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __str__(self):
        sep = "" if max(self.cycle) < 10 else ","
        return sep.join(map(str, self.cycle))
