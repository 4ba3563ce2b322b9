"""Products, powers, minimization and the ``min Core`` normal form."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatch, CapExceeded, NotInvertible, NotSynchronizing
from .sync import core_indices, forced_states, sync_level, words
from .transducer import PeriodicWord, Transducer, Word, identity, invert, is_invertible

DEFAULT_MAX_STATES = 2 ** 22


def max_states() -> int:
    """Cap on the number of states :func:`power` may build (``SYNCHRO_MAX_STATES``)."""
    value = os.environ.get("SYNCHRO_MAX_STATES")
    return int(value) if value else DEFAULT_MAX_STATES


def _pair_labels(left, right) -> tuple[str, ...]:
    labels = tuple(f"{p}.{q}" for p in left for q in right)
    if len(set(labels)) != len(labels):
        labels = tuple(f"({p},{q})" for p in left for q in right)
    return labels


def product(A: Transducer, B: Transducer) -> Transducer:
    """``A * B``: ``A`` reads the input, ``B`` reads ``A``'s output.

    State ``(p, q)`` has index ``p * |B| + q`` and label ``"p.q"``.
    """
    if A.n != B.n:
        raise AlphabetMismatch(f"alphabet sizes differ: {A.n} vs {B.n}")
    p = np.repeat(np.arange(A.size), B.size)
    q = np.tile(np.arange(B.size), A.size)
    mid = A.out[p]                         # letters handed to B
    delta = A.delta[p] * B.size + B.delta[q[:, None], mid]
    out = B.out[q[:, None], mid]
    return Transducer(A.n, _pair_labels(A.states, B.states), delta, out)


def power(A: Transducer, m: int, cap: int | None = None) -> Transducer:
    """``A^m`` as an iterated product; state labels are dotted m-tuples."""
    if m < 1:
        raise ValueError("power needs m >= 1")
    cap = max_states() if cap is None else cap
    if A.size ** m > cap:
        raise CapExceeded(f"|Q|^m = {A.size}^{m} exceeds the cap of {cap} states")
    result = A
    for _ in range(m - 1):
        result = product(result, A)
    return result


# ---------------------------------------------------------------------------
# omega-equivalence

def omega_classes(T: Transducer) -> np.ndarray:
    """Partition refinement: class index of every state under omega-equivalence.

    Starts from the single-letter output rows and refines by successor classes
    until the number of classes is stable.  Classes are numbered in order of
    their first state.
    """
    _, classes = np.unique(T.out, axis=0, return_inverse=True)
    classes = classes.reshape(-1)
    count = int(classes.max()) + 1
    while True:
        signature = np.concatenate([classes[:, None], classes[T.delta]], axis=1)
        _, refined = np.unique(signature, axis=0, return_inverse=True)
        refined = refined.reshape(-1)
        new_count = int(refined.max()) + 1
        classes = refined
        if new_count == count:
            break
        count = new_count
    _, first = np.unique(classes, return_index=True)
    order = np.argsort(first)
    renumber = np.empty_like(order)
    renumber[order] = np.arange(len(order))
    return renumber[classes]


def quotient(T: Transducer, classes: np.ndarray) -> Transducer:
    """Machine on the classes; each class keeps the label of its first state."""
    _, reps = np.unique(classes, return_index=True)
    return Transducer(T.n, tuple(T.states[r] for r in reps),
                      classes[T.delta[reps]], T.out[reps])


def minimize(T: Transducer) -> Transducer:
    return quotient(T, omega_classes(T))


def _disjoint_union(A: Transducer, B: Transducer) -> Transducer:
    labels = tuple(f"L{s}" for s in A.states) + tuple(f"R{s}" for s in B.states)
    delta = np.concatenate([A.delta, B.delta + A.size])
    return Transducer(A.n, labels, delta, np.concatenate([A.out, B.out]))


def omega_equivalent(T1: Transducer, q1: str, T2: Transducer, q2: str) -> bool:
    """Whether ``q1`` of ``T1`` and ``q2`` of ``T2`` give the same output on every word."""
    if T1.n != T2.n:
        raise AlphabetMismatch(f"alphabet sizes differ: {T1.n} vs {T2.n}")
    classes = omega_classes(_disjoint_union(T1, T2))
    return bool(classes[T1.state_index(q1)] == classes[T1.size + T2.state_index(q2)])


# ---------------------------------------------------------------------------
# normal form

def _word_label(word, n: int) -> str:
    if len(word) == 0:
        return "e"
    return ("" if n <= 10 else ".").join(str(int(x)) for x in word)


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Minimal core representative with canonical labels.

    Every state is labelled by the lexicographically least word of length
    ``level`` forcing it and states are sorted by that word, so two normal
    forms are equal exactly when their machines are equal.
    """

    machine: Transducer
    level: int
    canonical_labels: tuple[Word, ...]

    @property
    def size(self) -> int:
        return self.machine.size

    @property
    def n(self) -> int:
        return self.machine.n

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.machine == other.machine

    def __hash__(self):
        return hash(self.machine)

    def __len__(self):
        return self.machine.size

    def __mul__(self, other: NormalForm) -> NormalForm:
        return monoid_product(self, other)


def _canonicalize(M: Transducer) -> tuple[NormalForm, np.ndarray]:
    """Relabel a minimal core machine; also return old-index -> new-index."""
    level = sync_level(M)
    forced = forced_states(M, level)
    _, first = np.unique(forced, return_index=True)   # first (least) word per state
    assert len(first) == M.size, "machine is not core"
    order = np.argsort(first)                          # states sorted by least word
    all_words = words(M.n, level)
    least = [tuple(int(x) for x in all_words[first[s]]) for s in range(M.size)]
    new_of_old = np.empty(M.size, dtype=np.int64)
    new_of_old[order] = np.arange(M.size)
    labels = tuple(_word_label(least[s], M.n) for s in order)
    machine = Transducer(M.n, labels, new_of_old[M.delta[order]], M.out[order])
    return NormalForm(machine, level, tuple(least[s] for s in order)), new_of_old


def min_core_with_map(T: Transducer) -> tuple[NormalForm, np.ndarray]:
    """``min Core(T)`` plus the map from states of ``T`` to its states (-1 off the core)."""
    keep = core_indices(T)
    C = T.restrict(keep)
    classes = omega_classes(C)
    nf, relabel = _canonicalize(quotient(C, classes))
    mapping = np.full(T.size, -1, dtype=np.int64)
    mapping[keep] = relabel[classes]
    return nf, mapping


def min_core(T: Transducer) -> NormalForm:
    return min_core_with_map(T)[0]


def normal_form(T: Transducer) -> NormalForm:
    """Canonical form of a machine that is already minimal and core."""
    return _canonicalize(T)[0]


def monoid_product(A: NormalForm, B: NormalForm) -> NormalForm:
    return min_core(product(A.machine, B.machine))


def monoid_identity(n: int) -> NormalForm:
    return min_core(identity(n))


def normal_form_power(A: Transducer | NormalForm, m: int) -> NormalForm:
    """``min Core(A^m)`` by repeated monoid products."""
    base = A if isinstance(A, NormalForm) else min_core(A)
    result = base
    for _ in range(m - 1):
        result = monoid_product(result, base)
    return result


def conjugate(A: NormalForm, C: Transducer) -> NormalForm:
    """``min Core(C^-1 * A * C)``."""
    if not is_invertible(C):
        raise NotInvertible("conjugating machine is not invertible")
    C_inv = invert(C)
    if sync_level(C) is None or sync_level(C_inv) is None:
        raise NotSynchronizing("conjugating machine is not bi-synchronizing")
    return min_core(product(product(C_inv, A.machine), C))


# ---------------------------------------------------------------------------
# induced maps

def loop_states(T: Transducer, k: int) -> np.ndarray:
    """For each length-k word x (by code), a state q with pi(x, q) = q.

    The state returned is the one forced by a long enough repetition of ``x``;
    when ``k`` is at least the synchronizing level it is the only such state.
    """
    level = sync_level(T)
    if level is None:
        raise NotSynchronizing("machine is not strongly synchronizing")
    reps = max(1, -(-level // k))
    all_words = words(T.n, k)
    state = np.zeros(len(all_words), dtype=np.int64)
    for _ in range(reps):
        for column in all_words.T:
            state = T.delta[state, column]
    return state


@dataclass(frozen=True)
class LevelTransformation:
    """Self-map of the words of length ``k``, stored by word code."""

    n: int
    k: int
    mapping: tuple[int, ...]

    def __call__(self, word) -> Word:
        code = 0
        for x in word:
            code = code * self.n + x
        image = self.mapping[code]
        return tuple(int(x) for x in np.unravel_index(image, (self.n,) * self.k)) if self.k else ()

    def then(self, other: LevelTransformation) -> LevelTransformation:
        """Apply ``self`` first, then ``other``."""
        return LevelTransformation(self.n, self.k, tuple(other.mapping[c] for c in self.mapping))

    def iterate(self, i: int) -> LevelTransformation:
        result = LevelTransformation(self.n, self.k, tuple(range(len(self.mapping))))
        for _ in range(i):
            result = result.then(self)
        return result

    def as_dict(self) -> dict[str, str]:
        return {_word_label(w, self.n): _word_label(self(w), self.n)
                for w in (tuple(int(x) for x in row) for row in words(self.n, self.k))}


def level_transformation(T: Transducer, k: int) -> LevelTransformation:
    """``x -> out(x, q_x)`` on words of length ``k``, ``q_x`` the state looping on ``x``.

    Any ``k >= 1`` is accepted for a synchronizing machine; see :func:`loop_states`.
    """
    if k < 1:
        raise ValueError("level must be at least 1")
    q = loop_states(T, k)
    code = np.zeros_like(q)
    for column in words(T.n, k).T:
        code = code * T.n + T.out[q, column]
        q = T.delta[q, column]
    return LevelTransformation(T.n, k, tuple(int(c) for c in code))


@dataclass(frozen=True)
class FixedLetterState:
    i: int
    x: int
    q0: str
    normal_form: NormalForm
    loop_tuple: tuple[str, ...]       # the raw state of T^i looping on x|x


def fixed_letter_state(T: Transducer) -> FixedLetterState:
    """Least ``i`` and letter ``x`` fixed by the ``i``-th iterate of the level-1 map.

    ``q0`` is the state of ``min Core(T^i)`` carrying the loop ``x|x``.
    """
    level_map = level_transformation(T, 1)
    loops = loop_states(T, 1)
    current = level_map
    for i in range(1, math.factorial(T.n) + 1):
        fixed = [x for x in range(T.n) if current.mapping[x] == x]
        if fixed:
            break
        current = current.then(level_map)
    else:
        raise AssertionError("no periodic letter found")
    x = fixed[0]
    tuple_states, letter = [], x
    for _ in range(i):
        tuple_states.append(T.states[loops[letter]])
        letter = level_map.mapping[letter]
    nf = normal_form_power(T, i)
    q0 = int(loop_states(nf.machine, 1)[x])
    assert nf.machine.out[q0, x] == x and nf.machine.delta[q0, x] == q0
    return FixedLetterState(i, x, nf.machine.states[q0], nf, tuple(tuple_states))


def act_periodic(T: Transducer, w: PeriodicWord) -> PeriodicWord:
    """Action on a periodic point: position ``i`` becomes ``out(x_i, s(x_{i-k} .. x_{i-1}))``.

    Indices are cyclic, so periods shorter than the level need no special
    handling.  The result keeps the origin and is reduced to its shortest period.
    """
    k = sync_level(T)
    if k is None:
        raise NotSynchronizing("machine is not strongly synchronizing")
    if max(w.cycle) >= T.n:
        raise ValueError(f"letter outside 0..{T.n - 1}")
    p = w.period
    result = []
    for i in range(p):
        q = 0
        for j in range(i - k, i):
            q = T.delta[q, w.at(j)]
        result.append(int(T.out[q, w.at(i)]))
    return PeriodicWord(tuple(result)).primitive()
