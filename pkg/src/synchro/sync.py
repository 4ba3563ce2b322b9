"""Strong synchronization: levels, the synchronizing map, cores, core distance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotCore, NotSynchronizing, NotSynchronizingAtLevel
from .transducer import Transducer, Word, invert, is_invertible


def collapse_classes(T: Transducer):
    """Yield the successive partitions of the collapsing procedure.

    Outputs are forgotten; at each iterate all states whose transition rows
    agree (in terms of the current classes) are merged at once.  After ``i``
    iterates two states share a class exactly when every word of length ``i``
    leads both to the same state.  Iteration stops at a single class or when
    an iterate merges nothing.
    """
    classes = np.arange(T.size)
    yield classes
    count = T.size
    while count > 1:
        rows = classes[T.delta]
        _, classes = np.unique(rows, axis=0, return_inverse=True)
        classes = classes.reshape(-1)
        new_count = int(classes.max()) + 1
        if new_count == count:
            return
        count = new_count
        yield classes


def sync_level(T: Transducer) -> int | None:
    """Minimal synchronizing level, or ``None`` if ``T`` is not strongly synchronizing."""
    level = -1
    for level, classes in enumerate(collapse_classes(T)):
        pass
    return level if classes.max() == 0 else None


def is_synchronizing(T: Transducer) -> bool:
    return sync_level(T) is not None


def _require_level(T: Transducer) -> int:
    level = sync_level(T)
    if level is None:
        raise NotSynchronizing("machine is not strongly synchronizing")
    return level


def words(n: int, k: int) -> np.ndarray:
    """All words of length ``k`` as rows of an ``(n**k, k)`` array, in lexicographic order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((n,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


def word_code(word: Word, n: int) -> int:
    code = 0
    for x in word:
        code = code * n + x
    return code


def forced_states(T: Transducer, k: int) -> np.ndarray:
    """State reached from state 0 on every length-``k`` word, indexed by word code."""
    cur = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        cur = T.delta[cur].reshape(-1)
    return cur


def sync_map_indices(T: Transducer, k: int) -> np.ndarray:
    level = _require_level(T)
    if level > k:
        raise NotSynchronizingAtLevel(f"minimal synchronizing level is {level} > {k}")
    return forced_states(T, k)


def sync_map(T: Transducer, k: int) -> dict[Word, str]:
    """The state forced by each word of length ``k``."""
    forced = sync_map_indices(T, k)
    return {tuple(int(x) for x in w): T.states[q]
            for w, q in zip(words(T.n, k), forced)}


def image_sets(T: Transducer):
    """Yield S_0, S_1, ... where S_t is the set of states reachable by words of length t.

    The sets decrease and the sequence stops once it stabilises, which happens
    within ``|Q|`` steps.
    """
    current = np.arange(T.size)
    yield current
    for _ in range(T.size + 1):
        nxt = np.unique(T.delta[current])
        if len(nxt) == len(current):
            return
        current = nxt
        yield current
    raise AssertionError("image sets failed to stabilise")


def core_indices(T: Transducer) -> np.ndarray:
    _require_level(T)
    for current in image_sets(T):
        pass
    return current


def core(T: Transducer) -> Transducer:
    """Restriction of ``T`` to the states forced by some synchronizing word."""
    return T.restrict(core_indices(T))


def is_core(T: Transducer) -> bool:
    return len(core_indices(T)) == T.size


def core_dist(T: Transducer) -> int:
    """Least ``t`` such that every word of length ``t`` leads every state into the core."""
    _require_level(T)
    steps = list(image_sets(T))
    return len(steps) - 1


def bisync_levels(T: Transducer) -> tuple[int | None, int | None]:
    """Minimal levels of ``T`` and of its inverse (``None`` where undefined)."""
    forward = sync_level(T)
    backward = sync_level(invert(T)) if is_invertible(T) else None
    return forward, backward


def bisync_level(T: Transducer) -> int | None:
    forward, backward = bisync_levels(T)
    if forward is None or backward is None:
        return None
    return max(forward, backward)


def is_one_way(T: Transducer) -> bool:
    """Strongly synchronizing but not bi-synchronizing."""
    forward, backward = bisync_levels(T)
    return forward is not None and backward is None


def check_core_power_condition(T: Transducer) -> bool:
    """Whether for every length-k word G the map p -> s(out(G, p)) is onto the states.

    ``k`` is the minimal level and ``s`` the synchronizing map.  When this
    holds every power of ``T`` is its own core.
    """
    k = _require_level(T)
    if not is_core(T):
        raise NotCore("the condition is only defined for core machines")
    forced = forced_states(T, k)
    # follow every (word, start state) pair in lockstep, encoding outputs base n
    state = np.tile(np.arange(T.size), (T.n ** k, 1))
    code = np.zeros_like(state)
    for column in words(T.n, k).T:
        letters = column[:, None]
        code = code * T.n + T.out[state, letters]
        state = T.delta[state, letters]
    reached = forced[code]
    return all(len(np.unique(row)) == T.size for row in reached)


@dataclass(frozen=True)
class SyncProfile:
    is_synchronizing: bool
    level: int | None = None
    sync_map: dict[Word, str] | None = field(default=None, compare=False)
    core_states: tuple[str, ...] = ()
    core_dist: int | None = None
    bisync_level: int | None = None
    one_way: bool = False

    def to_json(self) -> dict:
        return {
            "synchronizing": self.is_synchronizing,
            "level": self.level,
            "core_states": list(self.core_states),
            "core_dist": self.core_dist,
            "bisync_level": self.bisync_level,
            "one_way": self.one_way,
        }


def profile(T: Transducer, with_map: bool = True) -> SyncProfile:
    level = sync_level(T)
    if level is None:
        return SyncProfile(False)
    forward, backward = bisync_levels(T)
    return SyncProfile(
        True,
        level=level,
        sync_map=sync_map(T, level) if with_map else None,
        core_states=tuple(T.states[i] for i in core_indices(T)),
        core_dist=core_dist(T),
        bisync_level=None if backward is None else max(forward, backward),
        one_way=backward is None,
    )
