"""Brute-force reference computations.

These follow the definitions literally (enumerate words, walk one letter at a
time) and share no code with the fast routines they are used to check.
"""

from __future__ import annotations

import itertools
from collections import deque

from .transducer import Transducer


def _walk(T: Transducer, q: int, word) -> tuple[int, tuple[int, ...]]:
    out = []
    for x in word:
        out.append(int(T.out[q][x]))
        q = int(T.delta[q][x])
    return q, tuple(out)


def all_words(n: int, k: int):
    return itertools.product(range(n), repeat=k)


def forced_map(T: Transducer, k: int) -> dict | None:
    """Word -> state index if every state reads every length-k word to one place."""
    result = {}
    for word in all_words(T.n, k):
        ends = {_walk(T, q, word)[0] for q in range(T.size)}
        if len(ends) != 1:
            return None
        result[word] = ends.pop()
    return result


def sync_level(T: Transducer, max_depth: int | None = None) -> int | None:
    """Least k <= max_depth (default |Q|) at which all length-k reads coincide."""
    max_depth = T.size if max_depth is None else max_depth
    for k in range(max_depth + 1):
        if forced_map(T, k) is not None:
            return k
    return None


def core_states(T: Transducer) -> set[int]:
    k = sync_level(T)
    return set(forced_map(T, k).values())


def core_dist(T: Transducer) -> int:
    core = core_states(T)
    for t in itertools.count():
        reached = {_walk(T, q, w)[0] for q in range(T.size) for w in all_words(T.n, t)}
        if reached <= core:
            return t


def equal_up_to_depth(T1: Transducer, q1: int, T2: Transducer, q2: int, depth: int) -> bool:
    """Compare outputs of two states on every word of length <= ``depth``.

    Breadth-first over pairs of states reached by a common input; a pair met
    again at greater depth adds nothing new, so each pair is expanded once.
    """
    seen = {(q1, q2)}
    queue = deque([(q1, q2, 0)])
    while queue:
        p1, p2, d = queue.popleft()
        if d == depth:
            continue
        for x in range(T1.n):
            if T1.out[p1][x] != T2.out[p2][x]:
                return False
            nxt = (int(T1.delta[p1][x]), int(T2.delta[p2][x]))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((*nxt, d + 1))
    return True


def omega_classes(T: Transducer) -> list[frozenset[int]]:
    depth = T.size * T.size
    classes: list[set[int]] = []
    for q in range(T.size):
        for cls in classes:
            if equal_up_to_depth(T, q, T, next(iter(cls)), depth):
                cls.add(q)
                break
        else:
            classes.append({q})
    return [frozenset(c) for c in classes]


def composed_output(A: Transducer, p: int, B: Transducer, q: int, word) -> tuple[int, ...]:
    """Output of B from q on the output of A from p."""
    return _walk(B, q, _walk(A, p, word)[1])[1]


def nested_sum(i: int, j: int) -> int:
    """S(i, j) by literal nested summation."""
    if j <= 0:
        return 0
    if i == 0:
        return j
    return sum(nested_sum(i - 1, l) for l in range(1, j + 1))


def periodic_action(T: Transducer, cycle: tuple[int, ...], k: int) -> tuple[int, ...]:
    """Action on a periodic point, reading k letters of history from every state."""
    p = len(cycle)
    result = []
    for i in range(p):
        history = [cycle[(i - k + j) % p] for j in range(k)]
        ends = {_walk(T, q, history)[0] for q in range(T.size)}
        assert len(ends) == 1
        result.append(int(T.out[ends.pop()][cycle[i]]))
    return tuple(result)
