"""Named example machines, the level-i bi-synchronizing family, and random machines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import minimize
from .errors import CatalogError, RequirementUnsatisfiable, UnknownName
from .growth import dummy_transducer
from .sync import bisync_level, check_core_power_condition, is_core, sync_level
from .transducer import Transducer, invert, is_invertible


def _edges(n, states, table):
    return Transducer.from_edges(n, states, table)


def shift2() -> Transducer:
    return _edges(2, ["a1", "a2"], [
        ("a1", 0, 0, "a1"), ("a1", 1, 0, "a2"),
        ("a2", 0, 1, "a1"), ("a2", 1, 1, "a2"),
    ])


def oneway2() -> Transducer:
    return _edges(2, ["a1", "a2"], [
        ("a1", 0, 1, "a1"), ("a1", 1, 0, "a2"),
        ("a2", 0, 0, "a1"), ("a2", 1, 1, "a2"),
    ])


def h4exp(n: int = 4) -> Transducer:
    """Two-state element over ``n >= 4`` letters; letters 4.. are copied and lead to ``a1``."""
    if n < 4:
        raise ValueError("this machine needs at least 4 letters")
    edges = [
        ("a1", 0, 1, "a1"), ("a1", 1, 2, "a1"), ("a1", 2, 0, "a2"), ("a1", 3, 3, "a2"),
        ("a2", 0, 2, "a1"), ("a2", 1, 1, "a1"), ("a2", 2, 3, "a2"), ("a2", 3, 0, "a2"),
    ]
    for x in range(4, n):
        edges += [("a1", x, x, "a1"), ("a2", x, x, "a1")]
    return _edges(n, ["a1", "a2"], edges)


def g_h3() -> Transducer:
    # the rows of ``a`` follow the transitions of the b.b tree: a reads 0|1 and 2|0 into b
    return _edges(3, ["b", "a"], [
        ("b", 0, 0, "b"), ("b", 1, 2, "a"), ("b", 2, 1, "b"),
        ("a", 0, 1, "b"), ("a", 1, 2, "a"), ("a", 2, 0, "b"),
    ])


def bisync_family_machine(i: int) -> Transducer:
    """States a0..ai over {0,1,2}; 2 walks up the chain, 0 and 1 return to a0."""
    if i < 1:
        raise ValueError("family parameter must be at least 1")
    states = [f"a{j}" for j in range(i + 1)]
    edges = [("a0", 0, 0, "a0"), ("a0", 1, 1, "a0"), ("a0", 2, 2, "a1")]
    for j in range(1, i):
        edges += [(f"a{j}", 0, 0, "a0"), (f"a{j}", 1, 1, "a0"), (f"a{j}", 2, 2, f"a{j + 1}")]
    edges += [(f"a{i}", 0, 1, "a0"), (f"a{i}", 1, 0, "a0"), (f"a{i}", 2, 2, f"a{i}")]
    return _edges(3, states, edges)


# ---------------------------------------------------------------------------

def properties(T: Transducer) -> dict:
    """Recompute every flag a catalog entry may declare."""
    level = sync_level(T)
    invertible = is_invertible(T)
    core = is_core(T) if level is not None else None
    bisync = bisync_level(T)
    inverse_core = None
    if bisync is not None:
        inverse_core = is_core(invert(T))
    in_p = bool(core)
    classes = set()
    if in_p:
        classes.add("P")
        if invertible:
            classes.add("SH")
            if inverse_core:
                classes.add("H")
    return {
        "invertible": invertible,
        "synchronizing": level is not None,
        "sync_level": level,
        "core": core,
        "bisync_level": bisync,
        "core_power": check_core_power_condition(T) if in_p else None,
        "classes": frozenset(classes),
        "states": T.size,
    }


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    machine: Transducer
    expected: dict = field(default_factory=dict)
    source: str = ""

    def __post_init__(self):
        actual = properties(self.machine)
        wrong = {k: (v, actual[k]) for k, v in self.expected.items() if actual[k] != v}
        if wrong:
            raise CatalogError(f"{self.name}: declared vs recomputed {wrong}")


_BUILTINS = {
    "shift2": (shift2, "shift map on two letters", dict(
        invertible=False, sync_level=1, core=True, bisync_level=None,
        core_power=True, classes=frozenset({"P"}))),
    "oneway2": (oneway2, "one-way synchronizing element on two letters", dict(
        invertible=True, sync_level=1, core=True, bisync_level=None,
        core_power=True, classes=frozenset({"P", "SH"}))),
    "h4exp": (h4exp, "bi-synchronizing element on four letters", dict(
        invertible=True, sync_level=1, core=True, bisync_level=1,
        core_power=True, classes=frozenset({"P", "SH", "H"}))),
    "g_h3": (g_h3, "bi-synchronizing element on three letters", dict(
        invertible=True, sync_level=1, core=True, bisync_level=1,
        core_power=False, classes=frozenset({"P", "SH", "H"}))),
    "dummy": (dummy_transducer, "binary dummy machine for g_h3", dict(
        invertible=True, synchronizing=False, classes=frozenset())),
}


def names() -> list[str]:
    return list(_BUILTINS)


def builtin(name: str) -> CatalogEntry:
    try:
        make, source, expected = _BUILTINS[name]
    except KeyError:
        raise UnknownName(f"no catalog entry {name!r}; known: {', '.join(_BUILTINS)}") from None
    return CatalogEntry(name, make(), expected, source)


def bisync_family(i: int) -> CatalogEntry:
    expected = dict(invertible=True, sync_level=i, core=True, bisync_level=i,
                    states=i + 1, classes=frozenset({"P", "SH", "H"}))
    return CatalogEntry(f"family-{i}", bisync_family_machine(i), expected,
                        f"bi-synchronizing at level {i}")


def resolve(name: str) -> CatalogEntry:
    """Entry by name, also accepting ``family-<i>`` and ``h4exp-<n>``."""
    if name.startswith("family-"):
        return bisync_family(int(name.split("-", 1)[1]))
    if name.startswith("h4exp-"):
        n = int(name.split("-", 1)[1])
        return CatalogEntry(name, h4exp(n), dict(invertible=True, sync_level=1, bisync_level=1))
    return builtin(name)


def all_entries(max_family: int = 3) -> list[CatalogEntry]:
    return [builtin(name) for name in _BUILTINS] + [bisync_family(i) for i in range(1, max_family + 1)]


# ---------------------------------------------------------------------------

_REQUIREMENTS = {"invertible", "synchronizing", "core", "bisynchronizing", "minimal"}


def _meets(T: Transducer, require) -> bool:
    if "synchronizing" in require or "core" in require or "bisynchronizing" in require:
        if sync_level(T) is None:
            return False
    if "core" in require and not is_core(T):
        return False
    if "bisynchronizing" in require and bisync_level(T) is None:
        return False
    if "minimal" in require and minimize(T).size != T.size:
        return False
    return True


def random_transducer(n: int, states: int, seed: int | None = None,
                      require=frozenset(), max_tries: int = 10_000) -> Transducer:
    """Uniformly random tables, resampled until every required flag holds.

    With ``invertible`` required the output rows are drawn as uniform
    permutations, which is the same distribution rejection would give.
    """
    require = set(require)
    unknown = require - _REQUIREMENTS
    if unknown:
        raise ValueError(f"unknown requirements {sorted(unknown)}")
    if n < 1 or states < 1:
        raise ValueError("need n >= 1 and at least one state")
    if "bisynchronizing" in require:
        require.add("invertible")
    rng = np.random.default_rng(seed)
    labels = tuple(f"q{i}" for i in range(states))
    for _ in range(max_tries):
        delta = rng.integers(0, states, size=(states, n))
        if "invertible" in require:
            out = np.array([rng.permutation(n) for _ in range(states)])
        else:
            out = rng.integers(0, n, size=(states, n))
        T = Transducer(n, labels, delta, out)
        if _meets(T, require):
            return T
    raise RequirementUnsatisfiable(f"no machine meeting {sorted(require)} in {max_tries} tries")
