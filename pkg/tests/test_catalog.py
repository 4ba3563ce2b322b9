import numpy as np
import pytest

from synchro import oracles
from synchro.algebra import minimize
from synchro.catalog import (
    CatalogEntry,
    all_entries,
    bisync_family,
    builtin,
    h4exp,
    names,
    properties,
    random_transducer,
    resolve,
)
from synchro.errors import CatalogError, RequirementUnsatisfiable, UnknownName
from synchro.sync import bisync_level, is_core, sync_level
from synchro.transducer import invert, is_invertible


def test_names():
    assert names() == ["shift2", "oneway2", "h4exp", "g_h3", "dummy"]


@pytest.mark.parametrize("entry", all_entries(6), ids=lambda e: e.name)
def test_declared_flags_hold(entry):
    actual = properties(entry.machine)
    assert all(actual[key] == value for key, value in entry.expected.items())
    # the levels also agree with the literal definition
    assert sync_level(entry.machine) == oracles.sync_level(entry.machine)


def test_examples():
    assert builtin("g_h3").expected["bisync_level"] == 1
    assert builtin("shift2").expected["invertible"] is False
    assert builtin("h4exp").expected["core_power"] is True


def test_classes():
    assert properties(builtin("shift2").machine)["classes"] == {"P"}
    assert properties(builtin("oneway2").machine)["classes"] == {"P", "SH"}
    assert properties(builtin("g_h3").machine)["classes"] == {"P", "SH", "H"}
    assert properties(builtin("dummy").machine)["classes"] == frozenset()


def test_wrong_declaration_is_rejected():
    with pytest.raises(CatalogError):
        CatalogEntry("bad", builtin("shift2").machine, {"invertible": True})


def test_unknown_name():
    with pytest.raises(UnknownName):
        builtin("nope")
    with pytest.raises(KeyError):
        resolve("nope")


@pytest.mark.parametrize("i", range(1, 7))
def test_family(i):
    entry = bisync_family(i)
    T = entry.machine
    assert T.size == i + 1
    assert bisync_level(T) == i
    assert oracles.sync_level(T) == i
    assert oracles.sync_level(invert(T)) <= i


def test_family_rejects_zero():
    with pytest.raises(ValueError):
        bisync_family(0)


def test_wider_four_letter_machine():
    T = h4exp(6)
    assert T.n == 6 and T.size == 2
    for x in (4, 5):
        assert [int(T.delta[q, x]) for q in range(2)] == [0, 0]
        assert [int(T.out[q, x]) for q in range(2)] == [x, x]
    assert bisync_level(T) == 1
    assert resolve("h4exp-6").machine == T
    assert resolve("family-2").machine == bisync_family(2).machine
    with pytest.raises(ValueError):
        h4exp(3)


class TestRandom:
    def test_deterministic(self):
        assert random_transducer(2, 3, seed=7) == random_transducer(2, 3, seed=7)

    def test_one_state(self):
        T = random_transducer(2, 1, seed=0)
        assert T.size == 1 and T.n == 2

    def test_invertible(self):
        for seed in range(20):
            T = random_transducer(2, 3, seed=seed, require={"invertible"})
            assert is_invertible(T)
            assert all(sorted(row) == [0, 1] for row in T.out.tolist())

    def test_synchronizing(self):
        for seed in range(20):
            T = random_transducer(2, 2, seed=seed, require={"synchronizing"})
            assert oracles.sync_level(T) is not None

    def test_core_minimal_bisync(self):
        T = random_transducer(3, 3, seed=1, require={"core", "minimal", "bisynchronizing"})
        assert is_core(T) and minimize(T).size == 3 and bisync_level(T) is not None

    def test_unsatisfiable(self):
        # a single-letter machine with two states that is minimal cannot exist
        with pytest.raises(RequirementUnsatisfiable):
            random_transducer(1, 2, seed=0, require={"minimal"}, max_tries=50)

    def test_bad_requests(self):
        with pytest.raises(ValueError):
            random_transducer(2, 2, seed=0, require={"pretty"})
        with pytest.raises(ValueError):
            random_transducer(2, 0, seed=0)

    def test_tables_in_range(self):
        T = random_transducer(3, 4, seed=3)
        assert T.delta.max() < 4 and T.out.max() < 3 and np.all(T.delta >= 0)
