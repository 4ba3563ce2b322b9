import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings

from conftest import machines, with_dangling
from synchro import oracles
from synchro.algebra import minimize, power, product
from synchro.catalog import (
    all_entries,
    bisync_family_machine,
    g_h3,
    h4exp,
    oneway2,
    random_transducer,
    shift2,
)
from synchro.errors import NotCore, NotSynchronizing, NotSynchronizingAtLevel
from synchro.sync import (
    bisync_level,
    bisync_levels,
    check_core_power_condition,
    core,
    core_dist,
    core_indices,
    is_core,
    is_one_way,
    profile,
    sync_level,
    sync_map,
)
from synchro.transducer import Transducer, identity, run

# letter 0 rotates three states, letter 1 fixes them: no word ever merges two states
ROTATION = Transducer(2, ("b0", "b1", "b2"),
                      np.array([[1, 0], [2, 1], [0, 2]]), np.array([[0, 1], [1, 0], [0, 0]]))


class TestSyncLevel:
    def test_examples(self, shift):
        assert sync_level(shift) == 1
        assert sync_level(bisync_family_machine(3)) == 3
        assert sync_level(ROTATION) is None
        assert sync_level(identity(2)) == 0

    @settings(max_examples=300, deadline=None)
    @given(machines(max_states=6, max_n=3))
    def test_collapsing_matches_definition(self, T):
        assert sync_level(T) == oracles.sync_level(T)

    @given(machines(max_states=6, max_n=3))
    def test_level_bounded_by_minimal_core_size(self, T):
        assume(sync_level(T) is not None)
        M = minimize(core(T))
        assert sync_level(M) <= M.size


class TestSyncMap:
    def test_shift_level_one(self, shift):
        assert sync_map(shift, 1) == {(0,): "a1", (1,): "a2"}

    def test_three_letter_machine(self):
        assert sync_map(g_h3(), 1) == {(0,): "b", (1,): "a", (2,): "b"}

    def test_higher_level_factors_through_last_letter(self, shift):
        level_two = sync_map(shift, 2)
        assert len(level_two) == 4
        assert all(state == sync_map(shift, 1)[w[-1:]] for w, state in level_two.items())

    def test_level_too_small(self):
        with pytest.raises(NotSynchronizingAtLevel):
            sync_map(bisync_family_machine(3), 2)
        with pytest.raises(NotSynchronizing):
            sync_map(ROTATION, 4)

    @given(machines(max_states=5))
    def test_forced_from_every_state(self, T):
        k = sync_level(T)
        assume(k is not None)
        for word, label in sync_map(T, k).items():
            for q in range(T.size):
                assert T.states[run(T, q, word)[0]] == label


class TestCore:
    def test_core_machine_is_its_own_core(self, shift):
        assert core(shift) == shift
        assert is_core(shift) and is_core(g_h3())

    def test_dangling_state_removed(self, shift):
        T = with_dangling(shift)
        assert not is_core(T)
        assert core(T) == shift

    def test_square_of_shift_is_core(self, shift):
        P = product(shift, shift)
        assert core(P).size == 4 and is_core(P)
        assert set(core_indices(P).tolist()) == oracles.core_states(P)

    def test_requires_synchronizing(self):
        for fn in (core, is_core, core_dist):
            with pytest.raises(NotSynchronizing):
                fn(ROTATION)

    @given(machines(max_states=5))
    def test_matches_forced_states(self, T):
        assume(sync_level(T) is not None)
        assert set(core_indices(T).tolist()) == oracles.core_states(T)
        assert core(core(T)) == core(T)


class TestCoreDist:
    def test_examples(self, shift):
        assert core_dist(shift) == 0
        assert core_dist(with_dangling(shift)) == 1
        G = g_h3()
        square = product(G, G)
        assert core_dist(square) == oracles.core_dist(square) <= 1

    @given(machines(max_states=5))
    def test_matches_definition_and_level(self, T):
        level = sync_level(T)
        assume(level is not None)
        assert core_dist(T) == oracles.core_dist(T) <= level

    @pytest.mark.parametrize("m", range(1, 9))
    def test_bisynchronizing_power_bound(self, m):
        # level 1 in both directions, so the bound is ceil(m/2)
        assert core_dist(power(g_h3(), m)) <= -(-m // 2)


class TestBisync:
    def test_three_letter_machine(self):
        assert bisync_level(g_h3()) == 1

    @pytest.mark.parametrize("i", range(1, 7))
    def test_family(self, i):
        T = bisync_family_machine(i)
        assert T.size == i + 1
        assert bisync_level(T) == i
        forward, backward = bisync_levels(T)
        assert forward == oracles.sync_level(T) == i

    def test_one_way(self, oneway, shift):
        assert bisync_level(oneway) is None
        assert bisync_levels(oneway) == (1, None)
        assert is_one_way(oneway)
        assert not is_one_way(g_h3())
        # synchronizing without a synchronizing inverse, so one-way as well
        assert bisync_level(shift) is None and is_one_way(shift)


class TestCorePowerCondition:
    @pytest.mark.parametrize("make", [shift2, oneway2, h4exp])
    def test_holds(self, make):
        assert check_core_power_condition(make())

    def test_fails_for_three_letter_machine(self):
        # its powers have cores smaller than 2^m, so the condition must fail
        assert not check_core_power_condition(g_h3())
        assert core(power(g_h3(), 2)).size < 4

    def test_needs_core(self, shift):
        with pytest.raises(NotCore):
            check_core_power_condition(with_dangling(shift))

    @pytest.mark.parametrize("entry", [e for e in all_entries(3)
                                       if e.expected.get("core_power")], ids=lambda e: e.name)
    def test_conclusion(self, entry):
        T = entry.machine
        for m in range(1, 7):
            assert core(power(T, m)).size == T.size ** m

    def test_condition_implies_conclusion(self):
        checked = 0
        for seed in range(300):
            T = random_transducer(2 + seed % 2, 1 + seed % 3, seed=seed, require={"core"})
            if check_core_power_condition(T):
                checked += 1
                for m in range(2, 4):
                    assert is_core(power(T, m))
        assert checked > 20

    def test_brute_force_reading(self):
        # every word of length k, every target state, some start state reaches it
        for T in (shift2(), oneway2(), h4exp(), g_h3()):
            k = sync_level(T)
            forced = oracles.forced_map(T, k)
            expected = all(
                {forced[oracles._walk(T, p, w)[1]] for p in range(T.size)} == set(range(T.size))
                for w in itertools.product(range(T.n), repeat=k))
            assert check_core_power_condition(T) == expected


class TestProfile:
    def test_json_keys(self, shift):
        data = profile(shift).to_json()
        assert data == {"synchronizing": True, "level": 1, "core_states": ["a1", "a2"],
                        "core_dist": 0, "bisync_level": None, "one_way": True}
        assert profile(g_h3()).to_json()["bisync_level"] == 1

    def test_not_synchronizing(self):
        p = profile(ROTATION)
        assert not p.is_synchronizing and p.level is None
        assert p.to_json()["core_states"] == []

    def test_sync_map_included(self, shift):
        assert profile(shift).sync_map == sync_map(shift, 1)
