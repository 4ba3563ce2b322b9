import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import H3_AS_DRAWN_TDX, ONEWAY_TDX, SHIFT_TDX, invertible_machines, machines
from synchro.catalog import all_entries, g_h3
from synchro.errors import (
    DuplicateState,
    DuplicateTransition,
    LetterOutOfRange,
    MissingTransition,
    NotInvertible,
    TdxSyntaxError,
    UnknownState,
)
from synchro.transducer import (
    PeriodicWord,
    Transducer,
    dual,
    identity,
    invert,
    is_invertible,
    parse,
    read_word,
    serialize,
)


def edge_set(T):
    return set(T.edges())


class TestParse:
    def test_shift_machine(self, shift):
        assert shift.n == 2 and shift.states == ("a1", "a2")
        assert edge_set(shift) == {("a1", 0, 0, "a1"), ("a1", 1, 0, "a2"),
                                   ("a2", 1, 1, "a2"), ("a2", 0, 1, "a1")}

    def test_three_letter_machine_as_drawn(self):
        T = parse(H3_AS_DRAWN_TDX)
        assert T.n == 3 and T.states == ("b", "a")
        assert edge_set(T) == {("b", 0, 0, "b"), ("b", 2, 1, "b"), ("b", 1, 2, "a"),
                               ("a", 0, 0, "b"), ("a", 1, 2, "a"), ("a", 2, 1, "b")}

    def test_missing_row_names_line(self):
        text = "alphabet 2\nstates a1 a2\na1 0 0 a1\na2 0 1 a1\na2 1 1 a2\n"
        with pytest.raises(MissingTransition) as info:
            parse(text)
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_state_without_rows_points_at_states_line(self):
        with pytest.raises(MissingTransition) as info:
            parse("alphabet 1\nstates p q\np 0 0 p\n")
        assert info.value.line == 2

    @pytest.mark.parametrize("text, error, line", [
        ("alphabet 2\nstates a a\n", DuplicateState, 2),
        ("alphabet 2\nstates a\na 0 2 a\na 1 0 a\n", LetterOutOfRange, 3),
        ("alphabet 2\nstates a\na 0 0 a\na 0 1 a\na 1 0 a\n", DuplicateTransition, 4),
        ("alphabet 2\nstates a\na 0 0 b\n", UnknownState, 3),
        ("alphabet x\n", TdxSyntaxError, 1),
        ("states a\n", TdxSyntaxError, 1),
        ("alphabet 2\nstates a\na 0 0\n", TdxSyntaxError, 3),
    ])
    def test_errors_name_the_line(self, text, error, line):
        with pytest.raises(error) as info:
            parse(text)
        assert info.value.line == line

    def test_comments_and_blank_lines(self):
        text = "# header\n\nalphabet 1  # one letter\nstates s\n\ns 0 0 s # loop\n"
        assert parse(text) == identity(1, "s")

    def test_empty_input(self):
        with pytest.raises(TdxSyntaxError):
            parse("   \n# nothing\n")


class TestSerialize:
    def test_round_trip_keeps_labels(self, shift):
        assert parse(serialize(shift)) == shift
        renamed = shift.relabel(["left", "right"])
        text = serialize(renamed)
        assert "states left right" in text
        assert parse(text) == renamed

    @pytest.mark.parametrize("entry", all_entries(4), ids=lambda e: e.name)
    def test_catalog_round_trips(self, entry):
        assert parse(serialize(entry.machine)) == entry.machine

    @given(machines(max_states=5, max_n=4))
    def test_random_round_trips(self, T):
        assert parse(serialize(T)) == T


class TestReadWord:
    def test_shift(self, shift):
        # a1 -1|0-> a2 -1|1-> a2 -0|1-> a1
        assert read_word(shift, "a1", [1, 1, 0]) == ("a1", (0, 1, 1))

    def test_three_letter_machine(self):
        # b -1|2-> a -2|0-> b
        assert read_word(g_h3(), "b", [1, 2]) == ("b", (2, 0))

    def test_empty_word(self, shift):
        assert read_word(shift, "a2", []) == ("a2", ())

    def test_bad_arguments(self, shift):
        with pytest.raises(UnknownState):
            read_word(shift, "zz", [0])
        with pytest.raises(LetterOutOfRange):
            read_word(shift, "a1", [2])

    @given(machines(), st.data())
    def test_composes_over_concatenation(self, T, data):
        word = st.lists(st.integers(0, T.n - 1), max_size=6)
        g, h = data.draw(word), data.draw(word)
        q = data.draw(st.sampled_from(T.states))
        mid, out1 = read_word(T, q, g)
        end, out2 = read_word(T, mid, h)
        assert read_word(T, q, g + h) == (end, out1 + out2)
        assert len(out1) == len(g)


class TestInverse:
    def test_is_invertible(self, shift):
        assert is_invertible(g_h3())
        assert not is_invertible(shift)
        assert is_invertible(identity(3))

    def test_one_way_machine(self, oneway):
        inv = invert(oneway)
        assert edge_set(inv) == {("a1^-1", 1, 0, "a1^-1"), ("a1^-1", 0, 1, "a2^-1"),
                                 ("a2^-1", 1, 1, "a2^-1"), ("a2^-1", 0, 0, "a1^-1")}

    def test_identity(self):
        assert invert(identity(2)).same_tables(identity(2))

    def test_not_invertible(self, shift):
        with pytest.raises(NotInvertible):
            invert(shift)

    @given(invertible_machines(), st.data())
    def test_cancellation(self, T, data):
        inv = invert(T)
        assert invert(inv) == T
        word = data.draw(st.lists(st.integers(0, T.n - 1), max_size=8))
        q = data.draw(st.sampled_from(T.states))
        end, out = read_word(T, q, word)
        assert read_word(inv, q + "^-1", out) == (end + "^-1", tuple(word))


class TestDual:
    def test_shift(self, shift):
        D = dual(shift)
        assert D.n == 2 and D.states == ("0", "1")
        # letters of the dual are the states a1 (0) and a2 (1)
        assert edge_set(D) == {("0", 0, 0, "0"), ("1", 0, 1, "0"),
                               ("0", 1, 0, "1"), ("1", 1, 1, "1")}

    def test_identity(self):
        D = dual(identity(2))
        assert D.n == 1 and D.size == 2
        assert edge_set(D) == {("0", 0, 0, "0"), ("1", 0, 0, "1")}

    @pytest.mark.parametrize("entry", all_entries(3), ids=lambda e: e.name)
    def test_involution(self, entry):
        assert dual(dual(entry.machine)).same_tables(entry.machine)


class TestConstruction:
    def test_tables_are_read_only(self, shift):
        with pytest.raises(ValueError):
            shift.delta[0, 0] = 1

    def test_bad_tables(self):
        with pytest.raises(UnknownState):
            Transducer(2, ("a",), np.array([[0, 1]]), np.array([[0, 1]]))
        with pytest.raises(LetterOutOfRange):
            Transducer(2, ("a",), np.array([[0, 0]]), np.array([[0, 2]]))
        with pytest.raises(DuplicateState):
            Transducer(1, ("a", "a"), np.array([[0], [0]]), np.array([[0], [0]]))

    def test_from_edges_requires_every_row(self):
        with pytest.raises(MissingTransition):
            Transducer.from_edges(2, ["a"], [("a", 0, 0, "a")])

    def test_equality_and_hash(self):
        a, b = parse(SHIFT_TDX), parse(SHIFT_TDX)
        assert a == b and hash(a) == hash(b)
        assert a != parse(ONEWAY_TDX)
        assert a != a.relabel(["x", "y"])


class TestPeriodicWord:
    def test_equality_ignores_phase_and_repetition(self):
        assert PeriodicWord((0, 1)) == PeriodicWord((1, 0)) == PeriodicWord((0, 1, 0, 1))
        assert PeriodicWord((0, 0, 1)) != PeriodicWord((0, 1))
        assert len({PeriodicWord((0, 1)), PeriodicWord((1, 0, 1, 0))}) == 1

    def test_alignment_keeps_phase(self):
        assert PeriodicWord((0, 1)).aligned_with(PeriodicWord((0, 1, 0, 1)))
        assert not PeriodicWord((0, 1)).aligned_with(PeriodicWord((1, 0)))

    def test_rotate_and_primitive(self):
        w = PeriodicWord((0, 1, 2))
        assert w.rotate().cycle == (1, 2, 0)
        assert w.rotate(-1).cycle == (2, 0, 1)
        assert PeriodicWord((1, 0, 1, 0)).primitive().cycle == (1, 0)

    def test_parsing(self):
        assert PeriodicWord.from_string("011").cycle == (0, 1, 1)
        assert PeriodicWord.from_string("0,12,3").cycle == (0, 12, 3)
        assert str(PeriodicWord((0, 12))) == "0,12"
        with pytest.raises(ValueError):
            PeriodicWord(())
