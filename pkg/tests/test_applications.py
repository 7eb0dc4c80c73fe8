"""Test alignment, cognate search and cascades."""

from __future__ import annotations

from functools import cache
from itertools import product
import random

import pytest

from ntwfsm.applications import (
    Alignment,
    align,
    build_edit_machine,
    cascade_apply,
    cascade_with_intermediates,
    cognate_pairs,
    column_cost,
)
from ntwfsm.config import EditCostModel
from ntwfsm.exceptions import (
    ArityMismatchError,
    InvalidConfigError,
    SemiringMismatchError,
)
from ntwfsm.join import compose
from ntwfsm.machine import (
    MachineBuilder,
    acceptor,
    enumerate_tuples,
    from_tuples,
    tape_tuple,
    tuple_weight,
)
from ntwfsm.rational_ops import closure, coproject
from ntwfsm.semiring import REAL, TROPICAL

from .conftest import MachineFactory, tuple_set

UNIT = EditCostModel()


def _sum_of_pairs_oracle(strings: tuple[str, ...], costs: EditCostModel) -> float:
    """Return the optimal sum-of-pairs alignment cost by dynamic programming."""
    moves = [mask for mask in product((0, 1), repeat=len(strings)) if any(mask)]

    @cache
    def best(position: tuple[int, ...]) -> float:
        if all(at == len(s) for at, s in zip(position, strings, strict=True)):
            return 0.0
        options = []
        for mask in moves:
            if any(
                step and at == len(s)
                for step, at, s in zip(mask, position, strings, strict=True)
            ):
                continue
            column = tuple(
                s[at] if step else ""
                for step, at, s in zip(mask, position, strings, strict=True)
            )
            after = tuple(at + step for at, step in zip(position, mask, strict=True))
            options.append(column_cost(column, costs) + best(after))
        return min(options)

    return best((0,) * len(strings))


def _random_word(rng: random.Random, alphabet: str, longest: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, longest)))


def test_column_cost() -> None:
    """Test sum-of-pairs column costs."""
    costs = EditCostModel(
        match_cost=0, substitution_cost=2, insertion_cost=3, deletion_cost=5
    )
    assert column_cost(("a", "a"), costs) == 0
    assert column_cost(("a", "b"), costs) == 2
    assert column_cost(("", "b"), costs) == 3
    assert column_cost(("a", ""), costs) == 5
    assert column_cost(("a", "a", ""), costs) == 10


def test_edit_machine_examples() -> None:
    """Test the edit machine on small alphabets."""
    machine = build_edit_machine("a", 2)
    assert machine.num_states == 1
    assert sorted(t.label for t in machine.transitions) == [
        ("", "a"),
        ("a", ""),
        ("a", "a"),
    ]
    assert tuple_weight(build_edit_machine("ab", 2), ("a", "b"), 2) == 1.0
    assert tuple_weight(build_edit_machine("a", 3), ("a", "a", ""), 3) == 2.0
    assert len(build_edit_machine("abc", 3).transitions) == 4**3 - 1


def test_edit_machine_rejects() -> None:
    """Test the edit machine guards."""
    with pytest.raises(ArityMismatchError):
        build_edit_machine("ab", 1)
    with pytest.raises(InvalidConfigError):
        build_edit_machine("", 2)
    with pytest.raises(InvalidConfigError):
        EditCostModel(insertion_cost=-1)


def test_align_example() -> None:
    """Test the classic edit distance pair."""
    alignment = align(["kitten", "sitting"])
    assert alignment.weight == 3.0
    first, second = alignment.rows
    assert first.replace("-", "") == "kitten"
    assert second.replace("-", "") == "sitting"
    assert len(first) == len(second) == len(alignment.columns)
    assert sum(column_cost(column, UNIT) for column in alignment.columns) == 3.0


def test_align_edge_cases() -> None:
    """Test empty strings and the arity guard."""
    assert align(["a", "a"]) == Alignment(
        columns=(("a", "a"),), rows=("a", "a"), weight=0.0
    )
    assert align(["", ""]) == Alignment(columns=(), rows=("", ""), weight=0.0)
    alignment = align(["", "ab"])
    assert alignment.weight == 2.0
    assert alignment.rows == ("--", "ab")
    with pytest.raises(ArityMismatchError):
        align(["abc"])


def test_align_pairs_match_oracle(rng: random.Random) -> None:
    """Test pairwise alignment weights against dynamic programming."""
    costs = EditCostModel(substitution_cost=1.5)
    for _ in range(50):
        pair = (_random_word(rng, "abc", 10), _random_word(rng, "abc", 10))
        alignment = align(pair, costs)
        assert alignment.weight == _sum_of_pairs_oracle(pair, costs)
        for row, word in zip(alignment.rows, pair, strict=True):
            assert row.replace("-", "") == word


def test_align_three_strings_match_oracle(rng: random.Random) -> None:
    """Test three-way alignment weights against dynamic programming."""
    for strings in [("ab", "b", "abb"), ("abc", "bc", "ac")]:
        assert align(strings).weight == _sum_of_pairs_oracle(strings, UNIT)
    for _ in range(5):
        strings = tuple(_random_word(rng, "ab", 4) for _ in range(3))
        alignment = align(strings)
        assert alignment.weight == _sum_of_pairs_oracle(strings, UNIT)
        assert len({len(row) for row in alignment.rows}) == 1


def test_cognate_pairs() -> None:
    """Test ranking cross pairs of two word lists."""
    first, second = ["kitten", "cat"], ["sitting", "cut"]
    expected = sorted(
        (_sum_of_pairs_oracle((a, b), UNIT), a, b) for a in first for b in second
    )
    ranked = cognate_pairs(first, second)
    assert ranked == [(a, b, weight) for weight, a, b in expected]
    assert ranked[0] == ("cat", "cut", 1.0)
    assert cognate_pairs(first, second, top_k=1) == [("cat", "cut", 1.0)]
    assert cognate_pairs(first, second, max_weight=3) == [
        ("cat", "cut", 1.0),
        ("kitten", "sitting", 3.0),
    ]


def test_cognate_pairs_rejects() -> None:
    """Test the cognate search guards."""
    with pytest.raises(InvalidConfigError):
        cognate_pairs(["a"], ["a"], top_k=0)
    with pytest.raises(InvalidConfigError):
        cognate_pairs([], ["a"])


def test_cascade_keeps_intermediates() -> None:
    """Test a three-stage cascade."""
    stages = [
        from_tuples({("a", "b"): 1}, TROPICAL),
        from_tuples({("b", "c"): 2}, TROPICAL),
        from_tuples({("c", "d"): 3, ("x", "y"): 1}, TROPICAL),
    ]
    cascade = cascade_with_intermediates(stages)
    assert cascade.arity == 4
    assert enumerate_tuples(cascade, 10) == tuple_set({("a", "b", "c", "d"): 6.0})


def test_cascade_apply() -> None:
    """Test running strings through a cyclic cascade."""
    stages = [
        closure(from_tuples({("a", "b"): 1}, TROPICAL)),
        closure(from_tuples({("b", "cc"): 1}, TROPICAL)),
    ]
    found = cascade_apply(stages, "aa")
    assert found is not None
    assert found.tapes == tape_tuple(("aa", "bb", "cccc"))
    assert found.weight == 4.0
    assert cascade_apply(stages, "ab") is None


def test_cascade_rejects() -> None:
    """Test the cascade guards."""
    stage = from_tuples({("a", "b"): 1}, TROPICAL)
    with pytest.raises(InvalidConfigError):
        cascade_with_intermediates([stage])
    with pytest.raises(ArityMismatchError):
        cascade_with_intermediates([stage, acceptor("a", TROPICAL)])
    with pytest.raises(SemiringMismatchError):
        cascade_with_intermediates([stage, from_tuples({("b", "c"): 1}, REAL)])


def test_cognate_examples() -> None:
    """Test identical lists and a clear nearest neighbour."""
    words = ["abc", "ba", "c"]
    ranked = cognate_pairs(words, words, top_k=3)
    assert sorted(ranked) == [("abc", "abc", 0.0), ("ba", "ba", 0.0), ("c", "c", 0.0)]
    assert cognate_pairs(["abc"], ["abd", "xyz"]) == [
        ("abc", "abd", 1.0),
        ("abc", "xyz", 3.0),
    ]


def test_cascade_of_identities() -> None:
    """Test that identity stages copy the input to every tape."""
    builder = MachineBuilder(2, TROPICAL)
    state = builder.add_state()
    builder.set_initial(state)
    builder.set_final(state)
    for symbol in "ab":
        builder.add_transition(state, state, (symbol, symbol))
    identity = builder.build()
    cascade = cascade_with_intermediates([identity, identity, identity])
    tuples = enumerate_tuples(cascade, 4)
    assert tape_tuple(("ab",) * 4) in tuples
    assert all(len(set(tapes)) == 1 for tapes in tuples)


def test_cascade_projection_matches_compose(
    rng: random.Random, random_machine: MachineFactory
) -> None:
    """Test that dropping the intermediate tape gives the plain composition."""
    for _ in range(100):
        first = random_machine(rng, arity=2, max_states=3, max_transitions=5)
        second = random_machine(rng, arity=2, max_states=3, max_transitions=5)
        cascade = cascade_with_intermediates([first, second])
        plain = compose(first, second)
        assert enumerate_tuples(
            coproject(cascade, [2]), cascade.num_states
        ) == enumerate_tuples(plain, max(plain.num_states, 1))
