"""Test shortest distance and best path."""

from __future__ import annotations

import random

import pytest

from ntwfsm.exceptions import NegativeWeightError, UnsupportedSemiringError
from ntwfsm.machine import (
    Label,
    Machine,
    MachineBuilder,
    empty_machine,
    enumerate_tuples,
    from_tuples,
)
from ntwfsm.rational_ops import closure, union
from ntwfsm.search import BestPath, best_path, shortest_distance
from ntwfsm.semiring import BOOLEAN, LOG, REAL, TROPICAL

from .conftest import MachineFactory


def test_shortest_distance_chain() -> None:
    """Test distances along a chain."""
    builder = MachineBuilder(1, TROPICAL)
    first, second, third, unreachable = builder.add_states(4)
    builder.set_initial(first)
    builder.set_final(third)
    builder.add_transition(first, second, ("a",), 3.0)
    builder.add_transition(second, third, ("b",), 4.0)
    builder.add_transition(unreachable, third, ("c",), 1.0)
    assert shortest_distance(builder.build()) == {
        0: 0.0,
        1: 3.0,
        2: 7.0,
        3: TROPICAL.zero,
    }


def test_shortest_distance_takes_cheaper_branch() -> None:
    """Test that the cheaper of two branches wins."""
    builder = MachineBuilder(1, TROPICAL)
    start, left, right, end = builder.add_states(4)
    builder.set_initial(start, 1.0)
    builder.set_final(end)
    builder.add_transition(start, left, ("a",), 5.0)
    builder.add_transition(start, right, ("b",), 2.0)
    builder.add_transition(left, end, ("c",), 0.0)
    builder.add_transition(right, end, ("c",), 2.0)
    distances = shortest_distance(builder.build())
    assert distances[end] == 5.0
    assert distances[left] == 6.0


def test_best_path_examples() -> None:
    """Test best paths on small machines."""
    assert best_path(empty_machine(2, TROPICAL)) is None

    machine = union(
        from_tuples({("ab", "x"): 2}, TROPICAL), from_tuples({("b", "y"): 5}, TROPICAL)
    )
    path = best_path(machine)
    assert path == BestPath(
        tapes=(("a", "b"), ("x",)), weight=2.0, labels=(("a", "x"), ("b", ""))
    )

    boolean = best_path(from_tuples({("ab",): True}, BOOLEAN))
    assert boolean is not None
    assert boolean.tapes == (("a", "b"),)
    assert boolean.weight is True


def test_best_path_epsilon_tuple() -> None:
    """Test that an accepting initial state gives the empty path."""
    path = best_path(closure(from_tuples({("a", "b"): 1}, TROPICAL)))
    assert path is not None
    assert path.tapes == ((), ())
    assert path.weight == 0.0


def test_best_path_tie_breaks() -> None:
    """Test that equal weights prefer the smaller state sequence."""
    builder = MachineBuilder(1, TROPICAL)
    start, long_mid, short_a, short_b, end = builder.add_states(5)
    builder.set_initial(start)
    builder.set_final(end)
    builder.add_transition(start, long_mid, ("x",), 1.0)
    builder.add_transition(long_mid, end, ("x",), 1.0)
    builder.add_transition(start, short_b, ("z",), 0.0)
    builder.add_transition(short_b, end, ("",), 2.0)
    builder.add_transition(start, short_a, ("y",), 2.0)
    builder.add_transition(short_a, end, ("",), 0.0)
    builder.add_transition(start, end, ("w",), 3.0)
    path = best_path(builder.build())
    assert path is not None
    assert path.weight == 2.0
    assert path.labels == (("x",), ("x",))

    builder = MachineBuilder(1, TROPICAL)
    start, first, second, end = builder.add_states(4)
    builder.set_initial(start)
    builder.set_final(end)
    builder.add_transition(start, second, ("a",), 1.0)
    builder.add_transition(start, first, ("b",), 1.0)
    builder.add_transition(first, end, ("c",), 1.0)
    builder.add_transition(second, end, ("d",), 1.0)
    path = best_path(builder.build())
    assert path is not None
    assert path.tapes == (("b", "c"),)


def test_best_path_prefers_smaller_states_over_fewer_hops() -> None:
    """Test that a longer path wins a weight tie through smaller states."""
    builder = MachineBuilder(1, TROPICAL)
    start, mid, end = builder.add_states(3)
    builder.set_initial(start)
    builder.set_final(end)
    builder.add_transition(start, mid, ("a",), 1.0)
    builder.add_transition(mid, end, ("a",), 1.0)
    builder.add_transition(start, end, ("b",), 2.0)
    path = best_path(builder.build())
    assert path is not None
    assert path.tapes == (("a", "a"),)


def test_best_path_zero_weight_cycle() -> None:
    """Test that a zero-weight cycle is never taken."""
    builder = MachineBuilder(1, TROPICAL)
    start, mid, end = builder.add_states(3)
    builder.set_initial(start)
    builder.set_final(end)
    builder.add_transition(start, mid, ("a",), 0.0)
    builder.add_transition(mid, start, ("b",), 0.0)
    builder.add_transition(start, end, ("c",), 1.0)
    builder.add_transition(mid, end, ("d",), 1.0)
    path = best_path(builder.build())
    assert path == BestPath(tapes=(("a", "d"),), weight=1.0, labels=(("a",), ("d",)))


@pytest.mark.parametrize("semiring", [REAL, LOG], ids=["real", "log"])
def test_search_rejects_semiring(semiring) -> None:
    """Test that search needs a selective semiring."""
    machine = from_tuples({("a",): 1}, semiring)
    with pytest.raises(UnsupportedSemiringError):
        best_path(machine)
    with pytest.raises(UnsupportedSemiringError):
        shortest_distance(machine)


def test_search_rejects_negative_weights() -> None:
    """Test that negative tropical weights are refused."""
    machine = from_tuples({("a",): -1}, TROPICAL)
    with pytest.raises(NegativeWeightError):
        best_path(machine)


def test_best_path_matches_enumeration(
    rng: random.Random, random_machine: MachineFactory
) -> None:
    """Test that the best weight is the minimum over all enumerated tuples."""
    for _ in range(200):
        machine = random_machine(rng, arity=rng.randint(1, 3))
        tuples = enumerate_tuples(machine, machine.num_states)
        path = best_path(machine)
        if not tuples:
            assert path is None
            continue
        assert path is not None
        assert path.weight == min(tuples.values())
        assert tuples[path.tapes] == path.weight
        assert len(path.labels) < machine.num_states


def _best_simple_path(machine: Machine) -> tuple[float, tuple[Label, ...]] | None:
    """Return the weight and labels of the optimal simple path with the smallest states."""
    found: list[tuple[float, tuple[int, ...], tuple[Label, ...]]] = []

    def walk(states: tuple[int, ...], labels: tuple[Label, ...], weight: float) -> None:
        state = states[-1]
        if state in machine.final:
            found.append((weight + machine.final[state], states, labels))
        for transition in machine.outgoing[state]:
            if transition.dst not in states:
                walk(
                    (*states, transition.dst),
                    (*labels, transition.label),
                    weight + transition.weight,
                )

    for state, weight in machine.initial.items():
        walk((state,), (), weight)
    if not found:
        return None
    weight, _, labels = min(found)
    return weight, labels


def test_best_path_is_smallest_optimal_simple_path(
    rng: random.Random, random_machine: MachineFactory
) -> None:
    """Test the tie-break against all simple paths of cyclic machines."""
    for _ in range(200):
        machine = random_machine(rng, arity=1, max_states=4, acyclic=False)
        expected = _best_simple_path(machine)
        path = best_path(machine)
        if expected is None:
            assert path is None
            continue
        assert path is not None
        assert (path.weight, path.labels) == expected
