"""Common fixtures for the ntwfsm tests."""

from __future__ import annotations

from collections.abc import Callable, Mapping
import random

import pytest

from ntwfsm.machine import (
    Machine,
    MachineBuilder,
    WeightedTupleSet,
    from_tuples,
    tape_tuple,
)
from ntwfsm.rational_ops import closure, concat
from ntwfsm.semiring import BOOLEAN, LOG, REAL, TROPICAL, Semiring, Weight

type MachineFactory = Callable[..., Machine]

SEED = 20240601


def _random_weight(rng: random.Random, semiring: Semiring) -> Weight:
    if semiring is BOOLEAN:
        return True
    if semiring is REAL:
        return rng.choice([0.25, 0.5, 1.0, 2.0])
    if semiring is LOG:
        return float(rng.randint(0, 3))
    return float(rng.randint(0, 4))


def make_random_machine(
    rng: random.Random,
    *,
    arity: int = 2,
    max_states: int = 5,
    max_transitions: int = 8,
    alphabet: tuple[str, ...] = ("a", "b"),
    semiring: Semiring = TROPICAL,
    acyclic: bool = True,
    epsilon_tuples: bool = True,
) -> Machine:
    """Return a random machine; acyclic ones only have forward transitions."""
    num_states = rng.randint(1, max_states)
    builder = MachineBuilder(arity, semiring)
    builder.add_states(num_states)
    builder.set_initial(0, _random_weight(rng, semiring))
    if num_states > 1 and rng.random() < 0.2:
        builder.set_initial(1, _random_weight(rng, semiring))
    for state in rng.sample(range(num_states), rng.randint(1, num_states)):
        builder.set_final(state, _random_weight(rng, semiring))
    symbols = ["", *alphabet]
    for _ in range(rng.randint(0, max_transitions)):
        if acyclic:
            if num_states == 1:
                break
            src, dst = sorted(rng.sample(range(num_states), 2))
        else:
            src, dst = rng.randrange(num_states), rng.randrange(num_states)
        label = tuple(rng.choice(symbols) for _ in range(arity))
        if not any(label) and not epsilon_tuples:
            continue
        builder.add_transition(src, dst, label, _random_weight(rng, semiring))
    return builder.build()


@pytest.fixture
def rng() -> random.Random:
    """Return a seeded random generator."""
    return random.Random(SEED)


@pytest.fixture
def random_machine() -> MachineFactory:
    """Return the random machine factory."""
    return make_random_machine


@pytest.fixture
def pair_machine() -> Machine:
    """Return the tropical machine for {<a,b>: 3}."""
    return from_tuples({("a", "b"): 3}, TROPICAL)


@pytest.fixture
def opposite_delay_machine() -> Machine:
    """Return a machine for {<a^m b, a^n b>} with delay loops of opposite sign."""
    return concat(
        concat(
            concat(
                closure(from_tuples({("a", ""): 0}, TROPICAL)),
                from_tuples({("b", ""): 0}, TROPICAL),
            ),
            closure(from_tuples({("", "a"): 0}, TROPICAL)),
        ),
        from_tuples({("", "b"): 0}, TROPICAL),
    )


@pytest.fixture
def zero_delay_machine() -> Machine:
    """Return a machine for {<a^m b, a^m b>} whose only cycle has zero delay."""
    return concat(
        closure(from_tuples({("a", "a"): 0}, TROPICAL)),
        from_tuples({("b", "b"): 0}, TROPICAL),
    )


def tuple_set(entries: Mapping[tuple[str, ...], Weight]) -> WeightedTupleSet:
    """Return entries keyed by symbol tuples, one symbol per character."""
    return {tape_tuple(tapes): weight for tapes, weight in entries.items()}
