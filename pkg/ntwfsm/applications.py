"""Applications assembled from library operations.

Multi-string alignment with an n-tape edit machine, cognate search over two
word lists, and transducer cascades that keep their intermediate strings.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations, product
import logging

from .auto_intersection import auto_intersect
from .config import AutoIntersectionConfig, EditCostModel, FlagPolicy, JoinSpec
from .const import EPSILON, GAP_CHAR
from .exceptions import ArityMismatchError, InvalidConfigError
from .join import compose, join
from .machine import (
    Component,
    Label,
    Machine,
    MachineBuilder,
    acceptor,
    ensure_compatible,
    trim,
)
from .rational_ops import coproject, cross_product, remove_epsilon_tuples
from .search import BestPath, best_path
from .semiring import TROPICAL

__all__ = [
    "Alignment",
    "EditCostModel",
    "align",
    "build_edit_machine",
    "cascade_apply",
    "cascade_with_intermediates",
    "cognate_pairs",
    "column_cost",
]

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Alignment:
    """An optimal alignment of n strings.

    ``rows`` shows each string with ``-`` at its gaps.
    """

    columns: tuple[Label, ...]
    rows: tuple[str, ...]
    weight: float


def column_cost(column: Label, costs: EditCostModel) -> float:
    """Return the sum-of-pairs cost of one alignment column."""
    total = 0.0
    for upper, lower in combinations(column, 2):
        if upper and lower:
            total += costs.match_cost if upper == lower else costs.substitution_cost
        elif upper:
            total += costs.deletion_cost
        elif lower:
            total += costs.insertion_cost
    return total


def build_edit_machine(
    alphabet: Iterable[str], n: int, costs: EditCostModel | None = None
) -> Machine:
    """Return the one-state tropical machine over every non-empty column of n tapes.

    Raises:
        ArityMismatchError: If n is below 2
        InvalidConfigError: If the alphabet is empty
    """
    if n < 2:
        raise ArityMismatchError(f"an edit machine needs at least 2 tapes, got {n}")
    symbols = sorted(set(alphabet))
    if not symbols:
        raise InvalidConfigError("edit machine alphabet must not be empty")
    costs = costs or EditCostModel()
    builder = MachineBuilder(n, TROPICAL)
    state = builder.add_state()
    builder.set_initial(state)
    builder.set_final(state)
    for column in product([EPSILON, *symbols], repeat=n):
        if any(column):
            builder.add_transition(state, state, column, column_cost(column, costs))
    return builder.build()


def _restrict_tape(machine: Machine, tape: int, string: str) -> Machine:
    """Keep the tuples of machine whose given tape (1-based) reads string."""
    crossed = cross_product(acceptor(string, machine.semiring), machine)
    result = auto_intersect(
        crossed, 1, 1 + tape, AutoIntersectionConfig(flag_policy=FlagPolicy.LIVE_DISCARD)
    )
    if not result.complete:
        _LOGGER.warning("Restricting tape %s to %r may have lost paths", tape, string)
    return trim(remove_epsilon_tuples(coproject(result.machine, [1])))


def align(strings: Sequence[str], costs: EditCostModel | None = None) -> Alignment:
    """Return an optimal sum-of-pairs alignment of two or more strings.

    Each string restricts one tape of the edit machine; the best path of the
    result is the alignment.

    Raises:
        ArityMismatchError: If fewer than two strings are given
    """
    if len(strings) < 2:
        raise ArityMismatchError(f"alignment needs at least 2 strings, got {len(strings)}")
    alphabet = {char for string in strings for char in string}
    if not alphabet:
        return Alignment(columns=(), rows=("",) * len(strings), weight=0.0)
    lattice = build_edit_machine(alphabet, len(strings), costs)
    for tape, string in enumerate(strings, start=1):
        lattice = _restrict_tape(lattice, tape, string)
    found = best_path(lattice)
    assert found is not None
    rows = tuple(
        "".join(column[position] or GAP_CHAR for column in found.labels)
        for position in range(len(strings))
    )
    _LOGGER.debug(
        "Aligned %s strings over %s lattice states: weight %s",
        len(strings),
        lattice.num_states,
        found.weight,
    )
    return Alignment(columns=found.labels, rows=rows, weight=float(found.weight))


def cognate_pairs(
    list1: Sequence[str],
    list2: Sequence[str],
    costs: EditCostModel | None = None,
    top_k: int = 10,
    max_weight: float | None = None,
) -> list[tuple[str, str, float]]:
    """Rank every cross pair of two word lists by alignment weight.

    Ties are broken by the words themselves.

    Args:
        list1: First word list
        list2: Second word list
        costs: Edit costs (unit costs by default)
        top_k: Number of pairs to return
        max_weight: Drop pairs weighing more than this

    Raises:
        InvalidConfigError: If top_k is below 1 or a list is empty
    """
    if top_k < 1:
        raise InvalidConfigError(f"top_k must be at least 1, got {top_k}")
    if not list1 or not list2:
        raise InvalidConfigError("cognate search needs two non-empty word lists")
    scored: dict[tuple[str, str], float] = {}
    for first, second in product(list1, list2):
        if (first, second) not in scored:
            scored[first, second] = align([first, second], costs).weight
    ranked = sorted(
        (weight, first, second)
        for (first, second), weight in scored.items()
        if max_weight is None or weight <= max_weight
    )
    return [(first, second, weight) for weight, first, second in ranked[:top_k]]


def cascade_with_intermediates(transducers: Sequence[Machine]) -> Machine:
    """Compose a cascade of transducers, keeping every intermediate string.

    Returns:
        A machine of arity k + 1 for k transducers, with tapes (input,
        intermediate_1, ..., output)

    Raises:
        InvalidConfigError: If fewer than two transducers are given
        ArityMismatchError: If a stage is not a transducer
        SemiringMismatchError: If the stages use different semirings
    """
    if len(transducers) < 2:
        raise InvalidConfigError("a cascade needs at least two transducers")
    for transducer in transducers:
        if transducer.arity != 2:
            raise ArityMismatchError(
                f"cascade stages must have arity 2, got arity {transducer.arity}"
            )
    ensure_compatible(*transducers)
    machine = compose(transducers[0], transducers[1], keep_intermediate=True)
    for stage in transducers[2:]:
        result = join(machine, JoinSpec(((machine.arity, 1),)), stage)
        if not result.complete:
            _LOGGER.warning(
                "Cascade stage %s may be incomplete", machine.arity
            )
        machine = result.machine
    return machine


def cascade_apply(
    transducers: Sequence[Machine], string: Component
) -> BestPath | None:
    """Run a string through a cascade and return the best row of tapes.

    A ``str`` input is read as one symbol per character. The row holds
    (input, intermediate_1, ..., output); None if the cascade rejects it.
    """
    cascade = cascade_with_intermediates(transducers)
    result = join(acceptor(string, cascade.semiring), JoinSpec(((1, 1),)), cascade)
    return best_path(result.machine)
