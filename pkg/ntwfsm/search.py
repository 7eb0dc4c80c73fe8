"""Shortest distance and best path over selective semirings."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable
from dataclasses import dataclass
import heapq
import logging

from .const import SEMIRING_TROPICAL
from .exceptions import NegativeWeightError, UnsupportedSemiringError
from .machine import Label, Machine, TapeTuple, Transition
from .semiring import Weight

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class BestPath:
    """An optimal accepting path.

    ``tapes`` holds the symbols each tape reads along ``labels``.
    """

    tapes: TapeTuple
    weight: Weight
    labels: tuple[Label, ...]


def _order(machine: Machine) -> Callable[[Weight], float]:
    """Return the natural order of the semiring, checking the search preconditions.

    Raises:
        UnsupportedSemiringError: If plus does not select a minimum
        NegativeWeightError: If a tropical transition weight is negative
    """
    semiring = machine.semiring
    if semiring.natural_order is None:
        raise UnsupportedSemiringError(
            f"search needs a boolean or tropical machine, got {semiring.name}"
        )
    if semiring.name == SEMIRING_TROPICAL:
        for transition in machine.transitions:
            if transition.weight < 0:
                raise NegativeWeightError(
                    f"transition {transition!r} has a negative weight"
                )
    return semiring.natural_order


def shortest_distance(machine: Machine) -> dict[int, Weight]:
    """Return the plus-sum over all paths from the initial states to each state.

    Initial weights seed the search. Unreachable states map to zero.

    Raises:
        UnsupportedSemiringError: If the semiring is not boolean or tropical
        NegativeWeightError: If a tropical transition weight is negative
    """
    order = _order(machine)
    semiring = machine.semiring
    settled: dict[int, Weight] = {}
    heap = [(order(weight), state, weight) for state, weight in machine.initial.items()]
    heapq.heapify(heap)
    while heap:
        _, state, weight = heapq.heappop(heap)
        if state in settled:
            continue
        settled[state] = weight
        for transition in machine.outgoing[state]:
            if transition.dst not in settled:
                reached = semiring.times(weight, transition.weight)
                heapq.heappush(heap, (order(reached), transition.dst, reached))
    return {state: settled.get(state, semiring.zero) for state in machine.states}


def _distances_to_final(
    machine: Machine, order: Callable[[Weight], float]
) -> dict[int, Weight]:
    """Return per state the best weight of a path to acceptance."""
    semiring = machine.semiring
    weights: dict[int, Weight] = {}
    heap = [(order(weight), state, weight) for state, weight in machine.final.items()]
    heapq.heapify(heap)
    while heap:
        _, state, weight = heapq.heappop(heap)
        if state in weights:
            continue
        weights[state] = weight
        for transition in machine.incoming[state]:
            if transition.src not in weights:
                reached = semiring.times(transition.weight, weight)
                heapq.heappush(heap, (order(reached), transition.src, reached))
    return weights


def best_path(machine: Machine) -> BestPath | None:
    """Return an optimal accepting path, or None if the machine accepts nothing.

    Among optimal simple paths the one with the lexicographically smallest
    state sequence wins.

    Raises:
        UnsupportedSemiringError: If the semiring is not boolean or tropical
        NegativeWeightError: If a tropical transition weight is negative
    """
    order = _order(machine)
    semiring = machine.semiring
    to_final = _distances_to_final(machine, order)
    starts = [
        (order(semiring.times(weight, to_final[state])), state)
        for state, weight in machine.initial.items()
        if state in to_final
    ]
    if not starts:
        return None
    best = min(starts)[0]
    state = min(state for key, state in starts if key == best)
    weight = semiring.times(machine.initial[state], to_final[state])

    # Optimal paths use only tight transitions and end where stopping is tight
    tight: dict[int, list[Transition]] = {
        source: [
            transition
            for transition in machine.outgoing[source]
            if transition.dst in to_final
            and order(semiring.times(transition.weight, to_final[transition.dst]))
            == order(to_final[source])
        ]
        for source in to_final
    }
    stops = {
        final
        for final, final_weight in machine.final.items()
        if order(final_weight) == order(to_final[final])
    }

    def completes(start: int, visited: set[int]) -> bool:
        seen = {start}
        queue = deque(seen)
        while queue:
            current = queue.popleft()
            if current in stops:
                return True
            for transition in tight[current]:
                if transition.dst not in seen and transition.dst not in visited:
                    seen.add(transition.dst)
                    queue.append(transition.dst)
        return False

    visited = {state}
    labels: list[Label] = []
    while state not in stops:
        step = min(
            (transition.dst, transition.label)
            for transition in tight[state]
            if transition.dst not in visited and completes(transition.dst, visited)
        )
        labels.append(step[1])
        state = step[0]
        visited.add(state)

    tapes = tuple(
        tuple(label[position] for label in labels if label[position])
        for position in range(machine.arity)
    )
    _LOGGER.debug("Best path has %s transitions, weight %s", len(labels), weight)
    return BestPath(tapes=tapes, weight=weight, labels=tuple(labels))
