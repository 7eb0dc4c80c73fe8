"""Rational operations on n-tape weighted machines."""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
import logging

import networkx as nx

from .const import EPSILON, SEMIRING_BOOLEAN, SEMIRING_TROPICAL
from .exceptions import DivergentEpsilonError, TapeIndexError
from .machine import (
    Label,
    Machine,
    MachineBuilder,
    accepts_epsilon_tuple,
    ensure_compatible,
    is_epsilon_label,
    state_graph,
    trim,
)
from .semiring import Weight

_LOGGER = logging.getLogger(__name__)

type TapeIndexList = Sequence[int]


def _copy_into(
    builder: MachineBuilder,
    machine: Machine,
    offset: int,
    before: int = 0,
    after: int = 0,
) -> None:
    """Copy transitions of machine into builder, padding labels with epsilon."""
    pad_before = (EPSILON,) * before
    pad_after = (EPSILON,) * after
    for transition in machine.transitions:
        builder.add_transition(
            transition.src + offset,
            transition.dst + offset,
            pad_before + transition.label + pad_after,
            transition.weight,
        )


def union(a: Machine, b: Machine) -> Machine:
    """Return a machine denoting R(a) ∪ R(b) (disjoint state union).

    Raises:
        ArityMismatchError: If the arities differ
        SemiringMismatchError: If the semirings differ
    """
    ensure_compatible(a, b)
    builder = MachineBuilder(a.arity, a.semiring)
    builder.add_states(a.num_states + b.num_states)
    offset = a.num_states
    _copy_into(builder, a, 0)
    _copy_into(builder, b, offset)
    for state, weight in a.initial.items():
        builder.set_initial(state, weight)
    for state, weight in b.initial.items():
        builder.set_initial(state + offset, weight)
    for state, weight in a.final.items():
        builder.set_final(state, weight)
    for state, weight in b.final.items():
        builder.set_final(state + offset, weight)
    return builder.build()


def concat(a: Machine, b: Machine) -> Machine:
    """Return a machine denoting the tape-wise concatenation of R(a) and R(b).

    Final states of a are bridged to initial states of b by epsilon-tuple
    transitions weighted final(q) times initial(q').

    Raises:
        ArityMismatchError: If the arities differ
        SemiringMismatchError: If the semirings differ
    """
    ensure_compatible(a, b)
    semiring = a.semiring
    builder = MachineBuilder(a.arity, semiring)
    builder.add_states(a.num_states + b.num_states)
    offset = a.num_states
    _copy_into(builder, a, 0)
    _copy_into(builder, b, offset)
    bridge = (EPSILON,) * a.arity
    for source, final_weight in a.final.items():
        for target, initial_weight in b.initial.items():
            builder.add_transition(
                source,
                target + offset,
                bridge,
                semiring.times(final_weight, initial_weight),
            )
    for state, weight in a.initial.items():
        builder.set_initial(state, weight)
    for state, weight in b.final.items():
        builder.set_final(state + offset, weight)
    return builder.build()


def closure(a: Machine, plus: bool = False) -> Machine:
    """Return the Kleene star (or plus) of R(a) under tape-wise concatenation.

    Args:
        a: Operand machine
        plus: Return the Kleene plus instead (at least one iteration)

    Raises:
        DivergentEpsilonError: If a accepts the all-epsilon tuple and the
            infinite sum over its repetitions is not guaranteed to converge
    """
    semiring = a.semiring
    if accepts_epsilon_tuple(a):
        if not semiring.is_idempotent:
            raise DivergentEpsilonError(
                f"closure over the {semiring.name} semiring of a machine that "
                "accepts the all-epsilon tuple would need an infinite sum"
            )
        if semiring.name == SEMIRING_TROPICAL and _has_negative_weight(a):
            raise DivergentEpsilonError(
                "closure of a machine accepting the all-epsilon tuple with "
                "negative tropical weights diverges"
            )
    if plus:
        return concat(a, closure(a))

    builder = MachineBuilder(a.arity, semiring)
    hub = builder.add_state()
    builder.add_states(a.num_states)
    builder.set_initial(hub)
    builder.set_final(hub)
    _copy_into(builder, a, 1)
    bridge = (EPSILON,) * a.arity
    for state, weight in a.initial.items():
        builder.add_transition(hub, state + 1, bridge, weight)
    for state, weight in a.final.items():
        builder.add_transition(state + 1, hub, bridge, weight)
    return builder.build()


def _has_negative_weight(machine: Machine) -> bool:
    weights = [transition.weight for transition in machine.transitions]
    weights.extend(machine.initial.values())
    weights.extend(machine.final.values())
    return any(weight < 0 for weight in weights)


def cross_product(a: Machine, b: Machine) -> Machine:
    """Return a machine of arity n_a + n_b pairing every tuple of a with one of b.

    Built as the concatenation of a padded with epsilon on b's tapes and b
    padded with epsilon on a's tapes, so each pair of paths yields exactly one
    path.

    Raises:
        SemiringMismatchError: If the semirings differ
    """
    ensure_compatible(a, b, same_arity=False)
    return concat(_pad(a, after=b.arity), _pad(b, before=a.arity))


def _pad(machine: Machine, before: int = 0, after: int = 0) -> Machine:
    builder = MachineBuilder(machine.arity + before + after, machine.semiring)
    builder.add_states(machine.num_states)
    _copy_into(builder, machine, 0, before, after)
    for state, weight in machine.initial.items():
        builder.set_initial(state, weight)
    for state, weight in machine.final.items():
        builder.set_final(state, weight)
    return builder.build()


def _check_indices(machine: Machine, indices: TapeIndexList) -> None:
    if not indices:
        raise TapeIndexError("tape index list must not be empty")
    for index in indices:
        if not 1 <= index <= machine.arity:
            raise TapeIndexError(
                f"tape {index} is outside 1..{machine.arity}"
            )


def project(a: Machine, keep: TapeIndexList) -> Machine:
    """Keep (and reorder or repeat) the tapes listed in keep, 1-based.

    Paths whose labels collide after projection stay distinct; their weights
    are aggregated when the relation is evaluated.

    Raises:
        TapeIndexError: If an index is out of range or the list is empty
    """
    _check_indices(a, keep)
    positions = [index - 1 for index in keep]
    builder = MachineBuilder(len(positions), a.semiring)
    builder.add_states(a.num_states)
    for transition in a.transitions:
        builder.add_transition(
            transition.src,
            transition.dst,
            tuple(transition.label[position] for position in positions),
            transition.weight,
        )
    for state, weight in a.initial.items():
        builder.set_initial(state, weight)
    for state, weight in a.final.items():
        builder.set_final(state, weight)
    return builder.build()


def coproject(a: Machine, remove: TapeIndexList) -> Machine:
    """Remove the listed tapes, keeping the others in ascending order.

    Raises:
        TapeIndexError: If an index is out of range or every tape is removed
    """
    _check_indices(a, remove)
    removed = set(remove)
    if len(removed) >= a.arity:
        raise TapeIndexError(f"cannot remove all {a.arity} tapes")
    return project(a, [index for index in range(1, a.arity + 1) if index not in removed])


def remove_epsilon_tuples(a: Machine) -> Machine:
    """Fold all-epsilon transitions into their successors and final weights.

    Epsilon-tuple cycles are accepted for the boolean semiring and for the
    tropical semiring when no such cycle has negative weight.

    Raises:
        DivergentEpsilonError: If an epsilon-tuple cycle would need a
            non-converging infinite sum
    """
    semiring = a.semiring
    epsilon_out: list[list[tuple[int, Weight]]] = [[] for _ in a.states]
    found = False
    for transition in a.transitions:
        if is_epsilon_label(transition.label):
            epsilon_out[transition.src].append((transition.dst, transition.weight))
            found = True
    if not found:
        return a

    if semiring.name == SEMIRING_BOOLEAN:
        distances = _boolean_closure(a, epsilon_out)
    elif semiring.name == SEMIRING_TROPICAL:
        distances = _tropical_closure(a, epsilon_out)
    else:
        distances = _acyclic_closure(a, epsilon_out)

    merged: dict[tuple[int, int, Label], Weight] = {}
    finals: dict[int, Weight] = {}
    for state in a.states:
        for reached, distance in distances[state].items():
            for transition in a.outgoing[reached]:
                if is_epsilon_label(transition.label):
                    continue
                key = (state, transition.dst, transition.label)
                merged[key] = semiring.plus(
                    merged.get(key, semiring.zero),
                    semiring.times(distance, transition.weight),
                )
            if reached in a.final:
                finals[state] = semiring.plus(
                    finals.get(state, semiring.zero),
                    semiring.times(distance, a.final[reached]),
                )

    builder = MachineBuilder(a.arity, semiring)
    builder.add_states(a.num_states)
    for (source, target, label), weight in merged.items():
        builder.add_transition(source, target, label, weight)
    for state, weight in a.initial.items():
        builder.set_initial(state, weight)
    for state, weight in finals.items():
        builder.set_final(state, weight)
    result = trim(builder.build())
    _LOGGER.debug(
        "Removed epsilon tuples: %s -> %s transitions",
        len(a.transitions),
        len(result.transitions),
    )
    return result


def _boolean_closure(
    a: Machine, epsilon_out: list[list[tuple[int, Weight]]]
) -> list[dict[int, Weight]]:
    distances: list[dict[int, Weight]] = []
    for state in a.states:
        reached: dict[int, Weight] = {state: True}
        queue = deque([state])
        while queue:
            for target, _ in epsilon_out[queue.popleft()]:
                if target not in reached:
                    reached[target] = True
                    queue.append(target)
        distances.append(reached)
    return distances


def _tropical_closure(
    a: Machine, epsilon_out: list[list[tuple[int, Weight]]]
) -> list[dict[int, Weight]]:
    """Single-source epsilon distances by label correction (Bellman-Ford)."""
    distances: list[dict[int, Weight]] = []
    for state in a.states:
        best: dict[int, Weight] = {state: 0.0}
        queue = deque([state])
        relaxations = 0
        limit = a.num_states * max(1, len(a.transitions))
        while queue:
            current = queue.popleft()
            for target, weight in epsilon_out[current]:
                candidate = best[current] + weight
                if candidate < best.get(target, float("inf")):
                    best[target] = candidate
                    queue.append(target)
                    relaxations += 1
                    if relaxations > limit or best[state] < 0:
                        raise DivergentEpsilonError(
                            f"negative-weight epsilon-tuple cycle reachable from state {state}"
                        )
        distances.append(best)
    return distances


def _acyclic_closure(
    a: Machine, epsilon_out: list[list[tuple[int, Weight]]]
) -> list[dict[int, Weight]]:
    semiring = a.semiring
    graph = state_graph(a, epsilon_only=True)
    try:
        order = list(reversed(list(nx.topological_sort(graph))))
    except nx.NetworkXUnfeasible as err:
        cycle = [source for source, _ in nx.find_cycle(graph)]
        raise DivergentEpsilonError(
            f"epsilon-tuple cycle through states {cycle} has no finite "
            f"sum in the {semiring.name} semiring"
        ) from err

    # successors come before the states that reach them
    distances: dict[int, dict[int, Weight]] = {}
    for state in order:
        total: dict[int, Weight] = {state: semiring.one}
        for target, weight in epsilon_out[state]:
            for reached, distance in distances[target].items():
                total[reached] = semiring.plus(
                    total.get(reached, semiring.zero), semiring.times(weight, distance)
                )
        distances[state] = total
    return [distances[state] for state in a.states]
