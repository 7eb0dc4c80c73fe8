"""Delay-bounded auto-intersection of n-tape weighted machines.

The auto-intersection on tapes i and j keeps the tuples whose i-th and j-th
strings are equal. The construction walks the machine while remembering the
part of tape i (or tape j) that the other tape has not produced yet. Since the
result need not be rational, these leftovers are bounded by a delay limit;
whenever the limit cuts off a configuration that could still succeed the
result is reported as possibly incomplete.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
import logging
import math
from typing import NamedTuple

import networkx as nx

from .config import AutoIntersectionConfig, FlagPolicy
from .exceptions import TapeIndexError
from .machine import (
    Machine,
    MachineBuilder,
    Transition,
    WeightedTupleSet,
    accessible_states,
    coaccessible_states,
    restrict,
    state_graph,
    trim,
)

__all__ = [
    "AutoIntersectionConfig",
    "AutoIntersectionResult",
    "FlagPolicy",
    "LeftoverState",
    "auto_intersect",
    "default_delta_max",
    "equal_tapes_filter",
    "transition_delay",
]

_LOGGER = logging.getLogger(__name__)


class LeftoverState(NamedTuple):
    """A state of the construction: base state plus unmatched residuals."""

    base: int
    residual_i: tuple[str, ...]
    residual_j: tuple[str, ...]

    @property
    def delay(self) -> int:
        """Return how far tape i is ahead of tape j."""
        return len(self.residual_i) - len(self.residual_j)


@dataclass(frozen=True)
class AutoIntersectionResult:
    """Output of the auto-intersection.

    ``complete`` guarantees that ``machine`` denotes exactly the tuples of the
    input whose tapes i and j are equal. ``leftovers[q]`` is the construction
    state behind result state q.
    """

    machine: Machine
    complete: bool
    delta_max: int = 0
    discarded: int = 0
    leftovers: tuple[LeftoverState, ...] = ()


def _check_tapes(arity: int, i: int, j: int) -> None:
    if i == j:
        raise TapeIndexError(f"auto-intersection needs two different tapes, got {i}")
    for index in (i, j):
        if not 1 <= index <= arity:
            raise TapeIndexError(f"tape {index} is outside 1..{arity}")


def transition_delay(transition: Transition, i: int, j: int) -> int:
    """Return |label[i]| - |label[j]| for a normal-form label (1-based tapes).

    Raises:
        TapeIndexError: If i equals j or either is out of range
    """
    _check_tapes(len(transition.label), i, j)
    return bool(transition.label[i - 1]) - bool(transition.label[j - 1])


def default_delta_max(machine: Machine, i: int, j: int) -> int:
    """Return the default delay bound ``(|Q| + 1) * d_max``.

    d_max is the largest absolute transition delay (0 for a machine without
    transitions). No leftover on an accepting path can grow beyond this bound
    when every cycle of the trimmed machine has zero delay.
    """
    _check_tapes(machine.arity, i, j)
    d_max = max(
        (abs(transition_delay(transition, i, j)) for transition in machine.transitions),
        default=0,
    )
    return (machine.num_states + 1) * d_max


def _strip(
    left: tuple[str, ...], right: tuple[str, ...]
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Drop the longest common prefix of two residuals."""
    common = 0
    for a, b in zip(left, right, strict=False):
        if a != b:
            break
        common += 1
    return left[common:], right[common:]


def _emission_capacity(machine: Machine, position: int) -> list[float]:
    """Return, per state, the most symbols one tape can still emit before a final state.

    Unbounded capacity (an emitting cycle is reachable) is ``math.inf``.
    Assumes every state of machine is co-accessible.
    """
    condensed = nx.condensation(state_graph(machine))
    mapping: dict[int, int] = condensed.graph["mapping"]
    unbounded: set[int] = set()
    exits: dict[int, list[tuple[int, int]]] = {node: [] for node in condensed}
    for transition in machine.transitions:
        emits = 1 if transition.label[position] else 0
        source = mapping[transition.src]
        target = mapping[transition.dst]
        if source == target:
            if emits:
                unbounded.add(source)
        else:
            exits[source].append((target, emits))

    capacity: dict[int, float] = {}
    for node in reversed(list(nx.topological_sort(condensed))):
        if node in unbounded:
            capacity[node] = math.inf
            continue
        capacity[node] = max(
            (emits + capacity[target] for target, emits in exits[node]), default=0
        )
    return [capacity[mapping[state]] for state in machine.states]


def auto_intersect(
    machine: Machine, i: int, j: int, cfg: AutoIntersectionConfig | None = None
) -> AutoIntersectionResult:
    """Restrict the relation of machine to tuples whose tapes i and j are equal.

    The result keeps the arity and the original transition labels and weights.

    Args:
        machine: Input machine with normal-form labels
        i: First tape (1-based)
        j: Second tape (1-based), different from i
        cfg: Delay bound and flag policy

    Returns:
        The trimmed result machine and its completeness flag

    Raises:
        TapeIndexError: If i equals j or either is out of range
    """
    _check_tapes(machine.arity, i, j)
    cfg = cfg or AutoIntersectionConfig()
    bound = (
        cfg.delta_max
        if cfg.delta_max is not None
        else default_delta_max(machine, i, j)
    )
    source = trim(machine)
    live_only = cfg.flag_policy is FlagPolicy.LIVE_DISCARD
    capacity_i: list[float] = []
    capacity_j: list[float] = []
    if live_only and not source.is_empty():
        capacity_i = _emission_capacity(source, i - 1)
        capacity_j = _emission_capacity(source, j - 1)

    def matchable(leftover: LeftoverState) -> bool:
        if leftover.residual_i:
            return len(leftover.residual_i) <= capacity_j[leftover.base]
        if leftover.residual_j:
            return len(leftover.residual_j) <= capacity_i[leftover.base]
        return True

    builder = MachineBuilder(machine.arity, machine.semiring)
    index: dict[LeftoverState, int] = {}
    leftovers: list[LeftoverState] = []
    queue: deque[LeftoverState] = deque()

    def state_of(leftover: LeftoverState) -> int:
        if leftover not in index:
            index[leftover] = builder.add_state()
            leftovers.append(leftover)
            queue.append(leftover)
            if (
                not leftover.residual_i
                and not leftover.residual_j
                and leftover.base in source.final
            ):
                builder.set_final(index[leftover], source.final[leftover.base])
        return index[leftover]

    for state, weight in source.initial.items():
        builder.set_initial(state_of(LeftoverState(state, (), ())), weight)

    discarded = 0
    while queue:
        leftover = queue.popleft()
        origin = index[leftover]
        for transition in source.outgoing[leftover.base]:
            symbol_i = transition.label[i - 1]
            symbol_j = transition.label[j - 1]
            residual_i, residual_j = _strip(
                leftover.residual_i + ((symbol_i,) if symbol_i else ()),
                leftover.residual_j + ((symbol_j,) if symbol_j else ()),
            )
            if residual_i and residual_j:
                continue
            target = LeftoverState(transition.dst, residual_i, residual_j)
            if live_only and not matchable(target):
                continue
            if len(residual_i) + len(residual_j) > bound:
                discarded += 1
                continue
            builder.add_transition(
                origin, state_of(target), transition.label, transition.weight
            )

    built = builder.build()
    useful = sorted(accessible_states(built) & coaccessible_states(built))
    result = restrict(built, useful)
    complete = discarded == 0
    _LOGGER.debug(
        "Auto-intersection on tapes %s,%s: %s leftover states, %s kept, bound %s",
        i,
        j,
        len(leftovers),
        len(useful),
        bound,
    )
    if not complete:
        _LOGGER.info(
            "Auto-intersection on tapes %s,%s may be incomplete: %s configurations "
            "exceeded the delay bound %s",
            i,
            j,
            discarded,
            bound,
        )
    return AutoIntersectionResult(
        machine=result,
        complete=complete,
        delta_max=bound,
        discarded=discarded,
        leftovers=tuple(leftovers[state] for state in useful),
    )


def equal_tapes_filter(tuples: WeightedTupleSet, i: int, j: int) -> WeightedTupleSet:
    """Keep the entries whose i-th and j-th strings are equal (1-based tapes).

    This is the relation-level definition the construction is checked against.

    Raises:
        TapeIndexError: If an index is out of range
    """
    arity = len(next(iter(tuples), ()))
    for index in (i, j):
        if index < 1 or (tuples and index > arity):
            raise TapeIndexError(f"tape {index} is outside 1..{arity}")
    return {
        tapes: weight for tapes, weight in tuples.items() if tapes[i - 1] == tapes[j - 1]
    }
