"""Core n-tape weighted finite-state machine representation."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
import logging
from typing import NamedTuple

import networkx as nx

from .const import DEFAULT_PATH_BUDGET, EPSILON, EPSILON_TOKEN
from .exceptions import (
    ArityMismatchError,
    MachineValidationError,
    PathBudgetExceededError,
    SemiringMismatchError,
)
from .semiring import Semiring, Weight

_LOGGER = logging.getLogger(__name__)

type Label = tuple[str, ...]
type Tape = tuple[str, ...]
type TapeTuple = tuple[Tape, ...]
type WeightedTupleSet = dict[TapeTuple, Weight]
type Component = str | Sequence[str]


class Transition(NamedTuple):
    """A weighted transition ``src -> dst`` carrying an n-tuple label."""

    src: int
    dst: int
    label: Label
    weight: Weight


def is_epsilon_label(label: Label) -> bool:
    """Return whether every component of the label is epsilon."""
    return all(component == EPSILON for component in label)


def tape_of(component: Component) -> Tape:
    """Return the symbols of one tape component.

    A ``str`` is split into characters, any other sequence is taken as a list
    of tokens. Epsilon entries are dropped.
    """
    return tuple(symbol for symbol in component if symbol != EPSILON)


def tape_tuple(components: Sequence[Component]) -> TapeTuple:
    """Return the symbols of every tape.

    ``("ab", "c")`` gives ``(("a", "b"), ("c",))``.
    """
    return tuple(tape_of(component) for component in components)


@dataclass(frozen=True)
class Machine:
    """An n-WFSM (alphabet, states, semiring, transitions, initial, final).

    States are the dense integers ``0 .. num_states - 1``. Machines are never
    mutated after construction; every operation returns a new one.
    """

    arity: int
    semiring: Semiring
    num_states: int = 0
    transitions: tuple[Transition, ...] = ()
    initial: Mapping[int, Weight] = field(default_factory=dict)
    final: Mapping[int, Weight] = field(default_factory=dict)
    alphabet: frozenset[str] = frozenset()

    @property
    def states(self) -> range:
        """Return the state ids."""
        return range(self.num_states)

    @cached_property
    def outgoing(self) -> tuple[tuple[Transition, ...], ...]:
        """Return transitions grouped by source state."""
        grouped: list[list[Transition]] = [[] for _ in range(self.num_states)]
        for transition in self.transitions:
            grouped[transition.src].append(transition)
        return tuple(tuple(group) for group in grouped)

    @cached_property
    def incoming(self) -> tuple[tuple[Transition, ...], ...]:
        """Return transitions grouped by target state."""
        grouped: list[list[Transition]] = [[] for _ in range(self.num_states)]
        for transition in self.transitions:
            grouped[transition.dst].append(transition)
        return tuple(tuple(group) for group in grouped)

    def is_empty(self) -> bool:
        """Return whether the machine has no states."""
        return self.num_states == 0


@dataclass(frozen=True)
class Violation:
    """One breach of a machine invariant."""

    kind: str
    message: str

    def __str__(self) -> str:
        """Return the violation as ``kind: message``."""
        return f"{self.kind}: {self.message}"


class MachineBuilder:
    """Incremental construction of a normalized machine."""

    def __init__(self, arity: int, semiring: Semiring) -> None:
        """Initialize an empty builder."""
        if arity < 1:
            raise ArityMismatchError(f"arity must be at least 1, got {arity}")
        self.arity = arity
        self.semiring = semiring
        self._num_states = 0
        self._transitions: list[Transition] = []
        self._initial: dict[int, Weight] = {}
        self._final: dict[int, Weight] = {}

    @property
    def num_states(self) -> int:
        """Return the number of states added so far."""
        return self._num_states

    def add_state(self) -> int:
        """Add a state and return its id."""
        self._num_states += 1
        return self._num_states - 1

    def add_states(self, count: int) -> range:
        """Add several states and return their ids."""
        start = self._num_states
        self._num_states += count
        return range(start, self._num_states)

    def set_initial(self, state: int, weight: Weight | None = None) -> None:
        """Set the initial weight of a state (one by default)."""
        self._check_state(state)
        self._initial[state] = self.semiring.one if weight is None else weight

    def set_final(self, state: int, weight: Weight | None = None) -> None:
        """Set the final weight of a state (one by default)."""
        self._check_state(state)
        self._final[state] = self.semiring.one if weight is None else weight

    def add_transition(
        self, src: int, dst: int, label: Sequence[str], weight: Weight | None = None
    ) -> None:
        """Add a normal-form transition.

        Each label component is a single (atomic) symbol or the empty string
        for epsilon.
        """
        self._check_state(src)
        self._check_state(dst)
        if len(label) != self.arity:
            raise ArityMismatchError(
                f"label {tuple(label)!r} has {len(label)} tapes, expected {self.arity}"
            )
        weight = self.semiring.one if weight is None else weight
        self._transitions.append(Transition(src, dst, tuple(label), weight))

    def add_path(
        self,
        src: int,
        dst: int,
        components: Sequence[Component],
        weight: Weight | None = None,
    ) -> None:
        """Add a transition whose components may span several symbols.

        A ``str`` component is split into characters, any other sequence is
        taken as a list of tokens. The label is expanded into a chain of
        normal-form transitions; the first one carries the weight.
        """
        if len(components) != self.arity:
            raise ArityMismatchError(
                f"label has {len(components)} tapes, expected {self.arity}"
            )
        tapes = tape_tuple(components)
        length = max((len(tape) for tape in tapes), default=0)
        if length <= 1:
            label = tuple(tape[0] if tape else EPSILON for tape in tapes)
            self.add_transition(src, dst, label, weight)
            return
        previous = src
        for step in range(length):
            target = dst if step == length - 1 else self.add_state()
            label = tuple(tape[step] if step < len(tape) else EPSILON for tape in tapes)
            self.add_transition(previous, target, label, weight if step == 0 else None)
            previous = target

    def build(self) -> Machine:
        """Return the normalized machine.

        Zero-weight transitions and zero initial/final entries are dropped and
        transitions are sorted.
        """
        semiring = self.semiring
        transitions = sorted(
            transition
            for transition in self._transitions
            if not semiring.is_zero(transition.weight)
        )
        alphabet = frozenset(
            symbol
            for transition in transitions
            for symbol in transition.label
            if symbol != EPSILON
        )
        return Machine(
            arity=self.arity,
            semiring=semiring,
            num_states=self._num_states,
            transitions=tuple(transitions),
            initial={
                state: weight
                for state, weight in sorted(self._initial.items())
                if not semiring.is_zero(weight)
            },
            final={
                state: weight
                for state, weight in sorted(self._final.items())
                if not semiring.is_zero(weight)
            },
            alphabet=alphabet,
        )

    def _check_state(self, state: int) -> None:
        if not 0 <= state < self._num_states:
            raise MachineValidationError(
                [Violation("missing-state", f"state {state} does not exist")]
            )


def empty_machine(arity: int, semiring: Semiring) -> Machine:
    """Return the machine with no states, denoting the empty relation."""
    return MachineBuilder(arity, semiring).build()


def from_tuples(
    entries: Mapping[tuple[Component, ...], Weight | int]
    | Iterable[tuple[tuple[Component, ...], Weight | int]],
    semiring: Semiring,
    arity: int | None = None,
) -> Machine:
    """Build a machine denoting a finite weighted relation.

    Args:
        entries: Mapping (or pairs) from tuples of tape strings to weights;
            ``str`` components are split into characters
        semiring: Weight semiring of the result
        arity: Tape count, required only when entries is empty

    Returns:
        A machine with one path per entry from a shared initial state
    """
    items = list(entries.items() if isinstance(entries, Mapping) else entries)
    if arity is None:
        if not items:
            raise ArityMismatchError("arity is required for an empty tuple set")
        arity = len(items[0][0])
    builder = MachineBuilder(arity, semiring)
    if not items:
        return builder.build()
    start = builder.add_state()
    builder.set_initial(start)
    for tapes, weight in items:
        end = builder.add_state()
        builder.set_final(end)
        builder.add_path(start, end, tapes, semiring.coerce(weight))
    return builder.build()


def acceptor(
    string: Component, semiring: Semiring, weight: Weight | None = None
) -> Machine:
    """Return a one-tape machine accepting exactly one string."""
    return from_tuples(
        [((string,), semiring.one if weight is None else weight)], semiring
    )


def ensure_compatible(*machines: Machine, same_arity: bool = True) -> None:
    """Check that operands share a semiring (and arity).

    Raises:
        SemiringMismatchError: If the semirings differ
        ArityMismatchError: If same_arity is set and the arities differ
    """
    first = machines[0]
    for other in machines[1:]:
        if other.semiring != first.semiring:
            raise SemiringMismatchError(
                f"semiring mismatch: {first.semiring.name} vs {other.semiring.name}"
            )
        if same_arity and other.arity != first.arity:
            raise ArityMismatchError(
                f"arity mismatch: {first.arity} vs {other.arity}"
            )


def validate(machine: Machine) -> list[Violation]:
    """Report every breach of the machine invariants.

    Returns:
        An empty list for a well-formed machine, one violation per breach
        otherwise
    """
    violations: list[Violation] = []
    semiring = machine.semiring
    if machine.arity < 1:
        violations.append(Violation("arity", f"arity {machine.arity} is below 1"))
    for transition in machine.transitions:
        for state in (transition.src, transition.dst):
            if not 0 <= state < machine.num_states:
                violations.append(
                    Violation(
                        "missing-state",
                        f"transition {transition!r} references missing state {state}",
                    )
                )
        if len(transition.label) != machine.arity:
            violations.append(
                Violation(
                    "arity",
                    f"label {transition.label!r} has {len(transition.label)} tapes "
                    f"in an arity-{machine.arity} machine",
                )
            )
        for symbol in transition.label:
            if symbol == EPSILON:
                continue
            if symbol == EPSILON_TOKEN or any(char.isspace() for char in symbol):
                violations.append(Violation("symbol", f"invalid symbol {symbol!r}"))
            elif symbol not in machine.alphabet:
                violations.append(
                    Violation("alphabet", f"symbol {symbol!r} is not in the alphabet")
                )
        if semiring.is_zero(transition.weight):
            violations.append(
                Violation("zero-weight", f"transition {transition!r} has zero weight")
            )
    for kind, weights in (("initial", machine.initial), ("final", machine.final)):
        for state, weight in weights.items():
            if not 0 <= state < machine.num_states:
                violations.append(
                    Violation("missing-state", f"{kind} weight on missing state {state}")
                )
            if semiring.is_zero(weight):
                violations.append(
                    Violation("zero-weight", f"{kind} weight of state {state} is zero")
                )
    return violations


def canonical(machine: Machine) -> Machine:
    """Return the machine with its transitions and weight maps sorted."""
    return Machine(
        arity=machine.arity,
        semiring=machine.semiring,
        num_states=machine.num_states,
        transitions=tuple(sorted(machine.transitions)),
        initial=dict(sorted(machine.initial.items())),
        final=dict(sorted(machine.final.items())),
        alphabet=machine.alphabet,
    )


def restrict(machine: Machine, keep: Iterable[int]) -> Machine:
    """Return the sub-machine on the given states, renumbered densely."""
    mapping = {state: index for index, state in enumerate(sorted(set(keep)))}
    builder = MachineBuilder(machine.arity, machine.semiring)
    builder.add_states(len(mapping))
    for state, weight in machine.initial.items():
        if state in mapping:
            builder.set_initial(mapping[state], weight)
    for state, weight in machine.final.items():
        if state in mapping:
            builder.set_final(mapping[state], weight)
    for transition in machine.transitions:
        if transition.src in mapping and transition.dst in mapping:
            builder.add_transition(
                mapping[transition.src],
                mapping[transition.dst],
                transition.label,
                transition.weight,
            )
    return builder.build()


def accessible_states(machine: Machine) -> set[int]:
    """Return the states reachable from an initial state."""
    seen = set(machine.initial)
    queue = deque(seen)
    while queue:
        for transition in machine.outgoing[queue.popleft()]:
            if transition.dst not in seen:
                seen.add(transition.dst)
                queue.append(transition.dst)
    return seen


def coaccessible_states(machine: Machine) -> set[int]:
    """Return the states from which a final state is reachable."""
    seen = set(machine.final)
    queue = deque(seen)
    while queue:
        for transition in machine.incoming[queue.popleft()]:
            if transition.src not in seen:
                seen.add(transition.src)
                queue.append(transition.src)
    return seen


def trim(machine: Machine) -> Machine:
    """Remove states that are not on any initial-to-final path.

    A machine without a successful path becomes the empty machine.
    """
    useful = accessible_states(machine) & coaccessible_states(machine)
    if len(useful) == machine.num_states:
        return machine
    _LOGGER.debug(
        "Trimmed %s of %s states", machine.num_states - len(useful), machine.num_states
    )
    return restrict(machine, useful)


def state_graph(machine: Machine, epsilon_only: bool = False) -> nx.DiGraph:
    """Return the transition graph over state ids.

    With epsilon_only set, only all-epsilon transitions become edges.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(machine.states)
    graph.add_edges_from(
        (transition.src, transition.dst)
        for transition in machine.transitions
        if not epsilon_only or is_epsilon_label(transition.label)
    )
    return graph


def is_acyclic(machine: Machine) -> bool:
    """Return whether the transition graph has no cycle."""
    return nx.is_directed_acyclic_graph(state_graph(machine))


def accepts_epsilon_tuple(machine: Machine) -> bool:
    """Return whether an all-epsilon path leads from an initial to a final state."""
    seen = set(machine.initial)
    queue = deque(seen)
    while queue:
        state = queue.popleft()
        if state in machine.final:
            return True
        for transition in machine.outgoing[state]:
            if is_epsilon_label(transition.label) and transition.dst not in seen:
                seen.add(transition.dst)
                queue.append(transition.dst)
    return False


def enumerate_tuples(
    machine: Machine, hop_limit: int, budget: int = DEFAULT_PATH_BUDGET
) -> WeightedTupleSet:
    """Enumerate the relation readable by paths of at most hop_limit transitions.

    Paths reaching the same state with the same tape contents after the same
    number of hops are merged with plus, so the work is bounded by the number
    of distinct configurations rather than by the number of paths.

    Args:
        machine: Machine to enumerate
        hop_limit: Maximum path length in transitions
        budget: Maximum number of configurations explored

    Returns:
        Map from tape tuples (one symbol tuple per tape) to their aggregated
        weights, zero entries absent

    Raises:
        PathBudgetExceededError: If more than budget configurations are needed
    """
    semiring = machine.semiring
    blank: TapeTuple = ((),) * machine.arity
    layer: dict[tuple[int, TapeTuple], Weight] = {
        (state, blank): weight for state, weight in machine.initial.items()
    }
    explored = len(layer)
    result: WeightedTupleSet = {}
    for hop in range(hop_limit + 1):
        for (state, tapes), weight in layer.items():
            if state in machine.final:
                result[tapes] = semiring.plus(
                    result.get(tapes, semiring.zero),
                    semiring.times(weight, machine.final[state]),
                )
        if hop == hop_limit or not layer:
            break
        following: dict[tuple[int, TapeTuple], Weight] = {}
        for (state, tapes), weight in layer.items():
            for transition in machine.outgoing[state]:
                key = (
                    transition.dst,
                    tuple(
                        tape + (symbol,) if symbol else tape
                        for tape, symbol in zip(tapes, transition.label, strict=True)
                    ),
                )
                following[key] = semiring.plus(
                    following.get(key, semiring.zero),
                    semiring.times(weight, transition.weight),
                )
        explored += len(following)
        if explored > budget:
            raise PathBudgetExceededError(
                f"enumeration needs more than {budget} configurations; "
                "lower the hop limit"
            )
        layer = following
    return {tapes: weight for tapes, weight in result.items() if not semiring.is_zero(weight)}


def tuple_weight(
    machine: Machine, tapes: Sequence[Component], hop_limit: int
) -> Weight:
    """Return the weight of one tuple, summed over paths of at most hop_limit hops.

    Each tape is a symbol sequence; a ``str`` is read as one symbol per
    character. The result is exact when the machine has no epsilon-tuple
    cycle and ``hop_limit >= num_states * (1 + total tuple length)``.

    Raises:
        ArityMismatchError: If the tuple has the wrong number of tapes
    """
    if len(tapes) != machine.arity:
        raise ArityMismatchError(
            f"tuple has {len(tapes)} tapes, machine has {machine.arity}"
        )
    semiring = machine.semiring
    target = tape_tuple(tapes)
    ends = tuple(len(tape) for tape in target)
    start = (0,) * machine.arity
    layer: dict[tuple[int, tuple[int, ...]], Weight] = {
        (state, start): weight for state, weight in machine.initial.items()
    }
    total = semiring.zero
    for hop in range(hop_limit + 1):
        for (state, positions), weight in layer.items():
            if positions == ends and state in machine.final:
                total = semiring.plus(
                    total, semiring.times(weight, machine.final[state])
                )
        if hop == hop_limit or not layer:
            break
        following: dict[tuple[int, tuple[int, ...]], Weight] = {}
        for (state, positions), weight in layer.items():
            for transition in machine.outgoing[state]:
                advanced = _advance(target, positions, transition.label)
                if advanced is None:
                    continue
                key = (transition.dst, advanced)
                following[key] = semiring.plus(
                    following.get(key, semiring.zero),
                    semiring.times(weight, transition.weight),
                )
        layer = following
    return total


def _advance(
    target: TapeTuple, positions: tuple[int, ...], label: Label
) -> tuple[int, ...] | None:
    """Consume label from target at positions, or None on mismatch."""
    advanced = []
    for tape, position, symbol in zip(target, positions, label, strict=True):
        if not symbol:
            advanced.append(position)
        elif position < len(tape) and tape[position] == symbol:
            advanced.append(position + 1)
        else:
            return None
    return tuple(advanced)
