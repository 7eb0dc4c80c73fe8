"""Join of two n-tape machines on pairs of tapes.

The join generalizes transducer composition and acceptor intersection. It is
implemented twice: through cross-product, auto-intersection and
complementary projection, and as a single product construction.
"""

from __future__ import annotations

from collections import deque
import logging

from .auto_intersection import AutoIntersectionResult, auto_intersect
from .config import AutoIntersectionConfig, FlagPolicy, JoinSpec
from .const import EPSILON
from .exceptions import ArityMismatchError, JoinGuardError
from .machine import Label, Machine, MachineBuilder, ensure_compatible, trim
from .rational_ops import coproject, cross_product, remove_epsilon_tuples
from .semiring import Weight

__all__ = [
    "JoinSpec",
    "compose",
    "intersect",
    "join",
    "join_direct",
    "join_via_sigma",
]

_LOGGER = logging.getLogger(__name__)


def join_via_sigma(
    a: Machine,
    spec: JoinSpec,
    b: Machine,
    cfg: AutoIntersectionConfig | None = None,
) -> AutoIntersectionResult:
    """Join a and b as cross-product, auto-intersections, then projection.

    The pairs are auto-intersected in the listed order and their completeness
    flags are combined. The second copy of every matched tape is removed, so
    the result has arity ``n_a + n_b - r``.

    Raises:
        SemiringMismatchError: If the semirings differ
        TapeIndexError: If a tape pair does not fit the arities
    """
    ensure_compatible(a, b, same_arity=False)
    spec.check(a.arity, b.arity)
    current = cross_product(a, b)
    complete = True
    discarded = 0
    bound = 0
    for i, j in spec.pairs:
        step = auto_intersect(current, i, a.arity + j, cfg)
        complete = complete and step.complete
        discarded += step.discarded
        bound = max(bound, step.delta_max)
        current = step.machine
    projected = coproject(current, [a.arity + j for _, j in spec.pairs])
    machine = trim(remove_epsilon_tuples(projected))
    _LOGGER.debug(
        "Join via auto-intersection: %s states, %s transitions, complete=%s",
        machine.num_states,
        len(machine.transitions),
        complete,
    )
    return AutoIntersectionResult(
        machine=machine, complete=complete, delta_max=bound, discarded=discarded
    )


def _matched(label: Label, positions: list[int]) -> Label:
    return tuple(label[position] for position in positions)


def join_direct(a: Machine, spec: JoinSpec, b: Machine) -> Machine:
    """Join a and b with one product construction over state pairs.

    Transitions synchronize when they carry the same symbols on all matched
    tapes; a transition with epsilon on every matched tape moves alone while
    the other machine stays.

    Raises:
        JoinGuardError: If both operands move alone on matched tapes in a
            non-idempotent semiring, or a multi-pair transition mixes symbols
            and epsilon on matched tapes; use join_via_sigma then
        SemiringMismatchError: If the semirings differ
        TapeIndexError: If a tape pair does not fit the arities
    """
    ensure_compatible(a, b, same_arity=False)
    spec.check(a.arity, b.arity)
    semiring = a.semiring
    positions_a = [i - 1 for i, _ in spec.pairs]
    positions_b = [j - 1 for _, j in spec.pairs]
    matched_b = set(positions_b)
    keep_b = [position for position in range(b.arity) if position not in matched_b]

    silent = {"a": False, "b": False}
    for side, machine, positions in (("a", a, positions_a), ("b", b, positions_b)):
        for transition in machine.transitions:
            key = _matched(transition.label, positions)
            empty = sum(1 for symbol in key if symbol == EPSILON)
            if empty == len(key):
                silent[side] = True
            elif empty:
                raise JoinGuardError(
                    f"transition {transition!r} of operand {side} mixes symbols and "
                    "epsilon on matched tapes; use join_via_sigma"
                )
    if silent["a"] and silent["b"] and not semiring.is_idempotent:
        raise JoinGuardError(
            "both operands have epsilon on matched tapes in the "
            f"{semiring.name} semiring; use join_via_sigma"
        )

    synchronized: dict[tuple[int, Label], list] = {}
    for transition in b.transitions:
        key = _matched(transition.label, positions_b)
        if key[0] != EPSILON:
            synchronized.setdefault((transition.src, key), []).append(transition)

    builder = MachineBuilder(a.arity + len(keep_b), semiring)
    index: dict[tuple[int, int], int] = {}
    queue: deque[tuple[int, int]] = deque()

    def state_of(pair: tuple[int, int]) -> int:
        if pair not in index:
            index[pair] = builder.add_state()
            queue.append(pair)
            left, right = pair
            if left in a.final and right in b.final:
                builder.set_final(
                    index[pair], semiring.times(a.final[left], b.final[right])
                )
        return index[pair]

    for left, left_weight in a.initial.items():
        for right, right_weight in b.initial.items():
            builder.set_initial(
                state_of((left, right)), semiring.times(left_weight, right_weight)
            )

    pad_b = (EPSILON,) * len(keep_b)
    pad_a = (EPSILON,) * a.arity
    while queue:
        pair = queue.popleft()
        origin = index[pair]
        left, right = pair
        edges: list[tuple[tuple[int, int], Label, Weight]] = []
        for transition in a.outgoing[left]:
            key = _matched(transition.label, positions_a)
            if key[0] == EPSILON:
                edges.append(((transition.dst, right), transition.label + pad_b, transition.weight))
                continue
            for partner in synchronized.get((right, key), ()):
                edges.append(
                    (
                        (transition.dst, partner.dst),
                        transition.label + _matched(partner.label, keep_b),
                        semiring.times(transition.weight, partner.weight),
                    )
                )
        for transition in b.outgoing[right]:
            if _matched(transition.label, positions_b)[0] == EPSILON:
                edges.append(
                    (
                        (left, transition.dst),
                        pad_a + _matched(transition.label, keep_b),
                        transition.weight,
                    )
                )
        for target, label, weight in edges:
            builder.add_transition(origin, state_of(target), label, weight)

    machine = trim(builder.build())
    _LOGGER.debug(
        "Direct join: %s state pairs explored, %s kept", len(index), machine.num_states
    )
    return machine


def join(
    a: Machine,
    spec: JoinSpec,
    b: Machine,
    cfg: AutoIntersectionConfig | None = None,
) -> AutoIntersectionResult:
    """Join with the direct construction when possible, else via auto-intersection.

    The fallback uses the live flag policy unless cfg says otherwise.
    """
    try:
        machine = join_direct(a, spec, b)
    except JoinGuardError as err:
        _LOGGER.info("Falling back to join via auto-intersection: %s", err)
        return join_via_sigma(
            a, spec, b, cfg or AutoIntersectionConfig(flag_policy=FlagPolicy.LIVE_DISCARD)
        )
    return AutoIntersectionResult(machine=machine, complete=True)


def intersect(a: Machine, b: Machine) -> AutoIntersectionResult:
    """Intersect two machines of equal arity tape by tape.

    Raises:
        ArityMismatchError: If the arities differ
    """
    ensure_compatible(a, b)
    spec = JoinSpec(tuple((tape, tape) for tape in range(1, a.arity + 1)))
    return join(a, spec, b)


def compose(t1: Machine, t2: Machine, keep_intermediate: bool = False) -> Machine:
    """Compose two transducers (arity-2 machines).

    Args:
        t1: First transducer
        t2: Second transducer, reading the output of t1
        keep_intermediate: Keep the intermediate string as a middle tape

    Returns:
        An arity-2 machine (input, output), or an arity-3 machine (input,
        intermediate, output) when keep_intermediate is set

    Raises:
        ArityMismatchError: If an operand is not a transducer
        SemiringMismatchError: If the semirings differ
    """
    for transducer in (t1, t2):
        if transducer.arity != 2:
            raise ArityMismatchError(
                f"compose needs arity-2 machines, got arity {transducer.arity}"
            )
    result = join(t1, JoinSpec(((2, 1),)), t2)
    if not result.complete:
        _LOGGER.warning(
            "Composition may be incomplete: the delay bound cut off %s configurations",
            result.discarded,
        )
    if keep_intermediate:
        return result.machine
    return trim(coproject(result.machine, [2]))
