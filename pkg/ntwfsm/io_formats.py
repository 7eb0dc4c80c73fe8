"""Text serialization of machines and DOT export.

The text format is line based; blank lines and lines starting with ``#`` are
ignored::

    ntwfsm 1
    arity 2
    semiring tropical
    state 0 initial 0
    state 1 final 0
    trans 0 1 3 a b

``<eps>`` stands for epsilon in transition labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from pathlib import Path

from .const import (
    COMMENT_CHAR,
    DEFAULT_SEMIRING,
    EPSILON,
    EPSILON_TOKEN,
    FORMAT_MAGIC,
    FORMAT_VERSION,
)
from .exceptions import MachineValidationError, ParseError, UnknownSemiringError
from .machine import Machine, Transition, Violation, canonical, validate
from .semiring import Semiring, Weight, get_semiring

_LOGGER = logging.getLogger(__name__)

KEYWORD_ARITY = "arity"
KEYWORD_SEMIRING = "semiring"
KEYWORD_STATE = "state"
KEYWORD_TRANS = "trans"
KEYWORD_INITIAL = "initial"
KEYWORD_FINAL = "final"


@dataclass
class _ParsedMachine:
    """Raw content of a machine file before state renumbering."""

    arity: int | None = None
    semiring: Semiring | None = None
    states: dict[int, int] = field(default_factory=dict)
    initial: dict[int, Weight] = field(default_factory=dict)
    final: dict[int, Weight] = field(default_factory=dict)
    transitions: list[tuple[int, int, int, tuple[str, ...], Weight]] = field(
        default_factory=list
    )


def _int(token: str, line: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError as err:
        raise ParseError(line, f"{what} must be an integer, got {token!r}") from err
    if value < 0:
        raise ParseError(line, f"{what} must not be negative, got {value}")
    return value


def _weight(semiring: Semiring, token: str, line: int) -> Weight:
    try:
        return semiring.parse_weight(token)
    except ValueError as err:
        raise ParseError(line, f"invalid {semiring.name} weight {token!r}: {err}") from err


def decoding_error(err: UnicodeDecodeError) -> ParseError:
    """Return a ParseError naming the line of the first invalid UTF-8 byte."""
    data = bytes(err.object)
    line = data.count(b"\n", 0, err.start) + 1
    return ParseError(line, f"invalid UTF-8 byte 0x{data[err.start]:02x}")


def decode(data: bytes) -> str:
    """Decode UTF-8 machine text.

    Raises:
        ParseError: If the data is not valid UTF-8
    """
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise decoding_error(err) from err


def parse(text: str, semiring: Semiring | None = None) -> Machine:
    """Parse the text form of a machine.

    Args:
        text: Machine file content
        semiring: Semiring to use when the file has no ``semiring`` line; a
            file header naming a different semiring is an error

    Returns:
        A validated machine; sparse state ids are renumbered ascending and
        zero-weight transitions and zero initial or final weights are dropped

    Raises:
        ParseError: On a syntax error, with the 1-based line number
        MachineValidationError: If the machine breaks an invariant
    """
    parsed = _ParsedMachine()
    seen_magic = False
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith(COMMENT_CHAR):
            continue
        keyword, args = tokens[0], tokens[1:]
        if not seen_magic:
            if tokens != [FORMAT_MAGIC, str(FORMAT_VERSION)]:
                raise ParseError(
                    number, f"expected header '{FORMAT_MAGIC} {FORMAT_VERSION}'"
                )
            seen_magic = True
        elif keyword == KEYWORD_ARITY:
            _parse_arity(parsed, args, number)
        elif keyword == KEYWORD_SEMIRING:
            _parse_semiring(parsed, args, number, semiring)
        elif keyword == KEYWORD_STATE:
            _parse_state(parsed, args, number, semiring)
        elif keyword == KEYWORD_TRANS:
            _parse_trans(parsed, args, number, semiring)
        else:
            raise ParseError(number, f"unknown keyword {keyword!r}")
    if not seen_magic:
        raise ParseError(1, f"missing header '{FORMAT_MAGIC} {FORMAT_VERSION}'")
    if parsed.arity is None:
        raise ParseError(1, "missing 'arity' line")
    return _assemble(parsed, semiring)


def _parse_arity(parsed: _ParsedMachine, args: list[str], line: int) -> None:
    if parsed.arity is not None:
        raise ParseError(line, "duplicate 'arity' line")
    if len(args) != 1:
        raise ParseError(line, "'arity' takes exactly one value")
    parsed.arity = _int(args[0], line, "arity")
    if parsed.arity < 1:
        raise ParseError(line, "arity must be at least 1")


def _parse_semiring(
    parsed: _ParsedMachine, args: list[str], line: int, requested: Semiring | None
) -> None:
    if parsed.semiring is not None:
        raise ParseError(line, "'semiring' must come once, before states")
    if len(args) != 1:
        raise ParseError(line, "'semiring' takes exactly one name")
    try:
        found = get_semiring(args[0])
    except UnknownSemiringError as err:
        raise ParseError(line, str(err)) from err
    if requested is not None and requested != found:
        raise ParseError(
            line,
            f"file declares semiring {found.name}, but {requested.name} was requested",
        )
    parsed.semiring = found


def _body_semiring(
    parsed: _ParsedMachine, line: int, requested: Semiring | None
) -> Semiring:
    if parsed.arity is None:
        raise ParseError(line, "'arity' must come before states and transitions")
    if parsed.semiring is None:
        parsed.semiring = requested or get_semiring(DEFAULT_SEMIRING)
    return parsed.semiring


def _parse_state(
    parsed: _ParsedMachine, args: list[str], line: int, requested: Semiring | None
) -> None:
    semiring = _body_semiring(parsed, line, requested)
    if not args:
        raise ParseError(line, "'state' needs an id")
    state = _int(args[0], line, "state id")
    if state in parsed.states:
        raise ParseError(line, f"duplicate state {state}")
    parsed.states[state] = line
    rest = args[1:]
    if len(rest) % 2:
        raise ParseError(line, "state attributes come as 'initial W' or 'final W'")
    for key, value in zip(rest[::2], rest[1::2], strict=True):
        if key == KEYWORD_INITIAL and state not in parsed.initial:
            parsed.initial[state] = _weight(semiring, value, line)
        elif key == KEYWORD_FINAL and state not in parsed.final:
            parsed.final[state] = _weight(semiring, value, line)
        else:
            raise ParseError(line, f"unexpected state attribute {key!r}")


def _parse_trans(
    parsed: _ParsedMachine, args: list[str], line: int, requested: Semiring | None
) -> None:
    semiring = _body_semiring(parsed, line, requested)
    assert parsed.arity is not None
    if len(args) != 3 + parsed.arity:
        raise ParseError(
            line,
            f"'trans' needs SRC DST W and {parsed.arity} symbols, got {len(args)} fields",
        )
    src = _int(args[0], line, "source state")
    dst = _int(args[1], line, "target state")
    weight = _weight(semiring, args[2], line)
    label = tuple(EPSILON if token == EPSILON_TOKEN else token for token in args[3:])
    parsed.transitions.append((line, src, dst, label, weight))


def _assemble(parsed: _ParsedMachine, requested: Semiring | None) -> Machine:
    assert parsed.arity is not None
    semiring = parsed.semiring or requested or get_semiring(DEFAULT_SEMIRING)
    mapping = {state: index for index, state in enumerate(sorted(parsed.states))}
    violations: list[Violation] = []
    transitions: list[Transition] = []
    for line, src, dst, label, weight in parsed.transitions:
        missing = [state for state in (src, dst) if state not in mapping]
        if missing:
            violations.extend(
                Violation("missing-state", f"line {line}: state {state} is not declared")
                for state in missing
            )
            continue
        if semiring.is_zero(weight):
            _LOGGER.debug("Dropping zero-weight transition on line %s", line)
            continue
        transitions.append(Transition(mapping[src], mapping[dst], label, weight))
    if violations:
        raise MachineValidationError(violations)

    def nonzero(weights: dict[int, Weight]) -> dict[int, Weight]:
        return {
            mapping[state]: weight
            for state, weight in sorted(weights.items())
            if not semiring.is_zero(weight)
        }

    machine = Machine(
        arity=parsed.arity,
        semiring=semiring,
        num_states=len(mapping),
        transitions=tuple(sorted(transitions)),
        initial=nonzero(parsed.initial),
        final=nonzero(parsed.final),
        alphabet=frozenset(
            symbol for _, _, label, _ in transitions for symbol in label if symbol
        ),
    )
    if violations := validate(machine):
        raise MachineValidationError(violations)
    _LOGGER.debug(
        "Parsed machine: arity %s, %s states, %s transitions",
        machine.arity,
        machine.num_states,
        len(machine.transitions),
    )
    return machine


def serialize(machine: Machine) -> str:
    """Return the canonical text form of a machine (ending with a newline)."""
    machine = canonical(machine)
    semiring = machine.semiring
    lines = [
        f"{FORMAT_MAGIC} {FORMAT_VERSION}",
        f"{KEYWORD_ARITY} {machine.arity}",
        f"{KEYWORD_SEMIRING} {semiring.name}",
    ]
    for state in machine.states:
        fields = [KEYWORD_STATE, str(state)]
        if state in machine.initial:
            fields += [KEYWORD_INITIAL, semiring.format_weight(machine.initial[state])]
        if state in machine.final:
            fields += [KEYWORD_FINAL, semiring.format_weight(machine.final[state])]
        lines.append(" ".join(fields))
    for transition in machine.transitions:
        tokens = (symbol or EPSILON_TOKEN for symbol in transition.label)
        lines.append(
            f"{KEYWORD_TRANS} {transition.src} {transition.dst} "
            f"{semiring.format_weight(transition.weight)} {' '.join(tokens)}"
        )
    return "\n".join(lines) + "\n"


def load(path: str | Path, semiring: Semiring | None = None) -> Machine:
    """Read and parse a machine file (UTF-8)."""
    return parse(decode(Path(path).read_bytes()), semiring)


def save(machine: Machine, path: str | Path) -> None:
    """Write the canonical text form of a machine (UTF-8)."""
    Path(path).write_text(serialize(machine), encoding="utf-8")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(machine: Machine) -> str:
    """Return a Graphviz description of the machine.

    Edges are labeled ``t1:...:tn/w`` with ``ε`` for epsilon. Final states
    are double circles labeled ``q/ρ``; each initial state gets an entry arrow
    from an invisible node, labeled with λ unless λ is one.
    """
    machine = canonical(machine)
    semiring = machine.semiring
    lines = ["digraph ntwfsm {", "  rankdir=LR;"]
    for state in machine.states:
        if state in machine.final:
            label = f"{state}/{semiring.format_weight(machine.final[state])}"
            lines.append(f"  {state} [shape=doublecircle, label={_quote(label)}];")
        else:
            lines.append(f"  {state} [shape=circle];")
    for state, weight in machine.initial.items():
        lines.append(f"  start{state} [shape=none, label=\"\", width=0];")
        attributes = "" if weight == semiring.one else (
            f" [label={_quote(semiring.format_weight(weight))}]"
        )
        lines.append(f"  start{state} -> {state}{attributes};")
    for transition in machine.transitions:
        symbols = ":".join(symbol or "ε" for symbol in transition.label)
        label = f"{symbols}/{semiring.format_weight(transition.weight)}"
        lines.append(
            f"  {transition.src} -> {transition.dst} [label={_quote(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
