"""Command-line driver: every operation as a subcommand over ``.ntw`` files."""

from __future__ import annotations

import argparse
from collections.abc import Callable, Sequence
import logging
from pathlib import Path
import sys
from typing import NoReturn

from . import applications, io_formats, rational_ops
from .auto_intersection import AutoIntersectionResult, auto_intersect
from .config import (
    CONF_DELETION_COST,
    CONF_INSERTION_COST,
    CONF_MATCH_COST,
    CONF_SUBSTITUTION_COST,
    AutoIntersectionConfig,
    EditCostModel,
    FlagPolicy,
    JoinSpec,
)
from .const import (
    DEFAULT_HOP_LIMIT,
    DEFAULT_PATH_BUDGET,
    DEFAULT_SEMIRING,
    DOMAIN,
    EXIT_ERROR,
    EXIT_INCOMPLETE,
    EXIT_OK,
)
from .exceptions import ArityMismatchError, NtwfsmError, ParseError
from .join import compose, join, join_direct, join_via_sigma
from .machine import Machine, TapeTuple, enumerate_tuples, from_tuples, is_acyclic
from .search import BestPath, best_path
from .semiring import SEMIRINGS, TROPICAL, get_semiring

_LOGGER = logging.getLogger(__name__)

STDIN = "-"
METHOD_AUTO = "auto"
METHOD_SIGMA = "sigma"
METHOD_DIRECT = "direct"

type Handler = Callable[[argparse.Namespace], int]


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with the generic error status."""

    def error(self, message: str) -> NoReturn:
        """Print usage and exit with status 1."""
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _write(text: str) -> None:
    sys.stdout.write(text)


def _read_text(path: str) -> str:
    if path == STDIN:
        try:
            return sys.stdin.read()
        except UnicodeDecodeError as err:
            raise io_formats.decoding_error(err) from err
    return io_formats.decode(Path(path).read_bytes())


def _load(path: str) -> Machine:
    return io_formats.parse(_read_text(path))


def _emit(machine: Machine) -> int:
    _write(io_formats.serialize(machine))
    return EXIT_OK


def _emit_result(result: AutoIntersectionResult, strict: bool) -> int:
    _write(f"# complete {'true' if result.complete else 'false'}\n")
    _write(io_formats.serialize(result.machine))
    if strict and not result.complete:
        _LOGGER.error("Result may be incomplete (--strict)")
        return EXIT_INCOMPLETE
    return EXIT_OK


def _row(weight: str, fields: Sequence[str]) -> str:
    return "\t".join([weight, *fields]) + "\n"


def _tape_row(weight: str, tapes: TapeTuple) -> str:
    return _row(weight, [" ".join(tape) for tape in tapes])


def _costs(args: argparse.Namespace) -> EditCostModel:
    return EditCostModel.from_dict(
        {
            key: value
            for key, value in (
                (CONF_MATCH_COST, args.match),
                (CONF_SUBSTITUTION_COST, args.sub),
                (CONF_INSERTION_COST, args.ins),
                (CONF_DELETION_COST, args.dele),
            )
            if value is not None
        }
    )


def _auto_config(args: argparse.Namespace) -> AutoIntersectionConfig:
    return AutoIntersectionConfig(
        delta_max=args.delta_max, flag_policy=FlagPolicy(args.flag_policy)
    )


def _read_tuples(text: str, arity: int, semiring_name: str) -> Machine:
    semiring = get_semiring(semiring_name)
    entries = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) == arity:
            weight = semiring.one
        elif len(fields) == arity + 1:
            try:
                weight = semiring.parse_weight(fields[-1].strip())
            except ValueError as err:
                raise ParseError(number, str(err)) from err
        else:
            raise ParseError(
                number, f"expected {arity} tab-separated tapes and an optional weight"
            )
        entries.append((tuple(field.split() for field in fields[:arity]), weight))
    return from_tuples(entries, semiring, arity)


def _cmd_compile(args: argparse.Namespace) -> int:
    text = _read_text(args.file)
    if args.tuples:
        if args.arity is None:
            raise ArityMismatchError("--tuples needs --arity")
        return _emit(_read_tuples(text, args.arity, args.semiring or DEFAULT_SEMIRING))
    semiring = get_semiring(args.semiring) if args.semiring else None
    return _emit(io_formats.parse(text, semiring))


def _cmd_print(args: argparse.Namespace) -> int:
    machine = _load(args.file)
    _write(
        f"# arity {machine.arity}\n"
        f"# semiring {machine.semiring.name}\n"
        f"# states {machine.num_states}\n"
        f"# transitions {len(machine.transitions)}\n"
        f"# alphabet {' '.join(sorted(machine.alphabet))}\n"
    )
    return _emit(machine)


def _cmd_dot(args: argparse.Namespace) -> int:
    _write(io_formats.to_dot(_load(args.file)))
    return EXIT_OK


def _cmd_union(args: argparse.Namespace) -> int:
    return _emit(rational_ops.union(_load(args.a), _load(args.b)))


def _cmd_concat(args: argparse.Namespace) -> int:
    return _emit(rational_ops.concat(_load(args.a), _load(args.b)))


def _cmd_closure(args: argparse.Namespace) -> int:
    return _emit(rational_ops.closure(_load(args.file), plus=args.plus))


def _cmd_cross(args: argparse.Namespace) -> int:
    return _emit(rational_ops.cross_product(_load(args.a), _load(args.b)))


def _cmd_project(args: argparse.Namespace) -> int:
    return _emit(rational_ops.project(_load(args.file), args.tapes))


def _cmd_coproject(args: argparse.Namespace) -> int:
    return _emit(rational_ops.coproject(_load(args.file), args.tapes))


def _cmd_rmeps(args: argparse.Namespace) -> int:
    return _emit(rational_ops.remove_epsilon_tuples(_load(args.file)))


def _cmd_autointersect(args: argparse.Namespace) -> int:
    result = auto_intersect(_load(args.file), args.tape_i, args.tape_j, _auto_config(args))
    return _emit_result(result, args.strict)


def _cmd_join(args: argparse.Namespace) -> int:
    a, b = _load(args.a), _load(args.b)
    spec = JoinSpec.parse(args.pair)
    if args.method == METHOD_DIRECT:
        result = AutoIntersectionResult(machine=join_direct(a, spec, b), complete=True)
    elif args.method == METHOD_SIGMA:
        result = join_via_sigma(a, spec, b, _auto_config(args))
    else:
        result = join(a, spec, b, _auto_config(args))
    return _emit_result(result, args.strict)


def _cmd_compose(args: argparse.Namespace) -> int:
    return _emit(compose(_load(args.a), _load(args.b), args.keep_intermediate))


def _write_best(machine: Machine, found: BestPath | None) -> int:
    if found is None:
        _LOGGER.warning("No accepting path")
        return EXIT_OK
    _write(_tape_row(machine.semiring.format_weight(found.weight), found.tapes))
    return EXIT_OK


def _cmd_bestpath(args: argparse.Namespace) -> int:
    machine = _load(args.file)
    return _write_best(machine, best_path(machine))


def _cmd_enumerate(args: argparse.Namespace) -> int:
    machine = _load(args.file)
    hop_limit = args.hop_limit
    if hop_limit is None:
        hop_limit = machine.num_states if is_acyclic(machine) else DEFAULT_HOP_LIMIT
    tuples = enumerate_tuples(machine, hop_limit, args.budget)
    for tapes in sorted(tuples):
        _write(_tape_row(machine.semiring.format_weight(tuples[tapes]), tapes))
    return EXIT_OK


def _cmd_align(args: argparse.Namespace) -> int:
    alignment = applications.align(args.strings, _costs(args))
    weight = TROPICAL.format_weight(alignment.weight)
    _write(_row(weight, alignment.rows))
    return EXIT_OK


def _read_words(path: str) -> list[str]:
    return [line.strip() for line in _read_text(path).splitlines() if line.strip()]


def _cmd_cognates(args: argparse.Namespace) -> int:
    ranked = applications.cognate_pairs(
        _read_words(args.list1),
        _read_words(args.list2),
        _costs(args),
        top_k=args.top,
        max_weight=args.max_weight,
    )
    for first, second, weight in ranked:
        _write(_row(TROPICAL.format_weight(weight), (first, second)))
    return EXIT_OK


def _cmd_cascade(args: argparse.Namespace) -> int:
    transducers = [_load(path) for path in args.files]
    if args.input is None:
        return _emit(applications.cascade_with_intermediates(transducers))
    return _write_best(
        transducers[0], applications.cascade_apply(transducers, args.input.split())
    )


def _add_auto_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta-max", type=int, default=None, help="delay bound")
    parser.add_argument(
        "--flag-policy",
        choices=[policy.value for policy in FlagPolicy],
        default=FlagPolicy.ANY_DISCARD.value,
        help="which discards clear the complete flag",
    )
    parser.add_argument(
        "--strict", action="store_true", help="exit with status 2 on an incomplete result"
    )


def _add_cost_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--match", type=float, default=None, help="match cost")
    parser.add_argument("--sub", type=float, default=None, help="substitution cost")
    parser.add_argument("--ins", type=float, default=None, help="insertion cost")
    parser.add_argument("--del", dest="dele", type=float, default=None, help="deletion cost")


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser for all subcommands."""
    parser = _ArgumentParser(prog=DOMAIN, description="n-tape weighted finite-state machines")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def command(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = command("compile", _cmd_compile, "validate and canonicalize a machine file")
    sub.add_argument("file")
    sub.add_argument("--semiring", choices=sorted(SEMIRINGS), default=None)
    sub.add_argument("--tuples", action="store_true", help="read tab-separated tuples of space-separated symbols")
    sub.add_argument("--arity", type=int, default=None)

    for name, handler, help_text in (
        ("print", _cmd_print, "print a summary and the machine"),
        ("dot", _cmd_dot, "export Graphviz DOT"),
        ("rmeps", _cmd_rmeps, "remove epsilon-tuple transitions"),
        ("bestpath", _cmd_bestpath, "print the best accepting path"),
    ):
        command(name, handler, help_text).add_argument("file")

    for name, handler, help_text in (
        ("union", _cmd_union, "union of two machines"),
        ("concat", _cmd_concat, "concatenation of two machines"),
        ("cross", _cmd_cross, "cross-product of two machines"),
    ):
        sub = command(name, handler, help_text)
        sub.add_argument("a")
        sub.add_argument("b")

    sub = command("closure", _cmd_closure, "Kleene star of a machine")
    sub.add_argument("file")
    sub.add_argument("--plus", action="store_true", help="Kleene plus instead")

    for name, handler, help_text in (
        ("project", _cmd_project, "keep the listed tapes"),
        ("coproject", _cmd_coproject, "remove the listed tapes"),
    ):
        sub = command(name, handler, help_text)
        sub.add_argument("file")
        sub.add_argument("--tapes", type=int, nargs="+", required=True)

    sub = command("autointersect", _cmd_autointersect, "auto-intersection on two tapes")
    sub.add_argument("file")
    sub.add_argument("--tape-i", type=int, required=True)
    sub.add_argument("--tape-j", type=int, required=True)
    _add_auto_options(sub)

    sub = command("join", _cmd_join, "join two machines on tape pairs")
    sub.add_argument("a")
    sub.add_argument("b")
    sub.add_argument(
        "--pair",
        "--pairs",
        dest="pair",
        action="extend",
        nargs="+",
        required=True,
        help="tape pairs I=J",
    )
    sub.add_argument(
        "--method",
        choices=[METHOD_AUTO, METHOD_SIGMA, METHOD_DIRECT],
        default=METHOD_AUTO,
    )
    _add_auto_options(sub)

    sub = command("compose", _cmd_compose, "compose two transducers")
    sub.add_argument("a")
    sub.add_argument("b")
    sub.add_argument("--keep-intermediate", action="store_true")

    sub = command("enumerate", _cmd_enumerate, "list the weighted tuples")
    sub.add_argument("file")
    sub.add_argument("--hop-limit", type=int, default=None)
    sub.add_argument("--budget", type=int, default=DEFAULT_PATH_BUDGET)

    sub = command("align", _cmd_align, "align two or more strings")
    sub.add_argument("strings", nargs="+")
    _add_cost_options(sub)

    sub = command("cognates", _cmd_cognates, "rank word pairs by alignment weight")
    sub.add_argument("list1")
    sub.add_argument("list2")
    sub.add_argument("--top", type=int, default=10)
    sub.add_argument("--max-weight", type=float, default=None)
    _add_cost_options(sub)

    sub = command("cascade", _cmd_cascade, "compose a cascade keeping intermediates")
    sub.add_argument("files", nargs="+")
    sub.add_argument("--input", default=None, help="run space-separated symbols through the cascade")

    return parser


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_ERROR
    _setup_logging(args.verbose)
    try:
        return args.handler(args)
    except (NtwfsmError, OSError) as err:
        sys.stderr.write(f"{DOMAIN}: error: {err}\n")
        return EXIT_ERROR


def main() -> NoReturn:
    """Console entry point."""
    sys.exit(run())
