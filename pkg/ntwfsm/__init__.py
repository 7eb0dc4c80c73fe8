"""Semiring-generic n-tape weighted finite-state machines."""

from __future__ import annotations

from .auto_intersection import AutoIntersectionResult, auto_intersect
from .config import AutoIntersectionConfig, EditCostModel, FlagPolicy, JoinSpec
from .exceptions import NtwfsmError
from .io_formats import load, parse, save, serialize, to_dot
from .join import compose, intersect, join, join_direct, join_via_sigma
from .machine import (
    Machine,
    MachineBuilder,
    Transition,
    acceptor,
    enumerate_tuples,
    from_tuples,
    tape_tuple,
    trim,
    validate,
)
from .rational_ops import (
    closure,
    concat,
    coproject,
    cross_product,
    project,
    remove_epsilon_tuples,
    union,
)
from .search import BestPath, best_path, shortest_distance
from .semiring import BOOLEAN, LOG, REAL, TROPICAL, Semiring, get_semiring

__all__ = [
    "BOOLEAN",
    "LOG",
    "REAL",
    "TROPICAL",
    "AutoIntersectionConfig",
    "AutoIntersectionResult",
    "BestPath",
    "EditCostModel",
    "FlagPolicy",
    "JoinSpec",
    "Machine",
    "MachineBuilder",
    "NtwfsmError",
    "Semiring",
    "Transition",
    "acceptor",
    "auto_intersect",
    "best_path",
    "closure",
    "compose",
    "concat",
    "coproject",
    "cross_product",
    "enumerate_tuples",
    "from_tuples",
    "get_semiring",
    "intersect",
    "join",
    "join_direct",
    "join_via_sigma",
    "load",
    "parse",
    "project",
    "remove_epsilon_tuples",
    "save",
    "serialize",
    "shortest_distance",
    "tape_tuple",
    "to_dot",
    "trim",
    "union",
    "validate",
]
