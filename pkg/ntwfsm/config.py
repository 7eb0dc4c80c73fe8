"""Validated option objects for ntwfsm operations."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import asdict, dataclass
from enum import StrEnum
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_DELETION_COST,
    DEFAULT_INSERTION_COST,
    DEFAULT_MATCH_COST,
    DEFAULT_SUBSTITUTION_COST,
    FLAG_POLICY_ANY,
    FLAG_POLICY_LIVE,
)
from .exceptions import InvalidConfigError, TapeIndexError

CONF_DELTA_MAX = "delta_max"
CONF_FLAG_POLICY = "flag_policy"
CONF_MATCH_COST = "match_cost"
CONF_SUBSTITUTION_COST = "substitution_cost"
CONF_INSERTION_COST = "insertion_cost"
CONF_DELETION_COST = "deletion_cost"


class FlagPolicy(StrEnum):
    """When a bound-induced discard clears the completeness flag."""

    # Every discard caused by the delay bound
    ANY_DISCARD = FLAG_POLICY_ANY
    # Only discards of configurations whose residual can still be matched
    LIVE_DISCARD = FLAG_POLICY_LIVE


_COST = vol.All(vol.Coerce(float), vol.Range(min=0))

AUTO_INTERSECTION_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_DELTA_MAX, default=None): vol.Any(
            None, vol.All(int, vol.Range(min=0))
        ),
        vol.Optional(CONF_FLAG_POLICY, default=FLAG_POLICY_ANY): vol.All(
            vol.In([policy.value for policy in FlagPolicy]), FlagPolicy
        ),
    }
)

EDIT_COST_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_MATCH_COST, default=DEFAULT_MATCH_COST): _COST,
        vol.Optional(CONF_SUBSTITUTION_COST, default=DEFAULT_SUBSTITUTION_COST): _COST,
        vol.Optional(CONF_INSERTION_COST, default=DEFAULT_INSERTION_COST): _COST,
        vol.Optional(CONF_DELETION_COST, default=DEFAULT_DELETION_COST): _COST,
    }
)

JOIN_PAIR_SCHEMA = vol.All(
    str,
    vol.Match(r"^\s*\d+\s*=\s*\d+\s*$", msg="join pair must look like I=J"),
)


def validate_options(schema: vol.Schema, data: Mapping[str, Any]) -> dict[str, Any]:
    """Validate user-supplied options against a schema.

    Raises:
        InvalidConfigError: If the data does not satisfy the schema
    """
    try:
        return schema(dict(data))
    except vol.Invalid as err:
        raise InvalidConfigError(str(err)) from err


@dataclass(frozen=True)
class AutoIntersectionConfig:
    """Options of the delay-bounded auto-intersection.

    A missing delta_max is replaced by the machine-dependent default bound.
    """

    delta_max: int | None = None
    flag_policy: FlagPolicy = FlagPolicy.ANY_DISCARD

    def __post_init__(self) -> None:
        """Validate the options and store the flag policy as a FlagPolicy."""
        options = validate_options(AUTO_INTERSECTION_SCHEMA, asdict(self))
        object.__setattr__(self, CONF_FLAG_POLICY, options[CONF_FLAG_POLICY])

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> AutoIntersectionConfig:
        """Build the config from loosely typed input."""
        options = validate_options(AUTO_INTERSECTION_SCHEMA, data)
        return cls(
            delta_max=options[CONF_DELTA_MAX], flag_policy=options[CONF_FLAG_POLICY]
        )


@dataclass(frozen=True)
class EditCostModel:
    """Column costs of the n-tape edit machine (tropical weights)."""

    match_cost: float = DEFAULT_MATCH_COST
    substitution_cost: float = DEFAULT_SUBSTITUTION_COST
    insertion_cost: float = DEFAULT_INSERTION_COST
    deletion_cost: float = DEFAULT_DELETION_COST

    def __post_init__(self) -> None:
        """Validate that every cost is a non-negative number."""
        validate_options(EDIT_COST_SCHEMA, asdict(self))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> EditCostModel:
        """Build the cost model from loosely typed input."""
        return cls(**validate_options(EDIT_COST_SCHEMA, data))


@dataclass(frozen=True)
class JoinSpec:
    """Equality constraints ``i = j`` between tapes of two machines (1-based)."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        """Validate that the pairs are non-empty and use each tape once."""
        if not self.pairs:
            raise InvalidConfigError("join spec needs at least one tape pair")
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InvalidConfigError(
                f"join pairs {list(self.pairs)} reuse a tape on one side"
            )
        if min(left + right) < 1:
            raise InvalidConfigError("tape indices are 1-based")

    @classmethod
    def parse(cls, tokens: Iterable[str]) -> JoinSpec:
        """Parse ``I=J`` tokens, e.g. ``["2=1"]``.

        Raises:
            InvalidConfigError: If a token is malformed
        """
        pairs = []
        for token in tokens:
            try:
                JOIN_PAIR_SCHEMA(token)
            except vol.Invalid as err:
                raise InvalidConfigError(f"{token!r}: {err}") from err
            left, right = token.split("=")
            pairs.append((int(left), int(right)))
        return cls(tuple(pairs))

    def check(self, a_arity: int, b_arity: int) -> None:
        """Check the pairs against the operand arities.

        Raises:
            TapeIndexError: If a pair refers to a missing tape
        """
        for i, j in self.pairs:
            if i > a_arity or j > b_arity:
                raise TapeIndexError(
                    f"join pair {i}={j} exceeds arities {a_arity} and {b_arity}"
                )
