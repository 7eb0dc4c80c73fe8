"""Weight semirings over which every machine and operation is generic."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from functools import reduce
import math
import operator

from .const import (
    SEMIRING_BOOLEAN,
    SEMIRING_LOG,
    SEMIRING_REAL,
    SEMIRING_TROPICAL,
    WEIGHT_ABS_TOL,
    WEIGHT_REL_TOL,
)
from .exceptions import UnknownSemiringError

type Weight = bool | float

_INF = math.inf


@dataclass(frozen=True)
class Semiring:
    """A weight algebra (K, plus, times, zero, one).

    Instances are immutable singletons; compare them by name.
    """

    name: str
    plus: Callable[[Weight, Weight], Weight] = field(compare=False, repr=False)
    times: Callable[[Weight, Weight], Weight] = field(compare=False, repr=False)
    zero: Weight = field(compare=False)
    one: Weight = field(compare=False)
    is_idempotent: bool = field(compare=False)
    natural_order: Callable[[Weight], float] | None = field(
        default=None, compare=False, repr=False
    )
    exact: bool = field(default=True, compare=False)

    def sum(self, weights: Iterable[Weight]) -> Weight:
        """Fold weights with plus, starting from zero."""
        return reduce(self.plus, weights, self.zero)

    def product(self, weights: Iterable[Weight]) -> Weight:
        """Fold weights with times, starting from one."""
        return reduce(self.times, weights, self.one)

    def is_zero(self, weight: Weight) -> bool:
        """Return whether weight is the additive identity."""
        return weight == self.zero

    def is_close(self, a: Weight, b: Weight) -> bool:
        """Compare two weights, with tolerance for the floating semirings."""
        if self.exact or a == b:
            return a == b
        return math.isclose(a, b, rel_tol=WEIGHT_REL_TOL, abs_tol=WEIGHT_ABS_TOL)

    def coerce(self, value: Weight | int | str) -> Weight:
        """Convert a Python value or text token to a weight of this semiring."""
        if isinstance(value, str):
            return self.parse_weight(value)
        if self.name == SEMIRING_BOOLEAN:
            return bool(value)
        return self._check_float(float(value))

    def parse_weight(self, token: str) -> Weight:
        """Parse the text form of a weight.

        Raises:
            ValueError: If the token is not a weight of this semiring
        """
        if self.name == SEMIRING_BOOLEAN:
            if token not in ("0", "1"):
                raise ValueError(f"boolean weight must be 0 or 1, got {token!r}")
            return token == "1"
        return self._check_float(float(token))

    def _check_float(self, value: float) -> float:
        if math.isnan(value):
            raise ValueError("weight must not be NaN")
        # only +inf is a weight here
        if value == -_INF and self.name in (SEMIRING_TROPICAL, SEMIRING_LOG):
            raise ValueError(f"{self.name} weights must not be -inf")
        return value

    def format_weight(self, weight: Weight) -> str:
        """Return the shortest text form that parses back to the same weight."""
        if self.name == SEMIRING_BOOLEAN:
            return "1" if weight else "0"
        value = float(weight)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if value.is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(value)


def _log_plus(a: Weight, b: Weight) -> Weight:
    """Return -log(exp(-a) + exp(-b)) without overflow."""
    if a == _INF:
        return b
    if b == _INF:
        return a
    low = min(a, b)
    return low - math.log1p(math.exp(-abs(a - b)))


def _tropical_times(a: Weight, b: Weight) -> Weight:
    # inf + -inf must stay zero; only +inf is a weight here
    if a == _INF or b == _INF:
        return _INF
    return a + b


BOOLEAN = Semiring(
    name=SEMIRING_BOOLEAN,
    plus=operator.or_,
    times=operator.and_,
    zero=False,
    one=True,
    is_idempotent=True,
    natural_order=lambda weight: 0.0 if weight else 1.0,
)

TROPICAL = Semiring(
    name=SEMIRING_TROPICAL,
    plus=min,
    times=_tropical_times,
    zero=_INF,
    one=0.0,
    is_idempotent=True,
    natural_order=float,
)

REAL = Semiring(
    name=SEMIRING_REAL,
    plus=operator.add,
    times=operator.mul,
    zero=0.0,
    one=1.0,
    is_idempotent=False,
    exact=False,
)

LOG = Semiring(
    name=SEMIRING_LOG,
    plus=_log_plus,
    times=_tropical_times,
    zero=_INF,
    one=0.0,
    is_idempotent=False,
    exact=False,
)

SEMIRINGS: dict[str, Semiring] = {
    semiring.name: semiring for semiring in (BOOLEAN, TROPICAL, REAL, LOG)
}


def get_semiring(name: str) -> Semiring:
    """Look up a semiring by its registered name.

    Raises:
        UnknownSemiringError: If no semiring has that name
    """
    try:
        return SEMIRINGS[name]
    except KeyError as err:
        known = ", ".join(sorted(SEMIRINGS))
        raise UnknownSemiringError(
            f"unknown semiring {name!r} (expected one of {known})"
        ) from err
