"""Test the weight semirings."""

from __future__ import annotations

import math

from hypothesis import given, settings, strategies as st
import pytest

from ntwfsm.exceptions import UnknownSemiringError
from ntwfsm.semiring import BOOLEAN, LOG, REAL, SEMIRINGS, TROPICAL, Semiring, get_semiring

WEIGHTS = {
    BOOLEAN.name: st.booleans(),
    TROPICAL.name: st.integers(min_value=-50, max_value=50).map(float)
    | st.just(math.inf),
    REAL.name: st.floats(min_value=0, max_value=10, allow_nan=False),
    LOG.name: st.floats(min_value=-20, max_value=20, allow_nan=False)
    | st.just(math.inf),
}


def _close(semiring: Semiring, a: float, b: float) -> bool:
    if semiring.exact:
        return a == b
    return semiring.is_close(a, b)


@pytest.mark.parametrize("semiring", list(SEMIRINGS.values()), ids=list(SEMIRINGS))
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_semiring_axioms(semiring: Semiring, data: st.DataObject) -> None:
    """Test the semiring laws on random weight triples."""
    weights = WEIGHTS[semiring.name]
    a, b, c = data.draw(weights), data.draw(weights), data.draw(weights)
    plus, times = semiring.plus, semiring.times

    assert _close(semiring, plus(plus(a, b), c), plus(a, plus(b, c)))
    assert _close(semiring, plus(a, b), plus(b, a))
    assert _close(semiring, times(times(a, b), c), times(a, times(b, c)))
    assert _close(semiring, times(a, plus(b, c)), plus(times(a, b), times(a, c)))
    assert _close(semiring, times(plus(a, b), c), plus(times(a, c), times(b, c)))
    assert _close(semiring, plus(a, semiring.zero), a)
    assert _close(semiring, times(a, semiring.one), a)
    assert _close(semiring, times(semiring.one, a), a)
    assert times(a, semiring.zero) == semiring.zero
    assert times(semiring.zero, a) == semiring.zero
    if semiring.is_idempotent:
        assert plus(a, a) == a


@pytest.mark.parametrize("semiring", [BOOLEAN, TROPICAL], ids=["boolean", "tropical"])
@given(data=st.data())
def test_natural_order_selects_plus(semiring: Semiring, data: st.DataObject) -> None:
    """Test that plus returns the better operand under the natural order."""
    weights = WEIGHTS[semiring.name]
    a, b = data.draw(weights), data.draw(weights)
    assert semiring.natural_order is not None
    best = min(a, b, key=semiring.natural_order)
    assert semiring.natural_order(semiring.plus(a, b)) == semiring.natural_order(best)


@pytest.mark.parametrize(
    ("semiring", "a", "b", "plus", "times"),
    [
        (TROPICAL, 3.0, 5.0, 3.0, 8.0),
        (TROPICAL, 4.0, math.inf, 4.0, math.inf),
        (REAL, 0.25, 0.5, 0.75, 0.125),
        (BOOLEAN, True, False, True, False),
    ],
)
def test_plus_times_examples(
    semiring: Semiring, a: float, b: float, plus: float, times: float
) -> None:
    """Test plus and times on hand-checked values."""
    assert semiring.plus(a, b) == plus
    assert semiring.times(a, b) == times


def test_log_plus_is_stable() -> None:
    """Test that log plus does not overflow on large weights."""
    assert LOG.is_close(LOG.plus(1000.0, 1000.0), 1000.0 - math.log(2))
    assert LOG.is_close(LOG.plus(-1000.0, 0.0), -1000.0)
    assert LOG.plus(math.inf, 7.0) == 7.0


def test_sum_and_product() -> None:
    """Test the folding helpers."""
    assert TROPICAL.sum([4.0, 2.0, 9.0]) == 2.0
    assert TROPICAL.sum([]) == math.inf
    assert REAL.product([0.5, 4.0]) == 2.0
    assert BOOLEAN.product([]) is True


@pytest.mark.parametrize(
    ("semiring", "weight", "text"),
    [
        (TROPICAL, 3.0, "3"),
        (TROPICAL, -2.0, "-2"),
        (TROPICAL, 0.1, "0.1"),
        (TROPICAL, math.inf, "inf"),
        (REAL, 1 / 3, repr(1 / 3)),
        (BOOLEAN, True, "1"),
        (BOOLEAN, False, "0"),
    ],
)
def test_weight_text_form(semiring: Semiring, weight: float, text: str) -> None:
    """Test formatting weights and parsing them back."""
    assert semiring.format_weight(weight) == text
    assert semiring.parse_weight(text) == weight


@given(st.floats(allow_nan=False))
def test_weight_text_round_trip(value: float) -> None:
    """Test that every float survives formatting and parsing."""
    assert REAL.parse_weight(REAL.format_weight(value)) == value


@pytest.mark.parametrize(
    ("semiring", "token"),
    [
        (BOOLEAN, "true"),
        (BOOLEAN, "2"),
        (TROPICAL, "nan"),
        (TROPICAL, "-inf"),
        (LOG, "-inf"),
        (REAL, "abc"),
    ],
)
def test_parse_weight_rejects(semiring: Semiring, token: str) -> None:
    """Test that invalid weight tokens are rejected."""
    with pytest.raises(ValueError):
        semiring.parse_weight(token)


def test_negative_infinity_is_not_a_weight() -> None:
    """Test that -inf is refused for the negative-log semirings only."""
    for semiring in (TROPICAL, LOG):
        with pytest.raises(ValueError, match="-inf"):
            semiring.coerce(-math.inf)
    assert REAL.coerce(-math.inf) == -math.inf


def test_get_semiring() -> None:
    """Test semiring lookup by name."""
    assert get_semiring("tropical") is TROPICAL
    assert get_semiring("log") is LOG
    with pytest.raises(UnknownSemiringError, match="expected one of"):
        get_semiring("viterbi")


def test_is_close_tolerance() -> None:
    """Test that only the floating semirings compare with a tolerance."""
    assert REAL.is_close(1.0, 1.0 + 1e-12)
    assert not REAL.is_close(1.0, 1.001)
    assert not TROPICAL.is_close(1.0, 1.0 + 1e-12)
