"""
Tests for command-line text parsing.
"""

import pytest

from src.services.exceptions import ParseError
from src.services.repquiver import Multisegment
from src.utils.parsing import (
    parse_coefficients,
    parse_dim,
    parse_int_list,
    parse_multisegment,
    parse_ranks,
)


def test_parse_dim():
    """Test dimension vectors with and without whitespace."""
    assert parse_dim("1,3,1") == (1, 3, 1)
    assert parse_dim(" 2 , 0 ") == (2, 0)


@pytest.mark.parametrize("text,position", [
    ("1,x,1", 2),
    ("1,2,", 4),
    ("1 2", 2),
    ("-1,2", 0),
])
def test_parse_dim_error_positions(text, position):
    """Test that parse errors point at the offending character."""
    with pytest.raises(ParseError) as excinfo:
        parse_dim(text)
    assert excinfo.value.position == position
    assert "^" in str(excinfo.value)


def test_empty_lists():
    """Test that empty input is rejected unless allowed."""
    with pytest.raises(ParseError):
        parse_dim("")
    assert parse_int_list("", allow_empty=True) == []


def test_parse_ranks():
    """Test that the rank vector length is checked against n."""
    assert parse_ranks("1,1", 3) == (1, 1)
    assert parse_ranks("", 1) == ()

    with pytest.raises(ParseError):
        parse_ranks("1", 3)


def test_parse_multisegment():
    """Test the [i..j]^m grammar with omitted multiplicities and whitespace."""
    expected = Multisegment.from_dict(2, {(1, 2): 1, (2, 2): 3})
    assert parse_multisegment("[1..2]+[2..2]^3") == expected
    assert parse_multisegment(" [1..2] + [2..2]^3 ") == expected
    assert parse_multisegment("[1..2]^1+[2..2]^3") == expected
    assert parse_multisegment("[1..1]+[1..1]") == Multisegment.simple(1, 1, 2)


def test_rank_inference_and_override():
    """Test that n defaults to the largest right end and can be raised."""
    assert parse_multisegment("[2..2]").n == 2
    assert parse_multisegment("[2..2]", n=4) == Multisegment.simple(4, 2)


def test_zero_multisegment_needs_rank():
    """Test the zero class."""
    assert parse_multisegment("0", n=3) == Multisegment.zero(3)

    with pytest.raises(ParseError):
        parse_multisegment("0")


@pytest.mark.parametrize("text,n,position", [
    ("[1..2]+[3..1]", 3, 7),
    ("[1..4]", 3, 0),
    ("[1..1]^0", None, 7),
    ("[1..1][2..2]", None, 6),
    ("[1.2]", None, 2),
    ("", None, 0),
])
def test_multisegment_errors(text, n, position):
    """Test malformed multisegments and out-of-range intervals."""
    with pytest.raises(ParseError) as excinfo:
        parse_multisegment(text, n)
    assert excinfo.value.position == position


@pytest.mark.parametrize("text", ["[1..2]", "[1..1]+[2..3]^2", "[1..3]^4+[2..2]+[3..3]^2"])
def test_printed_multisegments_reparse(text):
    """Test that rendering and parsing agree."""
    M = parse_multisegment(text)
    assert str(M) == text
    assert parse_multisegment(str(M), M.n) == M


def test_parse_coefficients():
    """Test cache payloads, including signs and the empty payload."""
    assert parse_coefficients("1,0,-2") == [1, 0, -2]
    assert parse_coefficients("") == []

    with pytest.raises(ParseError):
        parse_coefficients("1,,2")
