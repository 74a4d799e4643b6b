"""
Parsing of command-line text: dimension vectors, integer lists and multisegments.

Every error carries the 0-based character position of the offending token.
"""

from typing import List, Optional, Tuple

from src.services.exceptions import ParseError
from src.services.repquiver import DimVector, Multisegment


class _Scanner:
    """Character cursor over a string, skipping whitespace between tokens."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_whitespace(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_whitespace()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_whitespace()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token: str):
        self.skip_whitespace()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos:self.pos + len(token)] or "end of input"
            raise ParseError(f"Expected '{token}' but found '{found}'", self.text, self.pos)
        self.pos += len(token)

    def read_int(self, allow_sign: bool = False) -> Tuple[int, int]:
        """Read an integer; returns (value, start position)."""
        self.skip_whitespace()
        start = self.pos
        if allow_sign and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_start:
            raise ParseError("Expected an integer", self.text, start)
        return int(self.text[start:self.pos]), start


def parse_int_list(text: str, name: str = "list", allow_empty: bool = False) -> List[int]:
    """
    Parse a comma-separated list of nonnegative integers.

    Args:
        text: Input such as "1,3,1"
        name: Name used in error messages
        allow_empty: Accept the empty string as the empty list

    Raises:
        ParseError: On malformed input, with the position of the bad token
    """
    scanner = _Scanner(text)
    if scanner.at_end():
        if allow_empty:
            return []
        raise ParseError(f"Empty {name}", text, scanner.pos)
    values = []
    while True:
        value, _ = scanner.read_int()
        values.append(value)
        if scanner.at_end():
            return values
        scanner.expect(",")


def parse_dim(text: str) -> DimVector:
    """Parse a dimension vector such as "1,2,1"."""
    return tuple(parse_int_list(text, "dimension vector"))


def parse_ranks(text: str, n: int) -> Tuple[int, ...]:
    """Parse a rank vector r, which must have n - 1 entries."""
    values = parse_int_list(text, "rank vector", allow_empty=(n == 1))
    if len(values) != n - 1:
        raise ParseError(f"Rank vector needs {n - 1} entries for n={n}, got {len(values)}", text, 0)
    return tuple(values)


def parse_multisegment(text: str, n: Optional[int] = None) -> Multisegment:
    """
    Parse the grammar `[i..j]^m + ...`; `^1` may be omitted and `0` is the zero class.

    Args:
        text: Multisegment text, whitespace insignificant
        n: Quiver rank; inferred as the largest right end when omitted

    Raises:
        ParseError: On malformed text or an interval outside 1..n
    """
    scanner = _Scanner(text)
    if scanner.at_end():
        raise ParseError("Empty multisegment", text, scanner.pos)

    if scanner.peek() == "0":
        start = scanner.pos
        scanner.expect("0")
        if not scanner.at_end():
            raise ParseError("Unexpected text after '0'", text, scanner.pos)
        if n is None:
            raise ParseError("Rank n is needed to parse the zero multisegment", text, start)
        return Multisegment.zero(n)

    terms: List[Tuple[int, int, int, int]] = []
    while True:
        scanner.skip_whitespace()
        start = scanner.pos
        scanner.expect("[")
        i, _ = scanner.read_int()
        scanner.expect("..")
        j, _ = scanner.read_int()
        scanner.expect("]")
        multiplicity = 1
        if scanner.peek() == "^":
            scanner.expect("^")
            multiplicity, m_pos = scanner.read_int()
            if multiplicity < 1:
                raise ParseError("Multiplicity must be at least 1", text, m_pos)
        terms.append((i, j, multiplicity, start))
        if scanner.at_end():
            break
        scanner.expect("+")

    rank = n if n is not None else max(j for _, j, _, _ in terms)
    counts = {}
    for i, j, multiplicity, start in terms:
        if not 1 <= i <= j <= rank:
            raise ParseError(f"Interval [{i}..{j}] is not inside 1..{rank}", text, start)
        counts[(i, j)] = counts.get((i, j), 0) + multiplicity
    return Multisegment.from_dict(rank, counts)


def parse_coefficients(text: str) -> List[int]:
    """Parse a cache payload `c0,c1,...`; the empty payload is the zero polynomial."""
    scanner = _Scanner(text)
    if scanner.at_end():
        return []
    values = []
    while True:
        value, _ = scanner.read_int(allow_sign=True)
        values.append(value)
        if scanner.at_end():
            return values
        scanner.expect(",")
