"""Exact rational scalars and their wire format.

Scalars are ``fractions.Fraction`` throughout the package: arbitrary
precision, always reduced, positive denominator. The wire format is the
string "p/q" with "/q" omitted when q == 1.
"""

from fractions import Fraction

QQ = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce ints, "p/q" strings and Fractions to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        # tolerate the unicode minus that shows up in copied tables
        return Fraction(value.strip().replace("−", "-"))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "p/q", omitting the denominator 1."""
    return str(Fraction(value))
