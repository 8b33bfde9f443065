"""Deterministic number formatting for tables, CSV and SVG output.

All machine-readable output goes through :func:`fmt` so that repeated runs
with identical inputs are byte-identical: at most four digits after the
decimal point, '.' radix, no locale, no trailing zeros.
"""

from fractions import Fraction

# Magnitudes outside this window switch to exponent notation.
_DEC_LO = 1e-3
_DEC_HI = 1e6


def fmt(x) -> str:
    """Format a number with at most 4 decimal digits, locale-independent."""
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, int):
        return str(x)
    if x != x:  # NaN
        return "nan"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    mag = abs(x)
    if mag < _DEC_HI and x == int(x):
        return str(int(x))
    if _DEC_LO <= mag < _DEC_HI:
        s = f"{x:.4f}".rstrip("0").rstrip(".")
        return s if s not in ("", "-") else "0"
    mant, exp = f"{x:.4e}".split("e")
    mant = mant.rstrip("0").rstrip(".")
    return f"{mant}e{exp}"


def csv_line(values) -> str:
    """One CSV row; numbers via fmt, strings passed through."""
    cells = []
    for v in values:
        if v is None:
            cells.append("")
        elif isinstance(v, str):
            cells.append(v)
        else:
            cells.append(fmt(v))
    return ",".join(cells)
