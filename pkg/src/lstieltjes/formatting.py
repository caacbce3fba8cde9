"""Decimal-string rendering of mpmath numbers for JSON/CSV output."""

import mpmath


def decimal_string(x, digits: int) -> str:
    """Render a real number with ``digits`` significant digits, never via float.

    mpf inputs are rendered as they are; converting them first would round
    to the ambient precision.
    """
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpmathify(x)
    if x == 0:
        return "0.0"
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-20, max_fixed=digits + 1)


def number_record(z, digits: int):
    """Real -> decimal string; complex -> {"re": ..., "im": ...}.

    A component smaller than 10^-(digits+5) |z| is round-off at the requested
    precision and is written as zero; a complex value whose imaginary part is
    zero is written as a real.
    """
    if isinstance(z, (mpmath.mpc, complex)):
        if isinstance(z, complex):
            z = mpmath.mpc(z)
        chop = abs(z) * mpmath.mpf(10) ** (-(digits + 5))
        re_part = z.real if abs(z.real) > chop else mpmath.mpf(0)
        im_part = z.imag if abs(z.imag) > chop else mpmath.mpf(0)
        if im_part == 0:
            return decimal_string(re_part, digits)
        return {"re": decimal_string(re_part, digits), "im": decimal_string(im_part, digits)}
    return decimal_string(z, digits)


def residual_string(x) -> str:
    """Short rendering for residuals, which only need a few digits."""
    if mpmath.isinf(x):
        return "inf"
    return mpmath.nstr(x, 5)
