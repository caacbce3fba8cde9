import mpmath


def close(a, b, tol):
    """|a - b| <= tol, evaluated at a precision well above tol."""
    with mpmath.workdps(120):
        return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) <= mpmath.mpf(tol)


def mp(text):
    """Oracle string -> mpf at high precision."""
    with mpmath.workdps(120):
        return mpmath.mpf(text)


ACCEPTANCE_LINES: list = []
