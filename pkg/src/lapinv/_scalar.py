"""Exact rational scalar backend.

``gmpy2.mpq`` is used when importable; setting ``LAPINV_PURE_PYTHON=1`` in the
environment forces :class:`fractions.Fraction`. Both are exact, hash and
compare identically, so results never depend on the backend.
"""

from __future__ import annotations

import os
from fractions import Fraction
from numbers import Rational

_FORCE_PURE = os.environ.get("LAPINV_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    Scalar = Fraction
    BACKEND = "fraction"
else:
    try:
        from gmpy2 import mpq as Scalar  # type: ignore[assignment]

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        Scalar = Fraction
        BACKEND = "fraction"

ZERO = Scalar(0)
ONE = Scalar(1)


def to_scalar(value) -> "Scalar":
    """Convert ints, rationals and rational strings to the exact scalar type.

    Floats are refused: silently importing binary rounding error would defeat
    the point of exact verdicts.
    """
    if isinstance(value, bool):
        return Scalar(int(value))
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float coefficient {value!r}")
    if isinstance(value, str):
        return Scalar(Fraction(value.strip()))
    if isinstance(value, (int, Rational)):
        return Scalar(value)
    # mpq / mpz are registered as numbers.Rational, but be lenient with other
    # exact integer-likes (numpy ints).
    try:
        import numpy as np

        if isinstance(value, np.integer):
            return Scalar(int(value))
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def as_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def scalar_str(value) -> str:
    f = as_fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"
