"""Small complex-arithmetic utilities: stable quadratics, 2x2 matrices.

Everything works on built-in ``complex`` scalars and plain nested lists, so
the core analysis has no third-party dependencies.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from .errors import NonFiniteError

Matrix2 = list[list[complex]]  # row-major 2x2 complex matrix


def is_finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def require_finite(z: complex, what: str) -> complex:
    if not is_finite(z):
        raise NonFiniteError(f"{what} is not finite: {z!r}")
    return z


def principal_sqrt(z: complex) -> complex:
    """Principal complex square root.

    Branch cut along the negative real axis; the result has non-negative
    real part, and negative real inputs map to the positive imaginary axis.
    ``cmath.sqrt`` implements exactly this convention.
    """
    return cmath.sqrt(z)


def quadratic_roots(b: complex, c: complex) -> tuple[complex, complex]:
    """Roots of x^2 + b*x + c = 0, larger magnitude first.

    Uses the cancellation-free form: the dominant root comes from the sign
    of the square root that avoids subtraction, the companion from the root
    product c (when nonzero).
    """
    sq = principal_sqrt(b * b - 4 * c)
    # pick the sign that makes |-b -/+ sq| largest
    if abs(-b + sq) >= abs(-b - sq):
        big = (-b + sq) / 2
    else:
        big = (-b - sq) / 2
    if big == 0:
        return 0j, 0j
    small = c / big
    return big, small


def root_moduli(b: complex, c: complex) -> tuple[float, float]:
    """Moduli of the roots of x^2 + b*x + c = 0, descending."""
    r1, r2 = quadratic_roots(b, c)
    m1, m2 = abs(r1), abs(r2)
    return (m1, m2) if m1 >= m2 else (m2, m1)


def mat_mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]


def mat_vec(a: Matrix2, v: Sequence[complex]) -> list[complex]:
    return [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]


def mat_trace(a: Matrix2) -> complex:
    return a[0][0] + a[1][1]


def mat_det(a: Matrix2) -> complex:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def eigen_moduli(a: Matrix2) -> tuple[float, float]:
    """Eigenvalue moduli of a 2x2 complex matrix, descending.

    Solves the characteristic quadratic x^2 - tr*x + det = 0 with the
    stable solver; no linear-algebra dependency needed at this size.
    """
    return root_moduli(-mat_trace(a), mat_det(a))


def vec_norm(v: Sequence[complex]) -> float:
    """Euclidean norm of a complex 2-vector (norm of its 4 real parts)."""
    return math.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)


def rel_error(got: complex, want: complex, floor: float = 1.0) -> float:
    """|got - want| scaled by max(|want|, floor).

    The floor makes the comparison effectively absolute for tiny entries,
    the usual convention for derivative checks.
    """
    return abs(got - want) / max(abs(want), floor)
