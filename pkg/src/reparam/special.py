"""Gamma function and modified Bessel functions of the first kind.

Only real, positive arguments are supported. These are kept free of
scipy so they can serve as independent oracles for the rest of the package.
"""

import math

from .errors import DomainError

__all__ = [
    "gamma_function",
    "bessel_i0",
    "bessel_i1",
    "bessel_i0_series",
    "bessel_i0_asymptotic",
    "BESSEL_SWITCH",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

#: Argument above which the Bessel functions use the asymptotic expansion.
BESSEL_SWITCH = 15.0


def gamma_function(x: float) -> float:
    """Gamma function for ``x > 0`` via the Lanczos approximation.

    Arguments below 1/2 go through the reflection formula so the series is
    always evaluated where it is most accurate.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma_function requires x > 0, got {x!r}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_function(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    try:
        return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc
    except OverflowError:
        return math.exp(math.log(_SQRT_2PI * acc) + (z + 0.5) * math.log(t) - t)


def bessel_i0_series(z: float) -> float:
    """Power series of I0, summed until the relative term size is below 1e-16."""
    q = 0.25 * z * z
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-16 * total:
        k += 1
        term *= q / (k * k)
        total += term
    return total


def _asymptotic_sum(nu: int, z: float, terms: int | None) -> float:
    # sum_k (-1)^k a_k(nu) / z^k, truncated at the smallest term when terms is None
    mu = 4.0 * nu * nu
    a = 1.0
    total = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        if terms is not None and k >= terms:
            break
        a *= -(mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        size = abs(a)
        if terms is None and (size >= prev or size < 1e-17 * abs(total)):
            break
        total += a
        prev = size
    return total


def bessel_i0_asymptotic(z: float, terms: int | None = None) -> float:
    """Large-argument expansion of I0.

    ``terms=2`` gives ``e^z / sqrt(2 pi z) * (1 + 1/(8z))``; the default
    ``None`` sums the (divergent) series up to its smallest term.
    """
    if z <= 0.0:
        raise DomainError("asymptotic expansion requires z > 0")
    return math.exp(z) / math.sqrt(2.0 * math.pi * z) * _asymptotic_sum(0, z, terms)


def bessel_i0(z: float) -> float:
    """Modified Bessel function of the first kind, order 0, for ``z >= 0``."""
    z = float(z)
    if z < 0.0:
        raise DomainError(f"bessel_i0 requires z >= 0, got {z!r}")
    if z > BESSEL_SWITCH:
        return bessel_i0_asymptotic(z)
    return bessel_i0_series(z)


def _bessel_i1_series(z: float) -> float:
    half = 0.5 * z
    q = half * half
    term = half
    total = half
    k = 0
    while term > 1e-16 * total:
        k += 1
        term *= q / (k * (k + 1))
        total += term
    return total


def bessel_i1(z: float) -> float:
    """Modified Bessel function of the first kind, order 1, for ``z >= 0``."""
    z = float(z)
    if z < 0.0:
        raise DomainError(f"bessel_i1 requires z >= 0, got {z!r}")
    if z == 0.0:
        return 0.0
    if z > BESSEL_SWITCH:
        return math.exp(z) / math.sqrt(2.0 * math.pi * z) * _asymptotic_sum(1, z, None)
    return _bessel_i1_series(z)


def bessel_i1_over_z(z: float) -> float:
    """``I1(z) / z``, continuous at 0 where it equals 1/2."""
    if z == 0.0:
        return 0.5
    if z > BESSEL_SWITCH:
        return bessel_i1(z) / z
    q = 0.25 * z * z
    term = 0.5
    total = 0.5
    k = 0
    while term > 1e-16 * total:
        k += 1
        term *= q / (k * (k + 1))
        total += term
    return total
