"""Built-in test functions and initial data selectable by name."""

import math

import numpy as np

from .analytic import PROFILES
from .conformable import ScalarFunction

__all__ = ["FUNCTION_NAMES", "function", "PROFILES"]

FUNCTION_NAMES = ("sin", "exp", "poly3", "khalil_example")


def _khalil(alpha: float) -> ScalarFunction:
    # x^a sin(x^(1-a)), extended by 0 at the origin
    a = alpha

    def f(x):
        return 0.0 if x == 0.0 else x**a * math.sin(x ** (1.0 - a))

    def df(x):
        s = x ** (1.0 - a)
        return a * x ** (a - 1.0) * math.sin(s) + (1.0 - a) * math.cos(s)

    return ScalarFunction(f, df, "khalil_example")


def function(name: str, alpha: float = 1.0) -> ScalarFunction:
    """Look up a catalog function; ``alpha`` only matters for ``khalil_example``."""
    if name == "sin":
        return ScalarFunction(np.sin, np.cos, "sin")
    if name == "exp":
        return ScalarFunction(np.exp, np.exp, "exp")
    if name == "poly3":
        return ScalarFunction(lambda t: t**3, lambda t: 3.0 * t**2, "poly3")
    if name == "khalil_example":
        return _khalil(alpha)
    raise KeyError(f"unknown function {name!r}; choose from {', '.join(FUNCTION_NAMES)}")
