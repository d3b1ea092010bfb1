"""Bessel evaluations shared by the mode solver and the field evaluators.

Thin wrappers over scipy.special so that every consumer goes through one
choke point with domain checking; the test suite validates these against
an independent arbitrary-precision series oracle.
"""

from __future__ import annotations

import numpy as np
from scipy import special


class DomainError(ValueError):
    """Argument outside the domain of the requested Bessel family."""


def bessel_j(order: int, x):
    """Bessel function of the first kind J_order(x)."""
    return special.jv(order, x)


def bessel_j_prime(order: int, x):
    """First derivative J'_order(x)."""
    return special.jvp(order, x)


def bessel_k(order: int, x):
    """Modified Bessel function of the second kind K_order(x); requires x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("K_n(x) requires x > 0")
    return special.kv(order, x)


def bessel_k_prime(order: int, x):
    """First derivative K'_order(x); requires x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("K'_n(x) requires x > 0")
    return special.kvp(order, x)


_KINDS = {
    "J": bessel_j,
    "K": bessel_k,
    "J'": bessel_j_prime,
    "K'": bessel_k_prime,
    "Jp": bessel_j_prime,
    "Kp": bessel_k_prime,
}


def bessel_suite(kind: str, order: int, x):
    """Dispatch a Bessel evaluation by family name.

    ``kind`` is one of ``J``, ``K``, ``J'``/``Jp``, ``K'``/``Kp``.
    """
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown Bessel kind {kind!r}; expected one of {sorted(set(_KINDS))}")
    return fn(order, x)


__all__ = [
    "DomainError",
    "bessel_j",
    "bessel_j_prime",
    "bessel_k",
    "bessel_k_prime",
    "bessel_suite",
]
