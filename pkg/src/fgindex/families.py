"""Parametric example substitutions."""

from __future__ import annotations

from .automorphism import validate
from .words import Alphabet


def cyclic_family(n):
    """Rank-n map sending a0 to a0 a1 and rotating every other generator.

    a0 -> a0 a1, a_i -> a_{i+1} for 0 < i < n-1, a_{n-1} -> a0.  At n = 2
    this is the golden-mean map.  The inverse is supplied in closed form:
    a0 -> a_{n-1}, a1 -> a_{n-1}^-1 a0, a_i -> a_{i-1} for i >= 2.
    """
    if n < 2:
        raise ValueError("the family needs rank at least 2")
    alphabet = Alphabet([f"a{i}" for i in range(n)])
    images = [(1, 2)]
    for i in range(2, n):
        images.append((i + 1,))
    images.append((1,))
    inverse_images = [(n,), (-n, 1)]
    for j in range(3, n + 1):
        inverse_images.append((j - 1,))
    return validate(alphabet, tuple(images), tuple(inverse_images))
