"""Dense univariate polynomial helpers.

Polynomials are plain lists of coefficients, index = power. The helpers are
agnostic to the coefficient type, so the same code runs on ``int``,
``Fraction``, ``float`` and ``mpmath.mpf``.
"""
from __future__ import annotations

from math import comb
from typing import Sequence


def trim(a: list) -> list:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(x + y)
    return out


def scale(a: Sequence, c) -> list:
    return [c * x for x in a]


def mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def power(a: Sequence, n: int) -> list:
    out: list = [1]
    for _ in range(n):
        out = mul(out, a)
    return out


def deriv(a: Sequence) -> list:
    return [i * a[i] for i in range(1, len(a))] or [0 * a[0] if a else 0]


def horner(a: Sequence, x):
    acc = 0 * x
    for c in reversed(a):
        acc = acc * x + c
    return acc


def shift(a: Sequence, h) -> list:
    """Coefficients of ``a(t + h)`` as a polynomial in ``t``."""
    n = len(a)
    out = [0] * n
    hp = [1] * n
    for k in range(1, n):
        hp[k] = hp[k - 1] * h
    for k, c in enumerate(a):
        if c == 0:
            continue
        for j in range(k + 1):
            out[j] += c * comb(k, j) * hp[k - j]
    return out


def divide_linear(a: Sequence, root):
    """Synthetic division by ``(t - root)``: returns ``(quotient, remainder)``."""
    if len(a) <= 1:
        return [0], (a[0] if a else 0)
    q = [0] * (len(a) - 1)
    acc = a[-1]
    for k in range(len(a) - 2, -1, -1):
        q[k] = acc
        acc = a[k] + acc * root
    return q, acc
