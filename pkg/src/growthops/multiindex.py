"""Multi-index sets and multinomial coefficients.

Compositions, weak compositions and coordinate tuples are returned as lists of
plain integer tuples in lexicographic order. All arithmetic is exact.
"""

from functools import lru_cache
from itertools import product
from math import comb, factorial

__all__ = [
    "compositions",
    "weak_compositions",
    "restricted_weak_compositions",
    "multinomial",
    "coordinate_tuples",
    "composition_count",
]


@lru_cache(maxsize=None)
def _compositions(i, j):
    if j == 1:
        return ((i,),) if i >= 1 else ()
    out = []
    for first in range(1, i - j + 2):
        for rest in _compositions(i - first, j - 1):
            out.append((first,) + rest)
    return tuple(out)


def compositions(i, j):
    """All k = (k_1, ..., k_j) with positive parts and k_1 + ... + k_j = i.

    Empty when i < j. Order is lexicographic.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    if i < j:
        return []
    return list(_compositions(i, j))


@lru_cache(maxsize=None)
def _weak(i, j):
    if j == 1:
        return ((i,),)
    out = []
    for first in range(0, i + 1):
        for rest in _weak(i - first, j - 1):
            out.append((first,) + rest)
    return tuple(out)


def weak_compositions(i, j):
    """All j-tuples of nonnegative integers summing to i (C(i+j-1, j-1) of them)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if i < 0:
        return []
    return list(_weak(i, j))


def restricted_weak_compositions(i, j, zero_slots):
    """Weak compositions of i into j parts that vanish exactly on ``zero_slots``.

    ``zero_slots`` holds 1-based positions r_1, ..., r_s; every other part is
    required to be positive.
    """
    zs = set(zero_slots)
    if any(r < 1 or r > j for r in zs):
        raise ValueError("zero slot outside 1..j")
    free = [t for t in range(1, j + 1) if t not in zs]
    if not free:
        return [tuple([0] * j)] if i == 0 else []
    out = []
    for parts in compositions(i, len(free)):
        k = [0] * j
        for t, v in zip(free, parts):
            k[t - 1] = v
        out.append(tuple(k))
    return sorted(out)


def multinomial(n, k):
    """n! / (k_1! ... k_j!) as an exact integer.

    Requires n >= 0 and 0 <= k_t with sum(k) <= n. When sum(k) < n the value is
    still an integer (the multinomial of the completed tuple times (n - |k|)!).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if any(kt < 0 for kt in k):
        raise ValueError("parts must be nonnegative")
    if sum(k) > n:
        raise ValueError("sum of parts exceeds n")
    denom = 1
    for kt in k:
        denom *= factorial(kt)
    return factorial(n) // denom


def coordinate_tuples(j, N):
    """All l = (l_1, ..., l_j) with 1 <= l_t <= N, N**j of them, lexicographic."""
    if j < 1 or N < 1:
        raise ValueError("j and N must be >= 1")
    return list(product(range(1, N + 1), repeat=j))


def composition_count(i, j):
    """|K_{i,j}| = C(i-1, j-1) for i >= j >= 1, else 0."""
    if j < 1 or i < j:
        return 0
    return comb(i - 1, j - 1)
