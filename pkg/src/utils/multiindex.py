"""Increasing multi-index helpers shared by the exterior and positivity code"""

from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional, Tuple

Index = Tuple[int, ...]


@lru_cache(maxsize=None)
def sort_with_sign(indices: Index) -> Tuple[int, Optional[Index]]:
    """
    Sort an index tuple, tracking the permutation parity.

    Args:
        indices: Arbitrary tuple of axis numbers

    Returns:
        (sign, sorted tuple), or (0, None) when an axis repeats
    """
    if len(set(indices)) != len(indices):
        return 0, None
    items = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


@lru_cache(maxsize=None)
def merge(left: Index, right: Index) -> Tuple[int, Optional[Index]]:
    """Sign and sorted concatenation of two increasing tuples"""
    if set(left) & set(right):
        return 0, None
    # parity = number of pairs (a in left, b in right) with a > b
    inversions = sum(1 for a in left for b in right if a > b)
    merged = tuple(sorted(left + right))
    return (-1 if inversions % 2 else 1), merged


def increasing(size: int, degree: int) -> Iterator[Index]:
    """All increasing tuples of the given degree"""
    return combinations(range(size), degree)


@lru_cache(maxsize=None)
def perfect_matchings(items: Index) -> Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...]:
    """
    Every perfect matching of an increasing tuple as (sign, pairs).

    Each pair starts with its smaller entry and pairs are ordered by that entry. The
    sign is the parity of the flattened pairs against `items`, so summing
    sign * prod a[i, j] over the matchings gives the Pfaffian of an antisymmetric a.
    """
    if len(items) % 2:
        return ()
    if not items:
        return ((1, ()),)
    first, rest = items[0], items[1:]
    matchings = []
    for position, partner in enumerate(rest):
        remaining = rest[:position] + rest[position + 1:]
        for sign, pairs in perfect_matchings(remaining):
            matchings.append((-sign if position % 2 else sign, ((first, partner),) + pairs))
    return tuple(matchings)


def double_factorial(k: int) -> int:
    """k!! for odd or even k >= -1"""
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result
