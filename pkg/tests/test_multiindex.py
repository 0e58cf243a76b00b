import numpy as np
import pytest

from src.utils.multiindex import double_factorial, merge, perfect_matchings, sort_with_sign


@pytest.mark.parametrize("size", [0, 2, 4, 6, 8])
def test_matching_count(size):
    matchings = perfect_matchings(tuple(range(size)))
    assert len(matchings) == double_factorial(size - 1)
    assert len({pairs for _, pairs in matchings}) == len(matchings)


def test_odd_tuple_has_no_matchings():
    assert perfect_matchings((0, 1, 2)) == ()


def test_matchings_of_four():
    assert perfect_matchings((0, 1, 2, 3)) == (
        (1, ((0, 1), (2, 3))),
        (-1, ((0, 2), (1, 3))),
        (1, ((0, 3), (1, 2))),
    )


@pytest.mark.parametrize("items", [(0, 1, 2, 3), (1, 4, 5, 7, 8, 9)])
def test_matching_sign_is_flattened_parity(items):
    for sign, pairs in perfect_matchings(items):
        flat = tuple(i for pair in pairs for i in pair)
        assert sort_with_sign(flat) == (sign, items)


@pytest.mark.parametrize("size", [2, 4, 6])
@pytest.mark.parametrize("seed", range(3))
def test_pfaffian_squares_to_determinant(size, seed):
    a = np.random.default_rng(seed).standard_normal((size, size))
    a = a - a.T
    pfaffian = sum(
        sign * np.prod([a[i, j] for i, j in pairs]) for sign, pairs in perfect_matchings(tuple(range(size)))
    )
    assert pfaffian ** 2 == pytest.approx(np.linalg.det(a), rel=1e-9)


def test_merge_sign():
    assert merge((0, 2), (1,)) == (-1, (0, 1, 2))
    assert merge((0,), (0, 1)) == (0, None)
