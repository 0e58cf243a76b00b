import numpy as np
import pytest

from src.errors import RankError, SignatureError, ZeroVectorError
from src.geometry.perdom import (
    canonical_representative,
    degenerate_twistor_line,
    hyperkahler_plane,
    is_period_point,
    line_to_plane,
    period_point,
    plane_from_frame,
    plane_points,
    plane_to_line,
    signature,
    sphere_points,
    twistor_line,
    twistor_point,
)
from src.utils.numerics import subspace_distance

E = np.eye(4)
SQRT_HALF = 1 / np.sqrt(2)


@pytest.mark.parametrize(
    "vector,expected",
    [
        ([1, 1j, 0, 0], True),
        ([1, 0, 0, 1], False),
        ([1, 0, 0, 0], False),
        ([1, 0, 1j, 0], True),
    ],
)
def test_is_period_point(lorentz, vector, expected):
    assert is_period_point(lorentz, vector) is expected


def test_zero_is_not_a_line(lorentz):
    with pytest.raises(ZeroVectorError):
        is_period_point(lorentz, np.zeros(4))
    with pytest.raises(ZeroVectorError):
        canonical_representative(np.zeros(4))


def test_canonical_representative():
    np.testing.assert_allclose(canonical_representative([0, 2j, 0]), [0, 1, 0])
    np.testing.assert_allclose(canonical_representative([1j, -1, 0, 0]), [SQRT_HALF, 1j * SQRT_HALF, 0, 0])


def test_period_point_is_projective(lorentz):
    a = period_point(lorentz, [1, 1j, 0, 0])
    b = period_point(lorentz, [3j, -3, 0, 0])
    assert a.distance(b) < 1e-15
    assert a.q_llbar == pytest.approx(1.0)


@pytest.mark.parametrize(
    "basis,expected",
    [
        (E, (3, 0, 1)),
        ([E[0] + E[3]], (0, 1, 0)),
        ([E[0], E[1], E[2] + E[3]], (2, 1, 0)),
        ([E[0], E[1], E[0] + E[3]], (2, 0, 1)),
    ],
)
def test_signature(lorentz, basis, expected):
    assert signature(lorentz, np.array(basis)) == expected


def test_signature_of_dependent_basis(lorentz):
    with pytest.raises(RankError):
        signature(lorentz, np.array([E[0], 2 * E[0]]))


def test_line_to_plane(lorentz):
    plane = line_to_plane(period_point(lorentz, [1, 1j, 0, 0]))
    assert plane.signature == (2, 0, 0)
    assert subspace_distance(plane.basis.T, E[:2].T) < 1e-12


def test_plane_to_line_orientations(lorentz):
    plane = plane_from_frame(lorentz, E[:2])
    np.testing.assert_allclose(plane_to_line(plane).rep, [SQRT_HALF, 1j * SQRT_HALF, 0, 0], atol=1e-15)
    np.testing.assert_allclose(plane_to_line(plane.reversed()).rep, [SQRT_HALF, -1j * SQRT_HALF, 0, 0], atol=1e-15)


def test_plane_to_line_needs_positive_plane(lorentz):
    with pytest.raises(SignatureError):
        plane_to_line(plane_from_frame(lorentz, [E[0], E[3]]))


@pytest.mark.parametrize("seed", range(10))
def test_line_plane_roundtrip(lorentz, seed):
    rng = np.random.default_rng(seed)
    frame = np.array([E[0] + 0.2 * rng.standard_normal() * E[3], E[1] + 0.2 * rng.standard_normal() * E[3]])
    frame[:, :3] = frame[:, :3] @ np.linalg.qr(rng.standard_normal((3, 3)))[0]
    plane = plane_from_frame(lorentz, frame)
    point = plane_to_line(plane)
    back = line_to_plane(point)
    assert subspace_distance(plane.basis.T, back.basis.T) < 1e-10
    assert plane_to_line(back).distance(point) < 1e-10


def test_twistor_normals(lorentz):
    plane = hyperkahler_plane(lorentz, E[0], E[1], E[2])
    np.testing.assert_allclose(twistor_point(plane, [0, 0, 1]).rep, [SQRT_HALF, 1j * SQRT_HALF, 0, 0], atol=1e-15)
    np.testing.assert_allclose(twistor_point(plane, [0, 0, -1]).rep, [SQRT_HALF, -1j * SQRT_HALF, 0, 0], atol=1e-15)


def test_twistor_line_lies_in_period_domain(lorentz):
    plane = hyperkahler_plane(lorentz, E[0], E[1], E[2])
    samples = twistor_line(plane, 100)
    assert len(samples) == 100
    for normal, point in samples:
        assert is_period_point(lorentz, point.rep)
        opposite = twistor_point(plane, -normal)
        np.testing.assert_allclose(opposite.rep, canonical_representative(np.conj(point.rep)), atol=1e-10)


def test_sphere_points_are_unit():
    np.testing.assert_allclose(np.linalg.norm(sphere_points(50), axis=1), 1.0)


def test_twistor_line_needs_positive_three_plane(lorentz):
    with pytest.raises(SignatureError):
        twistor_line(plane_from_frame(lorentz, [E[0], E[1], E[3]]), 10)


def test_hyperkahler_plane_needs_orthogonal_triple(lorentz):
    with pytest.raises(SignatureError):
        hyperkahler_plane(lorentz, E[0], E[0] + E[1], E[2])


def degenerate(space):
    return plane_from_frame(space, [E[0], E[1], E[2] + E[3]])


def test_degenerate_line_at_zero(lorentz):
    point = degenerate_twistor_line(degenerate(lorentz), 0)
    np.testing.assert_allclose(point.rep, [SQRT_HALF, 1j * SQRT_HALF, 0, 0], atol=1e-15)
    assert point.q_llbar == pytest.approx(1.0)


@pytest.mark.parametrize("t", [0, 1, 1j, 3 - 2j, 100, -100j, 70 + 70j])
def test_degenerate_planes_are_positive(lorentz, t):
    plane = degenerate(lorentz)
    basis = plane_points(plane, t)
    np.testing.assert_allclose(basis @ lorentz.gram @ basis.T, np.eye(2), atol=1e-12)
    assert is_period_point(lorentz, degenerate_twistor_line(plane, t).rep)


def test_degenerate_line_is_injective(lorentz):
    plane = degenerate(lorentz)
    ts = [0, 1, 1j, -1, 2 + 2j, 10j]
    points = [degenerate_twistor_line(plane, t) for t in ts]
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            assert points[i].distance(points[j]) > 1e-6


def test_degenerate_line_needs_null_direction(lorentz):
    with pytest.raises(SignatureError):
        degenerate_twistor_line(plane_from_frame(lorentz, [E[0], E[1], E[2]]), 1)


def test_degenerate_line_needs_orthogonal_null_direction(lorentz):
    with pytest.raises(SignatureError):
        degenerate_twistor_line(plane_from_frame(lorentz, [E[0], E[1], E[0] + E[3]]), 1)
