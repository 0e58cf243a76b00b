"""Sampling of twistor lines and degenerate twistor lines in a lattice preset"""

import logging
from threading import Lock
from typing import Any, List, Tuple

import numpy as np

from ..geometry.bbf import load_preset
from ..geometry.perdom import (
    canonical_representative,
    degenerate_twistor_line,
    hyperkahler_plane,
    is_period_point,
    line_to_plane,
    plane_from_frame,
    plane_points,
    plane_to_line,
    signature,
    twistor_line,
    twistor_point,
)
from ..models.lattice import QuadraticSpace
from ..models.period import PeriodPoint, Plane
from ..models.report import Check
from ..utils.numerics import subspace_distance
from .base import Campaign, Job

logger = logging.getLogger(__name__)


def eigenframe(space: QuadraticSpace) -> Tuple[np.ndarray, np.ndarray]:
    """q-orthonormal positive and negative directions, as columns"""
    eigenvalues, vectors = np.linalg.eigh(space.gram)
    order = np.argsort(-eigenvalues)
    eigenvalues, vectors = eigenvalues[order], vectors[:, order]
    positive = eigenvalues > 0
    negative = eigenvalues < 0
    return (
        vectors[:, positive] / np.sqrt(eigenvalues[positive]),
        vectors[:, negative] / np.sqrt(-eigenvalues[negative]),
    )


def degenerate_plane(space: QuadraticSpace) -> Plane:
    """(w1, w2, w3) = (p1, p2, p3 + n1): a (+, +, 0) plane with its null direction q-orthogonal"""
    positive, negative = eigenframe(space)
    frame = np.stack([positive[:, 0], positive[:, 1], positive[:, 2] + negative[:, 0]])
    return plane_from_frame(space, frame)


def positive_three_plane(space: QuadraticSpace) -> Plane:
    positive, _ = eigenframe(space)
    return hyperkahler_plane(space, positive[:, 0], positive[:, 1], positive[:, 2])


def random_positive_plane(space: QuadraticSpace, rng: np.random.Generator) -> Plane:
    """Random oriented positive 2-plane: a rotated positive pair tilted towards negative directions"""
    positive, negative = eigenframe(space)
    rotation, _ = np.linalg.qr(rng.standard_normal((positive.shape[1], 2)))
    tilt = 0.3 * rng.standard_normal((negative.shape[1], 2))
    frame = (positive @ rotation + negative @ tilt).T
    orientation = int(rng.choice([-1, 1]))
    return plane_from_frame(space, frame, orientation)


def _row(leading: List[float], point: PeriodPoint) -> List[Any]:
    row: List[Any] = list(leading)
    for z in point.rep:
        row.extend([z.real, z.imag])
    row.extend([abs(point.q_ll), point.q_llbar])
    return row


class PeriodLineCampaign(Campaign):
    """Period membership, positivity and round-trips of sampled lines"""

    command = "period-line"

    def __init__(self, config, threads: int = 1):
        super().__init__(config, threads)
        self.ring = load_preset(config.lattice)
        self.space = self.ring.space
        self._rows: List[List[Any]] = []
        self._lock = Lock()

    def model(self):
        return {"lattice": self.ring.name or self.config.lattice, "b": self.ring.b, "kind": self.config.kind}

    def header(self) -> List[str]:
        leading = ["t_re", "t_im"] if self.config.kind == "degenerate" else ["x", "y", "z"]
        components = []
        for i in range(self.space.b):
            components.extend([f"l{i + 1}_re", f"l{i + 1}_im"])
        return leading + components + ["q_ll_residual", "q_llbar"]

    def rows(self) -> List[List[Any]]:
        return list(self._rows)

    def _membership(self, points: List[PeriodPoint]) -> Check:
        worst, witness = 0.0, None
        for index, point in enumerate(points):
            residual = abs(point.q_ll) / point.q_llbar if point.q_llbar > 0 else float("inf")
            if residual > worst:
                worst = residual
            if not is_period_point(self.space, point.rep, self.tol.period) and witness is None:
                witness = {"index": index, "rep": point.rep}
        return Check("period_membership", worst, witness is None, witness=witness,
                     params={"kind": self.config.kind, "samples": len(points)})

    def _degenerate(self) -> List[Check]:
        plane = degenerate_plane(self.space)
        ts = self.config.t
        points = [degenerate_twistor_line(plane, t, self.tol.period) for t in ts]
        with self._lock:
            self._rows = [_row([t.real, t.imag], point) for t, point in zip(ts, points)]

        positivity = float("inf")
        for t in ts:
            basis = plane_points(plane, t, self.tol.period)
            gram = basis @ self.space.gram @ basis.T
            positivity = min(positivity, float(np.linalg.eigvalsh(gram)[0]))
        separation = min(
            (points[i].distance(points[j]) for i in range(len(points)) for j in range(i + 1, len(points))
             if ts[i] != ts[j]),
            default=1.0,
        )
        return [
            self._membership(points),
            Check("plane_positive", max(0.0, -positivity), positivity > 0, params={"kind": "degenerate"}),
            Check("injective", 0.0 if separation > 1e-9 else 1.0, separation > 1e-9,
                  params={"separation": separation}),
        ]

    def _twistor(self) -> List[Check]:
        plane = positive_three_plane(self.space)
        samples = twistor_line(plane, self.config.samples)
        with self._lock:
            self._rows = [_row(list(normal), point) for normal, point in samples]
        worst = 0.0
        for normal, point in samples:
            opposite = twistor_point(plane, -normal)
            conjugate = canonical_representative(np.conj(point.rep))
            worst = max(worst, float(np.max(np.abs(opposite.rep - conjugate))))
        return [
            self._membership([point for _, point in samples]),
            Check("antipodal_conjugate", worst, worst <= self.tol.period, params={"samples": len(samples)}),
        ]

    def _roundtrip(self) -> List[Check]:
        plane_error, line_error = 0.0, 0.0
        skipped = 0
        for index in range(self.config.trials):
            rng = np.random.default_rng([self.config.seed, index])
            plane = random_positive_plane(self.space, rng)
            if signature(self.space, plane.basis, self.tol.period) != (2, 0, 0):
                skipped += 1
                continue
            line = plane_to_line(plane)
            back = line_to_plane(line)
            orientation = _orientation(plane, back)
            plane_error = max(plane_error, subspace_distance(plane.basis.T, back.basis.T), float(orientation < 0))
            again = plane_to_line(back)
            line_error = max(line_error, again.distance(line))
        if skipped:
            logger.debug("skipped %d non-positive planes", skipped)
        defect = max(plane_error, line_error)
        return [Check("line_plane_roundtrip", defect, defect <= self.tol.period,
                      params={"trials": self.config.trials - skipped})]

    def jobs(self) -> List[Job]:
        sampler = self._degenerate if self.config.kind == "degenerate" else self._twistor
        return [
            Job("period_membership", sampler, params={"kind": self.config.kind}),
            Job("line_plane_roundtrip", self._roundtrip),
        ]


def _orientation(plane: Plane, other: Plane) -> float:
    """Sign comparing the oriented bases of two equal planes"""
    change = other.basis @ plane.basis.T
    return float(np.sign(np.linalg.det(change))) * plane.orientation * other.orientation
