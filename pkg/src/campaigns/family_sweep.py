"""Degenerate twistor family sweep over a t-grid"""

import logging
from functools import partial
from typing import List

from ..geometry.perdom import degenerate_twistor_line
from ..geometry.twistor import (
    family_period,
    fiber_invariance,
    period_plane,
    standard_model,
    sweep_member,
    verify_power_condition,
)
from ..models.report import Check
from .base import Campaign, Job

logger = logging.getLogger(__name__)


class FamilySweepCampaign(Campaign):
    """Power condition, fiber invariance and per-t member checks on a standard model"""

    command = "family-sweep"

    def __init__(self, config, threads: int = 1):
        super().__init__(config, threads)
        self.m = standard_model(config.n)

    def model(self):
        return self.m.to_json()

    def _period_consistency(self, t: complex) -> List[Check]:
        plane = period_plane(self.m)
        expected = degenerate_twistor_line(plane, t, self.tol.period)
        found = family_period(self.m, t)
        distance = found.distance(expected)
        return [Check("period_consistency", distance, distance <= 1e-12, t=complex(t))]

    def jobs(self) -> List[Job]:
        seed, tol, ts = self.config.seed, self.tol, self.config.t
        logger.debug("sweeping n=%d over %d values of t", self.m.n, len(ts))
        jobs = [
            Job("power_condition", partial(verify_power_condition, self.m, ts, seed, tol.structure)),
            Job("fiber_invariance", partial(fiber_invariance, self.m, ts, seed, tol.fiber)),
        ]
        for t in ts:
            member = partial(sweep_member, self.m, t, seed, tol.structure, tol.composition, tol.holomorphy)
            jobs.append(Job("family_member", member, t=t))
            if self.m.n == 1:
                jobs.append(Job("period_consistency", partial(self._period_consistency, t), t=t))
        return jobs
