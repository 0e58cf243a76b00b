"""Randomized positivity lemma campaigns"""

import logging
from functools import partial
from typing import List

import numpy as np

from ..errors import LemmaViolation
from ..geometry.acs import standard_structure
from ..geometry.positivity import (
    check_weak_positivity,
    cone_pairing,
    point_form,
    random_strongly_positive,
    semipositive_rank,
    verify_lemma_pair,
)
from ..geometry.twistor import standard_model
from ..models.point_form import PositivityBudget
from ..models.report import Check
from .base import Campaign, Job

logger = logging.getLogger(__name__)

DUALITY_TRIALS = 20
DUALITY_BUDGET = PositivityBudget(restarts=4, steps=40)


class VerifyLemmasCampaign(Campaign):
    """The vanishing lemma for every p, the rank dichotomy of eta and strong/weak cone duality"""

    command = "verify-lemmas"

    def _ps(self) -> List[int]:
        if self.config.p is not None:
            return [self.config.p]
        return list(range(self.config.n + 1))

    def _lemma_pair(self, p: int) -> List[Check]:
        n, trials, seed = self.config.n, self.config.trials, self.config.seed
        params = {"n": n, "p": p, "trials": trials}
        try:
            report = verify_lemma_pair(n, p, trials, seed, self.config.inject_bug)
        except LemmaViolation as e:
            self.campaigns.append(e.report)
            violations = e.report["violations"]
            logger.warning("lemma pair n=%d p=%d: %d violations", n, p, len(violations))
            witness = {"count": len(violations), "first": violations[0]}
            return [Check("lemma_pair", float(len(violations)), False, witness=witness, params=params)]
        self.campaigns.append(report)
        return [Check("lemma_pair", 0.0, True, params=params)]

    def _rank_dichotomy(self) -> List[Check]:
        m = standard_model(self.config.n)
        rng = np.random.default_rng([self.config.seed, m.n])
        structure = standard_structure(m.dim)
        found = set()
        for point in rng.uniform(0.0, 1.0, (8, m.dim)):
            found.add(semipositive_rank(point_form(m.eta, structure, point), self.tol.positivity).rank)
        rank = found.pop() if len(found) == 1 else -1
        passed = rank == 2 * m.n
        witness = None if passed else {"ranks": sorted(found | {rank})}
        return [Check("semipositive_rank", float(abs(rank - 2 * m.n)), passed, witness=witness,
                      params={"n": m.n, "rank": rank})]

    def _duality(self, p: int) -> List[Check]:
        """Strongly positive forms are weakly positive and pair non-negatively with strong forms"""
        size = 2 * self.config.n
        if not 1 <= p < size:
            return []
        worst, witness = 0.0, None
        for index in range(DUALITY_TRIALS):
            seed = self.config.seed + index
            strong = random_strongly_positive(size, p, 3, seed)
            other = random_strongly_positive(size, size - p, 3, seed + 1)
            pairing = cone_pairing(strong, other)
            verdict = check_weak_positivity(strong, DUALITY_BUDGET, seed, self.tol.positivity)
            if verdict.violated or pairing < -self.tol.positivity:
                worst = max(worst, -pairing, -(verdict.value or 0.0))
                witness = witness or {"index": index, "pairing": pairing, "verdict": verdict.to_json()}
        return [Check("cone_duality", worst, witness is None, witness=witness,
                      params={"n": size, "p": p, "trials": DUALITY_TRIALS})]

    def jobs(self) -> List[Job]:
        jobs = [Job("semipositive_rank", self._rank_dichotomy, params={"n": self.config.n})]
        for p in self._ps():
            jobs.append(Job("lemma_pair", partial(self._lemma_pair, p), params={"n": self.config.n, "p": p}))
            jobs.append(Job("cone_duality", partial(self._duality, p), params={"n": 2 * self.config.n, "p": p}))
        return jobs
