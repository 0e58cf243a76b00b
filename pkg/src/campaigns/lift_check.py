"""Certificate for the lifted form on the total space of the family"""

from functools import partial
from typing import List

from ..geometry.acs import integrability_defect
from ..geometry.twistor import lifted_form_certificate, lifted_structure, standard_model
from ..models.report import Check
from .base import Campaign, Job


class LiftCheckCampaign(Campaign):
    """Four certificate stages plus integrability of the lifted structure"""

    command = "lift-check"

    def __init__(self, config, threads: int = 1):
        super().__init__(config, threads)
        self.m = standard_model(config.n)

    def model(self):
        return self.m.to_json()

    def _integrability(self) -> List[Check]:
        defect = integrability_defect(lifted_structure(self.m, self.config.seed), self.config.seed)
        return [Check("lift_integrability", defect, defect <= self.tol.structure)]

    def jobs(self) -> List[Job]:
        return [
            Job("lift_certificate", partial(lifted_form_certificate, self.m, self.config.seed, self.tol.cartan)),
            Job("lift_integrability", self._integrability),
        ]
