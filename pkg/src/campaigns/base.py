"""Abstract base class for verification campaigns"""

import asyncio
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from .. import __version__
from ..errors import TwistorForgeError
from ..models.report import Check, Report
from ..utils.config import RunConfig

logger = logging.getLogger(__name__)


@dataclass
class Job:
    """A unit of work producing checks; a raised TwistorForgeError becomes one failed check"""
    name: str
    func: Callable[[], List[Check]]
    t: Optional[complex] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def failure(self, error: TwistorForgeError) -> Check:
        witness = dict(error.witness or {})
        witness["error"] = type(error).__name__
        witness["message"] = str(error)
        defect = error.details.get("deviation", error.details.get("max_defect", float("inf")))
        return Check(self.name, float(defect), False, t=self.t, witness=witness, params=dict(self.params))


class Campaign(ABC):
    """A CLI subcommand: builds its model, fans jobs out to worker threads, aggregates a Report"""

    command: str = ""

    def __init__(self, config: RunConfig, threads: int = 1):
        self.config = config
        self.threads = max(1, threads)
        self.campaigns: List[Dict[str, Any]] = []

    @property
    def tol(self):
        return self.config.tolerances

    def model(self) -> Optional[Dict[str, Any]]:
        """Model description embedded in the report"""
        return None

    @abstractmethod
    def jobs(self) -> List[Job]:
        """Independent units of work"""
        pass

    def rows(self) -> List[List[Any]]:
        """CSV rows, for campaigns that produce tables"""
        return []

    def header(self) -> List[str]:
        return []

    async def _run_job(self, semaphore: asyncio.Semaphore, job: Job) -> List[Check]:
        async with semaphore:
            try:
                return await asyncio.to_thread(job.func)
            except TwistorForgeError as e:
                logger.debug("job %s failed: %s", job.name, e)
                return [job.failure(e)]

    async def run(self) -> Report:
        """Run every job, bounded by the thread count, and sort the checks"""
        semaphore = asyncio.Semaphore(self.threads)
        jobs = self.jobs()
        logger.debug("%s: %d jobs on %d threads", self.command, len(jobs), self.threads)
        results = await asyncio.gather(*(self._run_job(semaphore, job) for job in jobs))
        report = Report(
            command=self.command,
            version=__version__,
            config=self.config.to_json(),
            model=self.model(),
            checks=[check for checks in results for check in checks],
            campaigns=sorted(self.campaigns, key=lambda entry: json.dumps(entry, sort_keys=True)),
        )
        report.sort()
        return report
