"""Verification campaigns, one per CLI subcommand"""

from .base import Campaign, Job
from .family_sweep import FamilySweepCampaign
from .fujiki import FujikiCampaign
from .lift_check import LiftCheckCampaign
from .period_line import PeriodLineCampaign
from .roundtrip import RoundtripCampaign
from .verify_lemmas import VerifyLemmasCampaign

CAMPAIGNS = {
    campaign.command: campaign
    for campaign in (
        FamilySweepCampaign,
        VerifyLemmasCampaign,
        FujikiCampaign,
        PeriodLineCampaign,
        LiftCheckCampaign,
        RoundtripCampaign,
    )
}

__all__ = ["CAMPAIGNS", "Campaign", "Job"]
