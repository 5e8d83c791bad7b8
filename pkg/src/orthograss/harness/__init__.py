from .campaigns import LEMMAS, Campaign, CampaignError, list_lemmas, report_json, report_text, run_campaign
from .fixtures import FIXTURES, Diagnostic, emit_fixture, validate_file

__all__ = [
    "LEMMAS",
    "Campaign",
    "CampaignError",
    "Diagnostic",
    "FIXTURES",
    "emit_fixture",
    "list_lemmas",
    "report_json",
    "report_text",
    "run_campaign",
    "validate_file",
]
