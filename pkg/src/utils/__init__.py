"""Shared utilities for bridgewalk."""

from utils.errors import BridgewalkError
from utils.helpers import fit_loglog_slope, render_number, safe_log

__all__ = [
    "BridgewalkError",
    "fit_loglog_slope",
    "render_number",
    "safe_log",
]
