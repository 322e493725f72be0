"""
Formatting helpers shared by the terminal tables of the wave lab.
"""

import math


class DisplayUtils:
    """Utility class for common display functions."""

    MISSING = "-"

    @staticmethod
    def truncate_string(text, max_length=60):
        """Truncate a string if it exceeds the maximum length."""
        if isinstance(text, str) and len(text) > max_length:
            return text[:max_length - 3] + "..."
        return text

    @staticmethod
    def format_float(value, digits=6):
        """Format a number with the given significant digits; None and NaN show as a dash."""
        if value is None:
            return DisplayUtils.MISSING
        if isinstance(value, float) and math.isnan(value):
            return DisplayUtils.MISSING
        if isinstance(value, (int, float)):
            return f"{value:.{digits}g}"
        return str(value)

    @staticmethod
    def format_vector(values, digits=4):
        return "(" + ", ".join(f"{v:.{digits}g}" for v in values) + ")"
