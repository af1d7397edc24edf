"""Exact truncated q-series arithmetic and partition congruence checks."""

__version__ = "0.1.0"

from .qseries import EtaQuotient, QSeries, compile_quotient  # noqa: E402
from .report import VerificationReport  # noqa: E402

__all__ = ["__version__", "EtaQuotient", "QSeries", "VerificationReport", "compile_quotient"]
