"""
Exception hierarchy for ESSI.

Every error carries a stable ``code`` and a ``details`` mapping so the CLI and
reports can surface it without parsing messages.
"""

from typing import Any, Dict, Optional


class EssiError(Exception):
    """Base class for all ESSI errors"""

    code = "ESSI_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None,
                 code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        if not self.details:
            return f"[{self.code}] {self.message}"
        extra = ", ".join(f"{k}={v!r}" for k, v in sorted(self.details.items()))
        return f"[{self.code}] {self.message} ({extra})"


class ParameterError(EssiError, ValueError):
    """Invalid physical parameters, sectors, basis states or level indices"""

    code = "INVALID_PARAMETER"


class CombinatoricsError(EssiError, ValueError):
    """Binomial range/overflow, rank out of range or malformed subset"""

    code = "COMBINATORICS"


class CouplingError(EssiError, ValueError):
    """Malformed pair-coupling input"""

    code = "INVALID_COUPLINGS"


class SectorTooLargeError(EssiError):
    """A sector or the full space exceeds the dense storage caps"""

    code = "SECTOR_TOO_LARGE"


class EigenSolverError(EssiError):
    """Eigensolver input rejected or results failed the self-checks"""

    code = "EIGENSOLVER"


class ReportError(EssiError):
    """Report payload failed schema validation or could not be written"""

    code = "REPORT"
