"""File sink for the per-transition trace."""

import logging

from core.exceptions import CdsatError
from core.kernel import TraceEvent

logger = logging.getLogger(__name__)


class TraceError(CdsatError):
    """The trace file could not be written."""


class TraceFile:
    """Writes one tab-separated line per transition; use as a context manager."""

    def __init__(self, path):
        self.path = path
        self._handle = None

    def __enter__(self):
        try:
            self._handle = open(self.path, "w", encoding="utf-8", newline="\n")
        except OSError as exc:
            raise TraceError(f"cannot open trace file {self.path}: {exc}") from exc
        return self

    def __exit__(self, *exc_info):
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def __call__(self, event: TraceEvent) -> None:
        try:
            self._handle.write(event.to_line() + "\n")
        except (OSError, ValueError) as exc:
            logger.error("trace write to %s failed: %s", self.path, exc)
            raise TraceError(f"cannot write trace file {self.path}: {exc}") from exc
