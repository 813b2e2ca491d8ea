"""Machine-readable event trace of a bottom-up run.

One tab-separated line per event: the event name, then ``key=value``
fields, then the canonical text of the edge involved.
"""

from collections.abc import Callable
from typing import TextIO

EVENTS = ("SEED", "INIT-FACT", "INIT-SKIP", "POP", "DERIVE", "STORE", "PRUNE", "RETIRE")


class Tracer:
    def __init__(self, stream: TextIO | None = None):
        self.stream = stream

    @property
    def enabled(self) -> bool:
        return self.stream is not None

    def emit(self, event: str, text: str | Callable[[], str] = "", **fields) -> None:
        """Write one event; ``text`` may be a callable so rendering only happens when enabled."""
        if self.stream is None:
            return
        parts = [event]
        parts.extend(f"{key.replace('_', '-')}={value}" for key, value in fields.items())
        body = text() if callable(text) else text
        if body:
            parts.append(body)
        self.stream.write("\t".join(parts) + "\n")
