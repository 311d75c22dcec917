from __future__ import annotations

import json
import logging
import os
import threading
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)


class AuditLog:
    """
    Append-only JSONL record of every raw backend response.

    Shared by the clients of one run; writes are serialised with a lock.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = threading.Lock()

    def record(
        self, endpoint: str, kind: str, request: dict[str, Any], response: Any
    ) -> None:
        entry = {
            "endpoint": endpoint,
            "kind": kind,
            "request": request,
            "response": response,
        }
        line = json.dumps(entry, ensure_ascii=False)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
        logger.debug("Audited %s response → %s", endpoint, self.path)
