"""On-disk result cache keyed by the SHA-256 of the canonical request JSON.

Entries are written to a temporary file in the cache directory and renamed
into place, so concurrent writers never expose a partial file.  The cache
directory comes from ELLSURF_CACHE_DIR (default ~/.cache/ellsurf).
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from .serialize import dumps

ENV_DIR = "ELLSURF_CACHE_DIR"


def default_dir() -> Path:
    return Path(os.environ.get(ENV_DIR) or Path.home() / ".cache" / "ellsurf")


def request_key(request: dict) -> str:
    return hashlib.sha256(dumps(request).encode()).hexdigest()


class ResultCache:
    def __init__(self, directory=None, enabled: bool = True):
        self.dir = Path(directory) if directory else default_dir()
        self.enabled = enabled

    def path(self, request: dict) -> Path:
        k = request_key(request)
        return self.dir / k[:2] / f"{k}.json"

    def get(self, request: dict) -> str | None:
        if not self.enabled:
            return None
        try:
            return self.path(request).read_text()
        except OSError:
            return None

    def put(self, request: dict, text: str) -> Path | None:
        if not self.enabled:
            return None
        target = self.path(request)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        return target

    def fetch(self, request: dict, compute) -> tuple[str, bool]:
        """Cached text for ``request`` or ``compute()`` stored; returns (text, hit)."""
        text = self.get(request)
        if text is not None:
            return text, True
        text = compute()
        self.put(request, text)
        return text, False
