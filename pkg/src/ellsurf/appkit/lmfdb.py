"""Optional lookup of number fields in the LMFDB by defining polynomial.

The lookup is advisory.  Any network or decoding problem gives status
"unavailable" and an empty answer gives "not found"; neither raises.  The
API endpoint is read from ELLSURF_LMFDB_URL and ELLSURF_OFFLINE=1 turns the
client off.  Requests are spaced at least one second apart.

The database is keyed by the reduced (polredabs) polynomial, so a query
with any other generator of the same field reports "not found".
"""

from __future__ import annotations

import json
import os
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass

DEFAULT_URL = "https://www.lmfdb.org/api/nf_fields/"
ENV_URL = "ELLSURF_LMFDB_URL"
ENV_OFFLINE = "ELLSURF_OFFLINE"
MIN_INTERVAL = 1.0

_lock = threading.Lock()
_last = [0.0]


@dataclass
class LookupResult:
    status: str  # "found" | "not found" | "unavailable"
    label: str | None = None
    degree: int | None = None
    galois_label: str | None = None
    note: str = ""

    def to_dict(self):
        return {"status": self.status, "label": self.label, "degree": self.degree, "galois_label": self.galois_label, "note": self.note}


def _coefficients(poly) -> list:
    if hasattr(poly, "coeffs"):
        cs = list(poly.coeffs)
    else:
        cs = list(poly)
    out = []
    for c in cs:
        c = int(c) if not hasattr(c, "denominator") or c.denominator == 1 else None
        if c is None:
            raise ValueError("LMFDB lookup needs an integral polynomial")
        out.append(c)
    return out


def _http_get(url: str, timeout: float = 10.0) -> bytes:
    req = urllib.request.Request(url, headers={"Accept": "application/json", "User-Agent": "ellsurf"})
    with urllib.request.urlopen(req, timeout=timeout) as r:
        return r.read()


def _throttle():
    with _lock:
        wait = _last[0] + MIN_INTERVAL - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        _last[0] = time.monotonic()


def lmfdb_lookup(poly, fetch=None, base_url: str | None = None, offline: bool | None = None) -> LookupResult:
    """Query the field generated by ``poly`` (ascending integer coefficients).

    ``fetch(url) -> bytes`` replaces the HTTP call, which is how tests run
    without a network.
    """
    if offline is None:
        offline = os.environ.get(ENV_OFFLINE, "") not in ("", "0")
    if offline and fetch is None:
        return LookupResult("unavailable", note="offline mode")
    try:
        coeffs = _coefficients(poly)
    except (TypeError, ValueError) as exc:
        return LookupResult("unavailable", note=str(exc))
    base = base_url or os.environ.get(ENV_URL) or DEFAULT_URL
    query = urllib.parse.urlencode({"coeffs": "li" + ",".join(str(c) for c in coeffs), "_format": "json"})
    url = f"{base}?{query}"
    get = fetch or _http_get
    try:
        if fetch is None:
            _throttle()
        payload = json.loads(get(url))
    except (urllib.error.URLError, OSError, ValueError, TimeoutError) as exc:
        return LookupResult("unavailable", note=f"{type(exc).__name__}: {exc}")
    data = payload.get("data") if isinstance(payload, dict) else None
    if not data:
        return LookupResult("not found", degree=len(coeffs) - 1)
    row = data[0]
    galt = row.get("galois_label")
    if galt is None and "degree" in row and "galt" in row:
        galt = f"{row['degree']}T{row['galt']}"
    return LookupResult("found", row.get("label"), row.get("degree"), galt)
