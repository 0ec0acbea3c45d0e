"""Curve lookup by Cremona label: disk cache, bundled fixtures, then a remote database.

Environment:
    GTYPE_CACHE_DIR  cache directory (default ~/.cache/gtype)
    GTYPE_DB_URL     endpoint; the label is sent as the ``Clabel`` query parameter
    GTYPE_OFFLINE=1  never touch the network
    GTYPE_RATE       minimum seconds between remote requests (default 1.0)
"""
from __future__ import annotations

import json
import os
import re
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from .algebra import as_rational, format_rational, parse_rational
from .curves import EllipticCurve, SingularCurveError

DEFAULT_DB_URL = "https://www.lmfdb.org/api/ec_curvedata/"
LABEL_RE = re.compile(r"^\d+[a-z]+\d+$")
SOURCES = ("local", "remote", "inline")


class FetchError(Exception):
    """Base class for every lookup failure."""


class LabelSyntaxError(FetchError, ValueError):
    pass


class OfflineError(FetchError):
    pass


class NetworkError(FetchError):
    pass


class UnknownLabelError(FetchError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown label"


class MalformedResponseError(FetchError):
    pass


@dataclass(frozen=True)
class CurveRecord:
    label: str | None
    coefficients: tuple
    source: str = "inline"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}")
        coeffs = tuple(as_rational(c) for c in self.coefficients)
        if len(coeffs) != 5:
            raise ValueError("a curve record holds exactly five coefficients")
        object.__setattr__(self, "coefficients", coeffs)
        self.curve()  # raises SingularCurveError

    def curve(self) -> EllipticCurve:
        return EllipticCurve(self.coefficients, label=self.label)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "coefficients": [format_rational(c) for c in self.coefficients],
            "source": self.source,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CurveRecord":
        coeffs = [parse_rational(c) if isinstance(c, str) else c for c in data["coefficients"]]
        return cls(data.get("label"), tuple(coeffs), data.get("source", "inline"))


def check_label(label: str) -> str:
    if not isinstance(label, str) or not LABEL_RE.match(label):
        raise LabelSyntaxError(f"not a Cremona curve label: {label!r}")
    return label


# ------------------------------------------------------------------ sources

def cache_dir() -> Path:
    env = os.environ.get("GTYPE_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "gtype"


def offline() -> bool:
    return os.environ.get("GTYPE_OFFLINE", "") not in ("", "0")


@lru_cache(maxsize=1)
def _bundle() -> dict:
    text = resources.files("gtype").joinpath("data/curves.json").read_text()
    return json.loads(text)


def bundled_curves() -> dict:
    return _bundle()["curves"]


def bundled_sweep() -> list[str]:
    return list(_bundle()["sweep"])


def _read_cache(label: str) -> CurveRecord | None:
    path = cache_dir() / f"{label}.json"
    if not path.is_file():
        return None
    try:
        rec = CurveRecord.from_json(json.loads(path.read_text()))
    except (ValueError, KeyError, TypeError):
        return None  # a corrupt cache entry is refetched
    return rec if rec.label == label else None


def _write_cache(rec: CurveRecord) -> None:
    d = cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    tmp = d / f".{rec.label}.{os.getpid()}.{threading.get_ident()}.tmp"
    tmp.write_text(json.dumps(rec.to_json(), sort_keys=True))
    tmp.replace(d / f"{rec.label}.json")


class RateLimiter:
    """Spaces calls at least ``interval`` seconds apart, across threads."""

    def __init__(self, interval: float):
        self.interval = interval
        self._lock = threading.Lock()
        self._next = 0.0

    def wait(self) -> None:
        with self._lock:
            now = time.monotonic()
            delay = self._next - now
            self._next = max(now, self._next) + self.interval
        if delay > 0:
            time.sleep(delay)


_LIMITER = RateLimiter(float(os.environ.get("GTYPE_RATE", "1.0")))


def parse_response(label: str, payload: bytes) -> tuple:
    """Coefficients from either ``{"data": [{"ainvs": [...]}]}`` or ``{"ainvs": [...]}``."""
    try:
        data = json.loads(payload)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedResponseError(f"{label}: response is not JSON") from exc
    if isinstance(data, dict) and "data" in data:
        rows = data["data"]
        if not isinstance(rows, list):
            raise MalformedResponseError(f"{label}: 'data' is not a list")
        if not rows:
            raise UnknownLabelError(f"{label}: not in the remote database")
        data = rows[0]
    if not isinstance(data, dict) or "ainvs" not in data:
        raise MalformedResponseError(f"{label}: no 'ainvs' field")
    ainvs = data["ainvs"]
    if not isinstance(ainvs, list) or len(ainvs) != 5:
        raise MalformedResponseError(f"{label}: 'ainvs' must be a list of five numbers")
    try:
        return tuple(parse_rational(v) if isinstance(v, str) else as_rational(v) for v in ainvs)
    except (ValueError, TypeError) as exc:
        raise MalformedResponseError(f"{label}: bad coefficient ({exc})") from exc


def fetch_remote(label: str, url: str | None = None, timeout: float = 20.0,
                 limiter: RateLimiter | None = None) -> CurveRecord:
    base = url or os.environ.get("GTYPE_DB_URL") or DEFAULT_DB_URL
    query = urllib.parse.urlencode({"Clabel": label, "_format": "json", "_fields": "ainvs"})
    full = base + ("&" if "?" in base else "?") + query
    (limiter or _LIMITER).wait()
    try:
        with urllib.request.urlopen(full, timeout=timeout) as resp:
            payload = resp.read()
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise UnknownLabelError(f"{label}: not in the remote database") from exc
        raise NetworkError(f"{label}: HTTP {exc.code}") from exc
    except (urllib.error.URLError, OSError) as exc:
        raise NetworkError(f"{label}: {exc}") from exc
    coeffs = parse_response(label, payload)
    try:
        return CurveRecord(label, coeffs, "remote")
    except SingularCurveError as exc:
        raise MalformedResponseError(f"{label}: coefficients give a singular curve") from exc


def fetch_curve(label: str, *, use_fixtures: bool = True, url: str | None = None) -> CurveRecord:
    """Cache first, then bundled fixtures, then the remote database.

    Remote results are written to the cache, so a second lookup works offline.
    """
    check_label(label)
    rec = _read_cache(label)
    if rec is not None:
        return rec
    if use_fixtures:
        entry = bundled_curves().get(label)
        if entry is not None:
            return CurveRecord(label, tuple(entry["ainvs"]), "local")
    if offline():
        raise OfflineError(f"{label}: not cached and network access is disabled")
    rec = fetch_remote(label, url=url)
    _write_cache(rec)
    return rec


def fetch_many(labels: Iterable[str], workers: int = 4, **kw) -> list:
    """Fetch concurrently; each entry is a CurveRecord or the FetchError it raised."""
    def one(label):
        try:
            return fetch_curve(label, **kw)
        except FetchError as exc:
            return exc
    labels = list(labels)
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(labels) or 1))) as pool:
        return list(pool.map(one, labels))
