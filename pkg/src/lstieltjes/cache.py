"""Persistent JSON-lines store of computed constants.

One record per line. When several records share a key the one with the most
digits wins. Appends take an exclusive advisory lock, reads a shared one.
"""

from __future__ import annotations

import datetime as _dt
import fcntl
import json
import os
from dataclasses import asdict, dataclass
from typing import Optional

KINDS = ("stieltjes", "log_gamma", "euler_gamma")


@dataclass(frozen=True)
class CacheRecord:
    kind: str
    digits: int
    value: str
    method: str
    k: Optional[int] = None
    a: Optional[int] = None
    q: Optional[int] = None
    created_at: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cache kind {self.kind!r}")

    @property
    def key(self) -> tuple:
        return (self.kind, self.method, self.k, self.a, self.q)

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v is not None}, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "CacheRecord":
        return cls(**json.loads(line))


def utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")


class ValueCache:
    def __init__(self, path: str):
        self.path = path

    def records(self) -> list[CacheRecord]:
        if not os.path.exists(self.path):
            return []
        with open(self.path, "r", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                return [CacheRecord.from_json(line) for line in fh if line.strip()]
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def get(self, kind: str, method: str, k=None, a=None, q=None, min_digits: int = 0) -> Optional[CacheRecord]:
        """Best record for the key with at least ``min_digits`` digits."""
        best = None
        for rec in self.records():
            if rec.key == (kind, method, k, a, q) and rec.digits >= min_digits:
                if best is None or rec.digits > best.digits:
                    best = rec
        return best

    def put(self, record: CacheRecord) -> None:
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(record.to_json() + "\n")
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
