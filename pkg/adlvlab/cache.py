"""Class-polynomial persistence."""
from __future__ import annotations

import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Tuple

_logger = logging.getLogger(__name__)

ENGINE_VERSION = "adlvlab-1"

Coefficients = Tuple[int, ...]
ClassTable = Dict[str, Coefficients]


def cache_file_name(group_fingerprint: str, frobenius_fingerprint: str, version: str = ENGINE_VERSION) -> str:
    """16 hex digits of the content hash of the group, Frobenius and engine version."""
    payload = "\n".join((group_fingerprint, frobenius_fingerprint, version)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16] + ".jsonl"


class ClassPolyCache:
    """Loads and appends one JSON line per reduced element.

    Records look like ``{"elt": "s1 s0", "classes": [{"key": "C:s1", "coeffs": [1, 1]}]}``.
    Entries are write-once; a second record for the same element is ignored.
    """

    def __init__(self, path: Path) -> None:
        self._path = Path(path)
        self._entries: Dict[str, ClassTable] = {}
        self._lock = threading.Lock()
        self._load()

    @classmethod
    def for_frame(cls, cache_dir: Path, group_fingerprint: str, frobenius_fingerprint: str) -> "ClassPolyCache":
        return cls(Path(cache_dir) / cache_file_name(group_fingerprint, frobenius_fingerprint))

    @property
    def path(self) -> Path:
        return self._path

    def _load(self) -> None:
        if not self._path.exists():
            self._entries = {}
            return
        try:
            lines = self._path.read_text(encoding="utf-8").splitlines()
        except OSError:
            self._entries = {}
            return
        entries: Dict[str, ClassTable] = {}
        for line in lines:
            try:
                item = json.loads(line)
                table = {
                    str(cls_item["key"]): tuple(int(c) for c in cls_item["coeffs"])
                    for cls_item in item["classes"]
                }
                entries.setdefault(str(item["elt"]), table)
            except (KeyError, ValueError, TypeError, json.JSONDecodeError):
                continue
        self._entries = entries
        _logger.info("loaded %d cached class-polynomial records from %s", len(entries), self._path)

    def _append(self, elt: str, table: Mapping[str, Sequence[int]]) -> None:
        record = {
            "elt": elt,
            "classes": [{"key": key, "coeffs": list(table[key])} for key in sorted(table)],
        }
        try:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with self._path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, separators=(",", ":")) + "\n")
        except OSError as exc:
            _logger.warning("could not write cache %s: %s", self._path, exc)

    def get(self, elt: str) -> Optional[ClassTable]:
        return self._entries.get(elt)

    def put(self, elt: str, table: Mapping[str, Sequence[int]]) -> None:
        with self._lock:
            if elt in self._entries:
                return
            self._entries[elt] = {key: tuple(value) for key, value in table.items()}
            self._append(elt, table)

    @property
    def entries(self) -> Dict[str, ClassTable]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


__all__ = ["ENGINE_VERSION", "ClassPolyCache", "cache_file_name"]
