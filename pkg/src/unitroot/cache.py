"""Persistent class-number cache.

A flat text file: one header line, then one ``D h`` record per line.  Any
malformed content (wrong header, unparsable line, impossible values) makes
the whole file untrusted; it is ignored and rewritten from scratch on save.
"""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional

from filelock import FileLock

from . import __version__
from .orders import class_number_cache, seed_class_numbers

log = logging.getLogger(__name__)

HEADER = f"# unitroot class-number cache v1 ({__version__})"
ENV_VAR = "UNITROOT_CACHE"


def default_cache_path() -> Optional[Path]:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def _parse(text: str) -> Optional[dict[int, int]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# unitroot class-number cache v1"):
        return None
    table: dict[int, int] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            return None
        try:
            D, h = int(parts[0]), int(parts[1])
        except ValueError:
            return None
        if D >= 0 or D % 4 not in (0, 1) or h < 1 or table.get(D, h) != h:
            return None
        table[D] = h
    return table


class ClassNumberCache:
    def __init__(self, path):
        self.path = Path(path)
        self._lock = FileLock(str(self.path) + ".lock")
        self._stored: dict[int, int] = {}
        self._trusted = False

    def load(self) -> int:
        """Seed the in-memory class-number table; returns the number of records used."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self._lock:
            if not self.path.exists():
                self._trusted = False
                return 0
            table = _parse(self.path.read_text())
        if table is None:
            log.warning("ignoring corrupt class-number cache %s", self.path)
            self._trusted = False
            return 0
        self._trusted = True
        self._stored = table
        seed_class_numbers(table)
        return len(table)

    def save(self) -> int:
        """Append records computed since :meth:`load`; returns how many were written."""
        current = class_number_cache()
        with self._lock:
            if self._trusted and self.path.exists():
                new = {D: h for D, h in current.items() if D not in self._stored}
                if new:
                    with self.path.open("a") as fh:
                        fh.writelines(f"{D} {h}\n" for D, h in sorted(new.items(), reverse=True))
            else:
                new = current
                tmp = self.path.with_suffix(self.path.suffix + ".tmp")
                tmp.write_text(HEADER + "\n" + "".join(f"{D} {h}\n" for D, h in sorted(current.items(), reverse=True)))
                os.replace(tmp, self.path)
                self._trusted = True
        self._stored = dict(current)
        return len(new)
