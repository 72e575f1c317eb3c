"""On-disk store for free resolutions.

One file per (module fingerprint, kind, maxdeg). The first line is a JSON
header; each degree follows as a block ``degree n rows cols`` with one
row of base-10 integers per generator image.
"""
from __future__ import annotations

import json
import os
import threading
from contextlib import contextmanager
from pathlib import Path

from .lattices import GLattice
from .resolutions import set_resolution_store

__all__ = ["ResolutionStore", "resolution_store", "CacheFormatError"]

FORMAT = 1


class CacheFormatError(ValueError):
    pass


class ResolutionStore:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def path(self, M: GLattice, kind: str, maxdeg: int) -> Path:
        return self.dir / f"{M.fingerprint}-{kind}-{maxdeg}.res"

    def load(self, M: GLattice, kind: str, maxdeg: int):
        p = self.path(M, kind, maxdeg)
        with self._lock:
            if not p.exists():
                self.misses += 1
                return None
            text = p.read_text()
        images = decode(text, M, kind, maxdeg)
        with self._lock:
            self.hits += 1
        return images

    def save(self, M: GLattice, kind: str, maxdeg: int, images):
        p = self.path(M, kind, maxdeg)
        text = encode(M, kind, maxdeg, images)
        with self._lock:
            tmp = p.with_suffix(f".tmp{os.getpid()}")
            tmp.write_text(text)
            os.replace(tmp, p)


def _widths(M: GLattice, images) -> list[int]:
    N = M.group.order
    return [M.rank] + [len(level) * N for level in images[:-1]]


def encode(M: GLattice, kind: str, maxdeg: int, images) -> str:
    header = {"format": FORMAT, "fingerprint": M.fingerprint, "group": M.group.fingerprint,
              "kind": kind, "maxdeg": maxdeg, "generators": [len(level) for level in images]}
    lines = [json.dumps(header, sort_keys=True)]
    for n, (level, width) in enumerate(zip(images, _widths(M, images))):
        lines.append(f"degree {n} {len(level)} {width}")
        for v in level:
            row = [0] * width
            for k, c in v.items():
                row[k] = c
            lines.append(" ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def decode(text: str, M: GLattice, kind: str, maxdeg: int) -> list[list[dict]]:
    lines = text.splitlines()
    try:
        header = json.loads(lines[0])
    except (IndexError, json.JSONDecodeError):
        raise CacheFormatError("missing header") from None
    expect = {"format": FORMAT, "fingerprint": M.fingerprint, "kind": kind, "maxdeg": maxdeg}
    for k, v in expect.items():
        if header.get(k) != v:
            raise CacheFormatError(f"header field {k} does not match")
    images: list[list[dict]] = []
    pos = 1
    for n, count in enumerate(header["generators"]):
        tag, deg, rows, width = lines[pos].split()
        if tag != "degree" or int(deg) != n or int(rows) != count:
            raise CacheFormatError(f"bad block header at line {pos + 1}")
        level = []
        for r in range(count):
            vals = [int(x) for x in lines[pos + 1 + r].split()]
            if len(vals) != int(width):
                raise CacheFormatError(f"bad row width at line {pos + 2 + r}")
            level.append({i: v for i, v in enumerate(vals) if v})
        images.append(level)
        pos += 1 + count
    return images


@contextmanager
def resolution_store(directory):
    """Route :func:`free_resolution` through a store in ``directory`` (no-op for ``None``)."""
    if directory is None:
        yield None
        return
    store = ResolutionStore(directory)
    prev = set_resolution_store(store)
    try:
        yield store
    finally:
        set_resolution_store(prev)
