"""On-disk cache of invariant factors, one JSON file per presentation."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple

ALGORITHM_VERSION = "snf-1"
ENV_VAR = "RSC_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "refscissors"


def presentation_key(ngens: int, relations: Iterable[Dict[int, int]]) -> str:
    rels = sorted(sorted(r.items()) for r in relations)
    payload = json.dumps([ALGORITHM_VERSION, ngens, rels], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


class DiskCache:
    def __init__(self, directory: Optional[os.PathLike] = None):
        self.dir = Path(directory) if directory is not None else default_cache_dir()
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.dir / key[:2] / f"{key}.json"

    def get(self, ngens: int, relations) -> Optional[Tuple[list, int]]:
        p = self._path(presentation_key(ngens, relations))
        try:
            data = json.loads(p.read_text())
        except (OSError, ValueError):
            self.misses += 1
            return None
        self.hits += 1
        return data["torsion"], data["free_rank"]

    def put(self, ngens: int, relations, value: Tuple[list, int]) -> None:
        key = presentation_key(ngens, relations)
        p = self._path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        body = json.dumps({"torsion": list(value[0]), "free_rank": int(value[1]), "version": ALGORITHM_VERSION})
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(body)
            os.replace(tmp, p)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
