"""On-disk cache of minimal modules.

One JSON file per (r, s, variant), named by a hash of those inputs.  A
cached module is re-verified on load and rebuilt if it fails, so a stale
or corrupted file can never change a result.  Writes go through a
temporary file and os.replace, which keeps concurrent writers safe.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from .clifford import Signature
from .representations import Representation, all_checks_pass, minimal_module

ENV_VAR = "HTYPE_CACHE_DIR"
CACHE_VERSION = 1


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "htype"


def cache_key(r: int, s: int, variant: Optional[str]) -> str:
    payload = json.dumps({"r": r, "s": s, "variant": variant or "default", "v": CACHE_VERSION},
                         sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:24]


def cache_path(root: Path, r: int, s: int, variant: Optional[str]) -> Path:
    return Path(root) / f"rep_{r}_{s}_{variant or 'default'}_{cache_key(r, s, variant)}.json"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_cached(path: Path) -> Optional[Representation]:
    try:
        rep = Representation.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
    except (OSError, ValueError, KeyError, TypeError):
        return None
    return rep if all_checks_pass(rep) else None


def cached_minimal_module(r: int, s: int, variant: Optional[str] = None,
                          root: Optional[Path] = None) -> Representation:
    """minimal_module through the cache; root=None disables caching."""
    sig = Signature(r, s)
    if root is None:
        return minimal_module(sig, variant)
    path = cache_path(Path(root), r, s, variant)
    rep = load_cached(path) if path.exists() else None
    if rep is not None and rep.signature == sig:
        return rep
    rep = minimal_module(sig, variant)
    _atomic_write(path, rep.dumps())
    return rep
