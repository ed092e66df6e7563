"""On-disk cache of fusion tables: one JSON file per ``(family, rank, ell)``."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .alcove import simple_objects
from .errors import CacheError
from .fusion import FusionTable, build_fusion_table, fusion_table
from .lie import AlgebraId, build_root_datum
from .qnum import PrecisionCtx

__all__ = ["FORMAT_VERSION", "FusionCache", "default_cache_dir", "table_to_dict"]

FORMAT_VERSION = 1


def default_cache_dir() -> Path:
    return Path(os.environ.get("RTC_CACHE", ".rtc-cache"))


def table_to_dict(table: FusionTable) -> dict:
    return {
        "version": FORMAT_VERSION,
        "family": table.algebra.family,
        "rank": table.algebra.rank,
        "ell": table.ell,
        "objects": [list(lam) for lam in table.objects],
        "duals": list(table.dual_index),
        "coeffs": table.coeffs.tolist(),
    }


def table_from_dict(data: dict, ctx: PrecisionCtx | None = PrecisionCtx()) -> FusionTable:
    """Rebuild a table, checking it against a fresh alcove enumeration."""
    if data.get("version") != FORMAT_VERSION:
        raise CacheError(f"cache format version {data.get('version')!r} != {FORMAT_VERSION}")
    try:
        algebra = AlgebraId(data["family"], int(data["rank"]))
        ell = int(data["ell"])
        objects = [tuple(int(v) for v in lam) for lam in data["objects"]]
        duals = [int(i) for i in data["duals"]]
        coeffs = np.array(data["coeffs"], dtype=np.int64).reshape(-1, 4)
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheError(f"malformed cache entry: {exc}") from exc
    datum = build_root_datum(algebra)
    expected = simple_objects(datum, ell)
    n = len(expected)
    if tuple(objects) != expected.objects or len(duals) != n:
        raise CacheError(f"cached objects for {algebra} ell={ell} do not match the alcove")
    if len(coeffs) and (coeffs[:, :3].min() < 0 or coeffs[:, :3].max() >= n or coeffs[:, 3].min() < 1):
        raise CacheError(f"cached coefficients for {algebra} ell={ell} are out of range")
    return build_fusion_table(datum, ell, expected, coeffs, duals, ctx=ctx)


class FusionCache:
    """Directory of cached fusion tables, created on first write."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path(self, algebra: AlgebraId, ell: int) -> Path:
        return self.directory / f"{algebra.family}{algebra.rank}_ell{ell}.json"

    def load(self, algebra: AlgebraId, ell: int, ctx: PrecisionCtx | None = PrecisionCtx()):
        path = self.path(algebra, ell)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(f"corrupt cache file {path}: {exc}") from exc
        table = table_from_dict(data, ctx)
        if table.algebra != algebra or table.ell != ell:
            raise CacheError(f"cache file {path} describes {table.algebra} ell={table.ell}")
        return table

    def store(self, table: FusionTable) -> Path:
        path = self.path(table.algebra, table.ell)
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(table_to_dict(table), fh, separators=(",", ":"))
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return path

    def get(self, algebra: AlgebraId, ell: int, ctx: PrecisionCtx = PrecisionCtx()) -> FusionTable:
        """Load the table, or compute and store it."""
        table = self.load(algebra, ell, ctx)
        if table is None:
            table = fusion_table(build_root_datum(algebra), ell, ctx)
            self.store(table)
        return table

    def entries(self) -> list[Path]:
        if not self.directory.is_dir():
            return []
        return sorted(self.directory.glob("*.json"))

    def clear(self) -> int:
        paths = self.entries()
        for path in paths:
            path.unlink()
        return len(paths)
