"""Grid sweeps: enumerate parameter points, classify, compare with the tables.

A grid file (TOML or JSON) holds a list ``grid`` of entries::

    [[grid]]
    family = "G"
    rank = 2              # or ranks = [..] / ranks = {min = .., max = ..}
    k = {min = 1, max = 4}  # uniform levels, or a list
    ell = [7, 8, 10]      # explicit orders (any mix with k)
    p = [1, 2]            # optional restriction of p

Every admissible ``1 <= p < ell/2`` is swept unless ``p`` is given.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .alcove import admissible_ps, ell_from_level
from .cache import FusionCache
from .census import ClassificationRecord, classify
from .errors import CoverageError, ParameterError, RTCError
from .lie import AlgebraId
from .qnum import PrecisionCtx
from .tables import expected_flags

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = ["GridPoint", "GridSpec", "Mismatch", "PointError", "SweepReport", "load_grid", "sweep"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridPoint:
    """One ``(algebra, ell)`` with the values of ``p`` to sweep."""

    algebra: AlgebraId
    ell: int
    ps: tuple[int, ...]


@dataclass(frozen=True)
class GridSpec:
    points: tuple[GridPoint, ...]

    def __len__(self):
        return sum(len(pt.ps) for pt in self.points)


@dataclass(frozen=True)
class Mismatch:
    family: str
    rank: int
    ell: int
    p: int
    flag: str
    observed: bool
    expected: bool

    def __str__(self):
        return (f"{self.family}{self.rank} ell={self.ell} p={self.p}: {self.flag} "
                f"observed={int(self.observed)} expected={int(self.expected)}")


@dataclass(frozen=True)
class PointError:
    family: str
    rank: int
    ell: int
    p: int | None
    kind: str
    message: str
    parameter: bool = False

    def __str__(self):
        where = f"{self.family}{self.rank} ell={self.ell}" + (f" p={self.p}" if self.p is not None else "")
        return f"{where}: {self.kind}: {self.message}"


@dataclass
class SweepReport:
    records: list[ClassificationRecord] = field(default_factory=list)
    mismatches: list[Mismatch] = field(default_factory=list)
    errors: list[PointError] = field(default_factory=list)
    uncovered: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.errors

    def summary(self) -> str:
        lines = [f"points: {len(self.records)}", f"mismatches: {len(self.mismatches)}",
                 f"errors: {len(self.errors)}", f"without table row: {self.uncovered}"]
        lines += [f"MISMATCH {m}" for m in self.mismatches]
        lines += [f"ERROR {e}" for e in self.errors]
        return "\n".join(lines) + "\n"


def _int_range(value, name: str) -> list[int]:
    if isinstance(value, dict):
        try:
            return list(range(int(value.get("min", 1)), int(value["max"]) + 1))
        except KeyError as exc:
            raise ParameterError(f"grid field {name!r} needs a 'max'") from exc
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(value)]


def grid_from_dict(data: dict) -> GridSpec:
    points = []
    seen = set()
    for entry in data.get("grid", []):
        family = str(entry["family"]).upper()
        ranks = _int_range(entry.get("ranks", entry.get("rank")), "rank")
        for rank in ranks:
            algebra = AlgebraId(family, rank)
            ells = {ell_from_level(algebra, k) for k in _int_range(entry.get("k", []), "k")}
            ells |= set(_int_range(entry.get("ell", []), "ell"))
            for ell in sorted(ells):
                ps = admissible_ps(ell)
                if "p" in entry:
                    wanted = set(_int_range(entry["p"], "p"))
                    ps = [p for p in ps if p in wanted]
                if (algebra, ell) in seen or not ps:
                    continue
                seen.add((algebra, ell))
                points.append(GridPoint(algebra, ell, tuple(ps)))
    return GridSpec(tuple(points))


def load_grid(path: str | os.PathLike) -> GridSpec:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text) if path.suffix == ".json" else tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ParameterError(f"cannot parse grid file {path}: {exc}") from exc
    return grid_from_dict(data)


def _compare(rec: ClassificationRecord, report: SweepReport):
    if rec.modular_oracle is not None and rec.modular_oracle != rec.pseudo_modular:
        report.mismatches.append(Mismatch(rec.family, rec.rank, rec.ell, rec.p,
                                          "pseudo_modular_vs_oracle",
                                          rec.pseudo_modular, rec.modular_oracle))
    try:
        exp = expected_flags(rec.algebra, rec.ell, rec.p)
    except CoverageError:
        report.uncovered += 1
        return
    for flag, observed, expected in (("unitary", rec.unitary, exp.unitary),
                                     ("pseudo_unitary", rec.pseudo_unitary, exp.pseudo_unitary),
                                     ("pseudo_modular", rec.pseudo_modular, exp.modular)):
        if observed != expected:
            report.mismatches.append(Mismatch(rec.family, rec.rank, rec.ell, rec.p,
                                              flag, observed, expected))


def _run_point(point: GridPoint, ctx: PrecisionCtx, cache_dir, with_oracle) -> SweepReport:
    report = SweepReport()
    alg = point.algebra
    try:
        if cache_dir is None:
            table = None
        else:
            table = FusionCache(cache_dir).get(alg, point.ell, ctx)
    except RTCError as exc:
        log.error("%s ell=%d: %s", alg, point.ell, exc)
        report.errors.append(PointError(alg.family, alg.rank, point.ell, None,
                                        type(exc).__name__, str(exc),
                                        isinstance(exc, ParameterError)))
        return report
    for p in point.ps:
        try:
            rec = classify(alg, point.ell, p, ctx, with_modular_oracle=with_oracle, table=table)
        except RTCError as exc:
            log.error("%s ell=%d p=%d: %s", alg, point.ell, p, exc)
            report.errors.append(PointError(alg.family, alg.rank, point.ell, p,
                                            type(exc).__name__, str(exc),
                                            isinstance(exc, ParameterError)))
            continue
        report.records.append(rec)
        _compare(rec, report)
    return report


def sweep(grid: GridSpec, ctx: PrecisionCtx = PrecisionCtx(), cache: FusionCache | None = None,
          *, with_oracle: bool | None = None, jobs: int = 1) -> SweepReport:
    """Classify every point of ``grid``; output order follows the grid.

    Work is split per ``(algebra, ell)`` so each fusion table is built (or
    loaded from ``cache``) once and shared by all ``p``.
    """
    cache_dir = None if cache is None else cache.directory
    args = [(pt, ctx, cache_dir, with_oracle) for pt in grid.points]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_point, *zip(*args)))
    else:
        parts = [_run_point(*a) for a in args]
    report = SweepReport()
    for part in parts:
        report.records += part.records
        report.mismatches += part.mismatches
        report.errors += part.errors
        report.uncovered += part.uncovered
    return report
