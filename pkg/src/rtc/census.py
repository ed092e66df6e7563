"""Classification of a single parameter point, and record serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields

from .alcove import RootOfUnityParams, root_params
from .errors import NumericalInstabilityError, ParameterError
from .fusion import FusionTable, fusion_table
from .lie import AlgebraId, build_root_datum
from .qnum import PrecisionCtx, QDimTable, global_quantities, qdims_float
from .smatrix import reconstruct_smatrix, s_invertible

__all__ = [
    "CSV_COLUMNS",
    "ClassificationRecord",
    "PointAnalysis",
    "analyze_point",
    "classify",
    "records_to_csv",
    "records_to_json",
]

ORACLE_MAX_OBJECTS = 200
FAST_TOL = 1e-9


@dataclass(frozen=True)
class ClassificationRecord:
    family: str
    rank: int
    ell: int
    p: int
    k: str
    uniform: bool
    n_objects: int
    unitary: bool
    pseudo_unitary: bool
    pseudo_modular: bool
    modular_oracle: bool | None
    min_qdim: float
    global_dim: float
    fp_global: float
    p_residual: float
    digits: int

    @property
    def algebra(self) -> AlgebraId:
        return AlgebraId(self.family, self.rank)

    def flags(self) -> tuple[bool, bool, bool]:
        return self.unitary, self.pseudo_unitary, self.pseudo_modular


CSV_COLUMNS = tuple(f.name for f in fields(ClassificationRecord))


@dataclass(frozen=True)
class PointAnalysis:
    """A record together with the data it was derived from."""

    record: ClassificationRecord
    params: RootOfUnityParams
    table: FusionTable
    qtable: QDimTable
    smatrix: object = None


def _near_threshold(qtable: QDimTable, ctx: PrecisionCtx) -> bool:
    threshold = ctx.mp.mpf(10) ** (-ctx.tolerance_exponent)
    return threshold / 100 <= qtable.p_residual < threshold * 100


def analyze_point(algebra: AlgebraId, ell: int, p: int, ctx: PrecisionCtx = PrecisionCtx(), *,
                  with_modular_oracle: bool | None = None, fast_unitarity: bool = False,
                  table: FusionTable | None = None, keep_smatrix: bool = False) -> PointAnalysis:
    """Classify ``(algebra, ell, p)`` and keep the intermediate tables.

    ``table`` may be a precomputed fusion table for ``(algebra, ell)``; it is
    shared by every ``p``.  The modular oracle runs by default when the
    category has at most 200 simple objects.
    """
    params = root_params(algebra, ell, p)
    datum = build_root_datum(algebra)
    if table is None:
        table = fusion_table(datum, ell, ctx)
    elif (table.algebra, table.ell) != (algebra, ell):
        raise ParameterError("fusion table does not match the requested category")
    qtable = global_quantities(datum, params, ctx)
    if _near_threshold(qtable, ctx):
        # too close to call: redo the whole point at doubled digits
        ctx = ctx.doubled()
        qtable = global_quantities(datum, params, ctx)
    table = table.with_fp(ctx)
    fp = table.fp_dims

    if fast_unitarity:
        dims = qdims_float(datum, params, table.objects)
        unitary = bool((dims > 0).all())
        pseudo_unitary = all(abs(abs(d) - float(f)) <= FAST_TOL * float(f) for d, f in zip(dims, fp))
    else:
        tol = ctx.tol
        unitary = all(d > tol for d in qtable.dims)
        pseudo_unitary = all(abs(abs(d) - f) <= tol * f for d, f in zip(qtable.dims, fp))
    if unitary and not pseudo_unitary:
        raise NumericalInstabilityError(
            f"{algebra} ell={ell} p={p}: positive dimensions disagree with FP dimensions")

    residual = qtable.p_residual
    pseudo_modular = residual < ctx.tol

    if with_modular_oracle is None:
        with_modular_oracle = len(table) <= ORACLE_MAX_OBJECTS
    S = None
    oracle = None
    if with_modular_oracle:
        S = reconstruct_smatrix(table, qtable, ctx)
        oracle = s_invertible(S, ctx)

    record = ClassificationRecord(
        family=algebra.family,
        rank=algebra.rank,
        ell=ell,
        p=p,
        k=params.k_label,
        uniform=params.uniform,
        n_objects=len(table),
        unitary=unitary,
        pseudo_unitary=pseudo_unitary,
        pseudo_modular=bool(pseudo_modular),
        modular_oracle=oracle,
        min_qdim=float(min(qtable.dims)),
        global_dim=float(qtable.global_dim),
        fp_global=float(table.fp_global),
        p_residual=float(residual),
        digits=ctx.digits,
    )
    return PointAnalysis(record, params, table, qtable, S if keep_smatrix else None)


def classify(algebra: AlgebraId, ell: int, p: int, ctx: PrecisionCtx = PrecisionCtx(), *,
             with_modular_oracle: bool | None = None, fast_unitarity: bool = False,
             table: FusionTable | None = None) -> ClassificationRecord:
    """Unitarity, pseudo-unitarity and pseudo-modularity of one point."""
    return analyze_point(algebra, ell, p, ctx, with_modular_oracle=with_modular_oracle,
                         fast_unitarity=fast_unitarity, table=table).record


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_csv_value(getattr(rec, name)) for name in CSV_COLUMNS])
    return buf.getvalue()


def records_to_json(records) -> str:
    return json.dumps([asdict(rec) for rec in records], indent=2) + "\n"
