"""Quantum dimensions, twists, global dimension and the Gauss sums p+/p-.

All pairings are exact rationals; only the final sines and phases are
evaluated in floating point, at the precision carried by a
:class:`PrecisionCtx`.  Every ``PrecisionCtx`` owns a private mpmath context,
so numbers produced under different precisions never share global state.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath.ctx_mp import MPContext

from .alcove import RootOfUnityParams, SimpleObjectSet, simple_objects
from .errors import DegenerateObjectError, ParameterError, ResonanceError
from .lie import RootDatum

__all__ = [
    "PrecisionCtx",
    "QDimTable",
    "global_quantities",
    "qdim",
    "qdims_float",
    "twist",
    "twist_exponent",
]


@dataclass(frozen=True)
class PrecisionCtx:
    digits: int = 30
    tolerance_exponent: int | None = None

    def __post_init__(self):
        if self.digits < 15:
            raise ParameterError(f"precision must be at least 15 digits, got {self.digits}")
        if self.tolerance_exponent is None:
            object.__setattr__(self, "tolerance_exponent", self.digits - 10)

    @property
    def tol(self):
        return self.mp.mpf(10) ** (-self.tolerance_exponent)

    @property
    def mp(self) -> MPContext:
        return _mp_context(self.digits)

    def doubled(self) -> "PrecisionCtx":
        return PrecisionCtx(2 * self.digits, self.tolerance_exponent)


@functools.lru_cache(maxsize=None)
def _mp_context(digits: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = digits
    return ctx


@functools.lru_cache(maxsize=None)
def _sine_table(ell: int, digits: int):
    """``sin(pi j / ell)`` for ``j = 0 .. 2 ell - 1``."""
    mp = _mp_context(digits)
    return tuple(mp.sinpi(mp.mpf(j) / ell) for j in range(2 * ell))


def _root_arguments(datum: RootDatum, lam) -> tuple[np.ndarray, np.ndarray]:
    """Integers ``m <lam + rho, alpha>`` and ``m <rho, alpha>`` over positive roots."""
    U = datum.root_matrix
    shifted = np.asarray(lam, dtype=np.int64) + 1
    return U @ shifted, U.sum(axis=1)


def qdim(datum: RootDatum, params: RootOfUnityParams, lam, ctx: PrecisionCtx = PrecisionCtx()):
    """Quantum dimension as a product of sine ratios over the positive roots."""
    if len(lam) != datum.rank:
        raise ParameterError(f"weight {tuple(lam)} has wrong length for {datum.algebra}")
    ell, p = params.ell, params.p_sym
    num_args, den_args = _root_arguments(datum, lam)
    den_res = (p * den_args) % (2 * ell)
    num_res = (p * num_args) % (2 * ell)
    bad = np.flatnonzero(den_res % ell == 0)
    if bad.size:
        root = datum.positive_roots[int(bad[0])].simple_coeffs
        raise ResonanceError(
            f"{datum.algebra} at ell={ell}, p={params.p}: sin(pi p m<rho,alpha>/ell) "
            f"vanishes for alpha={root}", root=root)
    if (num_res % ell == 0).any():
        raise DegenerateObjectError(
            f"object {tuple(lam)} has vanishing quantum dimension at "
            f"{datum.algebra}, ell={ell}, p={params.p}", weight=tuple(lam))
    table = _sine_table(ell, ctx.digits)
    mp = ctx.mp
    num = mp.fprod(table[int(j)] for j in num_res)
    den = mp.fprod(table[int(j)] for j in den_res)
    value = num / den
    if abs(value) < ctx.tol:
        raise DegenerateObjectError(
            f"object {tuple(lam)} has quantum dimension within tolerance of 0", weight=tuple(lam))
    return value


def qdims_float(datum: RootDatum, params: RootOfUnityParams, objects) -> np.ndarray:
    """Machine-precision quantum dimensions for a whole object list."""
    lam = np.asarray(list(objects), dtype=np.int64).reshape(-1, datum.rank)
    U = datum.root_matrix
    num = (lam + 1) @ U.T
    den = U.sum(axis=1)
    ell, p = params.ell, params.p_sym
    if ((p * den) % ell == 0).any():
        raise ResonanceError(f"{datum.algebra} at ell={ell}, p={params.p}: resonant denominator")
    if ((p * num) % ell == 0).any():
        row = int(np.flatnonzero(((p * num) % ell == 0).any(axis=1))[0])
        raise DegenerateObjectError(
            f"object {tuple(lam[row])} has vanishing quantum dimension", weight=tuple(lam[row]))
    ratio = np.sin(np.pi * p * num / ell) / np.sin(np.pi * p * den / ell)
    return ratio.prod(axis=1)


def twist_exponent(datum: RootDatum, params: RootOfUnityParams, lam) -> Fraction:
    """``t`` in ``[0, 2)`` with ``theta_lam = exp(i pi t)``."""
    lam_a = np.asarray(lam, dtype=np.int64)
    casimir = Fraction(int(lam_a @ datum.mform @ (lam_a + 2)), datum.mform_den)
    return (params.p_sym * casimir / params.ell) % 2


def twist(datum: RootDatum, params: RootOfUnityParams, lam, ctx: PrecisionCtx = PrecisionCtx()):
    """Ribbon twist ``exp(i pi p m <lam, lam + 2 rho> / ell)``."""
    if len(lam) != datum.rank:
        raise ParameterError(f"weight {tuple(lam)} has wrong length for {datum.algebra}")
    t = twist_exponent(datum, params, lam)
    mp = ctx.mp
    x = mp.mpf(t.numerator) / t.denominator
    return mp.mpc(mp.cospi(x), mp.sinpi(x))


@dataclass(frozen=True)
class QDimTable:
    params: RootOfUnityParams
    objects: SimpleObjectSet
    dims: tuple
    twists: tuple
    global_dim: object
    p_plus: object
    p_minus: object
    ctx: PrecisionCtx = field(repr=False)

    @property
    def p_residual(self):
        return abs(self.p_plus * self.p_minus - self.global_dim) / self.global_dim


def global_quantities(datum: RootDatum, params: RootOfUnityParams,
                      ctx: PrecisionCtx = PrecisionCtx()) -> QDimTable:
    objects = simple_objects(datum, params.ell)
    mp = ctx.mp
    dims = tuple(qdim(datum, params, lam, ctx) for lam in objects)
    twists = tuple(twist(datum, params, lam, ctx) for lam in objects)
    squares = [d * d for d in dims]
    global_dim = mp.fsum(squares)
    p_plus = mp.fsum(t * s for t, s in zip(twists, squares))
    p_minus = mp.fsum(mp.conj(t) * s for t, s in zip(twists, squares))
    return QDimTable(params, objects, dims, twists, global_dim, p_plus, p_minus, ctx)
