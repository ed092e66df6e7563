"""Fusion rules by affine Racah-Speiser folding, and Frobenius-Perron data.

A tensor product ``lam x mu`` is computed by shifting every weight ``xi`` of
``mu`` to ``lam + xi + rho`` and folding it into the fundamental domain of the
reflection group generated by the simple reflections (and, for fusion, the
affine wall ``m <x, theta'> = ell``).  Points fixed by a reflection drop out;
every other point contributes its multiplicity times ``det(w)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .alcove import SimpleObjectSet, alcove_level_vector, alcove_root, simple_objects
from .errors import FoldingError, NumericalInstabilityError, ParameterError
from .lie import AlgebraId, RootDatum, is_dominant, weight_system
from .qnum import PrecisionCtx

__all__ = [
    "FusionTable",
    "classical_tensor",
    "frobenius_perron",
    "fuse",
    "fusion_table",
]


def _fold(datum: RootDatum, X: np.ndarray, ell: int | None):
    """Fold rows of ``X`` (shifted weights) in place; return ``(X, sign)``."""
    A = datum.simple_roots
    sign = np.ones(len(X), dtype=np.int64)
    if ell is not None:
        u = alcove_level_vector(datum, ell)
        theta = np.asarray(alcove_root(datum, ell), dtype=np.int64)
        theta_sq = int(theta @ u)
        cap = datum.rank * ell * 16
    else:
        cap = None
    rounds = 0
    while True:
        # finite Weyl folding: reflect the first negative label until dominant
        while True:
            neg = X < 0
            rows = np.flatnonzero(neg.any(axis=1))
            if rows.size == 0:
                break
            idx = neg[rows].argmax(axis=1)
            coef = X[rows, idx]
            X[rows] -= coef[:, None] * A[idx]
            sign[rows] *= -1
        if ell is None:
            break
        level = X @ u
        rows = np.flatnonzero(level > ell)
        if rows.size == 0:
            break
        rounds += 1
        if rounds > cap:
            raise FoldingError(f"affine folding did not terminate within {cap} rounds")
        shift, rem = np.divmod(2 * (level[rows] - ell), theta_sq)
        assert not rem.any()
        X[rows] -= shift[:, None] * theta
        sign[rows] *= -1
    wall = (X == 0).any(axis=1)
    if ell is not None:
        wall |= (X @ u) == ell
    sign[wall] = 0
    return X, sign


def _collect(X: np.ndarray, weights: np.ndarray) -> dict[tuple[int, ...], int]:
    keep = weights != 0
    X, weights = X[keep], weights[keep]
    if not len(X):
        return {}
    base = int(X.max()) + 1
    keys = X @ (base ** np.arange(X.shape[1], dtype=np.int64))
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    totals = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(totals, inverse, weights)
    out = {}
    for pos, total in zip(first, totals):
        if total:
            out[tuple(int(v) - 1 for v in X[pos])] = int(total)
    return out


def _product(datum: RootDatum, lam, mu, ell: int | None) -> dict:
    lam = tuple(int(v) for v in lam)
    mu = tuple(int(v) for v in mu)
    ws_l, _ = weight_system(datum, lam)
    ws_m, _ = weight_system(datum, mu)
    if len(ws_l) < len(ws_m):
        lam, mu = mu, lam
    weights, mults = weight_system(datum, mu)
    X = weights + (np.asarray(lam, dtype=np.int64) + 1)
    X, sign = _fold(datum, X, ell)
    result = _collect(X, sign * mults)
    if any(v < 0 for v in result.values()):
        raise FoldingError(f"negative multiplicity in {lam} x {mu} at ell={ell}")
    return result


def classical_tensor(datum: RootDatum, lam, mu) -> dict[tuple[int, ...], int]:
    """Decomposition of the classical tensor product ``V(lam) (x) V(mu)``."""
    for w in (lam, mu):
        if len(w) != datum.rank or not is_dominant(w):
            raise ParameterError(f"{tuple(w)} is not a dominant weight of {datum.algebra}")
    return _product(datum, lam, mu, None)


def fuse(datum: RootDatum, ell: int, lam, mu) -> dict[tuple[int, ...], int]:
    """Fusion product ``lam x mu`` at root-of-unity order ``ell``."""
    objects = simple_objects(datum, ell)
    for w in (lam, mu):
        if tuple(w) not in objects:
            raise ParameterError(
                f"{tuple(w)} is not a simple object of {datum.algebra} at ell={ell}")
    return _product(datum, lam, mu, ell)


@dataclass(frozen=True, eq=False)
class FusionTable:
    """Fusion coefficients of one ``(algebra, ell)``; independent of ``p``.

    ``coeffs`` holds rows ``(i, j, k, N)`` meaning ``N^{k}_{i,j} = N`` for all
    ordered pairs ``(i, j)``.
    """

    algebra: AlgebraId
    ell: int
    objects: SimpleObjectSet
    coeffs: np.ndarray
    dual_index: tuple[int, ...]
    fp_dims: tuple = field(default=(), repr=False)
    fp_global: object = field(default=None, repr=False)
    fp_ctx: PrecisionCtx | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.objects)

    def coefficient(self, i: int, j: int, k: int) -> int:
        rows = self._pair_rows.get((i, j))
        if rows is None:
            return 0
        ks, ns = rows
        hit = np.flatnonzero(ks == k)
        return int(ns[hit[0]]) if hit.size else 0

    def product(self, i: int, j: int) -> dict[int, int]:
        rows = self._pair_rows.get((i, j))
        if rows is None:
            return {}
        return {int(k): int(n) for k, n in zip(*rows)}

    def matrix(self, i: int) -> np.ndarray:
        """``(N_i)[a, b] = N^b_{i,a}``."""
        n = len(self)
        out = np.zeros((n, n), dtype=np.int64)
        sel = self.coeffs[:, 0] == i
        out[self.coeffs[sel, 1], self.coeffs[sel, 2]] = self.coeffs[sel, 3]
        return out

    def tensor(self) -> np.ndarray:
        """Dense ``N[i, j, k] = N^k_{i,j}``."""
        n = len(self)
        out = np.zeros((n, n, n), dtype=np.int64)
        c = self.coeffs
        out[c[:, 0], c[:, 1], c[:, 2]] = c[:, 3]
        return out

    def total_matrix(self) -> np.ndarray:
        """``sum_i N_i``, the matrix used for the Perron eigenvector."""
        n = len(self)
        out = np.zeros((n, n), dtype=np.int64)
        np.add.at(out, (self.coeffs[:, 1], self.coeffs[:, 2]), self.coeffs[:, 3])
        return out

    @property
    def _pair_rows(self) -> dict:
        cache = self.__dict__.get("_pairs")
        if cache is None:
            cache = {}
            c = self.coeffs
            order = np.lexsort((c[:, 2], c[:, 1], c[:, 0]))
            c = c[order]
            keys = c[:, 0] * len(self) + c[:, 1]
            starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
            ends = np.r_[starts[1:], len(c)]
            for s, e in zip(starts, ends):
                cache[(int(c[s, 0]), int(c[s, 1]))] = (c[s:e, 2], c[s:e, 3])
            self.__dict__["_pairs"] = cache
        return cache

    def with_fp(self, ctx: PrecisionCtx) -> "FusionTable":
        """Attach Frobenius-Perron dimensions computed at ``ctx`` precision."""
        if self.fp_ctx == ctx:
            return self
        dims, total = frobenius_perron(self.total_matrix(), ctx)
        return FusionTable(self.algebra, self.ell, self.objects, self.coeffs,
                           self.dual_index, dims, total, ctx)


def build_fusion_table(datum: RootDatum, ell: int, objects: SimpleObjectSet,
                       coeffs: np.ndarray, dual_index=None,
                       ctx: PrecisionCtx | None = PrecisionCtx()) -> FusionTable:
    """Wrap raw coefficient rows; derive duals from ``N^1``; attach FP data."""
    coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, 4)
    coeffs = coeffs[np.lexsort((coeffs[:, 2], coeffs[:, 1], coeffs[:, 0]))]
    coeffs.setflags(write=False)
    if dual_index is None:
        unit = coeffs[coeffs[:, 2] == 0]
        duals = [-1] * len(objects)
        for i, j, _, n in unit:
            if n == 1:
                duals[int(i)] = int(j)
        if -1 in duals:
            raise FoldingError(f"object {objects.objects[duals.index(-1)]} has no dual")
        dual_index = tuple(duals)
    table = FusionTable(datum.algebra, ell, objects, coeffs, tuple(dual_index))
    return table.with_fp(ctx) if ctx is not None else table


def fusion_table(datum: RootDatum, ell: int, ctx: PrecisionCtx | None = PrecisionCtx()) -> FusionTable:
    """All fusion coefficients for ``(algebra, ell)`` plus FP dimensions."""
    objects = simple_objects(datum, ell)
    n = len(objects)
    rows = []
    for i in range(n):
        for j in range(i, n):
            for nu, mult in _product(datum, objects.objects[i], objects.objects[j], ell).items():
                k = objects.index.get(nu)
                if k is None:
                    raise FoldingError(f"fusion produced {nu} outside the alcove")
                rows.append((i, j, k, mult))
                if i != j:
                    rows.append((j, i, k, mult))
    return build_fusion_table(datum, ell, objects, np.array(rows, dtype=np.int64), ctx=ctx)


def frobenius_perron(M: np.ndarray, ctx: PrecisionCtx = PrecisionCtx(), max_steps: int = 10**6):
    """Perron eigenvector of ``M = sum_i N_i`` by power iteration.

    Iterates from the all-ones vector, first in double precision and then in
    fixed-point integer arithmetic carrying ``ctx.digits`` digits.  Returns
    ``(dims, total)`` where ``dims[i] = v_i / v_0`` is the FP dimension of
    object ``i`` (because ``(N_i v)_0 = v_i``) and ``total = sum dims^2``.
    """
    mp = ctx.mp
    n = M.shape[0]
    Mf = M.astype(np.float64)
    v = np.ones(n)
    steps = 0
    while True:
        w = Mf @ v
        w /= w.max()
        steps += 1
        if np.max(np.abs(w - v) / w) < 1e-14:
            v = w
            break
        if steps >= max_steps:
            raise NumericalInstabilityError("power iteration did not converge")
        v = w

    bits = int(ctx.digits * 3.33) + 24
    scale = 1 << bits
    Mo = M.astype(object)
    vi = np.array([int(x * scale) for x in v], dtype=object)
    rq_target = mp.mpf(10) ** (-(ctx.digits - 6))
    vec_target = mp.mpf(10) ** (-min(ctx.tolerance_exponent + 2, ctx.digits - 3))
    rq_prev = None
    while True:
        wi = Mo.dot(vi)
        rq = mp.mpf(int(vi.dot(wi))) / int(vi.dot(vi))
        top = max(wi)
        wi = np.array([x * scale // top for x in wi], dtype=object)
        steps += 1
        change = max(abs(int(a) - int(b)) for a, b in zip(wi, vi))
        vi = wi
        if rq_prev is not None and abs(rq - rq_prev) <= rq_target * rq \
                and mp.mpf(change) / scale <= vec_target * mp.mpf(min(vi)) / scale:
            break
        if steps >= max_steps:
            raise NumericalInstabilityError("power iteration did not converge")
        rq_prev = rq
    unit = mp.mpf(int(vi[0]))
    dims = tuple(mp.mpf(int(x)) / unit for x in vi)
    return dims, mp.fsum(d * d for d in dims)
