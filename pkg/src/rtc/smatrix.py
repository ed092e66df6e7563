"""S-matrix routes: Weyl-group sum, Verlinde inversion, and reconstruction
from fusion rules plus twists.

High-precision matrices are numpy object arrays of mpmath ``mpc`` values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alcove import root_params, simple_objects
from .errors import NumericalInstabilityError, OracleFailureError, ParameterError
from .fusion import FusionTable
from .lie import RootDatum, weyl_group
from .qnum import PrecisionCtx, QDimTable

__all__ = [
    "VerlindeResult",
    "kp_smatrix",
    "reconstruct_smatrix",
    "s_invertible",
    "to_complex",
    "verlinde",
]

VERLINDE_THRESHOLD = 1e-6
WEYL_LIMIT = 10_000


def to_complex(S) -> np.ndarray:
    """Round an object array of mpmath numbers to complex128."""
    return np.array([[complex(z) for z in row] for row in S], dtype=np.complex128)


def kp_smatrix(datum: RootDatum, ell: int, p: int, ctx: PrecisionCtx = PrecisionCtx()):
    """Normalized S-matrix from the alternating sum over the Weyl group.

    ``S~[a, b] = sum_w det(w) exp(-2 pi i p m <w(a + rho), b + rho> / ell)``,
    divided by ``S~[1, 1]``.  The pairings are integers over ``mform_den``, so
    each term is a power of a single root of unity of order ``den * ell``;
    the sum is accumulated as exact integer counts per power.
    """
    params = root_params(datum.algebra, ell, p)
    if not params.uniform:
        raise ParameterError("the Weyl-sum S-matrix is only defined for uniform ell")
    mats, dets = weyl_group(datum, WEYL_LIMIT)
    objects = simple_objects(datum, ell)
    n = len(objects)
    X = np.asarray(objects.objects, dtype=np.int64) + 1
    images = np.einsum("ar,wrs->aws", X, mats)
    pair = np.einsum("aws,st,bt->abw", images, datum.mform, X)
    order = datum.mform_den * ell
    powers = (-params.p_sym * pair) % order

    counts = np.zeros((n, n, order), dtype=np.int64)
    a_idx, b_idx, _ = np.indices(pair.shape)
    np.add.at(counts, (a_idx.ravel(), b_idx.ravel(), powers.ravel()),
              np.broadcast_to(dets, pair.shape).ravel())

    mp = ctx.mp
    zeta = [mp.expjpi(mp.mpf(2 * e) / order) for e in range(order)]
    S = np.empty((n, n), dtype=object)
    for a in range(n):
        for b in range(a, n):
            nz = np.flatnonzero(counts[a, b])
            val = mp.fdot([int(c) for c in counts[a, b, nz]], [zeta[e] for e in nz])
            S[a, b] = S[b, a] = val
    norm = S[0, 0]
    if abs(norm) < ctx.tol:
        raise NumericalInstabilityError("Weyl denominator vanishes")
    return S / norm


@dataclass(frozen=True)
class VerlindeResult:
    coeffs: np.ndarray  # rows (i, j, k, N)
    residual: float

    def tensor(self, n: int) -> np.ndarray:
        out = np.zeros((n, n, n), dtype=np.int64)
        c = self.coeffs
        out[c[:, 0], c[:, 1], c[:, 2]] = c[:, 3]
        return out


def verlinde(S, ctx: PrecisionCtx | None = None) -> VerlindeResult:
    """Fusion coefficients ``sum_k S_ik S_jk conj(S_lk) / (D^2 S_1k)``, rounded.

    The sum runs in complex128; the rounding threshold (1e-6) is many orders
    of magnitude above double-precision error for the matrix sizes involved.
    """
    Sc = S if isinstance(S, np.ndarray) and S.dtype != object else to_complex(S)
    n = Sc.shape[0]
    first = Sc[0]
    if np.any(np.abs(first) < 1e-12):
        raise OracleFailureError("S has a vanishing entry in the unit row")
    d2 = float(np.sum(np.abs(first) ** 2))
    SH = Sc.conj().T
    rows = []
    residual = 0.0
    for i in range(n):
        Ni = (Sc * (Sc[i] / first)) @ SH / d2
        rounded = np.rint(Ni.real)
        residual = max(residual, float(np.max(np.abs(Ni - rounded))))
        j, k = np.nonzero(rounded)
        rows.extend((i, int(a), int(b), int(rounded[a, b])) for a, b in zip(j, k))
    if residual > VERLINDE_THRESHOLD:
        raise OracleFailureError(f"Verlinde coefficients are not integral (residual {residual:.3g})")
    coeffs = np.array(rows, dtype=np.int64).reshape(-1, 4)
    return VerlindeResult(coeffs, residual)


def reconstruct_smatrix(table: FusionTable, qtable: QDimTable, ctx: PrecisionCtx = PrecisionCtx()):
    """``S_ab = conj(theta_a theta_b) sum_c N^c_{a*, b} d_c theta_c``."""
    params = qtable.params
    if (params.algebra, params.ell) != (table.algebra, table.ell):
        raise ParameterError("fusion table and dimension table describe different categories")
    mp = ctx.mp
    n = len(table)
    weighted = [d * t for d, t in zip(qtable.dims, qtable.twists)]
    inv_twist = [mp.conj(t) for t in qtable.twists]
    S = np.empty((n, n), dtype=object)
    for a in range(n):
        abar = table.dual_index[a]
        for b in range(a, n):
            prod = table.product(abar, b)
            total = mp.fdot(list(prod.values()), [weighted[c] for c in prod])
            S[a, b] = S[b, a] = total * inv_twist[a] * inv_twist[b]
    return S


def s_invertible(S, ctx: PrecisionCtx = PrecisionCtx()) -> bool:
    """Decide invertibility of ``S / D``.

    True when ``(S/D)(S/D)^H`` is the identity within ``10^(-tol/2)``, False
    when a singular value drops below that bound, otherwise the precision is
    insufficient and NumericalInstabilityError is raised.
    """
    exponent = ctx.tolerance_exponent / 2
    if exponent <= 12:
        Sc = S if isinstance(S, np.ndarray) and S.dtype != object else to_complex(S)
        bound = 10.0 ** (-exponent)
        D = np.sqrt(np.sum(np.abs(Sc[0]) ** 2))
        U = Sc / D
        err = np.max(np.abs(U @ U.conj().T - np.eye(len(U))))
        if err < bound:
            return True
        smallest = np.linalg.svd(U, compute_uv=False).min()
    else:
        mp = ctx.mp
        M = mp.matrix(S.tolist())
        n = M.rows
        D = mp.sqrt(mp.fsum(abs(M[0, j]) ** 2 for j in range(n)))
        U = M / D
        E = U * U.H - mp.eye(n)
        err = max(abs(E[i, j]) for i in range(n) for j in range(n))
        bound = mp.mpf(10) ** (-exponent)
        if err < bound:
            return True
        smallest = min(mp.svd_c(U, compute_uv=False))
    if smallest < bound:
        return False
    raise NumericalInstabilityError(
        f"S-matrix neither unitary nor singular within {bound} (smallest singular value {smallest})")
