"""Root-of-unity parameters and the truncated set of simple objects."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InadmissibleParameterError, ParameterError
from .lie import AlgebraId, RootDatum, build_root_datum, dual_weight

__all__ = [
    "RootOfUnityParams",
    "SimpleObjectSet",
    "admissible_ps",
    "alcove_root",
    "ell_from_level",
    "root_params",
    "simple_objects",
    "symmetric_p",
]


@dataclass(frozen=True)
class RootOfUnityParams:
    """``q = exp(2 pi i p / ell)`` for the algebra ``algebra``.

    ``p_sym`` is the representative of ``p`` in ``(-ell/2, ell/2]``; all
    evaluations use the half-angle base ``exp(i pi p_sym / ell)``.
    """

    algebra: AlgebraId
    ell: int
    p: int
    uniform: bool
    level: Fraction

    @property
    def p_sym(self) -> int:
        return symmetric_p(self.p, self.ell)

    @property
    def k_label(self) -> str:
        k = self.level
        return str(k.numerator) if k.denominator == 1 else f"{k.numerator}/{k.denominator}"


def symmetric_p(p: int, ell: int) -> int:
    """Representative of ``p mod ell`` in ``(-ell/2, ell/2]``."""
    r = p % ell
    return r - ell if 2 * r > ell else r


def ell_from_level(algebra: AlgebraId, k: int) -> int:
    """``ell = m (k + g)`` for an integer (uniform) level."""
    datum = build_root_datum(algebra)
    return datum.length_ratio * (int(k) + datum.dual_coxeter)


def alcove_root(datum: RootDatum, ell: int) -> tuple[int, ...]:
    """Highest root when ``m | ell``, highest short root otherwise."""
    if ell % datum.length_ratio == 0:
        return datum.highest_root
    return datum.highest_short_root


def root_params(algebra: AlgebraId, ell: int, p: int) -> RootOfUnityParams:
    if isinstance(ell, bool) or int(ell) != ell or isinstance(p, bool) or int(p) != p:
        raise ParameterError(f"ell and p must be integers, got ell={ell!r}, p={p!r}")
    ell, p = int(ell), int(p)
    if ell < 2:
        raise InadmissibleParameterError(f"ell must be at least 2, got {ell}")
    if math.gcd(p, ell) != 1:
        raise InadmissibleParameterError(
            f"gcd(p,ell) must be 1, got gcd({p},{ell}) = {math.gcd(p, ell)}")
    datum = build_root_datum(algebra)
    m, g = datum.length_ratio, datum.dual_coxeter
    # raises when even the unit object is excluded
    simple_objects(datum, ell)
    return RootOfUnityParams(algebra, ell, p, ell % m == 0, Fraction(ell, m) - g)


def admissible_ps(ell: int) -> list[int]:
    """All ``1 <= p < ell/2`` coprime to ``ell``."""
    return [p for p in range(1, (ell + 1) // 2) if math.gcd(p, ell) == 1]


@dataclass(frozen=True)
class SimpleObjectSet:
    objects: tuple[tuple[int, ...], ...]
    index: dict

    def __len__(self):
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)

    def __contains__(self, lam):
        return tuple(lam) in self.index

    def position(self, lam) -> int:
        return self.index[tuple(lam)]


_OBJECT_CACHE: dict = {}


def simple_objects(datum: RootDatum, ell: int) -> SimpleObjectSet:
    """Dominant ``lam`` with ``m <lam + rho, theta'> < ell``.

    Ordered by total label sum, then reverse-lexicographically, with the unit
    object first.
    """
    if ell < 2:
        raise InadmissibleParameterError(f"ell must be at least 2, got {ell}")
    key = (datum.algebra, ell)
    hit = _OBJECT_CACHE.get(key)
    if hit is not None:
        return hit
    theta = alcove_root(datum, ell)
    # u[i] = m <omega_i, theta'>, an integer
    u = [int(datum.minner(tuple(int(i == j) for j in range(datum.rank)), theta))
         for i in range(datum.rank)]
    budget = ell - 1 - sum(u)  # m <lam, theta'> <= ell - 1 - m <rho, theta'>
    if budget < 0:
        raise InadmissibleParameterError(
            f"{datum.algebra} at ell={ell}: the unit object lies outside the alcove")
    ranges = [range(budget // ui + 1) for ui in u]
    found = [lam for lam in itertools.product(*ranges)
             if sum(a * b for a, b in zip(lam, u)) <= budget]
    found.sort(key=lambda lam: (sum(lam), tuple(-v for v in lam)))
    objects = tuple(found)
    result = SimpleObjectSet(objects, {lam: i for i, lam in enumerate(objects)})
    for lam in objects:
        assert dual_weight(datum, lam) in result.index
    _OBJECT_CACHE[key] = result
    return result


def alcove_level_vector(datum: RootDatum, ell: int) -> np.ndarray:
    """``u`` with ``x @ u == m <x, theta'>``."""
    theta = np.asarray(alcove_root(datum, ell), dtype=np.int64)
    scaled = datum.mform @ theta
    assert not (scaled % datum.mform_den).any()
    return scaled // datum.mform_den
