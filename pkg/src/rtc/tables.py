"""Closed-form (pseudo-)unitarity and modularity conditions, used as
regression oracles for the numerical census.

``p`` is always reduced to ``1 <= p < ell/2`` first (flags are invariant
under ``q -> q^-1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .alcove import symmetric_p
from .errors import CoverageError, InadmissibleParameterError, ParameterError
from .lie import AlgebraId, build_root_datum

__all__ = ["ExpectedFlags", "expected_flags", "jacobi"]


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol ``(a|n)`` for odd positive ``n``."""
    if n <= 0 or n % 2 == 0:
        raise ParameterError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class ExpectedFlags:
    unitary: bool
    pseudo_unitary: bool
    modular: bool


def _uniform(fam: str, r: int, k: int, p: int) -> tuple[bool, bool, bool]:
    if k < 1:
        raise CoverageError(f"no table row for {fam}{r} at level k={k}")
    odd = p % 2 == 1
    if fam == "A":
        modular = math.gcd(p, r + 1) == 1
        if k == 1:
            return odd, True, modular
        return p == 1, p == 1, modular
    if fam == "B":
        if k == 1:
            return p % 8 in (1, 7), True, True
        if k == 2:
            return jacobi(2 * r + 1, p) == 1, True, True
        return p == 1, p == 1, True
    if fam == "C":
        if k == 1:
            pseudo = p == 1 or (r % 2 == 0 and p == r + 1)
        elif k == 2:
            pseudo = p == 1 or (r == 2 and p == 3)
        else:
            pseudo = p == 1
        return p == 1, pseudo, True
    if fam == "D":
        if k == 1:
            unitary = True if r % 4 in (0, 1) else odd
            return unitary, True, odd
        if k == 2:
            return jacobi(r, p) == 1, True, odd
        return p == 1, p == 1, odd
    if fam == "E":
        rows = {
            6: ({1: "all", 2: {1}, 3: {1, 4}}, {1: "all", 2: {1}, 3: {1, 4}}, p % 3 != 0),
            7: ({1: "odd", 2: {1, 9}, 3: {1, 5}}, {1: "all", 2: {1, 9}, 3: {1, 4, 5}}, odd),
            8: ({1: "all", 2: {1, 7, 9, 15}, 3: {1, 10}, 4: {1}, 5: {1, 6}},
                {1: "all", 2: "all", 3: {1, 10}, 4: {1}, 5: {1, 6}}, True),
        }
        uni, pseudo, modular = rows[r]
        return _member(p, uni.get(k, {1})), _member(p, pseudo.get(k, {1})), modular
    if fam == "F":
        sets = {1: {1, 9}, 2: {1}, 3: {1, 5}, 4: {1, 5}}
        hit = p in sets.get(k, {1})
        return hit, hit, True
    if fam == "G":
        sets = {1: {1, 4}, 2: {1}, 3: {1, 4, 5}, 4: {1, 5}}
        hit = p in sets.get(k, {1})
        return hit, hit, True
    raise CoverageError(f"no uniform table row for family {fam}")


def _member(p: int, spec) -> bool:
    if spec == "all":
        return True
    if spec == "odd":
        return p % 2 == 1
    return p in spec


def _non_uniform(fam: str, r: int, ell: int, p: int) -> tuple[bool, bool, bool]:
    odd = p % 2 == 1
    if fam == "B":
        modular = r % 2 == 1 and odd
        if ell == 2 * r + 1:
            unitary = {0: True, 1: odd, 2: False, 3: not odd}[r % 4]
            return unitary, True, modular
        if ell == 2 * r + 3:
            unitary = (r % 2 == 1 and 2 * p == r + 1) or (r % 4 == 0 and 2 * p == r + 2)
            pseudo = (r % 2 == 1 and 2 * p == r + 1) or (r % 2 == 0 and 2 * p == r + 2)
            return unitary, pseudo, modular
        if ell >= 2 * r + 5:
            return False, False, modular
    elif fam == "C":
        if ell == 2 * r + 1:
            return False, True, False
        if ell == 2 * r + 3:
            return False, p == 2, False
        if ell >= 2 * r + 5:
            return False, False, False
    elif fam == "F":
        if ell == 13:
            return True, True, True
        if ell == 17:
            return p == 3, p == 3, True
        if ell == 15 or ell >= 19:
            return False, False, True
    elif fam == "G":
        rows = {7: (True, True), 8: (False, True), 10: (False, False),
                11: (p == 2, p == 2), 13: (p == 3, p == 3), 14: (p == 3, p == 3)}
        if ell in rows:
            return (*rows[ell], True)
        if ell >= 16:
            return False, False, True
    raise CoverageError(f"no non-uniform table row for {fam}{r} at ell={ell}")


def expected_flags(algebra: AlgebraId, ell: int, p: int) -> ExpectedFlags:
    """Evaluate the table row covering ``(algebra, ell)`` at ``p``."""
    if math.gcd(p, ell) != 1:
        raise InadmissibleParameterError(f"gcd(p,ell) must be 1, got gcd({p},{ell})")
    datum = build_root_datum(algebra)
    m, g = datum.length_ratio, datum.dual_coxeter
    p = abs(symmetric_p(p, ell))
    fam, r = algebra.family, algebra.rank
    if ell % m == 0:
        flags = _uniform(fam, r, ell // m - g, p)
    else:
        flags = _non_uniform(fam, r, ell, p)
    return ExpectedFlags(*flags)


def level_of(algebra: AlgebraId, ell: int) -> Fraction:
    datum = build_root_datum(algebra)
    return Fraction(ell, datum.length_ratio) - datum.dual_coxeter
