import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtc.errors import CoverageError, InadmissibleParameterError, ParameterError
from rtc.lie import AlgebraId
from rtc.tables import expected_flags, jacobi


def _factor(n):
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def jacobi_oracle(a, n):
    """Product of Legendre symbols by Euler's criterion."""
    result = 1
    for q in _factor(n):
        r = pow(a % q, (q - 1) // 2, q)
        result *= 0 if r == 0 else (1 if r == 1 else -1)
    return result


def test_jacobi_examples():
    assert jacobi(7, 1) == 1
    assert jacobi(2, 15) == 1
    assert jacobi(3, 7) == -1


@given(st.integers(-500, 500), st.integers(0, 300).map(lambda k: 2 * k + 1))
def test_jacobi_matches_euler_criterion(a, n):
    assert jacobi(a, n) == jacobi_oracle(a, n)
    assert (jacobi(a, n) == 0) == (math.gcd(a, n) > 1)


@pytest.mark.parametrize("n", [0, -3, 4, 10])
def test_jacobi_rejects_bad_modulus(n):
    with pytest.raises(ParameterError):
        jacobi(3, n)


def test_expected_flags_examples():
    f = expected_flags(AlgebraId("B", 3), 12, 5)
    assert (f.unitary, f.pseudo_unitary, f.modular) == (False, True, True)
    f = expected_flags(AlgebraId("A", 5), 7, 2)
    assert (f.unitary, f.pseudo_unitary, f.modular) == (False, True, False)
    f = expected_flags(AlgebraId("G", 2), 11, 2)
    assert f.unitary and f.modular


def test_expected_flags_is_symmetric_in_p():
    alg = AlgebraId("E", 7)
    for k in (1, 2, 3, 4):
        ell = k + 18
        for p in range(1, ell):
            if math.gcd(p, ell) == 1:
                assert expected_flags(alg, ell, p) == expected_flags(alg, ell, ell - p)


def test_e7_level3_literal_encoding():
    # pseudo-unitary also at p = 4, unitary only at p in {1, 5}
    alg = AlgebraId("E", 7)
    flags = {p: expected_flags(alg, 21, p) for p in (1, 2, 4, 5, 8, 10)}
    assert {p for p, f in flags.items() if f.unitary} == {1, 5}
    assert {p for p, f in flags.items() if f.pseudo_unitary} == {1, 4, 5}


def test_uniform_p1_always_unitary_and_modular():
    for fam, ranks in [("A", range(1, 6)), ("B", range(3, 6)), ("C", range(2, 5)), ("D", range(4, 7)),
                       ("E", (6, 7, 8)), ("F", (4,)), ("G", (2,))]:
        for r in ranks:
            alg = AlgebraId(fam, r)
            from rtc.alcove import ell_from_level
            for k in range(1, 7):
                f = expected_flags(alg, ell_from_level(alg, k), 1)
                assert f.unitary and f.pseudo_unitary and f.modular


def test_unitary_implies_pseudo_unitary_everywhere():
    from rtc.alcove import admissible_ps
    for fam, r, ells in [("B", 4, range(9, 24)), ("C", 3, range(7, 20)), ("G", 2, range(7, 25)),
                         ("F", 4, range(13, 26)), ("D", 5, range(9, 15))]:
        alg = AlgebraId(fam, r)
        for ell in ells:
            for p in admissible_ps(ell):
                try:
                    f = expected_flags(alg, ell, p)
                except CoverageError:
                    continue
                assert not f.unitary or f.pseudo_unitary


def test_coverage_errors():
    with pytest.raises(CoverageError):
        expected_flags(AlgebraId("G", 2), 12, 1)  # k = 0
    with pytest.raises(CoverageError):
        expected_flags(AlgebraId("G", 2), 5, 1)  # below every non-uniform row
    with pytest.raises(InadmissibleParameterError):
        expected_flags(AlgebraId("G", 2), 9, 3)
