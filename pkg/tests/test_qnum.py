from fractions import Fraction

import mpmath
import numpy as np
import pytest

from rtc.alcove import admissible_ps, root_params, simple_objects
from rtc.errors import DegenerateObjectError, ParameterError, ResonanceError
from rtc.lie import AlgebraId, build_root_datum, dual_weight, weight_multiplicities
from rtc.qnum import (
    PrecisionCtx,
    global_quantities,
    qdim,
    qdims_float,
    twist,
    twist_exponent,
)

CTX = PrecisionCtx()
MP = CTX.mp  # references must be evaluated at the working precision
TOL = MP.mpf(10) ** -20


def char_dim(datum, params, lam, mp):
    """Independent route: d = sum_mu mult(mu) x^(2 m <mu, rho>), x = exp(i pi p / ell)."""
    total = mp.mpc(0)
    for mu, n in weight_multiplicities(datum, lam).items():
        e = datum.minner(mu, datum.rho) * 2 * params.p_sym
        total += n * mp.expjpi(mp.mpf(e.numerator) / (e.denominator * params.ell))
    assert abs(total.imag) < mp.mpf(10) ** -25
    return total.real


def test_precision_ctx():
    assert PrecisionCtx().tolerance_exponent == 20
    assert PrecisionCtx(40).tolerance_exponent == 30
    assert PrecisionCtx(40).doubled().digits == 80
    with pytest.raises(ParameterError):
        PrecisionCtx(10)


def test_qdim_examples():
    a1 = build_root_datum(AlgebraId("A", 1))
    d = qdim(a1, root_params(a1.algebra, 4, 1), (1,), CTX)
    assert abs(d - MP.sqrt(2)) < TOL
    g2 = build_root_datum(AlgebraId("G", 2))
    phi = (1 + MP.sqrt(5)) / 2
    assert abs(qdim(g2, root_params(g2.algebra, 15, 1), (0, 1), CTX) - phi) < TOL
    assert abs(qdim(g2, root_params(g2.algebra, 15, 2), (0, 1), CTX) + 1 / phi) < TOL
    assert qdim(g2, root_params(g2.algebra, 15, 2), (0, 0), CTX) == 1


@pytest.mark.parametrize("name,ell", [("A2", 6), ("A3", 7), ("B3", 12), ("B3", 9), ("C2", 9), ("C3", 11),
                                      ("G2", 11), ("G2", 16), ("F4", 17), ("D4", 8)])
def test_qdim_matches_q_character(name, ell):
    alg = AlgebraId.parse(name)
    d = build_root_datum(alg)
    objs = simple_objects(d, ell)
    for p in admissible_ps(ell):
        params = root_params(alg, ell, p)
        for lam in list(objs)[:12]:
            ours = qdim(d, params, lam, CTX)
            ref = char_dim(d, params, lam, CTX.mp)
            assert abs(ours - ref) <= TOL * max(1, abs(ref))


def test_qdim_classical_limit():
    # the sine ratio tends to the Weyl dimension with O((p/ell)^2) error
    from rtc.alcove import RootOfUnityParams
    g2 = build_root_datum(AlgebraId("G", 2))
    for lam, dim in [((0, 1), 7), ((1, 0), 14)]:
        errs = []
        for ell in (301, 3001):
            params = RootOfUnityParams(g2.algebra, ell, 1, False, Fraction(ell, 3) - 4)
            errs.append(abs(qdim(g2, params, lam, CTX) - dim))
        assert errs[1] < 1e-3 and 90 < errs[0] / errs[1] < 110


def test_qdim_resonance_and_degeneracy():
    a1 = build_root_datum(AlgebraId("A", 1))
    # ell = 2: only the unit object, but the denominator sin(pi p/2) is fine; ell=1 is rejected
    b3 = build_root_datum(AlgebraId("B", 3))
    # a point outside the alcove hits a vanishing numerator
    params = root_params(a1.algebra, 4, 1)
    with pytest.raises(DegenerateObjectError) as exc:
        qdim(a1, params, (3,), CTX)
    assert exc.value.weight == (3,)
    with pytest.raises(ParameterError):
        qdim(b3, root_params(b3.algebra, 12, 1), (1, 0), CTX)


def test_resonance_error_carries_root():
    # an (illegal for the census) params object whose ell divides p m <rho, alpha>
    from rtc.alcove import RootOfUnityParams
    a2 = build_root_datum(AlgebraId("A", 2))
    params = RootOfUnityParams(a2.algebra, 2, 1, True, Fraction(-1))
    with pytest.raises(ResonanceError) as exc:
        qdim(a2, params, (0, 0), CTX)
    assert exc.value.root is not None


def test_twist_examples():
    a1 = build_root_datum(AlgebraId("A", 1))
    params = root_params(a1.algebra, 4, 1)
    assert twist_exponent(a1, params, (1,)) == Fraction(3, 8)
    assert abs(twist(a1, params, (1,), CTX) - MP.expjpi(MP.mpf(3) / 8)) < TOL
    assert twist(a1, params, (0,), CTX) == 1
    a3 = build_root_datum(AlgebraId("A", 3))
    assert twist_exponent(a3, root_params(a3.algebra, 5, 2), (0, 1, 0)) == 0


def test_ising_spins_known_values():
    # su(2)_2 topological spins h = 0, 3/16, 1/2
    a1 = build_root_datum(AlgebraId("A", 1))
    params = root_params(a1.algebra, 4, 1)
    assert [twist_exponent(a1, params, lam) / 2 for lam in [(0,), (1,), (2,)]] == \
        [0, Fraction(3, 16), Fraction(1, 2)]


def test_global_quantities_examples():
    a1 = build_root_datum(AlgebraId("A", 1))
    q = global_quantities(a1, root_params(a1.algebra, 4, 1), CTX)
    assert abs(q.global_dim - 4) < TOL
    assert abs(q.p_plus - 2 * MP.expjpi(MP.mpf(3) / 8)) < TOL
    assert abs(q.p_plus * q.p_minus - 4) < TOL

    a3 = build_root_datum(AlgebraId("A", 3))
    q = global_quantities(a3, root_params(a3.algebra, 5, 2), CTX)
    assert [float(d) for d in q.dims] == [1, -1, 1, -1]
    assert abs(q.p_plus - MP.mpc(2, -2)) < TOL
    assert abs(q.p_plus * q.p_minus - 8) < TOL and abs(q.global_dim - 4) < TOL

    g2 = build_root_datum(AlgebraId("G", 2))
    for p in admissible_ps(7):
        q = global_quantities(g2, root_params(g2.algebra, 7, p), CTX)
        assert q.global_dim == 1 and q.p_plus == 1 and q.p_minus == 1


@pytest.mark.parametrize("name,ell", [("A3", 8), ("D5", 9), ("E6", 13), ("B3", 11), ("G2", 13)])
def test_qdimtable_invariants(name, ell):
    alg = AlgebraId.parse(name)
    d = build_root_datum(alg)
    for p in admissible_ps(ell):
        params = root_params(alg, ell, p)
        q = global_quantities(d, params, CTX)
        objs = q.objects
        assert q.dims[0] == 1
        for i, lam in enumerate(objs):
            j = objs.position(dual_weight(d, lam))
            assert abs(q.dims[i] - q.dims[j]) < TOL
            assert abs(q.twists[i] - q.twists[j]) < TOL
            assert abs(abs(q.twists[i]) - 1) < TOL
        # conjugation symmetry p -> ell - p
        q2 = global_quantities(d, root_params(alg, ell, ell - p), CTX)
        assert all(abs(a - b) < TOL for a, b in zip(q.dims, q2.dims))
        assert all(abs(a - MP.conj(b)) < TOL for a, b in zip(q.twists, q2.twists))


@pytest.mark.parametrize("name,k", [("A4", 3), ("B4", 2), ("C3", 3), ("D4", 3), ("E7", 2), ("F4", 2), ("G2", 4)])
def test_uniform_p1_dimensions_positive(name, k):
    from rtc.alcove import ell_from_level
    alg = AlgebraId.parse(name)
    d = build_root_datum(alg)
    ell = ell_from_level(alg, k)
    q = global_quantities(d, root_params(alg, ell, 1), CTX)
    assert all(x > 0 for x in q.dims)


def test_float_path_agrees():
    g2 = build_root_datum(AlgebraId("G", 2))
    params = root_params(g2.algebra, 16, 3)
    objs = simple_objects(g2, 16)
    fast = qdims_float(g2, params, objs)
    slow = [float(qdim(g2, params, lam, CTX)) for lam in objs]
    np.testing.assert_allclose(fast, slow, rtol=1e-12)


def test_contexts_are_isolated():
    a1 = build_root_datum(AlgebraId("A", 1))
    params = root_params(a1.algebra, 4, 1)
    wide = qdim(a1, params, (1,), PrecisionCtx(60))
    narrow = qdim(a1, params, (1,), PrecisionCtx(20))
    assert wide.context.dps == 60 and narrow.context.dps == 20
    assert mpmath.mp.dps == 15
