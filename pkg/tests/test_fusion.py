import itertools

import numpy as np
import pytest

from rtc.alcove import ell_from_level, simple_objects
from rtc.errors import ParameterError
from rtc.fusion import classical_tensor, frobenius_perron, fuse, fusion_table
from rtc.lie import AlgebraId, build_root_datum, weyl_dimension
from rtc.qnum import PrecisionCtx

CTX = PrecisionCtx()


def datum(name):
    return build_root_datum(AlgebraId.parse(name))


def su2_rule(a, b, k):
    """Closed-form su(2)_k fusion: c in |a-b| .. min(a+b, 2k-a-b), step 2."""
    return {(c,): 1 for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2)}


def test_classical_tensor_examples():
    assert classical_tensor(datum("A1"), (1,), (1,)) == {(0,): 1, (2,): 1}
    assert classical_tensor(datum("A2"), (1, 0), (0, 1)) == {(0, 0): 1, (1, 1): 1}
    assert classical_tensor(datum("G2"), (0, 1), (0, 1)) == {(0, 0): 1, (0, 1): 1, (1, 0): 1, (0, 2): 1}
    for name, lam in [("B3", (1, 0, 1)), ("F4", (0, 0, 0, 1))]:
        zero = (0,) * len(lam)
        assert classical_tensor(datum(name), lam, zero) == {lam: 1}
    with pytest.raises(ParameterError):
        classical_tensor(datum("A2"), (1, -1), (0, 1))


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "C3", "D4", "G2", "F4", "E6"])
def test_classical_tensor_dimension_count(name):
    d = datum(name)
    r = d.rank
    weights = [tuple(int(i == j) for j in range(r)) for i in range(min(r, 3))]
    for lam, mu in itertools.combinations_with_replacement(weights, 2):
        out = classical_tensor(d, lam, mu)
        assert all(n > 0 for n in out.values())
        assert sum(n * weyl_dimension(d, nu) for nu, n in out.items()) == \
            weyl_dimension(d, lam) * weyl_dimension(d, mu)


def test_fuse_examples():
    a1 = datum("A1")
    assert fuse(a1, 4, (1,), (1,)) == {(0,): 1, (2,): 1}
    assert fuse(a1, 4, (2,), (2,)) == {(0,): 1}
    assert fuse(datum("G2"), 15, (0, 1), (0, 1)) == {(0, 0): 1, (0, 1): 1}
    with pytest.raises(ParameterError):
        fuse(a1, 4, (3,), (1,))


@pytest.mark.parametrize("k", range(1, 9))
def test_a1_fusion_matches_closed_form(k):
    a1 = datum("A1")
    ell = ell_from_level(a1.algebra, k)
    for a in range(k + 1):
        for b in range(k + 1):
            assert fuse(a1, ell, (a,), (b,)) == su2_rule(a, b, k)


@pytest.mark.parametrize("name,lam,mu", [("A2", (1, 1), (2, 0)), ("B3", (1, 0, 0), (0, 0, 1)),
                                         ("G2", (0, 1), (1, 0)), ("C2", (1, 1), (0, 1))])
def test_fuse_equals_classical_at_large_ell(name, lam, mu):
    d = datum(name)
    ell = ell_from_level(d.algebra, 12)
    assert fuse(d, ell, lam, mu) == classical_tensor(d, lam, mu)


TABLES = [("A1", 4), ("A2", 6), ("A3", 5), ("A3", 8), ("B3", 9), ("B3", 12), ("C2", 7), ("C3", 9),
          ("D4", 8), ("D5", 9), ("G2", 8), ("G2", 11), ("G2", 15), ("F4", 17), ("E6", 13)]


@pytest.mark.parametrize("name,ell", TABLES)
def test_fusion_table_invariants(name, ell):
    d = datum(name)
    t = fusion_table(d, ell, CTX)
    n = len(t)
    N = t.tensor()
    dual = np.array(t.dual_index)
    assert (N >= 0).all()
    assert (N == N.transpose(1, 0, 2)).all()
    # N^nu_{lam,mu} = N^{mu*}_{lam,nu*}
    assert (N == N[:, dual, :][:, :, dual].transpose(0, 2, 1)).all()
    # N^nu_{lam,mu} = N^{nu*}_{lam*,mu*}
    assert (N == N[dual][:, dual][:, :, dual]).all()
    assert (N[:, :, 0] == (dual[:, None] == np.arange(n)[None, :])).all()
    assert (t.matrix(0) == np.eye(n, dtype=int)).all()
    mats = [t.matrix(i) for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            assert (mats[a] @ mats[b] == mats[b] @ mats[a]).all()
    # dual index agrees with the diagram automorphism
    from rtc.lie import dual_weight
    assert tuple(t.objects.position(dual_weight(d, lam)) for lam in t.objects) == t.dual_index


@pytest.mark.parametrize("name,ell", TABLES)
def test_fp_dims_match_eigensolver(name, ell):
    t = fusion_table(datum(name), ell, CTX)
    for i in range(len(t)):
        top = max(abs(np.linalg.eigvals(t.matrix(i).astype(float))))
        assert abs(float(t.fp_dims[i]) - top) < 1e-9 * top
        assert t.fp_dims[i] >= 1 - CTX.tol
    assert abs(t.fp_global - sum(f * f for f in t.fp_dims)) < CTX.tol * t.fp_global


def test_fp_examples():
    t = fusion_table(datum("G2"), 15, CTX)
    mp = CTX.mp
    # power iteration stops once the vector is stable to 10^-(tol + 2)
    assert abs(t.fp_dims[1] - (1 + mp.sqrt(5)) / 2) < mp.mpf(10) ** -(CTX.tolerance_exponent + 2)
    t = fusion_table(datum("G2"), 7, CTX)
    assert t.fp_dims == (1,) and t.fp_global == 1
    t = fusion_table(datum("A3"), 5, CTX)
    assert all(f == 1 for f in t.fp_dims) and t.fp_global == 4
    assert t.dual_index == (0, 3, 2, 1)


def test_frobenius_perron_direct():
    M = np.array([[1, 1], [1, 2]])
    dims, total = frobenius_perron(M, CTX)
    mp = CTX.mp
    # eigenvector of [[1,1],[1,2]] for (3+sqrt5)/2 is (1, golden ratio)
    assert abs(dims[1] - (1 + mp.sqrt(5)) / 2) < mp.mpf(10) ** -(CTX.tolerance_exponent + 2)


def test_table_lookup_helpers():
    t = fusion_table(datum("A1"), 4, CTX)
    assert t.product(1, 1) == {0: 1, 2: 1}
    assert t.coefficient(1, 1, 2) == 1 and t.coefficient(1, 1, 1) == 0
    assert (t.total_matrix() == sum(t.matrix(i) for i in range(3))).all()


def test_object_count_consistent_with_alcove():
    d = datum("A4")
    assert len(fusion_table(d, 8, CTX)) == len(simple_objects(d, 8))
