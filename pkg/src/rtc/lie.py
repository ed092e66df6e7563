"""Root systems of the simple Lie algebras A-G.

Weights are plain tuples of Dynkin labels (coefficients in the basis of
fundamental weights).  The Cartan matrix convention is
``A[i][j] = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)``, so row ``i`` of the
Cartan matrix is the Dynkin-label vector of the simple root ``alpha_i``.

The quadratic form ``F[i][j] = <omega_i, omega_j>`` is normalized so that long
roots have squared length 2.  Downstream modules mostly use the rescaled
pairing ``m <x, y>`` (``m`` the long/short squared-length ratio), in which
short roots have squared length 2.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapabilityError, ParameterError

__all__ = [
    "AlgebraId",
    "PositiveRoot",
    "RootDatum",
    "TABLE_III",
    "build_root_datum",
    "cartan_matrix",
    "dominant_image",
    "dual_weight",
    "inner_product",
    "is_dominant",
    "make_dominant",
    "weight_multiplicities",
    "weight_system",
    "weyl_dimension",
    "weyl_group",
]

_MIN_RANK = {"A": 1, "B": 3, "C": 2, "D": 4}
_EXCEPTIONAL_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


@dataclass(frozen=True, order=True)
class AlgebraId:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family
        if not isinstance(fam, str) or fam not in "ABCDEFG" or len(fam) != 1:
            raise ParameterError(f"unknown Lie algebra family {fam!r}")
        if isinstance(self.rank, bool) or not isinstance(self.rank, (int, np.integer)):
            raise ParameterError(f"rank must be an integer, got {self.rank!r}")
        object.__setattr__(self, "rank", int(self.rank))
        if fam in _MIN_RANK:
            if self.rank < _MIN_RANK[fam]:
                raise ParameterError(
                    f"{fam}_r requires r >= {_MIN_RANK[fam]}, got r={self.rank}")
        elif self.rank not in _EXCEPTIONAL_RANKS[fam]:
            raise ParameterError(f"{fam}_{self.rank} is not a simple Lie algebra")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "AlgebraId":
        """Parse labels such as ``"G2"``, ``"A_3"`` or ``"e8"``."""
        text = text.strip().replace("_", "")
        if len(text) < 2 or not text[1:].isdigit():
            raise ParameterError(f"cannot parse algebra label {text!r}")
        return cls(text[0].upper(), int(text[1:]))


# Tabulated data: dimension, dual Coxeter number, highest root, highest short
# root (None when simply laced), m, and the (1-based) short simple roots.
def _table_iii_row(alg: AlgebraId):
    r = alg.rank

    def unit(i):
        v = [0] * r
        v[i - 1] = 1
        return tuple(v)

    fam = alg.family
    if fam == "A":
        theta = (2,) if r == 1 else tuple([1] + [0] * (r - 2) + [1])
        return dict(dimension=r * r + 2 * r, g=r + 1, theta=theta,
                    theta_s=None, m=1, short=())
    if fam == "B":
        return dict(dimension=2 * r * r + r, g=2 * r - 1, theta=unit(2),
                    theta_s=unit(1), m=2, short=(r,))
    if fam == "C":
        theta = tuple([2] + [0] * (r - 1))
        return dict(dimension=2 * r * r + r, g=r + 1, theta=theta,
                    theta_s=unit(2), m=2, short=tuple(range(1, r)))
    if fam == "D":
        return dict(dimension=2 * r * r - r, g=2 * r - 2, theta=unit(2),
                    theta_s=None, m=1, short=())
    if fam == "E":
        dim, g, top = {6: (78, 12, 6), 7: (133, 18, 1), 8: (248, 30, 1)}[r]
        return dict(dimension=dim, g=g, theta=unit(top), theta_s=None, m=1,
                    short=())
    if fam == "F":
        return dict(dimension=52, g=9, theta=unit(1), theta_s=unit(4), m=2,
                    short=(3, 4))
    return dict(dimension=14, g=4, theta=unit(1), theta_s=unit(2), m=3,
                short=(2,))


class _TableIII:
    """Read-only lookup of the basic Lie algebra data, keyed by AlgebraId."""

    def __getitem__(self, alg: AlgebraId) -> dict:
        return _table_iii_row(alg)


TABLE_III = _TableIII()

_EXCEPTIONAL_CARTAN = {
    ("E", 6): [
        [2, -1, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0],
        [0, -1, 2, -1, 0, -1],
        [0, 0, -1, 2, -1, 0],
        [0, 0, 0, -1, 2, 0],
        [0, 0, -1, 0, 0, 2],
    ],
    ("E", 7): [
        [2, -1, 0, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0],
        [0, -1, 2, -1, 0, 0, -1],
        [0, 0, -1, 2, -1, 0, 0],
        [0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, -1, 2, 0],
        [0, 0, -1, 0, 0, 0, 2],
    ],
    ("E", 8): [
        [2, -1, 0, 0, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0, 0],
        [0, -1, 2, -1, 0, 0, 0, 0],
        [0, 0, -1, 2, -1, 0, 0, 0],
        [0, 0, 0, -1, 2, -1, 0, -1],
        [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, 0],
        [0, 0, 0, 0, -1, 0, 0, 2],
    ],
    ("F", 4): [
        [2, -1, 0, 0],
        [-1, 2, -2, 0],
        [0, -1, 2, -1],
        [0, 0, -1, 2],
    ],
    ("G", 2): [
        [2, -3],
        [-1, 2],
    ],
}


def cartan_matrix(alg: AlgebraId) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix exactly as printed in the appendix tables."""
    key = (alg.family, alg.rank)
    if key in _EXCEPTIONAL_CARTAN:
        return tuple(tuple(row) for row in _EXCEPTIONAL_CARTAN[key])
    r = alg.rank
    a = [[0] * r for _ in range(r)]
    for i in range(r):
        a[i][i] = 2
        if i + 1 < r:
            a[i][i + 1] = a[i + 1][i] = -1
    if alg.family == "B":
        a[r - 2][r - 1] = -2
    elif alg.family == "C":
        a[r - 1][r - 2] = -2
    elif alg.family == "D":
        # nodes r-1 and r both hang off node r-2
        a[r - 2][r - 1] = a[r - 1][r - 2] = 0
        a[r - 3][r - 1] = a[r - 1][r - 3] = -1
    return tuple(tuple(row) for row in a)


def _inverse(mat) -> list[list[Fraction]]:
    """Exact Gauss-Jordan inverse of a small integer matrix."""
    n = len(mat)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class PositiveRoot:
    simple_coeffs: tuple[int, ...]
    weight_coords: tuple[int, ...]
    half_square: Fraction

    @property
    def height(self) -> int:
        return sum(self.simple_coeffs)


@dataclass(frozen=True, eq=False)
class RootDatum:
    algebra: AlgebraId
    cartan: tuple[tuple[int, ...], ...]
    root_lengths_half: tuple[Fraction, ...]
    quadratic_form: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[PositiveRoot, ...]
    rho: tuple[int, ...]
    dual_coxeter: int
    length_ratio: int
    highest_root: tuple[int, ...]
    highest_short_root: tuple[int, ...] | None
    dimension: int
    # integer data for vectorized work: m*F == mform / mform_den
    mform: np.ndarray = field(repr=False)
    mform_den: int = field(repr=False)

    @property
    def rank(self) -> int:
        return self.algebra.rank

    def inner(self, x, y) -> Fraction:
        return inner_product(self, x, y)

    def minner(self, x, y) -> Fraction:
        """Rescaled pairing ``m <x, y>`` (short roots have squared length 2)."""
        return self.length_ratio * inner_product(self, x, y)

    @functools.cached_property
    def simple_roots(self) -> np.ndarray:
        return np.array(self.cartan, dtype=np.int64)

    @functools.cached_property
    def root_matrix(self) -> np.ndarray:
        """Integer matrix ``U`` with ``U[a, i] = m <omega_i, alpha_a>``.

        ``(x @ U.T)[a]`` is ``m <x, alpha_a>`` for the positive root ``a``.
        """
        m = self.length_ratio
        rows = []
        for root in self.positive_roots:
            row = [m * c * h for c, h in zip(root.simple_coeffs, self.root_lengths_half)]
            assert all(v.denominator == 1 for v in row)
            rows.append([int(v) for v in row])
        return np.array(rows, dtype=np.int64)


def _check_length(datum: RootDatum, x) -> None:
    if len(x) != datum.rank:
        raise ParameterError(
            f"weight {tuple(x)} has length {len(x)}, expected rank {datum.rank}")


def inner_product(datum: RootDatum, x, y) -> Fraction:
    """Exact ``<x, y>`` for weights given in Dynkin labels."""
    _check_length(datum, x)
    _check_length(datum, y)
    F = datum.quadratic_form
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            row = F[i]
            total += xi * sum((row[j] * yj for j, yj in enumerate(y) if yj), Fraction(0))
    return total


def _enumerate_positive_roots(cartan):
    """Breadth-first closure over root strings, ordered by (height, coeffs)."""
    r = len(cartan)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    found = set(simple)
    layer = sorted(simple, reverse=True)
    ordered = list(layer)
    while layer:
        nxt = set()
        for beta in layer:
            labels = [sum(beta[i] * cartan[i][j] for i in range(r)) for j in range(r)]
            for i in range(r):
                # alpha_i-string through beta: p - q = <beta, alpha_i^vee>
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in found:
                        p += 1
                    else:
                        break
                if p - labels[i] > 0:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= found
        found |= nxt
        layer = sorted(nxt, reverse=True)
        ordered.extend(layer)
    roots = []
    for c in ordered:
        coords = tuple(sum(c[i] * cartan[i][j] for i in range(r)) for j in range(r))
        roots.append((c, coords))
    return roots


@functools.lru_cache(maxsize=None)
def build_root_datum(algebra: AlgebraId) -> RootDatum:
    """Assemble the full root datum of ``algebra`` from its Cartan matrix."""
    if not isinstance(algebra, AlgebraId):
        raise ParameterError(f"expected AlgebraId, got {algebra!r}")
    row = TABLE_III[algebra]
    m = row["m"]
    cartan = cartan_matrix(algebra)
    r = algebra.rank
    halves = tuple(Fraction(1, m) if (j + 1) in row["short"] else Fraction(1)
                   for j in range(r))
    inv = _inverse(cartan)
    form = tuple(tuple(inv[i][j] * halves[j] for j in range(r)) for i in range(r))

    def ip(x, y):
        return sum((x[i] * form[i][j] * y[j] for i in range(r) for j in range(r)
                    if x[i] and y[j]), Fraction(0))

    roots = []
    for coeffs, coords in _enumerate_positive_roots(cartan):
        roots.append(PositiveRoot(coeffs, coords, ip(coords, coords) / 2))
    height = lambda pr: (pr.height, pr.simple_coeffs)
    highest = max(roots, key=height)
    shorts = [pr for pr in roots if pr.half_square != 1]
    highest_short = max(shorts, key=height).weight_coords if shorts else None
    longest = max(pr.half_square for pr in roots)
    shortest = min(pr.half_square for pr in roots)
    rho = (1,) * r
    g = ip(rho, highest.weight_coords) + 1
    assert longest == 1 and g.denominator == 1

    den = math.lcm(*(v.denominator for frow in form for v in frow))
    mform = np.array([[int(m * v * den) for v in frow] for frow in form], dtype=np.int64)
    gcd = math.gcd(den, *mform.ravel().tolist())
    return RootDatum(
        algebra=algebra,
        cartan=cartan,
        root_lengths_half=halves,
        quadratic_form=form,
        positive_roots=tuple(roots),
        rho=rho,
        dual_coxeter=int(g),
        length_ratio=int(longest / shortest),
        highest_root=highest.weight_coords,
        highest_short_root=highest_short,
        dimension=r + 2 * len(roots),
        mform=mform // gcd,
        mform_den=den // gcd,
    )


def is_dominant(x) -> bool:
    return all(v >= 0 for v in x)


def make_dominant(datum: RootDatum, x) -> tuple[tuple[int, ...], int]:
    """Reflect ``x`` into the dominant chamber, tracking ``det(w)``.

    Returns ``(image, sign)``; sign is 0 when ``x`` lies on a reflection wall.
    """
    _check_length(datum, x)
    x = list(x)
    sign = 1
    cartan = datum.cartan
    while True:
        i = next((j for j, v in enumerate(x) if v < 0), None)
        if i is None:
            break
        c = x[i]
        alpha = cartan[i]
        x = [xv - c * av for xv, av in zip(x, alpha)]
        sign = -sign
    if 0 in x:
        sign = 0
    return tuple(x), sign


def dominant_image(datum: RootDatum, x) -> tuple[int, ...]:
    """The unique dominant weight in the Weyl orbit of ``x``."""
    return make_dominant(datum, x)[0]


def dual_weight(datum: RootDatum, lam) -> tuple[int, ...]:
    """``lam* = -w0(lam)`` via the diagram automorphism."""
    _check_length(datum, lam)
    if not is_dominant(lam):
        raise ParameterError(f"dual_weight needs a dominant weight, got {tuple(lam)}")
    lam = tuple(int(v) for v in lam)
    fam, r = datum.algebra.family, datum.rank
    if fam == "A":
        return lam[::-1]
    if fam == "D" and r % 2 == 1:
        return lam[:-2] + (lam[-1], lam[-2])
    if fam == "E" and r == 6:
        return (lam[4], lam[3], lam[2], lam[1], lam[0], lam[5])
    return lam


def weyl_dimension(datum: RootDatum, lam) -> int:
    """Classical Weyl dimension formula, evaluated exactly."""
    _check_length(datum, lam)
    shifted = tuple(a + 1 for a in lam)
    num = Fraction(1)
    for root in datum.positive_roots:
        num *= inner_product(datum, shifted, root.weight_coords) / \
            inner_product(datum, datum.rho, root.weight_coords)
    assert num.denominator == 1
    return int(num)


_MULT_CACHE: dict = {}


def _norm_int(datum, x):
    """``den * m * <x, x>`` as an integer."""
    v = np.asarray(x, dtype=np.int64)
    return int(v @ datum.mform @ v)


def _dominant_multiplicities(datum: RootDatum, lam: tuple[int, ...]) -> dict:
    """Freudenthal recursion restricted to dominant weights."""
    roots = [np.array(pr.weight_coords, dtype=np.int64) for pr in datum.positive_roots]
    # all dominant weights below lam (covers in the dominance order are positive roots)
    dominant = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for a in roots:
                nu = tuple(int(v) for v in np.asarray(mu) - a)
                if min(nu) >= 0 and nu not in dominant:
                    dominant.add(nu)
                    nxt.append(nu)
        frontier = nxt

    G = datum.mform
    rho = np.ones(datum.rank, dtype=np.int64)
    lam_arr = np.asarray(lam, dtype=np.int64)
    top = int((lam_arr + rho) @ G @ (lam_arr + rho))

    # |mu + rho|^2 strictly increases along the dominance order on dominant
    # weights, so decreasing norm visits every mu after all weights above it
    order = sorted(dominant - {lam},
                   key=lambda w: (_norm_int(datum, np.asarray(w) + rho), w), reverse=True)
    mult = {lam: 1}
    for mu in order:
        mu_arr = np.asarray(mu, dtype=np.int64)
        total = 0
        for a in roots:
            aG = G @ a
            j = 1
            while True:
                w = mu_arr + j * a
                key = dominant_image(datum, tuple(int(v) for v in w))
                if key not in dominant:
                    break
                total += mult[key] * int(w @ aG)
                j += 1
        gap = top - int((mu_arr + rho) @ G @ (mu_arr + rho))
        value, rem = divmod(2 * total, gap)
        assert rem == 0 and value >= 0, (lam, mu, total, gap)
        mult[mu] = value
    return {k: v for k, v in mult.items() if v}


def _orbit(datum: RootDatum, mu: tuple[int, ...]) -> list[tuple[int, ...]]:
    cartan = datum.cartan
    seen = {mu}
    stack = [mu]
    while stack:
        x = stack.pop()
        for i, xi in enumerate(x):
            if xi:
                y = tuple(a - xi * b for a, b in zip(x, cartan[i]))
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return sorted(seen, reverse=True)


def weight_multiplicities(datum: RootDatum, lam) -> dict[tuple[int, ...], int]:
    """Full weight system of the irreducible representation ``lam``."""
    _check_length(datum, lam)
    if not is_dominant(lam):
        raise ParameterError(f"highest weight must be dominant, got {tuple(lam)}")
    lam = tuple(int(v) for v in lam)
    key = (datum.algebra, lam)
    cached = _MULT_CACHE.get(key)
    if cached is None:
        dom = _dominant_multiplicities(datum, lam)
        cached = {}
        for mu, mult in dom.items():
            for w in _orbit(datum, mu):
                cached[w] = mult
        _MULT_CACHE[key] = cached
    return dict(cached)


_ARRAY_CACHE: dict = {}


def weight_system(datum: RootDatum, lam) -> tuple[np.ndarray, np.ndarray]:
    """Weights and multiplicities of ``lam`` as integer arrays (cached)."""
    lam = tuple(int(v) for v in lam)
    key = (datum.algebra, lam)
    hit = _ARRAY_CACHE.get(key)
    if hit is None:
        mults = weight_multiplicities(datum, lam)
        ws = sorted(mults, reverse=True)
        weights = np.array(ws, dtype=np.int64).reshape(len(ws), datum.rank)
        counts = np.array([mults[w] for w in ws], dtype=np.int64)
        weights.setflags(write=False)
        counts.setflags(write=False)
        hit = (weights, counts)
        _ARRAY_CACHE[key] = hit
    return hit


def weyl_group(datum: RootDatum, limit: int = 10_000) -> tuple[np.ndarray, np.ndarray]:
    """All Weyl group elements as matrices acting on row vectors of Dynkin labels.

    Returns ``(mats, dets)`` with ``mats`` of shape ``(|W|, r, r)``.  The group
    is enumerated as the orbit of the regular weight ``rho``.
    """
    r = datum.rank
    cartan = np.array(datum.cartan, dtype=np.int64)
    gens = []
    for i in range(r):
        s = np.eye(r, dtype=np.int64)
        s[i, :] -= cartan[i]
        gens.append(s)
    ident = np.eye(r, dtype=np.int64)
    rho = np.ones(r, dtype=np.int64)
    elements = {tuple(rho): (ident, 1)}
    frontier = [(ident, 1)]
    while frontier:
        nxt = []
        for mat, det in frontier:
            for s in gens:
                w = mat @ s
                key = tuple(int(v) for v in rho @ w)
                if key not in elements:
                    elements[key] = (w, -det)
                    nxt.append((w, -det))
                    if len(elements) > limit:
                        raise CapabilityError(
                            f"Weyl group of {datum.algebra} exceeds {limit} elements")
        frontier = nxt
    keys = sorted(elements, reverse=True)
    mats = np.stack([elements[k][0] for k in keys])
    dets = np.array([elements[k][1] for k in keys], dtype=np.int64)
    return mats, dets
