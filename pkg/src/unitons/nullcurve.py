"""Null curves in C^3 and C^4, their free Weierstrass data, and totally
isotropic curves in odd dimension.

Coordinates are null-basis coordinates throughout, so the complex bilinear
form on C^3 reads 2 x1 y3 + x2 y2 and on C^4 reads 2 (x1 y4 + x2 y3).
Derivatives written nu^(k) are generalized derivatives with respect to the
first Gauss map (g for C^3, g1 for C^4).
"""

from dataclasses import dataclass

from . import gaussmat as gm
from .canonical import canonical_from_type
from .errors import (
    DegenerateCurve,
    DegenerateData,
    NotFull,
    NotIsotropic,
    PoleAtPoint,
    TypeMismatch,
)
from .exactnum import GaussianRational, RationalFunction, as_rf, format_rf
from .lambdamat import LambdaMatrix, bilinear
from .solver import SolutionCandidate, _with_border, complete_by_algebra, derivs_wrt

_HALF = RationalFunction.const(1) / 2


@dataclass(frozen=True)
class NullCurve:
    n_ambient: int
    components: tuple

    def __post_init__(self):
        comps = tuple(as_rf(c) for c in self.components)
        if len(comps) != self.n_ambient or self.n_ambient not in (3, 4):
            raise TypeMismatch(f"expected a curve in C^3 or C^4, got {len(comps)} components")
        object.__setattr__(self, "components", comps)

    def derivative(self):
        return [c.derivative() for c in self.components]

    def nullity(self):
        """(chi', chi') as a rational function; zero for a null curve."""
        return null_quadratic(self.derivative())

    def is_null(self):
        d = self.derivative()
        return any(not x.is_zero() for x in d) and null_quadratic(d).is_zero()

    def to_json(self):
        return {"n_ambient": self.n_ambient, "components": [format_rf(c) for c in self.components]}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n_ambient"]), tuple(obj["components"]))


def null_quadratic(v):
    """The null-basis quadratic form (v, v)."""
    n = len(v)
    acc = RationalFunction.ZERO
    for j in range(n):
        acc = acc + v[j] * v[n - 1 - j]
    return acc


@dataclass(frozen=True)
class WeierstrassData:
    """Free Weierstrass data: keys (g, nu) for C^3 or (g1, h1, h2) for C^4."""

    n_ambient: int
    values: tuple  # sorted (name, RationalFunction) pairs

    @classmethod
    def c3(cls, g, nu):
        return cls(3, (("g", as_rf(g)), ("nu", as_rf(nu))))

    @classmethod
    def c4(cls, g1, h1, h2):
        return cls(4, (("g1", as_rf(g1)), ("h1", as_rf(h1)), ("h2", as_rf(h2))))

    def __getitem__(self, key):
        return dict(self.values)[key]

    def to_json(self):
        return {"n_ambient": self.n_ambient, **{k: format_rf(v) for k, v in self.values}}

    @classmethod
    def from_json(cls, obj):
        if int(obj["n_ambient"]) == 3:
            return cls.c3(obj["g"], obj["nu"])
        return cls.c4(obj["g1"], obj["h1"], obj["h2"])


def _require_nonconstant(f, what):
    if f.derivative().is_zero():
        raise DegenerateData(f"{what} must be non-constant")


def weierstrass_c3(data):
    g, nu = data["g"], data["nu"]
    _require_nonconstant(g, "g")
    nu0, nu1, nu2 = derivs_wrt(nu, g, 2)
    _require_nonconstant(nu2, "nu^(2)")
    chi = (nu2, -nu1 + g * nu2, -nu0 + g * nu1 - _HALF * g * g * nu2)
    return NullCurve(3, chi)


def weierstrass_c4(data):
    g1, h1, h2 = data["g1"], data["h1"], data["h2"]
    _require_nonconstant(g1, "g1")
    h1_0, h1_1 = derivs_wrt(h1, g1, 1)
    _require_nonconstant(h1_1, "h1^(1)")
    h2_0, h2_1 = derivs_wrt(h2, g1, 1)
    chi = (h1_1, -h1_0 + g1 * h1_1, h2_1, h2_0 - g1 * h2_1)
    return NullCurve(4, chi)


def weierstrass(data):
    return weierstrass_c3(data) if data.n_ambient == 3 else weierstrass_c4(data)


def curve_to_matrix(chi):
    """The unique S^1-invariant solution whose last column carries chi."""
    if chi.n_ambient == 3:
        return _curve_to_matrix_c3(chi)
    return _curve_to_matrix_c4(chi)


def _curve_to_matrix_c3(chi):
    x1, x2, x3 = chi.components
    d1 = x1.derivative()
    if d1.is_zero():
        raise DegenerateCurve("chi_1' vanishes identically")
    if not null_quadratic(chi.derivative()).is_zero():
        raise DegenerateCurve("curve is not null")
    g = x2.derivative() / d1
    if g.derivative().is_zero():
        raise DegenerateCurve("[chi'] is constant")
    interior = LambdaMatrix([[1, -g, -_HALF * g * g], [0, 1, g], [0, 0, 1]])
    partial = _with_border(interior, last={2: x3, 3: x2, 4: x1})
    A = complete_by_algebra(partial, given="column")
    return SolutionCandidate(A, canonical_from_type([1] * 5), {"g": g, "nu": A[1, 4].coeff(0)})


def _curve_to_matrix_c4(chi):
    x1, x2, x3, x4 = chi.components
    d1 = x1.derivative()
    if d1.is_zero():
        raise DegenerateCurve("chi_1 is constant")
    if not null_quadratic(chi.derivative()).is_zero():
        raise DegenerateCurve("curve is not null")
    g1 = x2.derivative() / d1
    g2 = x3.derivative() / d1
    if g1.derivative().is_zero():
        raise DegenerateCurve("g1 = chi_2'/chi_1' is constant")
    interior = LambdaMatrix([[1, -g1, -g2, -g1 * g2], [0, 1, 0, g2], [0, 0, 1, g1], [0, 0, 0, 1]])
    partial = _with_border(interior, last={2: x4, 3: x3, 4: x2, 5: x1})
    A = complete_by_algebra(partial, given="column")
    return SolutionCandidate(A, canonical_from_type([1, 1, 2, 1, 1]), {"g1": g1, "g2": g2})


def matrix_to_curve(cand):
    t = tuple(cand.xi.type)
    A = cand.A
    if t == (1, 1, 1, 1, 1):
        return NullCurve(3, tuple(A[i, 5].coeff(0) for i in (4, 3, 2)))
    if t == (1, 1, 2, 1, 1):
        return NullCurve(4, tuple(A[i, 6].coeff(0) for i in (5, 4, 3, 2)))
    raise TypeMismatch(f"type {t} carries no null curve")


def matrix_to_data(cand):
    t = tuple(cand.xi.type)
    A = cand.A
    if not A.is_lambda_free():
        raise TypeMismatch("null-curve data needs a lambda-free matrix")
    a = lambda i, j: A[i, j].coeff(0)  # noqa: E731
    if t == (1, 1, 1, 1, 1):
        return WeierstrassData.c3(a(3, 4), a(1, 4))
    if t == (1, 1, 2, 1, 1):
        return WeierstrassData.c4(a(4, 5), a(1, 3), a(1, 3) * a(3, 5) - a(1, 5))
    raise TypeMismatch(f"type {t} carries no Weierstrass data")


# -- totally isotropic curves ----------------------------------------------


def _derivative_table(F, order):
    table = [[as_rf(f) for f in F]]
    for _ in range(order):
        table.append([f.derivative() for f in table[-1]])
    return table


def isotropy_check(F, t):
    """(F^(i), F^(j)) = 0 for all i, j >= 0 with i + j <= t."""
    F = [as_rf(f) for f in F]
    if all(f.is_zero() for f in F):
        raise ValueError("F must not vanish identically")
    if t < 0:
        return True
    table = _derivative_table(F, t)
    for i in range(t + 1):
        for j in range(i, t + 1 - i):
            if not bilinear(table[i], table[j]).is_zero():
                return False
    return True


def isotropy_order(F):
    """Largest t with (F^(i), F^(j)) = 0 for i + j <= t, capped at len(F) - 2."""
    t = -1
    while t + 1 <= len(F) - 2 and isotropy_check(F, t + 1):
        t += 1
    return t


def _rank_rf(rows):
    """Rank of a matrix of rational functions by fraction-field elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((k for k in range(rank, len(rows)) if not rows[k][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        for k in range(rank + 1, len(rows)):
            if not rows[k][c].is_zero():
                f = rows[k][c] * inv
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[rank])]
        rank += 1
    return rank


def is_full(F, samples=(GaussianRational(3, 1), GaussianRational(-2, 5), GaussianRational(7, -3))):
    """Wronskian test: F, F', ..., F^(n-1) are linearly independent.

    A nonzero Wronskian at any sample point settles the question; only when
    every sample is degenerate do we fall back to symbolic elimination.
    """
    n = len(F)
    table = _derivative_table(F, n - 1)
    for z0 in samples:
        try:
            rows = [[f(z0) for f in row] for row in table]
        except PoleAtPoint:
            continue
        if gm.rank(rows, n) == n:
            return True
    return _rank_rf(table) == n


def calabi_reconstruct(F):
    """Type (1,...,1) candidate with last column F^TT, i.e. a_in = F_{n-i}.

    F is a projective representative; it is rescaled so that F_0 = 1.
    Columns follow from c_j = c_{j+1}' / a_{j,j+1}'.
    """
    F = [as_rf(f) for f in F]
    n = len(F)
    if n % 2 == 0:
        raise TypeMismatch("totally isotropic reconstruction needs odd n")
    if F[0].is_zero():
        raise NotFull("F_0 vanishes identically")
    F = [f / F[0] for f in F]
    if not isotropy_check(F, n - 2):
        raise NotIsotropic(f"F is not isotropic to order {n - 2}")
    if not is_full(F):
        raise NotFull("F is not full")
    cols = [None] * n
    cols[n - 1] = [F[n - 1 - i] for i in range(n)]
    for j in range(n - 2, -1, -1):
        nxt = cols[j + 1]
        denom = nxt[j].derivative()
        if denom.is_zero():
            raise NotFull(f"reconstruction denominator a_{j + 1},{j + 2}' vanishes")
        inv = denom.inverse()
        cols[j] = [x.derivative() * inv for x in nxt]
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    return SolutionCandidate(LambdaMatrix(rows), canonical_from_type([1] * n), {})


def last_column_curve(cand):
    """F with F_k = a_{n-k, n}, the projective curve carried by the last column."""
    n = cand.A.n
    return [cand.A[n - k, n].coeff(0) for k in range(n)]
