"""Dense exact linear algebra over Q(i).

Vectors are lists of ``GaussianRational``; matrices are lists of rows.
Row reduction runs on the realification: a complex row v = a + ib becomes the
two rational rows for v and iv with coordinates interleaved as (re, im). The
reduced echelon form of that real span consists of exactly the realified
rows of the complex reduced echelon form and their i-multiples, so the
complex form can be read back from the rows whose pivot sits on a real slot.
"""

from flint import fmpq, fmpq_mat

from .exactnum import GaussianRational
from .errors import DivisionByZero

_Q0 = fmpq(0)
_G0 = GaussianRational(0)
_G1 = GaussianRational(1)


def _realify(rows, ncols):
    data = []
    for v in rows:
        re_row, im_row = [], []
        for x in v:
            re_row += [x.re, x.im]
            im_row += [-x.im, x.re]
        data.append(re_row)
        data.append(im_row)
    return fmpq_mat(len(data), 2 * ncols, [c for row in data for c in row]) if data else None


def rref(rows, ncols):
    """Reduced row echelon basis of the row span, with pivot columns.

    Pivots favour the lowest column index, so column order sets the
    tie-breaking rule.
    """
    rows = [v for v in rows if any(v)]
    if not rows:
        return [], []
    M, rank = _realify(rows, ncols).rref()
    out, pivots = [], []
    for k in range(rank):
        p = next(c for c in range(2 * ncols) if M[k, c] != _Q0)
        if p % 2:
            continue
        out.append([GaussianRational._raw(M[k, 2 * c], M[k, 2 * c + 1]) for c in range(ncols)])
        pivots.append(p // 2)
    return out, pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[0])


def nullspace(rows, ncols):
    """Basis of {x : M x = 0}, one vector per free column."""
    basis, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        x = [_G0] * ncols
        x[f] = _G1
        for row, p in zip(basis, pivots):
            x[p] = -row[f]
        out.append(x)
    return out


def annihilator(rows, ncols):
    """Linear functionals (as rows) vanishing exactly on the row span."""
    basis, pivots = rref(rows, ncols)
    pset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pset:
            continue
        phi = [_G0] * ncols
        phi[f] = _G1
        for row, p in zip(basis, pivots):
            phi[p] = -row[f]
        out.append(phi)
    return out


def in_span(v, basis, pivots):
    """Membership test against an rref basis."""
    w = list(v)
    for row, p in zip(basis, pivots):
        c = w[p]
        if c:
            w = [a - c * b for a, b in zip(w, row)]
    return not any(w)


def spans_contain(basis, vectors, ncols):
    """True when every vector lies in the span of ``basis``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return True
    return rank(list(basis) + vectors, ncols) == rank(list(basis), ncols)


# -- small square matrices ------------------------------------------------


def identity(n):
    return [[_G1 if i == j else _G0 for j in range(n)] for i in range(n)]


def zeros(n, m=None):
    return [[_G0] * (n if m is None else m) for _ in range(n)]


def _parts(X):
    rows, cols = len(X), len(X[0]) if X else 0
    re = fmpq_mat(rows, cols, [a.re for row in X for a in row])
    im = fmpq_mat(rows, cols, [a.im for row in X for a in row])
    return re, im


def _join(re, im):
    return [[GaussianRational._raw(re[i, j], im[i, j]) for j in range(re.ncols())]
            for i in range(re.nrows())]


def matmul(X, Y):
    if not X or not Y or not Y[0]:
        return [[] for _ in X]
    a, b = _parts(X)
    c, d = _parts(Y)
    return _join(a * c - b * d, a * d + b * c)


def matadd(X, Y):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(X, Y)]


def matsub(X, Y):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(X, Y)]


def scale(X, c):
    c = GaussianRational.coerce(c)
    return [[a * c for a in row] for row in X]


def transpose(X):
    return [list(col) for col in zip(*X)]


def conj(X):
    return [[a.conj() for a in row] for row in X]


def adjoint(X):
    """Conjugate transpose."""
    return [[a.conj() for a in col] for col in zip(*X)]


def second_transpose(X):
    n = len(X)
    return [[X[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)]


def flip_conj(X):
    """J conj(X) J with J the antidiagonal flip: complex conjugation in the null basis."""
    n = len(X)
    return [[X[n - 1 - i][n - 1 - j].conj() for j in range(n)] for i in range(n)]


def inverse(X):
    n = len(X)
    aug = [list(row) + [_G1 if i == j else _G0 for j in range(n)] for i, row in enumerate(X)]
    basis, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(basis) < n:
        raise DivisionByZero("singular matrix")
    return [row[n:] for row in basis[:n]]


def projector(vectors, n):
    """Hermitian projection onto the span of the given vectors."""
    basis, _ = rref(vectors, n)
    if not basis:
        return zeros(n)
    if len(basis) == n:
        return identity(n)
    B = transpose(basis)
    Bstar = [[a.conj() for a in v] for v in basis]
    return matmul(matmul(B, inverse(matmul(Bstar, B))), Bstar)


def is_zero(X):
    return not any(a for row in X for a in row)


def max_abs(X):
    return max((abs(complex(a)) for row in X for a in row), default=0.0)


def to_complex(X):
    return [[complex(a) for a in row] for row in X]
