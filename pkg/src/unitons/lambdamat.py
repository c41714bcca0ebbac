"""Matrices whose entries are Laurent polynomials in the spectral parameter.

Entries are ``LambdaPoly`` values: finite maps from an integer lambda-degree
to a nonzero ``RationalFunction`` of ``z``. All matrices are written in the
null basis, where the symmetric bilinear form pairs coordinate ``j`` with
coordinate ``n + 1 - j`` and the transpose becomes reflection in the second
diagonal.
"""

from .errors import SizeMismatch
from .exactnum import GaussianRational, RationalFunction, as_rf, format_rf, parse_rf
from .report import Report

_RF0 = RationalFunction.ZERO


class LambdaPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, v in (terms or {}).items():
            v = as_rf(v)
            if not v.is_zero():
                clean[int(k)] = v
        self.terms = clean

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, f):
        return cls({0: f})

    @classmethod
    def monomial(cls, k, f=1):
        return cls({k: f})

    @property
    def min_deg(self):
        return min(self.terms) if self.terms else 0

    @property
    def max_deg(self):
        """Highest lambda-degree present; -1 for the zero polynomial."""
        return max(self.terms) if self.terms else -1

    def coeff(self, k):
        return self.terms.get(k, _RF0)

    def is_zero(self):
        return not self.terms

    def is_lambda_free(self):
        return all(k == 0 for k in self.terms)

    def __add__(self, other):
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, _RF0) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return LambdaPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LambdaPoly):
            f = as_rf(other)
            if f.is_zero():
                return LambdaPoly._raw({})
            return LambdaPoly._raw({k: v * f for k, v in self.terms.items()})
        out = {}
        for j, a in self.terms.items():
            for k, b in other.terms.items():
                out[j + k] = out.get(j + k, _RF0) + a * b
        return LambdaPoly._raw({k: v for k, v in out.items() if not v.is_zero()})

    __rmul__ = __mul__

    def shift(self, d):
        """Multiply by lambda^d."""
        return LambdaPoly._raw({k + d: v for k, v in self.terms.items()})

    def truncate_below(self, d):
        """Keep only the terms of degree < d (reduction mod lambda^d)."""
        return LambdaPoly._raw({k: v for k, v in self.terms.items() if k < d})

    def derivative(self):
        """Coefficientwise derivative in z."""
        out = {}
        for k, v in self.terms.items():
            dv = v.derivative()
            if not dv.is_zero():
                out[k] = dv
        return LambdaPoly._raw(out)

    def substitute(self, mu):
        """p(mu * lambda)."""
        mu = GaussianRational.coerce(mu)
        out = {}
        for k, v in self.terms.items():
            c = mu ** k if k >= 0 or mu else None
            if c is None:
                raise ZeroDivisionError("cannot substitute lambda = 0 into a Laurent term")
            if c:
                out[k] = v * c
        return LambdaPoly._raw(out)

    def __call__(self, z0, lam0):
        lam0 = GaussianRational.coerce(lam0)
        total = GaussianRational(0)
        for k, v in self.terms.items():
            total = total + v(z0) * lam0 ** k
        return total

    def __eq__(self, other):
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))

    def __repr__(self):
        return f"LambdaPoly({self.to_json()!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            v = str(self.terms[k])
            lam = "" if k == 0 else "λ" if k == 1 else f"λ^{k}"
            parts.append(v if not lam else f"{lam}*({v})" if v != "1" else lam)
        return " + ".join(parts)

    def to_json(self):
        return {str(k): format_rf(self.terms[k]) for k in sorted(self.terms)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            return cls.const(parse_rf(obj))
        return cls({int(k): parse_rf(v) for k, v in obj.items()})


ZERO = LambdaPoly._raw({})
ONE = LambdaPoly._raw({0: RationalFunction.ONE})


def lp(x):
    """Coerce a scalar, rational function, expression text or LambdaPoly."""
    if isinstance(x, LambdaPoly):
        return x
    return LambdaPoly.const(as_rf(x))


class LambdaMatrix:
    __slots__ = ("n", "entries")

    def __init__(self, rows):
        rows = [[lp(x) for x in row] for row in rows]
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise SizeMismatch("matrix must be square")
        self.n = n
        self.entries = tuple(tuple(row) for row in rows)

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, n, entries):
        """Build from a sparse {(i, j): value} map with 1-based indices over the identity."""
        rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for (i, j), v in entries.items():
            rows[i - 1][j - 1] = lp(v)
        return cls(rows)

    def __getitem__(self, ij):
        """1-based entry access, matching the usual a_ij convention."""
        i, j = ij
        return self.entries[i - 1][j - 1]

    def column(self, j):
        return [self.entries[i][j - 1] for i in range(self.n)]

    def row(self, i):
        return list(self.entries[i - 1])

    def replace(self, updates):
        rows = [list(row) for row in self.entries]
        for (i, j), v in updates.items():
            rows[i - 1][j - 1] = lp(v)
        return LambdaMatrix(rows)

    def map(self, fn):
        return LambdaMatrix([[fn(x) for x in row] for row in self.entries])

    def __add__(self, other):
        _same_size(self, other)
        return LambdaMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        _same_size(self, other)
        return LambdaMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __mul__(self, other):
        if isinstance(other, LambdaMatrix):
            return lmat_mul(self, other)
        return self.map(lambda x: x * other)

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def derivative(self):
        return self.map(LambdaPoly.derivative)

    def is_lambda_free(self):
        return all(x.is_lambda_free() for row in self.entries for x in row)

    def lambda_degrees(self):
        return sorted({k for row in self.entries for x in row for k in x.terms})

    def coefficient(self, k):
        """The lambda^k coefficient matrix as a lambda-free LambdaMatrix."""
        return self.map(lambda x: LambdaPoly.const(x.coeff(k)))

    def to_json(self):
        return {"n": self.n, "entries": [[x.to_json() for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj):
        n = obj["n"]
        rows = [[LambdaPoly.from_json(x) for x in row] for row in obj["entries"]]
        if len(rows) != n:
            raise SizeMismatch(f"expected {n} rows, got {len(rows)}")
        return cls(rows)

    def __repr__(self):
        return f"LambdaMatrix(n={self.n})"

    def pretty(self):
        return "\n".join(" | ".join(str(x) for x in row) for row in self.entries)


def _same_size(x, y):
    if x.n != y.n:
        raise SizeMismatch(f"size {x.n} vs {y.n}")


def lmat_mul(X, Y):
    _same_size(X, Y)
    n = X.n
    cols = [Y.column(j + 1) for j in range(n)]
    rows = []
    for i in range(n):
        row = []
        xi = X.entries[i]
        for j in range(n):
            acc = ZERO
            for a, b in zip(xi, cols[j]):
                if a.terms and b.terms:
                    acc = acc + a * b
            row.append(acc)
        rows.append(row)
    return LambdaMatrix(rows)


def second_transpose(X):
    """(X^TT)_ij = X_{jbar, ibar}, with jbar = n + 1 - j."""
    n = X.n
    return LambdaMatrix([[X.entries[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)])


def bilinear(v, w):
    """(v, w) = sum_j v_j w_{n+1-j}."""
    if len(v) != len(w):
        raise SizeMismatch(f"vector lengths {len(v)} and {len(w)}")
    n = len(v)
    acc = ZERO
    for j in range(n):
        a, b = lp(v[j]), lp(w[n - 1 - j])
        if a.terms and b.terms:
            acc = acc + a * b
    return acc


def check_complex_orthogonal(A):
    """Check (c_i, c_j) = delta_{i, n+1-j} for all column pairs."""
    rep = Report("complex_orthogonal")
    n = A.n
    cols = [A.column(j + 1) for j in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = bilinear(cols[i], cols[j])
            target = ONE if i + j == n - 1 else ZERO
            if value != target:
                residual = value - target
                rep.fail(i=i + 1, j=j + 1, residual=residual.to_json())
    return rep


def is_complex_orthogonal_by_product(A):
    """Independent route: A^TT A equals the identity."""
    return lmat_mul(second_transpose(A), A) == LambdaMatrix.identity(A.n)


def lmat_eval(X, z0, lam0):
    """Exact scalar matrix X(z0)(lam0) as nested lists of GaussianRational."""
    return [[x(z0, lam0) for x in row] for row in X.entries]


def lmat_eval_z(X, z0):
    """Evaluate the z-dependence only; returns {degree: scalar matrix}."""
    degs = X.lambda_degrees()
    n = X.n
    out = {}
    zero = GaussianRational(0)
    for k in degs:
        out[k] = [[X.entries[i][j].terms[k](z0) if k in X.entries[i][j].terms else zero
                   for j in range(n)] for i in range(n)]
    return out


def lambda_substitute(X, mu):
    """X(mu * lambda); mu = 0 keeps the lambda-constant part."""
    return X.map(lambda x: x.substitute(mu))


def gamma_matrix(exponents):
    """diag(lambda^e_1, ..., lambda^e_n)."""
    n = len(exponents)
    return LambdaMatrix(
        [[LambdaPoly.monomial(exponents[i]) if i == j else ZERO for j in range(n)] for i in range(n)]
    )
