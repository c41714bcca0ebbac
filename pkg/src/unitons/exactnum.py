"""Exact arithmetic over the Gaussian rationals Q(i).

Three layers live here:

* ``GaussianRational``: an element of Q(i) with arbitrary-precision parts.
* ``Polynomial``: a univariate polynomial in ``z`` over Q(i), stored as a pair
  of rational polynomials (real part, imaginary part).
* ``RationalFunction``: a reduced quotient of polynomials with monic
  denominator, so that structural equality is mathematical equality.

Rational polynomial kernels come from FLINT. A gcd over Q(i) is first bounded
by the rational gcd of the two norms p*conj(p), which is almost always 1 for
generic data; only the remaining small factor goes through a Euclidean
remainder sequence over Q(i).

The module also carries a recursive-descent parser for the textual
expression grammar and the matching formatter.
"""

from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpq_poly

from .errors import DivisionByZero, ExprSyntaxError, PoleAtPoint

_Q0 = fmpq(0)
_Q1 = fmpq(1)


def _to_q(x):
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, (Fraction, Rational)):
        return fmpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        f = Fraction(x)
        return fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {x!r} to a rational")


class GaussianRational:
    """An exact element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_q(re)
        self.im = _to_q(im)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (complex, float)):
            raise TypeError("floating point numbers are not exact")
        return cls(x)

    @classmethod
    def _raw(cls, re, im):
        obj = cls.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @property
    def pair(self):
        return (self.re, self.im)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise DivisionByZero("division by zero in Q(i)")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = GaussianRational._raw(_Q1, _Q0)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def conj(self):
        return GaussianRational._raw(self.re, -self.im)

    def abs2(self):
        """|x|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({_fmt_q(self.re)!r}, {_fmt_q(self.im)!r})"

    def __str__(self):
        return _fmt_coeff(self.re, self.im)


I = GaussianRational(0, 1)


def field_arith(a, b, op):
    """Apply one of add/sub/mul/div/conj; ``conj`` ignores ``b``."""
    a = GaussianRational.coerce(a)
    if op == "conj":
        return a.conj()
    b = GaussianRational.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# -- kernels on (re, im) pairs of fmpq_poly ---------------------------------

_P0 = fmpq_poly([])
_P1 = fmpq_poly([1])


def _cmul(a, b):
    a1, a2 = a
    b1, b2 = b
    if not a2 and not b2:
        return (a1 * b1, _P0)
    if not a2:
        return (a1 * b1, a1 * b2)
    if not b2:
        return (a1 * b1, a2 * b1)
    return (a1 * b1 - a2 * b2, a1 * b2 + a2 * b1)


def _cscale(a, c):
    cr, ci = c
    a1, a2 = a
    if not ci:
        return (a1 * cr, a2 * cr)
    return (a1 * cr - a2 * ci, a1 * ci + a2 * cr)


def _clead(a):
    a1, a2 = a
    d = max(a1.degree(), a2.degree())
    return (a1[d], a2[d])


def _cdeg(a):
    return max(a[0].degree(), a[1].degree())


def _czero(a):
    return not a[0] and not a[1]


def _qinv(c):
    r, i = c
    n = r * r + i * i
    return (r / n, -i / n)


def _cmonic(a):
    lead = _clead(a)
    if lead == (_Q1, _Q0):
        return a
    return _cscale(a, _qinv(lead))


def _cnorm(a):
    a1, a2 = a
    return a1 * a1 + a2 * a2 if a2 else a1 * a1


def _cdiv_exact(a, d):
    """a / d for a divisor d known to divide a."""
    d1, d2 = d
    if not d2:
        return (a[0] // d1, a[1] // d1)
    a1, a2 = a
    n = d1 * d1 + d2 * d2
    return ((a1 * d1 + a2 * d2) // n, (a2 * d1 - a1 * d2) // n)


def _cmod(a, d):
    """Remainder of a modulo nonzero d.

    For complex d, the quotient of a*conj(d) by the rational norm d*conj(d)
    is exactly the Euclidean quotient of a by d.
    """
    d1, d2 = d
    if not d2:
        return (a[0] % d1, a[1] % d1)
    a1, a2 = a
    n = d1 * d1 + d2 * d2
    q = ((a1 * d1 + a2 * d2) // n, (a2 * d1 - a1 * d2) // n)
    qd = _cmul(q, d)
    return (a1 - qd[0], a2 - qd[1])


def _cdivmod(a, d):
    d1, d2 = d
    if not d2:
        return (a[0] // d1, a[1] // d1), (a[0] % d1, a[1] % d1)
    a1, a2 = a
    n = d1 * d1 + d2 * d2
    q = ((a1 * d1 + a2 * d2) // n, (a2 * d1 - a1 * d2) // n)
    qd = _cmul(q, d)
    return q, (a1 - qd[0], a2 - qd[1])


def _euclid(a, b):
    while not _czero(b):
        a, b = b, _cmod(a, b)
        if not _czero(b):
            b = _cmonic(b)
    return _cmonic(a)


_C1 = (_P1, _P0)


def _cshift(q, c):
    """q(z + c) for a complex pair q and a Gaussian constant c = (re, im)."""
    out = (_P0, _P0)
    lin = (fmpq_poly([c[0], 1]), fmpq_poly([c[1]]))
    for k in range(_cdeg(q), -1, -1):
        out = _cmul(out, lin)
        out = (out[0] + q[0][k], out[1] + q[1][k])
    return out


_SPLIT = {}


def _gaussian_factors(q):
    """Monic irreducible factors over Q(i) of a rational irreducible q.

    Shifting by k*i until the norm of q(z + k i) is squarefree reduces the
    question to factoring that norm over Q; each rational factor then meets
    q(z + k i) in exactly one Gaussian factor.
    """
    key = str(q)
    if key in _SPLIT:
        return _SPLIT[key]
    qc = _cmonic((q, _P0))
    k = 0
    while True:
        k += 1
        shifted = _cshift(qc, (_Q0, fmpq(k)))
        norm = _cnorm(shifted)
        if norm.gcd(norm.derivative()).degree() > 0:
            continue
        facs = norm.factor()[1]
        if len(facs) == 1:
            out = [qc]
        else:
            out = [_cshift(_euclid(shifted, (f, _P0)), (_Q0, fmpq(-k))) for f, _ in facs]
        break
    _SPLIT[key] = out
    return out


def _cgcd(a, b):
    """Monic gcd over Q(i); gcd(0, 0) = 0."""
    if _czero(a):
        return _cmonic(b) if not _czero(b) else (_P0, _P0)
    if _czero(b):
        return _cmonic(a)
    if not a[1] and not b[1]:
        return (a[0].gcd(b[0]), _P0)
    if _cdeg(a) < _cdeg(b):
        a, b = b, a
    a = _cmod(a, b)
    if _czero(a):
        return _cmonic(b)
    g = _cnorm(a).gcd(_cnorm(b))
    if g.degree() <= 0:
        return _C1
    # Every common factor divides the gcd of the norms. Its rational
    # irreducible factors split over Q(i) independently of a and b, so only
    # divisibility tests against small factors touch the large inputs.
    d = _C1
    for q, e in g.factor()[1]:
        qc = (q, _P0)
        for p in _gaussian_factors(q):
            ar, br = a, b
            for k in range(e):
                if not _czero(_cmod(_cmod(ar, qc), p)) or not _czero(_cmod(_cmod(br, qc), p)):
                    break
                d = _cmul(d, p)
                if k + 1 < e:
                    ar, br = _cdiv_exact(ar, p), _cdiv_exact(br, p)
    return d


def _cderiv(a):
    return (a[0].derivative(), a[1].derivative())


def _qpoly_eval(p, z0):
    x, y = z0
    if not y:
        return (p(x), _Q0)
    if p.degree() <= 0:
        return (p[0], _Q0)
    r = p % fmpq_poly([x * x + y * y, -2 * x, 1])
    c0, c1 = r[0], r[1]
    return (c0 + c1 * x, c1 * y)


def _ceval(a, z0):
    r1, i1 = _qpoly_eval(a[0], z0)
    if not a[1]:
        return (r1, i1)
    r2, i2 = _qpoly_eval(a[1], z0)
    return (r1 - i2, i1 + r2)


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cneg(a):
    return (-a[0], -a[1])


def _ccoeffs(a):
    """List of (re, im) fmpq pairs, lowest degree first."""
    d = _cdeg(a)
    return [(a[0][k], a[1][k]) for k in range(d + 1)]


def _chash(a):
    return hash((str(a[0]), str(a[1])))


class Polynomial:
    """Univariate polynomial in z over Q(i); coefficients lowest degree first."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        re, im = [], []
        for c in coeffs:
            g = GaussianRational.coerce(c)
            re.append(g.re)
            im.append(g.im)
        self._c = (fmpq_poly(re), fmpq_poly(im))

    @classmethod
    def _raw(cls, c):
        obj = cls.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def monomial(cls, k, c=1):
        g = GaussianRational.coerce(c)
        return cls([0] * k + [g])

    @property
    def coeffs(self):
        return [GaussianRational._raw(r, i) for r, i in _ccoeffs(self._c)]

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return _cdeg(self._c)

    def is_zero(self):
        return _czero(self._c)

    def is_constant(self):
        return self.degree <= 0

    def leading(self):
        return GaussianRational._raw(*_clead(self._c)) if not self.is_zero() else GaussianRational(0)

    def __add__(self, other):
        return Polynomial._raw(_cadd(self._c, other._c))

    def __sub__(self, other):
        return Polynomial._raw(_csub(self._c, other._c))

    def __mul__(self, other):
        return Polynomial._raw(_cmul(self._c, other._c))

    def __neg__(self):
        return Polynomial._raw(_cneg(self._c))

    def scale(self, c):
        g = GaussianRational.coerce(c)
        return Polynomial._raw(_cscale(self._c, g.pair))

    def divmod(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q, r = _cdivmod(self._c, other._c)
        return Polynomial._raw(q), Polynomial._raw(r)

    def gcd(self, other):
        return Polynomial._raw(_cgcd(self._c, other._c))

    def monic(self):
        return self if self.is_zero() else Polynomial._raw(_cmonic(self._c))

    def derivative(self):
        return Polynomial._raw(_cderiv(self._c))

    def conj_coeffs(self):
        """The polynomial with every coefficient conjugated."""
        return Polynomial._raw((self._c[0], -self._c[1]))

    def __call__(self, z0):
        g = GaussianRational.coerce(z0)
        return GaussianRational._raw(*_ceval(self._c, g.pair))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._c[0] == other._c[0] and self._c[1] == other._c[1]

    def __hash__(self):
        return _chash(self._c)

    def __repr__(self):
        return f"Polynomial({_fmt_poly(self._c)!r})"

    def __str__(self):
        return _fmt_poly(self._c)


def _coerce_rf(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction._raw(x._c, _C1)
    if isinstance(x, (GaussianRational, int, Fraction, Rational, fmpq)):
        g = GaussianRational.coerce(x)
        return RationalFunction._raw((fmpq_poly([g.re]), fmpq_poly([g.im])), _C1)
    raise TypeError(f"cannot use {x!r} as a rational function")


def _is_one(d):
    return not d[1] and d[0].is_one()


class RationalFunction:
    """A reduced quotient num/den of polynomials in z, den monic."""

    __slots__ = ("_n", "_d")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        if den is None:
            d = _C1
        else:
            den = den if isinstance(den, Polynomial) else Polynomial(den)
            d = den._c
        self._n, self._d = _reduce(num._c, d)

    @classmethod
    def _raw(cls, n, d):
        obj = cls.__new__(cls)
        obj._n = n
        obj._d = d
        return obj

    @classmethod
    def const(cls, c):
        return _coerce_rf(c)

    @classmethod
    def z(cls):
        return cls._raw((fmpq_poly([0, 1]), _P0), _C1)

    @property
    def num(self):
        return Polynomial._raw(self._n)

    @property
    def den(self):
        return Polynomial._raw(self._d)

    def is_zero(self):
        return _czero(self._n)

    def is_polynomial(self):
        return _is_one(self._d)

    def is_constant(self):
        return _is_one(self._d) and _cdeg(self._n) <= 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return GaussianRational._raw(self._n[0][0], self._n[1][0])

    def degree(self):
        """max(deg num, deg den); the zero function has degree 0."""
        return max(_cdeg(self._n), _cdeg(self._d), 0)

    def __add__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        a, b, c, d = self._n, self._d, o._n, o._d
        if _is_one(b) and _is_one(d):
            return RationalFunction._raw(_cadd(a, c), _C1)
        if _is_one(b):
            return RationalFunction._raw(_cadd(_cmul(a, d), c), d)
        if _is_one(d):
            return RationalFunction._raw(_cadd(a, _cmul(c, b)), b)
        if b == d:
            return RationalFunction._raw(*_reduce(_cadd(a, c), b))
        g = _cgcd(b, d)
        if _cdeg(g) <= 0:
            # coprime denominators: the sum is already reduced
            return RationalFunction._raw(_cadd(_cmul(a, d), _cmul(c, b)), _cmul(b, d))
        bg, dg = _cdiv_exact(b, g), _cdiv_exact(d, g)
        n = _cadd(_cmul(a, dg), _cmul(c, bg))
        return RationalFunction._raw(*_reduce(n, _cmul(b, dg)))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(_cneg(self._n), self._d)

    def __sub__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return _RF_ZERO
        a, b, c, d = self._n, self._d, o._n, o._d
        if _is_one(b) and _is_one(d):
            return RationalFunction._raw(_cmul(a, c), _C1)
        if not _is_one(d):
            g = _cgcd(a, d)
            if _cdeg(g) > 0:
                a, d = _cdiv_exact(a, g), _cdiv_exact(d, g)
        if not _is_one(b):
            g = _cgcd(c, b)
            if _cdeg(g) > 0:
                c, b = _cdiv_exact(c, g), _cdiv_exact(b, g)
        return RationalFunction._raw(_cmul(a, c), _cmul(b, d))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("division by the zero rational function")
        inv = _qinv(_clead(self._n))
        return RationalFunction._raw(_cscale(self._d, inv), _cscale(self._n, inv))

    def __truediv__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = _RF_ONE
        for _ in range(abs(k)):
            result = result * base
        return result

    def derivative(self):
        a, b = self._n, self._d
        if _is_one(b):
            return RationalFunction._raw(_cderiv(a), _C1)
        # With g = gcd(b, b'), (a/b)' = (a' (b/g) - a (b'/g)) / (b (b/g)). A pole of
        # order k becomes one of order k + 1, so this quotient is already reduced.
        db = _cderiv(b)
        g = _cgcd(b, db)
        if _cdeg(g) > 0:
            e, h = _cdiv_exact(b, g), _cdiv_exact(db, g)
        else:
            e, h = b, db
        return RationalFunction._raw(_csub(_cmul(_cderiv(a), e), _cmul(a, h)), _cmul(b, e))

    def __call__(self, z0):
        g = GaussianRational.coerce(z0)
        x = g.pair
        dr, di = _ceval(self._d, x)
        if not dr and not di:
            raise PoleAtPoint(f"pole of {self} at z = {g}")
        nr, ni = _ceval(self._n, x)
        if not di:
            return GaussianRational._raw(nr / dr, ni / dr)
        n = dr * dr + di * di
        return GaussianRational._raw((nr * dr + ni * di) / n, (ni * dr - nr * di) / n)

    def compose(self, inner):
        """f(inner(z)) by Horner evaluation in the field of rational functions."""
        inner = _coerce_rf(inner)

        def horner(c):
            acc = _RF_ZERO
            for r, i in reversed(_ccoeffs(c)):
                acc = acc * inner + GaussianRational._raw(r, i)
            return acc

        return horner(self._n) / horner(self._d)

    def compose_scale(self, c):
        """f(c * z)."""
        return self.compose(RationalFunction.z() * c)

    def conj_coeffs(self):
        return RationalFunction._raw((self._n[0], -self._n[1]), (self._d[0], -self._d[1]))

    def __eq__(self, other):
        try:
            o = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return (self._n[0] == o._n[0] and self._n[1] == o._n[1]
                and self._d[0] == o._d[0] and self._d[1] == o._d[1])

    def __hash__(self):
        return hash((_chash(self._n), _chash(self._d)))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"RationalFunction({format_rf(self)!r})"

    def __str__(self):
        if _is_one(self._d):
            return _fmt_poly(self._n)
        return format_rf(self)


def _reduce(n, d):
    if _czero(d):
        raise DivisionByZero("rational function with zero denominator")
    if _czero(n):
        return (_P0, _P0), _C1
    if _cdeg(d) > 0:
        g = _cgcd(n, d)
        if _cdeg(g) > 0:
            n = _cdiv_exact(n, g)
            d = _cdiv_exact(d, g)
    lead = _clead(d)
    if lead != (_Q1, _Q0):
        inv = _qinv(lead)
        n, d = _cscale(n, inv), _cscale(d, inv)
    return n, d


_RF_ZERO = RationalFunction._raw((_P0, _P0), _C1)
_RF_ONE = RationalFunction._raw(_C1, _C1)
RationalFunction.ZERO = _RF_ZERO
RationalFunction.ONE = _RF_ONE


def rf_arith(f, g, op):
    f, g = _coerce_rf(f), _coerce_rf(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def rf_derivative(f):
    return _coerce_rf(f).derivative()


def rf_eval(f, z0):
    return _coerce_rf(f)(z0)


# -- formatting ------------------------------------------------------------


def _fmt_q(q):
    q = _to_q(q)
    if q.q == 1:
        return str(q.p)
    return f"{q.p}/{q.q}"


def _fmt_coeff(r, i):
    if not i:
        return _fmt_q(r)
    if not r:
        return "i" if i == 1 else "-i" if i == -1 else f"{_fmt_q(i)}*i"
    sign = "-" if i < 0 else "+"
    mag = "i" if abs(i) == 1 else f"{_fmt_q(abs(i))}*i"
    return f"({_fmt_q(r)} {sign} {mag})"


def _fmt_power(k):
    return "" if k == 0 else "z" if k == 1 else f"z^{k}"


def _fmt_poly(c):
    coeffs = _ccoeffs(c)
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        r, i = coeffs[k]
        if not r and not i:
            continue
        zk = _fmt_power(k)
        # a purely real or purely imaginary coefficient carries its own sign
        negative = (not i and r < 0) or (not r and i < 0)
        if negative:
            r, i = -r, -i
        if zk and r == 1 and not i:
            body = zk
        elif zk:
            body = f"{_fmt_coeff(r, i)}*{zk}"
        else:
            body = _fmt_coeff(r, i)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


def format_rf(f):
    """Normalized text form ``(<num>)/(<den>)``, terms in descending degree."""
    f = _coerce_rf(f)
    return f"({_fmt_poly(f._n)})/({_fmt_poly(f._d)})"


def format_scalar(x):
    g = GaussianRational.coerce(x)
    return _fmt_coeff(g.re, g.im)


# -- parsing ---------------------------------------------------------------


def _tokenize(text):
    tokens = []
    k = 0
    while k < len(text):
        ch = text[k]
        if ch.isspace():
            k += 1
        elif ch.isdigit():
            start = k
            while k < len(text) and text[k].isdigit():
                k += 1
            tokens.append(("num", int(text[start:k]), start))
        elif ch in "+-*/^()":
            tokens.append((ch, ch, k))
            k += 1
        elif ch in "zi":
            if k + 1 < len(text) and (text[k + 1].isalnum() or text[k + 1] == "_"):
                raise ExprSyntaxError("unknown identifier", text, k)
            tokens.append((ch, ch, k))
            k += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", text, k)
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            expected = "end of input" if kind == "end" else repr(kind)
            raise ExprSyntaxError(f"expected {expected}", self.text, tok[2])
        self.pos += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, at = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZero(f"division by zero at position {at}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise ExprSyntaxError("exponent must be a nonnegative integer", self.text, tok[2])
            self.take()
            return base ** tok[1]
        return base

    def atom(self):
        kind, value, at = self.peek()
        if kind == "num":
            self.take()
            return RationalFunction.const(value)
        if kind == "z":
            self.take()
            return RationalFunction.z()
        if kind == "i":
            self.take()
            return RationalFunction.const(I)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {what}", self.text, at)


def parse_rf(text):
    """Parse an expression in z and i into a RationalFunction."""
    if not isinstance(text, str):
        raise TypeError("expression must be a string")
    p = _Parser(text)
    value = p.expr()
    p.take("end")
    return value


def parse_scalar(text):
    """Parse an expression that must denote a constant of Q(i)."""
    f = parse_rf(text)
    if not f.is_constant():
        raise ExprSyntaxError("expected a constant expression", text, 0)
    return f.constant_value()


def as_rf(x):
    """Accept a RationalFunction, a scalar, or expression text."""
    if isinstance(x, str):
        return parse_rf(x)
    return _coerce_rf(x)
