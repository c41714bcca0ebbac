"""Extended-solution equation: verification and explicit constructors.

A candidate is a block-unitriangular lambda-polynomial matrix A together with
its canonical element xi. Writing rho_jk for the coefficient of
lambda^(xi_j - xi_k - 1) in a_jk, the equation asks that every column c_k with
xi_k < r satisfies

    c_k' = sum over j with xi_j > xi_k of lambda^(xi_j - xi_k - 1) rho_jk' c_j.

The verifier evaluates this column identity, the equivalent entrywise form,
and the reduced form modulo lambda^(xi_i - xi_k - 1); the three are coded
independently and must agree.

Constructors cover type (1,...,1) for every odd n, uniton number one, type
(1, t, 1), and every canonical type with n <= 6.
"""

from dataclasses import dataclass, field

from .canonical import CanonicalElement, canonical_from_type, check_shape
from .errors import (
    DegenerateData,
    DegenerateDenominator,
    InconsistentBorder,
    NotSkew,
    SchemaError,
    UnknownType,
)
from .exactnum import RationalFunction, as_rf
from .lambdamat import (
    ONE,
    ZERO,
    LambdaMatrix,
    LambdaPoly,
    bilinear,
    check_complex_orthogonal,
    lp,
    second_transpose,
)
from .report import Report

_HALF = RationalFunction.const(1) / 2


@dataclass
class SolutionCandidate:
    A: LambdaMatrix
    xi: CanonicalElement
    params: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "type": list(self.xi.type),
            "params": {k: str(v) for k, v in self.params.items()},
            "matrix": self.A.to_json(),
        }


# -- verifier ---------------------------------------------------------------


def _xi_tuple(xi):
    return xi.xi if isinstance(xi, CanonicalElement) else tuple(xi)


def rho_table(A, xi):
    """rho[(j, k)] = coefficient of lambda^(xi_j - xi_k - 1) in a_jk, for xi_j > xi_k."""
    x = _xi_tuple(xi)
    n = len(x)
    return {
        (j, k): A[j, k].coeff(x[j - 1] - x[k - 1] - 1)
        for j in range(1, n + 1)
        for k in range(1, n + 1)
        if x[j - 1] > x[k - 1]
    }


def _rho_prime(A, x):
    return {jk: v.derivative() for jk, v in rho_table(A, x).items()}


def _mode_columns(A, x, drho, dA):
    failures = []
    n = len(x)
    r = max(x)
    for k in range(1, n + 1):
        if x[k - 1] >= r:
            continue
        rhs = [ZERO] * n
        for j in range(1, n + 1):
            if x[j - 1] > x[k - 1]:
                coeff = drho[(j, k)]
                if coeff.is_zero():
                    continue
                shift = x[j - 1] - x[k - 1] - 1
                for i in range(n):
                    a = A.entries[i][j - 1]
                    if a.terms:
                        rhs[i] = rhs[i] + (a * coeff).shift(shift)
        for i in range(n):
            if dA.entries[i][k - 1] != rhs[i]:
                residual = dA.entries[i][k - 1] - rhs[i]
                failures.append({"column": k, "row": i + 1, "residual": residual.to_json()})
    return failures


def _mode_rows(A, x, drho, dA):
    failures = []
    n = len(x)
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            if not x[i - 1] > x[k - 1]:
                continue
            rhs = ZERO
            for j in range(1, n + 1):
                if x[i - 1] >= x[j - 1] > x[k - 1]:
                    a = A[i, j]
                    coeff = drho[(j, k)]
                    if a.terms and not coeff.is_zero():
                        rhs = rhs + (a * coeff).shift(x[j - 1] - x[k - 1] - 1)
            if dA[i, k] != rhs:
                failures.append({"row": i, "column": k, "residual": (dA[i, k] - rhs).to_json()})
    return failures


def _mode_reduced(A, x, drho, dA):
    failures = []
    n = len(x)
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            gap = x[i - 1] - x[k - 1]
            if gap < 2:
                continue
            rhs = ZERO
            for j in range(1, n + 1):
                if x[i - 1] > x[j - 1] > x[k - 1]:
                    a = A[i, j]
                    coeff = drho[(j, k)]
                    if a.terms and not coeff.is_zero():
                        rhs = rhs + (a * coeff).shift(x[j - 1] - x[k - 1] - 1)
            residual = (dA[i, k] - rhs).truncate_below(gap - 1)
            if not residual.is_zero():
                failures.append({"row": i, "column": k, "modulus": gap - 1,
                                 "residual": residual.to_json()})
    return failures


def extended_solution_modes(A, xi):
    """Run the three formulations separately; returns {mode: failures}."""
    x = _xi_tuple(xi)
    drho = _rho_prime(A, x)
    dA = A.derivative()
    return {
        "columns": _mode_columns(A, x, drho, dA),
        "rows": _mode_rows(A, x, drho, dA),
        "reduced": _mode_reduced(A, x, drho, dA),
    }


def check_extended_solution(cand, xi=None):
    """Verify the extended-solution equation; accepts a candidate or (A, xi)."""
    A, xi = (cand.A, cand.xi) if xi is None else (cand, xi)
    modes = extended_solution_modes(A, xi)
    rep = Report("extended_solution")
    verdicts = {name: not fails for name, fails in modes.items()}
    rep.details["verdicts"] = verdicts
    for f in modes["columns"]:
        rep.fail(**f)
    if len(set(verdicts.values())) > 1:
        rep.fail(reason="verifier modes disagree", verdicts=verdicts)
    rep.details["modes_agree"] = len(set(verdicts.values())) == 1
    if not verdicts["columns"]:
        rep.details["row_failures"] = modes["rows"]
        rep.details["reduced_failures"] = modes["reduced"]
    return rep


def verify_candidate(cand, real=True):
    """Shape, orthogonality and the extended-solution equation, in that order."""
    shape = check_shape(cand.A, cand.xi, real=real)
    ortho = check_complex_orthogonal(cand.A)
    ext = check_extended_solution(cand)
    return [shape, ortho, ext]


# -- border conditions ------------------------------------------------------


def _interior_xi(x):
    inner = x[1:-1]
    low = min(inner) if inner else 0
    return tuple(v - low for v in inner)


def _interior(A):
    n = A.n
    return LambdaMatrix([[A[i, j] for j in range(2, n)] for i in range(2, n)])


def check_border_equivalence(cand):
    """Compare the full equation with the top-row and last-column border conditions."""
    A, xi = cand.A, cand.xi
    x = xi.xi
    n, r = xi.n, xi.r
    rep = Report("border_equivalence")
    if n >= 3:
        inner = extended_solution_modes(_interior(A), _interior_xi(x))["columns"]
        rep.details["interior_ok"] = not inner
    drho = _rho_prime(A, x)
    dA = A.derivative()
    full = not _mode_columns(A, x, drho, dA)

    row_fail = []
    for j in range(xi.T(r) + 1, n):
        modulus = r - x[j - 1] - 1
        if modulus <= 0:
            continue
        rhs = ZERO
        for i in range(1, n + 1):
            if x[i - 1] > x[j - 1]:
                coeff = drho[(i, j)]
                if not coeff.is_zero() and A[1, i].terms:
                    rhs = rhs + (A[1, i] * coeff).shift(x[i - 1] - x[j - 1] - 1)
        if not (dA[1, j] - rhs).truncate_below(modulus).is_zero():
            row_fail.append(j)

    col_fail = []
    for i in range(2, xi.T(1) + 1):
        modulus = x[i - 1] - 1
        if modulus <= 0:
            continue
        rhs = ZERO
        for j in range(1, n + 1):
            if x[i - 1] >= x[j - 1] > 0:
                coeff = drho[(j, n)]
                if not coeff.is_zero() and A[i, j].terms:
                    rhs = rhs + (A[i, j] * coeff).shift(x[j - 1] - 1)
        if not (dA[i, n] - rhs).truncate_below(modulus).is_zero():
            col_fail.append(i)

    verdicts = {"full": full, "top_row": not row_fail, "last_column": not col_fail}
    rep.details["verdicts"] = verdicts
    rep.details["failing_top_row_columns"] = row_fail
    rep.details["failing_last_column_rows"] = col_fail
    if not all(verdicts.values()):
        rep.fail(reason="border conditions fail", verdicts=verdicts)
    rep.details["agree"] = len(set(verdicts.values())) == 1
    return rep


# -- derivatives and algebraic completion ----------------------------------


def generalized_derivative(nu, e):
    """nu' / e."""
    nu, e = as_rf(nu), as_rf(e)
    if e.is_zero():
        raise DegenerateDenominator("generalized derivative with identically zero denominator")
    return nu.derivative() / e


def derivs_wrt(nu, g, order):
    """[nu, nu^(1), ..., nu^(order)], each a derivative with respect to g."""
    dg = as_rf(g).derivative()
    out = [as_rf(nu)]
    for _ in range(order):
        out.append(generalized_derivative(out[-1], dg))
    return out


def complete_by_algebra(partial, given="row"):
    """Fill the border of ``partial`` from its interior and one known border side.

    ``given="row"`` reads a_12..a_1,n-1 and solves for the last column;
    ``given="column"`` reads a_2n..a_n-1,n and computes the top row. The corner
    a_1n follows from the last column being isotropic.
    """
    n = partial.n
    rows = [list(row) for row in partial.entries]
    a = lambda i, j: rows[i - 1][j - 1]  # noqa: E731
    for i in range(2, n):
        if a(i, i) != ONE or any(not a(j, i).is_zero() for j in range(i + 1, n)):
            raise InconsistentBorder("interior block must be unitriangular")
    if given == "row":
        for i in range(2, n):
            # (c_i, c_n) = a_1i + sum_{j=2}^{n-1} a_ji a_{n+1-j, n}; unknown is a_{n+1-i, n}
            acc = a(1, i)
            for j in range(2, i):
                acc = acc + a(j, i) * a(n + 1 - j, n)
            rows[n - i][n - 1] = -acc
    elif given == "column":
        for i in range(2, n):
            acc = ZERO
            for j in range(2, n):
                acc = acc + a(j, i) * a(n + 1 - j, n)
            rows[0][i - 1] = -acc
    else:
        raise ValueError("given must be 'row' or 'column'")
    col = [a(j, n) for j in range(2, n)]
    rows[0][n - 1] = -(bilinear(col, col) * _HALF)
    rows[0][0] = ONE
    rows[n - 1][n - 1] = ONE
    for i in range(2, n + 1):
        rows[i - 1][0] = ZERO
    for j in range(1, n):
        rows[n - 1][j - 1] = ZERO
    return LambdaMatrix(rows)


def _with_border(interior, top=None, last=None):
    """Embed an (n-2)x(n-2) interior with an identity border and optional border data."""
    m = interior.n
    n = m + 2
    rows = [[ZERO] * n for _ in range(n)]
    rows[0][0] = ONE
    rows[n - 1][n - 1] = ONE
    for i in range(m):
        for j in range(m):
            rows[i + 1][j + 1] = interior.entries[i][j]
    for j, v in (top or {}).items():
        rows[0][j - 1] = lp(v)
    for i, v in (last or {}).items():
        rows[i - 1][n - 1] = lp(v)
    return LambdaMatrix(rows)


# -- constructors -----------------------------------------------------------


def _nonconstant(f, what, index=None):
    if as_rf(f).derivative().is_zero():
        raise DegenerateData(f"{what} must be non-constant", index=index)


def build_type_ones(mu, strict=False):
    """Type (1,...,1) with n = 2m + 1 from free functions mu_1..mu_m.

    Non-constancy of mu_i^(2i-2) is required for i < m, which is what the
    recursion needs; ``strict`` also demands it for i = m, making every
    superdiagonal entry non-constant.
    """
    mu = [as_rf(f) for f in mu]
    m = len(mu)
    A = LambdaMatrix.identity(1)
    for i in range(1, m + 1):
        size = 2 * i + 1
        interior = A
        # top row: a_1j = mu_i^(2i - j), j = 2..2i; each derivative divides by rho'_{j, j+1}
        top = {size - 1: mu[i - 1]}
        current = mu[i - 1]
        for j in range(size - 2, 1, -1):
            denom = interior[j - 1, j].coeff(0).derivative()
            if denom.is_zero():
                raise DegenerateData(f"degenerate data for mu_{i}", index=i)
            current = current.derivative() / denom
            top[j] = current
        A = complete_by_algebra(_with_border(interior, top=top), given="row")
        if i <= m - 1 or strict:
            _nonconstant(A[1, 2].coeff(0), f"mu_{i}^({2 * i - 2})", index=i)
    xi = canonical_from_type([1] * (2 * m + 1))
    return SolutionCandidate(A, xi, {f"mu{i + 1}": f for i, f in enumerate(mu)})


def read_type_ones(A):
    """Inverse of build_type_ones: mu_i = a_{m-i+1, m+i}."""
    m = (A.n - 1) // 2
    return [A[m - i + 1, m + i].coeff(0) for i in range(1, m + 1)]


def build_r1(B):
    """Type (m, m): A = [[I, B], [0, I]] with B^TT = -B."""
    B = B if isinstance(B, LambdaMatrix) else LambdaMatrix(B)
    if not B.is_lambda_free():
        raise NotSkew("B must be lambda-free")
    if second_transpose(B) != B.map(lambda x: -x):
        raise NotSkew("B must satisfy B^TT = -B")
    m = B.n
    n = 2 * m
    rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for i in range(m):
        for j in range(m):
            rows[i][m + j] = B.entries[i][j]
    return SolutionCandidate(LambdaMatrix(rows), canonical_from_type([m, m]))


def build_1t1(n, nu):
    """Type (1, n-2, 1) from the top row (1, nu_1, ..., nu_{n-2}, *)."""
    if n < 3:
        raise UnknownType("type (1, t, 1) needs n >= 3")
    nu = [as_rf(f) for f in nu]
    if len(nu) != n - 2:
        raise SchemaError(f"expected {n - 2} functions, got {len(nu)}")
    top = {j + 2: f for j, f in enumerate(nu)}
    A = complete_by_algebra(_with_border(LambdaMatrix.identity(n - 2), top=top), given="row")
    return SolutionCandidate(A, canonical_from_type([1, n - 2, 1]),
                             {f"nu{k + 1}": f for k, f in enumerate(nu)})


def _type_121(g1, g2):
    return build_1t1(4, [-g1, -g2]).A


def _build_111(p):
    cand = build_type_ones([-p["g"]])
    return cand.A


def _build_22(p):
    g = p["g"]
    return build_r1([[-g, 0], [0, g]]).A


def _build_121(p):
    return _type_121(p["g1"], p["g2"])


def _build_212(p):
    g, nu, sigma = p["g"], p["nu"], p["sigma"]
    _nonconstant(g, "g")
    nu1 = derivs_wrt(nu, g, 1)[1]
    interior = build_type_ones([g]).A
    top = {3: -nu1, 4: LambdaPoly({0: nu, 1: sigma})}
    return complete_by_algebra(_with_border(interior, top=top), given="row")


def _build_131(p):
    return build_1t1(5, [p["nu1"], p["nu2"], p["nu3"]]).A


def _build_11111(p):
    g, nu1, nu2, nu3 = p["g"], p["nu1"], p["nu2"], p["nu3"]
    _nonconstant(g, "g")
    d1 = derivs_wrt(nu1, g, 2)
    d2 = derivs_wrt(nu2, g, 1)
    interior = build_type_ones([-g]).A
    top = {
        2: -d1[2],
        3: LambdaPoly({0: d1[1], 1: d2[1]}),
        4: LambdaPoly({0: nu1, 1: nu2, 2: nu3}),
    }
    return complete_by_algebra(_with_border(interior, top=top), given="row")


def _build_141(p):
    return build_1t1(6, [p["nu1"], p["nu2"], p["nu3"], p["nu4"]]).A


def _build_33(p):
    g, h, k = p["g"], p["h"], p["k"]
    return build_r1([[-h, -k, 0], [-g, 0, k], [0, g, h]]).A


def _build_222(p):
    g1, g2, nu1, nu2, nu3 = p["g1"], p["g2"], p["nu1"], p["nu2"], p["nu3"]
    _nonconstant(g1, "g1")
    a14 = (nu2.derivative() - g2.derivative() * nu1) / g1.derivative()
    top = {3: nu1, 4: a14, 5: LambdaPoly({0: nu2, 1: nu3})}
    return complete_by_algebra(_with_border(_type_121(g1, g2), top=top), given="row")


def _build_1221(p):
    g, nu1, nu2, nu3, nu4 = p["g"], p["nu1"], p["nu2"], p["nu3"], p["nu4"]
    _nonconstant(g, "g")
    d1 = derivs_wrt(nu1, g, 1)[1]
    d2 = derivs_wrt(nu2, g, 1)[1]
    interior = build_r1([[g, 0], [0, -g]]).A
    top = {2: d1, 3: d2, 4: LambdaPoly({0: nu1, 1: nu3}), 5: LambdaPoly({0: -nu2, 1: nu4})}
    return complete_by_algebra(_with_border(interior, top=top), given="row")


def _build_11211(p):
    g1, h1, h2 = p["g1"], p["h1"], p["h2"]
    _nonconstant(g1, "g1")
    dh1 = derivs_wrt(h1, g1, 2)
    _nonconstant(dh1[1], "h1^(1)")
    dh2 = derivs_wrt(h2, g1, 2)
    g2 = dh2[2] / dh1[2]
    last = {2: h2 - g1 * dh2[1], 3: dh2[1], 4: -h1 + g1 * dh1[1], 5: dh1[1]}
    return complete_by_algebra(_with_border(_type_121(g1, g2), last=last), given="column")


# name -> (required params, optional params defaulting to 0, builder)
SCHEMAS = {
    (1, 1, 1): (("g",), (), _build_111),
    (2, 2): (("g",), (), _build_22),
    (1, 2, 1): (("g1", "g2"), (), _build_121),
    (2, 1, 2): (("g", "nu"), ("sigma",), _build_212),
    (1, 3, 1): (("nu1", "nu2", "nu3"), (), _build_131),
    (1, 1, 1, 1, 1): (("g", "nu1"), ("nu2", "nu3"), _build_11111),
    (1, 4, 1): (("nu1", "nu2", "nu3", "nu4"), (), _build_141),
    (3, 3): (("g", "h", "k"), (), _build_33),
    (2, 2, 2): (("g1", "g2", "nu1", "nu2"), ("nu3",), _build_222),
    (1, 2, 2, 1): (("g", "nu1", "nu2"), ("nu3", "nu4"), _build_1221),
    (1, 1, 2, 1, 1): (("g1", "h1", "h2"), (), _build_11211),
}


def schema_for(t):
    """(required, optional) parameter names accepted for a type."""
    t = tuple(t)
    if t in SCHEMAS:
        req, opt, _ = SCHEMAS[t]
        return req, opt
    if len(t) == 1:
        return (), ()
    if all(x == 1 for x in t) and len(t) % 2 == 1:
        return tuple(f"mu{i}" for i in range(1, (len(t) - 1) // 2 + 1)), ()
    raise UnknownType(f"no constructor for type {t}")


def _normalize_params(t, params, required, optional):
    params = {k: as_rf(v) for k, v in params.items()}
    missing = [k for k in required if k not in params]
    extra = [k for k in params if k not in required and k not in optional]
    if missing or extra:
        raise SchemaError(f"type {t}: missing {missing}, unexpected {extra}; "
                          f"expects {list(required)} plus optional {list(optional)}")
    for k in optional:
        params.setdefault(k, RationalFunction.ZERO)
    return params


def build_low_dim(t, params):
    """Dispatch to the explicit constructor for type t."""
    t = tuple(int(x) for x in t)
    xi = canonical_from_type(t)
    if len(t) == 1:
        if params:
            raise SchemaError("trivial types take no parameters")
        return SolutionCandidate(LambdaMatrix.identity(xi.n), xi, {})
    ones = all(x == 1 for x in t)
    if ones and params and all(k.startswith("mu") for k in params):
        req = tuple(f"mu{i}" for i in range(1, (len(t) - 1) // 2 + 1))
        p = _normalize_params(t, params, req, ())
        return build_type_ones([p[k] for k in req])
    if t in SCHEMAS:
        req, opt, builder = SCHEMAS[t]
        p = _normalize_params(t, params, req, opt)
        return SolutionCandidate(builder(p), xi, p)
    if ones:
        req, _ = schema_for(t)
        p = _normalize_params(t, params, req, ())
        return build_type_ones([p[k] for k in req])
    raise UnknownType(f"no constructor for type {t} (n = {xi.n})")


build = build_low_dim


# -- predicates -------------------------------------------------------------


def is_s1_invariant(A):
    return A.is_lambda_free()


def is_symmetric_type(A):
    return all(k % 2 == 0 for k in A.lambda_degrees())


# -- literal fixtures for degenerate data ----------------------------------


def degenerate_fixture_single(mu3):
    """7x7 type (1,...,1) identity with a_12 = mu_3 and a_67 = -mu_3."""
    mu3 = as_rf(mu3)
    A = LambdaMatrix.from_entries(7, {(1, 2): mu3, (6, 7): -mu3})
    return SolutionCandidate(A, canonical_from_type([1] * 7), {"mu3": mu3})


def degenerate_fixture_pair(mu2, mu3):
    """7x7 type (1,...,1) fixture driven by mu_2 and mu_3 with mu_3^(1) = mu_3'/mu_2'."""
    mu2, mu3 = as_rf(mu2), as_rf(mu3)
    d3 = generalized_derivative(mu3, mu2.derivative())
    A = LambdaMatrix.from_entries(7, {
        (1, 2): d3, (1, 3): mu3, (2, 3): mu2,
        (5, 6): -mu2, (5, 7): mu2 * d3 - mu3, (6, 7): -d3,
    })
    return SolutionCandidate(A, canonical_from_type([1] * 7), {"mu2": mu2, "mu3": mu3})
