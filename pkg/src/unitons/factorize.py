"""Uniton factorization of an extended solution at an exact sample point.

Given a candidate A with canonical element xi and a point z0 in Q(i), the
loop-space subspace W = A gamma_xi H+ is stored modulo lambda^(r+1) H+ as a
subspace of the graded space (Q(i)^n)^(r+1). Coordinates are ordered by
(lambda-grade, row), so reduced echelon bases pivot on the lowest grade and
then the lowest row index.

A lambda-filtration W = W_r in ... in W_0 = H+ yields subspaces
alpha_i = P0(Phi_{i-1}^{-1} W_i) of Q(i)^n and the factorization

    Phi = prod_i (pi_i + lambda pi_i^perp)

with Hermitian projections pi_i computed exactly. The null basis is unitary,
so the Hermitian adjoint is the ordinary conjugate transpose; complex
conjugation of matrices is J conj(X) J and the transpose is the second
transpose.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import gaussmat as gm
from .errors import NotInHPlus, NotLambdaStable, NumericBreakdown, PoleAtPoint
from .exactnum import GaussianRational, I
from .lambdamat import lmat_eval_z
from .report import Report

MODES = ("segal", "uhlenbeck", "alternating")
UNIT_LAMBDAS = (GaussianRational(1), GaussianRational(-1), I, -I)

_G0 = GaussianRational(0)


@dataclass(frozen=True)
class TruncatedModel:
    r: int
    n: int
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, r, n, vectors):
        basis, pivots = gm.rref(list(vectors), n * (r + 1))
        return cls(r, n, tuple(tuple(v) for v in basis), tuple(pivots))

    @property
    def size(self):
        return self.n * (self.r + 1)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        return gm.in_span(v, self.basis, self.pivots)

    def contains_model(self, other):
        return gm.spans_contain(self.basis, list(other.basis), self.size)

    def contains_all(self, vectors):
        return gm.spans_contain(self.basis, vectors, self.size)

    def shifted_basis(self):
        return [_shift(v, self.n) for v in self.basis]

    def is_lambda_closed(self):
        return self.contains_all(self.shifted_basis())

    def grade_profile(self):
        """dim of W intersected with lambda^k H+, for k = 0..r."""
        return [sum(1 for p in self.pivots if p >= k * self.n) for k in range(self.r + 1)]

    def to_json(self):
        return {"r": self.r, "n": self.n, "dim": self.dim, "grade_profile": self.grade_profile()}


def _shift(v, n):
    """Multiply by lambda, dropping the top grade."""
    return [_G0] * n + list(v[:-n])


def _grade_block(r, n, k):
    """lambda^k H+ modulo lambda^(r+1): unit vectors in grades k..r."""
    size = n * (r + 1)
    out = []
    for idx in range(k * n, size):
        v = [_G0] * size
        v[idx] = GaussianRational(1)
        out.append(v)
    return out


def _poly_columns(coeffs, n, r, offsets=None):
    """Vectors lambda^s * lambda^offset_j * column_j(lambda), truncated at grade r."""
    size = n * (r + 1)
    offsets = offsets or [0] * n
    gens = []
    for j in range(n):
        for s in range(r + 1 - offsets[j]):
            v = [_G0] * size
            for k, M in coeffs.items():
                g = k + offsets[j] + s
                if g < 0:
                    raise NotInHPlus(f"column {j + 1} has a negative lambda-degree")
                if g > r:
                    continue
                for i in range(n):
                    v[g * n + i] = M[i][j]
            gens.append(v)
    return gens


def grassmannian_model(cand, z0):
    """W = A gamma_xi H+ at z = z0, truncated to grades 0..r."""
    z0 = GaussianRational.coerce(z0)
    xi = cand.xi
    coeffs = lmat_eval_z(cand.A, z0)
    gens = _poly_columns(coeffs, xi.n, xi.r, list(xi.xi))
    return TruncatedModel.span(xi.r, xi.n, gens + _grade_block(xi.r, xi.n, xi.r))


def model_from_phi(coeffs, r, n):
    """Phi H+ truncated to grades 0..r, from the lambda-coefficients of Phi."""
    gens = _poly_columns(dict(enumerate(coeffs)), n, r)
    return TruncatedModel.span(r, n, gens + _grade_block(r, n, r))


@dataclass
class Filtration:
    steps: list          # steps[i] is W_i, so steps[r] = W and steps[0] = H+
    mode: str
    kinds: list = field(default_factory=list)   # kinds[i] names the step W_i -> W_{i-1}

    @property
    def r(self):
        return len(self.steps) - 1

    def to_json(self):
        return {"mode": self.mode, "steps": [s.to_json() for s in self.steps],
                "kinds": self.kinds[1:]}


def segal_step(W, i):
    """W_{i-1} = W_i + lambda^(i-1) H+."""
    return TruncatedModel.span(W.r, W.n, list(W.basis) + _grade_block(W.r, W.n, i - 1))


def uhlenbeck_step(W):
    """W_{i-1} = (lambda^-1 W_i) intersected with H+, i.e. the preimage under the shift."""
    n = W.n
    ann = gm.annihilator(list(W.basis), W.size)
    rows = [list(phi[n:]) + [_G0] * n for phi in ann]
    if not rows:
        return TruncatedModel.span(W.r, n, _grade_block(W.r, n, 0))
    return TruncatedModel.span(W.r, n, gm.nullspace(rows, W.size))


def _step_kind(mode, r, i):
    if mode == "segal":
        return "segal"
    if mode == "uhlenbeck":
        return "uhlenbeck"
    # alternating starts with an Uhlenbeck step on W = W_r
    return "uhlenbeck" if (r - i) % 2 == 0 else "segal"


def filtration(model, mode="alternating"):
    if mode not in MODES:
        raise ValueError(f"unknown filtration mode {mode!r}; expected one of {MODES}")
    r = model.r
    steps = [None] * (r + 1)
    kinds = [None] * (r + 1)
    steps[r] = model
    for i in range(r, 0, -1):
        kind = _step_kind(mode, r, i)
        W = steps[i]
        prev = segal_step(W, i) if kind == "segal" else uhlenbeck_step(W)
        # lambda W_{i-1} in W_i in W_{i-1}
        if not prev.contains_model(W):
            raise NotLambdaStable(f"{kind} step {i}: W_{i} not contained in W_{i - 1}")
        if not W.contains_all(prev.shifted_basis()):
            raise NotLambdaStable(f"{kind} step {i}: lambda W_{i - 1} not contained in W_{i}")
        steps[i - 1] = prev
        kinds[i] = kind
    if steps[0].dim != steps[0].size:
        raise NotLambdaStable("filtration does not end at H+")
    return Filtration(steps, mode, kinds)


def _apply_inverse_factor(laurent, P, top):
    """(pi + lambda^-1 pi_perp) applied to {degree: n x m block}, keeping degrees <= top."""
    out = {}
    for k, V in laurent.items():
        PV = gm.matmul(P, V)
        for d, block in ((k, PV), (k - 1, gm.matsub(V, PV))):
            if d > top or gm.is_zero(block):
                continue
            out[d] = block if d not in out else gm.matadd(out[d], block)
    return out


@dataclass
class UnitonSequence:
    r: int
    n: int
    alphas: list         # rref bases of alpha_1..alpha_r
    projectors: list     # Hermitian projections onto each alpha_i
    mode: str = ""

    def dims(self):
        return [len(a) for a in self.alphas]

    def phi_coeffs(self, upto=None):
        """lambda-coefficients of the partial product Phi_upto (default: all factors)."""
        upto = self.r if upto is None else upto
        coeffs = [gm.identity(self.n)]
        for P in self.projectors[:upto]:
            perp = gm.matsub(gm.identity(self.n), P)
            nxt = [gm.zeros(self.n) for _ in range(len(coeffs) + 1)]
            for k, C in enumerate(coeffs):
                nxt[k] = gm.matadd(nxt[k], gm.matmul(C, P))
                nxt[k + 1] = gm.matadd(nxt[k + 1], gm.matmul(C, perp))
            coeffs = nxt
        return coeffs

    def partial(self, i, lam0):
        return _eval_coeffs(self.phi_coeffs(i), lam0)

    def to_json(self):
        return {"mode": self.mode, "alpha_dims": self.dims()}


def extract_unitons(filt):
    """alpha_i = P0(Phi_{i-1}^-1 W_i) for i = 1..r."""
    r = filt.r
    W = filt.steps[r]
    n = W.n
    alphas, projectors = [], []
    for i in range(1, r + 1):
        basis = filt.steps[i].basis
        # grade k of every basis vector, as the columns of an n x dim block
        laurent = {k: [[w[k * n + row] for w in basis] for row in range(n)] for k in range(r + 1)}
        laurent = {k: V for k, V in laurent.items() if not gm.is_zero(V)}
        for j, P in enumerate(projectors, start=1):
            # degree d after j factors depends on input grades d..d+j
            laurent = _apply_inverse_factor(laurent, P, r - j)
        neg = [k for k in laurent if k < 0]
        if neg:
            raise NotInHPlus(f"Phi_{i - 1}^-1 W_{i} has a lambda^{min(neg)} component")
        images = gm.transpose(laurent[0]) if 0 in laurent else []
        basis, _ = gm.rref(images, n)
        alphas.append(basis)
        projectors.append(gm.projector(basis, n))
    return UnitonSequence(r, n, alphas, projectors, filt.mode)


def _eval_coeffs(coeffs, lam0):
    lam0 = GaussianRational.coerce(lam0)
    n = len(coeffs[0])
    out = gm.zeros(n)
    power = GaussianRational(1)
    for C in coeffs:
        out = gm.matadd(out, gm.scale(C, power))
        power = power * lam0
    return out


def assemble_phi(seq, lam0):
    """Phi(lambda0) = prod (pi_i + lambda0 pi_i^perp)."""
    return _eval_coeffs(seq.phi_coeffs(), lam0)


def factorize(cand, z0, mode="alternating"):
    """Model, filtration and uniton sequence of a candidate at z0."""
    model = grassmannian_model(cand, z0)
    filt = filtration(model, mode)
    return model, filt, extract_unitons(filt)


def reality_report(seq, lambdas=UNIT_LAMBDAS, name="reality"):
    """Phi(1) = I, Phi*Phi = I, Phi^TT Phi = lambda^r I and conj(Phi) = lambda^-r Phi."""
    rep = Report(name)
    r, n = seq.r, seq.n
    one = gm.identity(n)
    coeffs = seq.phi_coeffs()
    verdicts = []
    for lam0 in lambdas:
        lam0 = GaussianRational.coerce(lam0)
        Phi = _eval_coeffs(coeffs, lam0)
        lr = lam0 ** r
        checks = {
            "based": lam0 != 1 or Phi == one,
            "unitary": gm.matmul(gm.adjoint(Phi), Phi) == one,
            "second_transpose": gm.matmul(gm.second_transpose(Phi), Phi) == gm.scale(one, lr),
            "conjugation": gm.flip_conj(Phi) == gm.scale(Phi, lr.inverse()),
        }
        verdicts.append({"lambda": str(lam0), **checks})
        for k, ok in checks.items():
            if not ok:
                rep.fail(check=k, **{"lambda": str(lam0)})
    rep.details.update(r=r, alpha_dims=seq.dims(), lambdas=verdicts)
    return rep


def check_reality(cand, z0, lambdas=UNIT_LAMBDAS, mode="alternating", seq=None):
    if seq is None:
        seq = factorize(cand, z0, mode)[2]
    rep = reality_report(seq, lambdas)
    rep.details["mode"] = seq.mode
    return rep


def check_reconstruction(model, seq):
    """The model built from the assembled Phi equals the input model."""
    rep = Report("reconstruction")
    rebuilt = model_from_phi(seq.phi_coeffs(), model.r, model.n)
    if rebuilt != model:
        rep.fail(expected=model.to_json(), found=rebuilt.to_json())
    return rep


def column_span_alphas(cand, z0):
    """alpha_i = span of the columns c_j(z0) with xi_j < i, for i = 1..r."""
    z0 = GaussianRational.coerce(z0)
    xi = cand.xi
    A0 = lmat_eval_z(cand.A, z0).get(0, gm.identity(xi.n))
    out = []
    for i in range(1, xi.r + 1):
        cols = [[A0[k][j] for k in range(xi.n)] for j in range(xi.n) if xi.xi[j] < i]
        out.append(gm.rref(cols, xi.n)[0])
    return out


def _canonical_span(basis):
    return tuple(tuple(v) for v in basis)


def compare_column_spans(cand, z0, seq):
    """For lambda-free A: the filtration alphas agree with the column spans.

    Segal factors come out in the order of the column spans, Uhlenbeck
    factors in reverse, and mixed filtrations in some interleaving, so the
    comparison is order-sensitive only for the first two.
    """
    rep = Report("column_spans")
    expected = [_canonical_span(a) for a in column_span_alphas(cand, z0)]
    found = [_canonical_span(a) for a in seq.alphas]
    if seq.mode == "uhlenbeck":
        expected = expected[::-1]
    ok = found == expected if seq.mode in ("segal", "uhlenbeck") else sorted(
        found, key=repr) == sorted(expected, key=repr)
    if not ok:
        rep.fail(mode=seq.mode, expected_dims=[len(a) for a in expected],
                 found_dims=[len(a) for a in found])
    return rep


def certify(cand, z0, lambdas=UNIT_LAMBDAS, mode="alternating"):
    """Full factorization certificate at one point: reality, reconstruction, spans."""
    z0 = GaussianRational.coerce(z0)
    model, filt, seq = factorize(cand, z0, mode)
    reports = [reality_report(seq, lambdas), check_reconstruction(model, seq)]
    if cand.A.is_lambda_free():
        reports.append(compare_column_spans(cand, z0, seq))
    return {"z0": str(z0), "mode": mode, "model": model.to_json(),
            "unitons": seq.to_json(), "reports": reports}


def harmonic_map(cand, z0, mode="alternating"):
    """phi = Phi(-1) for r even, i Phi(-1) for r odd, with its target space."""
    seq = factorize(cand, z0, mode)[2]
    r, n = seq.r, seq.n
    phi_m1 = assemble_phi(seq, -1)
    phi = phi_m1 if r % 2 == 0 else gm.scale(phi_m1, I)
    symmetric = all(k % 2 == 0 for k in cand.A.lambda_degrees())
    if r % 2 == 0:
        target = "real Grassmannian" if symmetric else "O(n)"
    else:
        target = f"O({n})/U({n // 2})" if symmetric else f"O({n})"
    one = gm.identity(n)
    sq = gm.matmul(phi, phi)
    info = {
        "r": r,
        "prefactor": "1" if r % 2 == 0 else "i",
        "target": target,
        "constant": all(x.derivative().is_zero() for row in cand.A.entries for x in row),
        "real": gm.flip_conj(phi) == phi,
        "orthogonal": gm.matmul(gm.second_transpose(phi), phi) == one,
        "involution": sq == one,
        "complex_structure": sq == gm.scale(one, -1),
    }
    return phi, info


def _exact_step(h):
    if isinstance(h, (Fraction, int)):
        return Fraction(h)
    return Fraction(repr(float(h)))


def _phi_poly(cand, z, mode):
    try:
        return factorize(cand, z, mode)[2].phi_coeffs()
    except PoleAtPoint as exc:
        raise NumericBreakdown(f"stencil point {z} hits a pole: {exc}") from exc


def _normalized_derivatives(cand, z0, h, lambdas, mode):
    """D(lambda) / (1 - 1/lambda) for each lambda, with D = Phi^-1 Phi_z.

    Phi depends on conj(z), so Phi_z = (Phi_x - i Phi_y) / 2 on the
    five-point stencil. All differences are exact; only the result is floated.
    """
    z0 = GaussianRational.coerce(z0)
    hq = _exact_step(h)
    if hq <= 0:
        raise ValueError("fd step must be positive")
    hg = GaussianRational(hq)
    pts = {"c": z0, "xp": z0 + hg, "xm": z0 - hg, "yp": z0 + hg * I, "ym": z0 - hg * I}
    polys = {k: _phi_poly(cand, z, mode) for k, z in pts.items()}
    out = []
    for lam0 in lambdas:
        lam0 = GaussianRational.coerce(lam0)
        if lam0 == 1:
            raise ValueError("lambda = 1 makes 1 - 1/lambda vanish")
        val = {k: _eval_coeffs(c, lam0) for k, c in polys.items()}
        dx = gm.matsub(val["xp"], val["xm"])
        dy = gm.matsub(val["yp"], val["ym"])
        # Phi_z = (dx - i dy) / (4h)
        phi_z = gm.scale(gm.matsub(dx, gm.scale(dy, I)), GaussianRational(1 / (4 * hq)))
        D = gm.matmul(gm.inverse(val["c"]), phi_z)
        factor = (1 - lam0.inverse()).inverse()
        out.append(gm.to_complex(gm.scale(D, factor)))
    return out


def fd_extended_solution_check(cand, z0, h=1e-5, lambdas=(-1, I), mode="alternating"):
    """Relative sup-norm gap between D(lambda)/(1 - 1/lambda) at two unit lambdas."""
    lam1, lam2 = (GaussianRational.coerce(x) for x in lambdas)
    if lam1 == lam2:
        return 0.0
    E1, E2 = _normalized_derivatives(cand, z0, h, (lam1, lam2), mode)
    gap = max(abs(a - b) for r1, r2 in zip(E1, E2) for a, b in zip(r1, r2))
    scale = max(abs(a) for row in E1 + E2 for a in row)
    if scale == 0:
        return 0.0
    return gap / scale


def fd_report(cand, z0, h=1e-5, lambdas=(-1, I, -I), mode="alternating", tol=1e-6):
    """fd residual for every pair drawn from lambdas."""
    rep = Report("fd_extended_solution")
    lambdas = [GaussianRational.coerce(x) for x in lambdas]
    E = _normalized_derivatives(cand, z0, h, lambdas, mode)
    scale = max((abs(a) for M in E for row in M for a in row), default=0.0)
    pairs = []
    for a in range(len(lambdas)):
        for b in range(a + 1, len(lambdas)):
            gap = max(abs(x - y) for r1, r2 in zip(E[a], E[b]) for x, y in zip(r1, r2))
            res = gap / scale if scale else 0.0
            pairs.append({"lambdas": [str(lambdas[a]), str(lambdas[b])], "residual": res})
            if res > tol:
                rep.fail(lambdas=[str(lambdas[a]), str(lambdas[b])], residual=res)
    rep.details.update(h=float(h), tol=tol, scale=scale, pairs=pairs)
    return rep
