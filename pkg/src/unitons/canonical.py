"""Canonical elements: integer diagonals xi with their block type.

A type (t_0, ..., t_r) lists how many diagonal entries take each value
0..r. Entries are stored in descending order, so the first t_r indices carry
the value r and the last t_0 carry 0. The partial sums T_k = t_k + ... + t_r
locate the blocks: xi_i = k exactly when T_{k+1} < i <= T_k.
"""

from dataclasses import dataclass

from .errors import InvalidType, SizeMismatch
from .lambdamat import ONE, ZERO, gamma_matrix
from .report import Report


@dataclass(frozen=True)
class CanonicalElement:
    xi: tuple
    type: tuple

    @property
    def n(self):
        return len(self.xi)

    @property
    def r(self):
        return self.xi[0]

    def T(self, k):
        """T_k = sum_{j >= k} t_j, with T_{r+1} = 0."""
        return sum(self.type[k:]) if k <= self.r else 0

    def bar(self, i):
        return self.n + 1 - i

    def x(self, i):
        """xi_i with a 1-based index."""
        return self.xi[i - 1]

    def block(self, k):
        """1-based indices i with xi_i = k."""
        return range(self.T(k + 1) + 1, self.T(k) + 1)

    def __str__(self):
        return "(" + ",".join(str(t) for t in self.type) + ")"

    def to_json(self):
        return {"type": list(self.type), "xi": list(self.xi), "r": self.r}


def canonical_from_type(t):
    t = tuple(int(x) for x in t)
    if not t:
        raise InvalidType("type must be nonempty")
    if any(x <= 0 for x in t):
        raise InvalidType(f"type entries must be positive: {t}")
    if t != t[::-1]:
        raise InvalidType(f"type {t} is not symmetric")
    r = len(t) - 1
    n = sum(t)
    if r % 2 == 1:
        mid = (r - 1) // 2
        if n % 2 or t[mid] < 2 or t[mid + 1] < 2:
            raise InvalidType(f"type {t}: odd r needs both middle entries at least 2")
    xi = tuple(k for k in range(r, -1, -1) for _ in range(t[k]))
    return CanonicalElement(xi, t)


def canonical_from_xi(xi):
    xi = tuple(int(x) for x in xi)
    if not xi:
        raise InvalidType("xi must be nonempty")
    r = xi[0]
    if xi[-1] != 0 or any(a - b not in (0, 1) for a, b in zip(xi, xi[1:])):
        raise InvalidType(f"xi = {xi} must descend by steps of 0 or 1 from r to 0")
    t = tuple(xi.count(k) for k in range(r + 1))
    el = canonical_from_type(t)
    if el.xi != xi:
        raise InvalidType(f"xi = {xi} is not in canonical order")
    return el


def type_ones(n):
    return canonical_from_type([1] * n)


def gamma_xi(xi):
    return gamma_matrix(list(xi.xi))


def check_shape(A, xi, real=True):
    """Block-unitriangularity, lambda-degree bounds, and the second-diagonal bound.

    With ``real=False`` the sharper second-diagonal bound (a consequence of
    orthogonality) is only reported as a warning.
    """
    if A.n != xi.n:
        raise SizeMismatch(f"matrix size {A.n} vs canonical element size {xi.n}")
    rep = Report("shape")
    warnings = []
    n = xi.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a = A[i, j]
            xi_i, xi_j = xi.x(i), xi.x(j)
            if xi_i <= xi_j:
                want = ONE if i == j else ZERO
                if a != want:
                    rep.fail(i=i, j=j, reason="expected delta_ij", found=a.to_json())
                continue
            bound = xi_i - xi_j - 1
            if a.min_deg < 0:
                rep.fail(i=i, j=j, reason="negative lambda-degree", found=a.to_json())
            if a.max_deg > bound:
                rep.fail(i=i, j=j, reason=f"lambda-degree exceeds {bound}", found=a.to_json())
                continue
            if j == n + 1 - i and xi_i - xi_j >= 2 and a.max_deg > bound - 1:
                entry = dict(i=i, j=j, reason=f"second-diagonal degree exceeds {bound - 1}",
                             found=a.to_json())
                if real:
                    rep.fail(**entry)
                else:
                    warnings.append(entry)
    if warnings:
        rep.details["warnings"] = warnings
    return rep
