"""Random admissible data for the constructors, shared by the test modules."""

import random

from unitons.canonical import canonical_from_type
from unitons.errors import DegenerateData, DegenerateDenominator
from unitons.exactnum import GaussianRational, Polynomial, RationalFunction
from unitons.solver import SCHEMAS, build_low_dim, build_type_ones, schema_for

LOW_DIM_TYPES = sorted(SCHEMAS, key=lambda t: (sum(t), t))
ONES_TYPES = [(1,) * n for n in (3, 5, 7, 9)]
R1_TYPES = [(2, 2), (3, 3)]
ONE_T_ONE_TYPES = [(1, 2, 1), (1, 3, 1), (1, 4, 1)]


def random_scalar(rng, bound=3, imag=True):
    re = rng.randint(-bound, bound)
    im = rng.randint(-bound, bound) if imag and rng.random() < 0.5 else 0
    if rng.random() < 0.2:
        return GaussianRational(re, im) / rng.choice((2, 3))
    return GaussianRational(re, im)


def random_poly(rng, max_deg=4, bound=3):
    deg = rng.randint(0, max_deg)
    coeffs = [random_scalar(rng, bound) for _ in range(deg)] + [GaussianRational(rng.choice((-2, -1, 1, 2, 3)))]
    return Polynomial(coeffs)


def random_rf(rng, max_deg=4, rational=0.25):
    """Polynomial most of the time; sometimes divided by a monic linear factor."""
    num = random_poly(rng, max_deg)
    f = RationalFunction(num)
    if rng.random() < rational:
        root = random_scalar(rng, 2)
        f = f / RationalFunction(Polynomial([-root, GaussianRational(1)]))
    return f


def random_nonconstant(rng, max_deg=4, rational=0.25):
    while True:
        f = random_rf(rng, max_deg, rational)
        if not f.derivative().is_zero():
            return f


def params_for(t, rng, max_deg=4, rational=0.25, lam_terms=True):
    """Random parameters for the schema of type t (optional lambda parameters included)."""
    req, opt = schema_for(t)
    p = {k: random_nonconstant(rng, max_deg, rational) for k in req}
    for k in opt:
        p[k] = random_rf(rng, max_deg, rational) if lam_terms and rng.random() < 0.8 else RationalFunction.ZERO
    return p


def random_candidate(t, rng, max_deg=4, rational=0.25, lam_terms=True, tries=50):
    """A constructor output for type t, resampling on degenerate data."""
    for _ in range(tries):
        try:
            if all(x == 1 for x in t) and t not in SCHEMAS:
                m = (len(t) - 1) // 2
                return build_type_ones([random_nonconstant(rng, max_deg, rational) for _ in range(m)])
            return build_low_dim(t, params_for(t, rng, max_deg, rational, lam_terms))
        except (DegenerateData, DegenerateDenominator):
            continue
    raise RuntimeError(f"no admissible data found for {t}")


def random_mu(rng, m, max_deg=4, rational=0.25, strict=False):
    for _ in range(50):
        mu = [random_nonconstant(rng, max_deg, rational) for _ in range(m)]
        try:
            return mu, build_type_ones(mu, strict=strict)
        except (DegenerateData, DegenerateDenominator):
            continue
    raise RuntimeError("no admissible mu found")


def rng_for(*key):
    return random.Random(repr(key))


def all_types():
    return LOW_DIM_TYPES + [t for t in ONES_TYPES if t not in SCHEMAS]


__all__ = [
    "LOW_DIM_TYPES", "ONES_TYPES", "R1_TYPES", "ONE_T_ONE_TYPES", "all_types",
    "canonical_from_type", "params_for", "random_candidate", "random_mu",
    "random_nonconstant", "random_poly", "random_rf", "random_scalar", "rng_for",
]
