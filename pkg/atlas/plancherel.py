"""
Harish-Chandra c-function and Plancherel density of the BC2/C2 spaces.

Two independent evaluations of the density are provided: the gamma
quotient ``[c(lambda) c(-lambda)]^-1`` and the factored polynomial times
cotangent form ``C * Pi * P * Q``. The constant C, the rank-one constant and
the normalization c0 are fixed once per space at a generic reference point.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .exceptions import PoleError
from .rootdata import Root, SpectralPoint, positive_roots, rho_data, rho_point

logger = logging.getLogger(__name__)

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2 * math.pi)

# Gamma arguments this close to a nonpositive integer count as hitting it.
_LATTICE_TOL = 1e-12
# Offset of the generic point used to fix the calibration constants.
REFERENCE_OFFSET = (0.3 + 0.2j, 0.7 + 0.1j)


def _nonpositive_integer(z, tol=0.0):
    z = complex(z)
    n = round(z.real)
    return n <= 0 and abs(z.imag) <= tol and abs(z.real - n) <= tol


def complex_gamma(z):
    """Gamma function for complex arguments.

    Raises PoleError at the nonpositive integers.
    """
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleError("gamma", int(round(z.real)))
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * complex_gamma(1 - z))
    z -= 1
    x = _LANCZOS_COEFFS[0]
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x += coeff / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def reciprocal_gamma(z):
    """1/Gamma(z), entire; zero at the nonpositive integers."""
    if _nonpositive_integer(z):
        return 0j
    return 1 / complex_gamma(z)


def cot_pi(u):
    """cot(pi*u) for scalars or arrays.

    The real part is reduced mod 1 and the value is formed from
    exp(2*pi*i*v) with |exp| <= 1, which stays accurate for large |Im u|.
    """
    u = np.asarray(u, dtype=complex)
    v = (u.real - np.round(u.real)) + 1j * u.imag
    upper = v.imag >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.exp(2j * np.pi * np.where(upper, v, -v))
        val = 1j * (e + 1) / (e - 1)
    out = np.where(upper, val, -val)
    return out if out.ndim else complex(out)


def _root_datum(space, root):
    for datum in positive_roots(space):
        if datum.root is root:
            return datum
    raise ValueError(f"{root!r} is not an unmultipliable positive root")


def _shift(datum):
    """a_beta = m_{beta/2}/4 + 1/2."""
    return datum.half_multiplicity / 4 + 0.5


def c_beta(space, root, lam):
    """2^{-2x} Gamma(2x) / [Gamma(x + a_beta) Gamma(x + rho~_beta)], x = lambda_beta."""
    datum = _root_datum(space, root)
    x = complex(lam.pair(root))
    try:
        g = complex_gamma(2 * x)
    except PoleError as exc:
        raise PoleError(
            root.value, exc.offset, f"c_{root.value} has a pole: Gamma(2*lambda_beta) at {exc.offset}"
        ) from None
    return (
        cmath.exp(-2 * x * math.log(2))
        * g
        * reciprocal_gamma(x + _shift(datum))
        * reciprocal_gamma(x + float(datum.rho_tilde))
    )


@lru_cache(maxsize=None)
def c0(space):
    """Normalizing constant making c_hc(rho) = 1."""
    rho = rho_point(space).as_complex()
    value = 1
    for datum in positive_roots(space):
        value *= c_beta(space, datum.root, rho)
    return 1 / value


def c_hc(space, lam):
    lam = SpectralPoint(complex(lam.x1), complex(lam.x2))
    value = c0(space)
    for datum in positive_roots(space):
        value *= c_beta(space, datum.root, lam)
    return value


def _gamma_quotient(x, a, rho_t):
    """1/(c_beta(x) c_beta(-x)) up to c0, for one root."""
    return (
        complex_gamma(x + a)
        * complex_gamma(x + rho_t)
        * complex_gamma(a - x)
        * complex_gamma(rho_t - x)
        * reciprocal_gamma(2 * x)
        * reciprocal_gamma(-2 * x)
    )


def _root_density(root, x, a, rho_t):
    numerator = (x + a, x + rho_t, a - x, rho_t - x)
    poles = sum(_nonpositive_integer(z, _LATTICE_TOL) for z in numerator)
    if not poles:
        return _gamma_quotient(x, a, rho_t)
    zeros = sum(_nonpositive_integer(z, _LATTICE_TOL) for z in (2 * x, -2 * x))
    if poles > zeros:
        offset = round(complex(x).real - rho_t)
        raise PoleError(root.value, offset, f"density has a pole on the {root.value} hyperplane")
    if poles < zeros:
        return 0j
    # Removable: gamma poles cancelled by zeros of 1/Gamma.
    delta = 1e-6
    return 0.5 * (
        _gamma_quotient(x + delta, a, rho_t) + _gamma_quotient(x - delta, a, rho_t)
    )


def density_direct(space, lam):
    """Plancherel density [c_hc(lambda) c_hc(-lambda)]^-1 from the gamma quotient."""
    value = 1 / c0(space) ** 2
    for datum in positive_roots(space):
        x = complex(lam.pair(datum.root))
        value *= _root_density(datum.root, x, _shift(datum), float(datum.rho_tilde))
    return value


def rank_one_density_direct(space, x):
    """Density of the rank-one factor with multiplicities (m_l, m_s), unnormalized."""
    datum = _root_datum(space, Root.BETA1)
    return _root_density(Root.BETA1, complex(x), _shift(datum), float(datum.rho_tilde))


def _polynomial_roots(datum):
    """Zeros of the P factor of one root, as floats."""
    half = datum.half_multiplicity
    rho_t = float(datum.rho_tilde)
    zeros = [half / 4 - 0.5 - k for k in range(half // 2)]
    zeros += [rho_t - 1 - k for k in range(int(2 * datum.rho_tilde) - 1)]
    return zeros


def _polynomial(datum, x):
    value = 1
    for zero in _polynomial_roots(datum):
        value = value * (x - zero)
    return value


@dataclass(frozen=True)
class PlancherelParts:
    Pi: complex
    P: complex
    Q: complex
    product: complex
    cot_roots: tuple = ()


def _unscaled_parts(space, lam):
    Pi, P, Q = 1, 1, 1
    cot_roots = []
    for datum in positive_roots(space):
        x = complex(lam.pair(datum.root))
        Pi *= x
        P *= _polynomial(datum, x)
        if datum.odd:
            u = x - float(datum.rho_tilde)
            k = round(u.real)
            if abs(u.imag) <= _LATTICE_TOL and abs(u.real - k) <= _LATTICE_TOL:
                raise PoleError(datum.root.value, k, f"cotangent pole: lambda_beta = rho~ + {k}")
            Q *= cot_pi(u)
            cot_roots.append(datum.root)
    return complex(Pi), complex(P), complex(Q), tuple(cot_roots)


def reference_point(space):
    rho = rho_point(space)
    return SpectralPoint(float(rho.x1) + REFERENCE_OFFSET[0], float(rho.x2) + REFERENCE_OFFSET[1])


@lru_cache(maxsize=None)
def calibration_constant(space):
    """C in density = C * Pi * P * Q, fixed at the reference point."""
    lam = reference_point(space)
    Pi, P, Q, _ = _unscaled_parts(space, lam)
    constant = density_direct(space, lam) / (Pi * P * Q)
    logger.debug(f"{space.label}: calibration constant {constant}")
    return constant


def density_factored(space, lam):
    Pi, P, Q, cot_roots = _unscaled_parts(space, lam)
    return PlancherelParts(Pi, P, Q, calibration_constant(space) * Pi * P * Q, cot_roots)


class RankOneFactors(NamedTuple):
    p1_at: complex
    q1_at: complex
    product: complex


def _rank_one_pole_index(rho_t, k):
    """Index ell with x = -/+ i L_ell for the cotangent offset k, or None if removable."""
    if k >= 0:
        return k
    ell = -k - round(2 * rho_t)
    return ell if ell >= 0 else None


def _removable_value(datum, u0):
    """Limit of P(u) cot(pi(u - rho~)) at a lattice point u0 cancelled by a zero of P."""
    zeros = _polynomial_roots(datum)
    hits = [z for z in zeros if abs(z - u0) <= _LATTICE_TOL]
    if len(hits) > 1:
        return 0j
    rest = 1
    for z in zeros:
        if abs(z - u0) > _LATTICE_TOL:
            rest *= u0 - z
    return complex(rest / math.pi)


def rank_one_factors(space, x):
    """p1(x) = P1(ix/b), q1(x) = Q1(ix/b) and their product.

    p1 is even, q1 is odd, so p1*q1 is odd. Poles of the product form the
    set S = {+-i L_ell}; other cotangent poles are cancelled by zeros of p1.
    """
    datum = _root_datum(space, Root.BETA1)
    rho_t = float(datum.rho_tilde)
    u = 1j * complex(x) / space.b
    p1 = complex(_polynomial(datum, u))
    if not datum.odd:
        return RankOneFactors(p1, 1 + 0j, p1)
    offset = u - rho_t
    k = round(offset.real)
    if abs(offset.imag) > _LATTICE_TOL or abs(offset.real - k) > _LATTICE_TOL:
        q1 = complex(cot_pi(offset))
        return RankOneFactors(p1, q1, p1 * q1)
    ell = _rank_one_pole_index(rho_t, k)
    if ell is not None:
        sign = "-" if k >= 0 else "+"
        raise PoleError("q1", ell, f"p1*q1 has a pole at x = {sign}i L_{ell}")
    return RankOneFactors(0j, complex("inf"), _removable_value(datum, rho_t + k))


def rank_one_product(space, x):
    """Vectorized p1(x) q1(x) without pole checks, for quadrature.

    Removable lattice points take their limit; points of S come out infinite.
    """
    datum = _root_datum(space, Root.BETA1)
    u = 1j * np.asarray(x, dtype=complex) / space.b
    value = _polynomial(datum, u)
    if not datum.odd:
        return value
    rho_t = float(datum.rho_tilde)
    offset = u - rho_t
    k = np.round(offset.real)
    on_lattice = (np.abs(offset.imag) <= _LATTICE_TOL) & (np.abs(offset.real - k) <= _LATTICE_TOL)
    with np.errstate(invalid="ignore"):
        value = np.array(value * cot_pi(offset), dtype=complex)
    flat, flat_k = value.reshape(-1), np.reshape(k, -1)
    for i in np.flatnonzero(on_lattice):
        kk = int(flat_k[i])
        if _rank_one_pole_index(rho_t, kk) is None:
            flat[i] = _removable_value(datum, rho_t + kk)
    return value if value.ndim else complex(value)


def p1(space, x):
    """Vectorized p1(x) = P1(ix/b)."""
    datum = _root_datum(space, Root.BETA1)
    return _polynomial(datum, 1j * np.asarray(x, dtype=complex) / space.b)


def vartheta0(space, x1, x2):
    """(x2^2 - x1^2) * prod_{k=1}^{m_m-1} [(x2 - m_m/2 + k)^2 - x1^2].

    Exact when both arguments are int or Fraction.
    """
    exact = all(isinstance(v, (int, Fraction)) for v in (x1, x2))
    half = Fraction(space.m_m, 2) if exact else space.m_m / 2
    value = x2 * x2 - x1 * x1
    for k in range(1, space.m_m):
        shifted = x2 - half + k
        value = value * (shifted * shifted - x1 * x1)
    return value


@dataclass(frozen=True)
class FactorizationReport:
    label: str
    samples: int
    max_rel_error_factored: float
    max_rel_error_product_form: float
    product_form_checked: bool

    @property
    def max_rel_error(self):
        return max(self.max_rel_error_factored, self.max_rel_error_product_form)


def random_spectral_points(rng, count):
    """Generic points away from every real pole hyperplane."""
    x1 = rng.uniform(0.1, 3.0, count) + 1j * rng.uniform(0.2, 0.6, count)
    x2 = rng.uniform(0.1, 3.0, count) + 1j * rng.uniform(0.9, 1.5, count)
    return [SpectralPoint(complex(a), complex(c)) for a, c in zip(x1, x2)]


def _product_form(space, lam):
    return (
        vartheta0(space, lam.x1, lam.x2)
        * rank_one_density_direct(space, lam.x1)
        * rank_one_density_direct(space, lam.x2)
    )


def factorization_identity_check(space, samples=100, seed=0):
    """Compare the gamma-quotient density with both factored forms.

    The product form vartheta0 * (rank-one density)^2 only applies when
    the middle roots have even multiplicity.
    """
    rng = np.random.default_rng(seed)
    points = random_spectral_points(rng, samples)
    product_form = not space.continuation_excluded
    if product_form:
        ref = reference_point(space)
        K = density_direct(space, ref) / _product_form(space, ref)

    err_factored, err_product = 0.0, 0.0
    for lam in points:
        direct = density_direct(space, lam)
        factored = density_factored(space, lam).product
        err_factored = max(err_factored, abs(factored - direct) / abs(direct))
        if product_form:
            err_product = max(err_product, abs(K * _product_form(space, lam) - direct) / abs(direct))

    logger.debug(f"{space.label}: factorization errors {err_factored:.3g}, {err_product:.3g}")
    return FactorizationReport(space.label, samples, err_factored, err_product, product_form)


@dataclass(frozen=True)
class DensityComparison:
    parts: PlancherelParts
    direct: complex

    @property
    def rel_diff(self):
        return abs(self.parts.product - self.direct) / max(abs(self.direct), 1e-300)


def compare_density(space, lam):
    return DensityComparison(density_factored(space, lam), density_direct(space, lam))


class WallResidue(NamedTuple):
    value: complex
    spread: float


def _wall_point(root, t, other):
    if root is Root.BETA1:
        return SpectralPoint(t, other)
    if root is Root.BETA2:
        return SpectralPoint(other, t)
    if root is Root.MID_MINUS:
        return SpectralPoint(other, other + t)
    return SpectralPoint(other, t - other)


def wall_residue(space, root, k, other, h=1e-3):
    """Limit of (lambda_beta - rho~_beta - k) * density approaching the wall.

    Four approach points h, h/2, h/4, h/8 combined by two Richardson
    steps; ``spread`` is the disagreement of the last two estimates.
    """
    datum = _root_datum(space, root)
    wall = float(datum.rho_tilde) + k
    steps = [h / 2**j for j in range(4)]
    values = [
        eps * density_factored(space, _wall_point(root, wall + eps, complex(other))).product
        for eps in steps
    ]
    first = [2 * values[j + 1] - values[j] for j in range(3)]
    second = [(4 * first[j + 1] - first[j]) / 3 for j in range(2)]
    return WallResidue(second[1], abs(second[1] - second[0]))


def pole_free_scan(space, theta, fractions=(0.2, 0.45, 0.7, 0.95), angles=12):
    """Evaluate the density at r*omega for complex r inside the disk |r| < L.

    omega is the unit vector at angle ``theta`` in the (beta1, beta2) plane.
    Returns the largest modulus seen; a pole raises PoleError.
    """
    rd = rho_data(space)
    largest = 0.0
    for frac in fractions:
        for j in range(angles):
            r = frac * rd.L * cmath.exp(2j * math.pi * (j + 0.5) / angles)
            lam = SpectralPoint(r * math.cos(theta) / space.b, r * math.sin(theta) / space.b)
            value = density_direct(space, lam)
            if not cmath.isfinite(value):
                raise PoleError("scan", 0, f"non-finite density at r = {r}")
            largest = max(largest, abs(value))
    return largest
