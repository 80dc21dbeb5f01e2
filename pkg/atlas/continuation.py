"""
Square-root covers above the pole lattice and the meromorphic lift of F.

Each pole family ell contributes a double cover M_ell of C^x given by
zeta^2 = (iL_ell/z)^2 - 1, branched over +-iL_ell. Points of the product
cover are ``SheetPoint``s: a base point z, a sign vector eps and the
coordinates zeta_ell = eps_ell * zeta_ell^+(z).

The section zeta^+ is w1^+(z) - iL/z, continuous off the removed rays. On
the rays it takes the limit from Re z > 0, which is the value matching the
chart z = -iL/sqrt(zeta^2 + 1).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .contour import (
    ContourConfig,
    F_of_z,
    F_r_of_z,
    _pole_modulus,
    _require_contour_space,
    captured_indices,
    psi_z,
    smap,
    vartheta_z,
)
from .exceptions import (
    BranchPointError,
    ContinuationError,
    DeformationConditionError,
    InadmissiblePointError,
    NoValidRadiusError,
    OutOfReachError,
    ParameterRangeError,
)
from .plancherel import p1, rank_one_factors, rank_one_product, vartheta0
from .rootdata import L_ell, L_ell_over_b, rho_data

logger = logging.getLogger(__name__)

_CUT_TOL = 1e-15
# Path continuation: samples per unit length (in units of b) and refinements.
PATH_DENSITY = 200
MAX_REFINEMENTS = 6
_AMBIGUITY = 0.25


def _c0(space, ell, z):
    z = complex(z)
    if z == 0:
        raise InadmissiblePointError("z must be nonzero")
    return 1j * L_ell(space, ell) / z


def _on_cut(c0):
    return abs(c0.imag) <= _CUT_TOL * abs(c0) and abs(c0.real) <= 1


def w1_plus(space, ell, z):
    """The root of w^2 - 2(iL_ell/z)w + 1 inside the unit disk."""
    c0 = _c0(space, ell, z)
    root = cmath.sqrt(c0 * c0 - 1)
    a, b = c0 + root, c0 - root
    if abs(abs(a) - abs(b)) <= 1e-14:
        raise InadmissiblePointError(f"z = {z} lies on the removed ray of family {ell}")
    return a if abs(a) < abs(b) else b


def zeta_plus(space, ell, z):
    """zeta_ell^+(z), a square root of (iL_ell/z)^2 - 1."""
    c0 = _c0(space, ell, z)
    if abs(c0 - 1) <= _CUT_TOL or abs(c0 + 1) <= _CUT_TOL:
        raise BranchPointError(f"z = {z} is the branch point of family {ell}")
    if _on_cut(c0):
        t = c0.real
        return -1j * math.sqrt(1 - t * t)
    return w1_plus(space, ell, z) - c0


class BranchPointData(NamedTuple):
    ell: int
    location: complex


def branch_points(space, N):
    points = []
    for ell in range(N + 1):
        L = L_ell(space, ell)
        points.append(BranchPointData(ell, -1j * L))
        points.append(BranchPointData(ell, 1j * L))
    return points


@dataclass(frozen=True)
class SheetPoint:
    """A point of the product cover M_(N) above z."""

    z: complex
    eps: tuple
    zetas: tuple

    @property
    def N(self):
        return len(self.eps) - 1

    @classmethod
    def on_sheet(cls, space, z, eps):
        """The point above z on the sheet eps, with zeta_ell = eps_ell * zeta_ell^+(z)."""
        eps = tuple(int(e) for e in eps)
        if any(e not in (1, -1) for e in eps):
            raise ParameterRangeError(f"sheet signs must be +-1, got {eps}")
        zetas = tuple(e * zeta_plus(space, ell, z) for ell, e in enumerate(eps))
        return cls(complex(z), eps, zetas)

    @classmethod
    def principal(cls, space, z, N):
        return cls.on_sheet(space, z, (1,) * (N + 1))

    def flipped(self, ell):
        eps = list(self.eps)
        zetas = list(self.zetas)
        eps[ell] = -eps[ell]
        zetas[ell] = -zetas[ell]
        return SheetPoint(self.z, tuple(eps), tuple(zetas))

    def residual(self, space):
        """Largest relative residual of the defining equations."""
        worst = 0.0
        for ell, zeta in enumerate(self.zetas):
            c0 = _c0(space, ell, self.z)
            target = c0 * c0 - 1
            worst = max(worst, abs(zeta * zeta - target) / max(abs(target), 1.0))
        return worst


def local_zeta(space, ell, z, anchor_zeta):
    """The branch of sqrt((iL/z)^2 - 1) analytic near a point where it equals anchor_zeta."""
    c0 = _c0(space, ell, z)
    ratio = (c0 * c0 - 1) / (anchor_zeta * anchor_zeta)
    return anchor_zeta * cmath.sqrt(ratio)


def C_ell(space, ell):
    """(b/pi) L_ell p1(iL_ell); positive."""
    L = L_ell(space, ell)
    return space.b / math.pi * L * complex(p1(space, 1j * L)).real


def cancellation_interval(space, ell):
    """The m with vanishing vartheta0(L_ell/b, L_m/b): |m - ell| <= m_m/2 - 1."""
    reach = space.m_m // 2 - 1
    return range(max(0, ell - reach), ell + reach + 1)


def C_lm(space, ell, m):
    """b L_ell p1(iL_ell) p1(iL_m) vartheta0(L_ell/b, L_m/b); zero on the cancellation interval."""
    theta = vartheta0(space, L_ell_over_b(space, ell), L_ell_over_b(space, m))
    if theta == 0:
        return 0.0
    L, M = L_ell(space, ell), L_ell(space, m)
    return (
        space.b
        * L
        * complex(p1(space, 1j * L)).real
        * complex(p1(space, 1j * M)).real
        * float(theta)
    )


def psi_vartheta(space, symbol, z, w):
    return vartheta_z(space, z, w) * psi_z(space, symbol, z, w)


def G_ell(space, symbol, ell, z):
    """Residue of the integrand at w1^+: C_ell psi^vartheta_z(w1^+) p1q1(iz s(w1^+))."""
    w = w1_plus(space, ell, z)
    arg = 1j * complex(z) * smap(w)
    return C_ell(space, ell) * psi_vartheta(space, symbol, z, w) * rank_one_factors(space, arg).product


def G_tilde_ell(space, symbol, ell, z, zeta):
    """The lift of G_ell to M_ell, evaluated at (z, zeta)."""
    z = complex(z)
    w = 1j * L_ell(space, ell) / z - zeta
    arg = 1j * z * zeta
    return C_ell(space, ell) * psi_vartheta(space, symbol, z, w) * rank_one_factors(space, arg).product


def chart_z(space, ell, zeta, sign=-1):
    """Base point of the chart kappa_{ell,sign}: z = sign * iL_ell / sqrt(zeta^2 + 1)."""
    R = np.sqrt(np.asarray(zeta, dtype=complex) ** 2 + 1)
    out = sign * 1j * L_ell(space, ell) / R
    return out if out.ndim else complex(out)


def G_tilde_chart(space, symbol, ell, zeta, sign=-1):
    """G_tilde_ell in the chart coordinate, by substitution."""
    return G_tilde_ell(space, symbol, ell, chart_z(space, ell, zeta, sign), zeta)


def chart_expression(space, symbol, ell, zeta, sign=-1):
    """Closed local expression of G_tilde_ell in the chart kappa_{ell,sign}; vectorized.

    With R = sqrt(zeta^2 + 1) it reads
    -sign * C_ell psi^vartheta_z(-R - zeta) p1q1(L_ell zeta / R).
    """
    zeta = np.asarray(zeta, dtype=complex)
    R = np.sqrt(zeta**2 + 1)
    L = L_ell(space, ell)
    z = sign * 1j * L / R
    u = z / space.b
    w = -R - zeta
    c = (w + 1 / w) / 2
    s = (w - 1 / w) / 2
    cm = (-1j * w + 1j / w) / 2
    theta = u * u * (c * c - cm * cm)
    half = space.m_m / 2
    for k in range(1, space.m_m):
        theta = theta * ((u * s - half + k) ** 2 + u * u * c * c)
    psi = symbol(1j * u * c, 1j * u * cm)
    out = -sign * C_ell(space, ell) * theta * psi * rank_one_product(space, L * zeta / R)
    return out if out.ndim else complex(out)


def zeta_lm(space, ell, m):
    """i L_m / sqrt(L_ell^2 + L_m^2)."""
    L, M = L_ell(space, ell), L_ell(space, m)
    return 1j * M / math.hypot(L, M)


@dataclass(frozen=True)
class ChartResidue:
    ell: int
    m: int
    sign: int
    zeta: complex
    value: complex
    C_lm: float
    cancelled: bool


def residue_G_tilde(space, symbol, ell, m, sign=-1):
    """Residue of G_tilde_ell in the chart kappa_{ell,sign} at +-zeta_{ell,m}.

    The value is -sign * (1/(i pi^2)) C_{ell,m} sigma(L_ell/b, L_m/b) b L_ell^2/V^3
    with V = sqrt(L_ell^2 + L_m^2), equal at both points.
    """
    _require_contour_space(space)
    if ell < 0 or m < 0:
        raise ParameterRangeError(f"indices must be nonnegative, got ({ell}, {m})")
    if sign not in (1, -1):
        raise ParameterRangeError(f"chart sign must be +-1, got {sign}")
    zeta = zeta_lm(space, ell, m)
    constant = C_lm(space, ell, m)
    if constant == 0:
        return ChartResidue(ell, m, sign, zeta, 0j, 0.0, True)
    L, M = L_ell(space, ell), L_ell(space, m)
    V = math.hypot(L, M)
    sigma = complex(symbol(L / space.b, M / space.b))
    value = -sign / (1j * math.pi**2) * constant * sigma * space.b * L * L / V**3
    return ChartResidue(ell, m, sign, zeta, value, constant, False)


def residue_circle_radius(space, ell, m, reach=None):
    """A quarter of the distance from zeta_{ell,m} to every other chart singularity."""
    center = zeta_lm(space, ell, m)
    reach = reach if reach is not None else m + 4
    others = [1j, -1j, -center]
    others += [zeta_lm(space, ell, k) for k in range(reach) if k != m]
    others += [-zeta_lm(space, ell, k) for k in range(reach) if k != m]
    return 0.25 * min(abs(center - q) for q in others)


def segment_index(space, modulus):
    """n with L_n <= |z| < L_{n+1}; -1 below L_0."""
    x = float(modulus) / space.b - float(rho_data(space).rho_tilde_long)
    return -1 if x < 0 else int(math.floor(x))


def segment_radius(space, z, n, grid=50):
    """A radius r with S_{r,z,+} = [[0, n]], as far as possible from both pole moduli.

    Candidates are a log-spaced grid between |w1(n+1)| and |w1(n)| (or 1)
    together with their geometric mean.
    """
    z = complex(z)
    upper = 1.0 if n < 0 else _pole_modulus(space, n, z)
    lower = _pole_modulus(space, n + 1, z)
    if not lower < upper:
        raise NoValidRadiusError(f"segment {n}: no radius between {lower:.6g} and {upper:.6g}")
    candidates = list(np.geomspace(lower, upper, grid + 2)[1:-1]) + [math.sqrt(lower * upper)]
    best, best_margin = None, 0.0
    for r in candidates:
        margin = min(math.log(upper / r), math.log(r / lower))
        if margin <= best_margin or r >= 1:
            continue
        try:
            # Families on the removed rays have modulus 1 and are never captured.
            if any(ell > n for ell in captured_indices(space, z, r)):
                continue
        except DeformationConditionError:
            continue
        best, best_margin = r, margin
    if best is None:
        raise NoValidRadiusError(f"segment {n}: no admissible radius for z = {z}")
    logger.debug(f"segment {n}, z = {z}: radius {best:.6g} (margin {best_margin:.3g})")
    return float(best)


class PiecewiseValue(NamedTuple):
    F_n: complex
    correction: complex
    radius: float

    @property
    def total(self):
        return self.F_n + self.correction


def _F_segment(space, symbol, n, z, cfg):
    if n < 0:
        return F_of_z(space, symbol, z, cfg), 1.0
    r = segment_radius(space, z, n)
    return F_r_of_z(space, symbol, z, cfg.with_radius(r)), r


def piecewise_F(space, symbol, n, z, cfg=None):
    """F_(n)(z) and the correction 8*pi*i * sum_{ell<=n} G_ell(z)."""
    _require_contour_space(space)
    cfg = cfg or ContourConfig()
    F_n, r = _F_segment(space, symbol, n, z, cfg)
    correction = 8j * math.pi * sum((G_ell(space, symbol, ell, z) for ell in range(n + 1)), 0j)
    return PiecewiseValue(F_n, correction, r)


def F_tilde(space, symbol, point, n=None, cfg=None):
    """The lift of F to the product cover at ``point``.

    F_(n)(z) + 8 pi i [sum_{ell<=n} G~_ell(z, zeta_ell)
    + sum_{n<ell<=N, eps_ell=-1} (G~_ell(z, zeta_ell) - G~_ell(z, -zeta_ell))].
    The value does not depend on n; by default n is the segment of |z|.
    """
    _require_contour_space(space)
    cfg = cfg or ContourConfig()
    z = point.z
    if n is None:
        n = segment_index(space, abs(z))
    if n > point.N:
        raise OutOfReachError(f"segment {n} needs a cover with N >= {n}, got N = {point.N}")
    F_n, _ = _F_segment(space, symbol, n, z, cfg)
    total = 0j
    for ell in range(n + 1):
        total += G_tilde_ell(space, symbol, ell, z, point.zetas[ell])
    for ell in range(n + 1, point.N + 1):
        if point.eps[ell] == -1:
            zeta = point.zetas[ell]
            total += G_tilde_ell(space, symbol, ell, z, zeta) - G_tilde_ell(
                space, symbol, ell, z, -zeta
            )
    return F_n + 8j * math.pi * total


class TracePoint(NamedTuple):
    z: complex
    eps: tuple
    value: complex


@dataclass(frozen=True)
class PathResult:
    end: SheetPoint
    trace: tuple


def _step(space, zetas, z, depth, z_from):
    """Continue every coordinate from z_from to z, halving the step when ambiguous."""
    new = []
    for ell, previous in enumerate(zetas):
        c0 = _c0(space, ell, z)
        root = cmath.sqrt(c0 * c0 - 1)
        if abs(root) <= 1e-12:
            raise ContinuationError(f"path meets the branch point of family {ell} at z = {z}")
        near, far = sorted((abs(root - previous), abs(-root - previous)))
        if near >= _AMBIGUITY * far:
            if depth >= MAX_REFINEMENTS:
                raise ContinuationError(
                    f"sheet of family {ell} ambiguous near z = {z} after {depth} refinements"
                )
            middle = (z_from + z) / 2
            halfway = _step(space, zetas, middle, depth + 1, z_from)
            return _step(space, halfway, z, depth + 1, middle)
        new.append(root if abs(root - previous) <= abs(-root - previous) else -root)
    return new


def _sheet_signs(space, z, zetas):
    eps = []
    for ell, zeta in enumerate(zetas):
        plus = zeta_plus(space, ell, z)
        eps.append(1 if abs(zeta - plus) <= abs(zeta + plus) else -1)
    return tuple(eps)


def continue_along_path(space, symbol, start, path, with_values=True, cfg=None):
    """Continue ``start`` along the sampled path by nearest-root selection.

    Each leg between samples is split into ceil(200 |dz| / b) steps. Returns
    the end point and one trace entry per path sample.
    """
    _require_contour_space(space)
    cfg = cfg or ContourConfig()
    samples = [complex(z) for z in path]
    if not samples:
        return PathResult(start, ())
    zetas = list(start.zetas)
    z_prev = start.z
    trace = []
    point = start
    for z_next in samples:
        steps = max(1, math.ceil(PATH_DENSITY * abs(z_next - z_prev) / space.b))
        for j in range(1, steps + 1):
            z_from = z_prev + (z_next - z_prev) * (j - 1) / steps
            z_to = z_prev + (z_next - z_prev) * j / steps
            zetas = _step(space, zetas, z_to, 0, z_from)
        point = SheetPoint(z_next, _sheet_signs(space, z_next, zetas), tuple(zetas))
        value = F_tilde(space, symbol, point, cfg=cfg) if with_values else None
        trace.append(TracePoint(z_next, point.eps, value))
        z_prev = z_next
    logger.debug(f"continued {len(samples)} samples; final sheet {point.eps}")
    return PathResult(point, tuple(trace))


def trace_path(space, symbol, samples, eps, with_values=True, cfg=None):
    """Seed the sheet ``eps`` at the first sample and continue along the rest.

    The returned trace starts with the seed point.
    """
    samples = [complex(z) for z in samples]
    if not samples:
        raise ParameterRangeError("a path needs at least one sample")
    start = SheetPoint.on_sheet(space, samples[0], eps)
    value = F_tilde(space, symbol, start, cfg=cfg) if with_values else None
    result = continue_along_path(space, symbol, start, samples[1:], with_values, cfg)
    return (TracePoint(start.z, start.eps, value),) + result.trace


def circle_path(center, radius, samples=64, turns=1, start_angle=0.0):
    """Closed sampled loop around ``center``, ending where it starts."""
    count = samples * turns
    return [
        center + radius * cmath.exp(1j * (start_angle + 2 * math.pi * k / samples))
        for k in range(1, count + 1)
    ]
