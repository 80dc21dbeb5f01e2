"""
Unit-circle contour machinery.

F(z) is the integral over |w| = 1 of vartheta_z(w) psi_z(w) phi_z(w) dw.
Shrinking the circle to |w| = r < 1 crosses the poles w = +-w1(ell),
+-i*w1(ell) of phi_z, whose residues are collected by ``F_r_res``.

Every function taking ``w`` accepts numpy arrays; quadrature evaluates the
integrand once per node array.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np

from .exceptions import (
    ContourProximityError,
    DeformationConditionError,
    ExcludedSpaceError,
    InadmissiblePointError,
    ParameterRangeError,
    QuadratureConvergenceError,
    ResidueConvergenceError,
)
from .plancherel import rank_one_factors, rank_one_product
from .rootdata import L_ell, rho_data

logger = logging.getLogger(__name__)

# Ellipse membership closer than this to the boundary is degenerate.
MEMBERSHIP_BAND = 1e-9
# Pole families beyond the first index with modulus below this fraction of
# the contour radius cannot spoil the quadrature.
_PROXIMITY_CUTOFF = 0.25
_MAX_POLE_FAMILIES = 100000


@dataclass(frozen=True)
class SpectralSymbol:
    """Weyl-invariant entire function of the spectral parameter."""

    name: str
    eval: Callable = field(repr=False, compare=False)

    def __call__(self, x1, x2):
        return self.eval(x1, x2)


def _one(x1, x2):
    return np.ones_like(np.asarray(x1) * np.asarray(x2), dtype=complex)


def _gauss(x1, x2):
    return np.exp(-(np.asarray(x1) ** 2 + np.asarray(x2) ** 2) / 25)


def _poly(x1, x2):
    x1, x2 = np.asarray(x1), np.asarray(x2)
    return 1 + x1**2 * x2**2


ONE = SpectralSymbol("one", _one)
GAUSS = SpectralSymbol("gauss", _gauss)
POLY = SpectralSymbol("poly", _poly)

BUILTIN_SYMBOLS = {s.name: s for s in (ONE, GAUSS, POLY)}


def symbol_by_name(name):
    try:
        return BUILTIN_SYMBOLS[name]
    except KeyError:
        known = ", ".join(BUILTIN_SYMBOLS)
        raise ParameterRangeError(f"unknown symbol {name!r}; known: {known}") from None


def combine(*terms):
    """Linear combination of symbols from ``(coefficient, symbol)`` pairs."""
    terms = tuple(terms)

    def evaluate(x1, x2):
        return sum(coeff * symbol(x1, x2) for coeff, symbol in terms)

    name = "+".join(f"{coeff}*{symbol.name}" for coeff, symbol in terms)
    return SpectralSymbol(name, evaluate)


@dataclass(frozen=True)
class ContourConfig:
    nodes: int = 512
    radius: float = 1.0
    max_nodes: int = 2**15
    tol: float = 1e-11

    def __post_init__(self):
        if self.nodes < 64 or self.nodes % 2:
            raise ParameterRangeError(f"nodes must be even and >= 64, got {self.nodes}")
        if not 0 < self.radius <= 1:
            raise ParameterRangeError(f"radius must lie in (0, 1], got {self.radius}")
        if self.max_nodes < self.nodes:
            raise ParameterRangeError("max_nodes must be at least nodes")

    @classmethod
    def from_settings(cls, **overrides):
        """Defaults from Django settings when they are configured."""
        from django.conf import settings

        values = {}
        if settings.configured:
            values["nodes"] = getattr(settings, "ATLAS_QUADRATURE_NODES", cls.nodes)
            values["max_nodes"] = getattr(settings, "ATLAS_MAX_QUADRATURE_NODES", cls.max_nodes)
        values.update(overrides)
        return cls(**values)

    def with_radius(self, radius):
        return replace(self, radius=radius)


def _nonzero(w):
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise InadmissiblePointError("w must be nonzero")
    return w


def cmap(w):
    """c(w) = (w + 1/w)/2."""
    w = _nonzero(w)
    out = (w + 1 / w) / 2
    return out if out.ndim else complex(out)


def smap(w):
    """s(w) = (w - 1/w)/2."""
    w = _nonzero(w)
    out = (w - 1 / w) / 2
    return out if out.ndim else complex(out)


def vartheta_z(space, z, w):
    u = complex(z) / space.b
    c, s = cmap(w), smap(w)
    cm = cmap(-1j * np.asarray(w))
    value = u * u * (c * c - cm * cm)
    half = space.m_m / 2
    for k in range(1, space.m_m):
        value = value * ((u * s - half + k) ** 2 + u * u * c * c)
    return value


def psi_z(space, symbol, z, w):
    """The symbol at the spectral parameter (i(z/b)c(w), i(z/b)c(-iw))."""
    u = 1j * complex(z) / space.b
    return symbol(u * cmap(w), u * cmap(-1j * np.asarray(w)))


def _phi(space, z, w):
    z = complex(z)
    c, s = cmap(w), smap(w)
    cm = cmap(-1j * np.asarray(w))
    return -z * z * c * (s / w) * rank_one_product(space, z * c) * rank_one_product(space, z * cm)


def phi_z(space, z, w):
    """phi_z(w); scalar calls raise PoleError when z*c(w) or z*c(-iw) lies in S."""
    if np.ndim(w):
        return _phi(space, z, w)
    z, w = complex(z), complex(w)
    c, s, cm = cmap(w), smap(w), cmap(-1j * w)
    first = rank_one_factors(space, z * c).product
    second = rank_one_factors(space, z * cm).product
    return -z * z * c * (s / w) * first * second


def integrand(space, symbol, z, w):
    """vartheta_z * psi_z * phi_z."""
    return vartheta_z(space, z, w) * psi_z(space, symbol, z, w) * _phi(space, z, w)


def _require_contour_space(space):
    if space.continuation_excluded:
        raise ExcludedSpaceError(f"{space.label}: odd p is excluded from continuation")


def _pole_modulus(space, ell, z):
    c0 = 1j * L_ell(space, ell) / z
    root = np.sqrt(c0 * c0 - 1 + 0j)
    return min(abs(c0 + root), abs(c0 - root))


def pole_moduli(space, z, count):
    """|w1(ell)| for ell < count; the modulus is 1 on the removed rays."""
    z = complex(z)
    return [_pole_modulus(space, ell, z) for ell in range(count)]


def _guard_moduli(space, z, radius):
    """Radii carrying integrand poles, enough to guard the circle of ``radius``."""
    z = complex(z)
    radii = []
    for ell in range(_MAX_POLE_FAMILIES):
        mu = _pole_modulus(space, ell, z)
        radii.extend((mu, 1 / mu))
        if mu < _PROXIMITY_CUTOFF * radius:
            break
    return radii


def _ellipse_measure(space, ell, z, r):
    """(xi/c(r))^2 + (eta/s(r))^2 for iL_ell/z = xi + i*eta; < 1 inside."""
    c0 = 1j * L_ell(space, ell) / complex(z)
    a = (r + 1 / r) / 2
    b = (1 / r - r) / 2
    return (c0.real / a) ** 2 + (c0.imag / b) ** 2, c0


def captured_indices(space, z, r):
    """S_{r,z,+}: the ell with iL_ell/z inside the ellipse c(|w| = r) and off [-1, 1].

    Raises DeformationConditionError when a point lies within the
    membership band of the ellipse boundary.
    """
    if not 0 < r < 1:
        raise ParameterRangeError(f"radius must lie in (0, 1), got {r}")
    captured = []
    ell = 0
    while ell < _MAX_POLE_FAMILIES:
        q, c0 = _ellipse_measure(space, ell, z, r)
        if abs(q - 1) < MEMBERSHIP_BAND:
            raise DeformationConditionError(ell, f"iL_{ell}/z lies on the ellipse of radius {r}")
        if q > 1:
            break
        on_segment = abs(c0.imag) <= 1e-15 * abs(c0) and abs(c0.real) <= 1
        if not on_segment:
            captured.append(ell)
        ell += 1
    return captured


def _trapezoid(g, radius, nodes):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = radius * np.exp(1j * theta)
    values = g(w) * 1j * w
    return (2 * np.pi / nodes) * np.sum(values), float(np.max(np.abs(values)))


def _too_close(pole_radii, radius, nodes):
    spacing = 2 * np.pi * radius / nodes
    return any(abs(mu - radius) <= 4 * spacing for mu in pole_radii)


def trapezoid_circle(g, radius, cfg, pole_radii=()):
    """Trapezoidal rule for the integral of g(w) dw over |w| = radius.

    Nodes start at ``cfg.nodes`` and double until two successive values
    agree to ``cfg.tol`` relative to the integrand scale, after first
    doubling until every pole radius is at least four node spacings away.
    """
    nodes = cfg.nodes
    while _too_close(pole_radii, radius, nodes):
        nodes *= 2
        if nodes > cfg.max_nodes:
            raise ContourProximityError(
                f"integrand pole within {4 * 2 * math.pi * radius / cfg.max_nodes:.3g} "
                f"of the circle |w| = {radius}"
            )
        logger.debug(f"proximity guard: {nodes} nodes on |w| = {radius}")

    previous, _ = _trapezoid(g, radius, nodes)
    while True:
        nodes *= 2
        if nodes > cfg.max_nodes:
            raise QuadratureConvergenceError(
                f"no convergence on |w| = {radius} with {cfg.max_nodes} nodes"
            )
        current, scale = _trapezoid(g, radius, nodes)
        if abs(current - previous) <= cfg.tol * max(abs(current), 2 * np.pi * scale):
            return current
        logger.debug(f"doubling to {nodes * 2} nodes: change {abs(current - previous):.3g}")
        previous = current


def is_admissible(space, z):
    """False on the removed rays i((-inf, -L] u [L, inf)) and at z = 0."""
    z = complex(z)
    if z == 0:
        return False
    on_axis = abs(z.real) <= 1e-14 * abs(z)
    return not (on_axis and abs(z.imag) >= rho_data(space).L)


def F_of_z(space, symbol, z, cfg=None):
    _require_contour_space(space)
    cfg = cfg or ContourConfig()
    z = complex(z)
    if z == 0:
        return 0j
    if not is_admissible(space, z):
        raise InadmissiblePointError(f"z = {z} lies on a removed ray")
    return trapezoid_circle(
        lambda w: integrand(space, symbol, z, w), 1.0, cfg, _guard_moduli(space, z, 1.0)
    )


def check_deformation_condition(space, z, r):
    """Raise DeformationConditionError if some iL_ell/z is on the ellipse of radius r."""
    captured_indices(space, z, r)


def F_r_of_z(space, symbol, z, cfg):
    """The integral over |w| = cfg.radius."""
    _require_contour_space(space)
    r = cfg.radius
    z = complex(z)
    if r >= 1:
        return F_of_z(space, symbol, z, cfg)
    check_deformation_condition(space, z, r)
    return trapezoid_circle(
        lambda w: integrand(space, symbol, z, w), r, cfg, _guard_moduli(space, z, r)
    )


def F_r_res(space, symbol, z, r):
    """4 * sum of G_ell(z) over the captured indices S_{r,z,+}."""
    from .continuation import G_ell

    _require_contour_space(space)
    return 4 * sum((G_ell(space, symbol, ell, z) for ell in captured_indices(space, z, r)), 0j)


def admissible_radius(space, z, r):
    """r, or r*(1 +- 1e-3) when the membership test at r is degenerate."""
    for candidate in (r, r * (1 + 1e-3), r * (1 - 1e-3)):
        try:
            captured_indices(space, z, candidate)
        except DeformationConditionError:
            logger.debug(f"radius {candidate} degenerate for z = {z}; perturbing")
            continue
        return candidate
    raise DeformationConditionError(-1, f"no admissible radius near {r} for z = {z}")


@dataclass(frozen=True)
class Deformation:
    radius: float
    captured: tuple
    F_r: complex
    F_r_res: complex

    @property
    def total(self):
        return self.F_r + 2j * math.pi * self.F_r_res


def deform(space, symbol, z, cfg):
    """F_r and F_r_res at cfg.radius, perturbed off a degenerate membership test."""
    r = admissible_radius(space, z, cfg.radius)
    inner = cfg.with_radius(r)
    return Deformation(
        radius=r,
        captured=tuple(captured_indices(space, z, r)),
        F_r=F_r_of_z(space, symbol, z, inner),
        F_r_res=F_r_res(space, symbol, z, r),
    )


class ResidueEstimate(NamedTuple):
    value: complex
    scale: float
    nodes: int


def residue_estimate(fn, center, radius, nodes=64, max_nodes=4096, tol=1e-10, vectorized=False):
    """(1/2 pi i) times the integral of fn over the circle |zeta - center| = radius.

    The node count doubles, reusing earlier values, until two successive
    estimates agree to ``tol`` relative to ``scale`` = max|fn| * radius.
    """
    center = complex(center)

    def sample(offsets):
        points = center + radius * np.exp(1j * offsets)
        if vectorized:
            values = np.asarray(fn(points), dtype=complex)
        else:
            values = np.array([fn(p) for p in points], dtype=complex)
        return values * radius * np.exp(1j * offsets)

    theta = 2 * np.pi * np.arange(nodes) / nodes
    values = sample(theta)
    estimate = np.mean(values)
    scale = float(np.max(np.abs(values)))
    while True:
        if 2 * nodes > max_nodes:
            raise ResidueConvergenceError(
                f"residue at {center} did not settle with {max_nodes} nodes"
            )
        shifted = sample(theta + np.pi / nodes)
        refined = (estimate + np.mean(shifted)) / 2
        scale = max(scale, float(np.max(np.abs(shifted))))
        nodes *= 2
        theta = 2 * np.pi * np.arange(nodes) / nodes
        if abs(refined - estimate) <= tol * max(scale, 1e-300):
            return ResidueEstimate(complex(refined), scale, nodes)
        estimate = refined


def numerical_residue(fn, center, radius, nodes=64, max_nodes=4096, tol=1e-10, vectorized=False):
    return residue_estimate(fn, center, radius, nodes, max_nodes, tol, vectorized).value


def pole_positions(space, ell, z):
    """The four integrand poles +-w1(ell), +-i*w1(ell) inside the unit disk."""
    from .continuation import w1_plus

    w = w1_plus(space, ell, z)
    return (w, -w, 1j * w, -1j * w)


def F_r_res_numerical(space, symbol, z, r):
    """F_r_res from small-circle residues of the integrand at the captured poles."""
    z = complex(z)
    captured = captured_indices(space, z, r)
    if not captured:
        return 0j
    depth = captured[-1] + 3
    others = [0j]
    for ell in range(depth):
        poles = pole_positions(space, ell, z)
        others.extend(poles)
        others.extend(1 / p for p in poles)
    total = 0j
    for ell in captured:
        for pole in pole_positions(space, ell, z):
            gap = min(abs(pole - q) for q in others if abs(pole - q) > 1e-14)
            total += numerical_residue(
                lambda w: integrand(space, symbol, z, w), pole, 0.25 * gap, vectorized=True
            )
    return total
