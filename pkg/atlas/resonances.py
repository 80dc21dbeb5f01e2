"""
Exact enumeration of the resonances and their residue data.

A resonance sits at z = -i|z| with
    4|z|^2/b^2 = (A + 2 ell)^2 + (A + m_m + 2 ell + 2k)^2,  A = m_l + m_s/2,
for (ell, k) in Z_{>=0}^2. Radii are compared as integers only.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

from .contour import ContourConfig, _require_contour_space, residue_estimate
from .continuation import C_lm, F_tilde, SheetPoint, local_zeta, zeta_plus
from .exceptions import OutOfReachError, ParameterRangeError
from .rootdata import L_ell, dominant_representative, is_dominant, lambda_point, rho_data

logger = logging.getLogger(__name__)

# Poles whose relative residue exceeds this count as detected.
DETECTION_THRESHOLD = 1e-6


def _offsets(space):
    A = space.m_l + space.m_s // 2
    return A, A + space.m_m


def radius_sq4(space, ell, k):
    """4|z|^2/b^2 of the lattice point (ell, k)."""
    a, c = _offsets(space)
    return (a + 2 * ell) ** 2 + (c + 2 * ell + 2 * k) ** 2


def _branch_index(space, q):
    """j with 4 L_j^2/b^2 = q, or None."""
    root = math.isqrt(q)
    a, _ = _offsets(space)
    if root * root != q or root < a or (root - a) % 2:
        return None
    return (root - a) // 2


def _segment(space, q):
    """Largest j with 4 L_j^2/b^2 <= q."""
    a, _ = _offsets(space)
    return (math.isqrt(q) - a) // 2


@dataclass(frozen=True)
class Resonance:
    h: int
    radius_sq_times4: int
    members: tuple
    aliases: tuple
    N: int
    on_branch_radius: bool
    b: float = 1.0

    @property
    def radius_sq(self):
        """|z|^2/b^2, exact."""
        return Fraction(self.radius_sq_times4, 4)

    @property
    def abs_z(self):
        return self.b * math.sqrt(self.radius_sq_times4) / 2

    @property
    def location(self):
        return -1j * self.abs_z

    @property
    def sheet_multiplicity(self):
        return 2 ** (self.N + 1)


def _make_resonance(space, h, q, pairs):
    members = tuple(sorted(pairs))
    half = space.m_m // 2
    aliases = tuple((ell + half + k, ell) for ell, k in members)
    return Resonance(
        h=h,
        radius_sq_times4=q,
        members=members,
        aliases=aliases,
        N=_segment(space, q),
        on_branch_radius=_branch_index(space, q) is not None,
        b=space.b,
    )


def _bound4(max_radius_sq):
    try:
        bound = Fraction(str(max_radius_sq))
    except ValueError:
        raise ParameterRangeError(f"invalid radius bound {max_radius_sq!r}") from None
    return 4 * bound


def enumerate_resonances(space, max_radius_sq=None, count=None):
    """Resonances ordered by radius, up to an exact radius^2 bound or a count.

    Lattice points are drawn from a heap seeded with (0, 0); popping
    (ell, k) pushes (ell, k+1) and, when k = 0, (ell+1, 0), which visits
    every point once in nondecreasing radius.
    """
    _require_contour_space(space)
    if (max_radius_sq is None) == (count is None):
        raise ParameterRangeError("give exactly one of max_radius_sq and count")
    if count is not None and count < 0:
        raise ParameterRangeError(f"count must be nonnegative, got {count}")
    bound4 = _bound4(max_radius_sq) if max_radius_sq is not None else None

    heap = [(radius_sq4(space, 0, 0), 0, 0)]
    groups = []
    while heap:
        q = heap[0][0]
        if bound4 is not None and q > bound4:
            break
        if count is not None and len(groups) >= count:
            break
        pairs = []
        while heap and heap[0][0] == q:
            _, ell, k = heapq.heappop(heap)
            pairs.append((ell, k))
            heapq.heappush(heap, (radius_sq4(space, ell, k + 1), ell, k + 1))
            if k == 0:
                heapq.heappush(heap, (radius_sq4(space, ell + 1, 0), ell + 1, 0))
        groups.append((q, pairs))

    resonances = [_make_resonance(space, h, q, pairs) for h, (q, pairs) in enumerate(groups)]
    logger.debug(f"{space.label}: enumerated {len(resonances)} resonances")
    return resonances


def enumerate_block(space, ell, max_radius_sq):
    """The points (q, ell, k) of one ell-row with radius^2 within the bound."""
    _require_contour_space(space)
    bound4 = _bound4(max_radius_sq)
    block = []
    k = 0
    while True:
        q = radius_sq4(space, ell, k)
        if q > bound4:
            return block
        block.append((q, ell, k))
        k += 1


def block_count(space, max_radius_sq):
    """Number of ell-rows with at least one point within the bound."""
    _require_contour_space(space)
    bound4 = _bound4(max_radius_sq)
    ell = 0
    while radius_sq4(space, ell, 0) <= bound4:
        ell += 1
    return ell


def merge_blocks(space, blocks):
    """Deterministic merge of ell-blocks into ordered resonances."""
    points = sorted(tuple(p) for block in blocks for p in block)
    resonances = []
    for h, (q, group) in enumerate(groupby(points, key=lambda p: p[0])):
        resonances.append(_make_resonance(space, h, q, [(ell, k) for _, ell, k in group]))
    return resonances


def first_multiple_resonance(space, max_radius_sq=400):
    for resonance in enumerate_resonances(space, max_radius_sq=max_radius_sq):
        if len(resonance.members) > 1:
            return resonance
    return None


def resonance_at(space, h):
    if h < 0:
        raise ParameterRangeError(f"ordinal must be nonnegative, got {h}")
    return enumerate_resonances(space, count=h + 1)[h]


@dataclass(frozen=True)
class ResidueTerm:
    ell: int
    k: int
    m: int
    weight: float
    chain_weight: float
    lam: tuple
    sigma: complex


@dataclass(frozen=True)
class ResidueSummary:
    resonance: Resonance
    n: int
    eps: tuple
    terms: tuple
    chart_prefactor: float
    value: complex

    @property
    def resolvent_residue(self):
        """Residue of the resolvent's local expression: i*pi times the value."""
        return 1j * math.pi * self.value


def _check_reach(space, resonance, n):
    if resonance.on_branch_radius:
        j = _branch_index(space, resonance.radius_sq_times4)
        raise OutOfReachError(
            f"resonance h={resonance.h} sits at the branch radius L_{j}; no chart reaches it"
        )
    if n != resonance.N:
        raise OutOfReachError(
            f"resonance h={resonance.h} lies in segment {resonance.N}, not {n}"
        )


def residue_summary(space, symbol, h, n=None, eps=None):
    """Closed-form residue of F~ at the h-th resonance in the chart zeta_n.

    (8/pi) b L_n^2 / (|z|^3 sqrt(|z|^2 - L_n^2)) times
    sum over members of [eps_n eps_ell L_m C_{ell,m} + eps_n eps_m L_ell C_{m,ell}] sigma(lambda).
    """
    resonance = resonance_at(space, h)
    n = resonance.N if n is None else n
    _check_reach(space, resonance, n)
    eps = tuple(eps) if eps is not None else (1,) * (n + 1)
    if len(eps) < n + 1:
        raise ParameterRangeError(f"sheet vector needs at least {n + 1} signs, got {len(eps)}")

    V = resonance.abs_z
    L_n = L_ell(space, n)
    prefactor = 8 / math.pi * space.b * L_n**2 / (V**3 * math.sqrt(V**2 - L_n**2))
    half = space.m_m // 2
    terms = []
    total = 0j
    for ell, k in resonance.members:
        m = ell + half + k
        L, M = L_ell(space, ell), L_ell(space, m)
        lam = lambda_point(space, ell, ell + k)
        sigma = complex(symbol(float(lam.x1), float(lam.x2)))
        chain = eps[n] * eps[ell] * M * C_lm(space, ell, m) + eps[n] * eps[m] * L * C_lm(space, m, ell)
        total += prefactor * chain * sigma
        terms.append(
            ResidueTerm(
                ell=ell,
                k=k,
                m=m,
                weight=M / L**2 * C_lm(space, ell, m),
                chain_weight=prefactor * chain,
                lam=lam,
                sigma=sigma,
            )
        )
    return ResidueSummary(resonance, n, eps, tuple(terms), prefactor, total)


def _candidate_radii(space, N):
    """Every 4|z|^2/b^2 = 4(L_ell^2 + L_m^2)/b^2 below L_{N+1}^2, ell <= m."""
    a, _ = _offsets(space)
    limit = (a + 2 * (N + 1)) ** 2
    values = set()
    for ell in range(N + 1):
        for m in range(ell, N + 1):
            q = (a + 2 * ell) ** 2 + (a + 2 * m) ** 2
            if q < limit:
                values.add(q)
    return sorted(values)


def numerical_residue_at(space, symbol, q, N=None, eps=None, cfg=None, tol=1e-8):
    """Residue of F~ in the chart zeta_n at z = -i b sqrt(q)/2, from a small circle.

    n is the segment of |z|. Every other coordinate zeta_j follows its
    local branch through the sheet value eps_j zeta_j^+ at the pole.
    """
    _require_contour_space(space)
    cfg = cfg or ContourConfig()
    if _branch_index(space, q) is not None:
        raise OutOfReachError(f"4|z|^2/b^2 = {q} is a branch radius")
    n = _segment(space, q)
    N = n if N is None else N
    if N < n:
        raise OutOfReachError(f"segment {n} needs N >= {n}, got {N}")
    eps = tuple(eps) if eps is not None else (1,) * (N + 1)

    V = space.b * math.sqrt(q) / 2
    z0 = -1j * V
    L_n = L_ell(space, n)
    anchor = SheetPoint(z0, eps, tuple(e * zeta_plus(space, j, z0) for j, e in enumerate(eps)))
    center = anchor.zetas[n]

    # Keep the circle clear of branch points and of the other candidate poles.
    gaps = [abs(V - L_ell(space, j)) for j in range(N + 2)]
    gaps += [abs(V - space.b * math.sqrt(p) / 2) for p in _candidate_radii(space, N + 1) if p != q]
    delta_z = 0.25 * min(gaps)
    radius = delta_z * abs(L_n**2 / (z0**3 * center))

    def local(zeta):
        z = -1j * L_n / (zeta * zeta + 1) ** 0.5
        zetas = tuple(
            zeta if j == n else local_zeta(space, j, z, anchor.zetas[j]) for j in range(N + 1)
        )
        return F_tilde(space, symbol, SheetPoint(z, eps, zetas), n=n, cfg=cfg)

    return residue_estimate(local, center, radius, tol=tol)


@dataclass(frozen=True)
class PoleDetection:
    radius_sq: Fraction
    ratio: float
    detected: bool


@dataclass(frozen=True)
class DetectionReport:
    N: int
    scans: tuple
    detected: tuple
    enumerated: tuple

    @property
    def agree(self):
        return self.detected == self.enumerated


def detect_poles(space, symbol, N, eps=None, cfg=None):
    """Scan every candidate radius below L_{N+1} for a pole of F~ on the sheet eps."""
    _require_contour_space(space)
    scans = []
    for q in _candidate_radii(space, N):
        if _branch_index(space, q) is not None:
            logger.debug(f"{space.label}: skipping branch radius 4|z|^2/b^2 = {q}")
            continue
        estimate = numerical_residue_at(space, symbol, q, N=N, eps=eps, cfg=cfg)
        ratio = abs(estimate.value) / max(estimate.scale, 1e-300)
        scans.append(PoleDetection(Fraction(q, 4), ratio, ratio > DETECTION_THRESHOLD))
    a, _ = _offsets(space)
    limit = Fraction((a + 2 * (N + 1)) ** 2, 4)
    enumerated = tuple(
        r.radius_sq
        for r in enumerate_resonances(space, max_radius_sq=limit)
        if r.radius_sq < limit and not r.on_branch_radius
    )
    detected = tuple(s.radius_sq for s in scans if s.detected)
    return DetectionReport(N, tuple(scans), detected, enumerated)


@dataclass(frozen=True)
class FiniteDimWitness:
    finite: bool
    witness: tuple
    representative: tuple
    reduced: bool


def finite_dim_check(space, l1, l2):
    """Integrality of (w lambda(l1, l2) - rho) on beta1 and (beta2 - beta1)/2.

    lambda is replaced by its dominant Weyl representative first; the
    witness is ((lambda - rho)_beta1, (lambda - rho)_{(beta2-beta1)/2}).
    """
    lam = lambda_point(space, l1, l2)
    reduced = not is_dominant(lam)
    if reduced:
        lam = dominant_representative(lam)
    rd = rho_data(space)
    a = lam.x1 - rd.rho_b1
    c = (lam.x2 - rd.rho_b2) - a
    finite = all(Fraction(v).denominator == 1 and v >= 0 for v in (a, c))
    return FiniteDimWitness(finite, (a, c), lam, reduced)


def residue_operator_spectrum(space, h):
    """The spectral parameters lambda(ell, ell + k) of the members of S_h."""
    return [lambda_point(space, ell, ell + k) for ell, k in resonance_at(space, h).members]
