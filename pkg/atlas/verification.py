"""
Verification suites: every closed form checked against an independent
numerical or exact oracle.

A suite returns a ``SuiteReport`` made of ``CheckResult``s. Thresholds come
from ``tolerances()``; setting RES_ATLAS_TOL replaces all of them.
"""

import cmath
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .continuation import (
    F_tilde,
    G_tilde_chart,
    G_tilde_ell,
    SheetPoint,
    cancellation_interval,
    chart_expression,
    circle_path,
    continue_along_path,
    residue_G_tilde,
    residue_circle_radius,
    segment_radius,
    zeta_lm,
    zeta_plus,
)
from .contour import (
    BUILTIN_SYMBOLS,
    ONE,
    ContourConfig,
    F_of_z,
    F_r_of_z,
    F_r_res,
    F_r_res_numerical,
    captured_indices,
    combine,
    psi_z,
    phi_z,
    residue_estimate,
    vartheta_z,
)
from .exceptions import AtlasError, ExcludedSpaceError, ParameterRangeError, UnknownFamilyError
from .plancherel import c_hc, factorization_identity_check, vartheta0
from .resonances import (
    detect_poles,
    enumerate_block,
    block_count,
    enumerate_resonances,
    finite_dim_check,
    merge_blocks,
    numerical_residue_at,
    radius_sq4,
    residue_operator_spectrum,
    residue_summary,
)
from .rootdata import (
    REFERENCE_SELECTORS,
    L_ell,
    L_ell_over_b,
    catalog,
    isomorphism_crosscheck,
    is_dominant,
    lookup_selector,
    rho_data,
    rho_point,
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = {
    "normalization": 1e-11,
    "factorization": 1e-10,
    "symmetry": 1e-11,
    "evenness": 1e-10,
    "linearity": 1e-10,
    "deformation": 1e-8,
    "residue": 1e-8,
    "resonance_residue": 1e-7,
    "cancellation": 1e-10,
    "monodromy": 1e-8,
    "defining_equation": 1e-12,
}

SUITE_NAMES = (
    "plancherel",
    "symmetry",
    "deformation",
    "residues",
    "cancellation",
    "enumeration",
    "monodromy",
)


def tolerances():
    """Pass thresholds, all replaced by RES_ATLAS_TOL when it is set."""
    override = None
    try:
        from django.conf import settings

        if settings.configured:
            override = getattr(settings, "RES_ATLAS_TOL", None)
    except ImportError:
        override = None
    if override in (None, ""):
        return dict(DEFAULT_TOLERANCES)
    value = float(override)
    return {name: value for name in DEFAULT_TOLERANCES}


@dataclass
class CheckResult:
    name: str
    space: str
    passed: bool
    max_error: float = None
    threshold: float = None
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def max_error(self):
        errors = [c.max_error for c in self.checks if c.max_error is not None]
        return max(errors) if errors else None

    def record(self, name, space, error=None, threshold=None, passed=None, detail=""):
        if passed is None:
            passed = error is not None and math.isfinite(error) and error < threshold
        check = CheckResult(name, str(space), bool(passed), error, threshold, detail)
        self.checks.append(check)
        if not check.passed:
            logger.info(f"{self.suite}: {name} failed on {space}: {error} ({detail})")
        return check

    def as_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "max_error": self.max_error,
            "checks": [asdict(c) for c in self.checks],
        }


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def _label(space):
    return space.label


def default_spaces(suite):
    if suite == "plancherel":
        return catalog(p_values=[2, 3, 4, 5, 6])
    return [lookup_selector(s) for s in REFERENCE_SELECTORS]


def plancherel_suite(report, spaces, rng, tol, samples=100):
    for space in spaces:
        rho = rho_point(space)
        report.record(
            "c_hc(rho) = 1", _label(space), abs(c_hc(space, rho) - 1), tol["normalization"]
        )
        check = factorization_identity_check(space, samples=samples, seed=int(rng.integers(2**31)))
        report.record(
            "direct vs factored density",
            _label(space),
            check.max_rel_error,
            tol["factorization"],
            detail="product form checked" if check.product_form_checked else "Pi*P*Q only",
        )
    crosscheck = isomorphism_crosscheck()
    report.record("low-rank isomorphisms", "catalog", passed=crosscheck["all_agree"])


def _cot_distance(space, x):
    u = 1j * x / space.b - float(rho_data(space).rho_tilde_long)
    return abs(u.real - round(u.real)) + abs(u.imag)


def _random_zw(space, rng, count):
    """Random (z, w) with every cotangent argument away from its poles."""
    pairs = []
    while len(pairs) < count:
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        w = rng.uniform(0.6, 1.6) * cmath.exp(2j * math.pi * rng.uniform())
        c, cm = (w + 1 / w) / 2, (-1j * w + 1j / w) / 2
        if abs(z) < 0.2 or min(_cot_distance(space, z * c), _cot_distance(space, z * cm)) < 1e-2:
            continue
        pairs.append((z, w))
    return pairs


def symmetry_suite(report, spaces, rng, tol, samples=200, evenness_points=20, cfg=None):
    cfg = cfg or ContourConfig.from_settings()
    for space in spaces:
        pairs = _random_zw(space, rng, samples)
        worst_theta, worst_phi = 0.0, 0.0
        for z, w in pairs:
            t = vartheta_z(space, z, w)
            worst_theta = max(
                worst_theta,
                _rel(vartheta_z(space, -z, w), t),
                _rel(vartheta_z(space, z, -w), t),
                _rel(vartheta_z(space, z, 1j * w), t),
            )
            f = phi_z(space, z, w)
            worst_phi = max(
                worst_phi,
                _rel(phi_z(space, -z, w), f),
                _rel(phi_z(space, z, -w), -f),
                _rel(phi_z(space, z, 1j * w), -1j * f),
            )
        report.record("vartheta symmetries", _label(space), worst_theta, tol["symmetry"])
        report.record("phi symmetries", _label(space), worst_phi, tol["symmetry"])

        for symbol in BUILTIN_SYMBOLS.values():
            worst = 0.0
            for z, w in pairs:
                p = psi_z(space, symbol, z, w)
                worst = max(
                    worst,
                    _rel(psi_z(space, symbol, -z, w), p),
                    _rel(psi_z(space, symbol, z, -w), p),
                    _rel(psi_z(space, symbol, z, 1j * w), p),
                )
                x1, x2 = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
                s = complex(symbol(x1, x2))
                worst = max(
                    worst,
                    _rel(complex(symbol(-x1, x2)), s),
                    _rel(complex(symbol(x1, -x2)), s),
                    _rel(complex(symbol(x2, x1)), s),
                )
            report.record(f"psi symmetries ({symbol.name})", _label(space), worst, tol["symmetry"])

        worst_even = 0.0
        L0 = rho_data(space).L
        for _ in range(evenness_points):
            z = complex(rng.uniform(0.3, 2.0) * L0, rng.uniform(-0.8, 0.8) * L0)
            worst_even = max(
                worst_even, _rel(F_of_z(space, ONE, z, cfg), F_of_z(space, ONE, -z, cfg))
            )
        report.record("F(z) = F(-z)", _label(space), worst_even, tol["evenness"])

        z = complex(0.7, -0.4) * L0
        a = 0.37
        mixed = combine((a, BUILTIN_SYMBOLS["gauss"]), (1.0, BUILTIN_SYMBOLS["poly"]))
        lhs = F_of_z(space, mixed, z, cfg)
        rhs = a * F_of_z(space, BUILTIN_SYMBOLS["gauss"], z, cfg) + F_of_z(
            space, BUILTIN_SYMBOLS["poly"], z, cfg
        )
        report.record("F linear in the symbol", _label(space), _rel(lhs, rhs), tol["linearity"])


def _segment_points(space, n, rng, count):
    """z = x - iv with v inside the segment [L_n, L_{n+1}) and a small real part."""
    lower = 0.35 * L_ell(space, 0) if n < 0 else L_ell(space, n)
    upper = L_ell(space, n + 1) if n >= 0 else L_ell(space, 0)
    margin = 0.15 * (upper - lower)
    return [
        complex(rng.uniform(0.15, 0.3) * space.b, -rng.uniform(lower + margin, upper - margin))
        for _ in range(count)
    ]


def deformation_suite(report, spaces, rng, tol, segments=(-1, 0, 1, 2), points=10, cfg=None):
    cfg = cfg or ContourConfig.from_settings()
    for space in spaces:
        for n in segments:
            worst_identity, worst_oracle, wrong_sets = 0.0, 0.0, 0
            for z in _segment_points(space, n, rng, points):
                r = segment_radius(space, z, n)
                if captured_indices(space, z, r) != list(range(n + 1)):
                    wrong_sets += 1
                F = F_of_z(space, ONE, z, cfg)
                F_r = F_r_of_z(space, ONE, z, cfg.with_radius(r))
                res = F_r_res(space, ONE, z, r)
                res_num = F_r_res_numerical(space, ONE, z, r)
                scale = max(abs(F), abs(F_r), abs(2j * math.pi * res))
                worst_identity = max(worst_identity, abs(F - F_r - 2j * math.pi * res) / scale)
                worst_oracle = max(worst_oracle, _rel(res, res_num))
            where = f"{_label(space)} n={n}"
            report.record("F = F_r + 2 pi i F_r,res", where, worst_identity, tol["deformation"])
            report.record("G_ell sum vs pole residues", where, worst_oracle, tol["deformation"])
            report.record("captured set is [[0, n]]", where, passed=wrong_sets == 0)


def residues_suite(report, spaces, rng, tol, ells=4, per_ell=3, cfg=None):
    cfg = cfg or ContourConfig.from_settings()
    for space in spaces:
        worst, worst_chart, positive = 0.0, 0.0, True
        for ell in range(ells):
            valid = [m for m in range(ell + 20) if m not in cancellation_interval(space, ell)]
            for m in valid[:per_ell]:
                for sign in (-1, 1):
                    closed = residue_G_tilde(space, ONE, ell, m, sign)
                    positive = positive and closed.C_lm > 0
                    radius = residue_circle_radius(space, ell, m)
                    numeric = residue_estimate(
                        lambda zeta: chart_expression(space, ONE, ell, zeta, sign),
                        closed.zeta,
                        radius,
                        vectorized=True,
                    ).value
                    worst = max(worst, _rel(closed.value, numeric))
                    for zeta in closed.zeta + radius * np.exp(2j * np.pi * np.arange(4) / 4 + 0.3j):
                        worst_chart = max(
                            worst_chart,
                            _rel(
                                chart_expression(space, ONE, ell, zeta, sign),
                                G_tilde_chart(space, ONE, ell, zeta, sign),
                            ),
                        )
        report.record("chart residues closed vs numerical", _label(space), worst, tol["residue"])
        report.record(
            "chart expression vs substitution", _label(space), worst_chart, tol["residue"]
        )
        report.record("C_lm > 0", _label(space), passed=positive)

        h = next(r.h for r in enumerate_resonances(space, count=5) if not r.on_branch_radius)
        summary = residue_summary(space, ONE, h)
        estimate = numerical_residue_at(space, ONE, summary.resonance.radius_sq_times4, cfg=cfg)
        where = f"{_label(space)} h={h}"
        report.record(
            "resonance residue closed vs numerical",
            where,
            _rel(summary.value, estimate.value),
            tol["resonance_residue"],
        )
        report.record(
            "residue weights positive", where, passed=all(t.weight > 0 for t in summary.terms)
        )


def cancellation_suite(report, spaces, rng, tol, ells=5, max_m=12):
    for space in spaces:
        mismatched = []
        worst = 0.0
        for ell in range(ells):
            zero_set = {
                m
                for m in range(max_m + 1)
                if vartheta0(space, L_ell_over_b(space, ell), L_ell_over_b(space, m)) == 0
            }
            expected = set(cancellation_interval(space, ell)) & set(range(max_m + 1))
            if zero_set != expected:
                mismatched.append(ell)
            for m in sorted(zero_set):
                estimate = residue_estimate(
                    lambda zeta: chart_expression(space, ONE, ell, zeta, -1),
                    zeta_lm(space, ell, m),
                    residue_circle_radius(space, ell, m),
                    vectorized=True,
                )
                worst = max(worst, abs(estimate.value) / max(estimate.scale, 1e-300))
        report.record(
            "exact vanishing set",
            _label(space),
            passed=not mismatched,
            detail=f"mismatch at ell in {mismatched}" if mismatched else "",
        )
        report.record("no residue on the vanishing set", _label(space), worst, tol["cancellation"])


def _brute_force(space, max_radius_sq):
    bound4 = 4 * Fraction(max_radius_sq)
    groups = {}
    ell = 0
    while radius_sq4(space, ell, 0) <= bound4:
        k = 0
        while radius_sq4(space, ell, k) <= bound4:
            groups.setdefault(radius_sq4(space, ell, k), []).append((ell, k))
            k += 1
        ell += 1
    return [(q, tuple(sorted(pairs))) for q, pairs in sorted(groups.items())]


def enumeration_suite(report, spaces, rng, tol, max_radius_sq=400, sweep=30, detect_N=3, cfg=None):
    cfg = cfg or ContourConfig.from_settings()
    for space in spaces:
        resonances = enumerate_resonances(space, max_radius_sq=max_radius_sq)
        first = resonances[0]
        report.record(
            "first radius^2 = <rho, rho>",
            _label(space),
            passed=first.radius_sq == rho_data(space).rho_norm_sq,
            detail=f"{first.radius_sq}",
        )
        listed = [(r.radius_sq_times4, r.members) for r in resonances]
        report.record("heap vs brute force", _label(space), passed=listed == _brute_force(space, max_radius_sq))

        blocks = [enumerate_block(space, ell, max_radius_sq) for ell in range(block_count(space, max_radius_sq))]
        merged = [(r.radius_sq_times4, r.members) for r in merge_blocks(space, blocks)]
        report.record("block merge vs heap", _label(space), passed=merged == listed)

        distinct = True
        for resonance in resonances[:sweep]:
            ells = [ell for ell, _ in resonance.members]
            spectrum = residue_operator_spectrum(space, resonance.h)
            distinct = distinct and len(set(ells)) == len(ells)
            distinct = distinct and len(set(spectrum)) == len(spectrum)
            distinct = distinct and all(is_dominant(lam) for lam in spectrum)
            distinct = distinct and all(
                finite_dim_check(space, ell, ell + k).finite
                for ell, k in resonance.members
            )
        report.record("members distinct, dominant, integral", _label(space), passed=distinct)

        if space.label == "DIII":
            detection = detect_poles(space, ONE, detect_N, cfg=cfg)
            report.record(
                "detected poles = enumerated resonances",
                _label(space),
                passed=detection.agree,
                detail=f"detected {[str(v) for v in detection.detected]}",
            )


def monodromy_suite(report, spaces, rng, tol, ells=4, cfg=None):
    cfg = cfg or ContourConfig.from_settings()
    for space in spaces:
        N = ells
        for ell in range(ells):
            center = -1j * L_ell(space, ell)
            radius = 0.4 * space.b
            start_angle = math.pi / 8
            z0 = center + radius * cmath.exp(1j * start_angle)
            start = SheetPoint.principal(space, z0, N)
            once = continue_along_path(
                space, ONE, start, circle_path(center, radius, start_angle=start_angle),
                with_values=False, cfg=cfg,
            )
            expected = tuple(-e if j == ell else e for j, e in enumerate(start.eps))
            twice = continue_along_path(
                space, ONE, start,
                circle_path(center, radius, turns=2, start_angle=start_angle),
                with_values=False, cfg=cfg,
            )
            where = f"{_label(space)} ell={ell}"
            report.record("loop flips eps_ell only", where, passed=once.end.eps == expected)
            report.record("double loop restores the sheet", where, passed=twice.end.eps == start.eps)
            report.record(
                "defining equations along the loop", where, once.end.residual(space),
                tol["defining_equation"],
            )

            direct = SheetPoint.on_sheet(space, z0, expected)
            continued_value = F_tilde(space, ONE, once.end, cfg=cfg)
            direct_value = F_tilde(space, ONE, direct, cfg=cfg)
            plus = zeta_plus(space, ell, z0)
            jump = 8j * math.pi * (
                G_tilde_ell(space, ONE, ell, z0, -plus) - G_tilde_ell(space, ONE, ell, z0, plus)
            )
            F = F_of_z(space, ONE, z0, cfg)
            report.record(
                "continued F~ vs direct sheet", where, _rel(continued_value, direct_value), tol["monodromy"]
            )
            report.record(
                "F~ - F equals the sheet jump",
                where,
                abs(continued_value - F - jump) / max(abs(continued_value), abs(F), abs(jump)),
                tol["monodromy"],
            )


SUITES = {
    "plancherel": plancherel_suite,
    "symmetry": symmetry_suite,
    "deformation": deformation_suite,
    "residues": residues_suite,
    "cancellation": cancellation_suite,
    "enumeration": enumeration_suite,
    "monodromy": monodromy_suite,
}


def run_suite(name, spaces=None, seed=0, **options):
    """Run one suite on ``spaces`` (default: the suite's own list)."""
    if name not in SUITES:
        raise ParameterRangeError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    spaces = list(spaces) if spaces is not None else default_spaces(name)
    if name != "plancherel":
        excluded = [s for s in spaces if s.continuation_excluded]
        if excluded:
            raise ExcludedSpaceError(
                f"{', '.join(s.label for s in excluded)}: odd p is excluded from continuation"
            )
    report = SuiteReport(name, seed)
    rng = np.random.default_rng(seed)
    logger.info(f"running suite {name} on {[s.label for s in spaces]} (seed {seed})")
    try:
        SUITES[name](report, spaces, rng, tolerances(), **options)
    except (ExcludedSpaceError, ParameterRangeError, UnknownFamilyError):
        raise
    except AtlasError as e:
        logger.error(f"suite {name} aborted: {type(e).__name__}: {e}")
        where = ", ".join(_label(s) for s in spaces)
        report.record(
            "suite ran to completion", where, passed=False, detail=f"{type(e).__name__}: {e}"
        )
    logger.info(f"suite {name}: {'pass' if report.passed else 'FAIL'}, max error {report.max_error}")
    return report


def run_suites(names, spaces=None, seed=0):
    return [run_suite(name, spaces, seed) for name in names]
