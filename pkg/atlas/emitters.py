"""
Row builders and CSV / JSON writers for catalog entries, densities,
resonance tables and continuation traces.

Rationals are always written as exact "num/den" strings; floats appear only
in convenience columns.
"""

import csv
import io
import json
from fractions import Fraction

from .continuation import C_lm
from .exceptions import ParameterRangeError
from .plancherel import compare_density
from .resonances import residue_summary
from .rootdata import L_ell, lambda_point, rho_data, SpectralPoint

RESONANCE_COLUMNS = ("h", "radius_sq", "abs_z_over_b", "members", "lambda", "weights", "aliases")

FORMATS = ("json", "csv")


def format_rational(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text):
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParameterRangeError(f"not a rational number: {text!r}") from None


def parse_lambda(text):
    """``"re,im,re,im"`` to a complex spectral point."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 4:
        raise ParameterRangeError(f"lambda needs four comma-separated numbers, got {text!r}")
    try:
        re1, im1, re2, im2 = (float(p) for p in parts)
    except ValueError:
        raise ParameterRangeError(f"lambda components must be numbers, got {text!r}") from None
    return SpectralPoint(complex(re1, im1), complex(re2, im2))


def _complex(value):
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def _parse_complex(value):
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return complex(float(value["re"]), float(value["im"]))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ValueError(value)


def parse_path(data):
    """Path input ``{"path": [...], "eps": [+-1, ...]}`` to (samples, eps).

    Samples may be ``[re, im]`` pairs, ``{"re": .., "im": ..}`` objects or
    strings such as ``"0.3-1.2j"``. ``data`` may also be the JSON text.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except ValueError as e:
            raise ParameterRangeError(f"path input is not valid JSON: {e}") from None
    if not isinstance(data, dict) or "path" not in data or "eps" not in data:
        raise ParameterRangeError('path input needs the keys "path" and "eps"')
    path, eps = data["path"], data["eps"]
    if not isinstance(path, list) or not path:
        raise ParameterRangeError("path must be a nonempty list of complex samples")
    if not isinstance(eps, list) or not eps:
        raise ParameterRangeError("eps must be a nonempty list of signs")
    try:
        samples = [_parse_complex(value) for value in path]
    except (TypeError, ValueError):
        raise ParameterRangeError(
            "path samples must be [re, im], {re, im} or complex strings"
        ) from None
    if any(e not in (1, -1) or isinstance(e, bool) for e in eps):
        raise ParameterRangeError(f"sheet signs must be +-1, got {eps}")
    return samples, tuple(eps)


def trace_rows(points):
    """One ``{z, eps, F_tilde}`` row per trace point; F_tilde is null when not evaluated."""
    return [
        {
            "z": _complex(point.z),
            "eps": list(point.eps),
            "F_tilde": None if point.value is None else _complex(point.value),
        }
        for point in points
    ]


def catalog_row(space):
    rd = rho_data(space)
    return {
        "family": space.family.value,
        "p": space.p,
        "group": space.group,
        "m_l": space.m_l,
        "m_m": space.m_m,
        "m_s": space.m_s,
        "hermitian": space.hermitian,
        "reduced": space.reduced,
        "rho_b1": format_rational(rd.rho_b1),
        "rho_b2": format_rational(rd.rho_b2),
        "rho_tilde_long": format_rational(rd.rho_tilde_long),
        "rho_tilde_mid": format_rational(rd.rho_tilde_mid),
        "L_sq_over_b2": format_rational(rd.L_sq_over_b2),
        "L_over_b": rd.L_over_b,
        "rho_norm_sq": format_rational(rd.rho_norm_sq),
        "continuation_excluded": space.continuation_excluded,
        "annotations": list(rd.table_annotations),
    }


def density_row(space, lam):
    comparison = compare_density(space, lam)
    parts = comparison.parts
    return {
        "space": space.label,
        "lambda": [_complex(lam.x1), _complex(lam.x2)],
        "direct": _complex(comparison.direct),
        "product": _complex(parts.product),
        "Pi": _complex(parts.Pi),
        "P": _complex(parts.P),
        "Q": _complex(parts.Q),
        "cot_roots": [root.value for root in parts.cot_roots],
        "rel_diff": comparison.rel_diff,
    }


def member_weight(space, ell, k):
    """(L_m / L_ell^2) C_{ell,m} with m = ell + m_m/2 + k."""
    m = ell + space.m_m // 2 + k
    return L_ell(space, m) / L_ell(space, ell) ** 2 * C_lm(space, ell, m)


def resonance_row(space, resonance, symbol=None):
    """One table row; with a symbol, also the closed-form residue of the row."""
    lams = [lambda_point(space, ell, ell + k) for ell, k in resonance.members]
    row = {
        "h": resonance.h,
        "radius_sq": format_rational(resonance.radius_sq),
        "abs_z_over_b": resonance.abs_z / space.b,
        "members": [list(pair) for pair in resonance.members],
        "lambda": [[format_rational(lam.x1), format_rational(lam.x2)] for lam in lams],
        "weights": [member_weight(space, ell, k) for ell, k in resonance.members],
        "aliases": [list(pair) for pair in resonance.aliases],
    }
    if symbol is not None:
        row["residue"] = (
            None
            if resonance.on_branch_radius
            else _complex(residue_summary(space, symbol, resonance.h).value)
        )
    return row


def resonance_rows(space, resonances, symbol=None):
    return [resonance_row(space, r, symbol) for r in resonances]


def _csv_cell(column, value):
    if column in ("members", "aliases", "lambda"):
        return "[" + ",".join(f"({a},{c})" for a, c in value) + "]"
    if column == "weights":
        return ";".join(repr(w) for w in value)
    if column == "abs_z_over_b":
        return repr(value)
    if column == "residue":
        return "" if value is None else repr(complex(value["re"], value["im"]))
    return value


def rows_to_csv(rows, columns=RESONANCE_COLUMNS):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({col: _csv_cell(col, row[col]) for col in columns})
    return buffer.getvalue()


def resonance_table(space, resonances, bound=None, fmt="json", symbol=None):
    """Serialized resonance table in ``fmt``; a symbol adds the residue column."""
    if fmt not in FORMATS:
        raise ParameterRangeError(f"unknown format {fmt!r}; use one of {', '.join(FORMATS)}")
    rows = resonance_rows(space, resonances, symbol)
    if fmt == "csv":
        columns = RESONANCE_COLUMNS + (("residue",) if symbol is not None else ())
        return rows_to_csv(rows, columns)
    payload = {
        "space": space.label,
        "b": space.b,
        "bound": None if bound is None else format_rational(parse_rational(bound)),
        "symbol": None if symbol is None else symbol.name,
        "rows": rows,
    }
    return json.dumps(payload, indent=2)


def to_json(payload):
    return json.dumps(payload, indent=2, default=str)
