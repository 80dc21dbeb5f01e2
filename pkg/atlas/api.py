from ninja import NinjaAPI, Schema
from ninja.errors import HttpError
from django.shortcuts import get_object_or_404
from typing import List, Optional
from datetime import datetime

from .continuation import trace_path
from .contour import ContourConfig, symbol_by_name
from .emitters import (
    catalog_row,
    density_row,
    format_rational,
    parse_path,
    parse_rational,
    resonance_rows,
    trace_rows,
)
from .exceptions import AtlasError, UnknownFamilyError
from .models import ResonanceTable, VerificationRun
from .resonances import enumerate_resonances
from .rootdata import SpectralPoint, catalog, lookup_selector
from .tasks import run_verification
from .verification import SUITE_NAMES


api = NinjaAPI(
    title="Resonance Atlas API",
    description="Plancherel densities, resonances and verification runs for rank-two Hermitian symmetric spaces",
)


@api.exception_handler(AtlasError)
def atlas_error(request, exc):
    status = 404 if isinstance(exc, UnknownFamilyError) else 400
    return api.create_response(
        request, {"detail": str(exc), "error": type(exc).__name__}, status=status
    )


class CatalogEntrySchema(Schema):
    family: str
    p: Optional[int] = None
    group: str
    m_l: int
    m_m: int
    m_s: int
    hermitian: bool
    reduced: bool
    rho_b1: str
    rho_b2: str
    rho_tilde_long: str
    rho_tilde_mid: str
    L_sq_over_b2: str
    L_over_b: float
    rho_norm_sq: str
    continuation_excluded: bool
    annotations: List[str] = []


class ComplexSchema(Schema):
    re: float
    im: float


class DensityRequestSchema(Schema):
    space: str
    spectral_point: List[float]
    b: float = 1.0


class DensitySchema(Schema):
    space: str
    direct: ComplexSchema
    product: ComplexSchema
    Pi: ComplexSchema
    P: ComplexSchema
    Q: ComplexSchema
    cot_roots: List[str]
    rel_diff: float


class ContinuationRequestSchema(Schema):
    space: str
    path: List[List[float]]
    eps: List[int]
    symbol: str = "one"
    b: float = 1.0
    with_values: bool = True


class TracePointSchema(Schema):
    z: ComplexSchema
    eps: List[int]
    F_tilde: Optional[ComplexSchema] = None


class ResonanceListSchema(Schema):
    space: str
    b: float
    max_radius_sq: Optional[str] = None
    rows: List[dict]


class ResonanceTableSchema(Schema):
    id: int
    space_selector: str
    b: float
    max_radius_sq: str
    row_count: int
    rows: List[dict]
    created_at: datetime


class VerificationRunSchema(Schema):
    id: int
    suite: str
    space_selector: str
    seed: int
    status: str
    max_error: Optional[float] = None
    report: dict
    error_message: str
    celery_task_id: str
    created_at: datetime
    started_at: Optional[datetime] = None
    finished_at: Optional[datetime] = None


class VerificationRunCreateSchema(Schema):
    suite: str
    space_selector: str = ""
    seed: int = 0


@api.get("/catalog", response=List[CatalogEntrySchema], tags=["Catalog"])
def list_catalog(request, p: Optional[int] = None):
    """List catalog entries, at one parameter p or at each family's smallest"""
    return [catalog_row(space) for space in catalog(p_values=None if p is None else [p])]


@api.get("/catalog/{selector}", response=CatalogEntrySchema, tags=["Catalog"])
def get_catalog_entry(request, selector: str):
    """Get one catalog entry by selector, e.g. DIII or CII:2"""
    return catalog_row(lookup_selector(selector))


@api.post("/density", response=DensitySchema, tags=["Plancherel"])
def evaluate_density(request, payload: DensityRequestSchema):
    """Evaluate the Plancherel density directly and in factored form"""
    if len(payload.spectral_point) != 4:
        raise HttpError(400, "spectral_point needs four numbers: re1, im1, re2, im2")
    re1, im1, re2, im2 = payload.spectral_point
    space = lookup_selector(payload.space, payload.b)
    return density_row(space, SpectralPoint(complex(re1, im1), complex(re2, im2)))


@api.post("/continuation", response=List[TracePointSchema], tags=["Continuation"])
def continue_path(request, payload: ContinuationRequestSchema):
    """Continue a sheet point along a sampled path; the trace starts at the seed"""
    space = lookup_selector(payload.space, payload.b)
    samples, eps = parse_path({"path": payload.path, "eps": payload.eps})
    points = trace_path(
        space,
        symbol_by_name(payload.symbol),
        samples,
        eps,
        with_values=payload.with_values,
        cfg=ContourConfig.from_settings(),
    )
    return trace_rows(points)


@api.get("/resonances", response=ResonanceListSchema, tags=["Resonances"])
def list_resonances(
    request,
    space: str,
    max_radius_sq: Optional[str] = None,
    count: Optional[int] = None,
    b: float = 1.0,
):
    """Enumerate resonances up to an exact radius bound or a count"""
    descriptor = lookup_selector(space, b)
    resonances = enumerate_resonances(descriptor, max_radius_sq=max_radius_sq, count=count)
    return {
        "space": descriptor.label,
        "b": descriptor.b,
        "max_radius_sq": None
        if max_radius_sq is None
        else format_rational(parse_rational(max_radius_sq)),
        "rows": resonance_rows(descriptor, resonances),
    }


@api.get("/resonance-tables", response=List[ResonanceTableSchema], tags=["Resonances"])
def list_resonance_tables(request, space: Optional[str] = None, limit: int = 50):
    """Get stored resonance tables, newest first"""
    tables = ResonanceTable.objects.all()
    if space:
        tables = tables.filter(space_selector=lookup_selector(space).label)
    return tables[:limit]


@api.get(
    "/verification-runs", response=List[VerificationRunSchema], tags=["Verification"]
)
def list_verification_runs(request, suite: Optional[str] = None, limit: int = 50):
    """Get recent verification runs"""
    runs = VerificationRun.objects.all()
    if suite:
        runs = runs.filter(suite=suite)
    return runs[:limit]


@api.get(
    "/verification-runs/{run_id}",
    response=VerificationRunSchema,
    tags=["Verification"],
)
def get_verification_run(request, run_id: int):
    """Get a specific verification run"""
    return get_object_or_404(VerificationRun, id=run_id)


@api.post("/verification-runs", response=VerificationRunSchema, tags=["Verification"])
def create_verification_run(request, payload: VerificationRunCreateSchema):
    """Queue a verification suite"""
    if payload.suite not in SUITE_NAMES:
        raise HttpError(400, f"unknown suite {payload.suite!r}")
    selector = ""
    if payload.space_selector:
        space = lookup_selector(payload.space_selector)
        if payload.suite != "plancherel" and space.continuation_excluded:
            raise HttpError(400, f"{space.label} is excluded from continuation")
        selector = space.label

    run = VerificationRun.objects.create(
        suite=payload.suite, space_selector=selector, seed=payload.seed
    )
    result = run_verification.delay(run.id)
    run.celery_task_id = result.id
    run.save(update_fields=["celery_task_id"])
    return run
