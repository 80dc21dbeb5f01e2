import logging
from celery import chord, shared_task
from django.conf import settings
from django.db import OperationalError

from .emitters import format_rational, parse_rational, resonance_rows
from .exceptions import AtlasError
from .models import ResonanceTable, VerificationRun
from .resonances import block_count, merge_blocks
from .resonances import enumerate_block as lattice_block
from .rootdata import lookup_selector
from .verification import SUITE_NAMES, run_suite

logger = logging.getLogger(__name__)


@shared_task(bind=True, max_retries=3)
def run_verification(self, run_id: int):
    """
    Execute one stored verification run.

    Args:
        run_id: ID of the VerificationRun to execute

    Returns:
        dict: Outcome with status and largest error
    """
    try:
        run = VerificationRun.objects.get(id=run_id)
    except VerificationRun.DoesNotExist:
        logger.error(f"Verification run {run_id} not found")
        return {"error": "Verification run not found"}

    run.mark_running(self.request.id or "")
    try:
        spaces = [lookup_selector(run.space_selector)] if run.space_selector else None
        logger.info(f"Running suite {run.suite} for run {run_id}")
        report = run_suite(run.suite, spaces, seed=run.seed)
        run.mark_finished(report)

        result = {
            "run_id": run_id,
            "suite": run.suite,
            "passed": report.passed,
            "max_error": report.max_error,
            "checks": len(report.checks),
            "status": "success",
        }
        logger.info(f"Completed verification run {run_id}: {run.status}")
        return result

    except AtlasError as e:
        logger.error(f"Verification run {run_id} rejected: {e}")
        run.mark_error(e)
        return {"error": f"{type(e).__name__}: {e}"}

    except OperationalError as e:
        logger.error(f"Database error in verification run {run_id}: {e}")
        # Retry on database errors
        raise self.retry(countdown=60 * (self.request.retries + 1), exc=e)

    except Exception as e:
        logger.error(f"Unexpected error in verification run {run_id}: {e}")
        run.mark_error(e)
        return {"error": f"Unexpected error: {str(e)}"}


@shared_task(bind=True)
def schedule_verification_suites(self, selector: str = "", seed: int = None):
    """
    Create one verification run per suite and queue them.

    Args:
        selector: Catalog selector; empty runs each suite on its default spaces
        seed: Seed for randomized samples (default: ATLAS_DEFAULT_SEED)

    Returns:
        dict: Summary of the scheduled runs
    """
    try:
        if selector:
            lookup_selector(selector)
        seed = getattr(settings, "ATLAS_DEFAULT_SEED", 0) if seed is None else seed

        scheduled = []
        for suite in SUITE_NAMES:
            run = VerificationRun.objects.create(suite=suite, space_selector=selector, seed=seed)
            result = run_verification.delay(run.id)
            run.celery_task_id = result.id
            run.save(update_fields=["celery_task_id"])

            logger.info(f"Scheduled suite {suite} as run {run.id}")
            scheduled.append(
                {"run_id": run.id, "suite": suite, "task_id": result.id, "status": "scheduled"}
            )

        return {
            "message": f"Scheduled {len(scheduled)} verification suites",
            "scheduled_runs": scheduled,
            "status": "success",
        }

    except AtlasError as e:
        logger.error(f"Cannot schedule suites for {selector!r}: {e}")
        return {"error": f"{type(e).__name__}: {e}"}

    except Exception as e:
        logger.error(f"Error scheduling verification suites: {e}")
        return {"error": f"Error scheduling tasks: {str(e)}"}


@shared_task(bind=True)
def enumerate_block(self, selector: str, ell: int, max_radius_sq: str, b: float = 1.0):
    """
    Lattice points (q, ell, k) of one ell-row within the radius bound.

    Returns:
        list: [4|z|^2/b^2, ell, k] triples, ordered by k
    """
    space = lookup_selector(selector, b)
    return [list(point) for point in lattice_block(space, ell, max_radius_sq)]


@shared_task(bind=True)
def store_resonance_table(self, blocks, selector: str, max_radius_sq: str, b: float = 1.0):
    """
    Merge enumerated ell-blocks and store the resulting table.

    Args:
        blocks: Results of enumerate_block, in any order
        selector: Catalog selector of the space
        max_radius_sq: Exact radius bound as a string

    Returns:
        dict: ID and row count of the stored table
    """
    try:
        space = lookup_selector(selector, b)
        resonances = merge_blocks(space, blocks)
        table = ResonanceTable.create_from_rows(
            space, max_radius_sq, resonance_rows(space, resonances), self.request.id or ""
        )
        logger.info(f"Stored resonance table {table.id} for {selector}: {table.row_count} rows")
        return {"table_id": table.id, "row_count": table.row_count, "status": "success"}

    except Exception as e:
        logger.error(f"Error storing resonance table for {selector}: {e}")
        return {"error": f"Store error: {str(e)}"}


@shared_task(bind=True)
def build_resonance_table(self, selector: str, max_radius_sq: str, b: float = 1.0):
    """
    Enumerate resonances up to a radius bound, one task per ell-row.

    Args:
        selector: Catalog selector of the space
        max_radius_sq: Exact bound on |z|^2/b^2 (e.g. "40" or "125/2")
        b: Scale of the metric

    Returns:
        dict: Number of blocks and the task id of the merging callback
    """
    try:
        space = lookup_selector(selector, b)
        bound = format_rational(parse_rational(max_radius_sq))
        blocks = block_count(space, bound)

        if blocks == 0:
            table = ResonanceTable.create_from_rows(space, bound, [])
            logger.info(f"No resonances for {selector} below {bound}")
            return {"table_id": table.id, "blocks": 0, "status": "success"}

        header = [enumerate_block.s(space.label, ell, bound, b) for ell in range(blocks)]
        result = chord(header)(store_resonance_table.s(space.label, bound, b))
        logger.info(f"Scheduled {blocks} blocks for {selector} up to {bound}")
        return {"blocks": blocks, "task_id": result.id, "status": "scheduled"}

    except AtlasError as e:
        logger.error(f"Cannot build resonance table for {selector}: {e}")
        return {"error": f"{type(e).__name__}: {e}"}

    except Exception as e:
        logger.error(f"Error building resonance table for {selector}: {e}")
        return {"error": f"Unexpected error: {str(e)}"}
