import logging

from django.conf import settings
from django.core.management.base import CommandError

from atlas.emitters import to_json
from atlas.models import VerificationRun
from atlas.verification import SUITE_NAMES, run_suite

from ._base import EXIT_VERIFICATION_FAILED, AtlasCommand

logger = logging.getLogger(__name__)


class Command(AtlasCommand):
    help = "Run verification suites; exits with 2 when a check fails"

    def add_arguments(self, parser):
        parser.add_argument(
            "--suite", choices=SUITE_NAMES + ("all",), default="all", help="Suite to run"
        )
        self.add_space_argument(parser, required=False)
        parser.add_argument(
            "--seed",
            type=int,
            default=None,
            help="Seed for randomized samples (default: ATLAS_DEFAULT_SEED)",
        )
        parser.add_argument(
            "--persist", action="store_true", help="Store each report as a VerificationRun"
        )
        parser.add_argument(
            "--format", choices=("text", "json"), default="text", help="Report format"
        )
        parser.add_argument("--out", help="Write the report to this file")

    def handle(self, *args, **options):
        seed = options["seed"]
        if seed is None:
            seed = getattr(settings, "ATLAS_DEFAULT_SEED", 0)
        spaces = [self.space(options)] if options["space"] else None
        names = SUITE_NAMES if options["suite"] == "all" else (options["suite"],)

        reports = []
        for name in names:
            report = self.guard(run_suite, name, spaces, seed=seed)
            reports.append(report)
            if options["persist"]:
                run = VerificationRun.objects.create(
                    suite=name,
                    space_selector=spaces[0].label if spaces else "",
                    seed=seed,
                )
                run.mark_finished(report)
                logger.info(f"stored verification run {run.id}")

        if options["format"] == "json":
            self.emit(to_json([r.as_dict() for r in reports]), options["out"])
        else:
            self.emit(self.summary(reports), options["out"])

        failed = [r.suite for r in reports if not r.passed]
        if failed:
            raise CommandError(
                f"verification failed: {', '.join(failed)}",
                returncode=EXIT_VERIFICATION_FAILED,
            )

    def summary(self, reports):
        lines = []
        for report in reports:
            verdict = "PASS" if report.passed else "FAIL"
            lines.append(f"{report.suite}: {verdict} (max error {report.max_error})")
            for check in report.checks:
                mark = "ok" if check.passed else "FAILED"
                error = "" if check.max_error is None else f" {check.max_error:.3e}"
                lines.append(f"  [{mark}] {check.space}: {check.name}{error}")
        return "\n".join(lines)
