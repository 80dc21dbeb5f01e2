"""Shared plumbing for the atlas management commands: options, output, exit codes."""

import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from atlas.emitters import FORMATS
from atlas.exceptions import AtlasError, ExcludedSpaceError
from atlas.rootdata import lookup_selector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 2
EXIT_USAGE = 3
EXIT_EXCLUDED = 4


def _usage_error(parser, message):
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {message}\n")
    raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


class AtlasCommand(BaseCommand):
    """Base command: argument errors exit with 3, library errors are mapped."""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = lambda message: _usage_error(parser, message)
        return parser

    def add_space_argument(self, parser, required=True):
        parser.add_argument(
            "--space",
            required=required,
            help="Catalog selector F[:p], e.g. DIII or CII:2",
        )
        parser.add_argument("--b", type=float, default=1.0, help="Scale of the metric")

    def add_output_arguments(self, parser):
        parser.add_argument("--format", choices=FORMATS, default="json")
        parser.add_argument("--out", help="Write to this file instead of stdout")

    def space(self, options):
        return self.guard(lookup_selector, options["space"], options["b"])

    def guard(self, fn, *args, **kwargs):
        """Call into the library, turning its errors into command errors."""
        try:
            return fn(*args, **kwargs)
        except ExcludedSpaceError as e:
            raise CommandError(str(e), returncode=EXIT_EXCLUDED) from e
        except AtlasError as e:
            raise CommandError(f"{type(e).__name__}: {e}", returncode=EXIT_USAGE) from e

    def emit(self, text, out=None):
        if out:
            Path(out).write_text(text if text.endswith("\n") else text + "\n")
            logger.info(f"wrote {out}")
        else:
            self.stdout.write(text.rstrip("\n"))
