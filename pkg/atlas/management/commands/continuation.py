import sys
from pathlib import Path

from django.core.management.base import CommandError

from atlas.continuation import trace_path
from atlas.contour import ContourConfig, symbol_by_name
from atlas.emitters import parse_path, to_json, trace_rows

from ._base import EXIT_USAGE, AtlasCommand


class Command(AtlasCommand):
    help = "Continue a point of the sheet cover along a sampled path and write the trace"

    def add_arguments(self, parser):
        self.add_space_argument(parser)
        parser.add_argument(
            "--path",
            required=True,
            help='JSON file {"path": [[re, im], ...], "eps": [1, -1, ...]}, or - for stdin',
        )
        parser.add_argument("--symbol", default="one", help="Spectral symbol (one, gauss, poly)")
        parser.add_argument(
            "--no-values", action="store_true", help="Track sheets only, without F~ values"
        )
        parser.add_argument("--out", help="Write to this file instead of stdout")

    def handle(self, *args, **options):
        space = self.space(options)
        symbol = self.guard(symbol_by_name, options["symbol"])
        samples, eps = self.guard(parse_path, self.read_path(options["path"]))
        points = self.guard(
            trace_path,
            space,
            symbol,
            samples,
            eps,
            with_values=not options["no_values"],
            cfg=ContourConfig.from_settings(),
        )
        self.emit(to_json(trace_rows(points)), options["out"])

    def read_path(self, source):
        if source == "-":
            return sys.stdin.read()
        try:
            return Path(source).read_text()
        except OSError as e:
            raise CommandError(f"cannot read {source}: {e}", returncode=EXIT_USAGE) from e
