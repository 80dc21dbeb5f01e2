from django.core.management.base import CommandError

from atlas.contour import symbol_by_name
from atlas.emitters import resonance_table
from atlas.resonances import enumerate_resonances

from ._base import EXIT_USAGE, AtlasCommand


class Command(AtlasCommand):
    help = "Enumerate resonances by radius and write the resonance table"

    def add_arguments(self, parser):
        self.add_space_argument(parser)
        bound = parser.add_mutually_exclusive_group(required=True)
        bound.add_argument(
            "--max-radius-sq", help="Exact bound on |z|^2/b^2, e.g. 40 or 125/2"
        )
        bound.add_argument("--count", type=int, help="Number of resonances")
        parser.add_argument(
            "--symbol",
            help="Add the closed-form residue column for this symbol (one, gauss, poly)",
        )
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        space = self.space(options)
        if options["count"] is not None and options["count"] < 0:
            raise CommandError("--count must be nonnegative", returncode=EXIT_USAGE)
        symbol = self.guard(symbol_by_name, options["symbol"]) if options["symbol"] else None
        resonances = self.guard(
            enumerate_resonances,
            space,
            max_radius_sq=options["max_radius_sq"],
            count=options["count"],
        )
        text = self.guard(
            resonance_table,
            space,
            resonances,
            bound=options["max_radius_sq"],
            fmt=options["format"],
            symbol=symbol,
        )
        self.emit(text, options["out"])
