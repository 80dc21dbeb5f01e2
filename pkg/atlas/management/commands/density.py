from atlas.emitters import density_row, parse_lambda, to_json

from ._base import AtlasCommand


class Command(AtlasCommand):
    help = "Evaluate the Plancherel density at a complex spectral point"

    def add_arguments(self, parser):
        self.add_space_argument(parser)
        parser.add_argument(
            "--lambda",
            dest="spectral_point",
            required=True,
            help="re1,im1,re2,im2 of lambda = x1 beta1 + x2 beta2",
        )
        parser.add_argument("--out", help="Write to this file instead of stdout")

    def handle(self, *args, **options):
        space = self.space(options)
        lam = self.guard(parse_lambda, options["spectral_point"])
        row = self.guard(density_row, space, lam)
        self.emit(to_json(row), options["out"])
