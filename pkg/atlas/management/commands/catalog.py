from atlas.emitters import catalog_row, rows_to_csv, to_json
from atlas.rootdata import catalog, isomorphism_crosscheck

from ._base import AtlasCommand

CATALOG_COLUMNS = (
    "family",
    "p",
    "m_l",
    "m_m",
    "m_s",
    "hermitian",
    "reduced",
    "rho_b1",
    "rho_b2",
    "rho_tilde_long",
    "rho_tilde_mid",
    "L_sq_over_b2",
    "rho_norm_sq",
    "continuation_excluded",
)


class Command(AtlasCommand):
    help = "List the catalog of spaces with multiplicities and exact rho data"

    def add_arguments(self, parser):
        parser.add_argument(
            "--space", help="Show a single entry, e.g. DIII or CII:2"
        )
        parser.add_argument("--b", type=float, default=1.0, help="Scale of the metric")
        parser.add_argument(
            "--p", type=int, action="append", help="Parameter of the parametric families (repeatable)"
        )
        parser.add_argument(
            "--isomorphisms",
            action="store_true",
            help="Also report the low-rank isomorphism cross-check",
        )
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        if options["space"]:
            spaces = [self.space(options)]
        else:
            spaces = self.guard(catalog, p_values=options["p"], b=options["b"])
        rows = [catalog_row(space) for space in spaces]

        if options["format"] == "csv":
            self.emit(rows_to_csv(rows, CATALOG_COLUMNS), options["out"])
            return
        payload = {"entries": rows}
        if options["isomorphisms"]:
            payload["isomorphisms"] = isomorphism_crosscheck()
        self.emit(to_json(payload), options["out"])
