from ...chebrep import GridFunction, read_function, write_grid_csv
from ...transform import Method
from ...utils import format_csv_rows
from ..base import BaseCommand


class Command(BaseCommand):
    help = "Apply the finite Hilbert transform T (or T^ with --hat) to a function file"

    def add_arguments(self, parser):
        parser.add_argument("input", help="SpectralFunction or GridFunction as JSON, or a node,value CSV grid")
        parser.add_argument("--hat", action="store_true", help="Apply T^(g) = -(1/w) T(w g) instead of T")
        parser.add_argument(
            "--method",
            choices=[method.value for method in Method],
            help="Evaluation path; spectral input defaults to its exact rule",
        )
        parser.add_argument("--points", help="chebyshev:N, uniform:N or a comma separated list of points")

    def handle(self, *args, **options):
        f = read_function(options["input"])
        result = self.backend.transform(f, hat=options["hat"], method=options["method"], points=options["points"])
        self.write_result(result, options)

    def render_csv(self, result):
        if isinstance(result.output, GridFunction):
            return write_grid_csv(result.output)
        return format_csv_rows(["index", "coeff"], enumerate(result.output.coeffs))
