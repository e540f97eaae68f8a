from ...chebrep import read_function
from ..base import BaseCommand


class Command(BaseCommand):
    help = "Solve the airfoil equation T(f) = g, choosing the kernel component c"

    def add_arguments(self, parser):
        parser.add_argument("input", help="Right-hand side g as a function file")
        parser.add_argument(
            "--c",
            type=complex,
            default=0.0,
            help="Coefficient of the arcsine density in the solution (complex allowed, e.g. 1+2j)",
        )
        parser.add_argument(
            "--range-check",
            action="store_true",
            help="Report the in-range evidence for g instead of solving",
        )

    def handle(self, *args, **options):
        g = read_function(options["input"])
        if options["range_check"]:
            self.write_result(self.backend.range_check(g), options)
        else:
            self.write_result(self.backend.invert(g, options["c"]), options)
