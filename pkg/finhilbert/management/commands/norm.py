from ...chebrep import read_function
from ...utils import format_csv_rows
from ..base import BaseCommand


class Command(BaseCommand):
    help = "Rearrangement-invariant norms of a function: L^1, L log L and more"

    def add_arguments(self, parser):
        parser.add_argument("input", help="Function file")
        parser.add_argument(
            "--space",
            default="llogl",
            help="Comma separated extras: lp:P, weak:P, alpha:A (l1, llogl, lloglsq are always reported)",
        )

    def handle(self, *args, **options):
        f = read_function(options["input"])
        self.write_result(self.backend.norm(f, options["space"]), options)

    def render_csv(self, result):
        rows = [(name, value) for name, value in (("l1", result.l1), ("llogl", result.llogl), ("lloglsq", result.lloglsq))]
        for prefix, values in (("lp", result.lp), ("weak", result.weak_quasi), ("alpha", result.alphas)):
            rows += [(f"{prefix}:{key!r}", value) for key, value in values.items()]
        return format_csv_rows(
            ["space", "value", "coarse", "growing"],
            ((name, value.value, value.coarse, value.growing) for name, value in rows),
        )
