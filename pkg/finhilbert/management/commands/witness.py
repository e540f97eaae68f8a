from ...results import reports_csv
from ..base import BaseCommand, CommandError


class Command(BaseCommand):
    help = "Reproduce a counterexample computation: kober, arcsine or range-gap"

    def add_arguments(self, parser):
        parser.add_argument("--case", required=True, help="Witness name")

    def handle(self, *args, **options):
        name = options["case"]
        if name not in self.backend.witnesses:
            msg = f"Unknown witness {name!r}; choose from {', '.join(sorted(self.backend.witnesses))}"
            raise CommandError(msg)
        report = self.backend.witness(name)
        self.write_result(report, options)
        return 0 if report.passed else 1

    def render_csv(self, result):
        return reports_csv([result])
