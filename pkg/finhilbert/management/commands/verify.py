import logging

from ...results import reports_csv, reports_json
from ...utils import write_text
from ..base import BaseCommand

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Run verification suites; exit status 1 when any case fails"

    def add_arguments(self, parser):
        parser.add_argument(
            "--suite",
            action="append",
            help="Suite name, repeatable, or all (default)",
        )
        parser.add_argument("--report", help="Report path (same as --output)")

    def handle(self, *args, **options):
        names = options["suite"] or ["all"]
        reports = self.backend.verify(names)
        if self.backend.output_format == "csv":
            text = reports_csv(reports)
        else:
            text = reports_json(reports)
        path = options["report"] or options["output"]
        if path is None:
            self.stdout.write(text)
        else:
            write_text(path, text)
        failed = [report.suite for report in reports if not report.passed]
        for report in reports:
            summary = report.summary
            logger.info("%s: %d passed, %d failed", report.suite, summary["n_pass"], summary["n_fail"])
        if failed:
            self.stderr.write(f"Failed: {', '.join(failed)}\n")
            return 1
        return 0
