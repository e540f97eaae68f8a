"""
Command framework: each command is a `Command(BaseCommand)` class in
`finhilbert.management.commands`, with `help`, `add_arguments` and
`handle`, sharing one set of global flags and one backend.
"""
import argparse
import logging
import sys
import time

import arrow

from ..backend import HilbertBackend, load_config
from ..errors import FinHilbertError
from ..settings import OUTPUT_FORMATS
from ..utils import dump_json, write_text


class CommandError(FinHilbertError):
    """A failure reported to the user; `returncode` becomes the exit status."""

    def __init__(self, message, returncode=2):
        super().__init__(message)
        self.returncode = returncode


class BaseCommand:
    help = ""

    def __init__(self, stdout=None, stderr=None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.backend = None

    def create_parser(self, prog_name, subcommand):
        parser = argparse.ArgumentParser(prog=f"{prog_name} {subcommand}", description=self.help)
        parser.add_argument("--config", help="TOML config file (default: $FINHILBERT_CONFIG)")
        parser.add_argument("--resolution", type=int, help="Cells of the uniform partition")
        parser.add_argument("--seed", type=int, help="Seed for generated cases")
        parser.add_argument("--output", help="Write the result here instead of standard output")
        parser.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format")
        parser.add_argument("--workers", type=int, help="Threads for case evaluation")
        parser.add_argument("--verbose", action="store_true", help="Log progress")
        self.add_arguments(parser)
        return parser

    def add_arguments(self, parser):
        pass

    def get_backend(self, options):
        params = load_config(options.get("config"))
        overrides = {
            "RESOLUTION": options.get("resolution"),
            "SEED": options.get("seed"),
            "OUTPUT_FORMAT": options.get("format"),
            "WORKERS": options.get("workers"),
        }
        params |= {key: value for key, value in overrides.items() if value is not None}
        return HilbertBackend(params)

    def run_from_argv(self, argv):
        """
        Parses argv (program name and subcommand first) and runs the command.

        Returns:
            int: 0 on success, 1 for a failed verification, 2 for usage and
            library errors.
        """
        parser = self.create_parser(argv[0], argv[1])
        try:
            options = vars(parser.parse_args(argv[2:]))
        except SystemExit as err:
            return 0 if err.code is None else err.code
        logging.basicConfig(level=logging.INFO if options["verbose"] else logging.WARNING)
        try:
            return self.execute(**options)
        except CommandError as err:
            self.stderr.write(f"Error: {err}\n")
            return err.returncode
        except FinHilbertError as err:
            self.stderr.write(f"Error: {err}\n")
            return 2

    def execute(self, *args, **options):
        self.backend = self.get_backend(options)
        # the banner would corrupt a result written to standard output
        target = options.get("output") or options.get("report")
        banner = target is not None
        started = arrow.utcnow()
        clock = time.perf_counter()
        if banner:
            self.stdout.write("*" * 80 + "\n")
            self.stdout.write(f"{self.help}\n")
            self.stdout.write(f"Started: {started.format('YYYY-MM-DD HH:mm:ss')}\n")
        returncode = self.handle(*args, **options) or 0
        if banner:
            self.stdout.write(f"Wrote {target} in {time.perf_counter() - clock:.2f}s\n")
            self.stdout.write("*" * 80 + "\n")
        return returncode

    def handle(self, *args, **options):
        raise NotImplementedError("subclasses of BaseCommand must provide a handle() method")

    def render_csv(self, result):
        msg = f"CSV output is not available for {type(result).__name__}; use --format json"
        raise CommandError(msg)

    def write_result(self, result, options):
        """Serialises `result` in the configured format to --output or standard output."""
        if self.backend.output_format == "csv":
            text = self.render_csv(result)
        else:
            text = dump_json(result)
        if options.get("output") is None:
            self.stdout.write(text)
        else:
            write_text(options["output"], text)
        return text
