import importlib
import pkgutil
import sys

from . import commands
from .base import BaseCommand, CommandError

PROG_NAME = "finhilbert"


def get_commands():
    """Command names, one per module in finhilbert.management.commands."""
    return sorted(name for _, name, is_pkg in pkgutil.iter_modules(commands.__path__) if not is_pkg)


def load_command_class(name):
    module = importlib.import_module(f"{commands.__name__}.{name}")
    return module.Command()


def execute_from_command_line(argv=None):
    """
    Dispatches `finhilbert <command> [options]`.

    Returns:
        int: The command's exit status.
    """
    argv = list(sys.argv if argv is None else argv)
    available = get_commands()
    if len(argv) < 2 or argv[1] in ("-h", "--help", "help"):
        sys.stdout.write(f"Usage: {PROG_NAME} <command> [options]\n\nCommands:\n")
        for name in available:
            sys.stdout.write(f"  {name:<10} {load_command_class(name).help}\n")
        return 0 if len(argv) >= 2 else 2
    subcommand = argv[1]
    if subcommand not in available:
        sys.stderr.write(f"Error: Unknown command {subcommand!r}; choose from {', '.join(available)}\n")
        return 2
    return load_command_class(subcommand).run_from_argv([PROG_NAME, *argv[1:]])


def main(argv=None):
    sys.exit(execute_from_command_line(argv))


__all__ = ["BaseCommand", "CommandError", "execute_from_command_line", "get_commands", "main"]
