"""
Subcommands of the `crossdep` command line.

Every module exposes `setup_parser(parser)` to add its arguments and `handler(args)` which
prints to stdout and returns the process exit code. The module docstring is the help text.
"""
import argparse
from pathlib import Path

from crossdep import config

COMMANDS = ["validate", "tree", "paths", "requirements", "predict", "simulate"]


def positive_integer(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("'{0}' is not an integer.".format(text))
    if value <= 0:
        raise argparse.ArgumentTypeError("'{0}' must be positive.".format(text))
    return value


def non_negative_integer(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("'{0}' is not an integer.".format(text))
    if value < 0:
        raise argparse.ArgumentTypeError("'{0}' must not be negative.".format(text))
    return value


def slot_length(text: str) -> int:
    value = positive_integer(text)
    if config.MINUTES_PER_DAY % value:
        raise argparse.ArgumentTypeError("'{0}' does not divide a day of {1} minutes.".format(text, config.MINUTES_PER_DAY))
    return value


def fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("'{0}' is not a number.".format(text))
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("'{0}' must lie in [0, 1].".format(text))
    return value


def add_seeds_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seeds", type=Path, default=None,
                        help="Seed directory (default: $CROSSDEP_SEEDS or the packaged seeds).")


def add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--slot", type=slot_length, default=config.SLOT_MINUTES,
                        help="Slot length in minutes, a divisor of 1440 (default: %(default)s).")
    parser.add_argument("--theta", type=fraction, default=config.THRESHOLD,
                        help="Occupancy frequency threshold in [0, 1] (default: %(default)s).")
