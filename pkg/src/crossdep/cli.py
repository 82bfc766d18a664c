"""
Command line of crossdep.

    crossdep validate FILE...
    crossdep tree FILE [--root QID] [--depth N]
    crossdep paths --from QID --to QID [--max-len N]
    crossdep requirements (--stakeholder S | --concept QID [--descendants])
    crossdep predict --scenario FILE --room ROOM --at MIN
    crossdep simulate --scenario FILE [--rules FILE] [--slot N] [--theta F] [--horizon N] [--out json|text]
"""
import argparse
import importlib
import logging
import sys
from typing import List, Optional

from crossdep import __version__, config
from crossdep.commands import COMMANDS
from crossdep.errors import CrossdepError

# Configure the logging tool in the command line module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossdep", description="Smart-home and ICT ontology dependencies "
                                                                  "and occupancy-driven energy simulation.")
    parser.add_argument("--version", action="version", version="%(prog)s {0}".format(__version__))
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    # Every subcommand module contributes its arguments and its handler.
    for name in COMMANDS:
        module = importlib.import_module("crossdep.commands.{0}".format(name))
        subparser = subparsers.add_parser(name, help=module.__doc__, description=module.__doc__)
        module.setup_parser(subparser)
        subparser.set_defaults(handler=module.handler)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    # Parse the arguments; argparse exits with 2 on usage errors.
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else 2

    # Run the subcommand and map domain errors to exit codes.
    try:
        return args.handler(args)
    except CrossdepError as error:
        logger.debug("%s failed: %s", args.command, error.describe())
        print("{0}: {1}".format(error.code, error.message), file=sys.stderr)
        return error.exit_code
    except ValueError as error:
        # Out-of-range values raised by the library (horizon, day count) are usage errors.
        logger.error(error)
        print("InvalidArgument: {0}".format(error), file=sys.stderr)
        return 2
