"""Check .onto, .links, .rules, .tsv and scenario .json files and report every violation."""
import argparse
import logging
from pathlib import Path

from crossdep import config
from crossdep.errors import CrossdepError, InvalidArgument
from crossdep.homesim import load_scenario
from crossdep.onto_text import parse_links, parse_ontology
from crossdep.ontology import validate
from crossdep.ruledsl import parse_rules
from crossdep.seed_data import load_ontologies, parse_requirements
from crossdep.utils import read_text_file

# Configure the logging tool in the validate command.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

SUFFIXES = (".onto", ".links", ".rules", ".tsv", ".json")


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("files", nargs="+", type=Path, help="Files to check.")
    parser.add_argument("--seeds", type=Path, default=None,
                        help="Seed ontologies used to resolve ids that the given files don't define.")


def handler(args: argparse.Namespace) -> int:
    """
    :param args: files to check; `.links` and `.tsv` ids resolve against the `.onto` files given, then the seeds.
    """
    # Read every file up front: an unreadable file or an unknown suffix is a usage error.
    texts = {}
    for path in args.files:
        if path.suffix not in SUFFIXES:
            raise InvalidArgument("Unsupported file type '{0}'; expected one of {1}.".format(
                path.suffix, ", ".join(SUFFIXES)), file=str(path))
        texts[path] = read_text_file(path)

    # Parse the ontologies first, the link and registry files refer to them.
    violations, ontologies = {}, {}
    for path in args.files:
        if path.suffix != ".onto":
            continue
        try:
            onto = parse_ontology(texts[path], str(path))
        except CrossdepError as error:
            violations[path] = [error.describe()]
            continue
        ontologies.setdefault(onto.slug, onto)
        violations[path] = ["{0}:0:0 {1} {2} ({3})".format(path, item.code, item.message, item.concept)
                            for item in validate(onto)]

    # Fall back to the seed ontologies for the slugs no given file defines.
    if any(path.suffix in (".links", ".tsv") for path in args.files):
        for slug, onto in load_ontologies(args.seeds).items():
            ontologies.setdefault(slug, onto)

    for path in args.files:
        if path.suffix == ".onto":
            continue
        try:
            if path.suffix == ".links":
                parse_links(texts[path], ontologies, str(path))
            elif path.suffix == ".rules":
                parse_rules(texts[path], str(path))
            elif path.suffix == ".tsv":
                parse_requirements(texts[path], ontologies, str(path))
            else:
                load_scenario(texts[path], str(path))
            violations[path] = []
        except CrossdepError as error:
            violations[path] = [error.located(str(path)).describe()]

    logger.debug("Checked %d files.", len(args.files))

    # Print one line per violation, in argument order.
    failed = False
    for path in args.files:
        for line in violations.get(path, []):
            print(line)
            failed = True
    return 1 if failed else 0
