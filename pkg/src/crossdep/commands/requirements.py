"""Query the stakeholder requirement registry by stakeholder or by concept."""
import argparse

from crossdep.commands import add_seeds_argument
from crossdep.dependencies import requirements_for_concept
from crossdep.ontology import ConceptId
from crossdep.seed_data import Stakeholder, load_seed_bundle


def setup_parser(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--stakeholder", help="One of: {0}.".format(", ".join(item.value for item in Stakeholder)))
    group.add_argument("--concept", help="Qualified id of a concept.")
    parser.add_argument("--descendants", action="store_true",
                        help="With --concept, also match requirements mapped below the concept.")
    add_seeds_argument(parser)


def handler(args: argparse.Namespace) -> int:
    bundle = load_seed_bundle(args.seeds)
    by_key = {(item.stakeholder, item.index): item for item in bundle.requirements}

    # Select the rows, already in registry order.
    if args.stakeholder is not None:
        stakeholder = Stakeholder.parse(args.stakeholder)
        rows = [item for item in bundle.requirements if item.stakeholder is stakeholder]
    else:
        concept = ConceptId.parse(args.concept)
        rows = [by_key[key] for key in requirements_for_concept(
            bundle.requirements, concept, bundle.ontologies, args.descendants)]

    # Print stakeholder, index, text and the mapped concepts, tab-separated.
    for item in rows:
        print("\t".join([item.stakeholder.value, str(item.index), item.text,
                         ",".join(str(concept) for concept in item.concept_order)]))
    return 0
