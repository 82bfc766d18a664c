"""Print an ontology file as an indented concept tree."""
import argparse
from pathlib import Path

from crossdep.commands import positive_integer
from crossdep.onto_text import parse_ontology
from crossdep.ontology import ConceptId, iter_preorder, lookup
from crossdep.utils import read_text_file


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", type=Path, help="An .onto file.")
    parser.add_argument("--root", default=None, help="Qualified id of the subtree to print.")
    parser.add_argument("--depth", type=positive_integer, default=None, help="Number of levels to print.")


def handler(args: argparse.Namespace) -> int:
    onto = parse_ontology(read_text_file(args.file), str(args.file))

    # Resolve the optional subtree root.
    root = None
    if args.root is not None:
        root = ConceptId.parse(args.root)
        lookup(onto, root)
    base = root.depth if root is not None else 0

    # Print the concepts in pre-order, relative to the chosen root.
    for concept in iter_preorder(onto, root):
        level = concept.id.depth - base
        if args.depth is not None and level >= args.depth:
            continue
        print("{0}{1} {2} ({3})".format("  " * level, concept.kind.keyword, concept.label, concept.id))
    return 0
