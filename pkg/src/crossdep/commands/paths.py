"""List the dependency paths between two concepts of the seed ontologies."""
import argparse

from crossdep.commands import add_seeds_argument, positive_integer
from crossdep.dependencies import build_graph, find_paths, format_path
from crossdep.ontology import ConceptId
from crossdep.seed_data import load_seed_bundle


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--from", dest="start", required=True, help="Qualified id of the first concept.")
    parser.add_argument("--to", dest="end", required=True, help="Qualified id of the last concept.")
    parser.add_argument("--max-len", type=positive_integer, default=3, help="Longest path in edges (default: %(default)s).")
    add_seeds_argument(parser)


def handler(args: argparse.Namespace) -> int:
    start, end = ConceptId.parse(args.start), ConceptId.parse(args.end)
    bundle = load_seed_bundle(args.seeds)
    graph = build_graph(bundle.ontologies, bundle.links)

    # One line per path, or a single marker line when there is none.
    paths = find_paths(graph, start, end, args.max_len)
    if not paths:
        print("no paths")
    for path in paths:
        print(format_path(path))
    return 0
