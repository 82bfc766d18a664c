"""
Cross-ontology dependency graph.

Hierarchy edges (parent <-> child) and cross-links form one undirected multigraph; the
direction of every traversed edge is recorded so callers can tell them apart.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from crossdep import config
from crossdep.errors import (
    DuplicateLink,
    IntraOntologyLink,
    InvalidArgument,
    UnknownConcept,
    UnknownRequirement,
)
from crossdep.onto_text import CrossLink, format_link, resolve
from crossdep.ontology import ConceptId, Ontology
from crossdep.seed_data import Requirement, Stakeholder

# Configure the logging tool in the dependency graph module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

HIERARCHY = "hierarchy"


class EdgeKind(Enum):
    Hierarchy = "hierarchy"
    Cross = "cross"


class Direction(Enum):
    Forward = "forward"
    Reverse = "reverse"


@dataclass(frozen=True)
class EdgeStep:
    kind: EdgeKind
    relation: Optional[str]
    direction: Direction

    def sort_key(self) -> Tuple[str, str, str]:
        return self.kind.value, self.relation or "", self.direction.value


@dataclass(frozen=True)
class DepPath:
    nodes: Tuple[ConceptId, ...]
    edges: Tuple[EdgeStep, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def sort_key(self):
        return len(self.edges), [str(node) for node in self.nodes], [edge.sort_key() for edge in self.edges]


class DepGraph:
    def __init__(self, ontologies: Mapping[str, Ontology], links: Sequence[CrossLink], graph: nx.MultiGraph) -> None:
        self.ontologies = dict(ontologies)
        self.links = list(links)
        self.graph = graph

    def require(self, concept_id: ConceptId) -> None:
        if concept_id not in self.graph:
            raise UnknownConcept("The concept '{0}' doesn't exist.".format(concept_id))


def build_graph(ontologies: Mapping[str, Ontology], links: Iterable[CrossLink] = ()) -> DepGraph:
    graph = nx.MultiGraph()

    # Hierarchy edges, keyed so that parallel cross-links stay distinct.
    for onto in ontologies.values():
        for concept_id, concept in onto.index.items():
            graph.add_node(concept_id)
            for child in concept.children:
                graph.add_edge(concept_id, child, key=HIERARCHY, kind=EdgeKind.Hierarchy, source=concept_id)

    # Cross-links join two ontologies, each triple at most once.
    accepted = []
    for link in links:
        resolve(ontologies, link.source)
        resolve(ontologies, link.target)
        if link.source.ontology == link.target.ontology:
            raise IntraOntologyLink("The link {0} stays inside one ontology.".format(format_link(link)))
        key = (EdgeKind.Cross.value, str(link.source), str(link.target), link.relation)
        if graph.has_edge(link.source, link.target, key=key):
            raise DuplicateLink("The link {0} is listed twice.".format(format_link(link)))
        graph.add_edge(link.source, link.target, key=key, kind=EdgeKind.Cross, source=link.source,
                       relation=link.relation)
        accepted.append(link)

    logger.debug("Dependency graph has %d nodes and %d edges.", graph.number_of_nodes(), graph.number_of_edges())
    return DepGraph(ontologies, accepted, graph)


def _step(graph: nx.MultiGraph, current: ConceptId, neighbour: ConceptId, key) -> EdgeStep:
    data = graph.edges[current, neighbour, key]
    direction = Direction.Forward if data["source"] == current else Direction.Reverse
    return EdgeStep(data["kind"], data.get("relation"), direction)


def find_paths(g: DepGraph, start: ConceptId, end: ConceptId, max_len: int) -> List[DepPath]:
    """
    All simple paths of at most `max_len` edges, shortest first, then by node ids.
    """
    if max_len < 1:
        raise InvalidArgument("max_len must be at least 1, got {0}.".format(max_len))
    g.require(start)
    g.require(end)
    if start == end:
        return [DepPath((start,), ())]

    paths = []
    for edge_path in nx.all_simple_edge_paths(g.graph, start, end, cutoff=max_len):
        # Rebuild the node sequence and the direction of every edge from the start node.
        nodes, steps = [start], []
        for u, v, key in edge_path:
            current = nodes[-1]
            neighbour = v if u == current else u
            steps.append(_step(g.graph, current, neighbour, key))
            nodes.append(neighbour)
        paths.append(DepPath(tuple(nodes), tuple(steps)))

    # Return the paths in a reproducible order.
    return sorted(paths, key=DepPath.sort_key)


def format_path(path: DepPath) -> str:
    if not path.edges:
        return "(self)"
    parts = [str(path.nodes[0])]
    for step, node in zip(path.edges, path.nodes[1:]):
        if step.kind is EdgeKind.Hierarchy:
            parts.append(" -> ")
        elif step.direction is Direction.Forward:
            parts.append(" -[{0}]-> ".format(step.relation))
        else:
            parts.append(" <-[{0}]- ".format(step.relation))
        parts.append(str(node))
    return "".join(parts)


def dependency_closure(g: DepGraph, start: ConceptId, max_hops: int) -> Set[ConceptId]:
    if max_hops < 1:
        raise InvalidArgument("max_hops must be at least 1, got {0}.".format(max_hops))
    g.require(start)
    reachable = nx.single_source_shortest_path_length(g.graph, start, cutoff=max_hops)
    return {node for node in reachable if node != start}


def concepts_for_requirement(reqs: Sequence[Requirement], stakeholder: Stakeholder, index: int) -> Set[ConceptId]:
    for requirement in reqs:
        if requirement.stakeholder is stakeholder and requirement.index == index:
            return set(requirement.concepts)
    raise UnknownRequirement("{0} has no requirement #{1}.".format(stakeholder.value, index))


def requirements_for_concept(reqs: Sequence[Requirement], concept: ConceptId,
                             ontologies: Mapping[str, Ontology],
                             include_descendants: bool = False) -> List[Tuple[Stakeholder, int]]:
    resolve(ontologies, concept)
    matches = []
    for requirement in reqs:
        if include_descendants:
            hit = any(mapped.is_descendant_of(concept) for mapped in requirement.concepts)
        else:
            hit = concept in requirement.concepts
        if hit:
            matches.append((requirement.stakeholder, requirement.index))
    return sorted(matches, key=lambda item: (item[0].rank, item[1]))
