"""
Typed concept forest: Domain -> Class -> SubClass -> Feature.

Concepts are identified by label-derived slug paths, e.g.
`smart_home:building_information.building_resources.heating.heating_system`.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from enum import IntEnum
from types import MappingProxyType
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

from crossdep import config
from crossdep.errors import (
    BadQualifiedId,
    DuplicateSibling,
    EmptyLabel,
    FrozenOntology,
    IllegalKind,
    UnknownConcept,
    UnknownParent,
)

# Configure the logging tool in the ontology module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

SLUG_PATTERN = re.compile(r"[a-z0-9]+(_[a-z0-9]+)*")
_NON_ALPHANUMERIC_RUN = re.compile(r"[^a-z0-9]+")


class ConceptKind(IntEnum):
    Domain = 0
    Class = 1
    SubClass = 2
    Feature = 3

    @property
    def keyword(self) -> str:
        return self.name.lower()

    @classmethod
    def from_keyword(cls, keyword: str) -> "ConceptKind":
        for kind in cls:
            if kind.keyword == keyword:
                return kind
        raise KeyError(keyword)


def is_slug(text: str) -> bool:
    return SLUG_PATTERN.fullmatch(text) is not None


def slugify(label: str) -> str:
    # Lowercase the label and collapse every run of other characters into one underscore.
    slug = _NON_ALPHANUMERIC_RUN.sub("_", label.strip().lower()).strip("_")
    if not slug:
        raise EmptyLabel("The label '{0}' has no alphanumeric characters.".format(label))
    return slug


@dataclass(frozen=True)
class ConceptId:
    ontology: str
    path: Tuple[str, ...]

    def __post_init__(self) -> None:
        if not is_slug(self.ontology):
            raise BadQualifiedId("'{0}' is not a valid ontology slug.".format(self.ontology))
        if not self.path:
            raise BadQualifiedId("A concept id needs at least one path segment.")
        for segment in self.path:
            if not is_slug(segment):
                raise BadQualifiedId("'{0}' is not a valid path segment.".format(segment))

    def __str__(self) -> str:
        return "{0}:{1}".format(self.ontology, ".".join(self.path))

    @classmethod
    def parse(cls, text: str) -> "ConceptId":
        ontology, separator, path = text.partition(":")
        if not separator or not path:
            raise BadQualifiedId("'{0}' is not a qualified concept id.".format(text))
        return cls(ontology, tuple(path.split(".")))

    @property
    def depth(self) -> int:
        return len(self.path) - 1

    @property
    def slug(self) -> str:
        return self.path[-1]

    @property
    def parent(self) -> Optional["ConceptId"]:
        if len(self.path) == 1:
            return None
        return ConceptId(self.ontology, self.path[:-1])

    def child(self, slug: str) -> "ConceptId":
        return ConceptId(self.ontology, self.path + (slug,))

    def is_descendant_of(self, other: "ConceptId") -> bool:
        """
        True when `other` is this id or one of its ancestors.
        """
        return self.ontology == other.ontology and self.path[:len(other.path)] == other.path


@dataclass(frozen=True)
class Concept:
    id: ConceptId
    label: str
    kind: ConceptKind
    children: Tuple[ConceptId, ...] = ()


@dataclass
class Ontology:
    """
    A concept forest under construction until `freeze` is called.

    A frozen ontology keeps its roots in a tuple and its index behind a read-only mapping.
    """
    slug: str
    title: str
    roots: Sequence[ConceptId] = field(default_factory=list)
    index: Mapping[ConceptId, Concept] = field(default_factory=dict)

    @property
    def frozen(self) -> bool:
        return isinstance(self.index, MappingProxyType)

    def __setattr__(self, name: str, value) -> None:
        if "index" in self.__dict__ and self.frozen:
            raise FrozenOntology("The ontology '{0}' is frozen.".format(self.slug))
        super().__setattr__(name, value)


def freeze(onto: Ontology) -> Ontology:
    if not onto.frozen:
        onto.roots = tuple(onto.roots)
        onto.index = MappingProxyType(dict(onto.index))
    return onto


def allowed_kinds(parent: Optional[Concept]) -> Tuple[ConceptKind, ...]:
    # The kind of a concept is fixed by the kind of its parent.
    if parent is None:
        return (ConceptKind.Domain,)
    if parent.kind == ConceptKind.Domain:
        return (ConceptKind.Class,)
    if parent.kind in (ConceptKind.Class, ConceptKind.SubClass):
        return (ConceptKind.SubClass, ConceptKind.Feature)
    return ()


def add_concept(onto: Ontology, parent: Optional[ConceptId], label: str, kind: ConceptKind) -> ConceptId:
    if onto.frozen:
        raise FrozenOntology("The ontology '{0}' is frozen.".format(onto.slug))

    # Find the parent concept when the new concept is not a root.
    parent_concept = None
    if parent is not None:
        try:
            parent_concept = onto.index[parent]
        except KeyError as error:
            logger.error(error)
            raise UnknownParent("The parent '{0}' doesn't exist.".format(parent))

    # Check that the kind is legal at this depth.
    if kind not in allowed_kinds(parent_concept):
        if parent_concept is None:
            raise IllegalKind("A root concept must be a domain, got {0}.".format(kind.keyword))
        raise IllegalKind("A {0} can't be placed under the {1} '{2}'.".format(
            kind.keyword, parent_concept.kind.keyword, parent_concept.label))

    # Build the identifier of the new concept.
    slug = slugify(label)
    concept_id = ConceptId(onto.slug, (slug,)) if parent is None else parent.child(slug)
    if concept_id in onto.index:
        raise DuplicateSibling("The concept '{0}' already exists.".format(concept_id))

    # Register the concept and append it to its parent, keeping the insertion order.
    onto.index[concept_id] = Concept(concept_id, label, kind)
    if parent_concept is None:
        onto.roots.append(concept_id)
    else:
        onto.index[parent] = replace(parent_concept, children=parent_concept.children + (concept_id,))

    # Return the identifier of the new concept.
    return concept_id


def lookup(onto: Ontology, concept_id: ConceptId) -> Concept:
    try:
        return onto.index[concept_id]
    except KeyError:
        raise UnknownConcept("The concept '{0}' doesn't exist.".format(concept_id))


def children_of(onto: Ontology, concept_id: ConceptId) -> List[Concept]:
    return [onto.index[child] for child in lookup(onto, concept_id).children]


def subtree_count(onto: Ontology, concept_id: ConceptId) -> int:
    return 1 + sum(subtree_count(onto, child) for child in lookup(onto, concept_id).children)


def total_count(onto: Ontology) -> int:
    return sum(subtree_count(onto, root) for root in onto.roots)


def iter_preorder(onto: Ontology, start: Optional[ConceptId] = None) -> Iterator[Concept]:
    """
    Yield concepts depth-first in insertion order, from `start` or from every root.
    """
    stack = [start] if start is not None else list(reversed(onto.roots))
    if start is not None:
        lookup(onto, start)
    while stack:
        concept = onto.index[stack.pop()]
        yield concept
        stack.extend(reversed(concept.children))


@dataclass(frozen=True)
class Violation:
    concept: str
    code: str
    message: str


def validate(onto: Ontology) -> List[Violation]:
    # Collect the violations instead of raising, the report is data.
    violations = []

    def report(concept_id, code: str, message: str) -> None:
        violations.append(Violation(str(concept_id), code, message))

    if not is_slug(onto.slug):
        report(onto.slug, "BadSlug", "The ontology slug '{0}' is not a valid slug.".format(onto.slug))

    # Walk the forest from the roots, checking every concept once.
    reachable = set()
    pending = [(root, None) for root in reversed(onto.roots)]
    while pending:
        concept_id, parent = pending.pop()
        if concept_id in reachable:
            report(concept_id, "DuplicateChild", "The concept is listed more than once.")
            continue
        concept = onto.index.get(concept_id)
        if concept is None:
            report(concept_id, "DanglingChild", "The concept is listed but missing from the index.")
            continue
        reachable.add(concept_id)

        # Identity checks.
        if concept_id.ontology != onto.slug:
            report(concept_id, "WrongOntology", "The concept belongs to '{0}'.".format(concept_id.ontology))
        expected_path = (concept_id.slug,) if parent is None else parent.path + (concept_id.slug,)
        if concept_id.path != expected_path:
            report(concept_id, "BadChildPath", "The id doesn't extend its parent path by one segment.")
        if concept.id != concept_id:
            report(concept_id, "BadChildPath", "The index entry is stored under another id.")
        try:
            if slugify(concept.label) != concept_id.slug:
                report(concept_id, "LabelMismatch", "The label '{0}' doesn't match the slug.".format(concept.label))
        except EmptyLabel:
            report(concept_id, "LabelMismatch", "The label is empty.")

        # Kind against depth.
        parent_concept = onto.index.get(parent) if parent is not None else None
        if concept.kind not in allowed_kinds(parent_concept):
            report(concept_id, "IllegalKind", "A {0} is not allowed at depth {1}.".format(
                concept.kind.keyword, concept_id.depth))

        pending.extend((child, concept_id) for child in reversed(concept.children))

    # Index entries nothing points at.
    for concept_id in onto.index:
        if concept_id not in reachable:
            report(concept_id, "Orphan", "The concept is not reachable from any root.")

    # Return the list of violations.
    return violations
