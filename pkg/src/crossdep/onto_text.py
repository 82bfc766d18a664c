"""
Reader and canonical writer for `.onto` ontology files and `.links` cross-link files.

An `.onto` file starts with `ontology <slug> "<Title>"`; every other line is
`<indent><kind> "<Label>"` with exactly two spaces of indentation per depth level.
A `.links` file holds one `link <qid> -> <qid> : <relation>` per line.
Both formats accept `#` comments, blank lines and CRLF line endings.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Union

from crossdep import config
from crossdep.errors import (
    BadQualifiedId,
    DuplicateLink,
    DuplicateSibling,
    EmptyLabel,
    IllegalKind,
    IntraOntologyLink,
    ParseError,
    ParseErrorCode,
    UnknownConcept,
)
from crossdep.ontology import (
    ConceptId,
    ConceptKind,
    Ontology,
    add_concept,
    freeze,
    is_slug,
    iter_preorder,
)

# Configure the logging tool in the text format module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

INDENT_WIDTH = 2


@dataclass(frozen=True)
class CrossLink:
    source: ConceptId
    target: ConceptId
    relation: str


class LineScanner:
    """
    Character scanner over one logical line that tracks 1-based columns for diagnostics.
    """

    def __init__(self, text: str, line: int, file: Optional[str]) -> None:
        self.text = text
        self.line = line
        self.file = file
        self.position = 0

    @property
    def column(self) -> int:
        return self.position + 1

    def error(self, code: ParseErrorCode, message: str, column: Optional[int] = None) -> ParseError:
        return ParseError(code, message, self.file, self.line, column if column is not None else self.column)

    def peek(self) -> str:
        return self.text[self.position] if self.position < len(self.text) else ""

    def skip_spaces(self) -> int:
        start = self.position
        while self.peek() == " ":
            self.position += 1
        return self.position - start

    def at_end(self) -> bool:
        # A comment runs to the end of the line.
        return self.peek() in ("", "#")

    def word(self, allowed: str = "abcdefghijklmnopqrstuvwxyz0123456789_") -> str:
        start = self.position
        while self.peek() and self.peek() in allowed:
            self.position += 1
        return self.text[start:self.position]

    def token(self) -> str:
        # A run of non-space characters, stopping at a comment.
        start = self.position
        while self.peek() and self.peek() not in (" ", "#"):
            self.position += 1
        return self.text[start:self.position]

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.position):
            found = self.text[self.position:self.position + len(literal)] or "end of line"
            raise self.error(ParseErrorCode.UnexpectedToken, "Expected '{0}', found '{1}'.".format(literal, found))
        self.position += len(literal)

    def quoted(self) -> str:
        # Read a double-quoted string with \" and \\ escapes.
        opening = self.column
        if self.peek() != '"':
            raise self.error(ParseErrorCode.UnexpectedToken, "Expected a double-quoted string.")
        self.position += 1
        characters = []
        while True:
            character = self.peek()
            if character == "":
                raise self.error(ParseErrorCode.UnterminatedString, "The string is not terminated.", opening)
            self.position += 1
            if character == '"':
                return "".join(characters)
            if character == "\\":
                escaped = self.peek()
                if escaped not in ('"', "\\"):
                    raise self.error(ParseErrorCode.UnexpectedToken, "Unknown escape sequence.", self.column - 1)
                self.position += 1
                character = escaped
            characters.append(character)

    def finish(self) -> None:
        self.skip_spaces()
        if not self.at_end():
            raise self.error(ParseErrorCode.UnexpectedToken, "Unexpected text '{0}'.".format(self.text[self.position:]))


def _logical_lines(text: str, file: Optional[str]) -> Iterable[LineScanner]:
    # Yield a scanner for every line that is neither blank nor a comment.
    for number, raw in enumerate(text.split("\n"), start=1):
        if raw.endswith("\r"):
            raw = raw[:-1]
        stripped = raw.strip(" ")
        if not stripped or stripped.startswith("#"):
            continue
        yield LineScanner(raw, number, file)


def quote(text: str) -> str:
    return '"{0}"'.format(text.replace("\\", "\\\\").replace('"', '\\"'))


def parse_ontology(text: str, file: Optional[str] = None) -> Ontology:
    lines = iter(_logical_lines(text, file))

    # The header names the ontology.
    header = next(lines, None)
    if header is None:
        raise ParseError(ParseErrorCode.UnknownKeyword, "The 'ontology' header is missing.", file, 1, 1)
    if header.skip_spaces():
        raise header.error(ParseErrorCode.BadIndent, "The header must not be indented.")
    keyword_column = header.column
    if header.word() != "ontology":
        raise header.error(ParseErrorCode.UnknownKeyword, "The first line must start with 'ontology'.", keyword_column)
    if not header.skip_spaces():
        raise header.error(ParseErrorCode.UnexpectedToken, "Expected a space after 'ontology'.")
    slug_column = header.column
    slug = header.token()
    if not is_slug(slug):
        raise header.error(ParseErrorCode.UnexpectedToken, "'{0}' is not a valid ontology slug.".format(slug), slug_column)
    header.skip_spaces()
    title = header.quoted()
    header.finish()
    onto = Ontology(slug, title)

    # Every following line adds one concept under the last concept of the previous depth.
    ancestry: List[ConceptId] = []
    for scanner in lines:
        indent = scanner.skip_spaces()
        if scanner.peek() == "\t":
            raise scanner.error(ParseErrorCode.BadIndent, "Tabs are not allowed in indentation.")
        if indent % INDENT_WIDTH:
            raise scanner.error(ParseErrorCode.BadIndent, "Indentation must be a multiple of two spaces.")
        depth = indent // INDENT_WIDTH
        if depth > len(ancestry):
            raise scanner.error(ParseErrorCode.BadIndent, "Indentation increases by more than one level.")

        keyword_column = scanner.column
        keyword = scanner.word()
        try:
            kind = ConceptKind.from_keyword(keyword)
        except KeyError:
            found = keyword or scanner.token()
            raise scanner.error(ParseErrorCode.UnknownKeyword, "Unknown concept kind '{0}'.".format(found), keyword_column)
        if not scanner.skip_spaces():
            raise scanner.error(ParseErrorCode.UnexpectedToken, "Expected a space after '{0}'.".format(keyword))
        label_column = scanner.column
        label = scanner.quoted()
        scanner.finish()

        # Insert the concept, turning model errors into located parse errors.
        del ancestry[depth:]
        parent = ancestry[-1] if ancestry else None
        try:
            concept_id = add_concept(onto, parent, label, kind)
        except IllegalKind as error:
            raise scanner.error(ParseErrorCode.IllegalKind, error.message, keyword_column)
        except DuplicateSibling as error:
            raise scanner.error(ParseErrorCode.DuplicateSibling, error.message, label_column)
        except EmptyLabel as error:
            raise scanner.error(ParseErrorCode.EmptyLabel, error.message, label_column)
        ancestry.append(concept_id)

    logger.debug("Parsed ontology '%s' with %d concepts.", onto.slug, len(onto.index))
    return freeze(onto)


def serialize_ontology(onto: Ontology) -> str:
    lines = ["ontology {0} {1}".format(onto.slug, quote(onto.title))]
    for concept in iter_preorder(onto):
        lines.append("{0}{1} {2}".format(" " * INDENT_WIDTH * concept.id.depth, concept.kind.keyword, quote(concept.label)))
    return "\n".join(lines) + "\n"


def _ontology_map(ontologies: Union[Mapping[str, Ontology], Iterable[Ontology]]) -> Mapping[str, Ontology]:
    if isinstance(ontologies, Mapping):
        return ontologies
    return {onto.slug: onto for onto in ontologies}


def resolve(ontologies: Mapping[str, Ontology], concept_id: ConceptId) -> None:
    onto = ontologies.get(concept_id.ontology)
    if onto is None or concept_id not in onto.index:
        raise UnknownConcept("The concept '{0}' doesn't exist.".format(concept_id))


def _qualified_id(scanner: LineScanner, ontologies: Mapping[str, Ontology]) -> ConceptId:
    column = scanner.column
    text = scanner.token()
    try:
        concept_id = ConceptId.parse(text)
    except BadQualifiedId as error:
        raise scanner.error(ParseErrorCode.BadQualifiedId, error.message, column)
    try:
        resolve(ontologies, concept_id)
    except UnknownConcept as error:
        raise error.located(scanner.file, scanner.line, column)
    return concept_id


def parse_links(text: str, ontologies: Union[Mapping[str, Ontology], Iterable[Ontology]],
                file: Optional[str] = None) -> List[CrossLink]:
    ontologies = _ontology_map(ontologies)
    links: List[CrossLink] = []
    seen = set()
    for scanner in _logical_lines(text, file):
        if scanner.skip_spaces():
            raise scanner.error(ParseErrorCode.BadIndent, "Link lines must not be indented.")
        keyword_column = scanner.column
        keyword = scanner.token()
        if keyword != "link":
            raise scanner.error(ParseErrorCode.UnknownKeyword, "Unknown keyword '{0}'.".format(keyword), keyword_column)
        scanner.skip_spaces()
        source_column = scanner.column
        source = _qualified_id(scanner, ontologies)
        scanner.skip_spaces()
        scanner.expect("->")
        scanner.skip_spaces()
        target = _qualified_id(scanner, ontologies)
        scanner.skip_spaces()
        scanner.expect(":")
        scanner.skip_spaces()
        relation_column = scanner.column
        relation = scanner.token()
        if not is_slug(relation):
            raise scanner.error(ParseErrorCode.UnexpectedToken, "'{0}' is not a valid relation slug.".format(relation), relation_column)
        scanner.finish()

        # Cross-links join two different ontologies and appear once.
        link = CrossLink(source, target, relation)
        if source.ontology == target.ontology:
            raise IntraOntologyLink("The link stays inside the '{0}' ontology.".format(source.ontology),
                                    file, scanner.line, source_column)
        if link in seen:
            raise DuplicateLink("The link {0} is listed twice.".format(format_link(link)), file, scanner.line, keyword_column)
        seen.add(link)
        links.append(link)

    return links


def format_link(link: CrossLink) -> str:
    return "{0} -> {1} : {2}".format(link.source, link.target, link.relation)


def serialize_links(links: Iterable[CrossLink]) -> str:
    return "".join("link {0}\n".format(format_link(link)) for link in links)

