import pytest

from conftest import MALFORMED, SEEDS
from crossdep.errors import DuplicateLink, IntraOntologyLink, ParseError, ParseErrorCode, UnknownConcept
from crossdep.onto_text import CrossLink, parse_links, parse_ontology, serialize_links, serialize_ontology
from crossdep.ontology import ConceptId, ConceptKind, Ontology, validate
from crossdep.seed_data import build_case_study_links, build_ict, build_smart_home
from crossdep.utils import read_text_file


def test_serialized_seeds_match_the_shipped_files():
    assert serialize_ontology(build_smart_home()) == read_text_file(SEEDS / "smart_home.onto")
    assert serialize_ontology(build_ict()) == read_text_file(SEEDS / "ict.onto")
    assert serialize_links(build_case_study_links()) == read_text_file(SEEDS / "case_study.links")


@pytest.mark.parametrize("name", ["smart_home.onto", "ict.onto"])
def test_parse_then_serialize_is_identity(name):
    text = read_text_file(SEEDS / name)
    onto = parse_ontology(text, name)
    assert validate(onto) == []
    assert serialize_ontology(onto) == text


def test_parse_keeps_line_order():
    onto = parse_ontology(read_text_file(SEEDS / "smart_home.onto"))
    built = build_smart_home()
    assert onto.roots == built.roots
    assert list(onto.index) == list(built.index)


def test_empty_ontology_is_just_the_header():
    text = serialize_ontology(Ontology("demo", "Demo"))
    assert text == 'ontology demo "Demo"\n'
    onto = parse_ontology(text)
    assert (onto.slug, onto.title, onto.roots, dict(onto.index)) == ("demo", "Demo", (), {})


@pytest.mark.parametrize("text", ["", "\n", "# no links yet\n\n"])
def test_parse_links_of_an_empty_file(bundle, text):
    assert parse_links(text, bundle.ontologies) == []


def test_comments_blank_lines_and_crlf_are_ignored():
    text = 'ontology demo "Demo"\r\n# a comment\r\n\r\ndomain "Top"  # trailing\r\n  class "Inner \\"quoted\\""\r\n'
    onto = parse_ontology(text)
    inner = onto.index[ConceptId.parse("demo:top.inner_quoted")]
    assert inner.label == 'Inner "quoted"'
    assert inner.kind is ConceptKind.Class
    assert serialize_ontology(onto) == 'ontology demo "Demo"\ndomain "Top"\n  class "Inner \\"quoted\\""\n'


@pytest.mark.parametrize("name, code, line, column", [
    ("three_space_indent.onto", ParseErrorCode.BadIndent, 3, 4),
    ("tab_indent.onto", ParseErrorCode.BadIndent, 3, 1),
    ("indent_jump.onto", ParseErrorCode.BadIndent, 3, 5),
    ("unterminated_string.onto", ParseErrorCode.UnterminatedString, 2, 8),
    ("unknown_keyword.onto", ParseErrorCode.UnknownKeyword, 3, 3),
    ("feature_under_domain.onto", ParseErrorCode.IllegalKind, 3, 3),
    ("feature_with_children.onto", ParseErrorCode.IllegalKind, 5, 7),
    ("duplicate_sibling.onto", ParseErrorCode.DuplicateSibling, 4, 9),
])
def test_malformed_ontologies_report_the_offending_position(name, code, line, column):
    path = MALFORMED / name
    with pytest.raises(ParseError) as raised:
        parse_ontology(read_text_file(path), str(path))
    error = raised.value
    assert (error.code, error.line, error.column) == (code.value, line, column)
    assert error.describe().startswith("{0}:{1}:{2} {3} ".format(path, line, column, code.value))
    assert error.exit_code == 2


def test_missing_header_is_rejected():
    with pytest.raises(ParseError) as raised:
        parse_ontology('domain "Top"\n')
    assert raised.value.code == "UnknownKeyword"


def test_empty_label_is_rejected():
    with pytest.raises(ParseError) as raised:
        parse_ontology('ontology demo "Demo"\ndomain "--"\n')
    assert raised.value.code == "EmptyLabel"


def test_parse_links_of_the_case_study(bundle):
    links = parse_links(read_text_file(SEEDS / "case_study.links"), bundle.ontologies)
    assert links == build_case_study_links()
    assert [link.relation for link in links] == ["monitors", "records", "controls"]
    assert serialize_links(links) == read_text_file(SEEDS / "case_study.links")


def test_parse_links_accepts_a_list_of_ontologies():
    links = parse_links("link ict:devices -> smart_home:services : feeds\n", [build_smart_home(), build_ict()])
    assert links == [CrossLink(ConceptId.parse("ict:devices"), ConceptId.parse("smart_home:services"), "feeds")]


def test_bad_qualified_id_in_links(bundle):
    path = MALFORMED / "bad_qualified_id.links"
    with pytest.raises(ParseError) as raised:
        parse_links(read_text_file(path), bundle.ontologies, str(path))
    assert (raised.value.code, raised.value.line, raised.value.column) == ("BadQualifiedId", 1, 6)


def test_link_errors_are_located(bundle):
    with pytest.raises(IntraOntologyLink) as raised:
        parse_links(read_text_file(MALFORMED / "intra_ontology.links"), bundle.ontologies)
    assert (raised.value.line, raised.value.column, raised.value.exit_code) == (1, 6, 1)

    with pytest.raises(UnknownConcept) as raised:
        parse_links(read_text_file(MALFORMED / "unknown_concept.links"), bundle.ontologies)
    assert (raised.value.line, raised.value.column) == (1, 21)

    text = "link ict:devices -> smart_home:services : feeds\nlink ict:devices -> smart_home:services : feeds\n"
    with pytest.raises(DuplicateLink) as raised:
        parse_links(text, bundle.ontologies)
    assert raised.value.line == 2


def test_parallel_links_with_different_relations_are_kept(bundle):
    text = "link ict:devices -> smart_home:services : feeds\nlink ict:devices -> smart_home:services : reads\n"
    assert len(parse_links(text, bundle.ontologies)) == 2
