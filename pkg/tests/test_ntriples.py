"""Line-format serialization: escapes, errors, fixed-point export."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chembiolink import Iri, Literal
from chembiolink import ntriples
from chembiolink.errors import ParseError


def test_statement_round_trip():
    line = ('<http://x.test/s> <http://x.test/p> '
            '"he said \\"hi\\"\\n"^^<http://www.w3.org/2001/XMLSchema#string> .')
    (s, p, o), = ntriples.parse(line)
    assert s == Iri("http://x.test/s")
    assert o == Literal('he said "hi"\n', "string")
    assert ntriples.format_triple(s, p, o) == line


def test_iri_object_and_implicit_string_datatype():
    doc = ('<http://x.test/s> <http://x.test/p> <http://x.test/o> .\n'
           '<http://x.test/s> <http://x.test/q> "bare" .\n')
    triples = list(ntriples.parse(doc))
    assert triples[0][2] == Iri("http://x.test/o")
    assert triples[1][2] == Literal("bare", "string")


def test_blank_lines_and_comments_are_skipped():
    doc = '\n# comment\n<http://x.test/s> <http://x.test/p> "v" .\n\n'
    assert len(list(ntriples.parse(doc))) == 1


@pytest.mark.parametrize("line, lineno", [
    ("<http://x.test/s> <http://x.test/p> .", 1),
    ('<http://x.test/s> "lit-subject" "o" .', 1),
    ('<http://x.test/s> <http://x.test/p> "o"^^<http://x.test/custom> .', 1),
    ('<http://x.test/s> <http://x.test/p> "o" . extra', 1),
    ('<http://x.test/s> <http://x.test/p> "unterminated .', 1),
    ('<http://x.test/s> <http://x.test/p> "bad\\escape" .', 1),
    ('<http://x.test/s> <http://x.test/p> "12x"^^'
     '<http://www.w3.org/2001/XMLSchema#integer> .', 1),
])
def test_bad_statements_raise_with_position(line, lineno):
    with pytest.raises(ParseError) as err:
        list(ntriples.parse("# leading comment\n" + line))
    assert err.value.line == lineno + 1


text_strategy = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), max_size=40)


@given(text_strategy)
def test_escape_unescape_inverse(text):
    assert ntriples.unescape(ntriples.escape(text)) == text


@given(st.lists(st.tuples(
    st.sampled_from([Iri(f"http://x.test/s{i}") for i in range(4)]),
    st.sampled_from([Iri(f"http://x.test/p{i}") for i in range(3)]),
    st.one_of(
        st.sampled_from([Iri(f"http://x.test/o{i}") for i in range(3)]),
        text_strategy.map(lambda t: Literal(t, "string")),
        st.integers(-999, 999).map(lambda n: Literal(str(n), "integer")),
    )), max_size=30))
def test_serialize_parse_fixed_point(triples):
    doc = ntriples.serialize(triples)
    assert ntriples.serialize(ntriples.parse(doc)) == doc
    lines = doc.split("\n")[:-1]
    assert lines == sorted(lines)
