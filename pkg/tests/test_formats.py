import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from silverchase.chase import chase, gen_psi
from silverchase.formats import (
    FormatError,
    chase_from_doc,
    chase_from_text,
    chase_to_doc,
    chase_to_text,
    decode_condition,
    dot_edges,
    dump_psi,
    dumps,
    encode_condition,
    fmt_string,
    load_psi,
    parse_string,
    poset_from_doc,
    poset_to_doc,
    transcript_from_doc,
    transcript_to_doc,
    tree_to_dot,
    verdict_to_doc,
    verdict_to_text,
)
from silverchase.game import validate_transcript
from silverchase.psi import LabeledTree, PartialAssignment
from silverchase.silver import SilverCondition

from conftest import conditions
from game_fixtures import illegal_fixtures, legal_fixtures


def test_string_literals():
    assert fmt_string(()) == "<>"
    assert fmt_string((5, 1)) == "<5,1>"
    assert parse_string(" <5, 1> ") == (5, 1)
    assert parse_string("<>") == ()
    for bad in ("5,1", "<5,x>", "<5,1"):
        with pytest.raises(FormatError):
            parse_string(bad)


def test_condition_encoding_example():
    f = SilverCondition(2, 5, {0: 1, 2: 0, 3: 1})
    assert encode_condition(f) == "n=2 B=5 0=1,2=0,3=1"
    assert encode_condition(SilverCondition(3, 0, {})) == "n=3 B=0"
    assert decode_condition("n=2 B=5 0=1,2=0,3=1") == f


@pytest.mark.parametrize("bad", [
    "n=2 B=1 3=0",       # position past bound
    "n=2 B=4 0=2",       # symbol out of range
    "n=2 B=4 1=0,0=1",   # unsorted
    "n=2 B=4 1=0,1=1",   # repeated
    "n=2 B=4 1",
    "B=4 n=2",
    "n=1 B=0",
])
def test_condition_decoding_rejects(bad):
    with pytest.raises(FormatError):
        decode_condition(bad)


@given(conditions(n=3))
def test_condition_round_trip(f):
    text = encode_condition(f)
    g = decode_condition(text)
    assert g == f and g.bound == f.bound
    assert encode_condition(g) == text


def test_psi_text_example(psi0):
    text = dump_psi(psi0)
    assert text.splitlines()[:3] == ["psi a=2 D=2", "0 5", "1 5"]
    assert load_psi(text) == psi0


def test_psi_text_ignores_comments_and_blank_lines(psi0):
    lines = dump_psi(psi0).splitlines()
    noisy = "\n".join([lines[0], "# a comment", ""] + [ln + "  # trailing" for ln in lines[1:]])
    assert load_psi(noisy) == psi0


@pytest.mark.parametrize("mutate", [
    lambda ls: ls[:-1],                       # missing row
    lambda ls: ls + [ls[-1]],                 # duplicate row
    lambda ls: ls + ["000 1"],                # too long
    lambda ls: [ls[0], "2 1"] + ls[2:],       # digit outside alphabet
    lambda ls: [ls[0], "0 -1"] + ls[2:],      # negative label
    lambda ls: ["psi a=2"] + ls[1:],          # bad header
    lambda ls: [],
])
def test_psi_text_rejects(psi0, mutate):
    lines = mutate(dump_psi(psi0).splitlines())
    with pytest.raises(FormatError):
        load_psi("\n".join(lines))


@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(1, 4))
def test_psi_round_trip(seed, a, D):
    psi = gen_psi(seed, a, D, 50)
    assert load_psi(dump_psi(psi)) == psi


def test_dot_edges_are_the_parent_relation(psi0):
    tree = chase(psi0, 3).final_tree
    text = tree_to_dot(tree)
    assert dot_edges(text) == {(v[:-1], v) for v in tree if v}
    with pytest.raises(FormatError):
        dot_edges("graph T {\n}")


def test_single_node_dot():
    assert dot_edges(tree_to_dot(LabeledTree([()]))) == set()


@given(st.integers(0, 10**6), st.integers(2, 6), st.sampled_from(["random", "constant", "level_injective"]))
def test_chase_report_round_trips(seed, D, kind):
    run = chase(gen_psi(seed, 2, D, 4, kind), 8)
    text = chase_to_text(run)
    assert chase_from_text(text) == run
    assert chase_to_text(chase_from_text(text)) == text
    doc = json.loads(dumps(chase_to_doc(run)))
    assert chase_from_doc(doc) == run


def test_chase_report_contents(psi0):
    text = chase_to_text(chase(psi0, 3))
    assert "separated" in text and "<5,3>" in text
    assert text.split("\ntable\n", 1)[1] == dump_psi(psi0)


def test_chase_doc_rejects_wrong_version(psi0):
    doc = chase_to_doc(chase(psi0, 3))
    doc["format_version"] = 2
    with pytest.raises(FormatError):
        chase_from_doc(doc)


def test_chase_text_rejects_garbage():
    with pytest.raises(FormatError):
        chase_from_text("status completed\nnonsense\n")


@pytest.mark.parametrize("name", sorted(legal_fixtures()))
def test_transcript_round_trip(name):
    poset, t = legal_fixtures()[name]
    pd = json.loads(dumps(poset_to_doc(poset)))
    p2 = poset_from_doc(pd)
    assert p2 == poset
    t2 = transcript_from_doc(json.loads(dumps(transcript_to_doc(t))), p2)
    assert t2 == t
    assert verdict_to_doc(validate_transcript(p2, t2)) == verdict_to_doc(validate_transcript(poset, t))


def test_transcript_with_witness_round_trips():
    poset, t = legal_fixtures()["scripted-0"]
    t = type(t)(t.n, t.K, t.root, t.rounds, t.rounds[-1].moves[0][1])
    assert transcript_from_doc(transcript_to_doc(t), poset) == t


def test_transcript_type_mismatch():
    poset, t = legal_fixtures()["one-element"]
    silver_poset, _ = legal_fixtures()["silver-split"]
    with pytest.raises(FormatError):
        transcript_from_doc(transcript_to_doc(t), silver_poset)


def test_schema_rejects_missing_fields():
    with pytest.raises(FormatError):
        poset_from_doc({"format_version": 1, "kind": "finite"})
    with pytest.raises(FormatError):
        poset_from_doc({"format_version": 1, "kind": "woods", "n": 2})


def test_verdict_renderings_name_the_rule():
    poset, t = illegal_fixtures()["gamma.answer"]
    v = validate_transcript(poset, t)
    doc = verdict_to_doc(v)
    assert doc["overall"] == "illegal" and doc["rule"] == "gamma.answer" and doc["win"] is None
    assert verdict_to_text(v).startswith("verdict illegal rule=gamma.answer")


def test_partial_assignment_encoding():
    xi = PartialAssignment(2, 4, {1: 0, 3: 1})
    assert decode_condition(encode_condition(xi), PartialAssignment) == xi
