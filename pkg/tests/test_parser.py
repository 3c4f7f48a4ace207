"""Tests for the `.spel` parser and renderer."""

import pytest

from spel.model import (
    BOX,
    DIA,
    UNIVERSAL,
    GCI,
    Conj,
    ConceptAssertion,
    Exists,
    Literal,
    ModalFormula,
    Name,
    Nominal,
    Sharpening,
    boxed,
    make_kb,
)
from spel.parser import ParseError, RenderError, parse_kb, render_kb, render_statement

from conftest import fixture_text


def parse_ok(text, **kw):
    kb = parse_kb(text, **kw)
    assert not isinstance(kb, list), f"unexpected parse errors: {kb}"
    return kb


def test_box_formula():
    kb = parse_ok("box H { Tumour sub Process; }")
    assert kb.statements == (boxed("H", GCI(Name("Tumour"), Name("Process"))),)


def test_negated_sharpening():
    kb = parse_ok("not (H & L <= SN);")
    assert kb.statements == (Sharpening(True, ("H", "L"), "SN"),)


def test_sharpening_to_empty():
    kb = parse_ok("H & L <= 0;")
    assert kb.statements == (Sharpening(False, ("H", "L"), "0"),)


def test_bare_axiom_wrapped_as_universal_box():
    kb = parse_ok("Tumour sub Process;")
    assert kb.statements == (boxed(UNIVERSAL, GCI(Name("Tumour"), Name("Process"))),)


def test_monomial_and_negated_literal():
    kb = parse_ok("dia H { A sub B; not (B sub A); }")
    (st,) = kb.statements
    assert st.op == DIA and st.standpoint == "H"
    assert st.literals == (
        Literal(False, GCI(Name("A"), Name("B"))),
        Literal(True, GCI(Name("B"), Name("A"))),
    )


def test_concept_operators_and_precedence():
    kb = parse_ok("A and ex R.B sub dia S C;")
    (st,) = kb.statements
    ax = st.literals[0].axiom
    assert ax.lhs == Conj(Name("A"), Exists("R", Name("B")))
    assert ax.rhs.op == DIA and ax.rhs.standpoint == "S"


def test_assertion_kind_by_declaration():
    kb = parse_ok("role F; F(a, b);")
    assert kb.statements[0].literals[0].axiom.role == "F"
    kb = parse_ok("concept F; F(a);")
    assert isinstance(kb.statements[0].literals[0].axiom, ConceptAssertion)


def test_error_positions_are_in_input():
    errs = parse_kb("A sub ;\nB sub @;")
    assert isinstance(errs, list) and errs
    lines = "A sub ;\nB sub @;".split("\n")
    for e in errs:
        assert isinstance(e, ParseError)
        assert 1 <= e.line <= len(lines)
        assert 1 <= e.column <= len(lines[e.line - 1]) + 1
    assert {e.kind for e in errs} <= {"lexical", "syntax"}
    assert any(e.kind == "lexical" for e in errs)


def test_error_recovery_keeps_going():
    errs = parse_kb("A sub ;\nB sub C;\nD sub ;")
    assert isinstance(errs, list)
    assert len(errs) >= 2  # both bad statements reported


def test_reserved_prefix_rejected():
    errs = parse_kb("_gA sub B;")
    assert isinstance(errs, list)
    assert any(e.kind == "reserved-prefix" for e in errs)
    # the same text is accepted when fresh names are allowed
    parse_ok("_gA sub B;", allow_fresh=True)


def test_parse_is_deterministic():
    text = fixture_text("example1.spel")
    assert parse_kb(text) == parse_kb(text)


def test_render_examples():
    assert render_statement(boxed("H", GCI(Name("Tumour"), Name("Process")))) == (
        "box H { Tumour sub Process; }"
    )
    st = ModalFormula(DIA, "L", (Literal(False, ConceptAssertion(Name("Tumour"), "b")),))
    assert render_statement(st) == "dia L { Tumour(b); }"
    assert render_statement(Sharpening(False, ("H", "L"), "0")) == "H & L <= 0;"
    assert render_statement(Sharpening(True, ("H",), "SN")) == "not (H <= SN);"


def test_render_empty_kb():
    assert render_kb(make_kb([])) == ""


def test_render_rejects_nominals():
    kb = make_kb([boxed("s", GCI(Nominal("a"), Name("B")))])
    with pytest.raises(RenderError):
        render_kb(kb)


def test_roundtrip_fixtures():
    for name in ("example1.spel", "example1_merged.spel", "example2_queries.spel"):
        kb = parse_ok(fixture_text(name))
        again = parse_ok(render_kb(kb))
        assert again == kb
        # a second render is byte-identical
        assert render_kb(again) == render_kb(kb)


def test_roundtrip_preserves_declared_vocabulary():
    kb = parse_ok("concept Unused; A sub B;")
    assert "Unused" in kb.vocabulary.concept_names
    again = parse_ok(render_kb(kb))
    assert again.vocabulary == kb.vocabulary
