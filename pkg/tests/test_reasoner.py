"""Tests for satisfiability checking and the entailment reductions."""

from spel.model import (
    BOT,
    BOX,
    DIA,
    TOP,
    UNIVERSAL,
    GCI,
    ConceptAssertion,
    Literal,
    ModalFormula,
    Name,
    Sharpening,
    boxed,
    make_kb,
)
from spel.reasoner import (
    ENTAILED,
    NOT_ENTAILED,
    SAT,
    UNSAT,
    NegatedFormula,
    check_sat,
    entails,
    intermediate_entailments,
)


def lit(ax, negated=False):
    return Literal(negated, ax)


def test_check_sat_simple():
    assert check_sat(make_kb([boxed("s", GCI(Name("A"), Name("B")))])).verdict == SAT
    assert check_sat(make_kb([boxed(UNIVERSAL, GCI(TOP, BOT))])).verdict == UNSAT
    assert check_sat(make_kb([])).verdict == SAT


def test_check_sat_trace():
    res = check_sat(make_kb([boxed(UNIVERSAL, GCI(TOP, BOT))]), trace=True)
    assert res.verdict == UNSAT
    assert res.refutation_trace


def test_entails_positive_sharpening():
    kb = make_kb([Sharpening(False, ("H",), "M"), Sharpening(False, ("M",), "L")])
    assert entails(kb, Sharpening(False, ("H",), "L")).verdict == ENTAILED
    assert entails(kb, Sharpening(False, ("L",), "H")).verdict == NOT_ENTAILED


def test_entails_box_literal():
    kb = make_kb([
        boxed("s", GCI(Name("A"), Name("B"))),
        boxed("s", GCI(Name("B"), Name("C"))),
    ])
    q = boxed("s", GCI(Name("A"), Name("C")))
    assert entails(kb, q).verdict == ENTAILED
    assert entails(kb, boxed("s", GCI(Name("C"), Name("A")))).verdict == NOT_ENTAILED


def test_entails_box_monomial_split():
    kb = make_kb([
        boxed("s", GCI(Name("A"), Name("B"))),
        boxed("s", ConceptAssertion(Name("A"), "a")),
    ])
    q = ModalFormula(BOX, "s", (
        lit(GCI(Name("A"), Name("B"))),
        lit(ConceptAssertion(Name("B"), "a")),
    ))
    res = entails(kb, q)
    assert res.verdict == ENTAILED
    assert len(res.subchecks) == 2  # one refutation per conjunct


def test_not_entailed_assertion():
    kb = make_kb([boxed("s", ConceptAssertion(Name("A"), "a"))])
    assert entails(kb, boxed("s", ConceptAssertion(Name("B"), "a"))).verdict == NOT_ENTAILED


def test_entails_diamond_single_literal():
    kb = make_kb([boxed("s", ConceptAssertion(Name("A"), "a"))])
    q = ModalFormula(DIA, "s", (lit(ConceptAssertion(Name("A"), "a")),))
    assert entails(kb, q).verdict == ENTAILED


def test_entails_diamond_monomial_with_witness():
    kb = make_kb([
        ModalFormula(DIA, "s", (
            lit(ConceptAssertion(Name("A"), "a")),
            lit(ConceptAssertion(Name("B"), "a")),
        )),
    ])
    q = ModalFormula(DIA, "s", (
        lit(ConceptAssertion(Name("A"), "a")),
        lit(ConceptAssertion(Name("B"), "a")),
    ))
    res = entails(kb, q)
    assert res.verdict == ENTAILED
    assert res.witness_standpoint is not None


def test_entails_negated_formula():
    kb = make_kb([boxed(UNIVERSAL, ConceptAssertion(Name("A"), "a"))])
    q = NegatedFormula(
        ModalFormula(BOX, UNIVERSAL, (lit(ConceptAssertion(Name("A"), "a"), negated=True),))
    )
    assert entails(kb, q).verdict == ENTAILED


def test_unsat_kb_entails_everything():
    kb = make_kb([
        boxed(UNIVERSAL, GCI(TOP, BOT)),
        boxed("s", ConceptAssertion(Name("A"), "a")),
    ])
    assert check_sat(kb).verdict == UNSAT
    for q in (
        boxed("s", ConceptAssertion(Name("B"), "a")),
        Sharpening(False, ("s",), UNIVERSAL),
        ModalFormula(DIA, "s", (lit(GCI(Name("B"), BOT)),)),
    ):
        assert entails(kb, q).verdict == ENTAILED


def test_adding_entailed_statement_preserves_sat():
    kb = make_kb([
        boxed("s", GCI(Name("A"), Name("B"))),
        boxed("s", ConceptAssertion(Name("A"), "a")),
    ])
    q = boxed("s", ConceptAssertion(Name("B"), "a"))
    assert entails(kb, q).verdict == ENTAILED
    assert check_sat(kb.with_statements([q])).verdict == SAT


def test_subchecks_recorded():
    kb = make_kb([boxed("s", GCI(Name("A"), Name("B")))])
    res = entails(kb, boxed("s", GCI(Name("A"), Name("B"))))
    assert res.subchecks
    for desc, sub in res.subchecks:
        assert isinstance(desc, str)
        assert sub.verdict in (SAT, UNSAT)


def test_intermediate_entailments(queries_kb, example1_kb):
    assert intermediate_entailments(example1_kb, []) == []
    q = boxed("H", GCI(Name("Tumour"), Name("Process")))
    results = intermediate_entailments(example1_kb, [q])
    assert len(results) == 1
    query, res = results[0]
    assert query == q and res.verdict == ENTAILED
