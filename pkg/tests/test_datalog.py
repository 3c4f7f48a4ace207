"""Tests for the Datalog program export: grammar, determinism, content."""

import re

from spel.datalog import export, write_program
from spel.preprocess import FactStore, Universes, prep

from genkb import TINY_PARAMS, generate_kb

IDENT = r"[a-z][A-Za-z0-9_]*"
CONST = r'"[^"\\]*"'
VAR = r"[A-Za-z][A-Za-z0-9_]*"
TERM = rf"(?:{CONST}|{VAR})"
ATOM = rf"{IDENT}\((?:{TERM}(?:, ?{TERM})*)?\)"
FACT_LINE = re.compile(rf"^{ATOM}\.$")
RULE_LINE = re.compile(rf"^{ATOM} :- {ATOM}(?:, {ATOM})*\.$")
DECL_LINE = re.compile(rf"^\.decl {IDENT}\((?:{VAR}:symbol(?:, {VAR}:symbol)*)?\)$")
OUTPUT_LINE = re.compile(rf"^\.output {IDENT}$")


def check_grammar(text, facts_only=False):
    """Every nonempty, noncomment line is a valid core-Datalog line."""
    for line in text.splitlines():
        line = line.rstrip()
        if not line or line.startswith("//"):
            continue
        if facts_only:
            assert FACT_LINE.match(line), f"bad fact line: {line!r}"
            continue
        assert (
            FACT_LINE.match(line)
            or RULE_LINE.match(line)
            or DECL_LINE.match(line)
            or OUTPUT_LINE.match(line)
        ), f"bad program line: {line!r}"


def sharper_store():
    store = FactStore(Universes())
    store.universes.standpoints |= {"H", "SN"}
    store.add(("sharper", "H", "SN"))
    return store


def test_rules_text_grammar():
    out = export(sharper_store())
    check_grammar(out["rules_text"])
    check_grammar(out["facts_text"], facts_only=True)


def test_transitivity_rule_rendered_exactly():
    out = export(sharper_store())
    assert "sharper(s1,s3) :- sharper(s1,s2), sharper(s2,s3)." in out["rules_text"].splitlines()


def test_seed_fact_rendered_exactly():
    out = export(sharper_store())
    assert 'sharper("H","SN").' in out["facts_text"].splitlines()


def test_reserved_constants():
    store = sharper_store()
    store.universes.individuals.add("a")
    store.universes.roles.add("R")
    store.add(("gci_nested", "*", ("nom", "a"), "H", ("top",), ("self", "R")))
    facts = export(store)["facts_text"]
    assert '"STAR"' in facts and '"TOP"' in facts
    assert '"NOM:a"' in facts and '"SELF:R"' in facts


def test_output_declared():
    out = export(sharper_store())
    assert ".output gci_nested" in out["rules_text"].splitlines()


def test_rules_text_independent_of_facts(example1_kb):
    small = export(sharper_store())["rules_text"]
    big = export(prep(example1_kb))["rules_text"]
    assert small == big


def test_byte_determinism(example1_kb):
    for store in (sharper_store(), prep(example1_kb),
                  prep(generate_kb(3, TINY_PARAMS))):
        a = export(store)
        b = export(store)
        assert a == b
        check_grammar(a["rules_text"])
        check_grammar(a["facts_text"], facts_only=True)


def test_write_program(tmp_path):
    paths = write_program(sharper_store(), str(tmp_path), "kb")
    rules = tmp_path / "kb.rules.dl"
    facts = tmp_path / "kb.facts.dl"
    assert rules.exists() and facts.exists()
    out = export(sharper_store())
    assert rules.read_text() == out["rules_text"]
    assert facts.read_text() == out["facts_text"]
