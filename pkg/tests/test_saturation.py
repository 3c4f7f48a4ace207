"""Tests for the saturation engine, the rule table, and trace replay."""

import pytest

from spel.model import (
    BOT,
    TOP,
    UNIVERSAL,
    GCI,
    ConceptAssertion,
    Name,
    Sharpening,
    boxed,
    make_kb,
)
from spel.preprocess import (
    BOTC,
    INPUT_RULE,
    REFUTATION_FACT,
    TOPC,
    FactStore,
    Universes,
    prep,
)
from spel.rules import RULES, RULES_BY_NAME, apply_rule
from spel.saturation import (
    FactLimitExceeded,
    format_fact,
    is_refuted,
    polynomial_fact_bound,
    refutation_trace,
    saturate,
)

from genkb import TINY_PARAMS, generate_kb


def fresh_store(facts=(), **uni):
    store = FactStore(Universes(**uni) if uni else Universes())
    for f in facts:
        store.add(f)
    return store


def test_sharper_transitivity():
    store = fresh_store([("sharper", "H", "SN"), ("sharper", "SN", "M")])
    store.universes.standpoints |= {"H", "SN", "M"}
    out = saturate(store)
    assert ("sharper", "H", "M") in out


def test_apply_rule_examples():
    uni = Universes()
    c1 = apply_rule(
        "C.1",
        [
            ("gci_nested", "t", ("cn", "B"), "s", ("cn", "C"), ("cn", "D")),
            ("gci_nested", "t", ("cn", "B"), "s", ("cn", "D"), ("cn", "E")),
        ],
        uni,
    )
    assert c1 == [("gci_nested", "t", ("cn", "B"), "s", ("cn", "C"), ("cn", "E"))]

    l1 = apply_rule(
        "L.1",
        [("gci_nested", "u", ("nom", "a"), "s", TOPC, ("self", "R"))],
        uni,
    )
    assert l1 == [("role_assertion", "s", "R", "a", "a")]

    e2 = apply_rule(
        "E.2",
        [
            ("gci_ex_right", "s", ("cn", "C"), "R1", ("cn", "D")),
            ("gci_ex_right", "s", ("cn", "D"), "R2", ("cn", "E")),
            ("ria3", "s", "R1", "R2", "R3"),
        ],
        uni,
    )
    assert e2 == [("gci_ex_right", "s", ("cn", "C"), "R3", ("cn", "E"))]


def test_apply_rule_range_expansion():
    uni = Universes()
    uni.standpoints |= {"H", "L"}
    out = apply_rule("T.2", [], uni)
    assert set(out) == {("sharper", s, s) for s in ("H", "L", UNIVERSAL)}


def test_apply_rule_mismatch_raises():
    uni = Universes()
    with pytest.raises(ValueError):
        apply_rule("S.1", [("sharper", "A", "B")], uni)  # wrong arity
    with pytest.raises(ValueError):
        apply_rule("S.1", [("sharper", "A", "B"), ("sharper", "C", "D")], uni)


def test_refutation_by_assertion_clash():
    kb = make_kb([
        boxed("s", ConceptAssertion(Name("A"), "a")),
        boxed("s", GCI(Name("A"), BOT)),
    ])
    out = saturate(prep(kb))
    assert is_refuted(out)
    assert REFUTATION_FACT in out


def test_consistent_kb_not_refuted():
    kb = make_kb([boxed("s", GCI(Name("A"), Name("B")))])
    out = saturate(prep(kb))
    assert not is_refuted(out)


def test_example1_saturation(example1_store):
    assert not is_refuted(example1_store)
    assert ("gci_nested", UNIVERSAL, ("nom", "p1"), "H", TOPC, ("cn", "HighRisk")) in example1_store


def test_worklist_order_independence():
    for seed in (0, 3, 5):
        kb = generate_kb(seed, TINY_PARAMS)
        store = prep(kb)
        fifo = saturate(store.copy(), early_exit_on_refutation=False, worklist="fifo")
        lifo = saturate(store.copy(), early_exit_on_refutation=False, worklist="lifo")
        assert set(fifo.facts) == set(lifo.facts), f"seed {seed} diverges"


def test_polynomial_bound_holds(example1_store):
    assert len(example1_store) <= polynomial_fact_bound(example1_store.universes)
    for seed in range(5):
        out = saturate(prep(generate_kb(seed, TINY_PARAMS)), early_exit_on_refutation=False)
        assert len(out) <= polynomial_fact_bound(out.universes)


def test_fact_limit_exceeded(example1_kb):
    with pytest.raises(FactLimitExceeded):
        saturate(prep(example1_kb), fact_limit=100)


def test_every_derivation_replays():
    kb = make_kb([
        boxed("s", ConceptAssertion(Name("A"), "a")),
        boxed("s", GCI(Name("A"), Name("B"))),
        Sharpening(False, ("s",), UNIVERSAL),
    ])
    out = saturate(prep(kb), early_exit_on_refutation=False)
    for fid, (rule, premise_ids) in enumerate(out.provenance):
        if rule == INPUT_RULE:
            continue
        premises = [out.facts[p] for p in premise_ids]
        conclusions = apply_rule(rule, premises, out.universes)
        assert out.facts[fid] in conclusions, f"fact {fid} fails replay under {rule}"


def test_refutation_trace_replayable():
    kb = make_kb([boxed(UNIVERSAL, GCI(TOP, BOT))])
    out = saturate(prep(kb))
    trace = refutation_trace(out)
    assert trace is not None
    assert format_fact(REFUTATION_FACT) in trace[-1]


def test_no_trace_when_satisfiable(example1_store):
    assert refutation_trace(example1_store) is None


def test_rule_table_well_formed():
    assert len(RULES) == len(RULES_BY_NAME)
    for rule in RULES:
        assert rule.conclusion[0] in (
            "sharper", "sharper_intersection", "ria2", "ria3", "gci_nested",
            "gci_dia_right", "gci_ex_right", "gci_ex_left", "gci_con_left",
            "role_assertion",
        )
