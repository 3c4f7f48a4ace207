"""Datalog code generation for the saturation calculus.

`export` turns a seed fact store into a two-part Datalog program: a rules
file generated from the shared rule table, and a facts file holding one
ground atom per seed fact plus vocabulary-helper atoms. Running the program
in any Datalog engine materializes the same closure the native engine
computes; the knowledge base is inconsistent exactly when the fixpoint
contains gci_nested("STAR","TOP","STAR","TOP","BOT").

Encoding conventions:
  * all constants are quoted strings; the universal standpoint, top and
    bottom concepts are the fixed constants "STAR", "TOP" and "BOT";
  * nominal concepts are encoded "NOM:<individual>" and self-loop concepts
    "SELF:<role>", with translation atoms nom_of/self_of linking each
    encoded constant to its raw name so rules can destructure them;
  * vocabulary helpers is_sn/is_rn/is_cn/is_nom enumerate the registered
    universes (is_cn covers the extended concept universe: concept names,
    nominals, self-loops, "TOP" and "BOT").
"""

from __future__ import annotations

from .model import UNIVERSAL
from .preprocess import BOTC, TOPC, FactStore
from .rules import RULES, Rule, Var

#: Predicate signatures, in declaration order.
PREDICATES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("sharper", ("s1", "s2")),
    ("sharper_intersection", ("s1", "s2", "s3")),
    ("ria2", ("s", "r1", "r2")),
    ("ria3", ("s", "r1", "r2", "r3")),
    ("gci_nested", ("t", "c", "s", "d", "e")),
    ("gci_dia_right", ("t", "c", "s", "d")),
    ("gci_ex_right", ("s", "c", "r", "d")),
    ("gci_ex_left", ("s", "r", "c", "d")),
    ("gci_con_left", ("s", "c1", "c2", "d")),
    ("role_assertion", ("s", "r", "a", "b")),
    ("is_sn", ("s",)),
    ("is_rn", ("r",)),
    ("is_cn", ("c",)),
    ("is_nom", ("c",)),
    ("nom_of", ("c", "a")),
    ("self_of", ("c", "r")),
)

_RANGE_HELPER = {"standpoint": "is_sn", "role": "is_rn", "concept": "is_cn"}


def _const(value) -> str:
    """Quote a term (standpoint, role, individual, or extended concept)."""
    if isinstance(value, tuple):
        kind = value[0]
        if kind == "top":
            text = "TOP"
        elif kind == "bot":
            text = "BOT"
        elif kind == "cn":
            text = value[1]
        elif kind == "nom":
            text = "NOM:" + value[1]
        else:
            text = "SELF:" + value[1]
    elif value == UNIVERSAL:
        text = "STAR"
    else:
        text = value
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _scan_vars(rule: Rule) -> tuple[set, set, set]:
    """Variable names used raw / inside nom(...) / inside self(...)."""
    raw, in_nom, in_self = set(), set(), set()
    for pattern in rule.premises + (rule.conclusion,):
        for term in pattern[1:]:
            if isinstance(term, Var):
                raw.add(term.name)
            elif isinstance(term, tuple) and len(term) > 1 \
                    and isinstance(term[1], Var):
                (in_nom if term[0] == "nom" else in_self).add(term[1].name)
    return raw, in_nom, in_self


def _term(term, in_nom: set, in_self: set) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, tuple) and len(term) > 1 \
            and isinstance(term[1], Var):
        prefix = "nom_" if term[0] == "nom" else "self_"
        return prefix + term[1].name
    return _const(term)


def _atom(pattern, in_nom: set, in_self: set) -> str:
    args = ",".join(_term(t, in_nom, in_self) for t in pattern[1:])
    return f"{pattern[0]}({args})"


def rule_to_datalog(rule: Rule) -> str:
    """One Datalog rule; extra body atoms destructure nominal/self
    constants and enumerate range variables over the vocabulary."""
    raw, in_nom, in_self = _scan_vars(rule)
    body = [_atom(p, in_nom, in_self) for p in rule.premises]
    for name in sorted(in_nom):
        if name in raw:
            body.append(f"nom_of(nom_{name},{name})")
    for name in sorted(in_self):
        if name in raw:
            body.append(f"self_of(self_{name},{name})")
    for var, kind in rule.ranges:
        if kind == "individual":
            body.append(f"is_nom(nom_{var})")
        else:
            body.append(f"{_RANGE_HELPER[kind]}({var})")
    head = _atom(rule.conclusion, in_nom, in_self)
    return f"{head} :- {', '.join(body)}."


def _vocabulary_atoms(store: FactStore) -> list[str]:
    uni = store.universes
    lines = [f"is_sn({_const(s)})." for s in sorted(uni.standpoints)]
    lines += [f"is_rn({_const(r)})." for r in sorted(uni.roles)]
    noms = sorted(uni.individuals)
    lines += [f"is_nom({_const(('nom', a))})." for a in noms]
    concepts = [TOPC, BOTC]
    concepts += sorted(uni.concepts - set(concepts), key=repr)
    lines += [f"is_cn({_const(c)})." for c in concepts]
    lines += [f"nom_of({_const(('nom', a))},{_const(a)})." for a in noms]
    lines += [f"self_of({_const(('self', r))},{_const(r)})."
              for r in sorted(uni.roles)]
    return lines


def export(store: FactStore) -> dict[str, str]:
    """Render `store` (an unsaturated seed) as a Datalog program.

    Returns {"rules_text": ..., "facts_text": ...}. Output is a pure
    function of the store contents, so identical stores yield
    byte-identical text.
    """
    decls = [f".decl {name}({', '.join(f'{a}:symbol' for a in args)})"
             for name, args in PREDICATES]
    rule_lines = []
    for rule in RULES:
        rule_lines.append(f"// ({rule.name})")
        rule_lines.append(rule_to_datalog(rule))
    rules_text = "\n".join(
        ["// Deduction rules for the standpoint EL+ saturation calculus.",
         "// Inconsistency criterion: the fixpoint contains",
         '// gci_nested("STAR","TOP","STAR","TOP","BOT").']
        + decls + rule_lines + [".output gci_nested"]) + "\n"

    seed_lines = sorted(
        f"{f[0]}({','.join(_const(t) for t in f[1:])})." for f in store.facts)
    facts_text = "\n".join(["// Vocabulary helpers."]
                           + _vocabulary_atoms(store)
                           + ["// Seed facts."] + seed_lines) + "\n"
    return {"rules_text": rules_text, "facts_text": facts_text}


def write_program(store: FactStore, out_dir, name: str) -> list[str]:
    """Write `<name>.rules.dl` and `<name>.facts.dl` under `out_dir`."""
    import os

    parts = export(store)
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for kind in ("rules", "facts"):
        path = os.path.join(out_dir, f"{name}.{kind}.dl")
        with open(path, "w") as handle:
            handle.write(parts[f"{kind}_text"])
        paths.append(path)
    return paths
