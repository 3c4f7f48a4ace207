"""Preprocessing: normal-form statements -> the saturation fact universe.

Facts are plain tuples whose first element names the shape:

    ("sharper", s1, s2)                      s1 below s2
    ("sharper_intersection", s1, s2, s3)     s1 meet s2 below s3
    ("ria2", s, r1, r2)                      box_s role inclusion
    ("ria3", s, r1, r2, r3)                  box_s chain inclusion
    ("gci_nested", t, C, s, D, E)            box_t[C sub box_s[D => E]]
    ("gci_dia_right", t, C, s, D)            box_t[C sub dia_s D]
    ("gci_ex_right", s, C, r, D)             box_s[C sub ex r.D]
    ("gci_ex_left", s, r, C, D)              box_s[ex r.C sub D]
    ("gci_con_left", s, C1, C2, D)           box_s[C1 and C2 sub D]
    ("role_assertion", s, r, a, b)           box_s[r(a, b)]

Extended concepts C, D, E are themselves tuples: ("top",), ("bot",),
("cn", name), ("nom", individual), ("self", role). Nominals and self-loop
concepts are ordinary members of the concept universe.

Assertions are encoded through nominals; every statement of a normal-form
KB maps to exactly one seed fact. `add_witness_axioms` then adds, for each
diamond target and each individual, the three facts that give the diamond
an addressable witness standpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    BOX,
    Bottom,
    ConceptAssertion,
    ConceptTerm,
    Conj,
    DIA,
    Exists,
    GCI,
    KnowledgeBase,
    Modal,
    ModalFormula,
    Name,
    Nominal,
    RESERVED_PREFIX,
    RIA,
    RoleAssertion,
    SelfLoop,
    Sharpening,
    Top,
    UNIVERSAL,
    is_normal_form,
    vocabulary_of,
)
from .normalize import normalize

Fact = tuple
ExtConcept = tuple

TOPC: ExtConcept = ("top",)
BOTC: ExtConcept = ("bot",)

#: The fact whose derivation signals unsatisfiability.
REFUTATION_FACT: Fact = ("gci_nested", UNIVERSAL, TOPC, UNIVERSAL, TOPC, BOTC)

FACT_SHAPES = (
    "sharper",
    "sharper_intersection",
    "ria2",
    "ria3",
    "gci_nested",
    "gci_dia_right",
    "gci_ex_right",
    "gci_ex_left",
    "gci_con_left",
    "role_assertion",
)

INPUT_RULE = "input"

_EMPTY: list = []


class PreprocessError(ValueError):
    pass


@dataclass
class Universes:
    """Registered instantiation domains for the schema rules."""

    standpoints: set[str] = field(default_factory=lambda: {UNIVERSAL})
    roles: set[str] = field(default_factory=set)
    individuals: set[str] = field(default_factory=set)
    concepts: set[ExtConcept] = field(default_factory=lambda: {TOPC, BOTC})

    def copy(self) -> "Universes":
        return Universes(
            set(self.standpoints),
            set(self.roles),
            set(self.individuals),
            set(self.concepts),
        )


class FactStore:
    """Interned fact set with provenance and on-demand secondary indexes.

    Monotone: facts are only ever added. Each fact gets a dense integer id;
    provenance maps id -> (rule name, premise ids), with rule "input" and
    no premises for seeds.
    """

    def __init__(self, universes: Universes | None = None) -> None:
        self.universes = universes if universes is not None else Universes()
        self.facts: list[Fact] = []
        self.fact_ids: dict[Fact, int] = {}
        self.provenance: list[tuple[str, tuple[int, ...]]] = []
        self.by_shape: dict[str, list[Fact]] = {}
        # (shape, bound positions) -> {bound values -> [facts]}
        self._indexes: dict[tuple, dict[tuple, list[Fact]]] = {}
        self.partial = False  # set when saturation early-exits

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.fact_ids

    def __len__(self) -> int:
        return len(self.facts)

    def add(self, fact: Fact, rule: str = INPUT_RULE,
            premises: tuple[int, ...] = ()) -> int | None:
        """Intern `fact`; returns its new id, or None if already present."""
        if fact in self.fact_ids:
            return None
        if fact[0] not in FACT_SHAPES:
            raise PreprocessError(f"unknown fact shape: {fact!r}")
        fid = len(self.facts)
        self.facts.append(fact)
        self.fact_ids[fact] = fid
        self.provenance.append((rule, premises))
        self.by_shape.setdefault(fact[0], []).append(fact)
        for key, table in self._indexes.items():
            if key[0] == fact[0]:
                vals = tuple(fact[p] for p in key[1])
                table.setdefault(vals, []).append(fact)
        return fid

    def lookup_pos(self, shape: str, positions: tuple[int, ...],
                   values: tuple) -> list[Fact]:
        """Facts of `shape` whose `positions` hold exactly `values`."""
        if not positions:
            return self.by_shape.get(shape, _EMPTY)
        key = (shape, positions)
        table = self._indexes.get(key)
        if table is None:
            table = {}
            for f in self.by_shape.get(shape, ()):
                table.setdefault(tuple(f[p] for p in positions), []).append(f)
            self._indexes[key] = table
        return table.get(values, _EMPTY)

    def lookup(self, shape: str, bound: dict[int, object]) -> list[Fact]:
        """Facts of `shape` agreeing with `bound` (position -> value)."""
        positions = tuple(sorted(bound))
        return self.lookup_pos(shape, positions,
                               tuple(bound[p] for p in positions))

    def copy(self) -> "FactStore":
        out = FactStore(self.universes.copy())
        out.facts = list(self.facts)
        out.fact_ids = dict(self.fact_ids)
        out.provenance = list(self.provenance)
        out.by_shape = {k: list(v) for k, v in self.by_shape.items()}
        out.partial = self.partial
        return out


# ---------------------------------------------------------------------------
# Statement -> fact encoding
# ---------------------------------------------------------------------------

def ext_concept(c: ConceptTerm) -> ExtConcept:
    if isinstance(c, Top):
        return TOPC
    if isinstance(c, Bottom):
        return BOTC
    if isinstance(c, Name):
        return ("cn", c.name)
    if isinstance(c, Nominal):
        return ("nom", c.individual)
    if isinstance(c, SelfLoop):
        return ("self", c.role)
    raise PreprocessError(f"not an atomic concept: {c!r}")


def _is_atomic(c: ConceptTerm) -> bool:
    return isinstance(c, (Top, Bottom, Name, Nominal, SelfLoop))


def statement_to_fact(st) -> Fact:
    """The unique seed fact of one normal-form statement."""
    if isinstance(st, Sharpening):
        if len(st.lhs) == 1:
            return ("sharper", st.lhs[0], st.rhs)
        return ("sharper_intersection", st.lhs[0], st.lhs[1], st.rhs)
    if not isinstance(st, ModalFormula) or st.op != BOX:
        raise PreprocessError(f"not a normal statement: {st!r}")
    s = st.standpoint
    ax = st.literals[0].axiom
    if isinstance(ax, RIA):
        if len(ax.chain) == 1:
            return ("ria2", s, ax.chain[0], ax.super_role)
        return ("ria3", s, ax.chain[0], ax.chain[1], ax.super_role)
    if isinstance(ax, RoleAssertion):
        return ("role_assertion", s, ax.role, ax.subject, ax.object)
    if isinstance(ax, ConceptAssertion):
        return ("gci_nested", UNIVERSAL, ("nom", ax.individual), s, TOPC,
                ext_concept(ax.concept))
    if isinstance(ax, GCI):
        lhs, rhs = ax.lhs, ax.rhs
        if isinstance(lhs, Exists):
            return ("gci_ex_left", s, lhs.role, ext_concept(lhs.filler),
                    ext_concept(rhs))
        if isinstance(lhs, Conj):
            return ("gci_con_left", s, ext_concept(lhs.left),
                    ext_concept(lhs.right), ext_concept(rhs))
        if isinstance(rhs, Exists):
            return ("gci_ex_right", s, ext_concept(lhs), rhs.role,
                    ext_concept(rhs.filler))
        if isinstance(rhs, Modal) and rhs.op == DIA:
            return ("gci_dia_right", s, ext_concept(lhs), rhs.standpoint,
                    ext_concept(rhs.inner))
        if isinstance(rhs, Modal):
            return ("gci_nested", s, ext_concept(lhs), rhs.standpoint, TOPC,
                    ext_concept(rhs.inner))
        # both sides atomic: canonical seed placement box_*[T sub box_s[A=>B]]
        return ("gci_nested", UNIVERSAL, TOPC, s, ext_concept(lhs),
                ext_concept(rhs))
    raise PreprocessError(f"not a normal statement: {st!r}")


def to_extended_facts(kb: KnowledgeBase) -> FactStore:
    """Seed FactStore of a normal-form KB, with universes registered."""
    if not is_normal_form(kb):
        raise PreprocessError("input KB is not in normal form")
    vocab = vocabulary_of(kb)
    uni = Universes()
    uni.standpoints |= vocab.standpoint_names
    uni.roles |= vocab.role_names
    uni.individuals |= vocab.individual_names
    uni.concepts |= {("cn", n) for n in vocab.concept_names}
    uni.concepts |= {("nom", a) for a in vocab.individual_names}
    uni.concepts |= {("self", r) for r in vocab.role_names}
    store = FactStore(uni)
    for st in kb.statements:
        store.add(statement_to_fact(st))
    return store


def add_witness_axioms(store: FactStore) -> FactStore:
    """Add, per (diamond target dia_s B, individual a), a fresh witness
    standpoint below s and a fresh marker concept tying a's B-membership
    under s to a dedicated precisification set. Returns a new store."""
    out = store.copy()
    targets = sorted(
        {(f[3], f[4]) for f in store.by_shape.get("gci_dia_right", ())},
        key=repr,
    )
    individuals = sorted(store.universes.individuals)
    n = 0
    for s, b in targets:
        for a in individuals:
            sp = f"{RESERVED_PREFIX}w{n}_sp"
            p = f"{RESERVED_PREFIX}w{n}_p"
            n += 1
            out.universes.standpoints.add(sp)
            out.universes.concepts.add(("cn", p))
            out.add(("sharper", sp, s))
            out.add(("gci_nested", UNIVERSAL, ("nom", a), s, b, ("cn", p)))
            out.add(("gci_nested", UNIVERSAL, ("cn", p), sp, TOPC, b))
    return out


def prep(kb: KnowledgeBase) -> FactStore:
    """Full preprocessing pipeline: normalize, encode, add witnesses."""
    return add_witness_axioms(to_extended_facts(normalize(kb)))
