"""Semi-naive fixpoint saturation of a fact store under the calculus.

The engine seeds the tautology schemas over the registered universes, then
works a queue of not-yet-joined facts: each popped fact is tried in every
premise position it can fill, the remaining premises are joined through
on-demand hash indexes, and new conclusions are interned with provenance
and appended to the queue. A join only admits facts no newer than the
popped one, so every premise combination is produced exactly once — when
its newest member is processed.

Two mechanical speedups, invisible in the results:
- every (rule, premise position) pair is compiled once, at import time,
  into a closure of plain loops and tuple accesses; the declarative table
  in `rules` stays the single source of truth (trace replay re-checks
  every derivation against it through `apply_rule`);
- inside a run, all terms (standpoints, roles, individuals, extended
  concepts) are interned to integers, with side tables linking nominals
  and self-loop concepts to their individual/role; the result store is
  converted back to readable tuples.

The fact space is fixed by the universes, so the run is bounded by an
explicit polynomial; exceeding it (or a caller-supplied limit) raises,
signalling an engine bug rather than a big input.
"""

from __future__ import annotations

from collections import deque

from .preprocess import (
    BOTC,
    Fact,
    FactStore,
    REFUTATION_FACT,
    TOPC,
    Universes,
)
from .rules import RULES, Rule, Var, instantiate_conclusion


class FactLimitExceeded(RuntimeError):
    pass


def polynomial_fact_bound(universes: Universes) -> int:
    """Worst-case count of distinct facts constructible over the universes."""
    ns = len(universes.standpoints)
    nr = len(universes.roles)
    ni = len(universes.individuals)
    nc = len(universes.concepts)
    return (
        ns**2            # sharper
        + ns**3          # sharper_intersection
        + ns * nr**2     # ria2
        + ns * nr**3     # ria3
        + ns**2 * nc**3  # gci_nested
        + ns**2 * nc     # gci_dia_right
        + ns * nc**2 * nr  # gci_ex_right
        + ns * nc**2 * nr  # gci_ex_left
        + ns * nc**3     # gci_con_left
        + ns * nr * ni**2  # role_assertion
    )


# ---------------------------------------------------------------------------
# Term interning (process-global, append-only)
# ---------------------------------------------------------------------------

_TERMS: list = []
_TERM_IDS: dict = {}
#: nominal concept id <-> individual id, self concept id <-> role id
NOM2IND: dict[int, int] = {}
IND2NOM: dict[int, int] = {}
SELF2ROLE: dict[int, int] = {}
ROLE2SELF: dict[int, int] = {}


def _intern(term) -> int:
    tid = _TERM_IDS.get(term)
    if tid is None:
        tid = len(_TERMS)
        _TERMS.append(term)
        _TERM_IDS[term] = tid
        if isinstance(term, tuple) and len(term) == 2:
            inner = _intern(term[1])
            if term[0] == "nom":
                NOM2IND[tid] = inner
                IND2NOM[inner] = tid
            elif term[0] == "self":
                SELF2ROLE[tid] = inner
                ROLE2SELF[inner] = tid
    return tid


def _intern_fact(fact: Fact) -> tuple:
    return (fact[0],) + tuple(_intern(t) for t in fact[1:])


def _readable_fact(ifact: tuple) -> Fact:
    return (ifact[0],) + tuple(_TERMS[t] for t in ifact[1:])


# ---------------------------------------------------------------------------
# Rule compilation
# ---------------------------------------------------------------------------

def _is_nested_var(p) -> bool:
    return (isinstance(p, tuple) and len(p) == 2 and p[0] in ("nom", "self")
            and isinstance(p[1], Var))


# variable side of nested patterns, per tag: (destructure map, rebuild map)
_NESTED_MAPS = {"nom": ("NOM2IND", "IND2NOM"), "self": ("SELF2ROLE", "ROLE2SELF")}


def _compile_position(rule: Rule, i: int):
    """Compile the join starting from premise position `i` of `rule` into
    a closure fn(lookup, fact_ids, fact, fid, ranges, emit)."""
    consts: dict = {}

    def term_expr(p) -> str:
        if isinstance(p, Var):
            return f"v_{p.name}"
        if _is_nested_var(p):
            return f"{_NESTED_MAPS[p[0]][1]}[v_{p[1].name}]"
        key = f"K{len(consts)}"
        consts[key] = _intern(p)
        return key

    lines: list[str] = ["def _fn(lookup, fact_ids, fact, fid, ranges, emit):"]
    ind = "    "
    bound: set[str] = set()

    def destructure(src: str, pat: tuple, bail: str) -> list[str]:
        out = []
        for j, p in enumerate(pat[1:], start=1):
            if p is None:  # wildcard from _defer_pattern
                continue
            if isinstance(p, Var):
                if p.name in bound:
                    out.append(f"{ind}if {src}[{j}] != v_{p.name}: {bail}")
                else:
                    out.append(f"{ind}v_{p.name} = {src}[{j}]")
                    bound.add(p.name)
            elif _is_nested_var(p):
                v = p[1]
                dmap = _NESTED_MAPS[p[0]][0]
                if v.name in bound:
                    out.append(f"{ind}if {dmap}.get({src}[{j}], -1) != "
                               f"v_{v.name}: {bail}")
                else:
                    out.append(f"{ind}v_{v.name} = {dmap}.get({src}[{j}], -1)")
                    out.append(f"{ind}if v_{v.name} < 0: {bail}")
                    bound.add(v.name)
            else:
                out.append(f"{ind}if {src}[{j}] != {term_expr(p)}: {bail}")
        return out

    lines.append(f"{ind}p{i} = fact")
    lines.extend(destructure("fact", rule.premises[i], "return"))

    for j in (k for k in range(len(rule.premises)) if k != i):
        pat = rule.premises[j]
        positions, value_exprs, deferred = [], [], []
        for k, p in enumerate(pat[1:], start=1):
            if isinstance(p, Var):
                groundable = p.name in bound
            elif _is_nested_var(p):
                groundable = p[1].name in bound
            else:
                groundable = True
            if groundable:
                positions.append(k)
                value_exprs.append(term_expr(p))
            else:
                deferred.append((k, p))
        vals = ("(" + ", ".join(value_exprs)
                + ("," if len(value_exprs) == 1 else "") + ")")
        lines.append(f"{ind}for p{j} in lookup({pat[0]!r}, "
                     f"{tuple(positions)!r}, {vals}):")
        ind += "    "
        lines.append(f"{ind}if fact_ids[p{j}] > fid: continue")
        lines.extend(
            destructure(f"p{j}", _defer_pattern(pat, deferred), "continue"))

    for var, kind in rule.ranges:
        if var not in bound:
            lines.append(f"{ind}for v_{var} in ranges[{kind!r}]:")
            ind += "    "
            bound.add(var)

    concl = ("(" + ", ".join(
        [repr(rule.conclusion[0])]
        + [term_expr(p) for p in rule.conclusion[1:]]) + ")")
    prems = ("(" + ", ".join(f"p{k}" for k in range(len(rule.premises)))
             + ("," if len(rule.premises) == 1 else "") + ")")
    lines.append(f"{ind}_c = {concl}")
    lines.append(f"{ind}if _c not in fact_ids:")
    lines.append(f"{ind}    emit(_c, {prems}, {rule.name!r})")

    ns: dict = dict(consts)
    ns.update(NOM2IND=NOM2IND, IND2NOM=IND2NOM,
              SELF2ROLE=SELF2ROLE, ROLE2SELF=ROLE2SELF)
    exec("\n".join(lines), ns)  # noqa: S102 - compiling our own rule table
    return ns["_fn"]


def _defer_pattern(pat: tuple, deferred: list) -> tuple:
    """A pattern keeping only the deferred positions (others wildcarded)."""
    wild: list = [pat[0]] + [None] * (len(pat) - 1)
    for k, p in deferred:
        wild[k] = p
    return tuple(wild)


def _compile_all():
    dispatch: dict[str, list] = {}
    for rule in RULES:
        for i, pat in enumerate(rule.premises):
            dispatch.setdefault(pat[0], []).append(_compile_position(rule, i))
    return dispatch


_DISPATCH = _compile_all()


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------

def seed_schemas(store: FactStore) -> None:
    """Add all tautology-schema instances (rules without premises)."""
    for rule in RULES:
        if not rule.premises:
            for fact in instantiate_conclusion(rule, {}, store.universes):
                store.add(fact, rule.name, ())


class _Stop(Exception):
    pass


class _EngineStore:
    """Interned-fact twin of FactStore used inside one saturation run."""

    __slots__ = ("facts", "fact_ids", "provenance", "by_shape", "_indexes")

    def __init__(self) -> None:
        self.facts: list[tuple] = []
        self.fact_ids: dict[tuple, int] = {}
        self.provenance: list[tuple[str, tuple[int, ...]]] = []
        self.by_shape: dict[str, list[tuple]] = {}
        self._indexes: dict[tuple, dict[tuple, list[tuple]]] = {}

    def add(self, fact: tuple, rule: str, premises: tuple[int, ...]) -> bool:
        if fact in self.fact_ids:
            return False
        self.fact_ids[fact] = len(self.facts)
        self.facts.append(fact)
        self.provenance.append((rule, premises))
        self.by_shape.setdefault(fact[0], []).append(fact)
        for key, table in self._indexes.items():
            if key[0] == fact[0]:
                vals = tuple(fact[p] for p in key[1])
                table.setdefault(vals, []).append(fact)
        return True

    def lookup_pos(self, shape: str, positions: tuple[int, ...],
                   values: tuple) -> list[tuple]:
        if not positions:
            return self.by_shape.get(shape, _NO_FACTS)
        table = self._indexes.get((shape, positions))
        if table is None:
            table = {}
            for f in self.by_shape.get(shape, ()):
                table.setdefault(tuple(f[p] for p in positions), []).append(f)
            self._indexes[(shape, positions)] = table
        return table.get(values, _NO_FACTS)


_NO_FACTS: list = []


def saturate(store: FactStore, early_exit_on_refutation: bool = True,
             fact_limit: int | None = None,
             worklist: str = "fifo") -> FactStore:
    """Closure of `store` under all rules; returns a new store.

    With `early_exit_on_refutation` the run may stop as soon as the
    refutation fact appears (the result is then marked partial).
    `worklist` ("fifo" or "lifo") only affects processing order, never the
    final set — used by the order-independence tests.
    """
    bound = polynomial_fact_bound(store.universes)
    limit = bound if fact_limit is None else fact_limit

    # Intern the universes first so the nominal/self side tables are
    # complete before any rule fires.
    ranges = {
        "standpoint": [_intern(t) for t in sorted(store.universes.standpoints)],
        "role": [_intern(t) for t in sorted(store.universes.roles)],
        "individual": [_intern(t) for t in sorted(store.universes.individuals)],
        "concept": [_intern(t) for t in
                    sorted(store.universes.concepts, key=repr)],
    }
    refutation = _intern_fact(REFUTATION_FACT)

    eng = _EngineStore()
    for fid, fact in enumerate(store.facts):
        rule, premises = store.provenance[fid]
        eng.add(_intern_fact(fact), rule, premises)
    for rule in RULES:
        if not rule.premises:
            for fact in instantiate_conclusion(rule, {}, store.universes):
                eng.add(_intern_fact(fact), rule.name, ())
    if len(eng.facts) > limit:
        raise FactLimitExceeded(f"{len(eng.facts)} facts exceed limit {limit}")

    queue: deque[tuple] = deque(eng.facts)
    pop = queue.popleft if worklist == "fifo" else queue.pop
    fact_ids = eng.fact_ids
    lookup = eng.lookup_pos
    partial = False

    def emit(concl: tuple, premises: tuple, rule_name: str) -> None:
        eng.add(concl, rule_name, tuple(fact_ids[p] for p in premises))
        if len(fact_ids) > limit:
            raise FactLimitExceeded(
                f"{len(fact_ids)} facts exceed limit {limit} (bound {bound})")
        queue.append(concl)
        if early_exit_on_refutation and concl == refutation:
            raise _Stop

    if not (early_exit_on_refutation and refutation in fact_ids):
        try:
            while queue:
                fact = pop()
                fid = fact_ids[fact]
                for fn in _DISPATCH.get(fact[0], ()):
                    fn(lookup, fact_ids, fact, fid, ranges, emit)
        except _Stop:
            partial = True
    elif early_exit_on_refutation:
        partial = True

    out = FactStore(store.universes.copy())
    for fid, ifact in enumerate(eng.facts):
        rule, premises = eng.provenance[fid]
        out.add(_readable_fact(ifact), rule, premises)
    out.partial = partial
    return out


def is_refuted(store: FactStore) -> bool:
    """True iff the refutation fact was derived."""
    return REFUTATION_FACT in store


# ---------------------------------------------------------------------------
# Trace export
# ---------------------------------------------------------------------------

def format_term(term) -> str:
    if isinstance(term, tuple):
        if term == TOPC:
            return "Top"
        if term == BOTC:
            return "Bot"
        if term[0] == "cn":
            return term[1]
        if term[0] == "nom":
            return "{%s}" % term[1]
        if term[0] == "self":
            return f"Self({term[1]})"
    return str(term)


def format_fact(fact: Fact) -> str:
    return f"{fact[0]}({', '.join(format_term(t) for t in fact[1:])})"


def format_derivation(store: FactStore, fid: int) -> str:
    rule, premises = store.provenance[fid]
    line = f"fact {fid}: {format_fact(store.facts[fid])} BY {rule}"
    if premises:
        line += " FROM " + " ".join(str(p) for p in premises)
    return line


def export_trace(store: FactStore) -> str:
    """One derivation line per fact, in derivation (id) order."""
    return "\n".join(format_derivation(store, fid)
                     for fid in range(len(store.facts)))


def refutation_trace(store: FactStore) -> list[str] | None:
    """The derivation lines reachable from the refutation fact, in
    dependency order, or None if the store is not refuted."""
    if REFUTATION_FACT not in store.fact_ids:
        return None
    needed: set[int] = set()
    stack = [store.fact_ids[REFUTATION_FACT]]
    while stack:
        fid = stack.pop()
        if fid in needed:
            continue
        needed.add(fid)
        stack.extend(store.provenance[fid][1])
    return [format_derivation(store, fid) for fid in sorted(needed)]
