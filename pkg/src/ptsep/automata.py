"""Finite automata over named states: a line-based text format, language
operations, and the alphabet-restricted graph queries behind the decision
procedures in the rest of the package.

Automata are immutable; every operation returns a fresh automaton. State and
symbol names are plain tokens (nonempty, no whitespace, no ``#``). Anything
that can influence observable output (state naming, witness words, serialized
text) is produced by iterating in sorted order, so results are reproducible
across processes regardless of hash seeding.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

Word = tuple[str, ...]
Transition = tuple[str, str, str]

EPSILON: Word = ()


class AutomatonError(Exception):
    """An automaton was constructed or used inconsistently."""


class ParseError(AutomatonError):
    """The automaton text format was violated."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class AlphabetMismatchError(AutomatonError):
    """An operation received operands over incompatible alphabets."""


def _check_token(token: str, what: str) -> None:
    if not token or "#" in token or any(ch.isspace() for ch in token):
        raise AutomatonError(
            f"invalid {what} {token!r}: names are nonempty tokens without whitespace or '#'"
        )


def letters_of(w: Iterable[str]) -> frozenset[str]:
    """The set of symbols occurring in a word."""
    return frozenset(w)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton (no epsilon moves).

    The transition relation may be partial. ``states`` may be empty (the
    zero-state automaton produced by :func:`trim` on an empty language), in
    which case ``initial`` is empty as well and no word is accepted.
    """

    states: frozenset[str]
    alphabet: frozenset[str]
    transitions: frozenset[Transition]
    initial: frozenset[str]
    final: frozenset[str]

    def __post_init__(self):
        for name in self.states:
            _check_token(name, "state name")
        for name in self.alphabet:
            _check_token(name, "symbol")
        for src, sym, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise AutomatonError(f"transition uses undeclared state: {src} {sym} {dst}")
            if sym not in self.alphabet:
                raise AutomatonError(f"transition uses undeclared symbol: {src} {sym} {dst}")
        if not self.initial <= self.states:
            raise AutomatonError("initial states must be declared states")
        if not self.final <= self.states:
            raise AutomatonError("final states must be declared states")

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        alphabet: Iterable[str],
        transitions: Iterable[Sequence[str]],
        initial: Iterable[str],
        final: Iterable[str],
    ) -> "Nfa":
        return cls(
            frozenset(states),
            frozenset(alphabet),
            frozenset((s, a, d) for s, a, d in transitions),
            frozenset(initial),
            frozenset(final),
        )

    @cached_property
    def _succ(self) -> dict[tuple[str, str], frozenset[str]]:
        table: dict[tuple[str, str], set[str]] = {}
        for src, sym, dst in self.transitions:
            table.setdefault((src, sym), set()).add(dst)
        return {key: frozenset(val) for key, val in table.items()}

    def successors(self, state: str, symbol: str) -> frozenset[str]:
        return self._succ.get((state, symbol), frozenset())

    def step_set(self, states: Iterable[str], symbol: str) -> frozenset[str]:
        out: set[str] = set()
        for q in states:
            out |= self._succ.get((q, symbol), frozenset())
        return frozenset(out)


@dataclass(frozen=True)
class Dfa(Nfa):
    """Complete deterministic automaton: exactly one initial state and exactly
    one transition per (state, symbol) pair over the declared alphabet."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.initial) != 1:
            raise AutomatonError("a DFA declares exactly one initial state")
        seen: set[tuple[str, str]] = set()
        for src, sym, _ in self.transitions:
            if (src, sym) in seen:
                raise AutomatonError(f"duplicate transition for ({src}, {sym}) in a DFA")
            seen.add((src, sym))
        for q in self.states:
            for sym in self.alphabet:
                if (q, sym) not in seen:
                    raise AutomatonError(f"incomplete DFA: no transition for ({q}, {sym})")

    @cached_property
    def _delta(self) -> dict[tuple[str, str], str]:
        return {(src, sym): dst for src, sym, dst in self.transitions}

    @property
    def start(self) -> str:
        return next(iter(self.initial))

    def step(self, state: str, symbol: str) -> str:
        return self._delta[(state, symbol)]


# ---------------------------------------------------------------------------
# text format


_HEADER_KEYS = ("kind", "states", "alphabet", "initial", "final")


def parse_automaton(text: str) -> Nfa:
    """Parse the line-based automaton format.

    Lines are ``kind:``, ``states:``, ``alphabet:``, ``initial:``, ``final:``
    (each exactly once, any order) plus any number of
    ``trans: <src> <symbol> <dst>`` lines. ``#`` starts a comment; tokens are
    whitespace separated. Returns a :class:`Dfa` when the header declares
    ``kind: dfa`` (which additionally requires a single initial state and a
    total transition function).
    """
    fields: dict[str, tuple[list[str], int]] = {}
    trans: list[tuple[list[str], int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if not key.endswith(":"):
            raise ParseError(f"expected '<key>:' at start of line, got {key!r}", ln)
        key = key[:-1]
        values = tokens[1:]
        if key == "trans":
            if len(values) != 3:
                raise ParseError("trans line needs '<src> <symbol> <dst>'", ln)
            trans.append((values, ln))
        elif key in _HEADER_KEYS:
            if key in fields:
                raise ParseError(f"duplicate '{key}:' line", ln)
            fields[key] = (values, ln)
        else:
            raise ParseError(f"unknown key {key!r}", ln)

    for req in _HEADER_KEYS:
        if req not in fields:
            raise ParseError(f"missing {req}")

    kind_vals, kind_ln = fields["kind"]
    if len(kind_vals) != 1 or kind_vals[0] not in ("nfa", "dfa"):
        raise ParseError("kind must be 'nfa' or 'dfa'", kind_ln)
    kind = kind_vals[0]

    def token_set(key: str) -> frozenset[str]:
        values, ln = fields[key]
        if len(values) != len(set(values)):
            raise ParseError(f"duplicate token in '{key}:' line", ln)
        return frozenset(values)

    states = token_set("states")
    alphabet = token_set("alphabet")
    for key in ("initial", "final"):
        values, ln = fields[key]
        for tok in values:
            if tok not in states:
                raise ParseError(f"undeclared state {tok!r} in '{key}:' line", ln)
    initial = token_set("initial")
    final = token_set("final")

    triples: set[Transition] = set()
    seen_pairs: dict[tuple[str, str], int] = {}
    for (src, sym, dst), ln in trans:
        if src not in states:
            raise ParseError(f"undeclared state {src!r}", ln)
        if dst not in states:
            raise ParseError(f"undeclared state {dst!r}", ln)
        if sym not in alphabet:
            raise ParseError(f"undeclared symbol {sym!r}", ln)
        if kind == "dfa" and (src, sym) in seen_pairs and (src, sym, dst) not in triples:
            raise ParseError(f"duplicate transition for ({src}, {sym}) in a DFA", ln)
        seen_pairs[(src, sym)] = ln
        triples.add((src, sym, dst))

    try:
        if kind == "dfa":
            return Dfa.build(states, alphabet, triples, initial, final)
        return Nfa.build(states, alphabet, triples, initial, final)
    except AutomatonError as exc:
        raise ParseError(str(exc)) from exc


def serialize_automaton(a: Nfa) -> str:
    """Canonical text form: fixed key order, all token lists sorted, one
    transition per line. ``serialize . parse . serialize`` is a fixpoint."""
    kind = "dfa" if isinstance(a, Dfa) else "nfa"
    lines = [
        f"kind: {kind}",
        ("states: " + " ".join(sorted(a.states))).rstrip(),
        ("alphabet: " + " ".join(sorted(a.alphabet))).rstrip(),
        ("initial: " + " ".join(sorted(a.initial))).rstrip(),
        ("final: " + " ".join(sorted(a.final))).rstrip(),
    ]
    for src, sym, dst in sorted(a.transitions):
        lines.append(f"trans: {src} {sym} {dst}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# language operations


def membership(a: Nfa, w: Word) -> bool:
    """Word acceptance by set simulation."""
    for sym in w:
        if sym not in a.alphabet:
            raise AlphabetMismatchError(f"symbol {sym!r} is not in the alphabet")
    current: frozenset[str] = frozenset(a.initial)
    for sym in w:
        if not current:
            return False
        current = a.step_set(current, sym)
    return bool(current & a.final)


def lift_alphabet(a: Nfa, alphabet: Iterable[str]) -> Nfa:
    """Reinterpret over a larger alphabet; the language is unchanged since the
    new symbols have no transitions. Always returns a plain Nfa."""
    alphabet = frozenset(alphabet)
    if not a.alphabet <= alphabet:
        raise AlphabetMismatchError("lift target must contain the current alphabet")
    return Nfa(a.states, alphabet, a.transitions, a.initial, a.final)


def language_empty(a: Nfa) -> bool:
    """True when no word is accepted."""
    return not trim(a).states


def subset_construction(a: Nfa) -> Dfa:
    """Determinize by the subset construction.

    Only subsets reachable from the set of initial states are kept; the empty
    subset acts as the rejecting sink. Subset states are named
    ``{m1,m2,...}`` by their sorted members (the empty subset is ``{}``).
    """
    letters = sorted(a.alphabet)

    def name(subset: frozenset[str]) -> str:
        return "{" + ",".join(sorted(subset)) + "}"

    start = frozenset(a.initial)
    order: list[frozenset[str]] = [start]
    seen = {start}
    triples: set[Transition] = set()
    for subset in order:
        for sym in letters:
            target = a.step_set(subset, sym)
            triples.add((name(subset), sym, name(target)))
            if target not in seen:
                seen.add(target)
                order.append(target)
    states = {name(s) for s in seen}
    final = {name(s) for s in seen if s & a.final}
    return Dfa.build(states, a.alphabet, triples, {name(start)}, final)


def minimize(d: Dfa) -> Dfa:
    """The minimal complete DFA for L(d).

    Unreachable states are dropped and equivalent states merged by partition
    refinement; each merged class is named after its lexicographically least
    member. An empty language collapses to a single non-accepting sink state.
    """
    letters = sorted(d.alphabet)
    start = d.start
    reachable: list[str] = [start]
    seen = {start}
    for q in reachable:
        for sym in letters:
            t = d.step(q, sym)
            if t not in seen:
                seen.add(t)
                reachable.append(t)

    block: dict[str, int] = {q: int(q in d.final) for q in seen}
    while True:
        signature = {
            q: (block[q], tuple(block[d.step(q, sym)] for sym in letters)) for q in seen
        }
        ids: dict[tuple, int] = {}
        refined: dict[str, int] = {}
        for q in sorted(seen):
            sig = signature[q]
            if sig not in ids:
                ids[sig] = len(ids)
            refined[q] = ids[sig]
        if refined == block:
            break
        block = refined

    representative: dict[int, str] = {}
    for q in sorted(seen):
        representative.setdefault(block[q], q)
    rename = {q: representative[block[q]] for q in seen}
    states = set(rename.values())
    triples = {(rename[q], sym, rename[d.step(q, sym)]) for q in seen for sym in letters}
    final = {rename[q] for q in seen if q in d.final}
    return Dfa.build(states, d.alphabet, triples, {rename[start]}, final)


def _canonical_table(d: Dfa) -> tuple:
    letters = sorted(d.alphabet)
    ids = {d.start: 0}
    order = [d.start]
    rows = []
    for q in order:
        row = []
        for sym in letters:
            t = d.step(q, sym)
            if t not in ids:
                ids[t] = len(ids)
                order.append(t)
            row.append(ids[t])
        rows.append(tuple(row))
    accepting = frozenset(ids[q] for q in order if q in d.final)
    return (tuple(rows), accepting)


def equivalent(a: Nfa, b: Nfa) -> bool:
    """Language equality over a shared alphabet, decided by comparing the
    canonically renumbered minimal DFAs."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("equivalence requires a shared alphabet")
    da = minimize(subset_construction(a))
    db = minimize(subset_construction(b))
    return _canonical_table(da) == _canonical_table(db)


def trim(a: Nfa) -> Nfa:
    """Keep exactly the states that lie on some accepting path (reachable from
    an initial state and co-reachable to a final state). The language is
    unchanged; the result may have zero states and is a plain Nfa even when
    the input was complete."""
    forward: set[str] = set()
    queue = deque(sorted(a.initial))
    forward.update(queue)
    succ: dict[str, list[str]] = {}
    pred: dict[str, list[str]] = {}
    for src, _, dst in a.transitions:
        succ.setdefault(src, []).append(dst)
        pred.setdefault(dst, []).append(src)
    while queue:
        q = queue.popleft()
        for nxt in succ.get(q, ()):
            if nxt not in forward:
                forward.add(nxt)
                queue.append(nxt)
    backward: set[str] = set()
    queue = deque(sorted(a.final))
    backward.update(queue)
    while queue:
        q = queue.popleft()
        for prv in pred.get(q, ()):
            if prv not in backward:
                backward.add(prv)
                queue.append(prv)
    keep = frozenset(forward & backward)
    triples = {(s, y, d) for (s, y, d) in a.transitions if s in keep and d in keep}
    return Nfa(keep, a.alphabet, frozenset(triples), a.initial & keep, a.final & keep)


def product_intersection(a: Nfa, b: Nfa) -> Nfa:
    """Synchronized product recognizing L(a) & L(b); states are reachable
    pairs named ``(p,q)``."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("product requires a shared alphabet")
    letters = sorted(a.alphabet)

    def name(p: str, q: str) -> str:
        return f"({p},{q})"

    start_pairs = sorted((p, q) for p in a.initial for q in b.initial)
    order = list(start_pairs)
    seen = set(start_pairs)
    triples: set[Transition] = set()
    for (p, q) in order:
        for sym in letters:
            for pn in sorted(a.successors(p, sym)):
                for qn in sorted(b.successors(q, sym)):
                    triples.add((name(p, q), sym, name(pn, qn)))
                    if (pn, qn) not in seen:
                        seen.add((pn, qn))
                        order.append((pn, qn))
    states = {name(p, q) for (p, q) in seen}
    initial = {name(p, q) for (p, q) in start_pairs}
    final = {name(p, q) for (p, q) in seen if p in a.final and q in b.final}
    return Nfa.build(states, a.alphabet, triples, initial, final)


# ---------------------------------------------------------------------------
# alphabet-restricted graph queries


def _restricted_adjacency(a: Nfa, gamma: frozenset[str]) -> dict[str, list[str]]:
    adj: dict[str, set[str]] = {q: set() for q in a.states}
    for src, sym, dst in a.transitions:
        if sym in gamma:
            adj[src].add(dst)
    return {q: sorted(vals) for q, vals in adj.items()}


def restricted_reach(a: Nfa, gamma: Iterable[str]) -> dict[str, frozenset[str]]:
    """For each state, the set of states reachable by words over ``gamma``.
    The relation is reflexive and transitive (every state reaches itself)."""
    gamma = frozenset(gamma)
    if not gamma <= a.alphabet:
        raise AlphabetMismatchError("gamma must be a subset of the alphabet")
    adj = _restricted_adjacency(a, gamma)
    result: dict[str, frozenset[str]] = {}
    for root in a.states:
        seen = {root}
        queue = deque([root])
        while queue:
            q = queue.popleft()
            for nxt in adj[q]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        result[root] = frozenset(seen)
    return result


@dataclass(frozen=True)
class Component:
    """A strongly connected component of an alphabet-restricted transition
    graph, annotated with the labels of its internal transitions."""

    states: frozenset[str]
    letters: frozenset[str]


def scc_decomposition(a: Nfa, gamma: Iterable[str]) -> list[Component]:
    """Strongly connected components of the ``gamma``-restricted graph in
    topological order (edges point from earlier to later components).

    Each component carries the set of labels on transitions with both
    endpoints inside it; a singleton without a self-loop carries no letters.
    """
    gamma = frozenset(gamma)
    if not gamma <= a.alphabet:
        raise AlphabetMismatchError("gamma must be a subset of the alphabet")
    adj = _restricted_adjacency(a, gamma)

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[set[str]] = []

    for root in sorted(a.states):
        if root in index:
            continue
        work: list[tuple[str, Iterable[str]]] = []
        index[root] = low[root] = len(index)
        stack.append(root)
        on_stack.add(root)
        work.append((root, iter(adj[root])))
        while work:
            q, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = len(index)
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[q] = min(low[q], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[q])
            if low[q] == index[q]:
                comp: set[str] = set()
                while True:
                    v = stack.pop()
                    on_stack.discard(v)
                    comp.add(v)
                    if v == q:
                        break
                comps.append(comp)
    comps.reverse()

    member: dict[str, int] = {}
    for i, comp in enumerate(comps):
        for q in comp:
            member[q] = i
    letters: list[set[str]] = [set() for _ in comps]
    for src, sym, dst in a.transitions:
        if sym in gamma and member[src] == member[dst]:
            letters[member[src]].add(sym)
    return [Component(frozenset(c), frozenset(l)) for c, l in zip(comps, letters)]


def component_of(decomposition: Iterable[Component], state: str) -> Component:
    for comp in decomposition:
        if state in comp.states:
            return comp
    raise AutomatonError(f"state {state!r} is in no component")


def cycle_over_alphabet(
    a: Nfa, gamma: Iterable[str], require_initial_and_final: bool = False
) -> Component | None:
    """A component of the ``gamma``-restricted graph whose internal letters are
    exactly ``gamma``, or None. Such a component exists iff some state lies on
    a cycle using every letter of ``gamma`` and no others (cycles inside one
    component compose). With the flag set, the component must also contain an
    initial and a final state."""
    gamma = frozenset(gamma)
    if not gamma:
        raise AutomatonError("gamma must be nonempty")
    for comp in scc_decomposition(a, gamma):
        if comp.letters != gamma:
            continue
        if require_initial_and_final and not (
            comp.states & a.initial and comp.states & a.final
        ):
            continue
        return comp
    return None


def self_loop_letters(d: Nfa, q: str) -> frozenset[str]:
    """Symbols under which ``q`` has a transition back to itself."""
    if q not in d.states:
        raise AutomatonError(f"unknown state {q!r}")
    return frozenset(sym for (src, sym, dst) in d.transitions if src == q and dst == q)


# ---------------------------------------------------------------------------
# deterministic witness-path helpers


def shortest_run(
    a: Nfa,
    sources: Iterable[str],
    targets: Iterable[str],
    gamma: Iterable[str] | None = None,
    within: Iterable[str] | None = None,
) -> tuple[Word, tuple[str, ...]] | None:
    """Shortest labeled run from any source to any target as
    ``(word, state_sequence)``, or None when unreachable.

    BFS visits states and symbols in sorted order, so the same run is found on
    every invocation. ``gamma`` restricts the usable symbols and ``within``
    restricts the visitable states. A source that is already a target yields
    the empty run.
    """
    allowed = frozenset(a.alphabet if gamma is None else gamma)
    inside = None if within is None else frozenset(within)
    target_set = set(targets)
    source_list = sorted(sources)
    for src in source_list:
        if src in target_set:
            return (EPSILON, (src,))
    parent: dict[str, tuple[str, str]] = {}
    seen = set(source_list)
    queue = deque(source_list)
    edges: dict[str, list[tuple[str, str]]] = {}
    for src, sym, dst in a.transitions:
        if sym in allowed:
            edges.setdefault(src, []).append((sym, dst))
    for lst in edges.values():
        lst.sort()
    while queue:
        q = queue.popleft()
        for sym, nxt in edges.get(q, ()):
            if nxt in seen or (inside is not None and nxt not in inside):
                continue
            seen.add(nxt)
            parent[nxt] = (q, sym)
            if nxt in target_set:
                word: list[str] = []
                path = [nxt]
                cur = nxt
                while cur in parent:
                    prev, psym = parent[cur]
                    word.append(psym)
                    path.append(prev)
                    cur = prev
                word.reverse()
                path.reverse()
                return (tuple(word), tuple(path))
            queue.append(nxt)
    return None


def cycle_word_covering(
    a: Nfa, anchor: str, gamma: Iterable[str], preferred: Sequence[str] = ()
) -> Word:
    """A word labeling a closed run at ``anchor`` with letter set exactly
    ``gamma``, staying inside the anchor's strongly connected component of the
    gamma restriction. That component must carry exactly ``gamma`` as internal
    letters (callers establish this via the common-cycle fixpoint).

    Outstanding letters are collected following ``preferred`` order first
    (then lexicographic) with shortest connecting runs; connector letters
    count as collected, which keeps the word short.
    """
    gamma = frozenset(gamma)
    comp = component_of(scc_decomposition(a, gamma), anchor)
    if comp.letters != gamma:
        raise AutomatonError("anchor's component does not carry exactly the requested letters")
    rank = {sym: i for i, sym in enumerate(preferred)}

    def order_key(sym: str) -> tuple[int, str]:
        return (rank.get(sym, len(rank)), sym)

    edges_by_letter: dict[str, list[tuple[str, str]]] = {}
    for src, sym, dst in a.transitions:
        if sym in gamma and src in comp.states and dst in comp.states:
            edges_by_letter.setdefault(sym, []).append((src, dst))
    for lst in edges_by_letter.values():
        lst.sort()

    remaining = set(gamma)
    current = anchor
    word: list[str] = []
    while remaining:
        target_sym = min(remaining, key=order_key)
        sources = {src for src, _ in edges_by_letter[target_sym]}
        run = shortest_run(a, {current}, sources, gamma=gamma, within=comp.states)
        assert run is not None  # anchor's component is strongly connected
        connector, path = run
        at = path[-1]
        dst = min(d for (s, d) in edges_by_letter[target_sym] if s == at)
        word.extend(connector)
        word.append(target_sym)
        remaining -= set(connector)
        remaining.discard(target_sym)
        current = dst
    back = shortest_run(a, {current}, {anchor}, gamma=gamma, within=comp.states)
    assert back is not None
    word.extend(back[0])
    return tuple(word)


def closed_run_covering_word(
    a: Nfa, anchor: str, gamma: Iterable[str], target: Word
) -> Word:
    """A word labeling a closed run at ``anchor`` with letter set exactly
    ``gamma`` that contains ``target`` as a subsequence. Preconditions as in
    :func:`cycle_word_covering`, plus letters(target) must lie inside gamma.

    The run chases the letters of ``target`` in order with shortest connecting
    runs, so two such words over the same gamma stay roughly aligned; that
    keeps pump counts small when one is repeatedly embedded into powers of the
    other.
    """
    gamma = frozenset(gamma)
    comp = component_of(scc_decomposition(a, gamma), anchor)
    if comp.letters != gamma:
        raise AutomatonError("anchor's component does not carry exactly the requested letters")
    if not letters_of(target) <= gamma:
        raise AutomatonError("target word uses letters outside gamma")

    edges_by_letter: dict[str, list[tuple[str, str]]] = {}
    for src, sym, dst in a.transitions:
        if sym in gamma and src in comp.states and dst in comp.states:
            edges_by_letter.setdefault(sym, []).append((src, dst))
    for lst in edges_by_letter.values():
        lst.sort()

    current = anchor
    word: list[str] = []
    for sym in target:
        sources = {src for src, _ in edges_by_letter[sym]}
        run = shortest_run(a, {current}, sources, gamma=gamma, within=comp.states)
        assert run is not None  # anchor's component is strongly connected
        connector, path = run
        at = path[-1]
        word.extend(connector)
        word.append(sym)
        current = min(d for (s, d) in edges_by_letter[sym] if s == at)
    remaining = set(gamma) - set(word)
    while remaining:
        sym = min(remaining)
        sources = {src for src, _ in edges_by_letter[sym]}
        run = shortest_run(a, {current}, sources, gamma=gamma, within=comp.states)
        assert run is not None
        connector, path = run
        word.extend(connector)
        word.append(sym)
        remaining -= set(connector)
        remaining.discard(sym)
        current = min(d for (s, d) in edges_by_letter[sym] if s == path[-1])
    back = shortest_run(a, {current}, {anchor}, gamma=gamma, within=comp.states)
    assert back is not None
    word.extend(back[0])
    return tuple(word)
