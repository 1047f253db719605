"""Separability of two regular languages by a piecewise testable language.

The decision works on a "block product" of the two (trimmed) automata: nodes
are state pairs, letter edges move both sides on a shared letter, and block
edges jump through a pump anchor, a pair of states that both carry a cycle
over exactly the same letter set. Non-separability holds exactly when some
initial pair reaches an accepting pair; the path is returned as a pattern
witness whose pumped expansions yield towers of every height, which is the
machine-checkable evidence that no piecewise testable separator exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque
from typing import Iterator

from .automata import (
    AlphabetMismatchError,
    AutomatonError,
    EPSILON,
    Nfa,
    Word,
    closed_run_covering_word,
    cycle_word_covering,
    letters_of,
    lift_alphabet,
    membership,
    restricted_reach,
    scc_decomposition,
    shortest_run,
    trim,
)
from .oracles import Inconclusive, KptSeparator, Tower, separable_by_kpt

DEFAULT_SEPARATOR_KMAX = 6


@dataclass(frozen=True)
class PumpAnchor:
    """A pair of states (one per automaton) that both lie on a cycle whose
    letter set is exactly ``gamma``."""

    r_a: str
    r_b: str
    gamma: frozenset[str]


@dataclass(frozen=True)
class BlockSegment:
    """One pumped block of a pattern witness.

    Each side enters the anchor, loops a cycle word with letter set exactly
    ``gamma`` any positive number of times, and exits; the two sides read
    their own entry/cycle/exit words, all confined to ``gamma``.
    """

    anchor: PumpAnchor
    a_entry: Word
    a_cycle: Word
    a_exit: Word
    b_entry: Word
    b_cycle: Word
    b_exit: Word

    @property
    def gamma(self) -> frozenset[str]:
        return self.anchor.gamma


@dataclass(frozen=True)
class PatternWitness:
    """An accepting block-product path: shared connector words u_0 .. u_k
    interleaved with k pumped blocks. For every choice of pump counts the
    side-A expansion is accepted by the first automaton and the side-B
    expansion by the second; k = 0 degenerates to a common word u_0."""

    connectors: tuple[Word, ...]
    blocks: tuple[BlockSegment, ...]

    def __post_init__(self):
        if len(self.connectors) != len(self.blocks) + 1:
            raise ValueError("a pattern witness has one more connector than blocks")


@dataclass(frozen=True)
class SepVerdict:
    """Outcome of the separability decision. ``witness`` is present exactly
    when not separable; ``separator`` only when separable, requested, and
    found within the bound (otherwise ``separator_omitted`` is set)."""

    separable: bool
    witness: PatternWitness | None = None
    separator: KptSeparator | None = None
    separator_omitted: bool = False


@dataclass(frozen=True)
class AnchorRelation:
    """A pump anchor together with the states that can enter it and the
    states it can exit to, inside the gamma restriction of each automaton.
    Block edges are exactly (enter_a x enter_b) -> (exit_a x exit_b)."""

    anchor: PumpAnchor
    enter_a: frozenset[str]
    enter_b: frozenset[str]
    exit_a: frozenset[str]
    exit_b: frozenset[str]


@dataclass(frozen=True)
class BlockProduct:
    """The synchronized product of two trimmed automata over a shared
    alphabet, plus the block-edge relations derived from pump anchors."""

    a: Nfa
    b: Nfa
    nodes: frozenset[tuple[str, str]]
    letter_edges: frozenset[tuple[tuple[str, str], str, tuple[str, str]]]
    anchors: tuple[AnchorRelation, ...]

    def block_edges(
        self,
    ) -> Iterator[tuple[tuple[str, str], AnchorRelation, tuple[str, str]]]:
        """Materialize block edges (source pair, relation, target pair);
        intended for small instances, the decision itself never expands this
        product."""
        for rel in self.anchors:
            for p in sorted(rel.enter_a):
                for q in sorted(rel.enter_b):
                    for p2 in sorted(rel.exit_a):
                        for q2 in sorted(rel.exit_b):
                            yield ((p, q), rel, (p2, q2))


def _scc_letter_map(a: Nfa, gamma: frozenset[str], cache: dict) -> dict[str, frozenset[str]]:
    found = cache.get(gamma)
    if found is None:
        found = {}
        for comp in scc_decomposition(a, gamma):
            for q in comp.states:
                found[q] = comp.letters
        cache[gamma] = found
    return found


def _common_gamma(
    a: Nfa,
    b: Nfa,
    r_a: str,
    r_b: str,
    cache_a: dict,
    cache_b: dict,
) -> frozenset[str]:
    gamma = frozenset(a.alphabet)
    while True:
        la = _scc_letter_map(a, gamma, cache_a).get(r_a, frozenset())
        lb = _scc_letter_map(b, gamma, cache_b).get(r_b, frozenset())
        refined = la & lb
        if refined == gamma:
            return gamma
        gamma = refined
        if not gamma:
            return frozenset()


def maximal_common_cycle_alphabet(a: Nfa, b: Nfa, r_a: str, r_b: str) -> frozenset[str]:
    """The greatest letter set Gamma such that both r_a (in a) and r_b (in b)
    lie on a cycle whose letter set is exactly Gamma; empty when none exists.

    Computed as the greatest fixpoint of
    Gamma -> letters(scc of r_a in a|Gamma) & letters(scc of r_b in b|Gamma)
    started from the full alphabet; every common exact cycle alphabet is
    contained in the result.
    """
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("anchors are computed over a shared alphabet")
    if r_a not in a.states:
        raise AutomatonError(f"unknown state {r_a!r} in the first automaton")
    if r_b not in b.states:
        raise AutomatonError(f"unknown state {r_b!r} in the second automaton")
    return _common_gamma(a, b, r_a, r_b, {}, {})


def _lift_pair(a: Nfa, b: Nfa) -> tuple[Nfa, Nfa]:
    union = a.alphabet | b.alphabet
    return lift_alphabet(a, union), lift_alphabet(b, union)


def build_block_product(a: Nfa, b: Nfa) -> BlockProduct:
    """Trim both automata (lifting them to the union alphabet first) and
    assemble nodes, synchronized letter edges, and anchor relations."""
    a, b = _lift_pair(a, b)
    a, b = trim(a), trim(b)
    letters = sorted(a.alphabet)
    nodes = frozenset((p, q) for p in a.states for q in b.states)
    letter_edges: set[tuple[tuple[str, str], str, tuple[str, str]]] = set()
    for p, q in nodes:
        for sym in letters:
            for pn in a.successors(p, sym):
                for qn in b.successors(q, sym):
                    letter_edges.add(((p, q), sym, (pn, qn)))

    cache_a: dict = {}
    cache_b: dict = {}
    reach_a: dict[frozenset[str], dict[str, frozenset[str]]] = {}
    reach_b: dict[frozenset[str], dict[str, frozenset[str]]] = {}
    anchors: list[AnchorRelation] = []
    for r_a in sorted(a.states):
        for r_b in sorted(b.states):
            gamma = _common_gamma(a, b, r_a, r_b, cache_a, cache_b)
            if not gamma:
                continue
            if gamma not in reach_a:
                reach_a[gamma] = restricted_reach(a, gamma)
            if gamma not in reach_b:
                reach_b[gamma] = restricted_reach(b, gamma)
            enter_a = frozenset(p for p in a.states if r_a in reach_a[gamma][p])
            enter_b = frozenset(q for q in b.states if r_b in reach_b[gamma][q])
            anchors.append(
                AnchorRelation(
                    anchor=PumpAnchor(r_a, r_b, gamma),
                    enter_a=enter_a,
                    enter_b=enter_b,
                    exit_a=reach_a[gamma][r_a],
                    exit_b=reach_b[gamma][r_b],
                )
            )
    return BlockProduct(
        a=a,
        b=b,
        nodes=nodes,
        letter_edges=frozenset(letter_edges),
        anchors=tuple(anchors),
    )


def _search_block_product(bp: BlockProduct):
    """BFS from the initial pairs over letter and block edges; each anchor
    fires at most once since its targets do not depend on the source. Returns
    (goal_node, parents) or None; deterministic via sorted exploration."""
    letter_succ: dict[tuple[str, str], list[tuple[str, tuple[str, str]]]] = {}
    for src, sym, dst in bp.letter_edges:
        letter_succ.setdefault(src, []).append((sym, dst))
    for lst in letter_succ.values():
        lst.sort()

    def accepting(node: tuple[str, str]) -> bool:
        return node[0] in bp.a.final and node[1] in bp.b.final

    starts = sorted((p, q) for p in bp.a.initial for q in bp.b.initial)
    parents: dict[tuple[str, str], tuple | None] = {}
    queue: deque[tuple[str, str]] = deque()
    for node in starts:
        if node not in parents:
            parents[node] = None
            if accepting(node):
                return node, parents
            queue.append(node)

    fired: set[int] = set()
    while queue:
        node = queue.popleft()
        p, q = node
        for sym, child in letter_succ.get(node, ()):
            if child in parents:
                continue
            parents[child] = ("letter", sym, node)
            if accepting(child):
                return child, parents
            queue.append(child)
        for idx, rel in enumerate(bp.anchors):
            if idx in fired:
                continue
            if p in rel.enter_a and q in rel.enter_b:
                fired.add(idx)
                for p2 in sorted(rel.exit_a):
                    for q2 in sorted(rel.exit_b):
                        child = (p2, q2)
                        if child in parents:
                            continue
                        parents[child] = ("block", idx, node)
                        if accepting(child):
                            return child, parents
                        queue.append(child)
    return None


def _reconstruct_witness(bp: BlockProduct, goal, parents) -> PatternWitness:
    steps: list[tuple] = []
    cur = goal
    while parents[cur] is not None:
        kind, payload, prev = parents[cur]
        steps.append((kind, payload, prev, cur))
        cur = prev
    steps.reverse()

    connectors: list[Word] = []
    blocks: list[BlockSegment] = []
    pending: list[str] = []
    for kind, payload, prev, node in steps:
        if kind == "letter":
            pending.append(payload)
            continue
        connectors.append(tuple(pending))
        pending = []
        rel = bp.anchors[payload]
        gamma = rel.anchor.gamma
        (p, q), (p2, q2) = prev, node
        a_entry = shortest_run(bp.a, {p}, {rel.anchor.r_a}, gamma=gamma)
        a_exit = shortest_run(bp.a, {rel.anchor.r_a}, {p2}, gamma=gamma)
        b_entry = shortest_run(bp.b, {q}, {rel.anchor.r_b}, gamma=gamma)
        b_exit = shortest_run(bp.b, {rel.anchor.r_b}, {q2}, gamma=gamma)
        assert None not in (a_entry, a_exit, b_entry, b_exit)
        a_cycle = cycle_word_covering(bp.a, rel.anchor.r_a, gamma, preferred=sorted(gamma))
        b_cycle = closed_run_covering_word(bp.b, rel.anchor.r_b, gamma, a_cycle)
        blocks.append(
            BlockSegment(
                anchor=rel.anchor,
                a_entry=a_entry[0],
                a_cycle=a_cycle,
                a_exit=a_exit[0],
                b_entry=b_entry[0],
                b_cycle=b_cycle,
                b_exit=b_exit[0],
            )
        )
    connectors.append(tuple(pending))
    return PatternWitness(connectors=tuple(connectors), blocks=tuple(blocks))


def decide_separability(
    a: Nfa,
    b: Nfa,
    want_separator: bool = False,
    kmax: int = DEFAULT_SEPARATOR_KMAX,
) -> SepVerdict:
    """Decide whether some piecewise testable language contains L(a) and is
    disjoint from L(b).

    Automata over different alphabets are first lifted to the shared union
    (separability is a property of the languages). Not separable is reported
    with a pattern witness; with ``want_separator`` a profile-based separator
    is additionally searched for k = 1..kmax on separable instances and
    ``separator_omitted`` records an unsuccessful or inconclusive search.
    """
    bp = build_block_product(a, b)
    found = _search_block_product(bp)
    if found is not None:
        goal, parents = found
        return SepVerdict(separable=False, witness=_reconstruct_witness(bp, goal, parents))
    separator = None
    omitted = False
    if want_separator:
        try:
            for k in range(1, kmax + 1):
                separator = separable_by_kpt(a, b, k)
                if separator is not None:
                    break
            else:
                omitted = True
        except Inconclusive:
            omitted = True
    return SepVerdict(separable=True, separator=separator, separator_omitted=omitted)


def _copies_to_cover(u: Word, cycle: Word) -> int:
    """Least m with u a subsequence of cycle repeated m times (greedy scan);
    at least 1. Requires every letter of u to occur in the cycle."""
    missing = letters_of(u) - letters_of(cycle)
    if missing:
        raise ValueError(f"letters {sorted(missing)} do not occur in the cycle word")
    copies = 1
    pos = 0
    for sym in u:
        while True:
            try:
                pos = cycle.index(sym, pos) + 1
                break
            except ValueError:
                copies += 1
                pos = 0
    return copies


def expand_pattern(w: PatternWitness, side: str, pumps: tuple[int, ...] | list[int]) -> Word:
    """The side-A or side-B word of a pattern witness with the given pump
    count per block (each at least 1)."""
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    if len(pumps) != len(w.blocks):
        raise ValueError("one pump count per block required")
    if any(m < 1 for m in pumps):
        raise ValueError("pump counts must be positive")
    out: list[str] = list(w.connectors[0])
    for i, seg in enumerate(w.blocks):
        if side == "A":
            entry, cycle, exit_ = seg.a_entry, seg.a_cycle, seg.a_exit
        else:
            entry, cycle, exit_ = seg.b_entry, seg.b_cycle, seg.b_exit
        out.extend(entry)
        out.extend(cycle * pumps[i])
        out.extend(exit_)
        out.extend(w.connectors[i + 1])
    return tuple(out)


def towers_from_pattern(w: PatternWitness, h: int) -> Tower:
    """Expand a pattern witness into a tower of height ``h`` starting on side
    A. Pump counts begin at one full cycle and, at each next level, each
    block pumps just enough copies of its cycle word to contain the previous
    level's block as a subsequence (possible because block letters stay
    inside the block's gamma, which the cycle word covers exactly)."""
    if h < 1:
        raise ValueError("tower height must be at least 1")
    words: list[Word] = []
    prev_blocks: list[Word] | None = None
    for level in range(h):
        side = "A" if level % 2 == 0 else "B"
        blocks: list[Word] = []
        pumps: list[int] = []
        for i, seg in enumerate(w.blocks):
            if side == "A":
                entry, cycle, exit_ = seg.a_entry, seg.a_cycle, seg.a_exit
            else:
                entry, cycle, exit_ = seg.b_entry, seg.b_cycle, seg.b_exit
            if prev_blocks is None:
                m = 1
            else:
                m = _copies_to_cover(prev_blocks[i], cycle)
            pumps.append(m)
            blocks.append(entry + cycle * m + exit_)
        word: list[str] = list(w.connectors[0])
        for i, block in enumerate(blocks):
            word.extend(block)
            word.extend(w.connectors[i + 1])
        words.append(tuple(word))
        prev_blocks = blocks
    return Tower(words=tuple(words), start_side="A")


def verify_pattern(w: PatternWitness, a: Nfa, b: Nfa, pump_counts=(1, 2, 3)) -> bool:
    """Replay a pattern witness: structural letter-set constraints plus
    membership of both sides' expansions for several uniform pump counts."""
    a, b = _lift_pair(a, b)
    for seg in w.blocks:
        if letters_of(seg.a_cycle) != seg.gamma or letters_of(seg.b_cycle) != seg.gamma:
            return False
        for part in (seg.a_entry, seg.a_exit, seg.b_entry, seg.b_exit):
            if not letters_of(part) <= seg.gamma:
                return False
    for m in pump_counts:
        pumps = [m] * len(w.blocks)
        if not membership(a, expand_pattern(w, "A", pumps)):
            return False
        if not membership(b, expand_pattern(w, "B", pumps)):
            return False
    return True
