"""Bounded cross-validation oracles.

These routines decide properties by exhaustive search over small bounded
spaces (subsequence profiles, tower level vectors) rather than by the
structural algorithms they are used to check. Searches carry node budgets;
running out raises :class:`Inconclusive`, never a wrong answer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import piecewise
from .automata import (
    EPSILON,
    Dfa,
    Nfa,
    Word,
    language_empty,
    lift_alphabet,
    membership,
    minimize,
    product_intersection,
    subset_construction,
)

DEFAULT_MAX_NODES = 200_000
DEFAULT_TOWER_MAX_NODES = 2_000_000


class Inconclusive(Exception):
    """A bounded search exhausted its node budget before reaching a verdict."""


def subsequence(u: Word, w: Word) -> bool:
    """True when u can be obtained from w by deleting letters (greedy scan)."""
    pos = 0
    for sym in u:
        while pos < len(w) and w[pos] != sym:
            pos += 1
        if pos == len(w):
            return False
        pos += 1
    return True


@dataclass(frozen=True)
class KProfile:
    """The set of subsequences ("pieces") of length at most k of some word."""

    k: int
    pieces: frozenset[Word]


def profile_k(w: Word, k: int) -> KProfile:
    """Compute the k-profile incrementally: appending a letter extends every
    stored piece that still has room."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    pieces: set[Word] = {EPSILON}
    for sym in w:
        pieces |= {p + (sym,) for p in pieces if len(p) < k}
    return KProfile(k, frozenset(pieces))


def _compiled(d: Dfa, letters: Sequence[str]):
    order = sorted(d.states)
    index = {q: i for i, q in enumerate(order)}
    delta = [[index[d.step(q, sym)] for sym in letters] for q in order]
    accepting = frozenset(index[q] for q in d.final)
    # states from which acceptance is still possible
    alive = set(accepting)
    changed = True
    while changed:
        changed = False
        for i, row in enumerate(delta):
            if i not in alive and any(t in alive for t in row):
                alive.add(i)
                changed = True
    return delta, index[d.start], accepting, frozenset(alive)


def reachable_profiles(a: Nfa, k: int, max_nodes: int = DEFAULT_MAX_NODES) -> frozenset[KProfile]:
    """The set of k-profiles of accepted words, by BFS over (state, profile)
    configurations of the determinized minimal automaton. Profiles stabilize,
    so the space is finite; exceeding ``max_nodes`` raises Inconclusive."""
    d = minimize(subset_construction(a))
    letters = sorted(d.alphabet)
    delta, start, accepting, alive = _compiled(d, letters)
    root = (start, frozenset({EPSILON}))
    seen = {root}
    queue = deque([root])
    found: set[frozenset[Word]] = set()
    extend_cache: dict[tuple[frozenset[Word], str], frozenset[Word]] = {}
    while queue:
        state, prof = queue.popleft()
        if state in accepting:
            found.add(prof)
        for i, sym in enumerate(letters):
            target = delta[state][i]
            if target not in alive:
                continue
            key = (prof, sym)
            new_prof = extend_cache.get(key)
            if new_prof is None:
                new_prof = prof | frozenset(p + (sym,) for p in prof if len(p) < k)
                extend_cache[key] = new_prof
            node = (target, new_prof)
            if node not in seen:
                if len(seen) >= max_nodes:
                    raise Inconclusive(f"profile search exceeded {max_nodes} configurations")
                seen.add(node)
                queue.append(node)
    return frozenset(KProfile(k, p) for p in found)


@dataclass(frozen=True)
class KptSeparator:
    """A separator definable from pieces of length <= k, represented as the
    set of accepted k-profiles. ``side`` records which input language the
    separator contains ("A" by convention)."""

    k: int
    accepted_profiles: frozenset[KProfile]
    side: str


def separable_by_kpt(
    a: Nfa, b: Nfa, k: int, max_nodes: int = DEFAULT_MAX_NODES
) -> KptSeparator | None:
    """A k-piecewise-testable separator exists iff the two languages realize
    disjoint sets of k-profiles; the separator (union of the profile classes
    of L(a)) is returned as those accepted profiles."""
    profs_a = reachable_profiles(a, k, max_nodes)
    profs_b = reachable_profiles(b, k, max_nodes)
    if profs_a & profs_b:
        return None
    return KptSeparator(k=k, accepted_profiles=profs_a, side="A")


def verify_separator(
    s: KptSeparator, a: Nfa, b: Nfa, max_nodes: int = DEFAULT_MAX_NODES
) -> bool:
    """Recompute both profile sets at the separator's k and check containment
    on the covered side and disjointness on the other."""
    profs_a = reachable_profiles(a, s.k, max_nodes)
    profs_b = reachable_profiles(b, s.k, max_nodes)
    if s.side != "A":
        profs_a, profs_b = profs_b, profs_a
    return profs_a <= s.accepted_profiles and not (profs_b & s.accepted_profiles)


@dataclass(frozen=True)
class Tower:
    """Words w_1 .. w_r, each a subsequence of the next, with memberships
    alternating between the two languages; ``start_side`` names the language
    of w_1 ("A" or "B")."""

    words: tuple[Word, ...]
    start_side: str


def verify_tower(t: Tower, a: Nfa, b: Nfa) -> bool:
    """Check the subsequence chain and the alternating memberships."""
    if t.start_side not in ("A", "B") or not t.words:
        return False
    union = a.alphabet | b.alphabet
    a = lift_alphabet(a, union)
    b = lift_alphabet(b, union)
    for i, w in enumerate(t.words):
        on_a = (t.start_side == "A") == (i % 2 == 0)
        if not membership(a if on_a else b, w):
            return False
    return all(subsequence(u, w) for u, w in zip(t.words, t.words[1:]))


def bounded_tower_exists(
    a: Nfa, b: Nfa, h: int, max_nodes: int = DEFAULT_TOWER_MAX_NODES
) -> Tower | None:
    """Search for a tower of height exactly ``h`` between L(a) and L(b).

    Encoding: a tower is determined by its top word plus, per position, the
    lowest level that already contains it; level i then reads the positions
    with threshold <= i. The search is a BFS over vectors of h automaton
    states (level i simulated on its alternating side), trying both starting
    sides; a vector is accepting when every level sits in a final state.
    None means no tower of height h exists; running out of budget raises
    Inconclusive.
    """
    if h < 1:
        raise ValueError("tower height must be at least 1")
    union = a.alphabet | b.alphabet
    letters = sorted(union)
    compiled = {
        "A": _compiled(minimize(subset_construction(lift_alphabet(a, union))), letters),
        "B": _compiled(minimize(subset_construction(lift_alphabet(b, union))), letters),
    }

    def machine(side: str, level: int):
        # level is 0-based; w_1 belongs to the starting side
        if level % 2 == 0:
            return compiled[side]
        return compiled["B" if side == "A" else "A"]

    def accepting(side: str, vec: tuple[int, ...]) -> bool:
        return all(vec[i] in machine(side, i)[2] for i in range(h))

    roots = []
    for side in ("A", "B"):
        vec = tuple(machine(side, i)[1] for i in range(h))
        roots.append((side, vec))

    parents: dict[tuple, tuple | None] = {}
    queue: deque[tuple] = deque()
    for node in roots:
        if node not in parents:
            parents[node] = None
            queue.append(node)

    goal = None
    for node in roots:
        if accepting(*node):
            goal = node
            break

    while queue and goal is None:
        node = queue.popleft()
        side, vec = node
        for li, sym in enumerate(letters):
            for threshold in range(1, h + 1):
                new_vec = list(vec)
                dead = False
                for i in range(threshold - 1, h):
                    delta, _, _, alive = machine(side, i)
                    new_vec[i] = delta[vec[i]][li]
                    if new_vec[i] not in alive:
                        dead = True
                        break
                if dead:
                    continue
                child = (side, tuple(new_vec))
                if child in parents:
                    continue
                if len(parents) >= max_nodes:
                    raise Inconclusive(f"tower search exceeded {max_nodes} configurations")
                parents[child] = (node, sym, threshold)
                if accepting(*child):
                    goal = child
                    break
                queue.append(child)
            if goal is not None:
                break
        if goal is not None:
            break

    if goal is None:
        return None

    steps: list[tuple[str, int]] = []
    cur: tuple | None = goal
    while parents[cur] is not None:
        prev, sym, threshold = parents[cur]
        steps.append((sym, threshold))
        cur = prev
    steps.reverse()
    side = goal[0]
    words = tuple(
        tuple(sym for sym, t in steps if t <= level) for level in range(1, h + 1)
    )
    return Tower(words=words, start_side=side)


@dataclass(frozen=True)
class DeepeningVerdict:
    """A conclusive separability answer from the deepening oracle, with the
    level it was reached at and how ("separator" or "tower-absence")."""

    separable: bool
    level: int
    method: str


def dual_deepening(
    a: Nfa,
    b: Nfa,
    kmax: int,
    hmax: int,
    max_nodes: int = DEFAULT_MAX_NODES,
    tower_max_nodes: int = DEFAULT_TOWER_MAX_NODES,
) -> DeepeningVerdict | None:
    """Interleave separator search (k = 1..kmax) with tower search
    (h = 1..hmax), lowest level first, separator probe before tower probe.

    A found separator is conclusive for separability; so is the absence of
    any tower of some height (towers of greater height contain smaller ones).
    A tower that does exist is never conclusive on its own, so everything
    else is inconclusive (None). Budget overruns skip the affected probe.
    """
    union = a.alphabet | b.alphabet
    # a common word gives towers of every height and defeats every separator,
    # so no probe below can conclude; skip straight to inconclusive
    if not language_empty(
        product_intersection(lift_alphabet(a, union), lift_alphabet(b, union))
    ):
        return None
    for level in range(1, max(kmax, hmax) + 1):
        if level <= kmax:
            try:
                sep = separable_by_kpt(a, b, level, max_nodes)
            except Inconclusive:
                sep = None
            if sep is not None:
                return DeepeningVerdict(separable=True, level=level, method="separator")
        if level <= hmax:
            try:
                tower = bounded_tower_exists(a, b, level, tower_max_nodes)
            except Inconclusive:
                continue
            if tower is None:
                return DeepeningVerdict(separable=True, level=level, method="tower-absence")
    return None


@dataclass(frozen=True)
class PtBoundedVerdict:
    """Conclusive outcome of the bounded PT oracle; ``k`` is the certifying
    profile bound when ``is_pt`` is True."""

    is_pt: bool
    k: int | None


def pt_bounded(
    d: Dfa, kmax: int, max_nodes: int = DEFAULT_MAX_NODES
) -> PtBoundedVerdict | None:
    """Profile-based PT check on a complete DFA.

    For k = 1..kmax, search for a "conflict": one k-profile reachable at both
    an accepting and a rejecting state. No conflict at some k certifies the
    language is k-piecewise-testable, hence PT. Conflicts all the way to kmax
    are conclusive for NOT PT only when the structural test on the minimal
    DFA independently produces a witness; otherwise the answer is None
    (inconclusive), as it is when a search overruns its budget.
    """
    letters = sorted(d.alphabet)
    delta, start, accepting, _ = _compiled(d, letters)
    for k in range(1, kmax + 1):
        conflict = False
        status: dict[frozenset[Word], list[bool]] = {}
        root = (start, frozenset({EPSILON}))
        seen = {root}
        queue = deque([root])
        extend_cache: dict[tuple[frozenset[Word], str], frozenset[Word]] = {}
        while queue and not conflict:
            state, prof = queue.popleft()
            flags = status.setdefault(prof, [False, False])
            flags[state in accepting] = True
            if flags[0] and flags[1]:
                conflict = True
                break
            for i, sym in enumerate(letters):
                key = (prof, sym)
                new_prof = extend_cache.get(key)
                if new_prof is None:
                    new_prof = prof | frozenset(p + (sym,) for p in prof if len(p) < k)
                    extend_cache[key] = new_prof
                node = (delta[state][i], new_prof)
                if node not in seen:
                    if len(seen) >= max_nodes:
                        return None
                    seen.add(node)
                    queue.append(node)
        if not conflict:
            return PtBoundedVerdict(is_pt=True, k=k)
    structural = piecewise.is_pt_dfa(minimize(d))
    if not structural.is_pt:
        return PtBoundedVerdict(is_pt=False, k=None)
    return None
