"""Shared helpers: tiny brute-force reimplementations used as ground truth.

Everything here recomputes answers from first principles (word enumeration,
product searches over letter subsets) instead of calling the code under test,
so a bug in the library cannot hide itself.
"""

from __future__ import annotations

import itertools
import random
import textwrap
from collections import deque

from ptsep.automata import Nfa, Word, parse_automaton


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Render the acceptance checklist, one line per criterion."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


def aut(text: str) -> Nfa:
    return parse_automaton(textwrap.dedent(text))


def random_nfa(rng: random.Random, max_states: int = 6, letters=("a", "b", "c")) -> Nfa:
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    alpha = frozenset(letters[: rng.randint(1, len(letters))])
    trans = set()
    for q in states:
        for sym in sorted(alpha):
            for t in states:
                if rng.random() < 1.5 / n:
                    trans.add((q, sym, t))
    final = frozenset(q for q in states if rng.random() < 0.35)
    initial = frozenset({rng.choice(states)})
    return Nfa.build(
        states=states, alphabet=alpha, transitions=trans, initial=initial, final=final
    )


def _adjacency(a: Nfa) -> dict[tuple[str, str], set[str]]:
    adj: dict[tuple[str, str], set[str]] = {}
    for src, sym, dst in a.transitions:
        adj.setdefault((src, sym), set()).add(dst)
    return adj


def brute_accepts(a: Nfa, w: Word) -> bool:
    """Membership by direct set simulation, independent of the library."""
    adj = _adjacency(a)
    cur = set(a.initial)
    for sym in w:
        cur = set().union(*(adj.get((q, sym), set()) for q in cur)) if cur else set()
    return bool(cur & a.final)


def brute_language(a: Nfa, max_len: int = 6) -> set[Word]:
    """All accepted words up to the given length."""
    adj = _adjacency(a)
    letters = sorted(a.alphabet)
    out: set[Word] = set()

    def rec(word: Word, cur: frozenset[str]):
        if cur & a.final:
            out.add(word)
        if len(word) == max_len or not cur:
            return
        for sym in letters:
            nxt = frozenset().union(*(adj.get((q, sym), set()) for q in cur))
            if nxt:
                rec(word + (sym,), nxt)

    rec((), frozenset(a.initial))
    return out


def words_up_to(alphabet, max_len: int):
    letters = sorted(alphabet)
    for length in range(max_len + 1):
        yield from itertools.product(letters, repeat=length)


def brute_profile(w: Word, k: int) -> frozenset[Word]:
    """All subsequences of length <= k, via index combinations."""
    out: set[Word] = set()
    for r in range(min(k, len(w)) + 1):
        for idxs in itertools.combinations(range(len(w)), r):
            out.add(tuple(w[i] for i in idxs))
    return frozenset(out)


def is_subsequence(u: Word, w: Word) -> bool:
    it = iter(w)
    return all(sym in it for sym in u)


def has_exact_cycle(a: Nfa, q: str, gamma: frozenset[str]) -> bool:
    """Is q on a cycle whose letter set is exactly gamma? Product search over
    (state, letters collected so far)."""
    if not gamma:
        return False
    adj = _adjacency(a)
    start = (q, frozenset())
    seen = {start}
    queue = deque([start])
    while queue:
        s, got = queue.popleft()
        for sym in sorted(gamma):
            for t in sorted(adj.get((s, sym), ())):
                node = (t, got | {sym})
                if t == q and node[1] == gamma:
                    return True
                if node not in seen:
                    seen.add(node)
                    queue.append(node)
    return False


def nonempty_subsets(alphabet):
    letters = sorted(alphabet)
    for r in range(1, len(letters) + 1):
        for combo in itertools.combinations(letters, r):
            yield frozenset(combo)


def check_tower(words, start_side: str, a: Nfa, b: Nfa) -> bool:
    """Independent tower validity: alternating membership plus the
    subsequence chain. Automata are widened to the union alphabet so a word
    using the other side's letters is rejected rather than an error."""
    union = a.alphabet | b.alphabet
    wide_a = Nfa.build(
        states=a.states, alphabet=union, transitions=a.transitions,
        initial=a.initial, final=a.final,
    )
    wide_b = Nfa.build(
        states=b.states, alphabet=union, transitions=b.transitions,
        initial=b.initial, final=b.final,
    )
    if start_side not in ("A", "B") or not words:
        return False
    for i, w in enumerate(words):
        on_a = (start_side == "A") == (i % 2 == 0)
        if not brute_accepts(wide_a if on_a else wide_b, w):
            return False
    return all(is_subsequence(u, w) for u, w in zip(words, words[1:]))
