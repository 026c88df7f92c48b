"""Exact minimal-automaton search.

Two engines, selected by alphabet arity:

* unary problems: every unary deterministic machine is a tail of length t
  feeding a loop of length l, so the search enumerates (t, l) shapes and
  derives the forced label placement from the promised-word trajectory.
  The trajectory is eventually periodic, which makes the verdict exact even
  for unrestricted problems.

* multi-symbol samples: depth-first search over partially defined transition
  tables, extending a transition only when a sample word demands it, with
  canonical state numbering (new states appear in first-use order) so each
  isomorphism class is visited once.  Labels are constrained on the fly.

Both report the minimum, all witnesses at that size, the number of witness
equivalence classes (permutations of unlabeled states and within labeled
sets of equal label), and, per refuted size, a word certifying that words up
to its length kill every smaller machine.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from . import problems
from .automata import Pvdfa
from .problems import PromiseProblem

__all__ = [
    "SearchBudget",
    "MinimalityReport",
    "unary_min_search",
    "min_dfa_identify",
    "verify_claims",
    "canonical_form",
    "dfa_equivalent",
]


@dataclass(frozen=True)
class SearchBudget:
    max_states: int
    word_budget: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be >= 1")


@dataclass
class MinimalityReport:
    min_states: int | None  # None when nothing solves within the budget
    witnesses: list
    equivalence_classes: int
    failure_witnesses: dict  # refuted size -> word whose length suffices
    lower_bound: int  # sizes below this are refuted
    exact: bool  # False when the verdict is relative to a word budget
    wall_time_s: float = 0.0
    witness_free_transitions: list = field(default_factory=list)

    @property
    def satisfiable(self) -> bool:
        return self.min_states is not None


def _path_state(t: int, l: int, n: int) -> int:
    return n if n < t else t + (n - t) % l


def unary_min_search(p: PromiseProblem, budget: SearchBudget) -> MinimalityReport:
    """Exact minimal machine for a unary problem via tail/loop enumeration.

    For each shape the promised-word trajectory forces the labeling, so a
    shape either solves (labels are consistent) or dies at a first
    conflicting word, which becomes its refutation witness.
    """
    if not p.is_unary:
        raise ValueError("unary_min_search needs a unary problem")
    step, period, label_at = problems.unary_index_structure(p)
    sym = p.alphabet[0]
    i_restr = None if p.max_len is None else p.max_len // step
    started = time.monotonic()
    failure_witnesses: dict = {}
    for size in range(1, budget.max_states + 1):
        witnesses = []
        longest_refutation = None
        for loop in range(1, size + 1):
            tail = size - loop
            if i_restr is not None:
                i_top = i_restr
            else:
                reduced = loop // math.gcd(loop, step)
                i_top = math.ceil(tail / step) + 2 * math.lcm(reduced, period)
            state_labels: dict = {}
            conflict_at = None
            for i in range(i_top + 1):
                s = _path_state(tail, loop, i * step)
                lab = label_at(i)
                prev = state_labels.get(s)
                if prev is None:
                    state_labels[s] = lab
                elif prev != lab:
                    conflict_at = i
                    break
            if conflict_at is None:
                delta = [[j + 1] for j in range(size)]
                delta[size - 1] = [tail]
                label_sets: dict = {}
                for s, lab in state_labels.items():
                    label_sets.setdefault(lab, set()).add(s)
                witnesses.append(Pvdfa(size, p.alphabet, delta, 0, label_sets))
            else:
                word = sym * (conflict_at * step)
                if longest_refutation is None or len(word) > len(longest_refutation):
                    longest_refutation = word
        if witnesses:
            return MinimalityReport(
                min_states=size,
                witnesses=witnesses,
                equivalence_classes=len(witnesses),
                failure_witnesses=failure_witnesses,
                lower_bound=size,
                exact=True,
                wall_time_s=time.monotonic() - started,
            )
        failure_witnesses[size] = longest_refutation
    return MinimalityReport(
        min_states=None,
        witnesses=[],
        equivalence_classes=0,
        failure_witnesses=failure_witnesses,
        lower_bound=budget.max_states + 1,
        exact=True,
        wall_time_s=time.monotonic() - started,
    )


class _Trie:
    """Prefix tree of a labeled sample, nodes in breadth-first order."""

    def __init__(self, sample, alphabet):
        self.alphabet = tuple(alphabet)
        index = {sym: j for j, sym in enumerate(self.alphabet)}
        n_sym = len(self.alphabet)
        self.children = [[-1] * n_sym]
        self.labels = [None]
        node_of: dict = {"": 0}
        for word, label in sample:
            node = 0
            for ch in word:
                j = index[ch]
                nxt = self.children[node][j]
                if nxt == -1:
                    nxt = len(self.children)
                    self.children.append([-1] * n_sym)
                    self.labels.append(None)
                    self.children[node][j] = nxt
                node = nxt
            if self.labels[node] is not None and self.labels[node] != label:
                raise ValueError(f"sample gives word {word!r} two labels")
            self.labels[node] = label
        # breadth-first order with (parent, symbol) per node
        self.order = []
        queue = [0]
        self.parent_sym = [(-1, -1)] * len(self.children)
        while queue:
            node = queue.pop(0)
            self.order.append(node)
            for j, child in enumerate(self.children[node]):
                if child != -1:
                    self.parent_sym[child] = (node, j)
                    queue.append(child)

    @property
    def n_nodes(self):
        return len(self.children)


class _IdentifySearch:
    """DFS over partial transition tables consistent with a sample trie."""

    def __init__(self, trie: _Trie, n_states: int, find_all: bool, deadline: float | None):
        self.trie = trie
        self.n = n_states
        self.n_sym = len(trie.alphabet)
        self.find_all = find_all
        self.deadline = deadline
        self.delta = [[-1] * self.n_sym for _ in range(n_states)]
        self.state_label = [None] * n_states
        self.mapped = [-1] * trie.n_nodes
        self.used = 1
        self.solutions = []
        self.stopped = False

    def run(self):
        self.mapped[0] = 0
        root_label = self.trie.labels[0]
        if root_label is not None:
            self.state_label[0] = root_label
        self._extend(1)
        return self.solutions

    def _extend(self, pos: int):
        """Propagate forced transitions from trie position pos; recurse at
        the first undefined transition."""
        if self.stopped:
            return
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeoutError("identification search exceeded its time limit")
        trie = self.trie
        order = trie.order
        labels_set = []  # states whose label this call assigned
        while pos < len(order):
            u = order[pos]
            parent, j = trie.parent_sym[u]
            s = self.mapped[parent]
            t = self.delta[s][j]
            if t == -1:
                top = self.used + 1 if self.used < self.n else self.used
                for target in range(top):
                    is_new = target == self.used
                    self.delta[s][j] = target
                    if is_new:
                        self.used += 1
                    self._extend(pos)
                    if is_new:
                        self.used -= 1
                    self.delta[s][j] = -1
                    if self.stopped:
                        break
                for s2 in labels_set:
                    self.state_label[s2] = None
                return
            self.mapped[u] = t
            lab = trie.labels[u]
            if lab is not None:
                cur = self.state_label[t]
                if cur is None:
                    self.state_label[t] = lab
                    labels_set.append(t)
                elif cur != lab:
                    for s2 in labels_set:
                        self.state_label[s2] = None
                    return
            pos += 1
        if self.used == self.n:
            self.solutions.append(
                ([row[:] for row in self.delta], self.state_label[:])
            )
            if not self.find_all:
                self.stopped = True
        for s2 in labels_set:
            self.state_label[s2] = None


def _complete_solution(delta, state_labels, alphabet) -> tuple:
    """Fill undefined transitions with self-loops; count how many were free."""
    free = 0
    table = []
    for s, row in enumerate(delta):
        filled = []
        for t in row:
            if t == -1:
                filled.append(s)
                free += 1
            else:
                filled.append(t)
        table.append(filled)
    label_sets: dict = {}
    for s, lab in enumerate(state_labels):
        if lab is not None:
            label_sets.setdefault(lab, set()).add(s)
    return Pvdfa(len(delta), alphabet, table, 0, label_sets), free


def _sample_satisfiable(sample, alphabet, n_states, deadline=None) -> bool:
    trie = _Trie(sample, alphabet)
    search = _IdentifySearch(trie, n_states, find_all=False, deadline=deadline)
    return bool(search.run())


def _sorted_lenlex(sample, alphabet):
    index = {sym: j for j, sym in enumerate(alphabet)}
    return sorted(sample, key=lambda wl: (len(wl[0]), [index[c] for c in wl[0]]))


def _refutation_word(sample_sorted, alphabet, size, deadline=None):
    """Shortest length-lex prefix of the sample that refutes every machine
    of the given size; returns the last word of that prefix.  Bisection is
    valid because adding words only shrinks the consistent set."""
    lo, hi = 1, len(sample_sorted)
    while lo < hi:
        mid = (lo + hi) // 2
        if _sample_satisfiable(sample_sorted[:mid], alphabet, size, deadline):
            lo = mid + 1
        else:
            hi = mid
    return sample_sorted[lo - 1][0]


def min_dfa_identify(
    sample,
    max_states: int,
    alphabet=None,
    time_limit: float | None = None,
    collect_failure_witnesses: bool = True,
) -> MinimalityReport:
    """Exact minimum-state machine consistent with a labeled word sample.

    Sizes are tried in increasing order; at the first satisfiable size all
    canonical witnesses are collected (one per equivalence class).  When no
    machine within max_states is consistent, the report carries the
    established lower bound instead of a minimum.
    """
    sample = list(sample)
    if alphabet is None:
        symbols = sorted({ch for word, _ in sample for ch in word})
        alphabet = tuple(symbols) if symbols else ("a",)
    deadline = None if time_limit is None else time.monotonic() + time_limit
    trie = _Trie(sample, alphabet)
    started = time.monotonic()
    failure_witnesses: dict = {}
    sample_sorted = _sorted_lenlex(sample, alphabet)
    for size in range(1, max_states + 1):
        search = _IdentifySearch(trie, size, find_all=True, deadline=deadline)
        solutions = search.run()
        if solutions:
            witnesses, free_counts = [], []
            for delta, state_labels in solutions:
                dfa, free = _complete_solution(delta, state_labels, alphabet)
                witnesses.append(dfa)
                free_counts.append(free)
            if collect_failure_witnesses:
                for refuted in range(1, size):
                    failure_witnesses[refuted] = _refutation_word(
                        sample_sorted, alphabet, refuted, deadline
                    )
            return MinimalityReport(
                min_states=size,
                witnesses=witnesses,
                equivalence_classes=len(witnesses),
                failure_witnesses=failure_witnesses,
                lower_bound=size,
                exact=False,
                wall_time_s=time.monotonic() - started,
                witness_free_transitions=free_counts,
            )
    if collect_failure_witnesses:
        for refuted in range(1, max_states + 1):
            failure_witnesses[refuted] = _refutation_word(
                sample_sorted, alphabet, refuted, deadline
            )
    return MinimalityReport(
        min_states=None,
        witnesses=[],
        equivalence_classes=0,
        failure_witnesses=failure_witnesses,
        lower_bound=max_states + 1,
        exact=False,
        wall_time_s=time.monotonic() - started,
    )


def canonical_form(d: Pvdfa) -> tuple:
    """Renumber states in breadth-first first-use order from the initial
    state.  Two machines are related by a permutation preserving the initial
    state, transitions, and each labeled set iff their forms are equal.
    Requires every state to be reachable."""
    rename = {d.initial: 0}
    queue = [d.initial]
    order = []
    while queue:
        s = queue.pop(0)
        order.append(s)
        for t in d.delta[s]:
            if t not in rename:
                rename[t] = len(rename)
                queue.append(t)
    if len(rename) != d.n_states:
        raise ValueError("canonical form requires all states reachable")
    delta = [None] * d.n_states
    for s in order:
        delta[rename[s]] = tuple(rename[t] for t in d.delta[s])
    labels = tuple(
        sorted(
            (label, tuple(sorted(rename[s] for s in states)))
            for label, states in d.label_sets.items()
            if states
        )
    )
    return tuple(delta), labels


def dfa_equivalent(d1: Pvdfa, d2: Pvdfa) -> bool:
    if d1.n_states != d2.n_states or tuple(d1.alphabet) != tuple(d2.alphabet):
        return False
    return canonical_form(d1) == canonical_form(d2)


def _claim_row(problem, claimed, found, engine, seconds, note=""):
    match = None if found is None else found == claimed
    return {
        "problem": problem,
        "claimed": claimed,
        "found": found,
        "match": match,
        "engine": engine,
        "seconds": round(seconds, 3),
        "note": note,
    }


def verify_claims(include_sample_engines: bool = False, word_budget: int = 8) -> list:
    """Re-check the minimal-size claims instance by instance.

    Unary families are searched exactly.  The two-symbol problems need the
    sample-based engine and run only when include_sample_engines is set.
    Families whose exhaustive search is beyond desk scale are verified
    construction-side only (the canonical machine solves; the lower bound is
    by inclusion, not searched).
    """
    from .automata import canonical_dfa, dfa_solves

    def dfa_solves_lazy(p, budget):
        return dfa_solves(canonical_dfa(p), p, budget=budget).solves

    rows = []
    for k in range(1, 5):
        p = problems.make_eo(k)
        claimed = 2 ** (k + 1)
        t0 = time.monotonic()
        rep = unary_min_search(p, SearchBudget(max_states=claimed + 2))
        rows.append(_claim_row(p.descriptor(), claimed, rep.min_states, "unary", time.monotonic() - t0))
    for q, r in ((2, 2), (3, 1), (3, 3), (2, 4), (5, 5)):
        p = problems.make_geo(q, r)
        claimed = q ** (dict(p.params)["m_q"] + 1)
        t0 = time.monotonic()
        rep = unary_min_search(p, SearchBudget(max_states=claimed + 2))
        rows.append(_claim_row(p.descriptor(), claimed, rep.min_states, "unary", time.monotonic() - t0))
    for k in (1, 2, 3):
        for i_max in range(0, 11):
            p = problems.make_eo(k, i_max)
            claimed = min(i_max + 1, 2 ** (k + 1))
            t0 = time.monotonic()
            rep = unary_min_search(p, SearchBudget(max_states=claimed + 2))
            rows.append(
                _claim_row(
                    f"eo:k={k}:imax={i_max}", claimed, rep.min_states, "unary",
                    time.monotonic() - t0,
                )
            )
    if include_sample_engines:
        cl = problems.make_cl()
        sample = problems.enumerate_promised(cl, word_budget)
        t0 = time.monotonic()
        rep = min_dfa_identify(sample, 6, alphabet=cl.alphabet, collect_failure_witnesses=False)
        rows.append(
            _claim_row(
                f"cl:len={word_budget}", 6, rep.min_states, "identify",
                time.monotonic() - t0, f"{rep.equivalence_classes} class(es)",
            )
        )
    # diof k=2: short-word samples admit smaller machines (a 5-state mod-5
    # cycle fits every word of length <= 8), so the sample engine cannot
    # certify the floor at desk scale.  The weight-1 subproblem is the unary
    # parity problem, whose searched floor transfers by inclusion; the
    # 8-state construction closes the gap.
    t0 = time.monotonic()
    sub = unary_min_search(problems.make_eo(2), SearchBudget(10))
    diof = problems.make_diof(2)
    upper = dfa_solves_lazy(diof, budget=word_budget)
    found = sub.min_states if upper else None
    rows.append(
        _claim_row(
            "diof:k=2", 8, found, "inclusion+construction",
            time.monotonic() - t0,
            "lower bound from the searched unary subproblem, upper from the construction",
        )
    )
    for descriptor, claimed in (("neo:n=2:k=1", 16), ("diof:k=3", 16)):
        p = problems.make_problem(descriptor)
        t0 = time.monotonic()
        verdict = dfa_solves(canonical_dfa(p), p, budget=word_budget)
        rows.append(
            _claim_row(
                descriptor, claimed, None, "construction",
                time.monotonic() - t0,
                "construction solves; lower bound by inclusion, not searched"
                if verdict.solves
                else "CONSTRUCTION FAILED",
            )
        )
    return rows
