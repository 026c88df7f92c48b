"""Classical finite automata for promise problems.

Deterministic machines with partial accept/reject labelings (states may be
unlabeled), their probabilistic generalization, solve-checks, the canonical
constructions for each problem family, failure probability of an arbitrary
labeling process, and the optimal two-state probabilistic machine for the
restricted unary parity problem.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import problems
from .problems import PromiseProblem, enumerate_promised

__all__ = [
    "Pvdfa",
    "Pvpfa",
    "UnaryShape",
    "SolveVerdict",
    "dfa_run",
    "dfa_solves",
    "pfa_label_prob",
    "failure_probability",
    "canonical_dfa",
    "optimal_two_state_pfa",
    "classical_floor",
    "dfa_to_json",
    "dfa_from_json",
]


@dataclass
class Pvdfa:
    """Deterministic automaton with disjoint labeled state sets.

    delta[s][j] is the successor of state s on the j-th alphabet symbol.
    label_sets maps a label to the set of states carrying it; states may be
    unlabeled, and labeled sets must be pairwise disjoint.
    """

    n_states: int
    alphabet: tuple
    delta: list
    initial: int
    label_sets: dict

    def __post_init__(self):
        if len(self.delta) != self.n_states:
            raise ValueError("delta must have one row per state")
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("delta row length must match alphabet size")
            for s in row:
                if not 0 <= s < self.n_states:
                    raise ValueError("transition target out of range")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")
        seen = set()
        for label, states in self.label_sets.items():
            states = frozenset(states)
            if seen & states:
                raise ValueError("labeled sets must be pairwise disjoint")
            seen |= states
            self.label_sets[label] = states
        self._sym_index = {sym: j for j, sym in enumerate(self.alphabet)}

    def state_label(self, state: int):
        for label, states in self.label_sets.items():
            if state in states:
                return label
        return None

    def label_probabilities(self, word: str) -> dict:
        lab = self.state_label(dfa_run(self, word))
        return {} if lab is None else {lab: 1.0}


@dataclass(frozen=True)
class UnaryShape:
    """Tail/loop decomposition of the reachable part of a unary automaton."""

    tail: int
    loop: int

    def __post_init__(self):
        if self.loop < 1 or self.tail < 0:
            raise ValueError("need loop >= 1 and tail >= 0")


@dataclass(frozen=True)
class SolveVerdict:
    solves: bool
    exact: bool
    checked: int
    counterexample: tuple | None = None  # (word, required label, got label)

    def __bool__(self) -> bool:
        return self.solves


def dfa_run(d: Pvdfa, word: str) -> int:
    state = d.initial
    for ch in word:
        state = d.delta[state][d._sym_index[ch]]
    return state


def unary_shape(d: Pvdfa) -> tuple:
    """(shape, path) for a unary machine; path holds the visited states."""
    if len(d.alphabet) != 1:
        raise ValueError("shape decomposition needs a unary alphabet")
    path, index_of = [], {}
    state = d.initial
    while state not in index_of:
        index_of[state] = len(path)
        path.append(state)
        state = d.delta[state][0]
    t = index_of[state]
    return UnaryShape(t, len(path) - t), path


def _path_state(path, shape: UnaryShape, n: int) -> int:
    if n < shape.tail:
        return path[n]
    return path[shape.tail + (n - shape.tail) % shape.loop]


def _unary_check_bound(shape: UnaryShape, step: int, period: int) -> int:
    reduced = shape.loop // math.gcd(shape.loop, step)
    return math.ceil(shape.tail / step) + 2 * math.lcm(reduced, period)


def dfa_solves(d: Pvdfa, p: PromiseProblem, budget: int | None = None) -> SolveVerdict:
    """Check whether the machine labels every promised word correctly.

    Unary problems get an exact verdict: the sampled state trajectory is
    eventually periodic, so checking two full periods past the tail decides
    all word lengths.  Multi-symbol problems are checked on all promised
    words up to `budget` symbols (exact when the problem itself is
    length-restricted within the budget).
    """
    if tuple(d.alphabet) != tuple(p.alphabet):
        raise ValueError(f"alphabet mismatch: {d.alphabet} vs {p.alphabet}")
    if p.is_unary:
        step, period, label_at = problems.unary_index_structure(p)
        shape, path = unary_shape(d)
        if p.max_len is not None:
            i_top = p.max_len // step
        else:
            i_top = _unary_check_bound(shape, step, period)
        sym = p.alphabet[0]
        for i in range(i_top + 1):
            required = label_at(i)
            state = _path_state(path, shape, i * step)
            if state not in d.label_sets.get(required, frozenset()):
                word = sym * (i * step)
                return SolveVerdict(False, True, i + 1, (word, required, d.state_label(state)))
        return SolveVerdict(True, True, i_top + 1)
    if budget is None:
        if p.max_len is None:
            raise ValueError("multi-symbol check needs a word-length budget")
        budget = p.max_len
    exact = p.max_len is not None and p.max_len <= budget
    checked = 0
    for word, required in enumerate_promised(p, budget):
        checked += 1
        state = dfa_run(d, word)
        if state not in d.label_sets.get(required, frozenset()):
            return SolveVerdict(False, exact, checked, (word, required, d.state_label(state)))
    return SolveVerdict(True, exact, checked)


@dataclass
class Pvpfa:
    """Probabilistic automaton: column-stochastic transitions per symbol."""

    n_states: int
    alphabet: tuple
    transitions: dict
    initial_dist: np.ndarray
    label_vectors: dict

    def __post_init__(self):
        self.initial_dist = np.asarray(self.initial_dist, dtype=float)
        if self.initial_dist.shape != (self.n_states,):
            raise ValueError("initial distribution has wrong length")
        if abs(self.initial_dist.sum() - 1.0) > 1e-12 or self.initial_dist.min() < 0:
            raise ValueError("initial distribution must be a probability vector")
        for sym in self.alphabet:
            T = np.asarray(self.transitions[sym], dtype=float)
            if T.shape != (self.n_states, self.n_states):
                raise ValueError("transition matrix has wrong shape")
            if T.min() < 0 or np.abs(T.sum(axis=0) - 1.0).max() > 1e-12:
                raise ValueError(f"columns of T[{sym}] must sum to 1 with entries >= 0")
            self.transitions[sym] = T
        used = np.zeros(self.n_states)
        for label, vec in self.label_vectors.items():
            vec = np.asarray(vec, dtype=float)
            if vec.shape != (self.n_states,) or not set(np.unique(vec)) <= {0.0, 1.0}:
                raise ValueError("label vectors must be 0/1 of length n_states")
            used += vec
            self.label_vectors[label] = vec
        if used.max() > 1:
            raise ValueError("label vectors must mark disjoint state sets")

    def label_probabilities(self, word: str) -> dict:
        dist = self.initial_dist
        for ch in word:
            dist = self.transitions[ch] @ dist
        return {label: float(vec @ dist) for label, vec in self.label_vectors.items()}


def pfa_label_prob(m: Pvpfa, word: str) -> dict:
    """Pr[label | word] = m_label T_(w_l) ... T_(w_1) pi."""
    return m.label_probabilities(word)


def failure_probability(proc, p: PromiseProblem, weights: dict | None = None) -> float:
    """1 - sum_w mu(w) Pr[correct label | w] over the promised words.

    `proc` is anything with label_probabilities(word) -> {label: prob}.
    The problem must be restricted (finitely many promised words); mu is
    uniform unless an explicit weight table is given.
    """
    if p.max_len is None:
        raise ValueError("failure probability needs a length-restricted problem")
    words = enumerate_promised(p, p.max_len)
    if not words:
        raise ValueError("problem has no promised words")
    if weights is None:
        mu = {w: 1.0 / len(words) for w, _ in words}
    else:
        total = sum(weights.values())
        mu = {w: weights[w] / total for w, _ in words}
    correct = 0.0
    for word, label in words:
        correct += mu[word] * proc.label_probabilities(word).get(label, 0.0)
    return 1.0 - correct


def canonical_dfa(p: PromiseProblem) -> Pvdfa:
    """The textbook machine for each family; always passes dfa_solves.

    eo/diof: a single loop of 2^(k+1) states, symbol j stepping by its
    weight; cl: the six-state machine from the exact orbit table; neo: the
    product of per-symbol loops; geo: a loop of q^(m_q+1) states with label
    j at position j*r around the loop.
    """
    params = dict(p.params)
    if p.family == "eo":
        L = 2 ** (params["k"] + 1)
        delta = [[(i + 1) % L] for i in range(L)]
        return Pvdfa(L, p.alphabet, delta, 0, {"y": {0}, "n": {L // 2}})
    if p.family == "diof":
        k = params["k"]
        L = 2 ** (k + 1)
        weights = problems.diof_weights(p)
        delta = [[(i + weights[s]) % L for s in p.alphabet] for i in range(L)]
        return Pvdfa(L, p.alphabet, delta, 0, {"y": {0}, "n": {2**k}})
    if p.family == "cl":
        delta = [
            [problems.CL_TABLE[s][i] for s in p.alphabet]
            for i in range(len(problems.CL_STATES))
        ]
        return Pvdfa(
            6, p.alphabet, delta, problems.CL_INITIAL,
            {"y": {problems.CL_ACCEPT}, "n": {problems.CL_REJECT}},
        )
    if p.family == "neo":
        n, k = params["n"], params["k"]
        M = 2 ** (k + 1)
        total = M**n
        def counts(sid):
            return [(sid // M**j) % M for j in range(n)]
        delta = []
        for sid in range(total):
            c = counts(sid)
            row = []
            for j in range(n):
                row.append(sid + (M**j if c[j] + 1 < M else M**j - M ** (j + 1)))
            delta.append(row)
        label_sets: dict = {}
        for sid in range(total):
            c = counts(sid)
            if all(cj in (0, 2**k) for cj in c):
                label = "".join("1" if cj else "0" for cj in c)
                label_sets.setdefault(label, set()).add(sid)
        return Pvdfa(total, p.alphabet, delta, 0, label_sets)
    if p.family == "geo":
        q, r, m_q = params["q"], params["r"], params["m_q"]
        L = q ** (m_q + 1)
        delta = [[(i + 1) % L] for i in range(L)]
        label_sets = {str(j): {(j * r) % L} for j in range(q)}
        return Pvdfa(L, p.alphabet, delta, 0, label_sets)
    raise ValueError(f"no canonical construction for family {p.family!r}")


ACCEPT_VECTOR_CHOICES = ((1, 0), (0, 1), (1, 1), (0, 0))


@dataclass(frozen=True)
class PfaOptimum:
    x: float
    y: float
    accept_vector: tuple
    p_fail: float
    closed_form: float
    notes: tuple = ()


def _two_state_pfail(x, y, i_max: int, accept_vector) -> float:
    """Failure probability of the two-state machine T = [[x, y], [1-x, 1-y]]
    on the restricted unary parity problem, uniform word distribution,
    starting distribution (1, 0)."""
    p0, p1 = 1.0, 0.0
    correct = 0.0
    a0, a1 = accept_vector
    for i in range(i_max + 1):
        if i > 0:
            for _ in range(2):
                p0, p1 = x * p0 + y * p1, (1 - x) * p0 + (1 - y) * p1
        pr_y = a0 * p0 + a1 * p1
        correct += pr_y if i % 2 == 0 else (1.0 - pr_y)
    return 1.0 - correct / (i_max + 1)


def classical_floor(i_max: int) -> float:
    """(i_max - ceil(i_max/2)) / (i_max + 1), the two-state optimum."""
    return (i_max - math.ceil(i_max / 2)) / (i_max + 1)


def _golden_refine(f, lo, hi, iters=60):
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def optimal_two_state_pfa(i_max: int, grid_step: float = 1e-3) -> PfaOptimum:
    """Minimize the two-state failure probability over (x, y) and the choice
    of accept vector by a dense grid followed by coordinate-wise golden-section
    refinement.  The grid avoids any convexity assumption."""
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    n = int(round(1.0 / grid_step)) + 1
    grid = np.linspace(0.0, 1.0, n)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    # propagate the start distribution across the grid, recording occupation
    # of state 0/1 at each even word length
    p0 = np.ones_like(X)
    p1 = np.zeros_like(X)
    occ0 = [p0.copy()]
    occ1 = [p1.copy()]
    for _ in range(i_max):
        for _ in range(2):
            p0, p1 = X * p0 + Y * p1, (1 - X) * p0 + (1 - Y) * p1
        occ0.append(p0.copy())
        occ1.append(p1.copy())
    best = None
    for accept_vector in ACCEPT_VECTOR_CHOICES:
        a0, a1 = accept_vector
        correct = np.zeros_like(X)
        for i in range(i_max + 1):
            pr_y = a0 * occ0[i] + a1 * occ1[i]
            correct += pr_y if i % 2 == 0 else 1.0 - pr_y
        pfail = 1.0 - correct / (i_max + 1)
        idx = np.unravel_index(np.argmin(pfail), pfail.shape)
        cand = (float(pfail[idx]), float(grid[idx[0]]), float(grid[idx[1]]), accept_vector)
        if best is None or cand[0] < best[0]:
            best = cand
    _, x, y, accept_vector = best
    # coordinate-wise golden-section sweeps around the grid optimum
    h = 2 * grid_step
    for _ in range(3):
        x = _golden_refine(
            lambda v: _two_state_pfail(v, y, i_max, accept_vector),
            max(0.0, x - h), min(1.0, x + h),
        )
        y = _golden_refine(
            lambda v: _two_state_pfail(x, v, i_max, accept_vector),
            max(0.0, y - h), min(1.0, y + h),
        )
    value = _two_state_pfail(x, y, i_max, accept_vector)
    closed = classical_floor(i_max)
    notes = ()
    if abs(value - closed) > 1e-6:
        notes = (f"optimizer value {value!r} differs from closed form {closed!r}",)
    return PfaOptimum(x, y, accept_vector, value, closed, notes)


def dfa_to_json(d: Pvdfa) -> dict:
    return {
        "states": d.n_states,
        "alphabet": list(d.alphabet),
        "delta": [list(row) for row in d.delta],
        "initial": d.initial,
        "labels": {label: sorted(states) for label, states in d.label_sets.items()},
    }


def dfa_from_json(obj) -> Pvdfa:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Pvdfa(
        n_states=int(obj["states"]),
        alphabet=tuple(obj["alphabet"]),
        delta=[[int(x) for x in row] for row in obj["delta"]],
        initial=int(obj["initial"]),
        label_sets={label: set(states) for label, states in obj["labels"].items()},
    )
