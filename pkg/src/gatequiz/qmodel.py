"""Quantum finite automata and noisy quantum models.

A Qfa carries an orthonormal basis, one unitary per symbol, a pure initial
state, and disjoint labeled subsets of the basis.  A QuantumModel is the
noisy generalization: a density matrix, one channel per symbol, and a
label-indexed POVM (labels need not exhaust the outcomes).  Both expose
label_probabilities(word), so they plug into the same failure-probability
machinery as the classical machines.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import problems, qcore
from .automata import Pvdfa, SolveVerdict
from .problems import PromiseProblem, enumerate_promised
from .qcore import (
    DensityMatrix,
    KrausChannel,
    PureState,
    TOLERANCES,
    unitary_channel,
)

__all__ = [
    "Qfa",
    "QuantumModel",
    "EoQfaClassification",
    "make_canonical_qfa",
    "label_probability",
    "solves_with_error",
    "orbit_to_dfa",
    "classify_eo_qfa",
    "qfa_to_model",
    "model_to_json",
    "model_from_json",
    "matrix_to_json",
    "matrix_from_json",
]

SQRT_Z = np.diag([1, 1j]).astype(complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def root_z(k: int) -> np.ndarray:
    """diag(1, exp(i*pi/2^k)), the 2^k-th root of Z."""
    return np.diag([1.0, np.exp(1j * np.pi / 2**k)]).astype(complex)


def root_zq(q: int, r: int) -> np.ndarray:
    """The r-th root of the dimension-q clock operator: diag(omega^(m/r))."""
    omega = 2j * np.pi / q
    return np.diag([np.exp(omega * m / r) for m in range(q)]).astype(complex)


def fourier_state(q: int, j: int) -> PureState:
    omega = 2j * np.pi / q
    amps = np.exp(omega * j * np.arange(q)) / math.sqrt(q)
    return PureState(amps)


@dataclass
class Qfa:
    """Measure-once quantum finite automaton over an orthonormal basis."""

    basis_states: tuple
    alphabet: tuple
    unitaries: dict
    initial: PureState
    labeled_states: dict  # label -> tuple of basis indices

    def __post_init__(self):
        tol = TOLERANCES.validity
        dim = self.basis_states[0].dim
        gram = np.array(
            [[np.vdot(a.amplitudes, b.amplitudes) for b in self.basis_states]
             for a in self.basis_states]
        )
        if np.abs(gram - np.eye(len(self.basis_states))).max() > tol:
            raise ValueError("basis states must be orthonormal")
        for sym in self.alphabet:
            u = np.asarray(self.unitaries[sym], dtype=complex)
            if not qcore.is_unitary(u, tol):
                raise ValueError(f"transition for {sym!r} is not unitary")
            self.unitaries[sym] = u
        if self.initial.dim != dim:
            raise ValueError("initial state has wrong dimension")
        seen = set()
        for label, idxs in self.labeled_states.items():
            idxs = tuple(idxs)
            if seen & set(idxs):
                raise ValueError("labeled subsets must be disjoint")
            seen |= set(idxs)
            self.labeled_states[label] = idxs

    @property
    def dim(self) -> int:
        return self.initial.dim

    def word_unitary(self, word: str) -> np.ndarray:
        u = np.eye(self.dim, dtype=complex)
        for ch in word:
            u = self.unitaries[ch] @ u
        return u

    def label_probabilities(self, word: str) -> dict:
        psi = self.word_unitary(word) @ self.initial.amplitudes
        out = {}
        for label, idxs in self.labeled_states.items():
            out[label] = float(
                sum(abs(np.vdot(self.basis_states[i].amplitudes, psi)) ** 2 for i in idxs)
            )
        return out


@dataclass
class QuantumModel:
    """(initial density matrix, per-symbol channels, label-indexed POVM)."""

    initial: DensityMatrix
    channels: dict
    povm: dict

    def __post_init__(self):
        tol = TOLERANCES.validity
        d = self.initial.dim
        for sym, ch in self.channels.items():
            if ch.dim_in != d or ch.dim_out != d:
                raise ValueError(f"channel for {sym!r} has wrong dimension")
        total = np.zeros((d, d), dtype=complex)
        for label, M in self.povm.items():
            M = np.asarray(M, dtype=complex)
            if np.linalg.eigvalsh((M + M.conj().T) / 2).min() < -tol:
                raise ValueError(f"POVM element {label!r} must be positive")
            total += M
            self.povm[label] = M
        if np.linalg.eigvalsh((total + total.conj().T) / 2).max() > 1 + tol:
            raise ValueError("POVM elements must sum to at most the identity")

    @property
    def dim(self) -> int:
        return self.initial.dim

    @property
    def alphabet(self) -> tuple:
        return tuple(self.channels)

    def evolve(self, word: str) -> DensityMatrix:
        rho = self.initial
        for ch in word:
            rho = qcore.apply_channel(self.channels[ch], rho)
        return rho

    def label_probabilities(self, word: str) -> dict:
        rho = self.evolve(word).matrix
        return {
            label: float(np.trace(M @ rho).real) for label, M in self.povm.items()
        }


def qfa_to_model(q: Qfa) -> QuantumModel:
    """Projector/unitary-channel form of a Qfa."""
    povm = {}
    for label, idxs in q.labeled_states.items():
        M = np.zeros((q.dim, q.dim), dtype=complex)
        for i in idxs:
            amps = q.basis_states[i].amplitudes
            M += np.outer(amps, amps.conj())
        povm[label] = M
    channels = {sym: unitary_channel(u) for sym, u in q.unitaries.items()}
    return QuantumModel(q.initial.density(), channels, povm)


def _qubit_pm_basis():
    return (qcore.KET_PLUS, qcore.KET_MINUS)


def make_canonical_qfa(p) -> Qfa:
    """The two-(or q-, or 2^N-)state machine solving each family exactly."""
    if isinstance(p, str):
        p = problems.make_problem(p)
    params = dict(p.params)
    if p.family == "eo":
        u = root_z(params["k"])
        return Qfa(
            _qubit_pm_basis(), p.alphabet, {p.alphabet[0]: u},
            qcore.KET_PLUS, {"y": (0,), "n": (1,)},
        )
    if p.family == "diof":
        k = params["k"]
        weights = problems.diof_weights(p)
        unitaries = {sym: root_z(int(k - math.log2(w))) for sym, w in weights.items()}
        return Qfa(
            _qubit_pm_basis(), p.alphabet, unitaries,
            qcore.KET_PLUS, {"y": (0,), "n": (1,)},
        )
    if p.family == "cl":
        return Qfa(
            _qubit_pm_basis(), p.alphabet, {"s": SQRT_Z, "h": HADAMARD},
            qcore.KET_PLUS, {"y": (0,), "n": (1,)},
        )
    if p.family == "neo":
        n, k = params["n"], params["k"]
        plus = qcore.KET_PLUS.amplitudes
        minus = qcore.KET_MINUS.amplitudes
        basis = []
        labels = {}
        for b in range(2**n):
            bits = format(b, f"0{n}b")
            vec = np.array([1.0], dtype=complex)
            for ch in bits:
                vec = np.kron(vec, minus if ch == "1" else plus)
            basis.append(PureState(vec))
            labels[bits] = (b,)
        u1 = root_z(k)
        eye = np.eye(2, dtype=complex)
        unitaries = {}
        for j, sym in enumerate(p.alphabet):
            u = np.array([1.0], dtype=complex)
            for pos in range(n):
                u = np.kron(u, u1 if pos == j else eye)
            unitaries[sym] = u
        return Qfa(tuple(basis), p.alphabet, unitaries, basis[0], labels)
    if p.family == "geo":
        q, r = params["q"], params["r"]
        basis = tuple(fourier_state(q, j) for j in range(q))
        labels = {str(j): (j,) for j in range(q)}
        return Qfa(basis, p.alphabet, {p.alphabet[0]: root_zq(q, r)}, basis[0], labels)
    raise ValueError(f"no canonical automaton for family {p.family!r}")


def label_probability(m, word: str) -> dict:
    """Pr[label | word] for a Qfa or QuantumModel (Born rule)."""
    return m.label_probabilities(word)


def solves_with_error(m, p: PromiseProblem, eps: float = 0.0, budget: int | None = None) -> SolveVerdict:
    """True iff every promised word within the budget gets its label with
    probability >= 1 - eps (eps = 0 means >= 1 - 1e-12)."""
    if not 0 <= eps < 0.5:
        raise ValueError("error probability must be in [0, 1/2)")
    threshold = 1.0 - (TOLERANCES.prob if eps == 0.0 else eps)
    if budget is None:
        if p.max_len is None:
            raise ValueError("unrestricted problem needs a word-length budget")
        budget = p.max_len
    exact = p.max_len is not None and p.max_len <= budget
    checked = 0
    for word, label in enumerate_promised(p, budget):
        checked += 1
        prob = m.label_probabilities(word).get(label, 0.0)
        if prob < threshold:
            return SolveVerdict(False, exact, checked, (word, label, prob))
    return SolveVerdict(True, exact, checked)


def orbit_to_dfa(q: Qfa, cap: int = 10**4) -> Pvdfa:
    """Map a finite orbit {U_w psi0} onto a deterministic machine.

    Orbit states are compared up to global phase; a machine state gets label
    a iff the orbit state coincides with a basis state labeled a.  Raises
    when the orbit exceeds the cap (presumed infinite).
    """
    tol = TOLERANCES.state_eq
    orbit = [q.initial.amplitudes]

    def find(vec):
        for idx, known in enumerate(orbit):
            if abs(np.vdot(known, vec)) >= 1.0 - tol:
                return idx
        return -1

    delta = []
    frontier = [0]
    while frontier:
        state = frontier.pop(0)
        row = []
        for sym in q.alphabet:
            vec = q.unitaries[sym] @ orbit[state]
            idx = find(vec)
            if idx < 0:
                if len(orbit) >= cap:
                    raise ValueError(f"orbit exceeded cap {cap}; presumed infinite")
                orbit.append(vec)
                idx = len(orbit) - 1
                frontier.append(idx)
            row.append(idx)
        while len(delta) <= state:
            delta.append(None)
        delta[state] = row
    label_sets: dict = {}
    for label, idxs in q.labeled_states.items():
        members = set()
        for state, vec in enumerate(orbit):
            for i in idxs:
                if abs(np.vdot(q.basis_states[i].amplitudes, vec)) >= 1.0 - tol:
                    members.add(state)
        if members:
            label_sets[label] = members
    return Pvdfa(len(orbit), q.alphabet, delta, 0, label_sets)


@dataclass(frozen=True)
class EoQfaClassification:
    """Outcome of testing a two-state machine against the unary parity family.

    When valid, basis_change maps the initial state to |+> and
    exp(-i*phase0) * V U V^dag = diag(1, exp(i*pi*j/2^k)) with j odd.
    conjugated marks machines whose canonical partner is the complex
    conjugate (j in the upper half, paired with 2^(k+1) - j).
    """

    valid: bool
    j: int | None = None
    conjugated: bool | None = None
    basis_change: np.ndarray | None = None
    phase0: float | None = None
    reason: str = ""


def classify_eo_qfa(q: Qfa, k: int, budget: int | None = None) -> EoQfaClassification:
    """Decide whether a 2-state machine has the canonical solving form.

    Checks: the accept set is exactly the initial state, the reject set its
    basis complement, the transition unitary has eigenphase difference
    pi*j/2^k with j odd, and the initial state is unbiased in the
    eigenbasis.  A solve-check over the word budget cross-checks the verdict.
    """
    tol = TOLERANCES.state_eq
    if len(q.basis_states) != 2 or q.dim != 2:
        raise ValueError("classification needs a two-state machine")
    accept = q.labeled_states.get("y", ())
    reject = q.labeled_states.get("n", ())
    if len(accept) != 1 or not q.basis_states[accept[0]].equals(q.initial):
        return EoQfaClassification(False, reason="accept set is not the initial state")
    if len(reject) != 1 or reject[0] == accept[0]:
        return EoQfaClassification(False, reason="reject set is not the complementary basis state")
    u = q.unitaries[q.alphabet[0]]
    phases, vecs = np.linalg.eig(u)
    phases = np.angle(phases)
    # order the eigenvectors deterministically: larger overlap with |0> first
    o0 = abs(vecs[0, 0])
    o1 = abs(vecs[0, 1])
    if abs(o0 - o1) < 1e-12:
        order = np.argsort(np.mod(phases, 2 * np.pi))
    else:
        order = (0, 1) if o0 > o1 else (1, 0)
    v0, v1 = vecs[:, order[0]], vecs[:, order[1]]
    phi0, phi1 = phases[order[0]], phases[order[1]]
    delta = (phi1 - phi0) % (2 * np.pi)
    if abs(delta) < 1e-12 or abs(delta - 2 * np.pi) < 1e-12:
        return EoQfaClassification(False, reason="degenerate eigenphases")
    j_real = delta * (2**k) / np.pi
    j = int(round(j_real)) % 2 ** (k + 1)
    if abs(delta - np.pi * round(j_real) / 2**k) > tol:
        return EoQfaClassification(False, reason=f"eigenphase difference {delta:.6f} is not a pi/2^k multiple")
    if j % 2 == 0:
        return EoQfaClassification(False, reason=f"eigenphase multiple j={j} is even")
    psi0 = q.initial.amplitudes
    ov0, ov1 = np.vdot(v0, psi0), np.vdot(v1, psi0)
    inv_sqrt2 = 1 / math.sqrt(2)
    if abs(abs(ov0) - inv_sqrt2) > tol or abs(abs(ov1) - inv_sqrt2) > tol:
        return EoQfaClassification(False, reason="initial state is biased in the eigenbasis")
    # rephase eigenvectors so <v_i|psi0> = 1/sqrt(2), making V psi0 = |+>
    v0 = v0 * cmath.exp(1j * cmath.phase(ov0))
    v1 = v1 * cmath.exp(1j * cmath.phase(ov1))
    V = np.vstack([v0.conj(), v1.conj()])
    if budget is not None:
        eo = problems.make_eo(k)
        if not solves_with_error(q, eo, 0.0, budget=budget):
            return EoQfaClassification(False, reason="machine fails the solve-check")
    return EoQfaClassification(
        valid=True, j=j, conjugated=j > 2**k, basis_change=V, phase0=float(phi0)
    )


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(e[0], e[1]) for e in row] for row in rows])


def model_to_json(m: QuantumModel) -> dict:
    return {
        "dim": m.dim,
        "rho": matrix_to_json(m.initial.matrix),
        "channels": {
            sym: [matrix_to_json(K) for K in ch.kraus_ops]
            for sym, ch in m.channels.items()
        },
        "povm": {label: matrix_to_json(M) for label, M in m.povm.items()},
    }


def model_from_json(obj) -> QuantumModel:
    rho = DensityMatrix(matrix_from_json(obj["rho"]))
    channels = {
        sym: KrausChannel(tuple(matrix_from_json(K) for K in ops))
        for sym, ops in obj["channels"].items()
    }
    povm = {label: matrix_from_json(M) for label, M in obj["povm"].items()}
    return QuantumModel(rho, channels, povm)
