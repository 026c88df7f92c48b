"""Shared test oracles: brute-force enumeration and grid search.

These deliberately avoid the library's search/optimization code paths so
they can act as independent references.
"""

import itertools

import numpy as np


def naive_min_dfa(sample, alphabet, max_states):
    """Minimum machine size consistent with a sample, by enumerating every
    transition table and deriving the forced labeling."""
    sym_index = {s: j for j, s in enumerate(alphabet)}
    words = [([sym_index[c] for c in w], label) for w, label in sample]
    n_sym = len(alphabet)
    for n in range(1, max_states + 1):
        for flat in itertools.product(range(n), repeat=n * n_sym):
            demanded = {}
            ok = True
            for word, label in words:
                state = 0
                for c in word:
                    state = flat[state * n_sym + c]
                prev = demanded.get(state)
                if prev is None:
                    demanded[state] = label
                elif prev != label:
                    ok = False
                    break
            if ok:
                return n
    return None


def random_dfa_sample(rng, n_states, n_sym, n_words, max_len):
    """Labeled words generated by a random partially labeled machine."""
    alphabet = tuple("abcd"[:n_sym])
    delta = rng.integers(0, n_states, size=(n_states, n_sym))
    labels = {}
    for s in range(n_states):
        pick = rng.integers(0, 3)
        if pick < 2:
            labels[s] = "yn"[pick]
    sample = {}
    for _ in range(n_words):
        length = int(rng.integers(0, max_len + 1))
        word_syms = rng.integers(0, n_sym, size=length)
        state = 0
        for c in word_syms:
            state = delta[state][c]
        if state in labels:
            word = "".join(alphabet[c] for c in word_syms)
            sample[word] = labels[state]
    return sorted(sample.items()), alphabet


def gauge_grid_oracle(model, target_u, na=80, nb=80, nt=79):
    """Dense-grid infidelity oracle for the reduced model structure.

    Evaluates max(gate infidelity, |sin theta|) by the direct trace-overlap
    formula on a uniform (alpha, beta, theta) x {conjugation} grid of about
    a million points; independent of the library's Pauli-form objective.
    """
    (ch,) = model.channels.values()
    L = np.stack(ch.kraus_ops)
    alphas = np.linspace(0, 2 * np.pi, na, endpoint=False)
    betas = np.linspace(0, 2 * np.pi, nb, endpoint=False)
    thetas = np.linspace(0, np.pi, nt, endpoint=False)
    A, B, T = np.meshgrid(alphas, betas, thetas, indexing="ij")
    A, B, T = A.ravel(), B.ravel(), T.ravel()
    ct, st = np.cos(T), np.sin(T)
    U = np.empty((A.size, 2, 2), complex)
    U[:, 0, 0] = np.exp(1j * (A + B)) * ct
    U[:, 0, 1] = np.exp(1j * (A - B)) * st
    U[:, 1, 0] = -np.exp(-1j * (A - B)) * st
    U[:, 1, 1] = np.exp(-1j * (A + B)) * ct
    best = np.inf
    for conj in (False, True):
        W = target_u.conj() if conj else target_u
        V = np.einsum("gij,jk,glk->gil", U, W, U.conj())
        ov = np.einsum("gil,kil->gk", V.conj(), L)
        g = (np.abs(ov) ** 2).sum(axis=1)
        obj = np.maximum((2.0 / 3.0) * (1.0 - g / 4.0), np.abs(st))
        best = min(best, float(obj.min()))
    return best
