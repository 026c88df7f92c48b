"""Promise-problem families, membership oracles, and word generators.

A promise problem assigns labels to a subset of all words over its alphabet
("promised" words); on anything else the answer is unconstrained.  Supported
families:

* ``eo``   -- unary parity-of-index problem with stride 2^k
* ``diof`` -- weighted symbol counts mod 2^{k+1}, weights (1, 2, ..., 2^{k-1})
* ``cl``   -- two-symbol problem generated by the gate pair (sqrt(Z), H)
              acting on |+>, tracked exactly on the six-state stabilizer orbit
* ``neo``  -- N independent unary parity problems, labels in {0,1}^N
* ``geo``  -- unary mod-q problem with stride r, labels 0..q-1 (q prime)

All words are plain strings over single-character symbols; the empty string
is the empty word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "PromiseProblem",
    "make_problem",
    "make_eo",
    "make_diof",
    "make_cl",
    "make_neo",
    "make_geo",
    "label_of",
    "enumerate_promised",
    "reduced_eo_words",
    "restrict",
    "parse_descriptor",
]

OUTSIDE = None  # returned by label_of for non-promised words

# Exact orbit of |+> under s -> sqrt(Z), h -> H on the six stabilizer states,
# indexed ("0", "1", "+", "-", "+y", "-y").  No floating point: the orbit is
# closed, so integer table lookups decide membership exactly.
CL_STATES = ("0", "1", "+", "-", "+y", "-y")
CL_TABLE = {
    "s": (0, 1, 4, 5, 3, 2),
    "h": (2, 3, 0, 1, 5, 4),
}
CL_INITIAL = 2  # "+"
CL_ACCEPT = 2  # lands on "+"
CL_REJECT = 3  # lands on "-"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class PromiseProblem:
    """A promise-problem instance.

    family      one of "eo", "diof", "cl", "neo", "geo"
    params      family parameters (k, n, q, r as applicable)
    alphabet    ordered tuple of single-character symbols
    labels      ordered tuple of label strings
    max_len     optional restriction: only words of length <= max_len are
                promised (restriction removes words, never relabels)
    """

    family: str
    params: tuple
    alphabet: tuple
    labels: tuple
    max_len: int | None = None

    def __post_init__(self):
        if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet must be nonempty without duplicates")
        if not self.labels or len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be nonempty without duplicates")

    @property
    def is_unary(self) -> bool:
        return len(self.alphabet) == 1

    def descriptor(self) -> str:
        """Round-trippable descriptor string (see parse_descriptor)."""
        p = dict(self.params)
        if self.family == "eo":
            s = f"eo:k={p['k']}"
        elif self.family == "diof":
            s = f"diof:k={p['k']}"
        elif self.family == "cl":
            s = "cl"
        elif self.family == "neo":
            s = f"neo:n={p['n']}:k={p['k']}"
        else:
            s = f"geo:q={p['q']}:r={p['r']}"
        if self.max_len is not None:
            s += f":len={self.max_len}"
        return s


def make_eo(k: int, i_max: int | None = None) -> PromiseProblem:
    """Unary problem over words s^(i*2^k): label y for i even, n for i odd."""
    if k < 1:
        raise ValueError("k must be >= 1")
    max_len = None if i_max is None else i_max * (2**k)
    if i_max is not None and i_max < 0:
        raise ValueError("i_max must be >= 0")
    return PromiseProblem("eo", (("k", k),), ("s",), ("y", "n"), max_len)


def _diof_alphabet(k: int) -> tuple:
    # weight order (1, 2, ..., 2^{k-1}); the k=2 instance uses the
    # conventional gate letters with weights a_t=1, a_s=2
    if k == 1:
        return ("s",)
    if k == 2:
        return ("t", "s")
    return tuple(str(j) for j in range(1, k + 1))


def make_diof(k: int) -> PromiseProblem:
    """Weighted-count problem: sum_j a_j*count_j mod 2^{k+1} in {0, 2^k}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return PromiseProblem("diof", (("k", k),), _diof_alphabet(k), ("y", "n"))


def make_cl(max_len: int | None = None) -> PromiseProblem:
    """Problem over {s, h}: y/n iff the tracked orbit state is +/-."""
    return PromiseProblem("cl", (), ("s", "h"), ("y", "n"), max_len)


def make_neo(n: int, k: int) -> PromiseProblem:
    """N-fold product of the stride-2^k parity problem; labels are bitstrings."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    alphabet = tuple(str(j) for j in range(1, n + 1))
    labels = tuple(format(b, f"0{n}b") for b in range(2**n))
    return PromiseProblem("neo", (("n", n), ("k", k)), alphabet, labels)


def make_geo(q: int, r: int) -> PromiseProblem:
    """Unary problem over words s^(i*r): label (i mod q), q prime."""
    if not _is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if r < 1:
        raise ValueError("r must be >= 1")
    m_q = 0
    rr = r
    while rr % q == 0:
        m_q += 1
        rr //= q
    params = (("q", q), ("r", r), ("m_q", m_q))
    return PromiseProblem("geo", params, ("s",), tuple(str(j) for j in range(q)))


def make_problem(descriptor: str) -> PromiseProblem:
    """Build a problem from a descriptor string (see parse_descriptor)."""
    return parse_descriptor(descriptor)


def parse_descriptor(descriptor: str) -> PromiseProblem:
    """Parse `eo:k=1[:imax=3]`, `diof:k=2`, `cl`, `neo:n=2:k=1`,
    `geo:q=3:r=1`, each optionally suffixed with `:len=<int>`."""
    parts = descriptor.strip().lower().split(":")
    family, kv = parts[0], {}
    for part in parts[1:]:
        if "=" not in part:
            raise ValueError(f"bad descriptor component {part!r}")
        key, _, value = part.partition("=")
        kv[key] = int(value)
    max_len = kv.pop("len", None)
    try:
        if family == "eo":
            prob = make_eo(kv.pop("k"), kv.pop("imax", None))
            if max_len is not None:
                prob = restrict(prob, max_len)
        elif family == "diof":
            prob = make_diof(kv.pop("k"))
            if max_len is not None:
                prob = restrict(prob, max_len)
        elif family == "cl":
            prob = make_cl(max_len)
        elif family == "neo":
            prob = make_neo(kv.pop("n"), kv.pop("k"))
            if max_len is not None:
                prob = restrict(prob, max_len)
        elif family == "geo":
            prob = make_geo(kv.pop("q"), kv.pop("r"))
            if max_len is not None:
                prob = restrict(prob, max_len)
        else:
            raise ValueError(f"unknown family {family!r}")
    except KeyError as exc:
        raise ValueError(f"descriptor {descriptor!r} missing parameter {exc}") from None
    if kv:
        raise ValueError(f"descriptor {descriptor!r} has unknown keys {sorted(kv)}")
    return prob


def diof_weights(p: PromiseProblem) -> dict:
    """Map symbol -> weight for a diof problem (1, 2, ..., 2^(k-1) in order)."""
    k = dict(p.params)["k"]
    return {sym: 2**j for j, sym in enumerate(p.alphabet)}


def _check_word(p: PromiseProblem, word: str):
    for ch in word:
        if ch not in p.alphabet:
            raise ValueError(f"symbol {ch!r} not in alphabet {p.alphabet}")


def cl_orbit_state(word: str) -> int:
    """Index into CL_STATES reached from "+" after reading word (exact)."""
    state = CL_INITIAL
    for ch in word:
        state = CL_TABLE[ch][state]
    return state


def _label_unrestricted(p: PromiseProblem, word: str):
    n = len(word)
    if p.family == "eo":
        k = dict(p.params)["k"]
        step = 2**k
        if n % step:
            return OUTSIDE
        i = n // step
        return "y" if i % 2 == 0 else "n"
    if p.family == "geo":
        params = dict(p.params)
        q, r = params["q"], params["r"]
        if n % r:
            return OUTSIDE
        return str((n // r) % q)
    if p.family == "diof":
        k = dict(p.params)["k"]
        weights = diof_weights(p)
        total = sum(weights[ch] for ch in word) % (2 ** (k + 1))
        if total == 0:
            return "y"
        if total == 2**k:
            return "n"
        return OUTSIDE
    if p.family == "neo":
        params = dict(p.params)
        nn, k = params["n"], params["k"]
        mod = 2 ** (k + 1)
        bits = []
        for sym in p.alphabet:
            c = word.count(sym) % mod
            if c == 0:
                bits.append("0")
            elif c == 2**k:
                bits.append("1")
            else:
                return OUTSIDE
        return "".join(bits)
    if p.family == "cl":
        state = cl_orbit_state(word)
        if state == CL_ACCEPT:
            return "y"
        if state == CL_REJECT:
            return "n"
        return OUTSIDE
    raise ValueError(f"unknown family {p.family!r}")


def label_of(p: PromiseProblem, word: str):
    """Label of a promised word, or None when outside the promise."""
    _check_word(p, word)
    if p.max_len is not None and len(word) > p.max_len:
        return OUTSIDE
    return _label_unrestricted(p, word)


def restrict(p: PromiseProblem, max_len: int) -> PromiseProblem:
    """Keep only promised words of length <= max_len; labels unchanged."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    if p.max_len is not None:
        max_len = min(max_len, p.max_len)
    return replace(p, max_len=max_len)


def restrict_index(p: PromiseProblem, i_max: int) -> PromiseProblem:
    """Restrict a unary stride problem by its index i instead of word length."""
    if p.family == "eo":
        return restrict(p, i_max * 2 ** dict(p.params)["k"])
    if p.family == "geo":
        return restrict(p, i_max * dict(p.params)["r"])
    raise ValueError(f"index restriction undefined for family {p.family!r}")


def enumerate_promised(p: PromiseProblem, max_len: int):
    """All promised words of length <= max_len with labels, length-lex order."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    if p.max_len is not None:
        max_len = min(max_len, p.max_len)
    out = []
    if p.is_unary:
        sym = p.alphabet[0]
        for n in range(max_len + 1):
            word = sym * n
            lab = _label_unrestricted(p, word)
            if lab is not None:
                out.append((word, lab))
        return out
    # breadth-first over the word tree keeps length-lex order
    frontier = [""]
    for n in range(max_len + 1):
        for word in frontier:
            lab = _label_unrestricted(p, word)
            if lab is not None:
                out.append((word, lab))
        if n < max_len:
            frontier = [w + s for w in frontier for s in p.alphabet]
    return out


def unary_index_structure(p: PromiseProblem):
    """(step, label_period, label_at_index) for a unary stride problem.

    Promised words are s^(i*step); label_at_index(i) gives the label, which
    is periodic in i with the returned period.
    """
    if not p.is_unary:
        raise ValueError("problem is not unary")
    params = dict(p.params)
    if p.family == "eo":
        return 2 ** params["k"], 2, lambda i: "y" if i % 2 == 0 else "n"
    if p.family == "geo":
        q = params["q"]
        return params["r"], q, lambda i: str(i % q)
    if p.family == "diof" and params["k"] == 1:
        return 2, 2, lambda i: "y" if i % 2 == 0 else "n"
    raise ValueError(f"no unary index structure for family {p.family!r}")


def reduced_eo_words(k: int, i_max: int):
    """Reduced word set sufficient for minimality of the restricted problem.

    For odd i_max keeps {empty, s^(2*2^k)} plus all odd-index words; for even
    i_max keeps all even-index words plus {s^(2^k)}.  Length-lex order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= i_max <= 2 ** (k + 1):
        raise ValueError(f"i_max must be in [0, {2 ** (k + 1)}]")
    step = 2**k
    pairs = []
    if i_max % 2 == 1:
        pairs.append(("s" * 0, "y"))
        pairs.append(("s" * (2 * step), "y"))
        for i in range(1, i_max + 1, 2):
            pairs.append(("s" * (i * step), "n"))
    else:
        for i in range(0, i_max + 1, 2):
            pairs.append(("s" * (i * step), "y"))
        pairs.append(("s" * step, "n"))
    pairs.sort(key=lambda pair: len(pair[0]))
    return pairs
