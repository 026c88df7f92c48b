"""Complex linear algebra and quantum primitives shared by all other modules.

States, density matrices, Kraus channels, Choi matrices, and Haar-random
unitaries.  Everything is a plain numpy array wrapped in a small frozen
dataclass that validates its invariants on construction.  All numerical
tolerances live in :data:`TOLERANCES` so they can be adjusted in one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Tolerances:
    """Central numerical tolerances.

    validity   -- structural checks (Hermiticity, trace preservation, PSD)
    state_eq   -- pure-state equality up to global phase
    prob       -- probability comparisons ("error 0" means >= 1 - prob)
    """

    validity: float = 1e-10
    state_eq: float = 1e-9
    prob: float = 1e-12


TOLERANCES = Tolerances()

# Pauli matrices, used throughout.
PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_complex(a) -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class PureState:
    """A normalized state vector; equality is up to a global phase."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a nonempty vector")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise ValueError("state vector must have unit norm")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def equals(self, other: "PureState", tol: float | None = None) -> bool:
        """Phase-invariant equality: |<self|other>| >= 1 - tol."""
        tol = TOLERANCES.state_eq if tol is None else tol
        if self.dim != other.dim:
            return False
        return abs(np.vdot(self.amplitudes, other.amplitudes)) >= 1.0 - tol

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex(self.matrix)
        tol = TOLERANCES.validity
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.abs(m - m.conj().T).max() > tol:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > tol:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(m).min() < -tol:
            raise ValueError("density matrix must be positive semidefinite")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class KrausChannel:
    """A quantum channel given by Kraus operators.

    Construction checks shapes only; use :func:`validate_cptp` for the
    trace-preservation and complete-positivity certificates.
    """

    kraus_ops: tuple
    dim_in: int = field(default=0)
    dim_out: int = field(default=0)

    def __post_init__(self):
        ops = tuple(_as_complex(K) for K in self.kraus_ops)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        rows, cols = ops[0].shape
        for K in ops:
            if K.shape != (rows, cols):
                raise ValueError("all Kraus operators must share one shape")
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "dim_in", cols)
        object.__setattr__(self, "dim_out", rows)

    @property
    def rank(self) -> int:
        return len(self.kraus_ops)


@dataclass(frozen=True)
class ChoiMatrix:
    """Unnormalized Choi matrix C = sum_ij |i><j| (x) L(|i><j|), Tr C = d."""

    matrix: np.ndarray
    dim: int

    def __post_init__(self):
        m = _as_complex(self.matrix)
        d = self.dim
        if m.shape != (d * d, d * d):
            raise ValueError("Choi matrix must be d^2 x d^2")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -TOLERANCES.validity:
            raise ValueError("Choi matrix must be positive semidefinite")
        if abs(np.trace(m).real - d) > 1e-9:
            raise ValueError("Choi matrix must have trace d")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class CptpReport:
    """Nonnegative defect magnitudes; the channel is valid iff both are small."""

    trace_defect: float
    cp_defect: float
    valid: bool


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply L(rho) = sum_i K_i rho K_i^dag."""
    if ch.dim_in != rho.dim:
        raise ValueError(
            f"channel input dimension {ch.dim_in} != state dimension {rho.dim}"
        )
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    for K in ch.kraus_ops:
        out += K @ rho.matrix @ K.conj().T
    return DensityMatrix(out)


def unitary_channel(u) -> KrausChannel:
    """Channel with the single Kraus operator u."""
    return KrausChannel((_as_complex(u),))


def compose_channels(after: KrausChannel, before: KrausChannel) -> KrausChannel:
    """Channel doing `before` first, then `after`."""
    if after.dim_in != before.dim_out:
        raise ValueError("channel dimensions do not compose")
    ops = tuple(A @ B for A in after.kraus_ops for B in before.kraus_ops)
    return KrausChannel(ops)


def choi_matrix_raw(ch: KrausChannel) -> np.ndarray:
    """Choi matrix as a bare array (no PSD/trace validation).

    Block (i, j) of the result is L(|i><j|), so C = sum_ij |i><j| (x) L(|i><j|).
    """
    din, dout = ch.dim_in, ch.dim_out
    C = np.zeros((din * dout, din * dout), dtype=complex)
    for i in range(din):
        for j in range(din):
            block = np.zeros((dout, dout), dtype=complex)
            for K in ch.kraus_ops:
                block += np.outer(K[:, i], K[:, j].conj())
            C[i * dout : (i + 1) * dout, j * dout : (j + 1) * dout] = block
    return C


def choi_of(ch: KrausChannel) -> ChoiMatrix:
    """Unnormalized Choi matrix of a square channel; Tr C = d."""
    if ch.dim_in != ch.dim_out:
        raise ValueError("Choi conversion requires a square channel")
    return ChoiMatrix(choi_matrix_raw(ch), ch.dim_in)


def validate_cptp(ch: KrausChannel) -> CptpReport:
    """Report trace-preservation and complete-positivity defects.

    trace_defect is the operator norm of (sum K^dag K - I); cp_defect is the
    magnitude of the most negative Choi eigenvalue (0 if PSD).
    """
    acc = np.zeros((ch.dim_in, ch.dim_in), dtype=complex)
    for K in ch.kraus_ops:
        acc += K.conj().T @ K
    diff = acc - np.eye(ch.dim_in)
    trace_defect = float(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).max())
    C = choi_matrix_raw(ch)
    min_eig = float(np.linalg.eigvalsh((C + C.conj().T) / 2).min())
    cp_defect = max(0.0, -min_eig)
    tol = TOLERANCES.validity
    return CptpReport(trace_defect, cp_defect, trace_defect <= tol and cp_defect <= tol)


def channel_from_choi_action(C: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Recover L(rho) = Tr_1[C (rho^T (x) I)] from an unnormalized Choi matrix."""
    d2 = C.shape[0]
    d = int(round(math.isqrt(d2)))
    Cr = C.reshape(d, d, d, d)  # indices (i, out_i, j, out_j)
    return np.einsum("iajb,ij->ab", Cr, rho)


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix.

    Deterministic for a fixed seed; accepts anything numpy's default_rng does.
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    # fix the phase gauge of QR so the distribution is exactly Haar
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return u.shape[0] == u.shape[1] and np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= tol


# Common single-qubit states.
KET0 = PureState(np.array([1, 0], dtype=complex))
KET1 = PureState(np.array([0, 1], dtype=complex))
KET_PLUS = PureState(np.array([1, 1], dtype=complex) / math.sqrt(2))
KET_MINUS = PureState(np.array([1, -1], dtype=complex) / math.sqrt(2))
