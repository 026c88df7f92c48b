"""Noise-robustness numerics for gate tests on restricted promise problems.

Single-qubit noise channels, infidelity between quantum models under the
(anti-)unitary gauge freedom, random CPTP channel surveys in the
(failure probability, infidelity) plane, asymptotic slope fits, the
classical soundness bound, and the entanglement-breaking channel demo.

The gauge search is a Luus-Jaakola random search over a 3-parameter unitary
plus a complex-conjugation branch.  For the fixed target structure
(rho = |0><0|, computational POVM) the objective reduces to
max(gate infidelity, |sin theta|), which the survey engine evaluates in
vectorized batches: the gate overlap is a quadratic form over Pauli
coefficients, with the gauge entering only through its SO(3) rotation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import problems, qcore
from .automata import failure_probability, optimal_two_state_pfa
from .problems import PromiseProblem
from .qcore import (
    DensityMatrix,
    KrausChannel,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    choi_matrix_raw,
    compose_channels,
    unitary_channel,
    validate_cptp,
)
from .qmodel import QuantumModel

__all__ = [
    "NoiseFamily",
    "GaugeParams",
    "SurveyPoint",
    "SlopeEstimate",
    "NOISE_KINDS",
    "noise_channel",
    "target_model",
    "noisy_model",
    "infidelity",
    "gauge_objective",
    "sample_random_channel",
    "child_seed",
    "survey",
    "slope_estimate",
    "soundness_bound",
    "eb_demo",
    "write_survey_csv",
    "noise_curve",
    "write_noise_curve_csv",
]

NOISE_KINDS = ("depolarizing", "dephasing", "amplitude_damping", "amplitude_raising")

SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])

SLOPE_T_GRID = (1e-3, 2e-3, 5e-3, 1e-2)

_PAULIS = np.stack([PAULI_I, PAULI_X, PAULI_Y, PAULI_Z])


@dataclass(frozen=True)
class NoiseFamily:
    kind: str
    t: float

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("noise parameter t must be in [0, 1]")


@dataclass(frozen=True)
class GaugeParams:
    """Angles of the gauge unitary and the antiunitary branch flag."""

    alpha: float
    beta: float
    theta: float
    conjugate: bool

    def unitary(self) -> np.ndarray:
        return _gauge_unitary(self.alpha, self.beta, self.theta)


@dataclass(frozen=True)
class SurveyPoint:
    index: int
    seed: int
    p_fail: float
    infid: float
    kraus_rank: int


@dataclass(frozen=True)
class SlopeEstimate:
    family: str
    i_max: int
    alpha_hat: float
    t_grid: tuple
    points: tuple  # ((t, p_fail, infid), ...)


def noise_channel(f: NoiseFamily) -> KrausChannel:
    """Kraus form of the four standard single-qubit noise families."""
    t = f.t
    if f.kind == "depolarizing":
        return KrausChannel((
            math.sqrt(1 - 3 * t / 4) * PAULI_I,
            math.sqrt(t / 4) * PAULI_X,
            math.sqrt(t / 4) * PAULI_Y,
            math.sqrt(t / 4) * PAULI_Z,
        ))
    if f.kind == "dephasing":
        return KrausChannel((
            math.sqrt(1 - t / 2) * PAULI_I,
            math.sqrt(t / 2) * PAULI_Z,
        ))
    k0 = np.array([[1, 0], [0, math.sqrt(1 - t)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(t)], [0, 0]], dtype=complex)
    if f.kind == "amplitude_damping":
        return KrausChannel((k0, k1))
    # amplitude raising: conjugate both damping operators by X
    return KrausChannel((PAULI_X @ k0 @ PAULI_X, PAULI_X @ k1 @ PAULI_X))


def target_model(symbol: str = "s") -> QuantumModel:
    """Noiseless target: |0><0| prepared, one sqrt(X) gate, z-basis readout."""
    return QuantumModel(
        DensityMatrix(np.diag([1.0, 0.0])),
        {symbol: unitary_channel(SQRT_X)},
        {"y": np.diag([1.0, 0.0]).astype(complex), "n": np.diag([0.0, 1.0]).astype(complex)},
    )


def noisy_model(target: QuantumModel, f: NoiseFamily) -> QuantumModel:
    """Apply the noise channel after each gate; preparation and measurement
    stay perfect."""
    noise = noise_channel(f)
    if noise.dim_in != target.dim:
        raise ValueError("noise channel dimension does not match the model")
    channels = {sym: compose_channels(noise, ch) for sym, ch in target.channels.items()}
    return QuantumModel(target.initial, channels, dict(target.povm))


def channel_model(ch: KrausChannel, template: QuantumModel | None = None) -> QuantumModel:
    """Model with the given channel substituted for the single gate."""
    if template is None:
        template = target_model()
    (symbol,) = template.alphabet
    return QuantumModel(template.initial, {symbol: ch}, dict(template.povm))


def _gauge_unitary(alpha, beta, theta) -> np.ndarray:
    ct, st = np.cos(theta), np.sin(theta)
    return np.array([
        [np.exp(1j * (alpha + beta)) * ct, np.exp(1j * (alpha - beta)) * st],
        [-np.exp(-1j * (alpha - beta)) * st, np.exp(-1j * (alpha + beta)) * ct],
    ])


def _pauli_coeffs(M) -> np.ndarray:
    """Coefficients of M in the Pauli basis normalized to Tr(P_p M)/sqrt(2)."""
    return np.einsum("pij,ji->p", _PAULIS, np.asarray(M, dtype=complex)) / math.sqrt(2)


def _rotation_matrices(alpha, beta, theta) -> np.ndarray:
    """SO(3) action of the gauge unitary on the Pauli vector, batched."""
    ct, st = np.cos(theta), np.sin(theta)
    q0 = np.cos(alpha + beta) * ct
    q3 = -np.sin(alpha + beta) * ct
    q1 = -np.sin(alpha - beta) * st
    q2 = -np.cos(alpha - beta) * st
    R = np.empty(np.shape(q0) + (3, 3))
    R[..., 0, 0] = 1 - 2 * (q2 * q2 + q3 * q3)
    R[..., 0, 1] = 2 * (q1 * q2 - q0 * q3)
    R[..., 0, 2] = 2 * (q1 * q3 + q0 * q2)
    R[..., 1, 0] = 2 * (q1 * q2 + q0 * q3)
    R[..., 1, 1] = 1 - 2 * (q1 * q1 + q3 * q3)
    R[..., 1, 2] = 2 * (q2 * q3 - q0 * q1)
    R[..., 2, 0] = 2 * (q1 * q3 - q0 * q2)
    R[..., 2, 1] = 2 * (q2 * q3 + q0 * q1)
    R[..., 2, 2] = 1 - 2 * (q1 * q1 + q2 * q2)
    return R


def _params_from_unitaries(u: np.ndarray) -> np.ndarray:
    """Map a stack of U(2) matrices to (alpha, beta, theta) gauge parameters."""
    det = u[..., 0, 0] * u[..., 1, 1] - u[..., 0, 1] * u[..., 1, 0]
    su = u / np.exp(0.5j * np.angle(det))[..., None, None]
    a, b = su[..., 0, 0], su[..., 0, 1]
    theta = np.arctan2(np.abs(b), np.abs(a))
    s = np.angle(a)
    d = np.angle(b)
    return np.stack([(s + d) / 2, (s - d) / 2, theta], axis=-1)


class _ReducedGaugeObjective:
    """Vectorized max(gate infidelity, |sin theta|) for a batch of channels
    against a fixed unitary target, as a function of gauge parameters."""

    def __init__(self, kraus: np.ndarray, target_u: np.ndarray, conj_mask: np.ndarray):
        # kraus: (B, K, 2, 2) zero-padded; conj_mask: (R,) branch per restart
        coeffs = np.einsum("pij,bkji->bkp", _PAULIS, kraus) / math.sqrt(2)
        self.M = np.einsum("bkp,bkq->bpq", coeffs, coeffs.conj())
        w = _pauli_coeffs(target_u)
        w_conj = _pauli_coeffs(target_u.conj())
        self.w0 = np.where(conj_mask, w_conj[0], w[0])  # (R,)
        self.wvec = np.where(conj_mask[:, None], w_conj[1:], w[1:])  # (R, 3)

    def __call__(self, params: np.ndarray) -> np.ndarray:
        # params: (B, R, 3) -> objective (B, R)
        alpha, beta, theta = params[..., 0], params[..., 1], params[..., 2]
        R3 = _rotation_matrices(alpha, beta, theta)
        v = np.empty(params.shape[:-1] + (4,), dtype=complex)
        v[..., 0] = self.w0
        v[..., 1:] = np.einsum("brij,rj->bri", R3, self.wvec)
        g = np.einsum("brp,bpq,brq->br", v.conj(), self.M, v).real
        gate = (2.0 / 3.0) * (1.0 - g / 4.0)
        return np.maximum(gate, np.abs(np.sin(theta)))


def _lj_minimize(objective, starts: np.ndarray, rand: np.ndarray, contraction: float):
    """Batched Luus-Jaakola: contract the search box on non-improving steps.

    starts: (B, R, 3) initial points; rand: (B, R, T, 3) uniform in [-1, 1].
    Returns (best values (B,), best params (B, 3), best restart index (B,)).
    """
    x = starts.copy()
    fx = objective(x)
    box = np.broadcast_to(
        np.array([2 * np.pi, 2 * np.pi, np.pi]), x.shape
    ).copy()
    iterations = rand.shape[2]
    for it in range(iterations):
        y = x + rand[:, :, it, :] * box
        fy = objective(y)
        improved = fy < fx
        x = np.where(improved[..., None], y, x)
        fx = np.where(improved, fy, fx)
        box = np.where(improved[..., None], box, box * contraction)
    best_r = np.argmin(fx, axis=1)
    take = np.arange(fx.shape[0])
    return fx[take, best_r], x[take, best_r], best_r


def _restart_plan(restarts: int):
    """Restart r uses the conjugate branch iff r is odd; restarts 0 and 1
    start at the identity gauge, the rest from Haar-random unitaries."""
    if restarts < 2:
        raise ValueError("need at least 2 restarts (one per branch)")
    conj_mask = np.arange(restarts) % 2 == 1
    return conj_mask


def _draw_starts(rng, restarts: int) -> np.ndarray:
    """Identity starts for restarts 0/1, Haar-seeded starts for the rest."""
    starts = np.zeros((restarts, 3))
    n_haar = restarts - 2
    if n_haar > 0:
        g = rng.standard_normal((n_haar, 2, 2)) + 1j * rng.standard_normal((n_haar, 2, 2))
        q, r = np.linalg.qr(g / math.sqrt(2))
        diag = np.einsum("nii->ni", r).copy()
        diag /= np.abs(diag)
        starts[2:] = _params_from_unitaries(q * diag[:, None, :])
    return starts


def _reduced_structure(m: QuantumModel) -> bool:
    tol = 1e-9
    if m.dim != 2 or set(m.povm) != {"y", "n"}:
        return False
    return (
        np.abs(m.initial.matrix - np.diag([1.0, 0.0])).max() <= tol
        and np.abs(m.povm["y"] - np.diag([1.0, 0.0])).max() <= tol
        and np.abs(m.povm["n"] - np.diag([0.0, 1.0])).max() <= tol
    )


def _stack_kraus(ch: KrausChannel, width: int | None = None) -> np.ndarray:
    ops = np.stack(ch.kraus_ops)
    if width is not None and ops.shape[0] < width:
        pad = np.zeros((width - ops.shape[0], 2, 2), dtype=complex)
        ops = np.concatenate([ops, pad])
    return ops


def infidelity(
    model: QuantumModel,
    target: QuantumModel,
    *,
    seed=None,
    rng=None,
    restarts: int = 16,
    iterations: int = 200,
    contraction: float = 0.95,
):
    """Gauge-optimized infidelity between two qubit models (upper bound).

    Minimizes max{state infidelity, gate infidelity, measurement distance}
    over the 3-parameter gauge unitary and the conjugation branch via
    Luus-Jaakola random search.  When both models prepare |0><0| and measure
    in the computational basis the objective reduces to
    max(gate infidelity, |sin theta|).  The result is an upper bound on the
    true infimum; the returned GaugeParams reproduce it.
    """
    if model.dim != 2 or target.dim != 2:
        raise ValueError("infidelity is implemented for qubit models")
    if tuple(model.alphabet) != tuple(target.alphabet):
        raise ValueError("models must share one alphabet")
    if set(model.povm) != set(target.povm):
        raise ValueError("models must share one label set")
    if rng is None:
        if seed is None:
            raise ValueError("provide a seed or an rng")
        rng = np.random.default_rng(seed)
    conj_mask = _restart_plan(restarts)
    starts = _draw_starts(rng, restarts)[None, :, :]
    rand = rng.uniform(-1.0, 1.0, size=(1, restarts, iterations, 3))

    target_unitary = None
    if len(target.channels) == 1:
        (ch,) = target.channels.values()
        if ch.rank == 1 and qcore.is_unitary(ch.kraus_ops[0]):
            target_unitary = ch.kraus_ops[0]
    if target_unitary is not None and _reduced_structure(model) and _reduced_structure(target):
        (sym,) = target.channels.keys()
        objective = _ReducedGaugeObjective(
            _stack_kraus(model.channels[sym])[None, ...], target_unitary, conj_mask
        )
    else:
        objective = _GeneralGaugeObjective(model, target, conj_mask)
    values, best_params, best_r = _lj_minimize(objective, starts, rand, contraction)
    gauge = GaugeParams(
        float(best_params[0][0]),
        float(best_params[0][1]),
        float(best_params[0][2]),
        bool(conj_mask[best_r[0]]),
    )
    return float(values[0]), gauge


def gauge_objective(model: QuantumModel, target: QuantumModel, gauge: GaugeParams) -> float:
    """Objective value at one gauge point (no optimization); the quantity
    infidelity() minimizes, so min <= gauge_objective at any feasible point."""
    conj_mask = np.array([gauge.conjugate])
    target_unitary = None
    if len(target.channels) == 1:
        (ch,) = target.channels.values()
        if ch.rank == 1 and qcore.is_unitary(ch.kraus_ops[0]):
            target_unitary = ch.kraus_ops[0]
    if target_unitary is not None and _reduced_structure(model) and _reduced_structure(target):
        (sym,) = target.channels.keys()
        objective = _ReducedGaugeObjective(
            _stack_kraus(model.channels[sym])[None, ...], target_unitary, conj_mask
        )
    else:
        objective = _GeneralGaugeObjective(model, target, conj_mask)
    params = np.array([[[gauge.alpha, gauge.beta, gauge.theta]]])
    return float(objective(params)[0, 0])


class _GeneralGaugeObjective:
    """Full three-term objective for arbitrary qubit models (loop-based)."""

    def __init__(self, model: QuantumModel, target: QuantumModel, conj_mask):
        self.conj_mask = conj_mask
        self.model = model
        self.targets = {}
        for conj in (False, True):
            rho = target.initial.matrix.conj() if conj else target.initial.matrix
            povm = {
                a: (M.conj() if conj else M) for a, M in target.povm.items()
            }
            chans = {
                sym: [K.conj() if conj else K for K in ch.kraus_ops]
                for sym, ch in target.channels.items()
            }
            self.targets[conj] = (rho, povm, chans)

    def _value(self, params, conj) -> float:
        alpha, beta, theta = params
        U = _gauge_unitary(alpha, beta, theta)
        rho_t, povm_t, chans_t = self.targets[conj]
        rho_g = U @ rho_t @ U.conj().T
        state = 1.0 - float(np.trace(rho_g @ self.model.initial.matrix).real)
        meas = 0.0
        for a, Mt in povm_t.items():
            diff = U @ Mt @ U.conj().T - self.model.povm[a]
            meas = max(meas, float(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).max()))
        gate = 0.0
        for sym, ops_t in chans_t.items():
            g = 0.0
            for A in ops_t:
                Ag = U @ A @ U.conj().T
                for B in self.model.channels[sym].kraus_ops:
                    g += abs(np.trace(Ag.conj().T @ B)) ** 2
            gate = max(gate, (2.0 / 3.0) * (1.0 - g / 4.0))
        return max(state, gate, meas)

    def __call__(self, params: np.ndarray) -> np.ndarray:
        B, R, _ = params.shape
        out = np.empty((B, R))
        for b in range(B):
            for r in range(R):
                out[b, r] = self._value(params[b, r], self.conj_mask[r])
        return out


_SPLITMIX_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _SPLITMIX_MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _SPLITMIX_MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _SPLITMIX_MASK
    return x ^ (x >> 31)


def child_seed(master_seed: int, index: int) -> int:
    """Strong 64-bit mix of (master seed, index) for per-point rng streams."""
    return _splitmix64((_splitmix64(master_seed & _SPLITMIX_MASK) ^ index) & _SPLITMIX_MASK)


def _draw_channel(rng) -> np.ndarray:
    """Random CPTP qubit channel, rank uniform in {1..4}, zero-padded (4,2,2).

    Raw matrices have i.i.d. entries r^2 exp(i phi) with r, phi/2pi uniform
    in [0, 1); orthonormalization against S = sum G^dag G makes the Kraus
    set exactly trace preserving.
    """
    rank = int(rng.integers(1, 5))
    r = rng.random((rank, 2, 2))
    phi = rng.random((rank, 2, 2)) * (2 * np.pi)
    G = (r * r) * np.exp(1j * phi)
    S = np.einsum("kji,kjl->il", G.conj(), G)
    # inverse square root of a 2x2 positive matrix, in closed form
    tr = S[0, 0].real + S[1, 1].real
    det = (S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]).real
    s = math.sqrt(max(det, 0.0))
    denom = math.sqrt(max(tr + 2 * s, 1e-300))
    sqrt_S = (S + s * np.eye(2)) / denom
    d = sqrt_S[0, 0] * sqrt_S[1, 1] - sqrt_S[0, 1] * sqrt_S[1, 0]
    inv_sqrt = np.array([[sqrt_S[1, 1], -sqrt_S[0, 1]], [-sqrt_S[1, 0], sqrt_S[0, 0]]]) / d
    K = np.einsum("kij,jl->kil", G, inv_sqrt)
    out = np.zeros((4, 2, 2), dtype=complex)
    out[:rank] = K
    return out


def sample_random_channel(seed) -> KrausChannel:
    """Deterministic random CPTP qubit channel for a given seed."""
    rng = np.random.default_rng(seed)
    K = _draw_channel(rng)
    rank = int(np.abs(K).max(axis=(1, 2)).astype(bool).sum())
    return KrausChannel(tuple(K[:rank]))


def _batch_pfail(kraus: np.ndarray, i_max: int, step: int) -> np.ndarray:
    """Failure probability of the substituted-gate model on the restricted
    unary parity problem, vectorized over the batch."""
    B = kraus.shape[0]
    rho = np.zeros((B, 2, 2), dtype=complex)
    rho[:, 0, 0] = 1.0
    correct = np.zeros(B)
    for i in range(i_max + 1):
        if i > 0:
            for _ in range(2 * step):
                tmp = np.einsum("bkij,bjl->bkil", kraus, rho)
                rho = np.einsum("bkil,bkml->bim", tmp, kraus.conj())
        if i % 2 == 0:
            correct += rho[:, 0, 0].real
        else:
            correct += rho[:, 1, 1].real
    return 1.0 - correct / (i_max + 1)


def _survey_batch(
    p_step: int,
    i_max: int,
    master_seed: int,
    start: int,
    count: int,
    restarts: int,
    iterations: int,
    contraction: float,
):
    conj_mask = _restart_plan(restarts)
    seeds = [child_seed(master_seed, start + k) for k in range(count)]
    kraus = np.empty((count, 4, 2, 2), dtype=complex)
    ranks = np.empty(count, dtype=int)
    starts = np.empty((count, restarts, 3))
    rand = np.empty((count, restarts, iterations, 3))
    for k, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        K = _draw_channel(rng)
        kraus[k] = K
        ranks[k] = int(np.abs(K).max(axis=(1, 2)).astype(bool).sum())
        starts[k] = _draw_starts(rng, restarts)
        rand[k] = rng.uniform(-1.0, 1.0, size=(restarts, iterations, 3))
    pfail = _batch_pfail(kraus, i_max, p_step)
    objective = _ReducedGaugeObjective(kraus, SQRT_X, conj_mask)
    values, _, _ = _lj_minimize(objective, starts, rand, contraction)
    return [
        SurveyPoint(start + k, seeds[k], float(pfail[k]), float(values[k]), int(ranks[k]))
        for k in range(count)
    ]


def survey(
    p: PromiseProblem,
    n: int,
    master_seed: int,
    threads: int | None = None,
    batch_size: int = 2048,
    restarts: int = 16,
    iterations: int = 200,
    contraction: float = 0.95,
) -> list:
    """Sample n random channels and place each at (p_fail, infid).

    Child seeds derive deterministically from (master seed, index), so the
    output is independent of batching and thread count and is returned in
    index order.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if p.family != "eo" or dict(p.params)["k"] != 1 or p.max_len is None:
        raise ValueError("survey needs a restricted unary parity problem with k=1")
    i_max = p.max_len // 2
    batches = [
        (start, min(batch_size, n - start)) for start in range(0, n, batch_size)
    ]

    def work(span):
        return _survey_batch(
            1, i_max, master_seed, span[0], span[1], restarts, iterations, contraction
        )

    if threads is None or threads <= 1 or len(batches) == 1:
        chunks = [work(b) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, batches))
    return [pt for chunk in chunks for pt in chunk]


def write_survey_csv(points, path, extra_id=None):
    """Write survey points with 17-significant-digit floats."""
    with open(path, "w") as fh:
        if extra_id is None:
            fh.write("index,seed,p_fail,infid,kraus_rank\n")
            for pt in points:
                fh.write(
                    f"{pt.index},{pt.seed},{pt.p_fail:.17g},{pt.infid:.17g},{pt.kraus_rank}\n"
                )
        else:
            fh.write("id,index,seed,p_fail,infid,kraus_rank\n")
            for ident, pt in zip(extra_id, points):
                seed = "" if pt.seed is None else pt.seed
                fh.write(
                    f"{ident},{pt.index},{seed},{pt.p_fail:.17g},{pt.infid:.17g},{pt.kraus_rank}\n"
                )


def _restricted_eo1(i_max: int) -> PromiseProblem:
    return problems.make_eo(1, i_max)


def noise_curve(i_max: int, seed, kinds=NOISE_KINDS, t_grid=None) -> list:
    """Rows (family, t, p_fail, infid) for the composed noisy models."""
    if t_grid is None:
        t_grid = np.linspace(0.0, 1.0, 21)
    prob = _restricted_eo1(i_max)
    target = target_model()
    rows = []
    for kind_idx, kind in enumerate(kinds):
        for idx, t in enumerate(t_grid):
            model = noisy_model(target, NoiseFamily(kind, float(t)))
            pf = failure_probability(model, prob)
            rng = np.random.default_rng(child_seed(seed, kind_idx * 10000 + idx))
            fid, _ = infidelity(model, target, rng=rng)
            rows.append((kind, float(t), pf, fid))
    return rows


def write_noise_curve_csv(rows, path):
    with open(path, "w") as fh:
        fh.write("family,t,p_fail,infid\n")
        for kind, t, pf, fid in rows:
            fh.write(f"{kind},{t:.17g},{pf:.17g},{fid:.17g}\n")


def slope_estimate(kind: str, i_max: int, seed) -> SlopeEstimate:
    """Least-squares slope through the origin of infid vs p_fail on the
    small-t grid (the 5% tolerance absorbs quadratic corrections)."""
    if i_max not in (3, 5):
        raise ValueError("slope estimates are defined for i_max in {3, 5}")
    prob = _restricted_eo1(i_max)
    target = target_model()
    points = []
    for idx, t in enumerate(SLOPE_T_GRID):
        model = noisy_model(target, NoiseFamily(kind, t))
        pf = failure_probability(model, prob)
        rng = np.random.default_rng(child_seed(seed, idx))
        fid, _ = infidelity(model, target, rng=rng)
        points.append((t, pf, fid))
    sum_xy = sum(pf * fid for _, pf, fid in points)
    sum_xx = sum(pf * pf for _, pf, _ in points)
    if sum_xx <= 0:
        raise ValueError("degenerate fit: failure probabilities all vanish")
    return SlopeEstimate(kind, i_max, sum_xy / sum_xx, SLOPE_T_GRID, tuple(points))


def soundness_bound(p: PromiseProblem | int) -> float:
    """alpha = 1 / (2 p_C) with p_C the two-state classical floor."""
    if isinstance(p, PromiseProblem):
        if p.family != "eo" or dict(p.params)["k"] != 1 or p.max_len is None:
            raise ValueError("soundness bound needs a restricted unary parity problem with k=1")
        i_max = p.max_len // 2
    else:
        i_max = int(p)
    p_c = optimal_two_state_pfa(i_max).p_fail
    return 1.0 / (2.0 * p_c)


@dataclass(frozen=True)
class EbDemoResult:
    success: float
    pr_reject_s2: float
    pr_accept_s4: float
    classical_floor: float
    beats_classical: bool
    trace_defect: float
    cp_defect: float
    ppt_min_eigenvalue: float
    entanglement_breaking: bool


def eb_channel() -> KrausChannel:
    """Measure-and-prepare channel: project onto the four equatorial
    stabilizer states, reprepare through one sqrt(Z)."""
    s_gate = np.diag([1.0, 1j])
    inv = 1 / math.sqrt(2)
    states = [
        np.array([inv, inv]),
        np.array([inv, -inv]),
        np.array([inv, 1j * inv]),
        np.array([inv, -1j * inv]),
    ]
    ops = tuple(
        np.outer(s_gate @ tau, tau.conj()) / math.sqrt(2) for tau in states
    )
    return KrausChannel(ops)


def eb_demo() -> EbDemoResult:
    """Entanglement-breaking channel beating the two-state classical floor
    on the shortest restricted parity problem."""
    ch = eb_channel()
    model = QuantumModel(
        qcore.KET_PLUS.density(),
        {"s": ch},
        {"y": np.outer(qcore.KET_PLUS.amplitudes, qcore.KET_PLUS.amplitudes.conj()),
         "n": np.outer(qcore.KET_MINUS.amplitudes, qcore.KET_MINUS.amplitudes.conj())},
    )
    prob = _restricted_eo1(2)
    success = 1.0 - failure_probability(model, prob)
    pr2 = model.label_probabilities("ss")["n"]
    pr4 = model.label_probabilities("ssss")["y"]
    report = validate_cptp(ch)
    C = choi_matrix_raw(ch).reshape(2, 2, 2, 2)
    C_pt = np.transpose(C, (0, 3, 2, 1)).reshape(4, 4)
    ppt_min = float(np.linalg.eigvalsh((C_pt + C_pt.conj().T) / 2).min())
    floor = 1.0 - (1.0 / 3.0)
    return EbDemoResult(
        success=success,
        pr_reject_s2=pr2,
        pr_accept_s4=pr4,
        classical_floor=floor,
        beats_classical=success > floor,
        trace_defect=report.trace_defect,
        cp_defect=report.cp_defect,
        ppt_min_eigenvalue=ppt_min,
        entanglement_breaking=ppt_min >= -qcore.TOLERANCES.validity,
    )
