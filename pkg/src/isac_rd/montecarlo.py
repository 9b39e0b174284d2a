"""Seeded Monte Carlo estimators.

Random draws are organised in fixed chunks of ``CHUNK`` trials. Chunk ``k``
of an estimator draws from its own Philox stream keyed by
``(seed, stream tag, k)``, so the samples of trial ``i`` never depend on the
batch size or on how many worker threads are used. Per-trial values are
reassembled in trial order before any reduction.
"""
from __future__ import annotations

import functools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

CHUNK = 64
DEFAULT_TRIALS = 3000
DEFAULT_BATCH = 512

# stream tags keep estimators that share a seed on disjoint streams
_RATE_STREAM = 1
_DAS_STREAM = 2
_LMMSE_STREAM = 3


@dataclass(frozen=True)
class McConfig:
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    batch: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.batch is not None and not 1 <= self.batch <= self.trials:
            raise ValueError(f"batch must lie in [1, trials], got {self.batch}")

    @property
    def batch_size(self) -> int:
        return self.batch if self.batch is not None else min(self.trials, DEFAULT_BATCH)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int) -> "McEstimate":
        n = samples.size
        mean = float(np.mean(samples))
        stderr = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean=mean, stderr=stderr, trials=n, seed=seed)


def worker_count() -> int:
    """Thread cap from ISAC_THREADS (0 or unset means one per CPU)."""
    raw = os.environ.get("ISAC_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError(f"ISAC_THREADS must be >= 0, got {n}")
    return n if n > 0 else (os.cpu_count() or 1)


def chunk_rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(stream, chunk))
    return np.random.Generator(np.random.Philox(ss))


def sample_complex_gaussian(rows: int, cols: int, rng: np.random.Generator,
                            size: tuple[int, ...] = ()) -> np.ndarray:
    """Draw ``size`` i.i.d. CN(0, 1) matrices of shape (rows, cols).

    Real and imaginary parts are independent with variance 1/2 each. Leading
    draws of a larger ``size`` coincide with a smaller one from the same state.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    z = rng.standard_normal((*size, rows, cols, 2))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)


def _chunk_bounds(trials: int) -> list[tuple[int, int]]:
    return [(k, min(CHUNK, trials - k * CHUNK)) for k in range(-(-trials // CHUNK))]


def _run_chunked(fn, mc: McConfig) -> np.ndarray:
    """Evaluate ``fn(chunk_index, n)`` over all chunks and join in trial order."""
    chunks = _chunk_bounds(mc.trials)
    per_task = max(1, mc.batch_size // CHUNK)
    tasks = [chunks[i:i + per_task] for i in range(0, len(chunks), per_task)]

    def run(task):
        return [fn(k, n) for k, n in task]

    workers = min(worker_count(), len(tasks))
    if workers <= 1:
        parts = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, tasks))
    return np.concatenate([a for part in parts for a in part])


def _gram(A: np.ndarray) -> np.ndarray:
    """Smaller of A A^H and A^H A over the trailing two axes."""
    if A.shape[-2] <= A.shape[-1]:
        return A @ np.conj(np.swapaxes(A, -1, -2))
    return np.conj(np.swapaxes(A, -1, -2)) @ A


@functools.lru_cache(maxsize=8)
def _channel_grams(M: int, N: int, trials: int, seed: int, batch: int) -> np.ndarray:
    """Per-trial Gram form of normalised channel draws, H H^H / M (or H^H H / M)."""
    mc = McConfig(trials=trials, seed=seed, batch=batch)

    def draw(k, n):
        H = sample_complex_gaussian(N, M, chunk_rng(seed, _RATE_STREAM, k), size=(n,))
        return _gram(H) / M

    out = _run_chunked(draw, mc)
    out.setflags(write=False)
    return out


def _logdet_spd(A: np.ndarray) -> np.ndarray:
    L = np.linalg.cholesky(A)
    return 2.0 * np.sum(np.log(np.real(np.diagonal(L, axis1=-2, axis2=-1))), axis=-1)


def ergodic_rate(rho_eff: float, M: int, N: int, time_fraction: float,
                 mc: McConfig) -> McEstimate:
    """Estimate time_fraction * E[log2 det(I + rho_eff/M * Hbar Hbar^H)].

    Calls with the same ``mc`` reuse the same channel draws, which makes the
    estimate an exactly monotone function of ``rho_eff``.
    """
    if rho_eff < 0:
        raise ValueError(f"rho_eff must be >= 0, got {rho_eff}")
    if not 0 <= time_fraction <= 1:
        raise ValueError(f"time_fraction must lie in [0, 1], got {time_fraction}")
    if rho_eff == 0 or time_fraction == 0:
        return McEstimate(0.0, 0.0, mc.trials, mc.seed)
    grams = _channel_grams(M, N, mc.trials, mc.seed, mc.batch_size)
    k = grams.shape[-1]
    A = np.eye(k) + rho_eff * grams
    samples = time_fraction * _logdet_spd(A) / math.log(2.0)
    return McEstimate.from_samples(samples, mc.seed)


@functools.lru_cache(maxsize=8)
def _data_grams(M: int, T_d: int, trials: int, seed: int, batch: int) -> np.ndarray:
    """Per-trial G G^H / M for i.i.d. CN(0, 1) data matrices G of shape (M, T_d)."""
    mc = McConfig(trials=trials, seed=seed, batch=batch)

    def draw(k, n):
        G = sample_complex_gaussian(M, T_d, chunk_rng(seed, _DAS_STREAM, k), size=(n,))
        return G @ np.conj(np.swapaxes(G, -1, -2)) / M

    out = _run_chunked(draw, mc)
    out.setflags(write=False)
    return out


def _trace_inverse_spd(A: np.ndarray) -> np.ndarray:
    # Tr(A^-1) = ||L^-1||_F^2 for A = L L^H
    L = np.linalg.cholesky(A)
    Linv = np.linalg.inv(L)
    return np.sum(np.abs(Linv) ** 2, axis=(-2, -1))


def empirical_das_mse(N: int, M: int, c: float, rho_d: float, T_d: int,
                      mc: McConfig) -> McEstimate:
    """Estimate N * E[Tr((c I + rho_d/M G G^H)^-1)] for data-aided sensing."""
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if T_d < 1 or int(T_d) != T_d:
        raise ValueError(f"T_d must be a positive integer, got {T_d}")
    if rho_d < 0:
        raise ValueError(f"rho_d must be >= 0, got {rho_d}")
    if rho_d == 0:
        return McEstimate(N * M / c, 0.0, mc.trials, mc.seed)
    W = _data_grams(M, int(T_d), mc.trials, mc.seed, mc.batch_size)
    samples = N * _trace_inverse_spd(c * np.eye(M) + rho_d * W)
    return McEstimate.from_samples(samples, mc.seed)


def dft_pilots(M: int, T_tau: int, rho_tau: float) -> np.ndarray:
    """Orthogonal pilot block with X X^H = (rho_tau * T_tau / M) I_M.

    Rows are the first M rows of the T_tau-point DFT matrix (unit noise power).
    """
    if T_tau < M:
        raise ValueError(f"T_tau must be >= M, got T_tau={T_tau}, M={M}")
    m = np.arange(M)[:, None]
    t = np.arange(T_tau)[None, :]
    F = np.exp(-2j * np.pi * m * t / T_tau)
    return math.sqrt(rho_tau / M) * F


def _vec(A: np.ndarray) -> np.ndarray:
    """Column-stacking vec over the trailing two axes."""
    return np.swapaxes(A, -1, -2).reshape(*A.shape[:-2], -1)


def empirical_lmmse_mse(N: int, M: int, rho_tau: float, T_tau: int,
                        mc: McConfig) -> McEstimate:
    """Signal-level check of pilot-only LMMSE estimation.

    Each trial draws H and Z, forms Y = H X + Z with orthogonal DFT pilots,
    estimates vec(H) from the vectorised model y = (X^T kron I_N) h + z and
    records ||H - H_hat||_F^2.
    """
    if T_tau < M or int(T_tau) != T_tau:
        raise ValueError(f"T_tau must be an integer >= M, got {T_tau}")
    if rho_tau < 0:
        raise ValueError(f"rho_tau must be >= 0, got {rho_tau}")
    T_tau = int(T_tau)
    X = dft_pilots(M, T_tau, rho_tau)
    Xk = np.kron(X.T, np.eye(N))
    # unit prior and noise covariances: h_hat = (I + Xk^H Xk)^-1 Xk^H y
    XkH = np.conj(Xk.T)
    W = np.linalg.solve(np.eye(N * M) + XkH @ Xk, XkH)

    def trial_errors(k, n):
        rng = chunk_rng(mc.seed, _LMMSE_STREAM, k)
        H = sample_complex_gaussian(N, M, rng, size=(n,))
        Z = sample_complex_gaussian(N, T_tau, rng, size=(n,))
        y = _vec(H @ X + Z)
        h_hat = y @ W.T
        return np.sum(np.abs(_vec(H) - h_hat) ** 2, axis=-1)

    samples = _run_chunked(trial_errors, mc)
    return McEstimate.from_samples(samples, mc.seed)
