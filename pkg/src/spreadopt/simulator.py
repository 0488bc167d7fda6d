"""Monte Carlo oracle for the asynchronous-interference model.

Independently of the spectral machinery, the interference seen by user i from
user k can be sampled exactly: draw the delay tau uniform on [0, T), the
effective carrier phase psi uniform on [0, 2*pi), and the two data bits
uniform on {-1, +1}; with l = floor(tau / Tc) the squared magnitude of the
interference integral is, in closed form,

    |I~|^2 = | (tau - l*Tc) * A_l  +  ((l+1)*Tc - tau) * A_{l+1} |^2,

where A_l = s_i^* B(l; b_prev, b_cur) s_k.  The phase psi cancels in the
magnitude; it is drawn anyway so a full receiver-output path consumes the
same random stream.  Averaging (P/4) * |I~|^2 over draws estimates the
interference variance, to be compared against the closed-form value.

Determinism contract: results are a pure function of (inputs, seed, trials).
Trials are processed in fixed-size blocks; each (interferer, block) pair gets
its own generator derived from the master seed, so the draws do not depend on
how blocks are assigned to worker threads, and the block partial sums are
combined with exact (compensated) summation in fixed block order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .interference import BitWindow, CdmaConfig, partial_sum_table
from .spectral import sequence_entries

__all__ = ["MonteCarloDraw", "SimulationEstimate", "interference_sample", "estimate_snr"]

_BLOCK = 8192


@dataclass(frozen=True)
class MonteCarloDraw:
    """One interferer's delay, effective phase, and bit window."""

    tau: float
    psi: float
    bits: BitWindow


@dataclass(frozen=True)
class SimulationEstimate:
    """Estimated interference variance and SNR with the sampling error."""

    var_interference_mean: float
    var_interference_stderr: float
    snr_estimate: float
    trials: int
    seed: int
    unbounded: bool = False


def _sample_values(x, y, tau, b_prev, b_cur, chip_duration, n_chips):
    """Vectorized |I~|^2 for arrays of draws, given the partial-sum tables."""
    l = np.minimum((tau / chip_duration).astype(int), n_chips - 1)
    a_lo = b_prev * x[l] + b_cur * y[l]
    a_hi = b_prev * x[l + 1] + b_cur * y[l + 1]
    w_lo = tau - l * chip_duration
    w_hi = (l + 1) * chip_duration - tau
    return np.abs(w_lo * a_lo + w_hi * a_hi) ** 2


def interference_sample(cfg: CdmaConfig, s_i, s_k, draw: MonteCarloDraw) -> float:
    """Exact per-draw value of |I~|^2 for one interferer.

    Nonnegative and piecewise quadratic in the delay on each chip interval.
    """
    t = cfg.symbol_duration
    if not 0.0 <= draw.tau < t:
        raise ValueError(f"delay tau={draw.tau} out of range [0, {t})")
    si = sequence_entries(s_i)
    sk = sequence_entries(s_k)
    if si.shape[0] != cfg.n_chips or sk.shape[0] != cfg.n_chips:
        raise ValueError("sequence length does not match cfg.n_chips")
    x, y = partial_sum_table(si, sk)
    value = _sample_values(
        x, y, np.asarray([draw.tau]), draw.bits.b_prev, draw.bits.b_cur,
        cfg.chip_duration, cfg.n_chips,
    )
    return float(value[0])


def _block_sums(tables, k_index, block, n_draws, cfg, seed, zero_phase):
    """(sum, sum of squares) of per-trial values for one (interferer, block)."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, k_index, block)))
    tau = rng.uniform(0.0, cfg.symbol_duration, n_draws)
    psi = rng.uniform(0.0, 2.0 * np.pi, n_draws)
    b_prev = rng.integers(0, 2, n_draws) * 2.0 - 1.0
    b_cur = rng.integers(0, 2, n_draws) * 2.0 - 1.0
    if zero_phase:
        psi = np.zeros_like(psi)
    del psi  # the magnitude-squared receiver statistic is phase-free
    x, y = tables[k_index]
    values = _sample_values(x, y, tau, b_prev, b_cur, cfg.chip_duration, cfg.n_chips)
    return float(np.sum(values)), float(np.dot(values, values))


def estimate_snr(
    cfg: CdmaConfig,
    sequences,
    i: int,
    trials: int,
    seed: int,
    threads: int = 1,
    zero_phase: bool = False,
) -> SimulationEstimate:
    """Monte Carlo estimate of user i's interference variance and SNR.

    The estimator is (P/4) * mean over trials of sum_{k != i} |I~_{i,k}|^2,
    with independent draws per interferer; the reported standard error is the
    sample standard deviation of the per-trial values over sqrt(trials).
    The SNR estimate plugs the estimated variance into
    sqrt(Var_D / (Var_I + N0*T/4)) with Var_D = P*T^2/2.  ``zero_phase``
    forces the (unused) phase draws to zero; the estimate must not change.
    """
    if trials < 100:
        raise ValueError("trials must be at least 100")
    if len(sequences) != cfg.n_users:
        raise ValueError(
            f"expected {cfg.n_users} sequences for this configuration, got {len(sequences)}"
        )
    if not 1 <= i <= cfg.n_users:
        raise ValueError(f"user index {i} out of range 1..{cfg.n_users}")
    entries = [sequence_entries(s) for s in sequences]
    for e in entries:
        if e.shape[0] != cfg.n_chips:
            raise ValueError("sequence length does not match cfg.n_chips")

    interferers = [k for k in range(1, cfg.n_users + 1) if k != i]
    seed = int(seed) % 2**64
    p, t, n0 = cfg.power, cfg.symbol_duration, cfg.noise_density
    var_d = p * t**2 / 2.0
    noise_var = n0 * t / 4.0

    if not interferers:
        denom = noise_var
        if denom == 0.0:
            return SimulationEstimate(0.0, 0.0, math.inf, trials, seed, unbounded=True)
        return SimulationEstimate(0.0, 0.0, math.sqrt(var_d / denom), trials, seed)

    tables = {k: partial_sum_table(entries[i - 1], entries[k - 1]) for k in interferers}
    n_blocks = (trials + _BLOCK - 1) // _BLOCK
    jobs = []
    for k in interferers:
        for b in range(n_blocks):
            n_draws = min(_BLOCK, trials - b * _BLOCK)
            jobs.append((k, b, n_draws))

    def run(job):
        k, b, n_draws = job
        return _block_sums(tables, k, b, n_draws, cfg, seed, zero_phase)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    # fixed-order compensated reduction: independent of worker assignment.
    # Draws are independent across interferers, so the variance of the
    # per-trial value (a sum over interferers) is the sum of the per-
    # interferer variances.
    mean = 0.0
    var_of_value = 0.0
    for pos, _ in enumerate(interferers):
        chunk = results[pos * n_blocks : (pos + 1) * n_blocks]
        total_k = math.fsum(r[0] for r in chunk)
        total_sq_k = math.fsum(r[1] for r in chunk)
        mean_k = total_k / trials
        second_k = total_sq_k / trials
        mean += mean_k
        var_of_value += max(0.0, (second_k - mean_k**2) * trials / (trials - 1))
    scale = p / 4.0
    est = scale * mean
    stderr = scale * math.sqrt(var_of_value / trials)
    denom = est + noise_var
    if denom <= 0.0:
        return SimulationEstimate(est, stderr, math.inf, trials, seed, unbounded=True)
    return SimulationEstimate(est, stderr, math.sqrt(var_d / denom), trials, seed)
