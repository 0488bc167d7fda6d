"""Interference variance and SNR for asynchronous two-or-more-user DS-CDMA.

At the correlation receiver of user i, one interfering user k with chip
delay in [l*Tc, (l+1)*Tc) contributes a term built from two partial
crosscorrelations of the chip vectors.  Both are quadratic forms
s_i^* B s_k in the +-1 block shift matrix

    B(l; b_prev, b_cur) = [[ 0,              b_prev * I_l ],
                           [ b_cur * I_{N-l}, 0           ]],

where (b_prev, b_cur) are the interferer's previous and current data bits.
Integrating the squared contribution over the delay within one chip gives

    (Tc^3/3) * (|A_l|^2 + |A_{l+1}|^2 + Re[A_l * conj(A_{l+1})]),

with A_l = s_i^* B(l) s_k.  Averaging over the four bit sign pairs and
summing the chip index l over 0..N-1 yields the interference variance

    Var_I = (P / 4T) * sum_{k != i} E_bits{ sum_l integral },

which this module evaluates two independent ways: directly as above, and in
spectral coordinates where the same quantity collapses to

    Var_I = (P T^2 / 12 N^2) * sum_{k != i} sum_m S_m(i, k),

    S_m = |alpha_m^i|^2 |alpha_m^k|^2 (1 + cos(2 pi m/N)/2)
        + |beta_m^i|^2  |beta_m^k|^2  (1 + cos(2 pi (m/N + 1/(2N)))/2).

The two routes must agree to roundoff; the test suite enforces this.  The
output SNR is

    SNR_i = ( sum_{k != i} sum_m S_m / (6 N^2)  +  N0 / (2 P T) )^(-1/2),

equivalently sqrt(Var_D / (Var_I + Var_N)) with Var_D = P T^2 / 2 and
Var_N = N0 T / 4 for white noise of two-sided density N0/2.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectral import SpectralCoeffs, decompose, sequence_entries

__all__ = [
    "CdmaConfig",
    "BitWindow",
    "SnrBreakdown",
    "shift_matrix",
    "spectral_phases",
    "partial_sums",
    "partial_sum_table",
    "gamma_integral",
    "interference_variance_direct",
    "interference_variance_spectral",
    "s_m_terms",
    "snr",
]


@dataclass(frozen=True)
class CdmaConfig:
    """System parameters.  chip_duration is always symbol_duration / n_chips."""

    n_chips: int
    n_users: int
    power: float = 1.0
    symbol_duration: float = 1.0
    noise_density: float = 0.0

    def __post_init__(self):
        if self.n_chips < 2:
            raise ValueError("n_chips must be at least 2")
        if self.n_users < 1:
            raise ValueError("n_users must be at least 1")
        if self.power <= 0:
            raise ValueError("power must be positive")
        if self.symbol_duration <= 0:
            raise ValueError("symbol_duration must be positive")
        if self.noise_density < 0:
            raise ValueError("noise_density must be nonnegative")

    @property
    def chip_duration(self) -> float:
        return self.symbol_duration / self.n_chips


@dataclass(frozen=True)
class BitWindow:
    """The interferer's (previous, current) data bits, each in {-1, +1}."""

    b_prev: int
    b_cur: int

    def __post_init__(self):
        if self.b_prev not in (-1, 1) or self.b_cur not in (-1, 1):
            raise ValueError("bits must be -1 or +1")


@dataclass(frozen=True)
class SnrBreakdown:
    """SNR of one user together with its variance components."""

    interference_variance: float
    noise_variance: float
    snr: float
    s_m_sum: float
    unbounded: bool = False


def shift_matrix(l: int, bits: BitWindow, n_chips: int) -> np.ndarray:
    """The N x N block matrix B(l; b_prev, b_cur); B(0) = b_cur*I, B(N) = b_prev*I."""
    if not 0 <= l <= n_chips:
        raise ValueError(f"shift l={l} out of range 0..{n_chips}")
    mat = np.zeros((n_chips, n_chips))
    if l > 0:
        mat[:l, n_chips - l:] = bits.b_prev * np.eye(l)
    if l < n_chips:
        mat[l:, : n_chips - l] = bits.b_cur * np.eye(n_chips - l)
    return mat


@lru_cache(maxsize=None)
def _phase_tables(n_chips: int):
    """lam[l, m-1] = exp(-2 pi j l m/N) and the half-bin shifted variant."""
    l = np.arange(n_chips + 1)[:, None]
    m = np.arange(1, n_chips + 1)[None, :]
    lam = np.exp(-2j * np.pi * l * m / n_chips)
    lam_hat = np.exp(-2j * np.pi * l * (m / n_chips + 1.0 / (2 * n_chips)))
    lam.setflags(write=False)
    lam_hat.setflags(write=False)
    return lam, lam_hat


def spectral_phases(l: int, n_chips: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-modulus phase factors (lambda, lambda_hat) over m = 1..N at shift l."""
    lam, lam_hat = _phase_tables(n_chips)
    return lam[l], lam_hat[l]


def partial_sum_table(s_i, s_k) -> tuple[np.ndarray, np.ndarray]:
    """Bit-independent pieces of s_i^* B(l) s_k for l = 0..N.

    Returns (x, y) with s_i^* B(l; b_prev, b_cur) s_k = b_prev*x[l] + b_cur*y[l]:
    x[l] pairs the first l chips of s_i with the last l of s_k, y[l] the rest.
    """
    si = sequence_entries(s_i)
    sk = sequence_entries(s_k)
    if si.shape != sk.shape:
        raise ValueError("sequences must have equal length")
    n = si.shape[0]
    x = np.empty(n + 1, dtype=complex)
    y = np.empty(n + 1, dtype=complex)
    si_c = np.conj(si)
    for l in range(n + 1):
        x[l] = np.sum(si_c[:l] * sk[n - l:])
        y[l] = np.sum(si_c[l:] * sk[: n - l])
    return x, y


def partial_sums(s_i, s_k, bits: BitWindow, l: int) -> tuple[complex, complex]:
    """Slope coefficients of the two partial crosscorrelations at chip offset l.

    The first value is s_i^* B(l) s_k, the second s_i^* B(l+1) s_k; written
    out, the first is

        b_prev * sum_{m=1..l}   conj(s_i[m]) s_k[N-l+m]
      + b_cur  * sum_{m=1..N-l} conj(s_i[l+m]) s_k[m].
    """
    si = sequence_entries(s_i)
    n = si.shape[0]
    if not 0 <= l <= n - 1:
        raise ValueError(f"chip offset l={l} out of range 0..{n - 1}")
    x, y = partial_sum_table(si, s_k)
    first = bits.b_prev * x[l] + bits.b_cur * y[l]
    second = bits.b_prev * x[l + 1] + bits.b_cur * y[l + 1]
    return complex(first), complex(second)


def gamma_integral(s_i, s_k, bits: BitWindow, l: int, chip_duration: float) -> float:
    """Integral over one chip interval of the squared interference term.

    Equals (Tc^3/3) (|A_l|^2 + |A_{l+1}|^2 + Re[A_l conj(A_{l+1})]) >= 0.
    Delays are confined to one symbol, so only the current bit window enters;
    an interferer delayed by whole symbols would simply shift which bit pair
    the caller passes in ``bits``.
    """
    if chip_duration <= 0:
        raise ValueError("chip_duration must be positive")
    a_l, a_l1 = partial_sums(s_i, s_k, bits, l)
    quad = abs(a_l) ** 2 + abs(a_l1) ** 2 + (a_l * np.conj(a_l1)).real
    return (chip_duration**3 / 3.0) * float(quad)


def _check_user_set(cfg: CdmaConfig, sequences, i: int):
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
    return entries


def _pair_bit_average(si: np.ndarray, sk: np.ndarray) -> float:
    """E_bits{ sum_l (|A_l|^2 + |A_{l+1}|^2 + Re[A_l conj A_{l+1}]) } without Tc^3/3."""
    x, y = partial_sum_table(si, sk)
    total = 0.0
    for b_prev in (-1.0, 1.0):
        for b_cur in (-1.0, 1.0):
            a = b_prev * x + b_cur * y
            lo, hi = a[:-1], a[1:]
            total += 0.25 * float(
                np.sum(np.abs(lo) ** 2 + np.abs(hi) ** 2 + (lo * np.conj(hi)).real)
            )
    return total


def interference_variance_direct(cfg: CdmaConfig, sequences, i: int) -> float:
    """Var_I for user i by explicit chip-interval integration and exact bit average.

    The bit expectation is the exact mean over the four (b_prev, b_cur) sign
    pairs.  Returns 0 for a single-user system.
    """
    entries = _check_user_set(cfg, sequences, i)
    tc = cfg.chip_duration
    total = 0.0
    for k, sk in enumerate(entries, start=1):
        if k == i:
            continue
        total += (tc**3 / 3.0) * _pair_bit_average(entries[i - 1], sk)
    return (cfg.power / (4.0 * cfg.symbol_duration)) * total


def s_m_terms(c_i: SpectralCoeffs, c_k: SpectralCoeffs) -> np.ndarray:
    """Per-frequency interference weights S_m for one user pair.

    Entry m-1 is |alpha_m^i|^2 |alpha_m^k|^2 (1 + cos(2 pi m/N)/2)
    + |beta_m^i|^2 |beta_m^k|^2 (1 + cos(2 pi (m/N + 1/(2N)))/2); every entry
    is nonnegative and the value is symmetric in (i, k).
    """
    if c_i.n_chips != c_k.n_chips:
        raise ValueError("coefficient vectors must have equal length")
    n = c_i.n_chips
    m = np.arange(1, n + 1)
    w_alpha = 1.0 + 0.5 * np.cos(2 * np.pi * m / n)
    w_beta = 1.0 + 0.5 * np.cos(2 * np.pi * (m / n + 1.0 / (2 * n)))
    return (
        np.abs(c_i.alpha) ** 2 * np.abs(c_k.alpha) ** 2 * w_alpha
        + np.abs(c_i.beta) ** 2 * np.abs(c_k.beta) ** 2 * w_beta
    )


def _as_coeffs(s) -> SpectralCoeffs:
    return s if isinstance(s, SpectralCoeffs) else decompose(s)


def _s_m_sum(cfg: CdmaConfig, sequences, i: int) -> float:
    coeffs = [_as_coeffs(s) for s in sequences]
    total = 0.0
    for k, ck in enumerate(coeffs, start=1):
        if k == i:
            continue
        total += float(np.sum(s_m_terms(coeffs[i - 1], ck)))
    return total


def interference_variance_spectral(cfg: CdmaConfig, sequences, i: int) -> float:
    """Var_I for user i via the spectral form (P T^2 / 12 N^2) sum_k sum_m S_m.

    ``sequences`` may hold chip sequences or ready-made SpectralCoeffs.
    Must agree with interference_variance_direct to roundoff.
    """
    if len(sequences) != cfg.n_users:
        raise ValueError(
            f"expected {cfg.n_users} sequences for this configuration, got {len(sequences)}"
        )
    if not 1 <= i <= cfg.n_users:
        raise ValueError(f"user index {i} out of range 1..{cfg.n_users}")
    scale = cfg.power * cfg.symbol_duration**2 / (12.0 * cfg.n_chips**2)
    return scale * _s_m_sum(cfg, sequences, i)


def snr(cfg: CdmaConfig, sequences, i: int) -> SnrBreakdown:
    """SNR of user i with its interference/noise breakdown.

    With no interferers and zero noise density the SNR has no finite value;
    the result is flagged ``unbounded`` and carries snr = inf.
    """
    if not isinstance(sequences[0], SpectralCoeffs):
        _check_user_set(cfg, sequences, i)
    else:
        if len(sequences) != cfg.n_users:
            raise ValueError(
                f"expected {cfg.n_users} sequences for this configuration, got {len(sequences)}"
            )
        if not 1 <= i <= cfg.n_users:
            raise ValueError(f"user index {i} out of range 1..{cfg.n_users}")
    s_sum = _s_m_sum(cfg, sequences, i)
    p, t, n0 = cfg.power, cfg.symbol_duration, cfg.noise_density
    var_i = p * t**2 / (12.0 * cfg.n_chips**2) * s_sum
    var_n = n0 * t / 4.0
    denom = s_sum / (6.0 * cfg.n_chips**2) + n0 / (2.0 * p * t)
    if denom == 0.0:
        return SnrBreakdown(
            interference_variance=var_i,
            noise_variance=var_n,
            snr=math.inf,
            s_m_sum=s_sum,
            unbounded=True,
        )
    return SnrBreakdown(
        interference_variance=var_i,
        noise_variance=var_n,
        snr=denom**-0.5,
        s_m_sum=s_sum,
        unbounded=False,
    )
