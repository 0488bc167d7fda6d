"""Baseline spreading-sequence families and random feasible starting points.

Three classical families serve as comparison baselines for the optimizer:

* Gold codes - binary sequences built from a preferred pair of m-sequences,
  (theta_a, theta_c) = (9, 9) at length 31;
* Frank-Zadoff-Chu (FZC) polyphase sequences with perfect periodic
  autocorrelation, (theta_a, theta_c) = (0, sqrt(N)) for a coprime pair;
* single complex tones exp(2*pi*j*k*n/N), which have zero crosscorrelation
  between distinct tones at the price of maximal autocorrelation peaks,
  (theta_a, theta_c) = (N, 0).

All generated chips are unit modulus, so every family member satisfies the
power-feasibility condition ||alpha||^2 = ||beta||^2 = N.
"""

import math
from dataclasses import dataclass

import numpy as np

from .spectral import SpectralCoeffs, coupling_matrices

__all__ = [
    "ChipSequence",
    "Lfsr",
    "PREFERRED_TAPS",
    "gold_family",
    "gold_pair",
    "fzc_sequence",
    "single_tone_sequence",
    "random_feasible_point",
]


@dataclass(frozen=True)
class ChipSequence:
    """One user's length-N complex spreading sequence plus a provenance label."""

    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 1 or entries.shape[0] < 2:
            raise ValueError("a chip sequence needs at least 2 entries")
        object.__setattr__(self, "entries", entries)

    @property
    def n_chips(self) -> int:
        return self.entries.shape[0]


class Lfsr:
    """Fibonacci LFSR defined by the middle tap exponents of x^d + ... + 1.

    ``taps`` lists the exponents strictly between 0 and ``degree`` whose
    terms appear in the feedback polynomial; the x^d and 1 terms are implied.
    The polynomial must be primitive: the register is required to run through
    all 2^d - 1 nonzero states before repeating, which is checked at
    construction.
    """

    def __init__(self, taps, degree: int, init_state=None):
        self.taps = tuple(sorted(taps))
        self.degree = int(degree)
        if any(not 0 < t < self.degree for t in self.taps):
            raise ValueError("tap exponents must lie strictly between 0 and degree")
        if init_state is None:
            init_state = (1,) * self.degree
        self.init_state = tuple(int(b) & 1 for b in init_state)
        if len(self.init_state) != self.degree or not any(self.init_state):
            raise ValueError("init_state must be a nonzero bit vector of length degree")
        self._period_check()

    def _period_check(self):
        period = 2**self.degree - 1
        state = self.init_state
        for step in range(1, period + 1):
            state = self._step(state)
            if state == self.init_state:
                if step != period:
                    raise ValueError(
                        f"taps {self.taps} of degree {self.degree} are not primitive "
                        f"(period {step} < {period})"
                    )
                return
        raise ValueError(f"taps {self.taps} never return to the initial state")

    def _step(self, state):
        # recurrence a[i] = a[i-d] xor (xor of a[i-d+t] over taps)
        bit = state[0]
        for t in self.taps:
            bit ^= state[t]
        return state[1:] + (bit,)

    def bits(self) -> np.ndarray:
        """One full period (2^degree - 1 bits) starting from the initial state."""
        period = 2**self.degree - 1
        out = np.empty(period, dtype=np.int8)
        out[: self.degree] = self.init_state
        for i in range(self.degree, period):
            bit = out[i - self.degree]
            for t in self.taps:
                bit ^= out[i - self.degree + t]
            out[i] = bit
        return out


# Preferred m-sequence pairs per register degree (middle tap exponents).
# Degree 5: x^5+x^2+1 with x^5+x^4+x^3+x^2+1; the degree 6 and 7 pairs are
# standard choices verified by the three-valued crosscorrelation tests.
PREFERRED_TAPS = {
    5: ((2,), (4, 3, 2)),
    6: ((1,), (5, 2, 1)),
    7: ((3,), (3, 2, 1)),
}

# Family indices of a pair whose correlation peaks are exactly (9, 9) at
# degree 5 (verified by brute force; any two xor-combined members work).
_CANONICAL_PAIR = (2, 3)


def _bipolar(bits: np.ndarray) -> np.ndarray:
    # bit 0 -> +1, bit 1 -> -1
    return 1.0 - 2.0 * bits.astype(float)


def gold_family(degree: int = 5) -> list[ChipSequence]:
    """All 2^degree + 1 Gold sequences of length N = 2^degree - 1.

    Members 0 and 1 are the two m-sequences of the preferred pair; member
    2 + d is their chip-wise product with the second sequence cyclically
    shifted by d.  Any two distinct members have periodic crosscorrelation
    values confined to the three-valued set {-1, -t, t-2} (t = 9 for
    degree 5).
    """
    if degree not in PREFERRED_TAPS:
        raise ValueError(
            f"unsupported degree {degree}; available: {sorted(PREFERRED_TAPS)}"
        )
    taps_a, taps_b = PREFERRED_TAPS[degree]
    m1 = _bipolar(Lfsr(taps_a, degree).bits())
    m2 = _bipolar(Lfsr(taps_b, degree).bits())
    n = m1.shape[0]
    family = [
        ChipSequence(m1.astype(complex), label=f"gold(degree={degree},index=0)"),
        ChipSequence(m2.astype(complex), label=f"gold(degree={degree},index=1)"),
    ]
    for d in range(n):
        combined = m1 * np.roll(m2, d)
        family.append(
            ChipSequence(combined.astype(complex), label=f"gold(degree={degree},index={d + 2})")
        )
    return family


def gold_pair(degree: int = 5) -> tuple[ChipSequence, ChipSequence]:
    """The canonical two-user Gold pair used for baseline comparisons."""
    family = gold_family(degree)
    i, j = _CANONICAL_PAIR
    return family[i], family[j]


def fzc_sequence(n_chips: int, m_param: int) -> ChipSequence:
    """Frank-Zadoff-Chu sequence, entry n = 1..N.

    exp(-j*pi*M*n^2/N) for even N and exp(-j*pi*M*n*(n+1)/N) for odd N, with
    M coprime to N.  Periodic autocorrelation vanishes at every nonzero shift.
    """
    if n_chips < 2:
        raise ValueError("n_chips must be at least 2")
    if math.gcd(m_param, n_chips) != 1:
        raise ValueError(
            f"m_param={m_param} must be relatively prime to n_chips={n_chips}"
        )
    n = np.arange(1, n_chips + 1)
    if n_chips % 2 == 0:
        phase = n * n
    else:
        phase = n * (n + 1)
    entries = np.exp(-1j * np.pi * m_param * phase / n_chips)
    return ChipSequence(entries, label=f"fzc(N={n_chips},M={m_param})")


def single_tone_sequence(n_chips: int, k_param: int) -> ChipSequence:
    """Single complex tone exp(2*pi*j*k*n/N); k = 0 gives the all-ones sequence."""
    if n_chips < 2:
        raise ValueError("n_chips must be at least 2")
    if not 0 <= k_param <= n_chips - 1:
        raise ValueError(f"k_param={k_param} out of range 0..{n_chips - 1}")
    n = np.arange(1, n_chips + 1)
    entries = np.exp(2j * np.pi * k_param * n / n_chips)
    return ChipSequence(entries, label=f"tone(N={n_chips},k={k_param})")


def random_feasible_point(n_chips: int, n_users: int, seed: int) -> list[SpectralCoeffs]:
    """Random power-feasible coefficient pairs, one per user.

    Each user's alpha is drawn isotropically and rescaled to ||alpha||^2 = N;
    beta = phi_hat @ alpha inherits the norm because phi_hat is unitary.
    Deterministic in ``seed``.
    """
    if n_users < 1:
        raise ValueError("n_users must be at least 1")
    phi_hat = coupling_matrices(n_chips).phi_hat
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    points = []
    for _ in range(n_users):
        stacked = rng.standard_normal(2 * n_chips)
        stacked *= np.sqrt(n_chips) / np.linalg.norm(stacked)
        alpha = stacked[:n_chips] + 1j * stacked[n_chips:]
        points.append(SpectralCoeffs(alpha=alpha, beta=phi_hat @ alpha))
    return points
