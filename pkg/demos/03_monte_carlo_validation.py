"""Monte Carlo check of the closed-form interference variance.

For each baseline pair at N=31, draws 100000 random (delay, phase, bits)
tuples, evaluates the receiver's squared interference term exactly per draw,
and compares the sample mean against the analytic variance.  The z-scores
should sit comfortably inside +-3.

Run:  python demos/03_monte_carlo_validation.py
"""

from spreadopt import (
    CdmaConfig,
    estimate_snr,
    fzc_sequence,
    gold_pair,
    interference_variance_direct,
    single_tone_sequence,
    snr,
)

N = 31
TRIALS = 100_000
SEED = 2026

pairs = {
    "gold": list(gold_pair(5)),
    "fzc": [fzc_sequence(N, 1), fzc_sequence(N, 2)],
    "tone": [single_tone_sequence(N, 1), single_tone_sequence(N, 2)],
}

cfg = CdmaConfig(n_chips=N, n_users=2)
print(f"{TRIALS} trials per pair, seed {SEED}\n")
print(f"{'pair':<6} {'simulated':>12} {'stderr':>10} {'analytic':>12} {'z':>7} {'snr(mc)':>9} {'snr':>9}")
print("-" * 70)
for name, pair in pairs.items():
    est = estimate_snr(cfg, pair, 1, trials=TRIALS, seed=SEED)
    analytic = interference_variance_direct(cfg, pair, 1)
    z = (est.var_interference_mean - analytic) / est.var_interference_stderr
    reference = snr(cfg, pair, 1).snr
    print(
        f"{name:<6} {est.var_interference_mean:>12.6g} {est.var_interference_stderr:>10.3g} "
        f"{analytic:>12.6g} {z:>+7.2f} {est.snr_estimate:>9.4f} {reference:>9.4f}"
    )

print("\nsame seed twice is bit-identical; the effective carrier phase is")
print("drawn but cancels in the squared magnitude, so forcing it to zero")
print("changes nothing (see estimate_snr(zero_phase=True)).")
