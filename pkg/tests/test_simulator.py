import numpy as np
import pytest

from spreadopt.interference import BitWindow, CdmaConfig, interference_variance_direct
from spreadopt.sequences import fzc_sequence, gold_pair, single_tone_sequence
from spreadopt.simulator import MonteCarloDraw, estimate_snr, interference_sample


def random_unit_modulus(n, rng):
    return np.exp(2j * np.pi * rng.random(n))


class TestInterferenceSample:
    def test_hand_evaluated_at_zero_delay(self):
        # N=2, Tc=1 (so T=2), all-ones pair, bits (+1,+1): the closed form at
        # tau=0, l=0 reduces to |0*A_0 + Tc*A_1|^2 = |2|^2 = 4
        cfg = CdmaConfig(n_chips=2, n_users=2, symbol_duration=2.0)
        ones = np.ones(2, dtype=complex)
        draw = MonteCarloDraw(tau=0.0, psi=0.3, bits=BitWindow(1, 1))
        assert interference_sample(cfg, ones, ones, draw) == pytest.approx(4.0, rel=1e-12)

    def test_zero_interferer(self):
        cfg = CdmaConfig(n_chips=4, n_users=2)
        rng = np.random.default_rng(0)
        s_i = random_unit_modulus(4, rng)
        zero = np.zeros(4, dtype=complex)
        draw = MonteCarloDraw(tau=0.6, psi=0.0, bits=BitWindow(-1, 1))
        assert interference_sample(cfg, s_i, zero, draw) == 0.0

    def test_nonnegative_everywhere(self):
        cfg = CdmaConfig(n_chips=5, n_users=2)
        rng = np.random.default_rng(1)
        s_i = random_unit_modulus(5, rng)
        s_k = random_unit_modulus(5, rng)
        for tau in np.linspace(0.0, 1.0, 37, endpoint=False):
            draw = MonteCarloDraw(tau=float(tau), psi=0.0, bits=BitWindow(1, -1))
            assert interference_sample(cfg, s_i, s_k, draw) >= 0.0

    def test_delay_out_of_range(self):
        cfg = CdmaConfig(n_chips=4, n_users=2)
        ones = np.ones(4, dtype=complex)
        with pytest.raises(ValueError):
            interference_sample(cfg, ones, ones, MonteCarloDraw(1.0, 0.0, BitWindow(1, 1)))
        with pytest.raises(ValueError):
            interference_sample(cfg, ones, ones, MonteCarloDraw(-0.1, 0.0, BitWindow(1, 1)))

    def test_mean_matches_analytic_value(self):
        # sample mean of (P/4)|I~|^2 approaches the closed-form variance
        cfg = CdmaConfig(n_chips=5, n_users=2)
        rng = np.random.default_rng(2)
        s_i = random_unit_modulus(5, rng)
        s_k = random_unit_modulus(5, rng)
        values = []
        for _ in range(20000):
            draw = MonteCarloDraw(
                tau=float(rng.uniform(0, 1)),
                psi=float(rng.uniform(0, 2 * np.pi)),
                bits=BitWindow(int(rng.choice([-1, 1])), int(rng.choice([-1, 1]))),
            )
            values.append(interference_sample(cfg, s_i, s_k, draw))
        est = 0.25 * cfg.power * np.mean(values)
        stderr = 0.25 * cfg.power * np.std(values, ddof=1) / np.sqrt(len(values))
        analytic = interference_variance_direct(cfg, [s_i, s_k], 1)
        assert abs(est - analytic) <= 3 * stderr


class TestEstimateSnr:
    def test_single_user_with_noise(self):
        cfg = CdmaConfig(n_chips=8, n_users=1, power=2.0, symbol_duration=1.5, noise_density=0.3)
        out = estimate_snr(cfg, [np.ones(8, dtype=complex)], 1, trials=500, seed=1)
        assert out.var_interference_mean == 0.0
        assert out.var_interference_stderr == 0.0
        assert out.snr_estimate == pytest.approx(np.sqrt(2 * 2.0 * 1.5 / 0.3), rel=1e-12)

    def test_single_user_no_noise_unbounded(self):
        cfg = CdmaConfig(n_chips=8, n_users=1)
        out = estimate_snr(cfg, [np.ones(8, dtype=complex)], 1, trials=500, seed=1)
        assert out.unbounded
        assert np.isinf(out.snr_estimate)

    def test_deterministic_given_seed(self):
        cfg = CdmaConfig(n_chips=31, n_users=2)
        pair = gold_pair(5)
        a = estimate_snr(cfg, pair, 1, trials=5000, seed=42)
        b = estimate_snr(cfg, pair, 1, trials=5000, seed=42)
        assert a == b

    def test_independent_of_thread_count(self):
        cfg = CdmaConfig(n_chips=31, n_users=2)
        pair = gold_pair(5)
        serial = estimate_snr(cfg, pair, 1, trials=20000, seed=7, threads=1)
        threaded = estimate_snr(cfg, pair, 1, trials=20000, seed=7, threads=4)
        assert serial == threaded

    def test_phase_draws_do_not_matter(self):
        cfg = CdmaConfig(n_chips=31, n_users=2)
        pair = gold_pair(5)
        a = estimate_snr(cfg, pair, 1, trials=5000, seed=3)
        b = estimate_snr(cfg, pair, 1, trials=5000, seed=3, zero_phase=True)
        assert a == b

    @pytest.mark.parametrize(
        "make_pair",
        [
            lambda: gold_pair(5),
            lambda: (fzc_sequence(31, 1), fzc_sequence(31, 2)),
            lambda: (single_tone_sequence(31, 1), single_tone_sequence(31, 2)),
            lambda: tuple(
                np.exp(2j * np.pi * np.random.default_rng(9).random((2, 31)))
            ),
        ],
        ids=["gold", "fzc", "tone", "random"],
    )
    def test_unbiased_within_three_stderr(self, make_pair):
        pair = list(make_pair())
        cfg = CdmaConfig(n_chips=31, n_users=2)
        out = estimate_snr(cfg, pair, 1, trials=30000, seed=11)
        analytic = interference_variance_direct(cfg, pair, 1)
        assert abs(out.var_interference_mean - analytic) <= 3 * out.var_interference_stderr

    def test_three_user_variance_adds_up(self):
        rng = np.random.default_rng(5)
        seqs = [random_unit_modulus(16, rng) for _ in range(3)]
        cfg = CdmaConfig(n_chips=16, n_users=3)
        out = estimate_snr(cfg, seqs, 1, trials=40000, seed=13)
        analytic = interference_variance_direct(cfg, seqs, 1)
        assert abs(out.var_interference_mean - analytic) <= 3 * out.var_interference_stderr

    def test_snr_estimate_formula(self):
        cfg = CdmaConfig(n_chips=31, n_users=2, power=1.2, symbol_duration=0.8,
                         noise_density=0.05)
        pair = gold_pair(5)
        out = estimate_snr(cfg, pair, 1, trials=2000, seed=21)
        var_d = 1.2 * 0.8**2 / 2
        noise = 0.05 * 0.8 / 4
        expected = np.sqrt(var_d / (out.var_interference_mean + noise))
        assert out.snr_estimate == pytest.approx(expected, rel=1e-12)

    def test_trials_floor(self):
        cfg = CdmaConfig(n_chips=8, n_users=2)
        pair = [np.ones(8, dtype=complex)] * 2
        with pytest.raises(ValueError):
            estimate_snr(cfg, pair, 1, trials=99, seed=0)
