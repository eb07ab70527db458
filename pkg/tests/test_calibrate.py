import math

import numpy as np
import pytest

from conftest import random_strict_params
from ves import calibrate, core
from ves.calibrate import CalibrationProblem, FitOptions, fit, residuals, synth_data
from ves.core import BENCHMARK, VesParams
from ves.errors import GridError, InsufficientData, NoConvergence, NonPositiveObservation
from ves.grid import GridSpec

RECOVERY_GRID = GridSpec(0.25, 32.0, 12)
NOISY_GRID = GridSpec(0.01, 1000.0, 64)

# fitted once on synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=42)
NOISY_RMSE = 0.007786261227083558
NOISY_PARAMS = dict(
    theta=0.6011691889670732,
    omega=0.498309426392964,
    psi=0.69908221605788,
    alpha=0.19888142380938165,
    gamma=1.0519664450883823,
)

TRUTH_FIELDS = ("theta", "omega", "psi", "alpha", "beta", "gamma")


def _max_param_error(p, q):
    return max(abs(getattr(p, name) - getattr(q, name)) for name in TRUTH_FIELDS)


class TestResiduals:
    def test_exact_points(self):
        obs = synth_data(BENCHMARK, GridSpec(0.01, 100.0, 50))
        assert np.max(np.abs(residuals(BENCHMARK, obs))) <= 1e-14

    def test_single_points(self):
        assert residuals(BENCHMARK, [(1.0, 1.05)])[0] == 0.0
        r = residuals(BENCHMARK, [(2.0, 2.0)])[0]
        assert r == pytest.approx(math.log(2.0) - math.log(1.6879688968551032), rel=1e-13)
        assert r == pytest.approx(0.1697, abs=1e-4)

    def test_order_preserved(self):
        obs = [(4.0, 1.0), (0.5, 1.0), (2.0, 1.0)]
        r = residuals(BENCHMARK, obs)
        np.testing.assert_allclose(r, -np.log(core.eval_f(BENCHMARK, np.array([4.0, 0.5, 2.0]))))

    @pytest.mark.parametrize("bad", [(0.0, 1.0), (1.0, 0.0), (-1.0, 2.0), (1.0, math.nan)])
    def test_nonpositive(self, bad):
        with pytest.raises(NonPositiveObservation):
            residuals(BENCHMARK, [(1.0, 1.0), bad])

    def test_identifiability(self):
        obs = synth_data(BENCHMARK, RECOVERY_GRID, 0.05, seed=3)
        p = VesParams(0.6, 0.5, 0.7, 0.2, 0.8, 1.05)
        # scale alpha and beta by c, compensate gamma by c**-omega
        c = 0.37
        q = VesParams(0.6, 0.5, 0.7, 0.2 * c, 0.8 * c, 1.05 * c**-0.5)
        assert q.gamma * q.beta**q.omega == pytest.approx(p.gamma * p.beta**p.omega, rel=1e-15)
        assert q.alpha / q.beta == pytest.approx(p.alpha / p.beta, rel=1e-15)
        np.testing.assert_allclose(residuals(q, obs), residuals(p, obs), rtol=0, atol=1e-14)


class TestProblem:
    def test_too_few_observations(self):
        obs = [(1.0, 1.0), (2.0, 1.5), (3.0, 1.8)]
        with pytest.raises(InsufficientData):
            CalibrationProblem(obs, normalize_alpha_beta=False)
        with pytest.raises(InsufficientData):
            CalibrationProblem(obs)

    def test_minimum_counts(self):
        obs = synth_data(BENCHMARK, GridSpec(1.0, 10.0, 5))
        assert CalibrationProblem(obs).free_parameters == 5
        with pytest.raises(InsufficientData):
            CalibrationProblem(obs, normalize_alpha_beta=False)

    def test_duplicate_k(self):
        obs = synth_data(BENCHMARK, GridSpec(1.0, 10.0, 6))
        with pytest.raises(InsufficientData):
            CalibrationProblem(obs + [obs[0]])

    def test_bad_observation(self):
        obs = synth_data(BENCHMARK, GridSpec(1.0, 10.0, 6))
        with pytest.raises(NonPositiveObservation):
            CalibrationProblem(obs + [(20.0, -1.0)])

    def test_bad_weights(self):
        obs = synth_data(BENCHMARK, GridSpec(1.0, 10.0, 6))
        with pytest.raises(InsufficientData):
            CalibrationProblem(obs, weights=[1.0] * 5)
        with pytest.raises(InsufficientData):
            CalibrationProblem(obs, weights=[1.0] * 5 + [0.0])

    def test_bad_mode(self):
        obs = synth_data(BENCHMARK, GridSpec(1.0, 10.0, 6))
        with pytest.raises(ValueError):
            CalibrationProblem(obs, mode="loose")


class TestSynth:
    def test_noiseless(self):
        obs = synth_data(BENCHMARK, RECOVERY_GRID)
        assert len(obs) == 12
        assert obs[0][0] == 0.25 and obs[-1][0] == 32.0
        assert np.max(np.abs(residuals(BENCHMARK, obs))) <= 1e-14

    def test_deterministic(self):
        a = synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=42)
        b = synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=42)
        c = synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=43)
        assert a == b
        assert a != c

    def test_noise_scale(self):
        obs = synth_data(BENCHMARK, GridSpec(0.1, 10.0, 4000), 0.01, seed=1)
        sd = np.std(residuals(BENCHMARK, obs))
        assert sd == pytest.approx(0.01, rel=0.05)

    def test_errors(self):
        with pytest.raises(GridError):
            synth_data(BENCHMARK, [1.0, 2.0])
        with pytest.raises(ValueError):
            synth_data(BENCHMARK, RECOVERY_GRID, -0.1)


class TestFit:
    def test_benchmark_recovery(self):
        problem = CalibrationProblem(synth_data(BENCHMARK, RECOVERY_GRID), seed=7)
        res = fit(problem)
        assert res.converged and res.rmse <= 1e-8
        assert _max_param_error(res.params, BENCHMARK) <= 1e-4
        assert res.restarts_used == 16
        assert res.params.alpha + res.params.beta == pytest.approx(1.0, abs=1e-15)

    def test_cobb_douglas_recovery(self):
        truth = VesParams(0.6, 0.0, 0.7, 0.2, 0.8, 1.0, "extended")
        problem = CalibrationProblem(synth_data(truth, RECOVERY_GRID), mode="extended", seed=7)
        res = fit(problem)
        assert res.params.omega <= 1e-3
        assert res.params.theta == pytest.approx(0.6, abs=1e-3)
        assert res.params.gamma == pytest.approx(1.0, abs=1e-6)
        assert res.rmse <= 1e-10

    def test_unnormalized(self):
        problem = CalibrationProblem(synth_data(BENCHMARK, RECOVERY_GRID), normalize_alpha_beta=False, seed=7)
        res = fit(problem)
        assert res.rmse <= 1e-8
        p = res.params
        # only the identified combinations are comparable
        assert p.gamma * p.beta**p.omega == pytest.approx(1.05 * 0.8**0.5, rel=1e-4)
        assert p.alpha / p.beta == pytest.approx(0.25, rel=1e-3)

    def test_random_truths(self):
        truths = random_strict_params(np.random.default_rng(4321), 50)
        grid = GridSpec(0.1, 100.0, 16)
        worst = 0.0
        for truth in truths:
            res = fit(CalibrationProblem(synth_data(truth, grid), seed=1))
            worst = max(worst, res.rmse)
            assert res.params.theta + res.params.omega * res.params.psi < 1
        assert worst <= 1e-6

    def test_never_worse_than_best_start(self):
        obs = synth_data(BENCHMARK, NOISY_GRID, 0.05, seed=5)
        problem = CalibrationProblem(obs, seed=11)
        options = FitOptions(starts=8)
        res = fit(problem, options)
        obj = calibrate._Objective(problem)
        start_rmse = [
            calibrate._rmse(obj.params(z, "strict"), problem.observations)
            for z in calibrate._starts(problem, options)
        ]
        assert res.rmse <= min(start_rmse) + 1e-15
        for _, before, after, _ in res.history:
            assert after <= before

    def test_deterministic(self):
        problem = CalibrationProblem(synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=42), seed=3)
        assert fit(problem) == fit(problem)

    def test_noisy_frozen(self):
        problem = CalibrationProblem(synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=42))
        res = fit(problem)
        assert 0.005 <= res.rmse <= 0.02
        assert _max_param_error(res.params, BENCHMARK) <= 0.1
        assert res.rmse == pytest.approx(NOISY_RMSE, rel=1e-9)
        for name, value in NOISY_PARAMS.items():
            assert getattr(res.params, name) == pytest.approx(value, rel=1e-6), name

    def test_weights_matter(self):
        obs = synth_data(BENCHMARK, NOISY_GRID, 0.05, seed=2)
        w = np.linspace(1.0, 10.0, len(obs))
        plain = fit(CalibrationProblem(obs))
        weighted = fit(CalibrationProblem(obs, weights=w))
        assert plain.params != weighted.params

    def test_no_convergence_carries_result(self):
        problem = CalibrationProblem(synth_data(BENCHMARK, NOISY_GRID, 0.01, seed=42))
        with pytest.raises(NoConvergence) as info:
            fit(problem, FitOptions(starts=2, budget=1))
        res = info.value.result
        assert not res.converged
        assert math.isfinite(res.rmse) and res.restarts_used == 2
