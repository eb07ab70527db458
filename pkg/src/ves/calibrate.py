"""Fit VES parameters to observed ``(k, y)`` pairs.

The objective is the weighted sum of squared log-residuals

    ln y_i - [ln gamma + theta ln k_i + omega ln(alpha k_i**psi + beta)]

minimised over the admissible box.  Given ``(psi, alpha, beta)`` the model
is linear in ``(ln gamma, theta, omega)``, so those are solved exactly by
bounded linear least squares and only the remaining two (or three)
parameters are searched, by scipy's bounded trust-region solver restarted
from a scrambled Sobol design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, lsq_linear
from scipy.stats import qmc

from . import core
from .core import VesParams
from .errors import (
    GridError,
    InsufficientData,
    NoConvergence,
    NonPositiveObservation,
)
from .grid import GridSpec

# distance kept from open-interval bounds
EDGE = 1e-9
# a nested Cobb-Douglas fit wins when its rmse is within this of the full fit
NESTED_SLACK = 1e-10


@dataclass(frozen=True)
class CalibrationProblem:
    observations: tuple
    weights: tuple = None
    normalize_alpha_beta: bool = True
    mode: str = "strict"
    seed: int = 0

    def __post_init__(self):
        obs = tuple((float(k), float(y)) for k, y in self.observations)
        object.__setattr__(self, "observations", obs)
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if len(w) != len(obs):
                raise InsufficientData(f"{len(w)} weights for {len(obs)} observations")
            if not all(math.isfinite(v) and v > 0 for v in w):
                raise InsufficientData("weights must be positive and finite")
            object.__setattr__(self, "weights", w)
        if self.mode not in core.MODES:
            raise ValueError(f"mode must be one of {core.MODES} (got {self.mode!r})")
        _check_observations(obs)
        need = self.free_parameters
        if len(obs) < need:
            raise InsufficientData(
                f"{len(obs)} observations for {need} free parameters (need at least {need})"
            )
        if len({k for k, _ in obs}) != len(obs):
            raise InsufficientData("observations must have distinct k values")

    @property
    def free_parameters(self) -> int:
        return 5 if self.normalize_alpha_beta else 6

    def arrays(self):
        k = np.array([o[0] for o in self.observations])
        y = np.array([o[1] for o in self.observations])
        w = np.ones_like(k) if self.weights is None else np.array(self.weights)
        return k, y, w


@dataclass(frozen=True)
class FitOptions:
    starts: int = 16
    budget: int = 400  # function evaluations per local search
    ftol: float = 1e-12
    xtol: float = 1e-12
    gtol: float = 1e-12


@dataclass(frozen=True)
class CalibrationResult:
    params: VesParams
    rmse: float
    iterations: int
    converged: bool
    restarts_used: int
    start_index: int = 0
    history: tuple = field(default=(), repr=False)


def _check_observations(obs):
    for i, (k, y) in enumerate(obs):
        if not (math.isfinite(k) and math.isfinite(y)):
            raise NonPositiveObservation(f"observation {i}: non-finite value ({k!r}, {y!r})")
        if k <= 0 or y <= 0:
            raise NonPositiveObservation(f"observation {i}: k and y must be positive (got {k!r}, {y!r})")


def residuals(p: VesParams, obs) -> np.ndarray:
    """Log-residuals ``ln y - ln f(k)`` in input order."""
    obs = [(float(k), float(y)) for k, y in obs]
    _check_observations(obs)
    k = np.array([o[0] for o in obs])
    y = np.array([o[1] for o in obs])
    log_f = np.log(p.gamma) + p.theta * np.log(k) + p.omega * np.log(p.alpha * k**p.psi + p.beta)
    return np.log(y) - log_f


def synth_data(p: VesParams, grid: GridSpec, noise_sd=0.0, seed=0):
    """Curve points with multiplicative log-normal noise from a seeded generator."""
    if not isinstance(grid, GridSpec):
        raise GridError("grid must be a GridSpec")
    if not (math.isfinite(noise_sd) and noise_sd >= 0):
        raise ValueError(f"noise_sd must be >= 0 (got {noise_sd!r})")
    k = grid.values()
    y = np.asarray(core.eval_f(p, k), dtype=float)
    if noise_sd > 0:
        eps = np.random.default_rng(seed).standard_normal(len(k))
        y = y * np.exp(noise_sd * eps)
    return [(float(a), float(b)) for a, b in zip(k, y)]


# ---------------------------------------------------------------------------
# variable projection: outer search over (psi, alpha[, beta]), inner linear
# least squares in (log gamma, theta, omega)


class _Objective:
    def __init__(self, problem):
        k, y, w = problem.arrays()
        self.lk = np.log(k)
        self.sw = np.sqrt(w)
        self.b = np.log(y) * self.sw
        self.normalized = problem.normalize_alpha_beta
        self.omega_lo = 0.0 if problem.mode == "extended" else EDGE

    def split(self, z):
        psi, alpha = z[0], z[1]
        beta = 1.0 - alpha if self.normalized else z[2]
        return psi, alpha, beta

    def linear(self, z):
        """Optimal ``(log gamma, theta, omega)`` for fixed nonlinear parameters.

        The inner problem is convex: box bounds on theta and omega, plus the
        single linear constraint ``theta + psi*omega <= 1 - EDGE``.  If the
        box solution violates it, the optimum lies on that face, where theta
        is eliminated.
        """
        psi, alpha, beta = self.split(z)
        s = np.log(alpha * np.exp(psi * self.lk) + beta)
        one = np.ones_like(self.lk)
        A = np.column_stack([one, self.lk, s]) * self.sw[:, None]
        c, *_ = np.linalg.lstsq(A, self.b, rcond=None)
        lo = np.array([-np.inf, EDGE, self.omega_lo])
        hi = np.array([np.inf, 1 - EDGE, 1 - EDGE])
        if np.any(c < lo) or np.any(c > hi):
            c = lsq_linear(A, self.b, bounds=(lo, hi), method="bvls").x
        cap = 1.0 - EDGE
        if c[1] + psi * c[2] > cap:
            # theta = cap - psi*omega on the face
            A2 = np.column_stack([one, s - psi * self.lk]) * self.sw[:, None]
            b2 = self.b - cap * self.lk * self.sw
            w_hi = min(1 - EDGE, (cap - EDGE) / psi)
            sol = lsq_linear(A2, b2, bounds=([-np.inf, self.omega_lo], [np.inf, w_hi]), method="bvls")
            lg, omega = sol.x
            c = np.array([lg, cap - psi * omega, omega])
        return c, A

    def fun(self, z):
        c, A = self.linear(z)
        return self.b - A @ c

    def cost(self, z):
        r = self.fun(z)
        return float(r @ r)

    def params(self, z, mode):
        psi, alpha, beta = self.split(z)
        lg, theta, omega = self.linear(z)[0]
        return VesParams(float(theta), float(omega), float(psi), float(alpha), float(beta), math.exp(lg), mode)


def _starts(problem, options):
    """Scrambled Sobol points over (psi, alpha[, beta]), kept off the box faces."""
    dim = 2 if problem.normalize_alpha_beta else 3
    u = qmc.Sobol(d=dim, scramble=True, seed=problem.seed).random(options.starts)
    return list(0.05 + 0.9 * u)


def _rmse(params, obs):
    return float(np.sqrt(np.mean(residuals(params, obs) ** 2)))


def _cobb_douglas_candidate(problem, params):
    """Weighted linear fit of ``ln y = ln gamma + theta ln k`` (omega = 0)."""
    k, y, w = problem.arrays()
    lk, ly, sw = np.log(k), np.log(y), np.sqrt(w)
    A = np.column_stack([np.ones_like(lk), lk]) * sw[:, None]
    (lg, theta), *_ = np.linalg.lstsq(A, ly * sw, rcond=None)
    try:
        return VesParams(float(theta), 0.0, params.psi, params.alpha, params.beta, math.exp(lg), "extended")
    except ValueError:
        return None


def fit(problem: CalibrationProblem, options: FitOptions = None) -> CalibrationResult:
    """Multi-start bounded least squares on the log-residuals.

    The best final objective wins, ties going to the lowest start index, so
    the result depends only on ``(problem, options)``.  Raises
    :class:`~ves.errors.NoConvergence` carrying the best result when the
    winning local search ran out of budget before meeting a tolerance.
    """
    options = options or FitOptions()
    obj = _Objective(problem)
    dim = 2 if problem.normalize_alpha_beta else 3
    lo, hi = np.full(dim, EDGE), np.full(dim, 1 - EDGE)
    best = None
    history = []
    total_nfev = 0
    for idx, z0 in enumerate(_starts(problem, options)):
        sol = least_squares(
            obj.fun,
            z0,
            jac="3-point",
            bounds=(lo, hi),
            method="trf",
            ftol=options.ftol,
            xtol=options.xtol,
            gtol=options.gtol,
            max_nfev=options.budget,
        )
        total_nfev += sol.nfev
        z, status = sol.x, sol.status
        c0 = obj.cost(z0)
        # never report worse than the start itself
        if c0 < obj.cost(z):
            z = z0
        cost = obj.cost(z)
        history.append((idx, math.sqrt(c0 / len(sol.fun)), math.sqrt(cost / len(sol.fun)), status))
        if best is None or cost < best[0]:
            best = (cost, idx, z, status)
    cost, idx, z, status = best
    params = obj.params(z, problem.mode)
    rmse = _rmse(params, problem.observations)
    if problem.mode == "extended":
        nested = _cobb_douglas_candidate(problem, params)
        if nested is not None:
            nested_rmse = _rmse(nested, problem.observations)
            if nested_rmse <= rmse + NESTED_SLACK:
                params, rmse = nested, nested_rmse
    result = CalibrationResult(
        params=params,
        rmse=rmse,
        iterations=total_nfev,
        converged=status > 0,
        restarts_used=len(history),
        start_index=idx,
        history=tuple(history),
    )
    if not result.converged:
        raise NoConvergence(
            f"budget of {options.budget} evaluations per start exhausted (best rmse {rmse:.3e})",
            result,
        )
    return result
