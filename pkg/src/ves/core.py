"""Closed-form evaluation of the VES production function and its derived quantities.

The per-capita technology is

    f(k) = gamma * k**theta * (alpha * k**psi + beta)**omega

with the marginal rate of substitution, elasticity of substitution,
factor shares and their limits all available in closed form.  Every
evaluator accepts a scalar or a numpy array of capital-labor ratios and
returns a float or an array of the same shape.

Notation used throughout: ``x = k**psi`` and ``eta = theta + omega*psi``.
Introducing ``N = (alpha*eta*x + beta*theta) * (alpha*(1-eta)*x + beta*(1-theta))``
and ``D = N - alpha*beta*omega*psi**2*x``, the elasticity is ``N/D`` and
``D`` also appears, up to ``-f/(k*(alpha*x+beta))**2``, as the second
derivative.  ``D`` is always evaluated in its expanded form whose three
coefficients are all positive, so it never suffers cancellation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolation,
    NegativeInput,
    NonFinite,
    NonPositiveInput,
    NonPositiveLabor,
    NoTurningPoint,
)

MODES = ("strict", "extended")

# |omega*psi - 1| below this counts as the CES configuration
CES_TOL = 1e-12

PARAM_NAMES = ("theta", "omega", "psi", "alpha", "beta", "gamma")


class Reduction(str, enum.Enum):
    COBB_DOUGLAS = "CobbDouglas"
    CES = "CES"
    GENERAL = "GeneralVES"


class Limit(str, enum.Enum):
    """Symbolic limit values for quantities that diverge or vanish."""

    POS_INF = "+inf"
    ZERO = "0"


def _is_ces_config(theta, omega, psi):
    return theta == 0.0 and 0.0 < psi < 1.0 and abs(omega * psi - 1.0) <= CES_TOL


def _check(theta, omega, psi, alpha, beta, gamma, mode):
    if mode not in MODES:
        raise ConstraintViolation("mode", mode, f"one of {MODES}")
    for name, value in zip(PARAM_NAMES, (theta, omega, psi, alpha, beta, gamma)):
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise NonFinite(name, value)

    def unit(v):
        return 0.0 < v < 1.0

    extended = mode == "extended"
    ces = extended and _is_ces_config(theta, omega, psi)

    if not (unit(theta) or ces):
        req = "in (0,1)" if not extended else "in (0,1), or 0 with omega*psi = 1 (CES)"
        raise ConstraintViolation("theta", theta, req)
    if not (unit(omega) or (extended and omega == 0.0) or ces):
        req = "in (0,1)" if not extended else "in [0,1), or 1/psi with theta = 0 (CES)"
        raise ConstraintViolation("omega", omega, req)
    if not unit(psi):
        raise ConstraintViolation("psi", psi, "in (0,1)")
    if not unit(alpha):
        raise ConstraintViolation("alpha", alpha, "in (0,1)")
    if not unit(beta):
        raise ConstraintViolation("beta", beta, "in (0,1)")
    if not gamma > 0.0:
        raise ConstraintViolation("gamma", gamma, "> 0")
    if not ces and not theta + omega * psi < 1.0:
        raise ConstraintViolation("theta+omega*psi", theta + omega * psi, "< 1")


@dataclass(frozen=True)
class VesParams:
    """Validated, immutable parameter set.

    Construction validates; an invalid combination raises
    :class:`~ves.errors.ConstraintViolation` or :class:`~ves.errors.NonFinite`.
    ``eta`` and ``mu`` are derived and cannot be set.
    """

    theta: float
    omega: float
    psi: float
    alpha: float
    beta: float
    gamma: float
    mode: str = "strict"

    def __post_init__(self):
        values = []
        for name in PARAM_NAMES:
            v = getattr(self, name)
            if isinstance(v, (int, np.integer, np.floating)) and not isinstance(v, bool):
                v = float(v)
                object.__setattr__(self, name, v)
            values.append(v)
        _check(*values, self.mode)

    @property
    def eta(self) -> float:
        if self.reduction is Reduction.CES:
            return 1.0
        return self.theta + self.omega * self.psi

    @property
    def mu(self) -> float:
        return self.theta

    @property
    def reduction(self) -> Reduction:
        if self.omega == 0.0:
            return Reduction.COBB_DOUGLAS
        if _is_ces_config(self.theta, self.omega, self.psi):
            return Reduction.CES
        return Reduction.GENERAL

    def as_dict(self) -> dict:
        d = {name: getattr(self, name) for name in PARAM_NAMES}
        d["mode"] = self.mode
        return d


def validate_params(theta, omega, psi, alpha, beta, gamma, mode="strict") -> VesParams:
    return VesParams(theta, omega, psi, alpha, beta, gamma, mode)


BENCHMARK = VesParams(theta=0.6, omega=0.5, psi=0.7, alpha=0.2, beta=0.8, gamma=1.05)


def classify_reduction(p: VesParams) -> Reduction:
    """Which special case the parameters fall in (omega = 0 or theta = 0, omega*psi = 1)."""
    return p.reduction


# ---------------------------------------------------------------------------
# input handling


def _as_k(k, name="k", allow_zero=False):
    arr = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFinite(name, k)
    if allow_zero:
        if np.any(arr < 0):
            raise NegativeInput(f"{name} must be >= 0 (got {k!r})")
    elif np.any(arr <= 0):
        raise NonPositiveInput(f"{name} must be positive (got {k!r})")
    return arr


def _out(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


# ---------------------------------------------------------------------------
# closed forms in terms of x = k**psi


def _f(p, k, x):
    return p.gamma * k**p.theta * (p.alpha * x + p.beta) ** p.omega


def _capital_share(p, x):
    if p.reduction is Reduction.COBB_DOUGLAS:
        return np.full_like(x, p.theta)
    return (p.alpha * p.eta * x + p.beta * p.theta) / (p.alpha * x + p.beta)


def _fprime(p, k, x):
    a, b = p.alpha, p.beta
    num = a * p.eta * x + b * p.theta
    return p.gamma * num / (k ** (1.0 - p.theta) * (a * x + b) ** (1.0 - p.omega))


def _denominator(p, x):
    a, b, th, om, ps, eta = p.alpha, p.beta, p.theta, p.omega, p.psi, p.eta
    return (
        a * a * eta * (1.0 - eta) * x * x
        + a * b * (ps * om * (1.0 - ps) + 2.0 * th * (1.0 - eta)) * x
        + b * b * th * (1.0 - th)
    )


def _fsecond(p, k, x, f):
    return -f * _denominator(p, x) / (k * (p.alpha * x + p.beta)) ** 2


def _mrs(p, k, x):
    if p.reduction is Reduction.COBB_DOUGLAS:
        return k * (1.0 - p.theta) / p.theta
    a, b, eta, mu = p.alpha, p.beta, p.eta, p.mu
    return k * (a * (1.0 - eta) * x + b * (1.0 - mu)) / (a * eta * x + b * mu)


def _sigma(p, x):
    red = p.reduction
    if red is Reduction.COBB_DOUGLAS:
        return np.ones_like(x)
    if red is Reduction.CES:
        return np.full_like(x, 1.0 / (1.0 - p.psi))
    # 1 + c/D rather than N/D keeps the result >= 1 under rounding
    corr = p.alpha * p.beta * p.omega * p.psi**2 * x
    return 1.0 + corr / _denominator(p, x)


def _sigma_prime(p, k, x):
    if p.reduction is not Reduction.GENERAL:
        return np.zeros_like(x)
    a, b, th, om, ps, eta = p.alpha, p.beta, p.theta, p.omega, p.psi, p.eta
    bracket = b * b * th * (1.0 - th) - a * a * eta * (1.0 - eta) * x * x
    d = _denominator(p, x)
    return a * b * om * ps**3 * (x / k) * bracket / (d * d)


# ---------------------------------------------------------------------------
# public evaluators


def eval_f(p: VesParams, k):
    """Output per capita; exactly 0 at ``k = 0``."""
    kk = _as_k(k, allow_zero=True)
    with np.errstate(divide="ignore"):
        y = np.where(kk == 0.0, 0.0, _f(p, kk, kk**p.psi))
    return _out(y, k)


def eval_fprime(p: VesParams, k):
    """Marginal product of capital, defined for ``k > 0`` only."""
    kk = _as_k(k)
    return _out(_fprime(p, kk, kk**p.psi), k)


def eval_fsecond(p: VesParams, k):
    kk = _as_k(k)
    x = kk**p.psi
    return _out(_fsecond(p, kk, x, _f(p, kk, x)), k)


def eval_mrs(p: VesParams, k):
    """Marginal rate of substitution ``r(k)``, equal to ``f/f' - k``."""
    kk = _as_k(k)
    return _out(_mrs(p, kk, kk**p.psi), k)


def eval_sigma(p: VesParams, k):
    """Elasticity of substitution; always >= 1."""
    kk = _as_k(k)
    return _out(_sigma(p, kk**p.psi), k)


def eval_sigma_prime(p: VesParams, k):
    kk = _as_k(k)
    return _out(_sigma_prime(p, kk, kk**p.psi), k)


def eval_shares(p: VesParams, k):
    """Capital and labor shares ``(k*f'/f, 1 - k*f'/f)``.

    The labor share is the exact floating-point complement of the capital share.
    """
    kk = _as_k(k)
    pk = _capital_share(p, kk**p.psi)
    return _out(pk, k), _out(1.0 - pk, k)


def aggregate_output(p: VesParams, K, L):
    """Total output ``F(K, L) = L * f(K/L)``, homogeneous of degree one."""
    L_arr = np.asarray(L, dtype=float)
    if np.any(~np.isfinite(L_arr)) or np.any(L_arr <= 0):
        raise NonPositiveLabor(f"labor must be positive (got {L!r})")
    K_arr = _as_k(K, name="K", allow_zero=True)
    y = L_arr * np.asarray(eval_f(p, K_arr / L_arr))
    if K_arr.ndim == 0 and L_arr.ndim == 0:
        return float(y)
    return y


# ---------------------------------------------------------------------------
# limits and turning point


def limits_fprime(p: VesParams):
    """Inada limits of the marginal product as ``(k -> 0+, k -> inf)``."""
    if p.reduction is Reduction.CES:
        raise ConstraintViolation(
            "theta+omega*psi", p.theta + p.omega * p.psi, "< 1 (required for the Inada limits)"
        )
    return Limit.POS_INF, Limit.ZERO


def sigma_turning_point(p: VesParams) -> float:
    """Capital ratio at which the elasticity peaks."""
    if p.omega == 0.0 or p.theta == 0.0:
        raise NoTurningPoint(
            f"elasticity has no interior maximum for {p.reduction.value} (omega={p.omega}, theta={p.theta})"
        )
    a, b, th, eta = p.alpha, p.beta, p.theta, p.eta
    ratio = (b * b * th * (1.0 - th)) / (a * a * eta * (1.0 - eta))
    return ratio ** (1.0 / (2.0 * p.psi))


@dataclass(frozen=True)
class SigmaLimits:
    at_zero: float
    at_infinity_formula: float
    at_infinity_branch: str


def sigma_limits(p: VesParams) -> SigmaLimits:
    """Limits of the elasticity at both ends of the capital axis.

    ``at_infinity_formula`` is the closed-form branch rule.  For ``2*psi < 1``
    it gives a value above one, which numerical probes do not reproduce
    (see :func:`ves.verify.probe_sigma_infinity`); treat that branch as a
    reported formula, not as ground truth.
    """
    red = p.reduction
    if red is Reduction.CES:
        s = 1.0 / (1.0 - p.psi)
        return SigmaLimits(s, s, "constant (CES)")
    if red is Reduction.COBB_DOUGLAS:
        return SigmaLimits(1.0, 1.0, "constant (Cobb-Douglas)")
    th, om, ps = p.theta, p.omega, p.psi
    if 2.0 * ps >= 1.0:
        return SigmaLimits(1.0, 1.0, "2psi>=1")
    value = 1.0 + om * ps**2 / (2.0 * th * (1.0 - th - om * ps) + om * ps * (1.0 - ps))
    return SigmaLimits(1.0, value, "2psi<1")


def shares_limits(p: VesParams):
    """Capital and labor shares as ``k -> inf``."""
    eta = p.eta
    return eta, 1.0 - eta


# ---------------------------------------------------------------------------
# bundle


@dataclass(frozen=True)
class EvalBundle:
    k: float
    f: float
    f_prime: float
    f_second: float
    mrs: float
    sigma: float
    sigma_prime: float
    share_capital: float
    share_labor: float

    FIELDS = (
        "k",
        "f",
        "f_prime",
        "f_second",
        "mrs",
        "sigma",
        "sigma_prime",
        "share_capital",
        "share_labor",
    )

    def as_tuple(self):
        return tuple(getattr(self, name) for name in self.FIELDS)


def eval_bundle(p: VesParams, k) -> EvalBundle:
    """All closed-form quantities at ``k``, sharing a single ``k**psi``."""
    kk = _as_k(k)
    x = kk**p.psi
    f = _f(p, kk, x)
    pk = _capital_share(p, x)
    return EvalBundle(
        k=_out(kk, k),
        f=_out(f, k),
        f_prime=_out(_fprime(p, kk, x), k),
        f_second=_out(_fsecond(p, kk, x, f), k),
        mrs=_out(_mrs(p, kk, x), k),
        sigma=_out(_sigma(p, x), k),
        sigma_prime=_out(_sigma_prime(p, kk, x), k),
        share_capital=_out(pk, k),
        share_labor=_out(1.0 - pk, k),
    )
