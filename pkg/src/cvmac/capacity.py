"""Closed-form rates, product-input bounds and superadditivity thresholds.

Scheme A is the beam-splitter channel fed by a coherent carrier and one
half of a two-mode squeezed pair; scheme B is the triple QND gate channel
fed by two displaced single-mode squeezed states. For each scheme the
entanglement-assisted one-shot rate is compared with the thermal-entropy
bound ``g(N_max)`` on the rate achievable with product inputs. A ratio
above one means the second sender's entanglement lets the first sender
beat every product-input strategy.

The bound is used with equality (worst case for the entangled scheme), so
the reported ratio is a lower bound on the true enhancement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np
from scipy.optimize import bisect

from .gaussian import g_function

DB_PER_NEPER = 20.0 * math.log10(math.e)

# geometric scan used to bracket threshold crossings
SCAN_LO = 1e-3
SCAN_HI = 1e3
SCAN_POINTS = 601


class OutOfRegimeError(ValueError):
    """Requested operating point lies in the unsupported regime ``cos^2 theta > N2/(N2+1)``."""


@dataclass(frozen=True)
class ConstraintsA:
    """Photon budgets for scheme A: ``sigma2 <= n1`` and ``sinh(r)**2 <= n2``."""

    n1: float
    n2: float
    scheme = "a"

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("photon budgets must be nonnegative")


@dataclass(frozen=True)
class ConstraintsB:
    """Photon budgets for scheme B: ``sigma2 + 2 sinh(R)**2 <= n``, ``sinh(r)**2 <= n_prime``."""

    n: float
    n_prime: float
    scheme = "b"

    def __post_init__(self):
        if self.n < 0 or self.n_prime < 0:
            raise ValueError("photon budgets must be nonnegative")


PowerConstraints = Union[ConstraintsA, ConstraintsB]


@dataclass(frozen=True)
class RatePoint:
    """Rates evaluated at one constraint point.

    ``bound_prod`` is ``g(N_max)`` taken with equality, so ``ratio`` is a
    lower bound on the enhancement over product inputs.
    """

    constraints: PowerConstraints
    i_ent: float
    bound_prod: float
    ratio: float
    auxiliary: dict = field(default_factory=dict)

    @property
    def superadditive(self) -> bool:
        return self.ratio > 1.0


def db_from_r(r: float) -> float:
    """Quadrature noise reduction ``10 log10(e^{2r})`` in dB."""
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    return DB_PER_NEPER * r


def r_from_photons(n: float) -> float:
    """Squeezing parameter whose squeezed vacuum holds ``n = sinh(r)**2`` photons per mode."""
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    return math.asinh(math.sqrt(n))


def product_bound(n_max: float, base: float = 2.0) -> float:
    """Upper bound on the product-input rate: entropy of a thermal state with ``n_max`` photons."""
    return g_function(n_max, base)


# ---------------------------------------------------------------------------
# scheme A
# ---------------------------------------------------------------------------


def i_scheme_a_closed(theta: float, r: float, sigma2: float, base: float = 2.0) -> float:
    """Scheme-A mutual information ``log[1 + sigma2 sin^2(theta)/(ch r - cos(theta) sh r)^2]``."""
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"theta={theta} must lie in (0, pi/2)")
    if r < 0 or sigma2 < 0:
        raise ValueError("r and sigma2 must be nonnegative")
    # ch r - cos sh r written as e^-r + (1 - cos) sh r avoids cancellation at large r
    denom = math.exp(-r) + 2.0 * math.sin(theta / 2) ** 2 * math.sinh(r)
    return math.log1p(sigma2 * math.sin(theta) ** 2 / denom**2) / math.log(base)


def locus_theta(r: float) -> float:
    """Beam-splitter angle maximising the scheme-A rate at squeezing ``r``: ``cos theta = tanh r``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return math.acos(math.tanh(r))


def regime_theta_a(constraints: ConstraintsA) -> float:
    """Largest-transmissivity angle allowed by the squeezing budget, ``cos^2 theta = n2/(n2+1)``."""
    return math.acos(math.sqrt(constraints.n2 / (constraints.n2 + 1.0)))


def i_max_ent_a(
    constraints: ConstraintsA, theta: float | None = None, base: float = 2.0
) -> tuple[float, dict]:
    """Constrained maximum of the scheme-A rate, ``log(1 + n1)``.

    Args:
        constraints: scheme-A photon budgets.
        theta: fixed beam-splitter angle of the device. Defaults to the
            regime angle ``cos^2 theta = n2/(n2+1)``.
        base: logarithm base.

    Returns:
        tuple: the rate and the achieving parameters ``{"theta", "r", "sigma2"}``.

    Raises:
        OutOfRegimeError: if ``cos^2 theta > n2/(n2+1)``.
    """
    n2 = constraints.n2
    if theta is None:
        theta = regime_theta_a(constraints)
    elif not 0.0 < theta <= math.pi / 2:
        raise ValueError(f"theta={theta} must lie in (0, pi/2]")
    elif math.cos(theta) ** 2 > n2 / (n2 + 1.0) + 1e-12:
        raise OutOfRegimeError(
            f"cos^2(theta)={math.cos(theta) ** 2:.6g} exceeds n2/(n2+1)={n2 / (n2 + 1.0):.6g}"
        )
    r = math.atanh(min(math.cos(theta), math.sqrt(n2 / (n2 + 1.0))))
    params = {"theta": theta, "r": r, "sigma2": constraints.n1}
    return math.log1p(constraints.n1) / math.log(base), params


def n_max_a(theta: float, constraints: ConstraintsA) -> float:
    """Largest mean photon number at the scheme-A output for product inputs."""
    return (
        math.sqrt(constraints.n1) * math.sin(theta)
        + math.sqrt(2.0 * constraints.n2) * math.cos(theta)
    ) ** 2


def bold_n_max_a(constraints: ConstraintsA) -> float:
    """``n_max_a`` at the regime angle: ``(sqrt(n1) + sqrt(2) n2)^2 / (n2 + 1)``."""
    n1, n2 = constraints.n1, constraints.n2
    return (math.sqrt(n1) + math.sqrt(2.0) * n2) ** 2 / (n2 + 1.0)


def enhancement_ratio_a(constraints: ConstraintsA, base: float = 2.0) -> RatePoint:
    i_ent, params = i_max_ent_a(constraints, base=base)
    n_max = bold_n_max_a(constraints)
    bound = product_bound(n_max, base)
    if bound <= 0:
        raise ValueError("product bound vanishes (n1 = n2 = 0); ratio undefined")
    return RatePoint(constraints, i_ent, bound, i_ent / bound, {**params, "n_max": n_max})


def optimal_n1_a(n2: float) -> float:
    """Carrier budget ``2 (n2 + 2)^2`` for which ``n2`` is the best squeezing budget.

    At fixed ``n1`` the rate ``log(1 + n1)`` does not depend on ``n2``, so the
    ratio peaks where ``bold_n_max_a`` is smallest in ``n2``; that happens
    at ``sqrt(n1) = sqrt(2) (n2 + 2)``, where ``bold_n_max_a = 8 (n2 + 1)``.
    Along this curve the ratio increases towards 2.
    """
    if n2 < 0:
        raise ValueError("n2 must be nonnegative")
    return 2.0 * (n2 + 2.0) ** 2


def optimal_n2_a(n1: float) -> float:
    """Squeezing budget maximising the scheme-A ratio at fixed ``n1`` (inverse of :func:`optimal_n1_a`)."""
    if n1 < 0:
        raise ValueError("n1 must be nonnegative")
    return max(math.sqrt(n1 / 2.0) - 2.0, 0.0)


# ---------------------------------------------------------------------------
# scheme B
# ---------------------------------------------------------------------------


class OptimumB(NamedTuple):
    r: float
    R: float
    sigma2: float
    i_ent: float


def i_scheme_b_closed(r: float, R: float, sigma2: float, base: float = 2.0) -> float:
    """Scheme-B mutual information ``log[1 + sigma2/(e^{-2r} + e^{-2R}/2)]``."""
    if r < 0 or R < 0 or sigma2 < 0:
        raise ValueError("r, R and sigma2 must be nonnegative")
    noise = math.exp(-2.0 * r) + 0.5 * math.exp(-2.0 * R)
    return math.log1p(sigma2 / noise) / math.log(base)


def optimize_b(constraints: ConstraintsB, base: float = 2.0) -> OptimumB:
    """Maximise the scheme-B rate with both photon budgets saturated.

    ``sinh(r)**2 = n_prime``, ``sigma2 = n - 2 sinh(R)**2`` and the
    one-mode squeezing solves
    ``2 e^{2R} = -e^{2r} + sqrt(e^{4r} + 4 e^{2r} (n + 1) + 4)``.
    """
    n = constraints.n
    r = r_from_photons(constraints.n_prime)
    e2r = math.exp(2.0 * r)
    e2R = 0.5 * (-e2r + math.sqrt(e2r * e2r + 4.0 * e2r * (n + 1.0) + 4.0))
    R = max(0.5 * math.log(e2R), 0.0)
    sigma2 = n - 2.0 * math.sinh(R) ** 2
    if sigma2 < -1e-9 * max(1.0, n):
        raise ValueError(f"infeasible optimum: sigma2={sigma2:.6g} < 0")
    sigma2 = max(sigma2, 0.0)
    return OptimumB(r, R, sigma2, i_scheme_b_closed(r, R, sigma2, base))


def bold_n_max_b(constraints: ConstraintsB) -> float:
    """Output photon bound for scheme B: ``(sqrt(2 n' + 1/2) + sqrt(n + 1))^2 - 1/2``."""
    return (
        math.sqrt(2.0 * constraints.n_prime + 0.5) + math.sqrt(constraints.n + 1.0)
    ) ** 2 - 0.5


def enhancement_ratio_b(constraints: ConstraintsB, base: float = 2.0) -> RatePoint:
    opt = optimize_b(constraints, base)
    n_max = bold_n_max_b(constraints)
    bound = product_bound(n_max, base)
    aux = {"r": opt.r, "R": opt.R, "sigma2": opt.sigma2, "n_max": n_max}
    return RatePoint(constraints, opt.i_ent, bound, opt.i_ent / bound, aux)


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------


def _first_crossing(ratio_of, tol: float, lo: float, hi: float, points: int) -> float | None:
    """Smallest parameter where ``ratio_of`` rises through 1, or None."""
    grid = np.geomspace(lo, hi, points)
    excess = [ratio_of(x) - 1.0 for x in grid]
    for k in range(len(grid)):
        if excess[k] >= 0.0:
            if k == 0:
                return float(grid[0])
            return float(
                bisect(lambda x: ratio_of(x) - 1.0, grid[k - 1], grid[k], xtol=tol, maxiter=500)
            )
    return None


def threshold_a(
    n1: float,
    tol: float = 1e-6,
    lo: float = SCAN_LO,
    hi: float = SCAN_HI,
    points: int = SCAN_POINTS,
) -> float | None:
    """Smallest ``n2`` at which scheme A becomes superadditive for carrier budget ``n1``.

    Returns None when the ratio stays below one over ``[lo, hi]``.
    """
    if n1 <= 0:
        return None
    return _first_crossing(
        lambda n2: enhancement_ratio_a(ConstraintsA(n1, n2)).ratio, tol, lo, hi, points
    )


def threshold_b(
    n: float,
    tol: float = 1e-6,
    lo: float = SCAN_LO,
    hi: float = SCAN_HI,
    points: int = SCAN_POINTS,
) -> float | None:
    """Smallest ``n_prime`` at which scheme B becomes superadditive for budget ``n``."""
    return _first_crossing(
        lambda npr: enhancement_ratio_b(ConstraintsB(n, npr)).ratio, tol, lo, hi, points
    )
