"""
Well/barrier landscape of the Lorentzian family f = a / sqrt(1 + x**2).

For this family

    V - E = (2x**2 - 1)/(x**2 + 1)**2 - (gamma**2/a**4) (x**2 + 1)**2,

whose off-centre maxima sit at x = +-sqrt(z) with z the root of

    gamma**2 (z + 1)**4 = a**4 (2 - z),   0 <= z <= 2.

The barrier height relative to E is 3(z - 1)/(z + 1)**2. A well forms only
for gamma**2 < 2 a**4, and the states sit inside it only for
gamma**2 < a**4/16 (z > 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .construct import lorentz_v_minus_e
from .errors import ParameterDomainError

Z_XTOL = 1e-12
BARRIER_CHECK_TOL = 1e-10


class Regime(enum.Enum):
    CONVEX_NO_WELL = "ConvexNoWell"
    WELL_STATES_ABOVE = "WellStatesAbove"
    WELL_STATES_INSIDE = "WellStatesInside"
    CRITICAL_BOUNDARY = "CriticalBoundary"


@dataclass(frozen=True)
class WellReport:
    a: float
    gamma_sq: float
    regime: Regime
    z_root: float | None
    x_maxima: tuple | None
    barrier_height_rel: float | None
    #: |closed-form barrier - direct evaluation of V - E at sqrt(z)|
    barrier_check_error: float | None
    #: max of V - E on a sample grid; negative means the states lie above the whole potential
    max_v_minus_e: float

    @property
    def thresholds(self):
        a4 = self.a**4
        return {"well_formation": 2.0 * a4, "placement": a4 / 16.0}

    def to_dict(self):
        return {
            "a": self.a,
            "gamma_sq": self.gamma_sq,
            "regime": self.regime.value,
            "z_root": self.z_root,
            "x_maxima": list(self.x_maxima) if self.x_maxima else None,
            "barrier_height_rel": self.barrier_height_rel,
            "barrier_check_error": self.barrier_check_error,
            "max_v_minus_e": self.max_v_minus_e,
            "thresholds": self.thresholds,
        }


def maxima_condition(z, a, gamma_sq):
    """gamma**2 (z+1)**4 - a**4 (2-z); increasing in z, root at the maxima."""
    return gamma_sq * (z + 1.0) ** 4 - a**4 * (2.0 - z)


def gamma_sq_at(z, a):
    """The gamma**2 whose maxima sit at x**2 = z (decreasing in z)."""
    return a**4 * (2.0 - z) / (z + 1.0) ** 4


def barrier_height(z):
    """V(x_max) - E in terms of z = x_max**2."""
    return 3.0 * (z - 1.0) / (z + 1.0) ** 2


def classify(a, gamma_sq):
    a4 = a**4
    if gamma_sq >= 2.0 * a4:
        return Regime.CONVEX_NO_WELL
    if gamma_sq == a4 / 16.0:
        return Regime.CRITICAL_BOUNDARY
    if gamma_sq < a4 / 16.0:
        return Regime.WELL_STATES_INSIDE
    return Regime.WELL_STATES_ABOVE


def _validate(a, gamma, gamma_sq):
    a = float(a)
    if not (math.isfinite(a) and a > 0):
        raise ParameterDomainError(f"a must be positive, got {a!r}")
    if (gamma is None) == (gamma_sq is None):
        raise ParameterDomainError("give exactly one of gamma or gamma_sq")
    if gamma_sq is None:
        gamma = float(gamma)
        if not (math.isfinite(gamma) and gamma >= 0):
            raise ParameterDomainError(f"gamma must be >= 0, got {gamma!r}")
        gamma_sq = gamma * gamma
    gamma_sq = float(gamma_sq)
    if not (math.isfinite(gamma_sq) and gamma_sq >= 0):
        raise ParameterDomainError(f"gamma_sq must be >= 0, got {gamma_sq!r}")
    return a, gamma_sq


def solve_maxima(a, gamma=None, *, gamma_sq=None, sample_xmax=6.0, sample_n=1201):
    """Locate the barrier maxima of the Lorentzian potential and classify it.

    Pass either ``gamma`` or ``gamma_sq``; the latter avoids rounding when
    probing the exact thresholds.
    """
    a, gsq = _validate(a, gamma, gamma_sq)
    regime = classify(a, gsq)
    gamma_val = math.sqrt(gsq)
    xs = np.linspace(-sample_xmax, sample_xmax, sample_n)
    max_vme = float(np.max(lorentz_v_minus_e(xs, a, gamma_val)))

    if regime is Regime.CONVEX_NO_WELL:
        z = 0.0 if gsq == 2.0 * a**4 else None
        return WellReport(a, gsq, regime, z, None, None, None, max_vme)

    # maxima_condition(0) < 0 <= maxima_condition(2): exactly one root in [0, 2]
    z = _z_root(a, gsq)
    xm = math.sqrt(z)
    barrier = barrier_height(z)
    direct = float(lorentz_v_minus_e(xm, a, gamma_val))
    return WellReport(
        a=a,
        gamma_sq=gsq,
        regime=regime,
        z_root=z,
        x_maxima=(-xm, xm),
        barrier_height_rel=barrier,
        barrier_check_error=abs(barrier - direct),
        max_v_minus_e=max(max_vme, direct),
    )


def classify_sweep(a, gamma_grid=None, *, gamma_sq_grid=None):
    """One :class:`WellReport` per entry of the gamma (or gamma**2) grid."""
    if (gamma_grid is None) == (gamma_sq_grid is None):
        raise ParameterDomainError("give exactly one of gamma_grid or gamma_sq_grid")
    if gamma_sq_grid is not None:
        values = list(np.atleast_1d(gamma_sq_grid))
        if not values:
            raise ParameterDomainError("gamma grid must be nonempty")
        return [solve_maxima(a, gamma_sq=float(g)) for g in values]
    values = list(np.atleast_1d(gamma_grid))
    if not values:
        raise ParameterDomainError("gamma grid must be nonempty")
    return [solve_maxima(a, float(g)) for g in values]


def _z_root(a, gamma_sq):
    """Root of the maxima condition in (0, 2], or None when no off-centre maximum exists."""
    if maxima_condition(0.0, a, gamma_sq) >= 0.0:
        return None
    return optimize.bisect(maxima_condition, 0.0, 2.0, args=(a, gamma_sq), xtol=Z_XTOL, rtol=4 * np.finfo(float).eps)


def _well_present(a, gamma_sq):
    return _z_root(a, gamma_sq) is not None


def _states_inside(a, gamma_sq):
    z = _z_root(a, gamma_sq)
    return z is not None and barrier_height(z) > 0.0


def locate_boundaries(a, gamma_sq_max=None, n_coarse=64, tol=1e-9):
    """Locate, by sweeping gamma**2, where the well forms and where the states enter it.

    The landscape itself decides: "well present" means the maxima condition
    has a root with z > 0, "states inside" means the barrier at that root is
    positive. A log-spaced sweep brackets each change and bisection narrows
    the bracket below ``tol * a**4``. The threshold formulas are not used,
    so the returned values can be compared against them.

    Returns
    -------
    dict with keys ``"well_formation"`` and ``"placement"`` (gamma**2 values)
    """
    a = float(a)
    a4 = a**4
    hi = 4.0 * a4 if gamma_sq_max is None else float(gamma_sq_max)
    grid = np.geomspace(1e-4 * a4, hi, n_coarse)
    out = {}
    for name, predicate in (("well_formation", _well_present), ("placement", _states_inside)):
        flags = [predicate(a, g) for g in grid]
        changes = [i for i in range(len(grid) - 1) if flags[i] != flags[i + 1]]
        if len(changes) != 1:
            raise ParameterDomainError(f"sweep did not bracket a single {name} boundary; widen gamma_sq_max")
        lo, hi_ = float(grid[changes[0]]), float(grid[changes[0] + 1])
        below = flags[changes[0]]
        while hi_ - lo > tol * a4:
            mid = 0.5 * (lo + hi_)
            if predicate(a, mid) == below:
                lo = mid
            else:
                hi_ = mid
        out[name] = 0.5 * (lo + hi_)
    return out
