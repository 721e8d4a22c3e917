"""
Invariant battery for sampled degenerate pairs.

Every check works on the arrays stored in a :class:`DegeneratePair`, with
derivatives taken analytically from the profile, so a perturbation of the
stored data shows up in the corresponding measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .construct import DegeneratePair, Which
from .errors import ParameterDomainError, ResolutionError

RESIDUAL_TOL = 1e-8
WRONSKIAN_DRIFT_TOL = 1e-10
WRONSKIAN_VALUE_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12
ZERO_XTOL = 1e-12
# floor for the drift denominator so gamma = 0 is well defined
DRIFT_FLOOR = 1e-300


def residual_array(pair, which):
    """|psi'' - (V - E) psi| / (1 + |psi|) on the grid."""
    if pair.grid.size < 5:
        raise ResolutionError("residual check needs at least 5 grid points")
    psi = pair.states(which)
    _, d2 = pair.derivatives(which)
    return np.abs(d2 - pair.v_minus_e * psi) / (1.0 + np.abs(psi))


def schrodinger_residual(pair, which):
    """Maximum normalised Schroedinger residual of one state over the grid."""
    return float(np.max(residual_array(pair, which)))


@dataclass
class WronskianScan:
    values: np.ndarray
    drift: float
    w0: float
    #: relative mismatch between |W(0)| and |B| gamma
    magnitude_error: float


def wronskian_scan(pair):
    """W(x) = psi_minus psi_plus' - psi_plus psi_minus' at every grid point."""
    d_plus, _ = pair.derivatives(Which.PLUS)
    d_minus, _ = pair.derivatives(Which.MINUS)
    w = pair.psi_minus * d_plus - pair.psi_plus * d_minus
    centre = int(np.argmin(np.abs(pair.grid)))
    w0 = float(w[centre])
    drift = float(np.max(np.abs(w - w0)) / max(abs(w0), DRIFT_FLOOR))
    expected = abs(pair.b_coeff) * pair.gamma
    if expected == 0.0:
        mag = abs(w0)
    else:
        mag = abs(abs(w0) - expected) / expected
    return WronskianScan(values=w, drift=drift, w0=w0, magnitude_error=mag)


def _zero_phase_step(pair, idx):
    dg = np.abs(np.diff(pair.phase[idx[0] : idx[-1] + 1]))
    return float(dg.max()) if dg.size else 0.0


def find_zeros(pair, which, window=None, xtol=ZERO_XTOL):
    """Zeros of psi_plus or psi_minus strictly inside ``window``.

    Sign changes between neighbouring samples are bracketed and refined with
    Brent's method on the continuous state. Samples that are exactly zero
    count as zeros. A bracket whose endpoint signs disagree with the
    continuous state (corrupted samples) falls back to linear interpolation,
    so zeros of the data are never dropped silently.

    Raises
    ------
    ResolutionError
        The phase advances by pi or more within one grid cell, so a cell may
        hide two zeros.
    """
    x = pair.grid
    lo, hi = (float(x[0]), float(x[-1])) if window is None else map(float, window)
    if lo < x[0] - 1e-12 or hi > x[-1] + 1e-12 or lo >= hi:
        raise ParameterDomainError(f"window [{lo}, {hi}] must lie inside the grid")
    # every cell that overlaps the window, including the partial edge cells
    first = max(int(np.searchsorted(x, lo, side="right")) - 1, 0)
    last = min(int(np.searchsorted(x, hi, side="left")), x.size - 1)
    idx = np.arange(first, last + 1)
    if idx.size < 2:
        return np.empty(0)
    if _zero_phase_step(pair, idx) >= math.pi:
        raise ResolutionError(
            "phase advances by >= pi within one grid cell; increase n_points or shrink x_max"
        )
    psi = pair.states(which)
    zeros = []
    for i in idx:
        if psi[i] == 0.0:
            zeros.append(float(x[i]))
    for i in idx[:-1]:
        a, b = psi[i], psi[i + 1]
        if a * b >= 0.0:
            continue
        xa, xb = float(x[i]), float(x[i + 1])
        fa, fb = pair.evaluate(which, xa), pair.evaluate(which, xb)
        if fa * fb < 0.0 and np.sign(fa) == np.sign(a):
            zeros.append(optimize.brentq(lambda t: pair.evaluate(which, t), xa, xb, xtol=xtol, rtol=4 * np.finfo(float).eps))
        else:
            zeros.append(xa - a * (xb - xa) / (b - a))
    z = np.array(sorted(zeros))
    return z[(z > lo) & (z < hi)]


def check_interlacing(zeros_plus, zeros_minus):
    """True iff the zeros of the two sequences strictly alternate.

    This is equivalent to exactly one zero of each sequence lying strictly
    between consecutive zeros of the other. Shared zeros fail.
    """
    zp = np.asarray(zeros_plus, dtype=float)
    zm = np.asarray(zeros_minus, dtype=float)
    merged = np.concatenate([zp, zm])
    labels = np.concatenate([np.zeros(zp.size, int), np.ones(zm.size, int)])
    order = np.argsort(merged, kind="stable")
    merged, labels = merged[order], labels[order]
    if np.any(np.diff(merged) == 0.0):
        return False
    return bool(np.all(labels[1:] != labels[:-1]))


def orthogonality(pair):
    """|int psi_plus psi_minus dx| over the grid window (composite Simpson)."""
    return float(abs(integrate.simpson(pair.psi_plus * pair.psi_minus, x=pair.grid)))


def norm_tail(pair, X):
    """int_{|x|>X} f**2 dx, the weight of the envelope outside [-X, X]."""
    p = pair.profile if isinstance(pair, DegeneratePair) else pair
    hi = p.domain[1]
    if X >= hi:
        return 0.0
    val, _ = integrate.quad(lambda t: float(p.f(t)) ** 2, X, hi, epsabs=1e-15, epsrel=1e-12, limit=500)
    return 2.0 * val


def monotonicity_onset(pair):
    """Largest critical point of f on x > 0 plus one grid cell."""
    return pair.profile.last_critical_point() + float(pair.grid[1] - pair.grid[0])


def node_gaps(zeros, onset):
    z = np.asarray(zeros)
    z = z[z > onset]
    return np.diff(z)


def strictly_decreasing(values):
    values = np.asarray(values)
    return values.size >= 2 and bool(np.all(np.diff(values) < 0))


def strictly_increasing(values):
    values = np.asarray(values)
    return values.size >= 2 and bool(np.all(np.diff(values) > 0))


def slopes_at_zeros(pair, zeros):
    """|psi_plus'| at the given zeros of psi_plus (where it equals gamma/f)."""
    out = []
    f_, df_ = pair.profile.f, pair.profile.df
    for x in zeros:
        g = pair.phase_at(x)
        f = float(f_(x))
        out.append(abs(float(df_(x)) * math.cos(g) - pair.gamma / f * math.sin(g)))
    return np.array(out)


@dataclass
class Check:
    value: object
    threshold: object
    passed: bool

    def as_dict(self):
        return {"value": self.value, "threshold": self.threshold, "pass": self.passed}


@dataclass
class VerificationReport:
    """Outcome of the invariant battery with the witnesses behind each verdict."""

    residual_max_plus: Check
    residual_max_minus: Check
    wronskian_drift: Check
    wronskian_value: Check
    interlace_ok: Check
    orthogonality: Check
    node_spacing_monotone: Check
    slope_growth: Check
    witness: dict = field(default_factory=dict)

    CHECKS = (
        "residual_max_plus",
        "residual_max_minus",
        "wronskian_drift",
        "wronskian_value",
        "interlace_ok",
        "orthogonality",
        "node_spacing_monotone",
        "slope_growth",
    )

    @property
    def passed(self):
        return all(getattr(self, name).passed for name in self.CHECKS)

    def failures(self):
        return [name for name in self.CHECKS if not getattr(self, name).passed]

    def to_dict(self):
        doc = {name: getattr(self, name).as_dict() for name in self.CHECKS}
        doc["all_pass"] = self.passed
        doc["witness"] = {k: _jsonable(v) for k, v in self.witness.items()}
        return doc


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def verify_pair(pair, window=None, min_zeros=3):
    """Run every invariant check on ``pair`` and collect a report."""
    res_plus = residual_array(pair, Which.PLUS)
    res_minus = residual_array(pair, Which.MINUS)
    scan = wronskian_scan(pair)
    zp = find_zeros(pair, Which.PLUS, window)
    zm = find_zeros(pair, Which.MINUS, window)
    n_zeros = zp.size + zm.size
    interlaced = n_zeros >= min_zeros and check_interlacing(zp, zm)

    onset = monotonicity_onset(pair)
    gaps = node_gaps(zp, onset)
    tail_zeros = zp[zp > onset]
    slopes = slopes_at_zeros(pair, tail_zeros)
    expected_slopes = pair.gamma / pair.profile.f(tail_zeros) if tail_zeros.size else np.empty(0)

    gaps_ok = strictly_decreasing(gaps)
    slopes_ok = strictly_increasing(slopes)
    ortho = orthogonality(pair)
    return VerificationReport(
        residual_max_plus=Check(float(res_plus.max()), RESIDUAL_TOL, bool(res_plus.max() <= RESIDUAL_TOL)),
        residual_max_minus=Check(float(res_minus.max()), RESIDUAL_TOL, bool(res_minus.max() <= RESIDUAL_TOL)),
        wronskian_drift=Check(scan.drift, WRONSKIAN_DRIFT_TOL, scan.drift <= WRONSKIAN_DRIFT_TOL),
        wronskian_value=Check(
            scan.w0, WRONSKIAN_VALUE_TOL, scan.magnitude_error <= WRONSKIAN_VALUE_TOL
        ),
        interlace_ok=Check(interlaced, True, interlaced),
        orthogonality=Check(ortho, ORTHOGONALITY_TOL, ortho <= ORTHOGONALITY_TOL),
        node_spacing_monotone=Check(gaps_ok, True, gaps_ok),
        slope_growth=Check(slopes_ok, True, slopes_ok),
        witness={
            "residual_argmax_plus": float(pair.grid[int(np.argmax(res_plus))]),
            "residual_argmax_minus": float(pair.grid[int(np.argmax(res_minus))]),
            "wronskian_expected": pair.wronskian_const,
            "wronskian_magnitude_error": scan.magnitude_error,
            "zeros_plus": zp,
            "zeros_minus": zm,
            "monotonicity_onset": onset,
            "node_gaps": gaps,
            "slopes_at_zeros": slopes,
            "slopes_expected": expected_slopes,
        },
    )


__all__ = [
    "VerificationReport",
    "check_interlacing",
    "find_zeros",
    "norm_tail",
    "orthogonality",
    "schrodinger_residual",
    "verify_pair",
    "wronskian_scan",
]
