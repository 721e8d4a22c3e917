"""
Ansatz-free eigen-solver for the cut-off problem.

The potential is confined to a box [-L, L] with hard walls. Because V is
even, even and odd states decouple; each is shot from x = 0 with Numerov's
recurrence and the Dirichlet condition psi(L) = 0 is imposed by bracketing
and bisecting psi(L; E) in E. Nothing here evaluates the ansatz states, so
agreement with the analytic energies is independent evidence.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import integrate, optimize

from .construct import PairConfig, phase
from .errors import ConvergenceError, ParameterDomainError, ResolutionError

#: at least this many steps per local wavelength
STEPS_PER_WAVELENGTH = 20
RESCALE_LIMIT = 1e100
MAX_RESCALES = 10_000
COLLAPSE_SLOPE = 2.0
COLLAPSE_SLOPE_TOL = 0.05


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@numba.njit(cache=True)
def _numerov_kernel(q, h, even, limit, max_rescales):
    n = q.size
    y = np.empty(n)
    c = h * h / 12.0
    if even:
        y[0] = 1.0
        # mirror symmetry y(-h) = y(h) closes the first step
        y[1] = (1.0 + 5.0 * c * q[0]) / (1.0 - c * q[1])
    else:
        y[0] = 0.0
        # odd start: y(-h) = -y(h), so y(h) only sets the normalisation
        y[1] = h
    rescales = 0
    for i in range(1, n - 1):
        y[i + 1] = (2.0 * (1.0 + 5.0 * c * q[i]) * y[i] - (1.0 - c * q[i - 1]) * y[i - 1]) / (1.0 - c * q[i + 1])
        if abs(y[i + 1]) > limit:
            rescales += 1
            if rescales > max_rescales:
                return y, -1
            for j in range(i + 2):
                y[j] /= limit
    return y, rescales


@dataclass
class BoxProblem:
    """Even potential between hard walls at -L and L, sampled with step ~h.

    ``potential`` is a vectorised callable giving V(x). The actual step is
    ``L / ceil(L / step)`` so that L falls on the grid.
    """

    potential: object
    half_width: float
    step: float
    parity: Parity = Parity.EVEN
    x: np.ndarray = field(init=False, repr=False)
    v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ParameterDomainError(f"half_width must be positive, got {self.half_width!r}")
        if not (math.isfinite(self.step) and 0 < self.step <= self.half_width):
            raise ParameterDomainError(f"step must be in (0, half_width], got {self.step!r}")
        self.parity = Parity(self.parity)
        n = int(math.ceil(self.half_width / self.step - 1e-9))
        self.x = np.linspace(0.0, self.half_width, n + 1)
        self.v = np.asarray(self.potential(self.x), dtype=float) * np.ones_like(self.x)

    @property
    def h(self):
        return float(self.x[1] - self.x[0])

    def with_parity(self, parity):
        return BoxProblem(self.potential, self.half_width, self.step, Parity(parity))

    def check_resolution(self, energy):
        worst = self.h * math.sqrt(float(np.max(np.abs(energy - self.v))))
        if worst > 2.0 * math.pi / STEPS_PER_WAVELENGTH:
            raise ResolutionError(
                f"step {self.h:.3g} gives fewer than {STEPS_PER_WAVELENGTH} points per wavelength at E={energy:.6g}"
            )


@dataclass
class NumerovTrace:
    x: np.ndarray
    psi: np.ndarray
    energy: float
    rescales: int

    @property
    def psi_at_L(self):
        return float(self.psi[-1])

    def nodes(self):
        """Number of sign changes of psi on (0, L)."""
        s = np.sign(self.psi[1:-1])
        s = s[s != 0]
        return int(np.count_nonzero(s[1:] != s[:-1]))


def numerov_integrate(prob, energy, check=True):
    """Integrate psi'' = (V - E) psi from 0 to L with parity initial data.

    Even states start from psi(0) = 1, psi'(0) = 0; odd states from
    psi(0) = 0, psi(h) = h. Growing solutions are rescaled in flight.

    Raises
    ------
    ResolutionError
        The step does not resolve the local wavelength at this energy.
    ConvergenceError
        More than ``MAX_RESCALES`` rescalings were needed.
    """
    if check:
        prob.check_resolution(energy)
    q = prob.v - float(energy)
    psi, rescales = _numerov_kernel(q, prob.h, prob.parity is Parity.EVEN, RESCALE_LIMIT, MAX_RESCALES)
    if rescales < 0:
        raise ConvergenceError("Numerov solution overflowed beyond the rescaling cap")
    return NumerovTrace(prob.x, psi, float(energy), int(rescales))


def _shoot(prob, energy):
    trace = numerov_integrate(prob, energy, check=False)
    # compare across energies on a common scale
    return trace.psi_at_L / max(float(np.max(np.abs(trace.psi))), 1e-300)


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    parity: Parity
    window: tuple
    half_width: float
    step: float
    splitting: float | None = None
    #: True when the window held no sign change of psi(L; E)
    empty: bool = False

    def to_dict(self):
        return {
            "parity": self.parity.value,
            "window": list(self.window),
            "half_width": self.half_width,
            "step": self.step,
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "splitting": self.splitting,
            "empty": self.empty,
        }


def eigen_bisect(prob, window, tol_E=1e-10, n_scan=200):
    """All Dirichlet eigenvalues of ``prob`` inside ``window``.

    psi(L; E) is scanned on ``n_scan`` energies; each sign change is refined
    with Brent's method to ``tol_E``. An empty window is reported through
    ``SpectrumResult.empty`` rather than an exception.
    """
    e_lo, e_hi = map(float, window)
    if not e_lo < e_hi:
        raise ParameterDomainError(f"window must satisfy E_lo < E_hi, got {window!r}")
    if tol_E <= 0:
        raise ParameterDomainError("tol_E must be positive")
    prob.check_resolution(e_lo)
    prob.check_resolution(e_hi)
    energies = np.linspace(e_lo, e_hi, int(n_scan) + 1)
    values = np.array([_shoot(prob, e) for e in energies])
    found = []
    for i in range(energies.size - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            found.append(float(energies[i]))
        elif a * b < 0.0:
            found.append(optimize.brentq(lambda e: _shoot(prob, e), energies[i], energies[i + 1], xtol=tol_E, rtol=4 * np.finfo(float).eps))
    if values[-1] == 0.0:
        found.append(float(energies[-1]))
    return SpectrumResult(
        eigenvalues=np.array(found),
        parity=prob.parity,
        window=(e_lo, e_hi),
        half_width=prob.half_width,
        step=prob.h,
        empty=not found,
    )


def paired_spectrum(potential, half_width, step, window, target, tol_E=1e-10, n_scan=200):
    """Even and odd spectra in one window plus the splitting nearest ``target``.

    Returns
    -------
    even, odd : SpectrumResult
        Both carry ``splitting`` = |E_even - E_odd| for the eigenvalues of
        each parity closest to ``target`` (None if either is empty).
    """
    even = eigen_bisect(BoxProblem(potential, half_width, step, Parity.EVEN), window, tol_E, n_scan)
    odd = eigen_bisect(BoxProblem(potential, half_width, step, Parity.ODD), window, tol_E, n_scan)
    if even.empty or odd.empty:
        return even, odd
    e_even = even.eigenvalues[np.argmin(np.abs(even.eigenvalues - target))]
    e_odd = odd.eigenvalues[np.argmin(np.abs(odd.eigenvalues - target))]
    even.splitting = odd.splitting = float(abs(e_even - e_odd))
    return even, odd


def estimate_level_spacing(prob, energy, delta=0.5):
    """Spacing of same-parity levels near ``energy`` from two trial integrations.

    The node count of psi on (0, L) rises by one per eigenvalue crossed, so
    two integrations at energy +- delta give spacing ~ 2 delta / (node
    difference). delta is halved while the difference exceeds 50 and
    doubled while it is below 2.
    """
    for _ in range(60):
        n_lo = numerov_integrate(prob, energy - delta, check=False).nodes()
        n_hi = numerov_integrate(prob, energy + delta, check=False).nodes()
        diff = abs(n_hi - n_lo)
        if diff < 2:
            delta *= 2.0
        elif diff > 50:
            delta /= 2.0
        else:
            return 2.0 * delta / diff
    raise ConvergenceError("could not estimate the level spacing")


def default_window(prob, energy, fraction=0.25):
    """energy +- ``fraction`` of the local same-parity level spacing."""
    spacing = estimate_level_spacing(prob, energy)
    return (energy - fraction * spacing, energy + fraction * spacing)


def node_half_width(profile, gamma, m, parity):
    """Half-width L with g(L) = (m + 1/2) pi (even) or m pi (odd).

    Walls at such an L sit on a node of the exact psi_plus (even) or
    psi_minus (odd), which makes the analytic energy an exact box eigenvalue.
    """
    parity = Parity(parity)
    target = (m + 0.5) * math.pi if parity is Parity.EVEN else m * math.pi
    if target <= 0 or gamma <= 0:
        raise ParameterDomainError("need gamma > 0 and a positive target phase")
    cfg = PairConfig(gamma)
    hi = 1.0
    while phase(profile, cfg, hi) < target:
        hi *= 2.0
        if hi > 1e6:
            raise ConvergenceError("phase never reaches the target")
    return optimize.brentq(lambda x: phase(profile, cfg, x) - target, 0.0, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def potential_extrema(potential, x_max, n=4001):
    """Local maxima and minima of an even potential on (0, x_max), refined by bounded minimisation."""
    x = np.linspace(0.0, x_max, n)
    v = np.asarray(potential(x), dtype=float)
    out = {"maxima": [], "minima": []}
    for i in range(1, n - 1):
        if v[i] > v[i - 1] and v[i] >= v[i + 1]:
            r = optimize.minimize_scalar(lambda t: -float(potential(t)), bounds=(x[i - 1], x[i + 1]), method="bounded", options={"xatol": 1e-12})
            out["maxima"].append(float(r.x))
        elif v[i] < v[i - 1] and v[i] <= v[i + 1]:
            r = optimize.minimize_scalar(lambda t: float(potential(t)), bounds=(x[i - 1], x[i + 1]), method="bounded", options={"xatol": 1e-12})
            out["minima"].append(float(r.x))
    return out


@dataclass
class CollapseStudy:
    gammas: np.ndarray
    ratios: np.ndarray
    slope: float
    window_X: float

    @property
    def passed(self):
        return abs(self.slope - COLLAPSE_SLOPE) <= COLLAPSE_SLOPE_TOL

    def rows(self):
        return list(zip(self.gammas.tolist(), self.ratios.tolist()))

    def to_dict(self):
        return {
            "window_X": self.window_X,
            "gammas": self.gammas.tolist(),
            "ratios": self.ratios.tolist(),
            "slope": self.slope,
            "expected_slope": COLLAPSE_SLOPE,
            "slope_tol": COLLAPSE_SLOPE_TOL,
            "pass": self.passed,
        }


def windowed_odd_weight(profile, gamma, window_X, tol=1e-13):
    """int_{-X}^{X} psi_minus**2 / (B**2 int_{-X}^{X} f**2) for a pair with coupling gamma.

    The ratio does not depend on B. Both integrands are even, so the
    half-window is integrated.
    """
    if window_X <= 0:
        return 0.0
    cfg = PairConfig(gamma)
    num, _ = integrate.quad(
        lambda t: float(profile.f(t)) ** 2 * math.sin(phase(profile, cfg, t)) ** 2,
        0.0, window_X, epsabs=0.0, epsrel=tol, limit=400,
    )
    den, _ = integrate.quad(lambda t: float(profile.f(t)) ** 2, 0.0, window_X, epsabs=0.0, epsrel=tol, limit=400)
    return num / den


def gamma_collapse_study(profile, gamma_list, window_X):
    """Windowed weight of the odd state as gamma -> 0, with its log-log slope.

    For small gamma, psi_minus ~ B gamma f int_0^x f**-2, so the ratio scales
    as gamma**2.
    """
    gammas = np.asarray(gamma_list, dtype=float)
    if gammas.size < 2 or np.any(gammas <= 0):
        raise ParameterDomainError("need at least two positive gammas")
    if np.any(np.diff(gammas) >= 0):
        raise ParameterDomainError("gammas must be strictly decreasing")
    ratios = np.array([windowed_odd_weight(profile, g, window_X) for g in gammas])
    slope = float(np.polyfit(np.log(gammas), np.log(ratios), 1)[0])
    return CollapseStudy(gammas=gammas, ratios=ratios, slope=slope, window_X=float(window_X))
