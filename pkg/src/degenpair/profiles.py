"""
Envelope profiles f(x) that seed every degenerate-pair construction.

A profile is a positive, even, square-integrable function with analytic
first and second derivatives. Three analytic families are built in and a
spline-backed ``TabulatedProfile`` covers user-supplied samples.

Classes
-------
* :class:`Profile` : common interface (f, f', f'' and phase helpers).
* :class:`SechPowerProfile` : f = cosh(x)**(-nu/2).
* :class:`GaussianProfile` : f = exp(-alpha x**2).
* :class:`LorentzSqrtProfile` : f = a / sqrt(1 + x**2).
* :class:`TabulatedProfile` : cubic spline through symmetric samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicSpline

from .errors import DivergenceError, ParameterDomainError, QuadratureError


def _positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ParameterDomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


class Profile:
    """Interface shared by all envelope profiles.

    Subclasses implement :meth:`f`, :meth:`df` and :meth:`d2f` as vectorised
    functions of ``x``. Everything else has a sensible default.
    """

    family = "abstract"

    #: closed interval on which the profile is defined
    domain = (-math.inf, math.inf)

    def f(self, x):
        raise NotImplementedError

    def df(self, x):
        raise NotImplementedError

    def d2f(self, x):
        raise NotImplementedError

    def eval(self, x):
        """Return the triple ``(f, f', f'')`` at ``x``."""
        return self.f(x), self.df(x), self.d2f(x)

    @property
    def has_closed_phase(self):
        return False

    def phase_closed_form(self, x, gamma):
        """Closed-form ``gamma * int_0^x f**-2``, or ``None`` if unavailable."""
        return None

    @property
    def curvature_limit(self):
        """Limit of f''/f as |x| -> inf, or ``None`` when it diverges."""
        return None

    def last_critical_point(self):
        """Largest x >= 0 with f'(x) = 0."""
        return 0.0

    def params(self):
        return {}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


@dataclass(frozen=True, repr=False)
class SechPowerProfile(Profile):
    """f(x) = sech(x)**(nu/2); with gamma = sqrt(A1) this yields the Koley-Kar pair."""

    nu: float
    family = "sech-power"

    def __post_init__(self):
        object.__setattr__(self, "nu", _positive("nu", self.nu))

    @staticmethod
    def _log_cosh(x):
        ax = np.abs(x)
        return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)

    def f(self, x):
        return np.exp(-0.5 * self.nu * self._log_cosh(np.asarray(x, dtype=float)))

    def df(self, x):
        x = np.asarray(x, dtype=float)
        return -0.5 * self.nu * np.tanh(x) * self.f(x)

    def d2f(self, x):
        x = np.asarray(x, dtype=float)
        h = 0.5 * self.nu
        sech2 = 1.0 / np.cosh(x) ** 2
        return self.f(x) * (h * h - h * (h + 1.0) * sech2)

    @property
    def has_closed_phase(self):
        return self.nu in (1.0, 2.0)

    def phase_closed_form(self, x, gamma):
        x = np.asarray(x, dtype=float)
        if self.nu == 1.0:
            return gamma * np.sinh(x)
        if self.nu == 2.0:
            return gamma * (0.5 * x + 0.25 * np.sinh(2.0 * x))
        return None

    @property
    def curvature_limit(self):
        return 0.25 * self.nu**2

    def params(self):
        return {"nu": self.nu}


@dataclass(frozen=True, repr=False)
class GaussianProfile(Profile):
    """f(x) = exp(-alpha x**2)."""

    alpha: float
    family = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))

    def f(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-self.alpha * x * x)

    def df(self, x):
        x = np.asarray(x, dtype=float)
        return -2.0 * self.alpha * x * self.f(x)

    def d2f(self, x):
        x = np.asarray(x, dtype=float)
        a = self.alpha
        return (4.0 * a * a * x * x - 2.0 * a) * self.f(x)

    @property
    def has_closed_phase(self):
        return True

    def phase_closed_form(self, x, gamma):
        x = np.asarray(x, dtype=float)
        a = self.alpha
        return gamma * math.sqrt(math.pi / (8.0 * a)) * special.erfi(math.sqrt(2.0 * a) * x)

    def params(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True, repr=False)
class LorentzSqrtProfile(Profile):
    """f(x) = a / sqrt(1 + x**2)."""

    a: float
    family = "lorentz"

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))

    def f(self, x):
        x = np.asarray(x, dtype=float)
        return self.a / np.sqrt(1.0 + x * x)

    def df(self, x):
        x = np.asarray(x, dtype=float)
        return -self.a * x * (1.0 + x * x) ** -1.5

    def d2f(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * (2.0 * x * x - 1.0) * (1.0 + x * x) ** -2.5

    @property
    def has_closed_phase(self):
        return True

    def phase_closed_form(self, x, gamma):
        x = np.asarray(x, dtype=float)
        return gamma / self.a**2 * (x**3 / 3.0 + x)

    @property
    def curvature_limit(self):
        return 0.0

    def params(self):
        return {"a": self.a}


@dataclass(frozen=True, repr=False, eq=False)
class TabulatedProfile(Profile):
    """Cubic-spline profile through samples on a symmetric, increasing grid.

    The samples are symmetrised (averaged with their mirror image) so the
    spline is even to rounding. Derivatives come from the spline itself.
    """

    x: np.ndarray
    values: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False)
    family = "tabulated"

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 5:
            raise ParameterDomainError("tabulated profile needs two equal-length columns of >= 5 samples")
        if not np.all(np.diff(x) > 0):
            raise ParameterDomainError("tabulated x must be strictly increasing")
        scale = max(abs(x[0]), abs(x[-1]))
        if np.max(np.abs(x + x[::-1])) > 1e-9 * scale:
            raise ParameterDomainError("tabulated x must be symmetric about 0")
        if not np.all(np.isfinite(y)) or np.min(y) <= 0.0:
            raise ParameterDomainError("tabulated f must be strictly positive")
        x = 0.5 * (x - x[::-1])
        y = 0.5 * (y + y[::-1])
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "_spline", CubicSpline(x, y))

    @property
    def domain(self):
        return (float(self.x[0]), float(self.x[-1]))

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if np.any(x < lo - 1e-12) or np.any(x > hi + 1e-12):
            raise ParameterDomainError(f"x outside tabulated range [{lo}, {hi}]")
        return x

    def f(self, x):
        return self._spline(self._check(x))

    def df(self, x):
        return self._spline(self._check(x), 1)

    def d2f(self, x):
        return self._spline(self._check(x), 2)

    def last_critical_point(self):
        roots = self._spline.derivative().roots(extrapolate=False)
        roots = roots[roots > 0]
        return float(roots.max()) if roots.size else 0.0

    def params(self):
        return {"n_samples": int(self.x.size), "x_max": float(self.x[-1])}


FAMILIES = {
    "sech-power": SechPowerProfile,
    "gaussian": GaussianProfile,
    "lorentz": LorentzSqrtProfile,
}


def make_profile(family, **params):
    """Build a profile from a family name and its parameters.

    Parameters
    ----------
    family : str
        One of ``"sech-power"`` (``nu``), ``"gaussian"`` (``alpha``),
        ``"lorentz"`` (``a``) or ``"tabulated"`` (``x``, ``values`` or
        ``path``).

    Raises
    ------
    ParameterDomainError
        Unknown family, missing or non-positive parameters.
    """
    if family == "tabulated":
        if "path" in params:
            return load_tabulated(params["path"])
        try:
            return TabulatedProfile(params["x"], params["values"])
        except KeyError as exc:
            raise ParameterDomainError(f"tabulated profile missing {exc}") from None
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise ParameterDomainError(
            f"unknown profile family {family!r}; expected one of "
            f"{sorted(FAMILIES) + ['tabulated']}"
        ) from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise ParameterDomainError(str(exc)) from None


def load_tabulated(path, column=None):
    """Load a tabulated profile from a text file.

    Plain files hold two whitespace-delimited columns ``x f``. A CSV with a
    header line (such as ``construct`` output) is read when ``column`` names
    the column to use as f.
    """
    path = Path(path)
    if column is None:
        data = np.loadtxt(path, ndmin=2)
        if data.shape[1] != 2:
            raise ParameterDomainError(f"{path}: expected two columns, found {data.shape[1]}")
        return TabulatedProfile(data[:, 0], data[:, 1])
    data = np.genfromtxt(path, delimiter=",", names=True)
    if column not in data.dtype.names:
        raise ParameterDomainError(f"{path}: no column {column!r}")
    return TabulatedProfile(data["x"], data[column])


def norm_squared(profile, tol=1e-12, max_doublings=80):
    """Integral of f**2 over the real line.

    The half-line integral is accumulated over [0, 1], [1, 2], [2, 4], ...
    Once successive increments shrink geometrically, the remaining tail is
    extrapolated as a geometric series and the loop stops when that
    remainder drops below ``tol/4``. Increments that stop shrinking signal a
    non-integrable tail.

    Raises
    ------
    DivergenceError
        The truncated integrals keep growing.
    QuadratureError
        The accumulated quadrature error estimate exceeds ``tol``.
    """
    if tol <= 0:
        raise ParameterDomainError("tol must be positive")

    def f2(t):
        return float(profile.f(t)) ** 2

    def piece(a, b):
        return integrate.quad(f2, a, b, epsabs=tol / 64, epsrel=1e-13, limit=500)

    lo, hi = profile.domain
    if math.isfinite(hi):
        val, err = piece(0.0, hi)
        if 2 * err > tol:
            raise QuadratureError("norm_squared did not converge", 2 * err)
        return 2.0 * val

    total, err_total = piece(0.0, 1.0)
    X, prev = 1.0, None
    for _ in range(max_doublings):
        inc, err = piece(X, 2 * X)
        total += inc
        err_total += err
        X *= 2
        ratio = inc / prev if prev else 1.0
        prev = inc
        if inc == 0.0:
            break
        if ratio < 0.9:
            remainder = inc * ratio / (1.0 - ratio)
            if remainder < tol / 8:
                total += remainder
                break
        elif X > 2.0**10:
            raise DivergenceError(f"f**2 tail does not decay (increment {inc:.3e} over [{X / 2:g}, {X:g}])")
    else:
        raise DivergenceError("f**2 tail did not fall below tolerance")
    if 2 * err_total > tol:
        raise QuadratureError("norm_squared did not converge", 2 * err_total)
    return 2.0 * total


def phase_quadrature(profile, gamma, x, tol=1e-12):
    """``gamma * int_0^x f**-2`` by adaptive quadrature, for scalar or array x.

    Array input is integrated cell by cell between consecutive sorted |x|
    values and accumulated, so the cost is one short quadrature per point.
    The per-cell criterion is ``max(tol/n, tol*|cell|)``; the accumulated
    estimate must stay below ``tol * max(1, |g|)``.
    """
    if tol <= 0:
        raise ParameterDomainError("tol must be positive")
    x = np.asarray(x, dtype=float)
    if gamma == 0.0:
        return np.zeros_like(x) if x.ndim else 0.0

    def inv_f2(t):
        return 1.0 / float(profile.f(t)) ** 2

    ax = np.abs(x).ravel()
    nodes, inverse = np.unique(ax, return_inverse=True)
    edges = np.concatenate(([0.0], nodes))
    cell_tol = tol / max(1, nodes.size)
    cum = np.empty(nodes.size)
    acc = 0.0
    err_total = 0.0
    for i in range(nodes.size):
        a, b = edges[i], edges[i + 1]
        if b > a:
            val, err = integrate.quad(inv_f2, a, b, epsabs=cell_tol, epsrel=tol, limit=200)
            acc += val
            err_total += err
        cum[i] = acc
    g_abs = gamma * cum
    if gamma * err_total > tol * max(1.0, float(np.max(np.abs(g_abs), initial=0.0))):
        raise QuadratureError("phase quadrature did not converge", gamma * err_total)
    g = np.sign(x.ravel()) * g_abs[inverse]
    return g.reshape(x.shape) if x.ndim else float(g[0])
