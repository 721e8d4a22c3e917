"""
Degenerate parity pairs built from an envelope profile.

Given f, the pair is psi_plus = f cos g and psi_minus = B f sin g with the
phase g(x) = gamma * int_0^x f**-2, and both solve the Schroedinger equation
psi'' = (V - E) psi for

    V - E = f''/f - gamma**2 / f**4.

The Wronskian psi_minus psi_plus' - psi_plus psi_minus' equals -B*gamma
everywhere, so the two states are independent whenever gamma > 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from .errors import ParameterDomainError, UnsupportedLimitError
from .profiles import Profile, SechPowerProfile, phase_quadrature


class EnergyRef(enum.Enum):
    """How the energy E of the pair is fixed."""

    #: shift V so that V(0) = 0
    ZERO_AT_ORIGIN = "zero-at-origin"
    #: V = f''/f - gamma**2/f**4 + E with E = -lim f''/f (0 if the limit diverges)
    AS_GIVEN = "as-given"


@dataclass(frozen=True)
class PairConfig:
    gamma: float
    b_coeff: float = 1.0
    energy_ref: EnergyRef = EnergyRef.ZERO_AT_ORIGIN

    def __post_init__(self):
        gamma = float(self.gamma)
        if not math.isfinite(gamma) or gamma < 0:
            raise ParameterDomainError(f"gamma must be finite and >= 0, got {self.gamma!r}")
        b = float(self.b_coeff)
        if not math.isfinite(b) or b == 0:
            raise ParameterDomainError(f"b_coeff must be finite and nonzero, got {self.b_coeff!r}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "b_coeff", b)
        object.__setattr__(self, "energy_ref", EnergyRef(self.energy_ref))


@dataclass(frozen=True)
class GridSpec:
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_max) and self.x_max > 0):
            raise ParameterDomainError(f"x_max must be positive, got {self.x_max!r}")
        if int(self.n_points) != self.n_points or self.n_points < 3 or self.n_points % 2 == 0:
            raise ParameterDomainError(
                f"n_points must be an odd integer >= 3 so x=0 is a grid point, got {self.n_points!r}"
            )

    def grid(self):
        x = np.linspace(-self.x_max, self.x_max, int(self.n_points))
        # exact mirror symmetry and an exact zero at the centre
        half = int(self.n_points) // 2
        x[half] = 0.0
        x[:half] = -x[: half : -1]
        return x


def _grid_spec(spec):
    if isinstance(spec, GridSpec):
        return spec
    if isinstance(spec, dict):
        return GridSpec(float(spec["x_max"]), spec["n_points"])
    x_max, n_points = spec
    return GridSpec(float(x_max), n_points)


@dataclass(frozen=True, eq=False)
class DegeneratePair:
    """Sampled degenerate pair on a symmetric grid.

    ``v_minus_e`` holds V(x) - E; the absolute potential is ``potential``.
    ``phase`` is g on the grid. ``wronskian_const`` is the predicted constant
    value -B*gamma of psi_minus psi_plus' - psi_plus psi_minus'.
    """

    profile: Profile
    config: PairConfig
    grid: np.ndarray
    v_minus_e: np.ndarray
    energy: float
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    phase: np.ndarray
    wronskian_const: float
    label: str = field(default="")

    @property
    def potential(self):
        return self.v_minus_e + self.energy

    @property
    def gamma(self):
        return self.config.gamma

    @property
    def b_coeff(self):
        return self.config.b_coeff

    def with_fault(self, array, index, delta):
        """Copy of the pair with ``array[index] += delta`` (for fault-injection checks)."""
        values = np.array(getattr(self, array), dtype=float)
        values[index] += delta
        return replace(self, **{array: values})

    def phase_at(self, x):
        """g at arbitrary x inside the grid, continued from the nearest sample."""
        p, gamma = self.profile, self.config.gamma
        if p.has_closed_phase:
            return float(p.phase_closed_form(x, gamma))
        i = int(np.argmin(np.abs(self.grid - x)))
        x0 = float(self.grid[i])
        if x == x0:
            return float(self.phase[i])
        return float(self.phase[i]) + _phase_between(p, gamma, x0, x)

    def evaluate(self, which, x):
        """psi_plus or psi_minus at arbitrary x (scalar)."""
        f = float(self.profile.f(x))
        g = self.phase_at(x)
        if Which(which) is Which.PLUS:
            return f * math.cos(g)
        return self.config.b_coeff * f * math.sin(g)

    def derivatives(self, which):
        """Analytic (psi', psi'') on the grid, from f, f', f'' and the stored phase."""
        f, df, d2f = self.profile.eval(self.grid)
        gamma, b = self.config.gamma, self.config.b_coeff
        g = self.phase
        dg = gamma / f**2
        d2g = -2.0 * gamma * df / f**3
        c, s = np.cos(g), np.sin(g)
        if Which(which) is Which.PLUS:
            d1 = df * c - f * dg * s
            d2 = (d2f - f * dg**2) * c - (2 * df * dg + f * d2g) * s
            return d1, d2
        d1 = b * (df * s + f * dg * c)
        d2 = b * ((d2f - f * dg**2) * s + (2 * df * dg + f * d2g) * c)
        return d1, d2

    def states(self, which):
        return self.psi_plus if Which(which) is Which.PLUS else self.psi_minus


class Which(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


def _phase_between(profile, gamma, x0, x1):
    val, _ = integrate.quad(lambda t: 1.0 / float(profile.f(t)) ** 2, x0, x1, epsabs=1e-14, epsrel=1e-13)
    return gamma * val


def phase(profile, cfg, x, tol=1e-12):
    """g(x) = gamma * int_0^x f**-2 dx' (odd in x, g(0) = 0).

    Uses the family's closed form when one exists, adaptive quadrature
    otherwise. Accepts scalars or arrays.
    """
    gamma = cfg.gamma if isinstance(cfg, PairConfig) else float(cfg)
    if profile.has_closed_phase:
        g = profile.phase_closed_form(x, gamma)
        return float(g) if np.ndim(g) == 0 else g
    return phase_quadrature(profile, gamma, x, tol)


def v_minus_e(profile, gamma, x):
    """V(x) - E = f''/f - gamma**2/f**4."""
    f, _, d2f = profile.eval(x)
    return d2f / f - gamma**2 / f**4


def pair_energy(profile, cfg):
    """Energy of the pair under the configured reference convention."""
    if cfg.energy_ref is EnergyRef.ZERO_AT_ORIGIN:
        return -float(v_minus_e(profile, cfg.gamma, 0.0))
    limit = profile.curvature_limit
    return -limit if limit is not None else 0.0


def potential_function(profile, cfg):
    """Return ``(V, E)``: a vectorised callable for the absolute potential and the pair energy."""
    energy = pair_energy(profile, cfg)
    gamma = cfg.gamma

    def potential(x):
        return v_minus_e(profile, gamma, x) + energy

    return potential, energy


def build_pair(profile, cfg, grid_spec, tol=1e-12):
    """Sample the degenerate pair of ``profile`` on a symmetric uniform grid.

    Parameters
    ----------
    profile : Profile
    cfg : PairConfig
    grid_spec : GridSpec, dict or (x_max, n_points)
        ``n_points`` must be odd so that x = 0 is sampled.
    """
    spec = _grid_spec(grid_spec)
    x = spec.grid()
    lo, hi = profile.domain
    if x[0] < lo or x[-1] > hi:
        raise ParameterDomainError(f"grid [-{spec.x_max}, {spec.x_max}] exceeds profile domain [{lo}, {hi}]")
    f = profile.f(x)
    g = phase(profile, cfg, x, tol)
    g = 0.5 * (g - g[::-1])  # exact oddness on the mirrored grid
    energy = pair_energy(profile, cfg)
    vme = v_minus_e(profile, cfg.gamma, x)
    vme = 0.5 * (vme + vme[::-1])
    f = 0.5 * (f + f[::-1])
    return DegeneratePair(
        profile=profile,
        config=cfg,
        grid=x,
        v_minus_e=vme,
        energy=energy,
        psi_plus=f * np.cos(g),
        psi_minus=cfg.b_coeff * f * np.sin(g),
        phase=g,
        wronskian_const=-cfg.b_coeff * cfg.gamma,
        label=f"{profile!r}, gamma={cfg.gamma!r}",
    )


def koley_kar_a2(nu):
    """Coefficient A2 = (nu/2)(nu/2 + 1) of the sech**2 term."""
    return 0.5 * nu * (0.5 * nu + 1.0)


def koley_kar_potential(nu, a1):
    """V(x) = -(A1 cosh(x)**(2 nu) + A2 sech(x)**2), as a vectorised callable."""
    nu = float(nu)
    a1 = float(a1)
    a2 = koley_kar_a2(nu)

    def potential(x):
        x = np.asarray(x, dtype=float)
        return -(a1 * np.cosh(x) ** (2.0 * nu) + a2 / np.cosh(x) ** 2)

    return potential


def koley_kar_pair(nu, a1, grid_spec):
    """Koley-Kar pair: sech-power profile with gamma = sqrt(A1), literal potential.

    The potential array is taken from the closed expression
    ``-(A1 cosh**(2 nu) + A2 sech**2)`` rather than from f''/f, and the
    energy is -nu**2/4; residual checks then confirm the two agree.
    """
    nu = float(nu)
    a1 = float(a1)
    if not (math.isfinite(a1) and a1 > 0):
        raise ParameterDomainError(f"a1 must be positive, got {a1!r}")
    profile = SechPowerProfile(nu)
    cfg = PairConfig(gamma=math.sqrt(a1), b_coeff=1.0, energy_ref=EnergyRef.AS_GIVEN)
    pair = build_pair(profile, cfg, grid_spec)
    energy = -0.25 * nu**2
    v = koley_kar_potential(nu, a1)(pair.grid)
    return replace(pair, v_minus_e=v - energy, energy=energy, label=f"koley-kar(nu={nu!r}, a1={a1!r})")


def gamma_zero_potential(profile, grid_spec):
    """The bounded gamma = 0 potential f''/f, shifted to vanish at infinity.

    f itself is then a zero-energy bound state of the returned potential.

    Returns
    -------
    grid, v : ndarray

    Raises
    ------
    UnsupportedLimitError
        f''/f has no finite limit at infinity (for example a Gaussian).
    """
    limit = profile.curvature_limit
    if limit is None:
        raise UnsupportedLimitError(f"{profile!r}: f''/f diverges at infinity")
    x = _grid_spec(grid_spec).grid()
    f, _, d2f = profile.eval(x)
    v = d2f / f - limit
    return x, 0.5 * (v + v[::-1])


def lorentz_v_minus_e(x, a, gamma):
    """V - E of the Lorentzian family written out explicitly."""
    x = np.asarray(x, dtype=float)
    u = x * x + 1.0
    return (2.0 * x * x - 1.0) / u**2 - gamma**2 / a**4 * u**2


__all__ = [
    "DegeneratePair",
    "EnergyRef",
    "GridSpec",
    "PairConfig",
    "Which",
    "build_pair",
    "gamma_zero_potential",
    "koley_kar_a2",
    "koley_kar_pair",
    "koley_kar_potential",
    "lorentz_v_minus_e",
    "pair_energy",
    "phase",
    "potential_function",
    "v_minus_e",
]
