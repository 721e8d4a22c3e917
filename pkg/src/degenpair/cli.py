"""Command-line interface: ``degenpair <subcommand> [options]``.

Exit codes: 0 success, 1 a check failed, 2 configuration error,
3 numerical-convergence error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import construct, spectra, verify, wellscape
from .errors import (
    ConvergenceError,
    DivergenceError,
    ParameterDomainError,
    QuadratureError,
    ResolutionError,
    UnsupportedLimitError,
)
from .profiles import load_tabulated, make_profile

log = logging.getLogger("degenpair")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

KK_DEFAULT = {"nu": 1.0, "a1": 1.0 / 144.0}
PAIR_FAMILIES = ("sech-power", "gaussian", "lorentz", "tabulated")


class ConfigError(Exception):
    pass


def real(text):
    """Parse a real number, accepting exact rationals such as ``1/144``."""
    try:
        value = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def real_list(text):
    try:
        return [real(t) for t in text.split(",") if t.strip()]
    except argparse.ArgumentTypeError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}") from None


def fmt(value):
    """17 significant digits: every float round-trips exactly."""
    return format(float(value), ".17g")


# --------------------------------------------------------------------------- parser


def _add_output(p, default_format):
    p.add_argument("--config", metavar="PATH", help="key = value file; flags override it")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--out", "-o", default="-", metavar="PATH", help="output file (default stdout)")


def _add_pair(p, xmax, n):
    p.add_argument("--family", choices=PAIR_FAMILIES, default="sech-power")
    p.add_argument("--nu", type=real, default=KK_DEFAULT["nu"])
    p.add_argument("--alpha", type=real, default=1.0)
    p.add_argument("--a", type=real, default=1.0)
    p.add_argument("--a1", type=real, help="Koley-Kar A1 (sech-power only; sets gamma = sqrt(A1))")
    p.add_argument("--gamma", type=real)
    p.add_argument("--b", type=real, default=1.0)
    p.add_argument("--energy-ref", choices=[e.value for e in construct.EnergyRef], default="zero-at-origin")
    p.add_argument("--table", metavar="PATH", help="profile samples for --family tabulated")
    p.add_argument("--table-column", help="CSV column to use as f (default: plain two-column file)")
    p.add_argument("--xmax", type=real, default=xmax)
    p.add_argument("--n", type=int, default=n)


def build_parser():
    parser = argparse.ArgumentParser(prog="degenpair", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="sample a degenerate pair (default: Koley-Kar nu=1, A1=1/144)")
    _add_pair(p, xmax=6.0, n=2001)
    _add_output(p, "csv")

    p = sub.add_parser("verify", help="run the invariant battery on a pair")
    _add_pair(p, xmax=8.0, n=4001)
    p.add_argument("--window", type=real_list, help="lo,hi window for zero finding")
    p.add_argument("--inject-fault", action="store_true", help="perturb psi_plus at one grid point by 1e-3")
    _add_output(p, "json")

    p = sub.add_parser("wellscape", help="classify the Lorentzian well landscape")
    p.add_argument("--a", type=real, default=1.0)
    p.add_argument("--gamma", type=real)
    p.add_argument("--gamma-sq", type=real)
    p.add_argument("--sweep", type=real_list, metavar="G2,G2,...", help="gamma**2 grid; emits a CSV table")
    _add_output(p, "json")

    p = sub.add_parser("spectrum", help="Numerov box eigenvalues")
    p.add_argument("--family", choices=("free",) + PAIR_FAMILIES, default="sech-power")
    p.add_argument("--nu", type=real, default=KK_DEFAULT["nu"])
    p.add_argument("--alpha", type=real, default=1.0)
    p.add_argument("--a", type=real, default=1.0)
    p.add_argument("--a1", type=real)
    p.add_argument("--gamma", type=real)
    p.add_argument("--energy-ref", choices=[e.value for e in construct.EnergyRef], default="zero-at-origin")
    p.add_argument("--table", metavar="PATH")
    p.add_argument("--table-column")
    p.add_argument("--L", type=real, dest="half_width", help="wall position (default: node --node of psi)")
    p.add_argument("--node", type=int, default=0, help="place the wall on node m of the exact state")
    p.add_argument("--h", type=real, default=1e-3, dest="step")
    p.add_argument("--parity", choices=("even", "odd", "both"), default="even")
    p.add_argument("--emin", type=real)
    p.add_argument("--emax", type=real)
    p.add_argument("--tol-e", type=real, default=1e-10)
    p.add_argument("--n-scan", type=int, default=200)
    p.add_argument("--trace", metavar="PATH", help="write the Numerov trace x,psi at the eigenvalue nearest E")
    _add_output(p, "json")

    p = sub.add_parser("figure2", help="gamma = 0 volcano potential (x,v)")
    p.add_argument("--family", choices=("lorentz", "sech-power"), default="lorentz")
    p.add_argument("--a", type=real, default=1.0)
    p.add_argument("--nu", type=real, default=1.0)
    p.add_argument("--xmax", type=real, default=10.0)
    p.add_argument("--n", type=int, default=2001)
    _add_output(p, "csv")

    p = sub.add_parser("sweep", help="gamma -> 0 collapse of the odd state")
    p.add_argument("--family", choices=PAIR_FAMILIES, default="lorentz")
    p.add_argument("--nu", type=real, default=1.0)
    p.add_argument("--alpha", type=real, default=1.0)
    p.add_argument("--a", type=real, default=1.0)
    p.add_argument("--table", metavar="PATH")
    p.add_argument("--table-column")
    p.add_argument("--gammas", type=real_list, default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--window-x", type=real, default=2.0)
    _add_output(p, "csv")
    return parser


# --------------------------------------------------------------------------- config file

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _subparser(parser, name):
    for action in parser._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise KeyError(name)


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    values = read_config(args.config)
    sub = _subparser(parser, args.command)
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in values.items():
        action = actions.get(key) or actions.get({"l": "half_width", "h": "step"}.get(key, ""))
        if action is None or key in ("config", "help"):
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in _TRUE | _FALSE:
                raise ConfigError(f"config key {key!r} expects a boolean")
            defaults[action.dest] = value.lower() in _TRUE
        else:
            if action.choices is not None and value not in action.choices:
                raise ConfigError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
            if action.type is not None:
                try:
                    defaults[action.dest] = action.type(value)
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise ConfigError(f"config key {key!r}: {exc}") from None
            else:
                defaults[action.dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# --------------------------------------------------------------------------- builders


def _profile(args):
    if args.family == "tabulated":
        if not args.table:
            raise ParameterDomainError("--family tabulated needs --table PATH")
        try:
            return load_tabulated(args.table, args.table_column)
        except OSError as exc:
            raise ConfigError(f"cannot read table {args.table}: {exc}") from None
    params = {"sech-power": {"nu": args.nu}, "gaussian": {"alpha": args.alpha}, "lorentz": {"a": args.a}}[args.family]
    return make_profile(args.family, **params)


def _is_koley_kar(args):
    if args.a1 is not None and args.family != "sech-power":
        raise ParameterDomainError("--a1 is only meaningful with --family sech-power")
    if args.a1 is not None and args.gamma is not None:
        raise ParameterDomainError("give either --a1 or --gamma, not both")
    return args.family == "sech-power" and args.gamma is None


def _pair_from_args(args):
    grid = construct.GridSpec(args.xmax, args.n)
    if _is_koley_kar(args):
        if args.b != 1.0:
            raise ParameterDomainError("the Koley-Kar pair fixes B = 1; use --gamma for other B")
        a1 = KK_DEFAULT["a1"] if args.a1 is None else args.a1
        return construct.koley_kar_pair(args.nu, a1, grid)
    if args.gamma is None:
        raise ParameterDomainError(f"--family {args.family} needs --gamma")
    cfg = construct.PairConfig(args.gamma, args.b, construct.EnergyRef(args.energy_ref))
    return construct.build_pair(_profile(args), cfg, grid)


def _check_writable(path):
    if path in (None, "-"):
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise ConfigError(f"cannot write to {path}")
    if os.path.isdir(path):
        raise ConfigError(f"{path} is a directory")


def _emit(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(doc):
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# --------------------------------------------------------------------------- commands


def cmd_construct(args):
    pair = _pair_from_args(args)
    v = pair.potential
    e = pair.energy
    if args.format == "json":
        doc = {
            "label": pair.label,
            "energy": e,
            "gamma": pair.gamma,
            "b": pair.b_coeff,
            "wronskian_const": pair.wronskian_const,
            "x": pair.grid,
            "v": v,
            "psi_plus": pair.psi_plus,
            "psi_minus": pair.psi_minus,
        }
        return _json(doc), EXIT_OK
    rows = ((x, vv, p, m, e) for x, vv, p, m in zip(pair.grid, v, pair.psi_plus, pair.psi_minus))
    return _csv(["x", "v", "psi_plus", "psi_minus", "energy"], rows), EXIT_OK


def fault_index(n):
    """Grid index perturbed by ``--inject-fault``: off-centre and interior."""
    return n // 2 + n // 7


def cmd_verify(args):
    pair = _pair_from_args(args)
    if args.inject_fault:
        pair = pair.with_fault("psi_plus", fault_index(pair.grid.size), 1e-3)
    if args.window is not None and len(args.window) != 2:
        raise ParameterDomainError("--window takes lo,hi")
    report = verify.verify_pair(pair, window=args.window)
    code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    if args.format == "csv":
        rows = []
        for name in report.CHECKS:
            c = getattr(report, name)
            rows.append([name, _cell(c.value), _cell(c.threshold), str(bool(c.passed)).lower()])
        return _csv(["check", "value", "threshold", "pass"], rows), code
    doc = report.to_dict()
    doc["label"] = pair.label
    doc["fault_injected"] = bool(args.inject_fault)
    return _json(doc), code


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    return fmt(value)


def cmd_wellscape(args):
    if args.sweep is not None:
        if not args.sweep:
            raise ParameterDomainError("--sweep needs at least one gamma**2")
        reports = wellscape.classify_sweep(args.a, gamma_sq_grid=args.sweep)
        rows = []
        for r in reports:
            xm = r.x_maxima[1] if r.x_maxima else ""
            rows.append([
                fmt(r.gamma_sq),
                r.regime.value,
                "" if r.z_root is None else fmt(r.z_root),
                "" if xm == "" else fmt(xm),
                "" if r.barrier_height_rel is None else fmt(r.barrier_height_rel),
            ])
        if args.format == "json":
            return _json([r.to_dict() for r in reports]), EXIT_OK
        return _csv(["gamma_sq", "regime", "z", "x_max", "barrier"], rows), EXIT_OK
    if args.gamma is None and args.gamma_sq is None:
        raise ParameterDomainError("wellscape needs --gamma, --gamma-sq or --sweep")
    report = wellscape.solve_maxima(args.a, args.gamma, gamma_sq=args.gamma_sq)
    doc = report.to_dict()
    if args.format == "csv":
        flat = [[k, _cell(v) if isinstance(v, float) else json.dumps(v)] for k, v in doc.items()]
        return _csv(["key", "value"], flat), EXIT_OK
    return _json(doc), EXIT_OK


def _spectrum_setup(args):
    """Potential callable, analytic energy (or None) and default wall position."""
    if args.family == "free":
        return (lambda x: np.zeros_like(np.asarray(x, dtype=float))), None, math.pi
    if _is_koley_kar(args):
        a1 = KK_DEFAULT["a1"] if args.a1 is None else args.a1
        profile = make_profile("sech-power", nu=args.nu)
        gamma = math.sqrt(a1)
        potential = construct.koley_kar_potential(args.nu, a1)
        energy = -0.25 * args.nu**2
    else:
        if args.gamma is None:
            raise ParameterDomainError(f"--family {args.family} needs --gamma")
        profile = _profile(args)
        gamma = args.gamma
        cfg = construct.PairConfig(gamma, 1.0, construct.EnergyRef(args.energy_ref))
        potential, energy = construct.potential_function(profile, cfg)
    parity = "odd" if args.parity == "odd" else "even"
    m = args.node + (1 if parity == "odd" else 0)
    L = spectra.node_half_width(profile, gamma, m, parity)
    return potential, energy, L


def cmd_spectrum(args):
    potential, energy, default_L = _spectrum_setup(args)
    L = default_L if args.half_width is None else args.half_width
    target = energy if energy is not None else 0.0
    if (args.emin is None) != (args.emax is None):
        raise ParameterDomainError("give both --emin and --emax or neither")
    probe = spectra.BoxProblem(potential, L, args.step, spectra.Parity.EVEN)
    if args.emin is not None:
        window = (args.emin, args.emax)
    elif energy is None:
        window = (0.1, 3.0)
    else:
        window = spectra.default_window(probe, energy, 1.0 if args.parity == "both" else 0.25)
    if args.parity == "both":
        results = spectra.paired_spectrum(potential, L, args.step, window, target, args.tol_e, args.n_scan)
    else:
        prob = spectra.BoxProblem(potential, L, args.step, spectra.Parity(args.parity))
        results = (spectra.eigen_bisect(prob, window, args.tol_e, args.n_scan),)
    doc = {
        "half_width": L,
        "step": probe.h,
        "analytic_energy": energy,
        "results": [r.to_dict() for r in results],
        "splitting": results[0].splitting,
    }
    if args.trace:
        best = None
        for r in results:
            for e in r.eigenvalues:
                if best is None or abs(e - target) < abs(best[1] - target):
                    best = (r.parity, float(e))
        if best is not None:
            tr = spectra.numerov_integrate(spectra.BoxProblem(potential, L, args.step, best[0]), best[1])
            _emit(args.trace, _csv(["x", "psi"], zip(tr.x, tr.psi)))
            doc["trace"] = {"path": args.trace, "parity": best[0].value, "energy": best[1]}
    if args.format == "csv":
        rows = [[r.parity.value, fmt(e)] for r in results for e in r.eigenvalues]
        return _csv(["parity", "eigenvalue"], rows), EXIT_OK
    return _json(doc), EXIT_OK


def cmd_figure2(args):
    profile = make_profile("lorentz", a=args.a) if args.family == "lorentz" else make_profile("sech-power", nu=args.nu)
    x, v = construct.gamma_zero_potential(profile, construct.GridSpec(args.xmax, args.n))
    if args.format == "json":
        return _json({"x": x, "v": v}), EXIT_OK
    return _csv(["x", "v"], zip(x, v)), EXIT_OK


def cmd_sweep(args):
    profile = _profile(args)
    study = spectra.gamma_collapse_study(profile, args.gammas, args.window_x)
    code = EXIT_OK if study.passed else EXIT_CHECK_FAILED
    if args.format == "json":
        return _json(study.to_dict()), code
    return _csv(["gamma", "ratio"], study.rows()), code


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "wellscape": cmd_wellscape,
    "spectrum": cmd_spectrum,
    "figure2": cmd_figure2,
    "sweep": cmd_sweep,
}


def main(argv=None):
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"degenpair: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse: 0 for --help, 2 for bad flags
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        _check_writable(args.out)
        if getattr(args, "trace", None):
            _check_writable(args.trace)
        text, code = COMMANDS[args.command](args)
        _emit(args.out, text)
    except (ConfigError, ParameterDomainError, UnsupportedLimitError) as exc:
        print(f"degenpair: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, DivergenceError, QuadratureError, ResolutionError) as exc:
        print(f"degenpair: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"degenpair: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if code == EXIT_CHECK_FAILED:
        log.warning("one or more checks failed")
    return code


if __name__ == "__main__":
    sys.exit(main())
