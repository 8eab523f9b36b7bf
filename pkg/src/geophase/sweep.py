"""
Parameter sweeps and trajectory dumps driven by INI-style configuration.

A configuration has the sections ``environment``, ``scenario``, ``sweep``
and ``output``; see ``recipes/`` for complete examples. Numeric values accept
simple arithmetic with ``pi``, ``inf`` and ``sqrt`` (``theta0 = pi/3``).

Sweep CSV columns, in this fixed order::

    <variable>, phi_g_corr, phi_g_uncorr, delta_corr, delta_uncorr, status

``status`` is ``ok``, ``singular`` (the coherence vanishes on the grid) or
``failed`` (any other numerical failure); a failed point never aborts the
sweep. Numbers are written with 17 significant digits.
"""

import ast
import configparser
import math
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from geophase import __version__
from geophase.bosonic import BosonicBath, OhmicSpectralDensity, bath_functions
from geophase.core import (
    BlochState,
    SingularTrajectoryError,
    cycle_time,
    mixed_state_from_unitary,
    rotation_unitary,
    wrap_phase,
)
from geophase.geometric import (
    phase_correction,
    phase_mixed,
    phase_pure,
    uncoupled_mixed_phase,
)
from geophase.kernel import (
    MIN_GRID,
    CorrelationScenario,
    DephasingTrajectory,
    trajectory_on_grid,
)
from geophase.spin import SpinBath

SWEEP_VARIABLES = ("s", "lambda", "beta", "theta0")
SWEEP_COLUMNS = ("phi_g_corr", "phi_g_uncorr", "delta_corr", "delta_uncorr", "status")
TRAJECTORY_COLUMNS = ("t", "gamma", "chi", "chi_dot", "abs_ratio", "arg_ratio", "status")


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


# --- number parsing -----------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "inf": math.inf}
_FUNCS = {"sqrt": math.sqrt}


def parse_number(text):
    """Evaluate a numeric literal or a small arithmetic expression."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ConfigError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(text, mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc


def _number_list(text):
    return tuple(parse_number(v) for v in str(text).split(",") if v.strip())


# --- specification ----------------------------------------------------------------

@dataclass(frozen=True)
class EnvironmentSpec:
    kind: str = "bosonic"
    lam: float = 0.1
    s: float = 1.0
    omega_c: float = 5.0
    n_spins: int = 1
    omega: float = 1.0
    omegas: tuple = ()
    lambdas: tuple = ()

    def build(self, beta):
        if self.kind == "bosonic":
            return BosonicBath(OhmicSpectralDensity(self.lam, self.s, self.omega_c), beta)
        if self.omegas:
            return SpinBath(self.omegas, self.lambdas, beta)
        return SpinBath.homogeneous(self.n_spins, self.lam, self.omega, beta)


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str = "projective"
    theta0: float = math.pi / 3
    phi0: float = 0.0
    angle: float = math.pi / 3
    axis: str = "y"
    beta: float = math.inf
    omega0: float = 1.0


@dataclass(frozen=True)
class SweepSpec:
    environment: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    variable: str = "s"
    start: float = 0.1
    stop: float = 3.0
    count: int = 100
    grid: int = 2048
    times: tuple = ()
    out: str = None
    comment: str = ""

    def values(self):
        return np.linspace(self.start, self.stop, self.count)

    def at(self, value):
        """The single-point spec with the sweep variable set to ``value``."""
        if self.variable == "s":
            return replace(self, environment=replace(self.environment, s=value))
        if self.variable == "lambda":
            return replace(self, environment=replace(self.environment, lam=value))
        if self.variable == "beta":
            return replace(self, scenario=replace(self.scenario, beta=value))
        return replace(self, scenario=replace(self.scenario, theta0=value))

    def validate(self, sweep=True):
        env, sc = self.environment, self.scenario
        if env.kind not in ("bosonic", "spin"):
            raise ConfigError(f"environment.kind must be bosonic or spin, got {env.kind!r}")
        if sc.kind not in ("uncorrelated", "projective", "unitary"):
            raise ConfigError(f"scenario.kind must be uncorrelated, projective or "
                              f"unitary, got {sc.kind!r}")
        if sc.axis not in ("x", "y", "z"):
            raise ConfigError("scenario.axis must be x, y or z")
        if sweep:
            if self.variable not in SWEEP_VARIABLES:
                raise ConfigError(f"sweep.variable must be one of {SWEEP_VARIABLES}")
            if self.count < 2:
                raise ConfigError("sweep.count must be >= 2")
            points = [self.at(v) for v in (self.start, self.stop)]
        else:
            points = [self]
        for p in points:
            e, c = p.environment, p.scenario
            if e.lam < 0 or e.omega_c <= 0 or e.s <= 0 or e.omega <= 0 or e.n_spins < 1:
                raise ConfigError("environment parameters out of range "
                                  "(need lambda >= 0, s > 0, omega_c > 0, omega > 0, n >= 1)")
            if len(e.omegas) != len(e.lambdas):
                raise ConfigError("environment.omegas and environment.lambdas differ in length")
            if c.beta <= 0 or c.omega0 <= 0:
                raise ConfigError("need beta > 0 and omega0 > 0")
            if not 0 <= c.theta0 <= math.pi:
                raise ConfigError("theta0 must lie in [0, pi]")
        if self.grid < MIN_GRID or self.grid % 4:
            raise ConfigError(f"grid must be a multiple of 4 and >= {MIN_GRID}")
        return self

    def describe(self):
        """Flat ``section.key = value`` lines describing the spec."""
        env, sc = self.environment, self.scenario
        lines = [f"environment.kind = {env.kind}"]
        if env.kind == "bosonic":
            lines += [f"environment.lambda = {env.lam!r}", f"environment.s = {env.s!r}",
                      f"environment.omega_c = {env.omega_c!r}"]
        elif env.omegas:
            lines += [f"environment.omegas = {list(env.omegas)}",
                      f"environment.lambdas = {list(env.lambdas)}"]
        else:
            lines += [f"environment.n = {env.n_spins}", f"environment.lambda = {env.lam!r}",
                      f"environment.omega = {env.omega!r}"]
        lines += [f"scenario.kind = {sc.kind}", f"scenario.beta = {sc.beta!r}",
                  f"scenario.omega0 = {sc.omega0!r}"]
        if sc.kind == "unitary":
            lines += [f"scenario.angle = {sc.angle!r}", f"scenario.axis = {sc.axis}"]
        else:
            lines += [f"scenario.theta0 = {sc.theta0!r}", f"scenario.phi0 = {sc.phi0!r}"]
        lines += [f"sweep.variable = {self.variable}", f"sweep.start = {self.start!r}",
                  f"sweep.stop = {self.stop!r}", f"sweep.count = {self.count}",
                  f"sweep.grid = {self.grid}"]
        return lines


_KEYS = {
    "environment": {
        "kind": ("environment", "kind", str),
        "lambda": ("environment", "lam", parse_number),
        "s": ("environment", "s", parse_number),
        "omega_c": ("environment", "omega_c", parse_number),
        "n": ("environment", "n_spins", lambda v: int(parse_number(v))),
        "omega": ("environment", "omega", parse_number),
        "omegas": ("environment", "omegas", _number_list),
        "lambdas": ("environment", "lambdas", _number_list),
        "homogeneous": (None, None, None),
    },
    "scenario": {
        "kind": ("scenario", "kind", str),
        "theta0": ("scenario", "theta0", parse_number),
        "phi0": ("scenario", "phi0", parse_number),
        "angle": ("scenario", "angle", parse_number),
        "axis": ("scenario", "axis", str),
        "beta": ("scenario", "beta", parse_number),
        "omega0": ("scenario", "omega0", parse_number),
    },
    "sweep": {
        "variable": (None, "variable", str),
        "start": (None, "start", parse_number),
        "stop": (None, "stop", parse_number),
        "count": (None, "count", lambda v: int(parse_number(v))),
        "grid": (None, "grid", lambda v: int(parse_number(v))),
        "times": (None, "times", _number_list),
    },
    "output": {
        "path": (None, "out", str),
        "comment": (None, "comment", str),
    },
}


def _apply(spec, section, key, raw):
    try:
        target, attr, conv = _KEYS[section][key]
    except KeyError:
        raise ConfigError(f"unknown key {section}.{key}") from None
    if attr is None:
        return spec
    try:
        value = conv(raw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc
    if target is None:
        return replace(spec, **{attr: value})
    sub = getattr(spec, target)
    return replace(spec, **{target: replace(sub, **{attr: value})})


def load_spec(path=None, overrides=(), text=None):
    """Build a :class:`SweepSpec` from a config file and ``KEY=VALUE`` overrides.

    Override keys are ``section.key`` (``environment.lambda=0.5``).
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if path is not None:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        if text is not None:
            parser.read_string(text)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    spec = SweepSpec()
    for section in parser.sections():
        if section not in _KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            spec = _apply(spec, section, key, raw)
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        lhs, raw = item.split("=", 1)
        section, key = lhs.strip().split(".", 1)
        if section not in _KEYS:
            raise ConfigError(f"unknown section {section!r} in --set")
        spec = _apply(spec, section, key.strip(), raw.strip())
    return spec


# --- evaluation ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _Tabulated:
    """Environment functions evaluated once and shared by both scenarios."""

    log_mod: np.ndarray
    phase: np.ndarray
    rate: np.ndarray
    unc_log_mod: np.ndarray
    unc_phase: np.ndarray
    is_decoupled: bool = False

    def correlated_parts(self, t):
        return self.log_mod.copy(), self.phase.copy(), self.rate.copy()

    def uncorrelated_parts(self, t):
        return self.unc_log_mod.copy(), self.unc_phase.copy()


def _tabulate(env, t):
    if env.is_decoupled:
        z = np.zeros_like(t)
        return _Tabulated(z, z, z, z, z, True)
    if isinstance(env, BosonicBath):
        v = bath_functions(env.J, env.beta, t)
        z = np.zeros_like(t)
        return _Tabulated(-v["gamma"], v["phi"], v["phi_dot"], -v["gamma"], z)
    return _Tabulated(*env.correlated_parts(t), *env.uncorrelated_parts(t))


def _trajectory(scenario, env, t):
    gamma, chi, chi_dot = trajectory_on_grid(scenario, env, t)
    return DephasingTrajectory(t, gamma, chi, chi_dot, scenario.omega0)


def _prepared(spec):
    """Scenarios, states and phase references for one point."""
    sc = spec.scenario
    unc = CorrelationScenario.uncorrelated(sc.beta, sc.omega0)
    if sc.kind == "unitary":
        u = rotation_unitary(sc.angle, sc.axis)
        state = mixed_state_from_unitary(u, sc.beta, sc.omega0)
        corr = CorrelationScenario.unitary(u, sc.beta, sc.omega0)
        ref = uncoupled_mixed_phase(state, sc.omega0)
        return corr, unc, state, ref
    state = BlochState(sc.theta0, sc.phi0)
    corr = unc if sc.kind == "uncorrelated" else CorrelationScenario.projective(
        state, sc.beta, sc.omega0)
    return corr, unc, state, None


def _phase_one(scenario, env, t, state, ref):
    """``(Phi_G, delta Phi_G)`` for one scenario; ``ref`` None means the
    pure-state reference ``-pi + pi cos(theta0)``."""
    traj = _trajectory(scenario, env, t)
    if ref is None:
        res = phase_pure(traj, state)
        return res.total, phase_correction(res, "pure")
    res = phase_mixed(traj, state)
    return res.total, wrap_phase(res.total - ref)


def evaluate_point(spec):
    """``(phi_corr, phi_uncorr, delta_corr, delta_uncorr, status)`` at one point."""
    nan = math.nan
    try:
        corr, unc, state, ref = _prepared(spec)
        t = np.linspace(0.0, cycle_time(spec.scenario.omega0), spec.grid + 1)
        env = _tabulate(spec.environment.build(spec.scenario.beta), t)
    except SingularTrajectoryError:
        return nan, nan, nan, nan, "singular"
    except (ArithmeticError, ValueError, RuntimeError):
        return nan, nan, nan, nan, "failed"
    values, status = [], "ok"
    for scenario in (corr, unc):
        try:
            p, d = _phase_one(scenario, env, t, state, ref)
        except SingularTrajectoryError:
            p = d = nan
            status = "singular" if status == "ok" else status
        except (ArithmeticError, ValueError, RuntimeError):
            p = d = nan
            status = "failed"
        values.append((p, d))
    (pc, dc), (pu, du) = values
    return pc, pu, dc, du, status


def run_sweep(spec, jobs=1):
    """Evaluate every sweep point; rows come back in sweep order."""
    spec.validate(sweep=True)
    values = spec.values()
    points = [spec.at(float(v)) for v in values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate_point, points))
    else:
        results = [evaluate_point(p) for p in points]
    return [(float(v),) + tuple(r) for v, r in zip(values, results)]


def run_trajectory(spec, times=None):
    """Rows ``(t, gamma, chi, chi_dot, |X|, arg X, status)`` for one point.

    Samples where the coherence vanishes are reported with status
    ``singular`` (``gamma = inf``) instead of aborting the dump.
    """
    spec.validate(sweep=False)
    corr, _, _, _ = _prepared(spec)
    if times is None:
        times = spec.times or np.linspace(0.0, cycle_time(spec.scenario.omega0), spec.grid + 1)
    t = np.asarray(times, dtype=float)
    env = spec.environment.build(spec.scenario.beta)
    flags = np.zeros(t.size, dtype=bool)
    try:
        gamma, chi, chi_dot = trajectory_on_grid(corr, env, t)
    except SingularTrajectoryError as exc:
        flags = np.isin(t, np.asarray(exc.times, dtype=float))
        gamma, chi, chi_dot = (np.full(t.size, math.nan) for _ in range(3))
        if np.any(~flags):
            parts = trajectory_on_grid(corr, env, t[~flags])
            for arr, part in zip((gamma, chi, chi_dot), parts):
                arr[~flags] = part
        gamma[flags] = math.inf
    rows = []
    for k in range(t.size):
        abs_x = math.exp(-gamma[k]) if not flags[k] else 0.0
        arg_x = float(np.angle(np.exp(1j * chi[k]))) if not flags[k] else math.nan
        rows.append((t[k], gamma[k], chi[k], chi_dot[k], abs_x, arg_x,
                     "singular" if flags[k] else "ok"))
    return rows


# --- output --------------------------------------------------------------------

def format_number(x):
    return format(float(x), ".17g")


def _format_row(row):
    return ",".join(v if isinstance(v, str) else format_number(v) for v in row)


def write_csv(fh, columns, rows, header_lines=()):
    for line in header_lines:
        fh.write(f"# {line}\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(_format_row(row) + "\n")


def sweep_header(spec):
    lines = [f"geophase {__version__} sweep"]
    if spec.comment:
        lines.append(spec.comment)
    lines += spec.describe()
    lines.append("delta columns are signed and wrapped to (-pi, pi]")
    return lines


def trajectory_header(spec):
    lines = [f"geophase {__version__} trajectory"]
    lines += [ln for ln in spec.describe() if not ln.startswith("sweep.")]
    lines.append("chi is the continuous correlation phase; arg_ratio is wrapped")
    return lines


def find_zero_crossings(values, deltas, max_step=math.pi / 2):
    """Sweep values where ``deltas`` changes sign continuously.

    A sign change across a jump larger than ``max_step`` is a wrap of the
    phase through +-pi, not a zero of the correction, and is skipped. The
    crossing location is linearly interpolated.
    """
    values = np.asarray(values, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    out = []
    for k in range(len(values) - 1):
        a, b = deltas[k], deltas[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)) or abs(b - a) > max_step:
            continue
        if a == 0.0:
            out.append(float(values[k]))
        elif a * b < 0:
            out.append(float(values[k] + (values[k + 1] - values[k]) * a / (a - b)))
    return out


def read_sweep_csv(path):
    """Parse a sweep CSV back into ``(variable, columns dict)``."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]
    names = lines[0].split(",")
    cols = {n: [] for n in names}
    for ln in lines[1:]:
        for n, v in zip(names, ln.split(",")):
            cols[n].append(v if n == "status" else float(v))
    return names[0], {n: (c if n == "status" else np.array(c)) for n, c in cols.items()}
