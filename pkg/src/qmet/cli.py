"""Command-line front end: reproducible sweeps emitted as CSV/JSON.

Subcommands mirror the library's capabilities: 'qfi' and 'gbound' sweep the
numeric Fisher quantities against their closed forms, 'optimize' cross-checks
the bound by derivative-free search, 'phase-sim' runs the read-out simulator,
'jc' and 'oscillator' evaluate the two measurement-model examples, and
'selftest' executes the randomized property suites.

A run is configured by an INI file (sections [model], [grid], [diff],
[phasesim], [optimizer], [run]) plus command-line flags; flags win.  With a
fixed seed, repeated runs produce byte-identical CSV output; every file
carries its config hash.  QMET_THREADS caps worker concurrency (0 = auto);
records are always written in grid order.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .cem import g_bound, generator_pair, optimize_cem
from .errors import QmetError
from .fisher import classical_fisher, qfi
from .models import (
    HamiltonianModel,
    jc_readout_model,
    make_jaynes_cummings,
    make_nv_spin1,
    make_qubit_direction,
    make_qubit_xcomponent,
    reference,
)
from .numdiff import DiffSpec
from .phasesim import PhaseSimConfig, default_tau, fisher_phase_readout
from .selftest import run_all

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    """Configuration could not be resolved into a runnable sweep."""


@dataclass
class RunConfig:
    """Fully resolved sweep configuration."""

    command: str
    model: str = "qubit-direction"
    model_params: dict = field(default_factory=dict)
    theta_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.3, 2.8, 10))
    t_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.3, 3.0, 10))
    diff_method: str = "richardson-fd"
    diff_step: Optional[float] = None
    diff_levels: int = 2
    n: int = 6
    m: int = 3
    tau: Optional[float] = None
    restarts: int = 8
    iterations: int = 400
    seed: int = 0
    out: Optional[str] = None
    fmt: str = "csv"

    def diff(self) -> DiffSpec:
        return DiffSpec(method=self.diff_method, step=self.diff_step, levels=self.diff_levels)

    def canonical(self) -> str:
        items = {
            "command": self.command,
            "model": self.model,
            "model_params": json.dumps(self.model_params, sort_keys=True),
            "theta": ",".join(f"{x:.17g}" for x in self.theta_grid),
            "t": ",".join(f"{x:.17g}" for x in self.t_grid),
            "diff": f"{self.diff_method}:{self.diff_step}:{self.diff_levels}",
            "n": self.n,
            "m": self.m,
            "tau": self.tau,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "seed": self.seed,
            "format": self.fmt,
        }
        return "\n".join(f"{k}={items[k]}" for k in sorted(items))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, count = text.split(":")
        grid = np.linspace(float(start), float(stop), int(count))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"grid spec must be START:STOP:N, got {text!r}") from exc
    if grid.size == 0:
        raise ConfigError(f"grid {text!r} is empty")
    if grid.size > 10**5:
        raise ConfigError(f"grid {text!r} exceeds 1e5 points")
    return grid


_MODEL_PARAM_KEYS = {
    "qubit-direction": ("omega",),
    "qubit-xcomponent": ("omega",),
    "nv-spin1": ("mu", "D", "E"),
    "jaynes-cummings": ("omega", "kappa", "n_max", "alpha1_sq"),
    "oscillator": ("mass", "omega"),
}

_MODEL_DEFAULTS = {
    "qubit-direction": {"omega": 1.0},
    "qubit-xcomponent": {"omega": 1.0},
    "nv-spin1": {"mu": 1.0, "D": 1.44 * math.pi, "E": 5e-5 * math.pi},
    "jaynes-cummings": {"omega": 1.0, "kappa": 0.5, "n_max": 8, "alpha1_sq": 0.5},
    "oscillator": {"mass": 1.0, "omega": 1.0},
}


def build_model(cfg: RunConfig) -> HamiltonianModel:
    p = cfg.model_params
    if cfg.model == "qubit-direction":
        return make_qubit_direction(p["omega"])
    if cfg.model == "qubit-xcomponent":
        return make_qubit_xcomponent(p["omega"])
    if cfg.model == "nv-spin1":
        return make_nv_spin1(p["mu"], p["D"], p["E"])
    if cfg.model == "jaynes-cummings":
        return make_jaynes_cummings(p["omega"], p["kappa"], int(p["n_max"]))
    raise ConfigError(f"unknown model {cfg.model!r}")


_COMMAND_DEFAULT_MODEL = {"jc": "jaynes-cummings", "oscillator": "oscillator"}

_COMMAND_ALLOWED_MODELS = {
    "jc": ("jaynes-cummings",),
    "oscillator": ("oscillator",),
    "qfi": ("qubit-direction", "qubit-xcomponent", "nv-spin1"),
    "gbound": ("qubit-direction", "qubit-xcomponent", "nv-spin1"),
    "optimize": ("qubit-direction", "qubit-xcomponent", "nv-spin1"),
    "phase-sim": ("qubit-direction", "qubit-xcomponent", "nv-spin1"),
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.model = _COMMAND_DEFAULT_MODEL.get(args.command, cfg.model)
    if args.config is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str  # model parameters like D and E are case-sensitive
        read = parser.read(args.config)
        if not read:
            raise ConfigError(f"cannot read config file {args.config!r}")
        sec = parser["model"] if parser.has_section("model") else {}
        if "name" in sec:
            cfg.model = sec["name"]
        grid = parser["grid"] if parser.has_section("grid") else {}
        if "theta" in grid:
            cfg.theta_grid = _parse_grid(grid["theta"])
        if "t" in grid:
            cfg.t_grid = _parse_grid(grid["t"])
        diff = parser["diff"] if parser.has_section("diff") else {}
        cfg.diff_method = diff.get("method", cfg.diff_method)
        if "step" in diff:
            cfg.diff_step = float(diff["step"])
        if "levels" in diff:
            cfg.diff_levels = int(diff["levels"])
        ps = parser["phasesim"] if parser.has_section("phasesim") else {}
        cfg.n = int(ps.get("n", cfg.n))
        cfg.m = int(ps.get("m", cfg.m))
        if "tau" in ps:
            cfg.tau = float(ps["tau"])
        opt = parser["optimizer"] if parser.has_section("optimizer") else {}
        cfg.restarts = int(opt.get("restarts", cfg.restarts))
        cfg.iterations = int(opt.get("iterations", cfg.iterations))
        run = parser["run"] if parser.has_section("run") else {}
        cfg.seed = int(run.get("seed", cfg.seed))
        cfg.out = run.get("out", cfg.out)
        cfg.fmt = run.get("format", cfg.fmt)
        if parser.has_section("model"):
            for key, value in parser["model"].items():
                if key != "name":
                    cfg.model_params[key] = float(value)

    if args.model is not None:
        cfg.model = args.model
    if args.theta is not None:
        cfg.theta_grid = _parse_grid(args.theta)
    if args.t is not None:
        cfg.t_grid = _parse_grid(args.t)
    if args.n is not None:
        cfg.n = args.n
    if args.m is not None:
        cfg.m = args.m
    if args.tau is not None:
        cfg.tau = args.tau
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.format is not None:
        cfg.fmt = args.format

    if cfg.model not in _MODEL_PARAM_KEYS:
        raise ConfigError(f"unknown model {cfg.model!r}; choose from "
                          f"{', '.join(sorted(_MODEL_PARAM_KEYS))}")
    allowed = _COMMAND_ALLOWED_MODELS.get(args.command)
    if allowed is not None and cfg.model not in allowed:
        raise ConfigError(f"command {args.command!r} supports models "
                          f"{', '.join(allowed)}, got {cfg.model!r}")
    defaults = dict(_MODEL_DEFAULTS[cfg.model])
    for key in cfg.model_params:
        if key not in _MODEL_PARAM_KEYS[cfg.model]:
            raise ConfigError(f"model {cfg.model!r} does not take parameter {key!r}")
    defaults.update(cfg.model_params)
    cfg.model_params = defaults
    if cfg.fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.fmt!r}")
    if cfg.diff_method not in ("central-fd", "richardson-fd"):
        raise ConfigError(f"diff method must be central-fd or richardson-fd, "
                          f"got {cfg.diff_method!r}")
    return cfg


def _worker_count() -> int:
    raw = os.environ.get("QMET_THREADS", "")
    if raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"QMET_THREADS must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError("QMET_THREADS must be >= 0")
    if value == 0:
        return os.cpu_count() or 1
    return value


class SweepFailure(Exception):
    """A grid point failed numerically; carries the point for diagnostics."""

    def __init__(self, item, cause: QmetError):
        super().__init__(f"at grid point {item}: {type(cause).__name__}: {cause}")
        self.item = item
        self.cause = cause


def map_grid(fn, items):
    """Evaluate fn over items, possibly concurrently, preserving order.

    Numerical errors are wrapped together with the offending grid point.
    """
    def safe(item):
        try:
            return fn(item)
        except QmetError as exc:
            raise SweepFailure(item, exc) from exc

    workers = _worker_count()
    if workers <= 1:
        return [safe(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(safe, items))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_records(cfg: RunConfig, columns, records) -> str:
    """Render records deterministically and write them to cfg.out or stdout."""
    if cfg.fmt == "json":
        payload = {
            "version": __version__,
            "config_sha256": cfg.config_hash(),
            "columns": list(columns),
            "records": [[_fmt(v) for v in rec] for rec in records],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# qmet {__version__} config-sha256={cfg.config_hash()}"]
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(v) for v in rec) for rec in records)
        text = "\n".join(lines) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def _grid_points(cfg: RunConfig):
    return [(float(q), float(t)) for q in cfg.theta_grid for t in cfg.t_grid]


def _ground_projector(dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _qfi_refs(cfg: RunConfig, theta: float, t: float):
    p = cfg.model_params
    if cfg.model == "qubit-direction":
        return (reference("direction_qfi")(theta=theta, omega=p["omega"], t=t),
                reference("direction_max_qfi")(omega=p["omega"], t=t))
    if cfg.model == "qubit-xcomponent":
        return (math.nan,
                reference("xcomponent_max_qfi")(theta=theta, omega=p["omega"], t=t))
    if cfg.model == "nv-spin1":
        return (math.nan,
                reference("nv_max_qfi")(theta=theta, mu=p["mu"], E=p["E"], t=t))
    return (math.nan, math.nan)


def _g_ref(cfg: RunConfig, theta: float, t: float) -> float:
    p = cfg.model_params
    if cfg.model == "qubit-direction":
        return reference("direction_g")(omega=p["omega"], t=t)
    if cfg.model == "qubit-xcomponent":
        return reference("xcomponent_g")(theta=theta, omega=p["omega"], t=t)
    if cfg.model == "nv-spin1":
        return reference("nv_g")(theta=theta, mu=p["mu"], E=p["E"], t=t)
    return math.nan


def cmd_qfi(cfg: RunConfig) -> int:
    model = build_model(cfg)
    rho0 = _ground_projector(model.dim)
    diff = cfg.diff()

    def one(point):
        theta, t = point
        def rho_of(x):
            u = model.u_of(x, t)
            return u @ rho0 @ u.conj().T
        value = qfi(rho_of, theta, diff).value
        max_value = generator_pair(model, theta, t, diff).gaps[0] ** 2
        ref, max_ref = _qfi_refs(cfg, theta, t)
        abs_err = abs(value - ref) if math.isfinite(ref) else math.nan
        max_abs_err = abs(max_value - max_ref) if math.isfinite(max_ref) else math.nan
        return (theta, t, value, ref, abs_err, max_value, max_ref, max_abs_err)

    records = map_grid(one, _grid_points(cfg))
    write_records(cfg, ("theta", "t", "qfi", "qfi_ref", "abs_err",
                        "max_qfi", "max_qfi_ref", "max_abs_err"), records)
    return EXIT_OK


def cmd_gbound(cfg: RunConfig) -> int:
    model = build_model(cfg)
    diff = cfg.diff()

    def one(point):
        theta, t = point
        sol = g_bound(model, theta, t, diff)
        max_value = generator_pair(model, theta, t, diff).gaps[0] ** 2
        ref = _g_ref(cfg, theta, t)
        abs_err = abs(sol.G_value - ref) if math.isfinite(ref) else math.nan
        gamma = max_value / sol.G_value if sol.G_value > 0 else math.inf
        return (theta, t, sol.G_value, ref, abs_err, sol.condition_holds, max_value, gamma)

    records = map_grid(one, _grid_points(cfg))
    write_records(cfg, ("theta", "t", "g", "g_ref", "abs_err",
                        "condition", "max_qfi", "gamma"), records)
    return EXIT_OK


def cmd_optimize(cfg: RunConfig) -> int:
    model = build_model(cfg)
    start = time.perf_counter()

    def one(point):
        theta, t = point
        sol = g_bound(model, theta, t, cfg.diff())
        best, _, _ = optimize_cem(model, theta, t,
                                  budget=(cfg.restarts, cfg.iterations), seed=cfg.seed)
        gap = abs(best - sol.G_value) / sol.G_value if sol.G_value > 0 else math.nan
        return {"theta": theta, "t": t, "best_fi": best, "g": sol.G_value,
                "rel_gap": gap, "condition": bool(sol.condition_holds)}

    records = map_grid(one, _grid_points(cfg))
    payload = {
        "version": __version__,
        "config_sha256": cfg.config_hash(),
        "restarts": cfg.restarts,
        "iterations": cfg.iterations,
        "seed": cfg.seed,
        "wall_time_s": time.perf_counter() - start,
        "records": records,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_phase_sim(cfg: RunConfig) -> int:
    model = build_model(cfg)
    diff = cfg.diff()

    def one(point):
        theta, t = point
        sol = g_bound(model, theta, t, diff)
        tau = cfg.tau if cfg.tau is not None else default_tau(model, theta)
        sim = PhaseSimConfig(n=cfg.n, m=cfg.m, tau=tau, t=t, V=sol.V_opt,
                             rho0=np.outer(sol.psi_opt, sol.psi_opt.conj()))
        fi_ideal = fisher_phase_readout(sim, model, theta, diff, mode="ideal").value
        fi_real = fisher_phase_readout(sim, model, theta, diff, mode="realistic").value
        return (cfg.n, cfg.m, tau, theta, t, fi_ideal, fi_real, sol.G_value,
                fi_ideal / sol.G_value, fi_real / sol.G_value)

    records = map_grid(one, _grid_points(cfg))
    write_records(cfg, ("n", "m", "tau", "theta", "t", "fi_ideal", "fi_realistic",
                        "g", "ratio_ideal", "ratio_realistic"), records)
    return EXIT_OK


def cmd_jc(cfg: RunConfig) -> int:
    p = cfg.model_params
    alpha1_sq = p["alpha1_sq"]
    alpha0 = math.sqrt(1.0 - alpha1_sq)
    alpha1 = math.sqrt(alpha1_sq)
    diff = cfg.diff()

    def one(point):
        omega, t = point
        fq = reference("jc_qfi")(t=t, alpha1_sq=alpha1_sq)
        fc_ref = reference("jc_fc")(omega=omega, kappa=p["kappa"], t=t, alpha1_sq=alpha1_sq)
        pm = jc_readout_model(p["kappa"], t, alpha0, alpha1, int(p["n_max"]))
        fc_sim = classical_fisher(pm, omega, diff).value
        threshold = reference("jc_enhancement_threshold")(omega=omega, kappa=p["kappa"], t=t)
        divergent = fq == 0.0
        gamma = math.inf if divergent else fc_sim / fq
        region = (1.0 - alpha1_sq) < threshold
        return (omega, t, fq, fc_sim, fc_ref, gamma, (not divergent) and gamma > 1.0,
                threshold, region, divergent)

    records = map_grid(one, _grid_points(cfg))
    write_records(cfg, ("omega", "t", "fq_ref", "fc_sim", "fc_ref", "gamma",
                        "gamma_gt1", "alpha0sq_threshold", "enhancement_region",
                        "gamma_divergent"), records)
    return EXIT_OK


def cmd_oscillator(cfg: RunConfig) -> int:
    p = cfg.model_params
    mass, omega = p["mass"], p["omega"]

    def one(t):
        fq = reference("oscillator_qfi")(m=mass, omega=omega, t=t)
        fc = reference("oscillator_fc")(m=mass, omega=omega)
        gamma = reference("oscillator_gamma")(omega=omega, t=t)
        small_sine = abs(math.sin(omega * t / 2.0)) < 0.5
        return (omega, t, fq, fc, gamma, gamma > 1.0, small_sine)

    records = map_grid(one, [float(t) for t in cfg.t_grid])
    write_records(cfg, ("omega", "t", "fq_ref", "fc_ref", "gamma",
                        "gamma_gt1", "small_sine_region"), records)
    return EXIT_OK


def cmd_selftest(cfg: RunConfig) -> int:
    results = run_all()
    all_ok = True
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
        all_ok = all_ok and passed
    return EXIT_OK if all_ok else EXIT_NUMERICAL


_COMMANDS = {
    "qfi": cmd_qfi,
    "gbound": cmd_gbound,
    "optimize": cmd_optimize,
    "phase-sim": cmd_phase_sim,
    "jc": cmd_jc,
    "oscillator": cmd_oscillator,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmet",
        description="Fisher-information sweeps for controlled energy measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None, help="INI config file")
        cmd.add_argument("--model", default=None, help="model name")
        cmd.add_argument("--theta", default=None, help="theta grid START:STOP:N")
        cmd.add_argument("--t", default=None, help="time grid START:STOP:N")
        cmd.add_argument("--n", type=int, default=None, help="control-qubit count")
        cmd.add_argument("--m", type=int, default=None, help="controllization subdivisions")
        cmd.add_argument("--tau", type=float, default=None, help="read-out base time")
        cmd.add_argument("--seed", type=int, default=None, help="random seed")
        cmd.add_argument("--out", default=None, help="output path (default stdout)")
        cmd.add_argument("--format", default=None, choices=("csv", "json"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SweepFailure as exc:
        print(f"numerical failure {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QmetError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
