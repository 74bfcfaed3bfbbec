"""Batch command-line front end.

Usage::

    withholding-game COMMAND [key=value ...] [--config FILE]
                     [--seed N] [--grid-n N] [--tol X] [--out PATH]

Parameters come from a flat ``key = value`` config file, then ``key=value``
arguments, then the explicit flags; later sources win.  With ``--out`` the
CSV goes to that file and the summary to stdout; without it the CSV goes to
stdout and the summary to stderr.

Exit status: 0 success, 1 invalid input, 2 the oracle rejected the closed
form, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys

import numpy as np

from .best_response import BOUNDARY_TOL
from .core import (
    GameParameters,
    MinerStrategy,
    UserStrategy,
    betting_odds,
    user_thresholds,
    validate_parameters,
)
from .dynamics import best_response_dynamics
from .equilibrium import equilibrium_bound, solve_equilibrium
from .errors import DomainError, ResourceError, UnsupportedInput
from .oracle import DEFAULT_GRID_N, default_tolerance, verify_equilibrium
from .payoffs import payoff_terms
from .simulation import SimulationConfig, aggregate_miners_experiment, analytic_p_d, simulate

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

PARAM_KEYS = ("p", "epsilon", "R_w", "b_d", "b_n", "R_0", "C_d", "C_n")
COMMON_KEYS = ("seed", "grid_n", "tol", "out")

COMMAND_KEYS = {
    "odds": ("p", "epsilon"),
    "equilibrium": PARAM_KEYS,
    "verify": PARAM_KEYS,
    "payoff-surface": ("p", "epsilon", "step"),
    "bound-sweep": ("eps_min", "eps_max", "eps_num", "eps_scale", "p_values"),
    "simulate": PARAM_KEYS + ("omega_d", "omega_n", "lambda_d", "lambda_n",
                              "n_blocks", "cost_per_attempt", "attempt_cap", "workers"),
    "aggregate": PARAM_KEYS + ("miners", "lambda_d", "lambda_n", "n_blocks",
                               "cost_per_attempt", "attempt_cap", "workers"),
    "dynamics": PARAM_KEYS + ("init_omega_d", "init_omega_n", "init_lambda_d",
                              "init_lambda_n", "damping", "max_iters"),
}


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    """Fixed CSV number format: integers verbatim, reals to 9 significant digits."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".9g")


def write_csv(stream, header, rows):
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def parse_overrides(items) -> dict[str, str]:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


class RunConfig:
    """Resolved settings for one command; typed getters report bad values."""

    def __init__(self, command: str, values: dict[str, str]):
        if command not in COMMAND_KEYS:
            raise ConfigError(f"unknown command {command!r}")
        allowed = set(COMMAND_KEYS[command]) | set(COMMON_KEYS)
        unknown = sorted(set(values) - allowed)
        if unknown:
            raise ConfigError(f"unknown key(s) for {command}: {', '.join(unknown)}; "
                              f"allowed: {', '.join(sorted(allowed))}")
        self.command = command
        self.values = dict(values)

    def get_float(self, key, default=None):
        if key not in self.values:
            if default is None:
                raise ConfigError(f"{self.command} requires key {key!r}")
            return default
        try:
            return float(self.values[key])
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {self.values[key]!r}") from None

    def get_int(self, key, default=None):
        if key not in self.values:
            if default is None:
                raise ConfigError(f"{self.command} requires key {key!r}")
            return default
        try:
            return int(self.values[key])
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {self.values[key]!r}") from None

    def get_str(self, key, default=None):
        if key not in self.values:
            if default is None:
                raise ConfigError(f"{self.command} requires key {key!r}")
            return default
        return self.values[key]

    def params(self) -> GameParameters:
        raw = {k: self.get_float(k) for k in PARAM_KEYS if k in self.values}
        return validate_parameters(raw)

    @property
    def seed(self) -> int:
        return self.get_int("seed", 0)

    @property
    def grid_n(self) -> int:
        return self.get_int("grid_n", DEFAULT_GRID_N)

    @property
    def out(self) -> str | None:
        return self.values.get("out")


def cmd_odds(cfg, out, say):
    p, eps = cfg.get_float("p"), cfg.get_float("epsilon")
    odds, th = betting_odds(p, eps), user_thresholds(p, eps)
    say(f"beta_d = {odds.beta_d:.9g}")
    say(f"beta_n = {odds.beta_n:.9g}")
    say(f"P_low = {th.P_low:.9g}")
    say(f"P_high = {th.P_high:.9g}")
    write_csv(out, ["beta_d", "beta_n", "P_low", "P_high"],
              [(odds.beta_d, odds.beta_n, th.P_low, th.P_high)])
    return EXIT_OK


def _describe(box, names):
    parts = []
    for name, iv in zip(names, (box.d_interval, box.n_interval)):
        if iv.is_point:
            parts.append(f"{name} = {iv.lo:.6f}")
        else:
            parts.append(f"{name} in [{iv.lo:.6f}, {iv.hi:.6f}]")
    return ", ".join(parts)


EQ_HEADER = ["regime", "omega_d_lo", "omega_d_hi", "omega_n_lo", "omega_n_hi",
             "lambda_d_lo", "lambda_d_hi", "lambda_n_lo", "lambda_n_hi"]


def _eq_row(eq):
    m, u = eq.miner_box, eq.user_box
    return (eq.regime.value, m.d_interval.lo, m.d_interval.hi, m.n_interval.lo, m.n_interval.hi,
            u.d_interval.lo, u.d_interval.hi, u.n_interval.lo, u.n_interval.hi)


def cmd_equilibrium(cfg, out, say):
    params = cfg.params()
    eq = solve_equilibrium(params, cfg.get_float("tol", BOUNDARY_TOL))
    say(f"regime={eq.regime.value}")
    say("miner: " + _describe(eq.miner_box, ("omega_d", "omega_n")))
    say("user: " + _describe(eq.user_box, ("lambda_d", "lambda_n")))
    write_csv(out, EQ_HEADER, [_eq_row(eq)])
    return EXIT_OK


def cmd_verify(cfg, out, say):
    params = cfg.params()
    eq = solve_equilibrium(params)
    tol = cfg.get_float("tol", default_tolerance(params))
    rows, ok = [], True
    for miner, user in eq.points():
        rep = verify_equilibrium((miner, user), params, cfg.grid_n, tol)
        ok &= rep.passes
        rows.append((miner.omega_d, miner.omega_n, user.lambda_d, user.lambda_n,
                     rep.miner_gain, rep.user_gain, rep.passes))
    say(f"regime={eq.regime.value}")
    say(f"checked {len(rows)} equilibrium point(s) at tol {tol:.3g}: "
        + ("all pass" if ok else "FAILED"))
    write_csv(out, ["omega_d", "omega_n", "lambda_d", "lambda_n",
                    "miner_gain", "user_gain", "passes"], rows)
    return EXIT_OK if ok else EXIT_VERIFY


def payoff_surface_rows(p: float, epsilon: float, step: float = 1e-3):
    n = int(round(1.0 / step))
    if n < 1 or abs(n * step - 1.0) > 1e-9:
        raise ConfigError(f"step must divide 1 evenly, got {step}")
    P_d = np.arange(n + 1) / n
    term_d, term_n = payoff_terms(P_d, p, epsilon)
    return list(zip(P_d.tolist(), term_d.tolist(), term_n.tolist()))


def cmd_payoff_surface(cfg, out, say):
    p, eps = cfg.get_float("p"), cfg.get_float("epsilon")
    rows = payoff_surface_rows(p, eps, cfg.get_float("step", 1e-3))
    th = user_thresholds(p, eps)
    say(f"term_n crosses zero at P_low = {th.P_low:.9g}; term_d at P_high = {th.P_high:.9g}")
    write_csv(out, ["P_d", "term_d", "term_n"], rows)
    return EXIT_OK


def bound_sweep_rows(eps_min, eps_max, eps_num, eps_scale, p_values):
    if eps_num < 1 or not 0 < eps_min <= eps_max:
        raise ConfigError("need 0 < eps_min <= eps_max and eps_num >= 1")
    if eps_scale == "log":
        grid = np.geomspace(eps_min, eps_max, eps_num)
    elif eps_scale == "linear":
        grid = np.linspace(eps_min, eps_max, eps_num)
    else:
        raise ConfigError(f"eps_scale must be 'log' or 'linear', got {eps_scale!r}")
    rows = []
    for p in p_values:
        for eps in grid.tolist():
            rows.append((eps, p, equilibrium_bound(p, eps).deviation))
    return rows


def cmd_bound_sweep(cfg, out, say):
    try:
        p_values = [float(s) for s in cfg.get_str("p_values", "0.1,0.5,0.9").split(",")]
    except ValueError:
        raise ConfigError("p_values must be a comma-separated list of numbers") from None
    rows = bound_sweep_rows(cfg.get_float("eps_min", 1e-3), cfg.get_float("eps_max", 0.1),
                            cfg.get_int("eps_num", 100), cfg.get_str("eps_scale", "linear"),
                            p_values)
    say(f"{len(rows)} rows for p in {p_values}")
    write_csv(out, ["epsilon", "p", "deviation"], rows)
    return EXIT_OK


def _report_rows(report):
    return [(name, value, err) for name, value, err in report.rows()]


def cmd_simulate(cfg, out, say):
    params = cfg.params()
    miner = MinerStrategy(cfg.get_float("omega_d", 0.0), cfg.get_float("omega_n", 0.0))
    user = UserStrategy(cfg.get_float("lambda_d", 0.0), cfg.get_float("lambda_n", 0.0))
    cost = cfg.get_float("cost_per_attempt") if "cost_per_attempt" in cfg.values else None
    config = SimulationConfig(params, miner, user, cfg.get_int("n_blocks", 100_000), cfg.seed,
                              cost, cfg.get_int("attempt_cap", 10**6))
    report = simulate(config, workers=cfg.get_int("workers", 1))
    say(f"empirical P_d = {report.empirical_P_d:.6f} +- {report.empirical_P_d_stderr:.6f} "
        f"(analytic {analytic_p_d(miner, params):.6f})")
    say(f"user payoff/block = {report.user_payoff_mean:.6f} +- {report.user_payoff_stderr:.6f}")
    say(f"miner payoff/block = {report.miner_payoff_mean:.6f} +- {report.miner_payoff_stderr:.6f}")
    write_csv(out, ["metric", "value", "stderr"], _report_rows(report))
    return EXIT_OK


def parse_miners(text: str):
    """``share/omega_d/omega_n`` entries separated by commas."""
    out = []
    for item in text.split(","):
        parts = item.strip().split("/")
        if len(parts) != 3:
            raise ConfigError(f"miner entry must be share/omega_d/omega_n, got {item!r}")
        try:
            share, wd, wn = (float(x) for x in parts)
        except ValueError:
            raise ConfigError(f"miner entry must be numeric, got {item!r}") from None
        out.append((share, MinerStrategy(wd, wn)))
    return out


def cmd_aggregate(cfg, out, say):
    params = cfg.params()
    miners = parse_miners(cfg.get_str("miners"))
    user = UserStrategy(cfg.get_float("lambda_d", 0.0), cfg.get_float("lambda_n", 0.0))
    cost = cfg.get_float("cost_per_attempt") if "cost_per_attempt" in cfg.values else None
    report, single = aggregate_miners_experiment(
        miners, params, cfg.get_int("n_blocks", 100_000), cfg.seed, user, cost,
        cfg.get_int("attempt_cap", 10**6), workers=cfg.get_int("workers", 1))
    analytic = analytic_p_d(single, params)
    say(f"equivalent single miner: omega_d = {single.omega_d:.6f}, omega_n = {single.omega_n:.6f}")
    say(f"empirical P_d = {report.empirical_P_d:.6f} +- {report.empirical_P_d_stderr:.6f} "
        f"(equivalent analytic {analytic:.6f})")
    rows = _report_rows(report) + [
        ("equivalent_omega_d", single.omega_d, None),
        ("equivalent_omega_n", single.omega_n, None),
        ("equivalent_P_d", analytic, None),
    ]
    write_csv(out, ["metric", "value", "stderr"], rows)
    return EXIT_OK


def cmd_dynamics(cfg, out, say):
    params = cfg.params()
    init = (MinerStrategy(cfg.get_float("init_omega_d", 0.0), cfg.get_float("init_omega_n", 0.0)),
            UserStrategy(cfg.get_float("init_lambda_d", 0.0), cfg.get_float("init_lambda_n", 0.0)))
    trace = best_response_dynamics(params, init, cfg.get_int("max_iters", 10_000),
                                   cfg.get_float("damping", 0.1), cfg.get_float("tol", 1e-4))
    miner, user = trace.final_point
    say(f"converged={str(trace.converged).lower()} after {trace.iterations} iterations")
    say(f"final omega_d = {miner.omega_d:.6f}, omega_n = {miner.omega_n:.6f}, "
        f"lambda_d = {user.lambda_d:.6f}, lambda_n = {user.lambda_n:.6f}")
    rows = [(k, m.omega_d, m.omega_n, u.lambda_d, u.lambda_n)
            for k, (m, u) in enumerate(trace.iterates)]
    write_csv(out, ["iteration", "omega_d", "omega_n", "lambda_d", "lambda_n"], rows)
    return EXIT_OK


COMMANDS = {
    "odds": cmd_odds,
    "equilibrium": cmd_equilibrium,
    "verify": cmd_verify,
    "payoff-surface": cmd_payoff_surface,
    "bound-sweep": cmd_bound_sweep,
    "simulate": cmd_simulate,
    "aggregate": cmd_aggregate,
    "dynamics": cmd_dynamics,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="withholding-game",
        description="Miner-vs-bettor block-withholding game: equilibria, oracle checks, "
                    "Monte Carlo simulation and figure CSVs.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("overrides", nargs="*", metavar="key=value")
    parser.add_argument("--config", help="flat key = value file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grid-n", type=int, dest="grid_n")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--out")
    return parser


def resolve(args) -> RunConfig:
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read(), args.config))
    values.update(parse_overrides(args.overrides))
    for key in COMMON_KEYS:
        flag = getattr(args, key)
        if flag is not None:
            values[key] = str(flag)
    return RunConfig(args.command, values)


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    buffer = io.StringIO()
    summary = stdout if config.out else stderr

    def say(line):
        print(line, file=summary)

    status = COMMANDS[config.command](config, buffer, say)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buffer.getvalue())
    else:
        stdout.write(buffer.getvalue())
    return status


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        with contextlib.redirect_stderr(stderr):
            args = build_parser().parse_intermixed_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means a failed verification
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return run(resolve(args), stdout, stderr)
    except (ConfigError, DomainError, UnsupportedInput, ResourceError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
