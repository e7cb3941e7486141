"""Command-line front end.

Every command writes one CSV (``--output``, default stdout). Parameters come
from, in increasing precedence: built-in defaults, a ``--figure`` preset,
a ``--config`` file of ``key = value`` lines, and explicit flags.

Exit codes: 0 ok, 2 invalid parameters, 3 no bracket in a design, 4 every
Monte Carlo trial blew up at some delta.
"""

import argparse
from dataclasses import dataclass
import math
import sys

import numpy as np

from . import amp, designer, risk
from .priors import Domain, bernoulli_gaussian, gaussian, least_favorable
from .state_evolution import Diverged, NoiseModel, se_run

COMMANDS = ("se-curve", "design", "monte-carlo", "region-sweep", "risk")

HEADERS = {
    "se-curve": ["delta", "err_se", "converged"],
    "design": ["prior", "domain", "epsilon", "sigma_x2", "sigma0_2", "delta_dagger",
               "err_min", "under_one", "under_two"],
    "monte-carlo": ["delta", "err_se", "err_empirical", "stderr", "fail_count"],
    "region-sweep": ["sigma0_2", "epsilon", "delta_dagger", "under_one"],
    "risk": ["epsilon", "alpha_dagger", "m_value"],
}

DEFAULTS = {
    "prior": "bg",
    "domain": "real",
    "epsilon": "0.1",
    "sigma_x2": "1",
    "sigma0_2": "0.01",
    "mu": "10",
    "delta_min": "0.2",
    "delta_max": "2.0",
    "delta_steps": "50",
    "n": "1000",
    "trials": "100",
    "seed": "0",
    "max_iter": "100",
    "surrogate_variance": "100",
    "lf_signal": "surrogate",
    "output": "-",
}

FIGURES = {
    "2b": {"command": "se-curve", "prior": "gaussian", "sigma_x2": "1", "sigma0_2": "0.1",
           "delta_min": "0.05", "delta_max": "3", "delta_steps": "60"},
    "3": {"command": "design", "prior": "gaussian", "sigma_x2": "1", "sigma0_2": "log:1e-4:100:61"},
    "4": {"command": "risk", "epsilon": "0.01:1:100"},
    "5": {"command": "region-sweep", "sigma_x2": "1", "sigma0_2": "0.02:1:25", "epsilon": "0.04:1:25"},
    "6": {"command": "monte-carlo", "prior": "bg", "epsilon": "0.1", "sigma_x2": "1",
          "sigma0_2": "0.01", "n": "1000", "trials": "100", "delta_min": "0.2",
          "delta_max": "1.5", "delta_steps": "15"},
}


class SpecError(ValueError):
    """Invalid experiment parameter; the message names the field."""

    def __init__(self, name, message):
        super().__init__(f"{name}: {message}")
        self.field = name


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"


def parse_grid(text, name):
    """``a,b,c`` | ``lo:hi:steps`` (linear) | ``log:lo:hi:steps`` (geometric)."""
    text = str(text).strip()
    try:
        if text.startswith("log:"):
            lo, hi, steps = text[4:].split(":")
            steps = int(steps)
            if steps < 1:
                raise ValueError
            return list(np.geomspace(float(lo), float(hi), steps))
        if ":" in text:
            lo, hi, steps = text.split(":")
            steps = int(steps)
            if steps < 1:
                raise ValueError
            return list(np.linspace(float(lo), float(hi), steps))
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise SpecError(name, f"cannot parse grid {text!r}") from None


def read_config(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SpecError("config", f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


@dataclass
class ExperimentSpec:
    command: str
    prior: str
    domain: Domain
    epsilon: list
    sigma_x2: float
    sigma0_2: list
    mu: float
    deltas: list
    n: int
    trials: int
    seed: int
    max_iter: int
    surrogate_variance: float
    lf_signal: str
    output: str

    @classmethod
    def from_values(cls, v):
        def num(name, cast=float, low=None, strict=True):
            try:
                x = cast(v[name])
            except (TypeError, ValueError):
                raise SpecError(name, f"not a number: {v[name]!r}") from None
            if low is not None and (x <= low if strict else x < low):
                raise SpecError(name, f"must be {'>' if strict else '>='} {low}, got {x}")
            return x

        command = v["command"]
        if command not in COMMANDS:
            raise SpecError("command", f"unknown command {command!r}")
        prior = str(v["prior"]).lower()
        if prior not in ("gaussian", "bg", "lf"):
            raise SpecError("prior", f"expected gaussian, bg or lf, got {prior!r}")
        try:
            domain = Domain.parse(v["domain"])
        except ValueError:
            raise SpecError("domain", f"expected real or complex, got {v['domain']!r}") from None

        epsilon = parse_grid(v["epsilon"], "epsilon")
        if not epsilon or any(not 0.0 < e <= 1.0 for e in epsilon):
            raise SpecError("epsilon", "values must lie in (0, 1]")
        sigma0_2 = parse_grid(v["sigma0_2"], "sigma0_2")
        if not sigma0_2 or any(s < 0 for s in sigma0_2):
            raise SpecError("sigma0_2", "values must be non-negative")
        if command in ("design", "region-sweep") and any(s <= 0 for s in sigma0_2):
            raise SpecError("sigma0_2", "designs need a positive noise base level")

        dmin, dmax = num("delta_min", low=0.0), num("delta_max", low=0.0)
        steps = num("delta_steps", int)
        if not dmin < dmax:
            raise SpecError("delta_min", f"grid min {dmin} must be below max {dmax}")
        if steps < 2:
            raise SpecError("delta_steps", "need at least 2 grid points")

        lf_signal = str(v["lf_signal"])
        if lf_signal not in ("surrogate", "three-point"):
            raise SpecError("lf_signal", "expected surrogate or three-point")

        return cls(
            command=command, prior=prior, domain=domain, epsilon=epsilon,
            sigma_x2=num("sigma_x2", low=0.0), sigma0_2=sigma0_2, mu=num("mu", low=0.0),
            deltas=list(np.linspace(dmin, dmax, steps)),
            n=num("n", int, low=1, strict=False), trials=num("trials", int, low=1, strict=False),
            seed=num("seed", int), max_iter=num("max_iter", int, low=1, strict=False),
            surrogate_variance=num("surrogate_variance", low=0.0), lf_signal=lf_signal,
            output=str(v["output"]),
        )

    def make_prior(self, eps):
        if self.prior == "gaussian":
            return gaussian(self.sigma_x2, self.domain)
        if self.prior == "bg":
            return bernoulli_gaussian(eps, self.sigma_x2, self.domain)
        return least_favorable(eps, self.mu, self.domain)


# --- commands ---------------------------------------------------------------

def _single(spec, name, values):
    if len(values) != 1:
        raise SpecError(name, f"{spec.command} takes a single value")
    return values[0]


def cmd_se_curve(spec):
    eps = _single(spec, "epsilon", spec.epsilon)
    noise = NoiseModel(_single(spec, "sigma0_2", spec.sigma0_2))
    p = spec.make_prior(eps)
    rows = []
    for d in spec.deltas:
        try:
            trace = se_run(p, d, noise)
            ok = trace.converged
            err = trace.states[-1].err if ok else math.nan
        except Diverged:
            ok, err = False, math.nan
        rows.append([d, err, ok])
    return rows


def cmd_design(spec):
    rows = []
    eps_values = [1.0] if spec.prior == "gaussian" else spec.epsilon
    for eps in eps_values:
        for s0 in spec.sigma0_2:
            if spec.prior == "gaussian":
                r = designer.design_gaussian(spec.sigma_x2, s0)
            elif spec.prior == "lf":
                r = designer.design_lf(eps, spec.domain, s0)
            else:
                r = designer.design_bg(eps, spec.sigma_x2, s0, spec.domain)
            sx2 = None if spec.prior == "lf" else spec.sigma_x2
            rows.append([spec.prior, spec.domain.value, eps, sx2, s0, r.delta_dagger,
                         r.err_min, r.under_one, r.under_two])
    return rows


def cmd_monte_carlo(spec):
    eps = _single(spec, "epsilon", spec.epsilon)
    noise = NoiseModel(_single(spec, "sigma0_2", spec.sigma0_2))
    p = spec.make_prior(eps)
    signal = None
    if spec.prior == "lf" and spec.lf_signal == "surrogate":
        signal = amp.lf_surrogate(eps, spec.surrogate_variance, spec.domain)
    cfg = amp.AMPConfig(max_iter=spec.max_iter)
    records = amp.monte_carlo(p, spec.n, spec.deltas, noise, spec.trials, spec.seed, cfg,
                              signal_prior=signal)
    return [[s.delta, s.err_se, s.err_empirical, s.stderr, s.fail_count]
            for s in amp.summarize(records)], records


def cmd_region_sweep(spec):
    cells = designer.region_sweep_bg(spec.sigma_x2, spec.sigma0_2, spec.epsilon, spec.domain,
                                     workers=amp.default_workers())
    return [[c.sigma0_2, c.epsilon, None if c.result is None else c.delta_dagger, c.under_one]
            for c in cells]


def cmd_risk(spec):
    rows = []
    for eps in spec.epsilon:
        alpha, m = risk.optimal_alpha(eps, spec.domain)
        rows.append([eps, alpha, m])
    return rows


def write_csv(rows, header, fh):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(fmt(v) for v in row) + "\n")


# --- argument handling ---------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="ampdesign",
        description="Optimal number of measurements under quadratically decreasing SNR.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--figure", choices=sorted(FIGURES), help="preset parameters for a figure")
    parser.add_argument("--config", help="file of key = value lines (flag names without dashes)")
    parser.add_argument("--prior", help="gaussian | bg | lf")
    parser.add_argument("--domain", help="real | complex")
    parser.add_argument("--epsilon", help="sparsity; list a,b,c or grid lo:hi:steps")
    parser.add_argument("--sigma-x2", dest="sigma_x2", help="variance of the non-zero entries")
    parser.add_argument("--sigma0-2", dest="sigma0_2", help="noise base level; list or grid")
    parser.add_argument("--mu", help="amplitude of the three-point least-favorable signal")
    parser.add_argument("--delta-min", dest="delta_min")
    parser.add_argument("--delta-max", dest="delta_max")
    parser.add_argument("--delta-steps", dest="delta_steps")
    parser.add_argument("--n", help="signal dimension for Monte Carlo")
    parser.add_argument("--trials")
    parser.add_argument("--seed", help="base seed; trial k uses seed + k")
    parser.add_argument("--max-iter", dest="max_iter", help="AMP iteration cap")
    parser.add_argument("--surrogate-variance", dest="surrogate_variance",
                        help="variance of the Bernoulli-Gaussian stand-in for lf signals")
    parser.add_argument("--lf-signal", dest="lf_signal", help="surrogate | three-point")
    parser.add_argument("--output", "-o", help="CSV path, - for stdout")
    return parser


def resolve(args):
    values = dict(DEFAULTS)
    values["command"] = None
    if args.figure:
        values.update(FIGURES[args.figure])
    if args.config:
        try:
            values.update(read_config(args.config))
        except OSError as exc:
            raise SpecError("config", str(exc)) from None
    for key, val in vars(args).items():
        if val is not None and key not in ("figure", "config"):
            values[key] = val
    if values["command"] is None:
        raise SpecError("command", "give a command or --figure")
    return ExperimentSpec.from_values(values)


def run(spec, out):
    """Execute ``spec`` writing CSV to ``out``; returns the exit code."""
    records = None
    if spec.command == "se-curve":
        rows = cmd_se_curve(spec)
    elif spec.command == "design":
        rows = cmd_design(spec)
    elif spec.command == "monte-carlo":
        rows, records = cmd_monte_carlo(spec)
    elif spec.command == "region-sweep":
        rows = cmd_region_sweep(spec)
    else:
        rows = cmd_risk(spec)
    write_csv(rows, HEADERS[spec.command], out)
    if spec.command == "monte-carlo" and any(r[4] == spec.trials for r in rows):
        return 4
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = resolve(args)
    except SpecError as exc:
        print(f"ampdesign: invalid parameter {exc}", file=sys.stderr)
        return 2
    try:
        if spec.output == "-":
            code = run(spec, sys.stdout)
        else:
            with open(spec.output, "w", newline="") as fh:
                code = run(spec, fh)
            if spec.command == "design":
                _print_design_summary(spec.output)
    except SpecError as exc:
        print(f"ampdesign: invalid parameter {exc}", file=sys.stderr)
        return 2
    except designer.NoBracket as exc:
        print(f"ampdesign: design failed: {exc}", file=sys.stderr)
        return 3
    if code == 4:
        print("ampdesign: every trial blew up at some delta", file=sys.stderr)
    return code


def _print_design_summary(path):
    with open(path) as fh:
        header, *rows = [line.rstrip("\n").split(",") for line in fh]
    idx = {k: i for i, k in enumerate(header)}
    for row in rows:
        print(f"{row[idx['prior']]} ({row[idx['domain']]}), eps={row[idx['epsilon']]}, "
              f"sigma0_2={row[idx['sigma0_2']]}: delta_dagger={float(row[idx['delta_dagger']]):.6f} "
              f"err_min={float(row[idx['err_min']]):.6g}")


if __name__ == "__main__":
    sys.exit(main())
