"""Command-line front end.

Precedence of settings: figure presets < ``--config`` file (flat
``key = value`` lines, keys spelled like the long flags) < explicit flags.
Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .amplitude import PhysicalParams, ReservoirParams, SteadyStateError, alpha_from_physical
from .cspecfun import DomainError
from .entanglement import HorizonError, InitialBellState, esd_beta_threshold, esd_time
from .modes import IntegrationError
from .sweep import SweepError, SweepSpec, parse_grid, run_figure, run_oracle_compare, run_sweep, write_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (SteadyStateError, IntegrationError, HorizonError, SweepError, OverflowError, DomainError)

# flag name -> (dest, converter)
_CONFIG_KEYS = {
    "family": ("family", str),
    "delta": ("delta", float),
    "beta2-grid": ("beta2_grid", str),
    "t-grid": ("t_grid", str),
    "out": ("out", str),
    "jobs": ("jobs", int),
    "oracle": ("oracle", lambda v: v.strip().lower() in ("1", "true", "yes", "on")),
    "n-modes": ("n_modes", int),
    "cutoff-w": ("cutoff_w", float),
    "horizon": ("horizon", float),
}


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file (``#`` starts a comment)."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        dest, convert = _CONFIG_KEYS[key]
        values[dest] = convert(value)
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--family", choices=["phi", "psi"], default=None)
    p.add_argument("--delta", type=float, default=None, help="detuning in units of alpha^2")
    p.add_argument("--beta2-grid", default=None, help="start:stop:step or comma list")
    p.add_argument("--t-grid", default=None, help="alpha^2 t grid, start:stop:step or comma list")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--oracle", action="store_true", default=None, help="also run the mode oracle")
    p.add_argument("--n-modes", type=int, default=None)
    p.add_argument("--cutoff-w", type=float, default=None, help="mode bandwidth in units of alpha^2")
    p.add_argument("--horizon", type=float, default=None, help="ESD horizon in alpha^2 t")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbgent",
        description="Two-atom concurrence dynamics near an anisotropic photonic band edge.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="reproduce one of figures 1-7 (CSV + plot script)")
    fig.add_argument("id", type=int, choices=range(1, 8))
    _add_common(fig)

    sweep = sub.add_parser("sweep", help="concurrence over a (beta^2, alpha^2 t) grid")
    _add_common(sweep)

    esd = sub.add_parser("esd-threshold", help="finite-time disentanglement threshold in beta^2")
    _add_common(esd)

    oracle = sub.add_parser("oracle-compare", help="mode oracle vs closed-form |c(t)|")
    _add_common(oracle)
    oracle.add_argument("--t-end", type=float, default=10.0)
    oracle.add_argument("--dt", type=float, default=None)
    oracle.add_argument("--refine", action="store_true", help="add a run with n_modes, W doubled")

    phys = sub.add_parser("alpha-from-physical", help="dimensionless parameters from physical inputs")
    phys.add_argument("--omega0", type=float, required=True)
    phys.add_argument("--omega-c", type=float, required=True)
    phys.add_argument("--A", type=float, required=True, dest="A")
    phys.add_argument("--d", type=float, required=True)
    phys.add_argument("--epsilon0", type=float, required=True)
    return parser


def _resolve(args, defaults: dict) -> dict:
    merged = dict(defaults)
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in _CONFIG_KEYS.values():
        dest = key[0]
        value = getattr(args, dest, None)
        if value is not None:
            merged[dest] = value
    return merged


def _oracle_settings(cfg: dict) -> dict:
    out = {}
    if "n_modes" in cfg:
        out["n_modes"] = cfg["n_modes"]
    if "cutoff_w" in cfg:
        out["cutoff_W"] = cfg["cutoff_w"]
        # keep the step resolving the fastest phase as the band widens
        out["oracle_dt"] = 0.25 / cfg["cutoff_w"]
    return out


def _cmd_figure(args) -> int:
    cfg = _resolve(args, {"out": "figures", "jobs": 1, "oracle": False})
    path_csv, path_script = run_figure(
        args.id,
        cfg["out"],
        beta_sq_grid=parse_grid(cfg["beta2_grid"]) if "beta2_grid" in cfg else None,
        t_grid=parse_grid(cfg["t_grid"]) if "t_grid" in cfg else None,
        delta_over_alpha_sq=cfg.get("delta"),
        family=cfg.get("family"),
        oracle=cfg["oracle"],
        jobs=cfg["jobs"],
        **_oracle_settings(cfg),
    )
    print(path_csv)
    print(path_script)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _resolve(args, {"family": "phi", "delta": 1.0, "beta2_grid": "0:1:0.02",
                          "t_grid": "0:15:0.05", "out": ".", "jobs": 1, "oracle": False})
    spec = SweepSpec(
        family=cfg["family"],
        delta_over_alpha_sq=cfg["delta"],
        beta_sq_grid=parse_grid(cfg["beta2_grid"]),
        t_grid=parse_grid(cfg["t_grid"]),
        oracle=cfg["oracle"],
        **_oracle_settings(cfg),
    )
    records = run_sweep(spec, jobs=cfg["jobs"])
    path = write_csv(records, Path(cfg["out"]) / "sweep.csv")
    print(path)
    return EXIT_OK


def _cmd_esd(args) -> int:
    cfg = _resolve(args, {"delta": 1.0, "horizon": 50.0})
    params = ReservoirParams.scaled(cfg["delta"])
    threshold = esd_beta_threshold(params)
    print(f"delta_over_alpha2={cfg['delta']:.12g} beta2_threshold={threshold:.6f}")
    if "beta2_grid" in cfg:
        for b2 in parse_grid(cfg["beta2_grid"]):
            state = InitialBellState.from_beta_sq(cfg.get("family", "psi"), b2)
            t = esd_time(state, params, horizon=cfg["horizon"])
            shown = "none" if t is None else f"{t:.6f}"
            print(f"beta2={b2:.12g} esd_alpha2_t={shown}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    cfg = _resolve(args, {"delta": -1.0, "out": "oracle", "n_modes": 10_000, "cutoff_w": 1.0e3})
    dt = args.dt if args.dt is not None else 0.25 / cfg["cutoff_w"]
    report = run_oracle_compare(
        ReservoirParams.scaled(cfg["delta"]),
        cfg["out"],
        n_modes=cfg["n_modes"],
        cutoff_W=cfg["cutoff_w"],
        t_end=args.t_end,
        dt=dt,
        refine=args.refine,
    )
    print(report.report_path.read_text(), end="")
    return EXIT_OK


def _cmd_physical(args) -> int:
    params = alpha_from_physical(
        PhysicalParams(omega0=args.omega0, omega_c=args.omega_c, A=args.A, d=args.d, epsilon0=args.epsilon0)
    )
    print(f"alpha_sq={params.alpha_sq:.17g}")
    print(f"delta={params.delta:.17g}")
    print(f"delta_over_alpha2={params.delta_over_alpha_sq:.17g}")
    return EXIT_OK


_COMMANDS = {
    "figure": _cmd_figure,
    "sweep": _cmd_sweep,
    "esd-threshold": _cmd_esd,
    "oracle-compare": _cmd_oracle,
    "alpha-from-physical": _cmd_physical,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _NUMERICAL_ERRORS as exc:
        print(f"pbgent: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"pbgent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
