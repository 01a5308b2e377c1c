"""Command-line front end: figure-style experiment runners with CSV output.

Every sweep writes a CSV plus a JSON manifest carrying the fully resolved
parameter set, seed, and package version, which is enough to reproduce the
CSV byte for byte.  Parameters resolve in three layers: built-in defaults,
then a flat ``key = value`` config file, then command-line flags.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .channel import SystemGeometry, channel_stream, normalize, sample_channels
from .esr import esr_from_rates, realization_rates
from .solver import SolverConfig, bcam_solve

CSV_HEADER = (
    "sweep_var",
    "variant",
    "qos_exponent",
    "esr",
    "asr",
    "std_error",
    "n_realizations",
    "seed",
)


class ConfigError(Exception):
    pass


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def _parse_str(text: str) -> str:
    return str(text)


_SCHEMA = {
    "n": int,
    "n_ris": int,
    "d_ab_h": float,
    "d_ae_h": float,
    "d_ai": float,
    "d_v": float,
    "xi_ai": float,
    "xi_ib": float,
    "xi_ie": float,
    "xi_ab": float,
    "xi_ae": float,
    "pl_ref_db": float,
    "d_ref": float,
    "p_dbw": float,
    "sigma2_dbw": float,
    "seed": int,
    "realizations": int,
    "threads": int,
    "esr_base": _parse_str,
    "max_iters": int,
    "rel_tol": float,
    "multi_start": int,
    "init_mode": _parse_str,
    "qos_list": _parse_float_list,
    "d_list": _parse_float_list,
    "nris_list": _parse_int_list,
    "n_list": _parse_int_list,
    "out": _parse_str,
}

DEFAULTS = {
    "n": 4,
    "n_ris": 32,
    "d_ab_h": 40.0,
    "d_ae_h": 44.0,
    "d_ai": 50.0,
    "d_v": 2.0,
    "xi_ai": 2.2,
    "xi_ib": 2.5,
    "xi_ie": 2.5,
    "xi_ab": 3.5,
    "xi_ae": 3.5,
    "pl_ref_db": -30.0,
    "d_ref": 1.0,
    "p_dbw": 15.0,
    "sigma2_dbw": -75.0,
    "seed": 12345,
    "realizations": 1000,
    "threads": 1,
    "esr_base": "two",
    "max_iters": 100,
    "rel_tol": 1e-4,
    "multi_start": 1,
    "init_mode": "all-ones",
}

SUB_DEFAULTS = {
    "convergence": {"d_ab_h": 10.0, "realizations": 50, "out": "convergence.csv"},
    "distance-sweep": {
        "d_list": [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0],
        "qos_list": [0.0, 10.0, 50.0],
        "out": "distance-sweep.csv",
    },
    "qos-sweep": {
        "qos_list": [float(q) for q in range(10, 101, 10)],
        "n_list": [1, 2, 3, 4],
        "out": "qos-sweep.csv",
    },
    "nris-sweep": {
        "nris_list": [8, 16, 32, 64, 128, 256],
        "qos_list": [10.0, 20.0, 60.0],
        "out": "nris-sweep.csv",
    },
    "solve-one": {},
}


def parse_config_file(path: str) -> dict:
    """Flat ``key = value`` file; '#' starts a comment, blank lines ignored."""
    out: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _SCHEMA[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return out


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update(SUB_DEFAULTS[command])
    if args.config is not None:
        cfg.update(parse_config_file(args.config))
    for flag in ("seed", "realizations", "threads", "esr_base", "out"):
        value = getattr(args, flag, None)
        if value is not None:
            cfg[flag] = value
    if cfg.get("esr_base") not in ("two", "natural"):
        raise ConfigError(f"esr_base must be 'two' or 'natural', got {cfg.get('esr_base')!r}")
    for key in ("n", "realizations", "threads", "max_iters", "multi_start"):
        if cfg[key] < 1:
            raise ConfigError(f"{key} must be at least 1, got {cfg[key]}")
    if cfg["n_ris"] < 0:
        raise ConfigError(f"n_ris must be non-negative, got {cfg['n_ris']}")
    return cfg


def _geometry(cfg: dict, d_ab_h: float | None = None) -> SystemGeometry:
    try:
        return SystemGeometry(
            d_ab_h=cfg["d_ab_h"] if d_ab_h is None else d_ab_h,
            d_ae_h=cfg["d_ae_h"],
            d_ai=cfg["d_ai"],
            d_v=cfg["d_v"],
            xi_ai=cfg["xi_ai"],
            xi_ib=cfg["xi_ib"],
            xi_ie=cfg["xi_ie"],
            xi_ab=cfg["xi_ab"],
            xi_ae=cfg["xi_ae"],
            pl_ref_db=cfg["pl_ref_db"],
            d_ref=cfg["d_ref"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _solver_config(cfg: dict) -> SolverConfig:
    try:
        return SolverConfig(
            max_iters=cfg["max_iters"],
            rel_tol=cfg["rel_tol"],
            init_mode=cfg["init_mode"],
            multi_start=cfg["multi_start"],
            seed=cfg["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _powers(cfg: dict) -> tuple[float, float]:
    return 10.0 ** (cfg["p_dbw"] / 10.0), 10.0 ** (cfg["sigma2_dbw"] / 10.0)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_manifest(command: str, cfg: dict) -> None:
    manifest = {
        "command": command,
        "parameters": {k: cfg[k] for k in sorted(cfg)},
        "version": __version__,
    }
    with open(cfg["out"] + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _esr_rows(rates, sweep_var, variant, qos_list, cfg) -> list[tuple]:
    asr = math.fsum(rates) / rates.size
    if rates.size > 1:
        std_error = float(np.std(rates, ddof=1)) / math.sqrt(rates.size)
    else:
        std_error = 0.0
    rows = []
    for q in qos_list:
        esr = asr if q == 0 else esr_from_rates(rates, q, cfg["esr_base"])
        rows.append(
            (sweep_var, variant, q, esr, asr, std_error, int(rates.size), cfg["seed"])
        )
    return rows


def run_convergence(cfg: dict) -> list[tuple]:
    """Per-iteration secrecy rate of every realization, one row per iteration."""
    geom = _geometry(cfg)
    scfg = _solver_config(cfg)
    p, sigma2 = _powers(cfg)
    rows = []
    for i in range(cfg["realizations"]):
        rng = channel_stream(cfg["seed"], i)
        nc = normalize(sample_channels(geom, cfg["n"], cfg["n_ris"], sigma2, sigma2, rng))
        result = bcam_solve(nc, p, scfg)
        for k, f_val in enumerate(result.objective_trace):
            rows.append((i, k, math.log2(f_val)))
    return rows


def run_distance_sweep(cfg: dict) -> list[tuple]:
    """Effective secrecy rate against receiver distance, with and without surface."""
    scfg = _solver_config(cfg)
    p, sigma2 = _powers(cfg)
    rows = []
    for d in cfg["d_list"]:
        geom = _geometry(cfg, d_ab_h=d)
        for variant, n_ris in (("ris", cfg["n_ris"]), ("no-ris", 0)):
            rates, _ = realization_rates(
                geom, cfg["n"], n_ris, sigma2, p, scfg,
                cfg["realizations"], cfg["seed"], cfg["threads"],
            )
            rows.extend(_esr_rows(rates, d, variant, cfg["qos_list"], cfg))
    return rows


def run_qos_sweep(cfg: dict) -> list[tuple]:
    """Effective secrecy rate against the QoS exponent for several array sizes."""
    scfg = _solver_config(cfg)
    p, sigma2 = _powers(cfg)
    geom = _geometry(cfg)
    rows = []
    for n in cfg["n_list"]:
        for variant, n_ris in (("ris", cfg["n_ris"]), ("no-ris", 0)):
            rates, _ = realization_rates(
                geom, n, n_ris, sigma2, p, scfg,
                cfg["realizations"], cfg["seed"], cfg["threads"],
            )
            for q in cfg["qos_list"]:
                rows.extend(
                    _esr_rows(rates, q, f"{variant}-n{n}", [q], cfg)
                )
    return rows


def run_nris_sweep(cfg: dict) -> list[tuple]:
    """Effective secrecy rate against the surface size; surface-free baseline too."""
    scfg = _solver_config(cfg)
    p, sigma2 = _powers(cfg)
    geom = _geometry(cfg)
    baseline, _ = realization_rates(
        geom, cfg["n"], 0, sigma2, p, scfg,
        cfg["realizations"], cfg["seed"], cfg["threads"],
    )
    rows = []
    for m in cfg["nris_list"]:
        rates, _ = realization_rates(
            geom, cfg["n"], m, sigma2, p, scfg,
            cfg["realizations"], cfg["seed"], cfg["threads"],
        )
        rows.extend(_esr_rows(rates, m, "ris", cfg["qos_list"], cfg))
        rows.extend(_esr_rows(baseline, m, "no-ris", cfg["qos_list"], cfg))
    return rows


def run_solve_one(cfg: dict) -> None:
    """Solve a single seeded realization and print the solution."""
    geom = _geometry(cfg)
    scfg = _solver_config(cfg)
    p, sigma2 = _powers(cfg)
    rng = channel_stream(cfg["seed"], 0)
    nc = normalize(sample_channels(geom, cfg["n"], cfg["n_ris"], sigma2, sigma2, rng))
    result = bcam_solve(nc, p, scfg)
    print(f"objective f      : {float(result.objective)!r}")
    print(f"secrecy rate     : {float(result.secrecy_rate)!r} bits/s/Hz")
    print(f"iterations       : {result.iterations} (converged={result.converged})")
    print(f"beamformer power : {float(abs(result.w.w @ result.w.w.conj().T)):.6f} W")
    print("beamformer w     :")
    for value in result.w.w:
        print(f"  {value.real:+.6f} {value.imag:+.6f}j")
    print("phases (radians) :")
    for value in result.theta.theta:
        print(f"  {cmath.phase(value) % (2.0 * math.pi):.6f}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-secrecy",
        description="Secrecy-rate experiments for a surface-assisted wiretap link",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("convergence", "per-iteration objective traces over realizations"),
        ("distance-sweep", "sweep the receiver distance"),
        ("qos-sweep", "sweep the QoS exponent and array size"),
        ("nris-sweep", "sweep the number of surface elements"),
        ("solve-one", "solve and print a single realization"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--realizations", type=int, help="Monte-Carlo realizations")
        sp.add_argument("--threads", type=int, help="worker processes")
        sp.add_argument("--esr-base", dest="esr_base", choices=("two", "natural"),
                        help="exponential-moment base")
        sp.add_argument("--out", help="output CSV path")
    return parser


_RUNNERS = {
    "convergence": (run_convergence, ("realization", "iteration", "secrecy_rate")),
    "distance-sweep": (run_distance_sweep, CSV_HEADER),
    "qos-sweep": (run_qos_sweep, CSV_HEADER),
    "nris-sweep": (run_nris_sweep, CSV_HEADER),
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args.command, args)
        if args.command == "solve-one":
            run_solve_one(cfg)
            return 0
        runner, header = _RUNNERS[args.command]
        rows = runner(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    _write_csv(cfg["out"], header, rows)
    _write_manifest(args.command, cfg)
    print(f"wrote {len(rows)} rows to {cfg['out']}")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
