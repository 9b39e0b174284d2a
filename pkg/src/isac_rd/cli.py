"""Command-line entry point: ``isac-rd {validate-rmt,rd-curve,asymptotics}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import commands
from .core import ALL_SCHEMES, SchemeSpec, SystemConfig, db_to_linear
from .montecarlo import DEFAULT_TRIALS, McConfig
from .outputs import load_run_config

log = logging.getLogger("isac_rd")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat JSON file with M, N, T, rho|snr_db, "
                   "trials, seed, batch; flags override it")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--trials", type=int, help=f"Monte Carlo trials (default {DEFAULT_TRIALS})")
    p.add_argument("--batch", type=int, help="trials per worker task")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def _system(p: argparse.ArgumentParser) -> None:
    p.add_argument("--M", type=int, help="transmit antennas (default 12)")
    p.add_argument("--N", type=int, help="receive antennas (default 12)")
    p.add_argument("--T", type=float, help="coherence block length (default 30)")
    p.add_argument("--snr-db", type=float, help="total SNR in dB (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isac-rd", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-rmt", help="Monte Carlo check of the large-system DAS MSE")
    _common(p)
    p.add_argument("--gamma", type=float, default=0.25, help="aspect ratio M / T_d")
    p.add_argument("--c", type=float, default=2.0, help="pilot prior gain")
    p.add_argument("--M-list", type=int, nargs="+", default=list(commands.DEFAULT_RMT_M))
    p.add_argument("--N-list", type=int, nargs="+", help="defaults to the M values")
    p.add_argument("--rho-d-db", type=float, nargs="+",
                   default=[float(x) for x in commands.DEFAULT_RHO_D_DB])

    p = sub.add_parser("rd-curve", help="rate-distortion frontier CSVs")
    _common(p)
    _system(p)
    p.add_argument("--scheme", action="append", choices=[s.slug for s in ALL_SCHEMES],
                   help="repeatable; default is all four")
    p.add_argument("--grid", type=int, default=20, help="points per curve")
    p.add_argument("--extend", action="store_true",
                   help="continue each curve past D_star to D_max")

    p = sub.add_parser("asymptotics", help="low/high-SNR effective SNR tables")
    _common(p)
    _system(p)
    p.add_argument("--K", type=float, nargs="+", default=list(commands.DEFAULT_K))
    p.add_argument("--rho-db", type=float, nargs="+", default=list(commands.DEFAULT_RHO_DB))
    return parser


def _resolve(args: argparse.Namespace) -> tuple[dict, McConfig]:
    cfg = load_run_config(args.config)
    for key in ("seed", "trials", "batch"):
        if getattr(args, key, None) is not None:
            cfg[key] = getattr(args, key)
    for key in ("M", "N", "T"):
        if getattr(args, key, None) is not None:
            cfg[key] = getattr(args, key)
    if getattr(args, "snr_db", None) is not None:
        cfg.pop("rho", None)
        cfg["snr_db"] = args.snr_db
    mc = McConfig(trials=int(cfg.get("trials", DEFAULT_TRIALS)), seed=int(cfg.get("seed", 0)),
                  batch=cfg.get("batch"))
    return cfg, mc


def _system_config(cfg: dict) -> SystemConfig:
    rho = cfg["rho"] if "rho" in cfg else db_to_linear(cfg.get("snr_db", 5.0))
    return SystemConfig(M=int(cfg.get("M", 12)), N=int(cfg.get("N", 12)),
                        T=float(cfg.get("T", 30)), rho=float(rho))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg, mc = _resolve(args)
        if args.command == "validate-rmt":
            manifest = commands.cmd_validate_rmt(args.gamma, args.c, args.M_list, args.rho_d_db,
                                                 mc, args.out, args.N_list)
        elif args.command == "rd-curve":
            schemes = [SchemeSpec.from_slug(s) for s in args.scheme] if args.scheme \
                else list(ALL_SCHEMES)
            manifest = commands.cmd_rd_curve(_system_config(cfg), schemes, args.grid, mc,
                                             args.out, extend=args.extend)
        else:
            manifest = commands.cmd_asymptotics(args.K, args.rho_db, args.out,
                                                _system_config(cfg))
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1
    for path in manifest.output_paths:
        log.info("wrote %s", path)
    if not commands.all_checks_pass(manifest):
        failed = [k for k, ok in manifest.checks.items() if not ok]
        log.error("internal checks failed: %s", ", ".join(failed) or "missing outputs")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
