"""Command-line front end: simulate / estimate / montecarlo / theory.

The CLI only parses arguments, moves bytes and calls the library; it
adds no numeric processing, so its outputs match direct library calls
bit for bit. Exit codes: 0 success, 2 configuration error, 3 data
error; messages go to standard error. Omitting --seed selects a fresh
seed and echoes it so any run can be reproduced afterwards.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .core import EstimatorConfig, SampledPath
from .dataio import (
    DataFormatError,
    ingest_csv,
    load_json,
    write_estimates_csv,
    write_path_csv,
    write_summary_csv,
    write_truth_csv,
)
from .estimators import (
    BV_FLOOR,
    adaptive_u,
    bipower_variation,
    debiased_iv,
    integrated_vol,
    panel_debiased_daily,
    realized_vol,
    truncated_rv,
    truncation_threshold,
)
from .montecarlo import DEFAULT_REPS, ESTIMATOR_TAGS, McScenario, run_study
from .simulation import SimScenario, simulate_sv_path
from .theory import (
    StableTailParams,
    cosine_power_integral,
    jump_bias,
    jump_bias_cf,
    sine_power_integral,
)

__all__ = ["main"]


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _resolve_threads(value: int | None) -> int | None:
    if value is not None:
        return value
    env = os.environ.get("CHARVOL_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(2, f"CHARVOL_THREADS must be an integer, got {env!r}") from None
    return None


def _resolve_seed(cli_seed, config_seed=None) -> tuple[int, bool]:
    """(seed, was_generated); a fresh seed is drawn when neither source has one."""
    if cli_seed is not None:
        return int(cli_seed), False
    if config_seed is not None:
        return int(config_seed), False
    return int.from_bytes(os.urandom(8), "big") >> 1, True


def _echo_seed(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)


# ----------------------------------------------------------------------
# simulate
# ----------------------------------------------------------------------


def cmd_simulate(args) -> int:
    config = load_json(args.config) if args.config else {}
    if args.grid is not None and args.delta is not None:
        raise CliError(2, "give either --grid or --delta, not both")
    seed, generated = _resolve_seed(args.seed, config.get("seed"))
    if generated:
        _echo_seed(seed)
    merged = dict(config)
    merged["seed"] = seed
    if args.grid is not None:
        merged["delta"] = 1.0 / args.grid
    elif args.delta is not None:
        merged["delta"] = args.delta
    merged.setdefault("delta", 1.0 / 2400)
    for name in ("days", "beta", "eta", "c0", "cir_kappa", "cir_theta", "cir_sigma", "substeps"):
        value = getattr(args, name)
        if value is not None:
            merged[name] = value
    merged.setdefault("days", 1)
    merged.setdefault("beta", 1.5)
    merged.setdefault("eta", 0.0)
    scenario = SimScenario.from_dict(merged)

    out = simulate_sv_path(scenario)
    prefix = args.out or "sim"
    path_csv = f"{prefix}_path.csv"
    truth_csv = f"{prefix}_truth.csv"
    meta_json = f"{prefix}_meta.json"
    write_path_csv(path_csv, out.path)
    write_truth_csv(truth_csv, out.true_iv)
    meta = {
        "scenario": scenario.to_dict(),
        "seed": seed,
        "path_csv": path_csv,
        "truth_csv": truth_csv,
    }
    with open(meta_json, "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")
    return 0


# ----------------------------------------------------------------------
# estimate
# ----------------------------------------------------------------------


def _split_days(path: SampledPath) -> list[SampledPath]:
    """Unit-time day windows; a shorter-than-a-day path is one window.

    A trailing partial day is dropped (daily estimates are only
    comparable over full days).
    """
    per_day = 1.0 / path.delta
    full_days = int(math.floor(path.duration + 1e-9))
    if full_days == 0 or abs(per_day - round(per_day)) > 1e-6:
        return [path]
    m = round(per_day)
    return [
        SampledPath(path.values[d * m : (d + 1) * m + 1], path.delta, t0=path.t0 + d)
        for d in range(full_days)
    ]


def _estimate_rows(args, day_paths, delta):
    rows = []
    tags = args.estimator
    need_bv = any(t in ("trv", "cf", "cf-debiased") for t in tags)
    if need_bv:
        bv = [
            max(bipower_variation(p, 0.0, p.duration), BV_FLOOR) for p in day_paths
        ]
    nan = float("nan")
    for tag in tags:
        if tag == "cf-panel":
            ests = panel_debiased_daily(
                day_paths, args.kn, zeta=args.zeta, level=args.level
            )
            for d, e in enumerate(ests):
                rows.append((d, tag, e.value, e.avar, e.ci_low, e.ci_high, e.u, e.flags))
            continue
        for d, p in enumerate(day_paths):
            dur = p.duration
            if tag == "rv":
                rows.append((d, tag, realized_vol(p, dur), nan, nan, nan, nan, ()))
            elif tag == "bv":
                rows.append(
                    (d, tag, bipower_variation(p, 0.0, dur), nan, nan, nan, nan, ())
                )
            elif tag == "trv":
                thr = (
                    args.threshold
                    if args.threshold is not None
                    else truncation_threshold(bv[d - 1] if d > 0 else bv[0], delta)
                )
                rows.append((d, tag, truncated_rv(p, dur, thr), nan, nan, nan, nan, ()))
            else:
                u = args.u if args.u is not None else adaptive_u(
                    bv[d - 1] if d > 0 else bv[0], delta
                )
                cfg = EstimatorConfig(k_n=args.kn, u=u, zeta=args.zeta, kappa=args.kappa)
                e = (
                    integrated_vol(p, cfg, dur, args.level)
                    if tag == "cf"
                    else debiased_iv(p, cfg, dur, args.level)
                )
                rows.append((d, tag, e.value, e.avar, e.ci_low, e.ci_high, e.u, e.flags))
    rows.sort(key=lambda r: (r[0], tags.index(r[1])))
    return rows


def cmd_estimate(args) -> int:
    tags = args.estimator
    unknown = [t for t in tags if t not in ESTIMATOR_TAGS]
    if unknown:
        raise CliError(2, f"unknown estimator(s) {unknown}; valid: {list(ESTIMATOR_TAGS)}")
    if any(t.startswith("cf") for t in tags) and args.kn is None:
        raise CliError(2, "--kn is required for cf estimators")
    if args.u is not None and "cf-panel" in tags:
        raise CliError(2, "cf-panel tunes u per day; --u does not apply")
    path = ingest_csv(
        args.data,
        time_col=args.time_col,
        price_col=args.price_col,
        logprice_col=args.logprice_col,
        delta=args.delta,
    )
    day_paths = _split_days(path)
    rows = _estimate_rows(args, day_paths, path.delta)
    write_estimates_csv(args.out, rows)
    return 0


# ----------------------------------------------------------------------
# montecarlo
# ----------------------------------------------------------------------


def _parse_study(config: dict) -> list[McScenario]:
    raw = config.get("scenarios")
    if not raw:
        raise CliError(2, "study config needs a nonempty 'scenarios' list")
    out = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise CliError(2, f"scenario {i}: must be an object")
        entry = dict(entry)
        sid = entry.pop("id", None)
        k_n = entry.pop("k_n", None)
        entry.setdefault("seed", 0)
        scen = SimScenario.from_dict(entry)
        if sid is None:
            sid = f"beta{scen.beta:g}_eta{scen.eta:g}_m{scen.obs_per_day}"
        out.append(McScenario(sid, scen, int(k_n) if k_n is not None else None))
    return out


def cmd_montecarlo(args) -> int:
    config = load_json(args.config)
    scenarios = _parse_study(config)
    reps = args.reps if args.reps is not None else int(config.get("reps", DEFAULT_REPS))
    estimators = (
        args.estimators.split(",")
        if args.estimators
        else list(config.get("estimators", ESTIMATOR_TAGS))
    )
    seed, generated = _resolve_seed(args.seed, config.get("seed"))
    if generated:
        _echo_seed(seed)
    threads = _resolve_threads(args.threads)
    result = run_study(
        scenarios,
        reps,
        estimators,
        master_seed=seed,
        threads=threads,
        level=float(config.get("level", 0.95)),
        zeta=float(config.get("zeta", 1.5)),
        return_errors=args.full is not None,
    )
    if args.full is not None:
        summaries, errors = result
        doc = {}
        for (sid, tag), err in errors.items():
            doc.setdefault(sid, {})[tag] = err.tolist()
        with open(args.full, "w", encoding="utf-8") as f:
            json.dump(doc, f, sort_keys=True)
            f.write("\n")
    else:
        summaries = result
    write_summary_csv(args.out, summaries)
    return 0


# ----------------------------------------------------------------------
# theory
# ----------------------------------------------------------------------


def cmd_theory(args) -> int:
    out = {}
    explicit = args.chi or args.chi_prime
    if args.chi or (not explicit and 0.0 < args.beta < 2.0):
        out["chi"] = sine_power_integral(args.beta)
    if args.chi_prime or (not explicit and 1.0 < args.beta < 3.0):
        out["chi_prime"] = cosine_power_integral(args.beta)
    if args.gamma is not None and args.eta is not None:
        raise CliError(2, "give either --gamma or --eta, not both")
    if args.gamma is not None:
        bias = jump_bias(
            StableTailParams(args.beta, abs(args.gamma), -abs(args.gamma)),
            args.u,
            args.bias_delta,
            args.t,
        )
        out["A"], out["A_prime"] = bias.symmetrized, bias.nonsymmetrized
    elif args.eta is not None:
        bias = jump_bias_cf(args.eta, args.beta, args.u, args.bias_delta, args.t)
        out["A"], out["A_prime"] = bias.symmetrized, bias.nonsymmetrized
    if not out:
        raise CliError(2, f"nothing to compute for beta={args.beta:g}")
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0


# ----------------------------------------------------------------------
# parser and entry point
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="charvol",
        description="Characteristic-function estimation of integrated volatility "
        "under infinite-variation jumps.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate the SV-plus-stable-jumps model")
    sim.add_argument("--grid", type=int, help="observations per day (delta = 1/grid)")
    sim.add_argument("--delta", type=float, help="observation spacing in days")
    sim.add_argument("--days", type=int)
    sim.add_argument("--beta", type=float, help="jump activity index in (1,2)")
    sim.add_argument("--eta", type=float, help="jump scale")
    sim.add_argument("--c0", type=float)
    sim.add_argument("--cir-kappa", dest="cir_kappa", type=float)
    sim.add_argument("--cir-theta", dest="cir_theta", type=float)
    sim.add_argument("--cir-sigma", dest="cir_sigma", type=float)
    sim.add_argument("--substeps", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--config", help="JSON file with scenario fields")
    sim.add_argument("--out", help="output prefix (default: sim)")
    sim.set_defaults(func=cmd_simulate)

    est = sub.add_parser("estimate", help="estimate daily integrated volatility from a CSV")
    est.add_argument("data", help="price CSV (time + price or logprice columns)")
    est.add_argument(
        "--estimator",
        action="append",
        required=True,
        help=f"repeatable; one of {', '.join(ESTIMATOR_TAGS)}",
    )
    est.add_argument("--kn", type=int, help="block length (required for cf estimators)")
    est.add_argument("--u", type=float, help="fixed CF argument (default: adaptive per day)")
    est.add_argument("--zeta", type=float, default=1.5)
    est.add_argument("--kappa", type=int, default=1, choices=(1, 2))
    est.add_argument("--level", type=float, default=0.95)
    est.add_argument("--threshold", type=float, help="fixed truncation level for trv")
    est.add_argument("--delta", type=float, help="override the inferred spacing")
    est.add_argument("--time-col", dest="time_col", default="time")
    est.add_argument("--price-col", dest="price_col")
    est.add_argument("--logprice-col", dest="logprice_col")
    est.add_argument("--out", default="estimates.csv")
    est.set_defaults(func=cmd_estimate)

    mc = sub.add_parser("montecarlo", help="run a replication study from a JSON config")
    mc.add_argument("--config", required=True, help="study JSON")
    mc.add_argument("--reps", type=int)
    mc.add_argument("--estimators", help="comma-separated tags (overrides config)")
    mc.add_argument("--seed", type=int)
    mc.add_argument("--threads", type=int)
    mc.add_argument("--full", help="also write per-replication errors to this JSON file")
    mc.add_argument("--out", default="mc_summary.csv")
    mc.set_defaults(func=cmd_montecarlo)

    th = sub.add_parser("theory", help="bias functionals and constants as JSON")
    th.add_argument("--beta", type=float, required=True)
    th.add_argument("--chi", action="store_true", help="only the sine power integral")
    th.add_argument(
        "--chi-prime", dest="chi_prime", action="store_true",
        help="only the cosine power integral",
    )
    th.add_argument("--gamma", type=float, help="stable tail scale (symmetric)")
    th.add_argument("--eta", type=float, help="stable CF scale")
    th.add_argument("--u", type=float, default=1.0)
    th.add_argument(
        "--delta", dest="bias_delta", type=float, default=1.0 / 2400,
        help="observation spacing for the bias formulas",
    )
    th.add_argument("--t", type=float, default=1.0)
    th.add_argument("--out")
    th.set_defaults(func=cmd_theory)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except DataFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
