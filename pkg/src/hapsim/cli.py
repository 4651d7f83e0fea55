"""Command-line front end: geometry reports and CSV sweep experiments."""

from __future__ import annotations

import argparse
import sys

from .capacity import dof
from .geometry import FAR_FIELD_FACTOR, link_distances, min_hap_separation
from .scenario import Scenario, ScenarioError, dump_scenario, load_scenario
from .simulator import (
    RELAY_ALTITUDE_M,
    SnrSweepResult,
    SumRateCurve,
    find_optimal_altitude,
    run_altitude_sweep,
    run_snr_sweep,
)


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _verdict(flag: bool) -> str:
    return "yes" if flag else "no"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hapsim",
        description="Monte Carlo sum-rate experiments for a relayed "
                    "platform-to-ground MIMO network",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", required=True, metavar="PATH",
                        help="scenario YAML file")
        sp.add_argument("--seed", type=int, metavar="U64",
                        help="override master_seed")
        sp.add_argument("--trials", type=int, metavar="N",
                        help="override trials per point")
        sp.add_argument("--dump-config", action="store_true",
                        help="print the effective scenario as YAML and exit")

    sp = sub.add_parser("geometry",
                        help="print spacings, link distances, and feasibility")
    common(sp)

    sp = sub.add_parser("snr-sweep",
                        help="mean sum-rate vs transmit SNR, written as CSV")
    common(sp)
    sp.add_argument("--out", required=True, metavar="CSV", help="output file")

    sp = sub.add_parser("altitude-sweep",
                        help="mean sum-rate vs relay altitude, written as CSV")
    common(sp)
    sp.add_argument("--out", required=True, metavar="CSV", help="output file")
    sp.add_argument("--cross-check", action="store_true",
                    help="also refine the optimum by golden-section search")

    sp = sub.add_parser("optimal-altitude",
                        help="golden-section search for the best relay altitude")
    common(sp)
    sp.add_argument("--lo", type=float, metavar="M", help="lower altitude bound")
    sp.add_argument("--hi", type=float, metavar="M", help="upper altitude bound")
    sp.add_argument("--tol", type=float, metavar="M",
                    help="bracket width to stop at (default: sweep step)")
    return parser


def _cmd_geometry(scenario: Scenario) -> int:
    net = scenario.network
    lay = net.layout
    d_sd, d_sr, d_rd = link_distances(lay.hap_altitude_m, lay.relay_altitude_m,
                                      lay.gs_altitude_m)
    spacing = min_hap_separation(d_sd, net.wavelength_m,
                                 scenario.spacing_dof_beta, lay.gs_spacing_m)
    margin = FAR_FIELD_FACTOR * max(net.rx_spacing_m, net.tx_spacing_m)
    lines = [
        f"d_sd_m={_fmt(d_sd)}",
        f"d_sr_m={_fmt(d_sr)}",
        f"d_rd_m={_fmt(d_rd)}",
        f"min_hap_spacing_m={_fmt(spacing)}",
        f"hap_spacing_m={_fmt(lay.hap_spacing_m)}",
        f"hap_spacing_ok={_verdict(lay.hap_spacing_m >= spacing)}",
        f"relay_antennas_required={net.required_relay_antennas}",
        f"relay_antennas={net.relay_antennas}",
        f"relay_antennas_ok={_verdict(net.relay_antennas >= net.required_relay_antennas)}",
        f"dof_total={_fmt(dof(net.num_haps, net.num_gs, net.antennas_per_node))}",
        f"zero_forcing_feasible={_verdict(net.antennas_per_node == net.relay_antennas)}",
        f"far_field_ok={_verdict(min(d_sr, d_rd) > margin)}",
    ]
    print("\n".join(lines))
    return 0


def _all_points_failed(curve: SumRateCurve, trials: int) -> bool:
    return all(p.trials_failed == trials for p in curve.points)


def _write_csv(path: str, header: str, rows: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _snr_rows(result: SnrSweepResult) -> list[str]:
    rows = []
    for i, p in enumerate(result.relay.points):
        base = ""
        if result.baseline is not None:
            base = _fmt(result.baseline.points[i].mean_rate)
        rows.append(f"{_fmt(p.x)},{_fmt(p.mean_rate)},{_fmt(p.std_err)},"
                    f"{p.trials_failed},{base}")
    return rows


def _cmd_snr_sweep(scenario: Scenario, out_path: str) -> int:
    result = run_snr_sweep(scenario.network, scenario.sweep,
                           include_baseline=scenario.include_baseline)
    _write_csv(out_path,
               "snr_db,mean_rate_bps_hz,std_err,trials_failed,baseline_rate_bps_hz",
               _snr_rows(result))
    if _all_points_failed(result.relay, scenario.sweep.trials):
        print("error: every trial was singular at every sweep point",
              file=sys.stderr)
        return 3
    return 0


def _cmd_altitude_sweep(scenario: Scenario, out_path: str,
                        cross_check: bool) -> int:
    curve = run_altitude_sweep(scenario.network, scenario.sweep)
    rows = [f"{_fmt(p.x)},{_fmt(p.mean_rate)},{_fmt(p.std_err)},{p.trials_failed}"
            for p in curve.points]
    _write_csv(out_path, "relay_altitude_m,mean_rate_bps_hz,std_err,trials_failed",
               rows)
    if _all_points_failed(curve, scenario.sweep.trials):
        print("error: every trial was singular at every sweep point",
              file=sys.stderr)
        return 3
    print(f"optimal_altitude_m={_fmt(curve.argmax_x)}")
    if cross_check:
        refined = find_optimal_altitude(
            scenario.network, scenario.sweep.start, scenario.sweep.stop,
            scenario.sweep.step, trials=scenario.sweep.trials,
            master_seed=scenario.sweep.master_seed)
        print(f"optimal_altitude_refined_m={_fmt(refined)}")
    return 0


def _cmd_optimal_altitude(scenario: Scenario, args: argparse.Namespace) -> int:
    sweep = scenario.sweep
    lo, hi, tol = args.lo, args.hi, args.tol
    if sweep.variable == RELAY_ALTITUDE_M:
        lo = sweep.start if lo is None else lo
        hi = sweep.stop if hi is None else hi
        tol = sweep.step if tol is None else tol
    if lo is None or hi is None or tol is None:
        raise ScenarioError(
            "pass --lo/--hi/--tol or use a relay_altitude_m sweep scenario"
        )
    best = find_optimal_altitude(scenario.network, lo, hi, tol,
                                 trials=sweep.trials,
                                 master_seed=sweep.master_seed)
    print(f"optimal_altitude_m={_fmt(best)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.config)
        scenario = scenario.with_overrides(trials=args.trials,
                                           master_seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    if args.dump_config:
        sys.stdout.write(dump_scenario(scenario))
        return 0
    try:
        if args.command == "geometry":
            return _cmd_geometry(scenario)
        if args.command == "snr-sweep":
            return _cmd_snr_sweep(scenario, args.out)
        if args.command == "altitude-sweep":
            return _cmd_altitude_sweep(scenario, args.out, args.cross_check)
        return _cmd_optimal_altitude(scenario, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
