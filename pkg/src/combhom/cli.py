"""Command-line interface: sweep, predict, verify.

Exit codes: 0 success, 1 validation/config error, 2 numerical-consistency
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import engine, feynman, oracles
from .config import (ENGINE_CHOICES, FORMAT_CHOICES, PRESET_NAMES, RunConfig,
                     load_config, preset_config)
from .engine import CoincidenceTrace, DelaySweep, FrequencyGrid, sweep_direct, sweep_fft
from .errors import ConfigError, NumericalConsistencyError
from .spectral import C_UM_PER_PS, etalon_from_geometry, etalon_transfer


def _format_csv(trace: CoincidenceTrace) -> str:
    lines = ["tau_ps,rate,normalized_rate"]
    for t, r, n in zip(trace.tau, trace.raw_rate, trace.normalized_rate):
        lines.append(f"{t:.12g},{r:.12g},{n:.12g}")
    return "\n".join(lines) + "\n"


def _metadata(config: RunConfig, trace: CoincidenceTrace, extra: dict) -> dict:
    meta = {"preset": config.preset, "engine": config.engine,
            "baseline_rate": trace.baseline_rate}
    meta.update(trace.metadata)
    meta.update(extra)
    return meta


def run_sweep(config: RunConfig, check_convergence: bool = True) -> CoincidenceTrace:
    """Run the configured sweep and write the trace plus sidecar metadata."""
    extra: dict = {}
    if config.engine == "direct":
        trace = sweep_direct(config.setup, config.grid, config.sweep)
    elif config.engine == "fft":
        trace = sweep_fft(config.setup, config.grid, config.sweep)
    else:  # both: fft result, recorded against the direct reference
        direct = sweep_direct(config.setup, config.grid, config.sweep)
        trace = sweep_fft(config.setup, config.grid, config.sweep)
        delta = float(np.abs(trace.normalized_rate - direct.normalized_rate).max())
        extra["direct_fft_sup_delta"] = delta

    if check_convergence:
        report = engine.convergence_report(config.setup, config.sweep, config.grid)
        extra["convergence"] = {"delta_points": report.delta_points,
                                "delta_span": report.delta_span,
                                "tolerance": report.tolerance,
                                "passed": report.passed}
        if not report.passed:
            extra["convergence_warning"] = True
    else:
        extra["convergence"] = "skipped"

    meta = _metadata(config, trace, extra)
    if config.out_path:
        if config.out_format == "csv":
            with open(config.out_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(_format_csv(trace))
            with open(config.out_path + ".meta.json", "w", encoding="utf-8") as fh:
                json.dump(meta, fh, indent=2)
                fh.write("\n")
        else:
            payload = {"metadata": meta,
                       "tau_ps": trace.tau.tolist(),
                       "rate": trace.raw_rate.tolist(),
                       "normalized_rate": trace.normalized_rate.tolist()}
            with open(config.out_path, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
    return replace(trace, metadata=meta)


def run_predict(delta_phi: float, reflectivity: float, coherence_time: float,
                j_max: int, round_trip_time: float, equal_weights: bool,
                out=sys.stdout) -> list:
    predictions = feynman.predict_trace_skeleton(
        delta_phi, reflectivity, coherence_time, round_trip_time, j_max,
        equal_weights=equal_weights)
    out.write(f"{'j':>3} {'tau_ps':>9} {'relative_rate':>14} {'class':>6}\n")
    for p in predictions:
        tau_j = 0.5 * p.j * round_trip_time
        out.write(f"{p.j:>3} {tau_j:>9.4f} {p.relative_rate:>14.6f} "
                  f"{p.classification.value:>6}\n")
    return predictions


def _check_hom_closed_form(quick: bool):
    """Engine against the closed-form no-etalon HOM dip."""
    hom = preset_config("hom")
    grid = hom.grid if not quick else FrequencyGrid(1024, hom.grid.span)
    sweep = DelaySweep(-3.0, 3.0, 241)
    trace = sweep_fft(hom.setup, grid, sweep)
    ref = oracles.hom_closed_form(hom.setup, trace.tau)
    delta = float(np.abs(trace.normalized_rate - ref).max())
    return "hom_closed_form", delta < 1e-3, f"sup delta {delta:.2e}"


def _check_classifications(quick: bool):
    """Engine feature signs at tau_j against the firing-scheme classifications.

    Uses a long pump (scheme amplitudes stay coherent) and the standard etalon,
    the regime where the simplified model applies.
    """
    from dataclasses import replace

    base = preset_config("fig3a").setup
    base = replace(base, pump=replace(base.pump, duration_fwhm=20.0))
    grid = FrequencyGrid(1024 if quick else 2048,
                         5.0 * base.filter.intensity_sigma)
    t_round = base.etalon.round_trip_time
    j_top = 2 if quick else 4
    mismatches = []
    for dphi in (0.0, 0.5 * math.pi, math.pi):
        setup = replace(base, etalon=replace(base.etalon, tune_phase=dphi))
        arrays = engine._EngineArrays.build(setup, grid)
        for j in range(j_top + 1):
            n = 1.0 - arrays.interference(0.5 * j * t_round) / arrays.baseline
            predicted = feynman.relative_rate(
                j, dphi, base.etalon.reflectivity,
                pump_coherence_time=base.pump.coherence_time,
                round_trip_time=t_round).classification
            if predicted is feynman.Feature.FLAT:
                ok = abs(n - 1.0) < 0.05
            elif predicted is feynman.Feature.DIP:
                ok = n < 1.0 - 0.01
            else:
                ok = n > 1.0 + 0.01
            if not ok:
                mismatches.append(f"j={j} dphi={dphi:.3f}: "
                                  f"norm {n:.4f} vs {predicted.value}")
    detail = "; ".join(mismatches) if mismatches else f"j <= {j_top}, all phases agree"
    return "engine_feynman_signs", not mismatches, detail


def _verify_checks(quick: bool):
    """Yield (name, passed, detail) for every oracle check."""
    # Etalon geometry: 100 um spacing gives the 1500 GHz comb.
    et = etalon_from_geometry(100.0, 0.0, 0.9)
    fsr_thz = 1.0 / et.round_trip_time
    yield ("fsr_from_geometry", abs(fsr_thz / 1.5 - 1.0) < 5e-3,
           f"FSR {fsr_thz:.5f} THz vs 1.5 THz")

    # Anti-resonance magnitude is (1-R)/(1+R) exactly.
    omega0 = 2396.0
    anti = math.pi / et.round_trip_time  # half an FSR from a transmission maximum
    mag = abs(etalon_transfer(np.array([anti]), et, omega0)[0])
    expected = (1.0 - et.reflectivity) / (1.0 + et.reflectivity)
    yield ("anti_resonance_magnitude", abs(mag - expected) < 1e-12,
           f"|f_e| {mag:.12f} vs {expected:.12f}")

    # Parseval: spectral mean of |f_e|^2 equals the geometric intensity sum.
    mean_i = oracles.mean_transfer_intensity(et, omega0)
    yield ("parseval_mean_intensity", abs(mean_i - expected) < 1e-6,
           f"mean |f_e|^2 {mean_i:.9f} vs {expected:.9f}")

    # Firing-scheme model against literal enumeration.
    worst = 0.0
    for j in range(9):
        for dphi in np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False):
            for r, equal in ((0.9, False), (0.5, False), (0.0, True)):
                w = [1.0] * (j + 1) if equal else [r**m for m in range(j + 1)]
                ref = oracles.brute_force_schemes(j, dphi, w)
                got = feynman.relative_rate(j, dphi, r, equal_weights=equal).relative_rate
                worst = max(worst, abs(ref - got))
    yield ("feynman_brute_force", worst < 1e-12, f"max |delta| {worst:.2e}")

    yield _check_hom_closed_form(quick)
    yield _check_classifications(quick)

    # Fast path against direct quadrature on the presets.
    names = ("fig3a",) if quick else PRESET_NAMES
    for name in names:
        cfg = preset_config(name)
        grid = cfg.grid if not quick else FrequencyGrid(1024, cfg.grid.span)
        sweep = cfg.sweep if not quick else DelaySweep(cfg.sweep.start, cfg.sweep.end, 120)
        direct = sweep_direct(cfg.setup, grid, sweep)
        fast = sweep_fft(cfg.setup, grid, sweep)
        delta = float(np.abs(fast.normalized_rate - direct.normalized_rate).max()
                      / np.abs(direct.normalized_rate).max())
        yield (f"fft_vs_direct_{name}", delta < 1e-6, f"rel sup delta {delta:.2e}")

    # Grid convergence on the presets (full mode only; it is the slow check).
    if not quick:
        for name in PRESET_NAMES:
            cfg = preset_config(name)
            report = engine.convergence_report(cfg.setup, cfg.sweep, cfg.grid)
            yield (f"convergence_{name}", report.passed,
                   f"points {report.delta_points:.2e}, span {report.delta_span:.2e}")


def run_verify(quick: bool = False, out=sys.stdout) -> int:
    failures = 0
    for name, passed, detail in _verify_checks(quick):
        status = "PASS" if passed else "FAIL"
        out.write(f"{status} {name}: {detail}\n")
        failures += 0 if passed else 1
    out.write(f"{'all checks passed' if failures == 0 else f'{failures} check(s) failed'}\n")
    return 0 if failures == 0 else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combhom",
                                     description="Coincidence-rate simulation for a "
                                                 "HOM interferometer with an intracavity etalon")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a delay sweep and write the trace")
    sweep.add_argument("--config", help="flat key = value config file")
    sweep.add_argument("--preset", choices=PRESET_NAMES)
    sweep.add_argument("--tau-start", type=float)
    sweep.add_argument("--tau-end", type=float)
    sweep.add_argument("--steps", type=int)
    sweep.add_argument("--grid", type=int, help="points per axis")
    sweep.add_argument("--span-sigma", type=float,
                       help="grid half-width in filter intensity sigmas")
    sweep.add_argument("--engine", choices=ENGINE_CHOICES)
    sweep.add_argument("--out", help="output path")
    sweep.add_argument("--format", choices=FORMAT_CHOICES)
    sweep.add_argument("--no-convergence", action="store_true",
                       help="skip the convergence self-test in the metadata")

    predict = sub.add_parser("predict", help="firing-scheme dip/peak/flat table")
    predict.add_argument("--delta-phi", type=float, required=True,
                         help="inter-pulse phase in rad")
    predict.add_argument("--reflectivity", type=float, default=0.9)
    predict.add_argument("--coherence-time", type=float, default=math.inf,
                         help="pump coherence time in ps")
    predict.add_argument("--j-max", type=int, default=6)
    predict.add_argument("--round-trip-time", type=float,
                         default=2.0 * 100.0 / C_UM_PER_PS)
    predict.add_argument("--equal-weights", action="store_true",
                         help="high-reflectivity limit with unit weights")

    verify = sub.add_parser("verify", help="run the oracle suite")
    verify.add_argument("--quick", action="store_true",
                        help="smaller grids, fewer presets")
    return parser


def _config_from_args(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
    elif args.preset:
        config = preset_config(args.preset)
    else:
        raise ConfigError("sweep needs --config or --preset")
    setup, grid, sweep = config.setup, config.grid, config.sweep
    if args.grid is not None or args.span_sigma is not None:
        span = (args.span_sigma * setup.filter.intensity_sigma
                if args.span_sigma is not None else grid.span)
        grid = FrequencyGrid(points_per_axis=args.grid or grid.points_per_axis, span=span)
    if any(v is not None for v in (args.tau_start, args.tau_end, args.steps)):
        sweep = DelaySweep(
            start=args.tau_start if args.tau_start is not None else sweep.start,
            end=args.tau_end if args.tau_end is not None else sweep.end,
            steps=args.steps if args.steps is not None else sweep.steps)
    return replace(config, grid=grid, sweep=sweep,
                   engine=args.engine or config.engine,
                   out_path=args.out or config.out_path,
                   out_format=args.format or config.out_format)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            config = _config_from_args(args)
            trace = run_sweep(config, check_convergence=not args.no_convergence)
            if not config.out_path:
                sys.stdout.write(_format_csv(trace))
            return 0
        if args.command == "predict":
            run_predict(args.delta_phi, args.reflectivity, args.coherence_time,
                        args.j_max, args.round_trip_time, args.equal_weights)
            return 0
        if args.command == "verify":
            return run_verify(quick=args.quick)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalConsistencyError as exc:
        print(f"numerical consistency failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
