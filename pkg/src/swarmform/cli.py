"""Command-line interface.

Subcommands:
  gains     synthesise feedback gains for a plant / pole set and print the
            polynomial cross-checks
  run       execute one scenario file and write trace.csv, report.txt and
            SVG plots into an output directory
  compare   run the same scenario under several interaction variants and
            print their RMS-velocity changes side by side
  sweep     re-run a scenario over a range of one scalar parameter
            (runs execute concurrently; rows stay ordered by value)

Exit codes: 0 success, 2 usage or validation error, 3 simulation abort.
"""

import argparse
import concurrent.futures
import os
import sys
from pathlib import Path

import numpy as np

from . import engine, output, scenario as scen
from .errors import ScenarioError, SimulationAbort, SwarmformError
from .interaction import InteractionVariant
from .modal import (PoleSpec, closed_loop_polynomial, desired_polynomial,
                    direct_gain_formula, place_gains, poles_from_spec)
from .plant import PlantParams


def _fmt(v):
    return format(v, ".12g")


def cmd_gains(args):
    plant = PlantParams(args.kp, args.kd, args.g)
    spec = PoleSpec(args.rl, args.iml, args.imr)
    poles = poles_from_spec(spec)
    gains = place_gains(plant, poles, k1=args.k1)
    desired = desired_polynomial(poles)
    closed = closed_loop_polynomial(plant, gains)
    residual = max(abs(c - d) / max(1.0, abs(d)) for c, d in zip(closed, desired))
    direct = direct_gain_formula(plant, poles)

    print(f"k_pos: {_fmt(gains.k_pos)}")
    print(f"k_vel: {_fmt(gains.k_vel)}")
    print(f"k_tilt: {_fmt(gains.k_tilt)}")
    print(f"k_rate: {_fmt(gains.k_rate)}")
    print(f"k1: {_fmt(gains.k1)}")
    print("desired_polynomial:", " ".join(_fmt(c) for c in desired))
    print("closed_loop_polynomial:", " ".join(_fmt(c) for c in closed))
    print(f"residual: {_fmt(residual)}")
    print("direct_formula:", " ".join(_fmt(v) for v in direct))
    print("direct_formula_note: entries 1/2 are k_vel/k_pos (transposed); "
          "entry 3 = 1 + k_tilt; entry 4 = k_rate")
    return 0


def _load_scenario(path, overrides=None):
    p = Path(path)
    if not p.is_file():
        raise ScenarioError(f"scenario file not found: {path}")
    text = p.read_text()
    return scen.parse_scenario_with(text, overrides or {})


def _write_outputs(out_dir, trace, metrics, scenario):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.csv").write_text(output.write_trace(trace))
    (out / "report.txt").write_text(output.write_report(metrics, scenario))
    vel_cols = [f"agent{i}_vel" for i in range(trace.n_agents)] + ["rms"]
    (out / "velocities.svg").write_text(
        output.render_svg(trace, vel_cols, title="agent velocities and swarm RMS"))
    dist_cols = [f"pair{k}_d" for k in range(len(scenario.edges))] or ["pair0_d"]
    (out / "distances.svg").write_text(
        output.render_svg(trace, dist_cols, title="pair separations"))


def cmd_run(args):
    overrides = {}
    if args.dt is not None:
        overrides["sim.dt"] = args.dt
    if args.t_end is not None:
        overrides["sim.t_end"] = args.t_end
    scenario = _load_scenario(args.scenario, overrides)
    trace, metrics = engine.run(scenario)
    _write_outputs(args.out, trace, metrics, scenario)
    delta = "undefined" if metrics.delta_rms is None else _fmt(metrics.delta_rms)
    print(f"wrote trace.csv, report.txt, velocities.svg, distances.svg to {args.out}")
    print(f"delta_rms: {delta}")
    print(f"coupling_events: {output.format_events(metrics.coupling_events)}")
    print(f"uncoupling_events: {output.format_events(metrics.uncoupling_events)}")
    return 0


def cmd_compare(args):
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    if not variants:
        raise ScenarioError("interaction.variant: no variants given")
    known = {v.value for v in InteractionVariant}
    for v in variants:
        if v not in known:
            raise ScenarioError(
                f"interaction.variant: unknown variant {v!r} (one of: {', '.join(sorted(known))})")
    deltas = []
    for v in variants:
        scenario = _load_scenario(args.scenario, {"interaction.variant": v})
        _, metrics = engine.run(scenario)
        deltas.append(metrics.delta_rms)
        delta = "undefined" if metrics.delta_rms is None else _fmt(metrics.delta_rms)
        reason = f" ({metrics.delta_reason})" if metrics.delta_rms is None else ""
        print(f"variant: {v}")
        print(f"  delta_rms: {delta}{reason}")
        print(f"  coupling_events: {output.format_events(metrics.coupling_events)}")
        print(f"  uncoupling_events: {output.format_events(metrics.uncoupling_events)}")
    for i in range(len(variants) - 1):
        a, b = deltas[i], deltas[i + 1]
        if a is None or b is None or b == 0:
            ratio = "n/a"
        else:
            ratio = _fmt(a / b)
        print(f"ratio delta_rms({variants[i]})/delta_rms({variants[i + 1]}): {ratio}")
    return 0


def _sweep_worker(task):
    text, key, value = task
    try:
        scenario = scen.parse_scenario_with(text, {key: value})
        _, metrics = engine.run(scenario)
    except ScenarioError as err:
        return (value, f"error: {err}", 0, None, None, None)
    except SimulationAbort as err:
        return (value, f"abort: {err}", 0, None, None, None)
    coupled = 1 if metrics.coupling_events else 0
    t_c = metrics.coupling_events[0][1] if metrics.coupling_events else None
    t_u = metrics.uncoupling_events[0][1] if metrics.uncoupling_events else None
    return (value, "ok", coupled, metrics.delta_rms, t_c, t_u)


def cmd_sweep(args):
    if not scen.is_scalar_key(args.param):
        print(f"error: parameter {args.param!r} is not sweepable "
              "(must be a scalar scenario key, e.g. interaction.c_max)", file=sys.stderr)
        return 2
    if args.steps < 1:
        print("error: --steps must be >= 1", file=sys.stderr)
        return 2
    p = Path(args.scenario)
    if not p.is_file():
        raise ScenarioError(f"scenario file not found: {args.scenario}")
    text = p.read_text()
    values = [float(v) for v in np.linspace(args.start, args.stop, args.steps)]
    tasks = [(text, args.param, v) for v in values]

    if len(tasks) > 1:
        workers = min(len(tasks), os.cpu_count() or 1)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    else:
        results = [_sweep_worker(tasks[0])]

    lines = ["value,status,coupled,delta_rms,first_coupling_t,first_uncoupling_t"]
    for value, status, coupled, delta, t_c, t_u in results:
        status = status.replace(",", ";").replace("\n", " ")
        lines.append(",".join([
            format(value, ".12g"),
            status,
            str(coupled),
            "undefined" if delta is None else format(delta, ".12g"),
            "none" if t_c is None else format(t_c, ".12g"),
            "none" if t_u is None else format(t_u, ".12g"),
        ]))
    csv = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(csv)
        print(f"wrote {len(results)} rows to {args.out}")
    else:
        sys.stdout.write(csv)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="swarmform",
        description="deterministic 1-D swarm-formation coupling simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gains", help="synthesise feedback gains")
    p.add_argument("--kp", type=float, required=True, help="angle-loop gain (1/s)")
    p.add_argument("--kd", type=float, required=True, help="rate-loop gain (1/s)")
    p.add_argument("--g", type=float, required=True, help="gravity (m/s^2)")
    p.add_argument("--rl", type=float, required=True, help="damped-pair real part (>= 0)")
    p.add_argument("--iml", type=float, required=True, help="damped-pair imaginary part")
    p.add_argument("--imr", type=float, required=True, help="undamped-pair imaginary part (> 0)")
    p.add_argument("--k1", type=float, default=None, help="interaction stiffness override")
    p.set_defaults(func=cmd_gains)

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("scenario", help="scenario file path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dt", type=float, default=None, help="override sim.dt")
    p.add_argument("--t-end", type=float, default=None, dest="t_end", help="override sim.t_end")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run a scenario under several variants")
    p.add_argument("scenario", help="scenario file path")
    p.add_argument("--variants", required=True,
                   help="comma-separated variant names (repulsion, attraction, "
                        "switching_step, switching_smooth)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="sweep one scalar scenario parameter")
    p.add_argument("scenario", help="scenario file path")
    p.add_argument("--param", required=True, help="dotted scenario key, e.g. interaction.c_max")
    p.add_argument("--from", type=float, required=True, dest="start", help="first value")
    p.add_argument("--to", type=float, required=True, dest="stop", help="last value")
    p.add_argument("--steps", type=int, required=True, help="number of values")
    p.add_argument("--out", default=None, help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SimulationAbort as err:
        print(f"simulation aborted: {err}", file=sys.stderr)
        return 3
    except SwarmformError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
