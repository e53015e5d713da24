"""Command line front end.

Three subcommands: `plan` runs one planning attempt and writes the
result document, `bench` repeats it over a block of seeds and emits a
CSV with a trailing mean row, `scc-ladder` prints the work counters of
the incremental component index on growing random insertion sequences.

Exit codes for `plan`: 0 when a plan was found, 2 when the search ended
without one (budget exhausted or the formula admits no run at all),
1 for any input problem. Timing goes to stderr only, so the result JSON
is byte-stable for a fixed configuration.
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .buchi import translate
from .inc_scc import insertion_work_ladder
from .ltl import LtlSyntaxError, parse_formula
from .planner import PlannerParams, plan
from .product import UnsatisfiableError
from .workspace import Environment, RadiusSchedule, load_environment

__all__ = ["RunConfig", "run", "bench", "scc_ladder", "main"]

DEFAULT_LADDER = (1_000, 4_000, 16_000)


@dataclass(frozen=True)
class RunConfig:
    """One planning invocation, fully specified."""

    env_path: str
    formula: str
    seed: int = 0
    max_iterations: int = 100_000
    connection_ratio: float = 2.0
    safety: float = 0.5
    step: float = math.inf
    out_path: Optional[str] = None
    plot_path: Optional[str] = None
    self_loop_termination: bool = True
    defer_scc: bool = False


def _prepare(config: RunConfig):
    """Load and validate everything a run needs; ValueError means the
    configuration (not the search) is at fault."""
    env = load_environment(config.env_path)
    formula = parse_formula(config.formula)
    if config.plot_path is not None and env.dimension != 2:
        raise ValueError("--plot needs a 2-dimensional environment")
    schedule = RadiusSchedule.for_environment(
        env, ratio=config.connection_ratio, safety=config.safety
    )
    params = PlannerParams(
        bounds=schedule,
        step=config.step,
        max_iterations=config.max_iterations,
        seed=config.seed,
        self_loop_termination=config.self_loop_termination,
        defer_scc=config.defer_scc,
    )
    return env, translate(formula), params


def run(config: RunConfig) -> int:
    """Plan once, write the result JSON (stdout or --out), report timing
    on stderr, optionally render the 2-D picture."""
    try:
        env, buchi, params = _prepare(config)
    except (OSError, LtlSyntaxError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    try:
        report = plan(env, buchi, params)
    except UnsatisfiableError as err:
        print(f"no plan: {err}", file=sys.stderr)
        return 2
    document = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if config.out_path is None:
        sys.stdout.write(document)
    else:
        with open(config.out_path, "w", encoding="utf-8") as handle:
            handle.write(document)
    print(
        f"seconds: total={report.seconds:.3f} "
        f"geometry={report.geometry_seconds:.3f} "
        f"search={report.search_seconds:.3f}",
        file=sys.stderr,
    )
    if config.plot_path is not None:
        with open(config.plot_path, "w", encoding="utf-8") as handle:
            handle.write(render_svg(env, report))
    if report.plan is None:
        print("no plan: iteration budget exhausted", file=sys.stderr)
        return 2
    return 0


def bench(config: RunConfig, trials: int = 20) -> List[dict]:
    """Run `trials` seeds (config.seed upward) and collect per-seed rows:
    iterations, sizes, and timing, mirroring the planner report."""
    env, buchi, params = _prepare(config)
    rows = []
    for offset in range(trials):
        seeded = PlannerParams(
            bounds=params.bounds,
            step=params.step,
            max_iterations=params.max_iterations,
            seed=config.seed + offset,
            self_loop_termination=params.self_loop_termination,
            defer_scc=params.defer_scc,
        )
        report = plan(env, buchi, seeded)
        rows.append(
            {
                "seed": config.seed + offset,
                "solved": int(report.plan is not None),
                "iterations": report.iterations,
                "states": report.num_states,
                "transitions": report.num_transitions,
                "product_states": report.num_product_states,
                "product_edges": report.num_product_edges,
                "seconds_total": report.seconds,
                "seconds_search": report.search_seconds,
            }
        )
    return rows


def _write_bench_csv(rows: List[dict], stream) -> None:
    fields = list(rows[0].keys())
    writer = csv.DictWriter(stream, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        writer.writerow(_round_row(row))
    mean = {"seed": "mean"}
    for key in fields[1:]:
        mean[key] = sum(row[key] for row in rows) / len(rows)
    writer.writerow(_round_row(mean))


def _round_row(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, float):
            out[key] = f"{value:.4f}"
        else:
            out[key] = value
    return out


def scc_ladder(sizes: Sequence[int] = DEFAULT_LADDER, seed: int = 0) -> List[dict]:
    return insertion_work_ladder(sizes, seed=seed)


def _write_ladder_csv(rows: List[dict], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=["edges", "vertices", "steps", "ratio"])
    writer.writeheader()
    for row in rows:
        writer.writerow(_round_row(dict(row)))


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage problems; this front end
    # reserves 2 for "no plan", so route usage problems to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--env", required=True, help="environment JSON path")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="formula text")
    group.add_argument("--spec-file", help="file containing the formula")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-iters", type=int, default=100_000)
    parser.add_argument("--c", type=float, default=2.0, dest="ratio",
                        help="outer/inner connection radius ratio (default 2.0)")
    parser.add_argument("--safety", type=float, default=0.5,
                        help="fraction of the conservative radius bound (default 0.5)")
    parser.add_argument("--step", type=float, default=math.inf,
                        help="steering reach; inf goes all the way to the sample")
    parser.add_argument("--out", help="result path (default stdout)")
    parser.add_argument("--allow-self-loop", type=_parse_bool, default=True,
                        metavar="BOOL",
                        help="self-looping accepting product states end the search")
    parser.add_argument("--defer-scc", type=_parse_bool, default=False,
                        metavar="BOOL",
                        help="delay cycle bookkeeping until an accepting state exists")


def _read_formula(args) -> str:
    if args.spec is not None:
        return args.spec
    with open(args.spec_file, "r", encoding="utf-8") as handle:
        return handle.read()


def _config_from(args, plot=None) -> RunConfig:
    return RunConfig(
        env_path=args.env,
        formula=_read_formula(args),
        seed=args.seed,
        max_iterations=args.max_iters,
        connection_ratio=args.ratio,
        safety=args.safety,
        step=args.step,
        out_path=args.out,
        plot_path=plot,
        self_loop_termination=args.allow_self_loop,
        defer_scc=args.defer_scc,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _Parser(prog="ltlplan",
                     description="Plan infinite trajectories satisfying LTL formulas "
                                 "over labeled box regions.")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("plan", parents=[], help="run the planner once")
    _add_run_flags(run_parser)
    run_parser.add_argument("--plot", help="SVG output path (2-D environments only)")

    bench_parser = commands.add_parser("bench", help="repeat a run over many seeds")
    _add_run_flags(bench_parser)
    bench_parser.add_argument("--trials", type=int, default=20)

    ladder_parser = commands.add_parser("scc-ladder",
                                        help="work counters of the component index "
                                             "on random insertion ladders")
    ladder_parser.add_argument("--sizes", default=",".join(str(m) for m in DEFAULT_LADDER),
                               help="comma-separated edge counts")
    ladder_parser.add_argument("--seed", type=int, default=0)
    ladder_parser.add_argument("--out", help="CSV path (default stdout)")

    args = parser.parse_args(argv)

    if args.command == "plan":
        try:
            return run(_config_from(args, plot=args.plot))
        except OSError as err:
            print(f"error: {err}", file=sys.stderr)
            return 1

    if args.command == "bench":
        try:
            config = _config_from(args)
            if args.trials < 1:
                raise ValueError("--trials must be at least 1")
            rows = bench(config, trials=args.trials)
        except (OSError, LtlSyntaxError, ValueError, UnsatisfiableError) as err:
            print(f"error: {err}", file=sys.stderr)
            return 1
        if config.out_path is None:
            _write_bench_csv(rows, sys.stdout)
        else:
            with open(config.out_path, "w", encoding="utf-8", newline="") as handle:
                _write_bench_csv(rows, handle)
        return 0

    try:
        sizes = [int(part) for part in args.sizes.split(",") if part.strip()]
        if not sizes:
            raise ValueError("--sizes needs at least one edge count")
        rows = scc_ladder(sizes, seed=args.seed)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.out is None:
        _write_ladder_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            _write_ladder_csv(rows, handle)
    return 0


# ---------------------------------------------------------------------------
# 2-D picture


def _svg_y(value: float, lo: float, hi: float, size: float) -> float:
    # SVG grows downward; flip the vertical axis.
    return size - (value - lo) / (hi - lo) * size


def _svg_x(value: float, lo: float, hi: float, size: float) -> float:
    return (value - lo) / (hi - lo) * size


def render_svg(env: Environment, report) -> str:
    """Draw domain, labeled regions, the grown graph, and the plan (when
    present) with the suffix loop emphasized. Returns the SVG text."""
    size = 640.0
    lo = env.domain.lo
    hi = env.domain.hi

    def px(point):
        return (
            _svg_x(float(point[0]), float(lo[0]), float(hi[0]), size),
            _svg_y(float(point[1]), float(lo[1]), float(hi[1]), size),
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" '
        f'height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect x="0" y="0" width="{size:.0f}" height="{size:.0f}" '
        f'fill="white" stroke="black"/>',
    ]
    for region in env.regions:
        x0, y1 = px(region.box.lo)
        x1, y0 = px(region.box.hi)
        parts.append(
            f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
            f'height="{y1 - y0:.2f}" fill="#c8d8f0" stroke="#336" opacity="0.8"/>'
        )
        label = ",".join(sorted(region.labels)) or region.name
        parts.append(
            f'<text x="{(x0 + x1) / 2:.2f}" y="{(y0 + y1) / 2:.2f}" '
            f'font-size="14" text-anchor="middle">{label}</text>'
        )

    tsys = report.tsys
    for source, target in tsys.transitions():
        sx, sy = px(tsys.point(source))
        tx, ty = px(tsys.point(target))
        parts.append(
            f'<line x1="{sx:.2f}" y1="{sy:.2f}" x2="{tx:.2f}" y2="{ty:.2f}" '
            f'stroke="#bbb" stroke-width="0.6"/>'
        )
    for state in range(len(tsys)):
        cx, cy = px(tsys.point(state))
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="1.8" fill="#555"/>')

    if report.plan is not None:
        for states, color, width in (
            (report.plan.prefix, "#2a7", 2.0),
            (report.plan.suffix + (report.plan.suffix[0],), "#d22", 2.5),
        ):
            for a, b in zip(states, states[1:]):
                ax, ay = px(tsys.point(a))
                bx, by = px(tsys.point(b))
                parts.append(
                    f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                    f'stroke="{color}" stroke-width="{width}"/>'
                )

    x0, y0 = px(tsys.point(tsys.initial))
    parts.append(f'<circle cx="{x0:.2f}" cy="{y0:.2f}" r="4" fill="#d22"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
