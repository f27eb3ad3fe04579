"""Command-line front end.

Subcommands:
  run-ideal     pipeline state, detector-conditioned outcomes, probabilities
  sweep-delta   failure-weight sweep as CSV/JSON, with figures beside a file
  classify      entanglement report for a three-photon state file
  oracle-check  cross-validation table against the brute-force simulator

Exit codes: 0 success, 1 usage error, 2 validation or tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import entanglement, histories, ideal, oracle
from .circuit import load_layout
from .states import load_state, save_state, state_to_json


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ghzgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_ideal = sub.add_parser("run-ideal", help="run the perfect-interference pipeline")
    group = p_ideal.add_mutually_exclusive_group()
    group.add_argument("--table1", action="store_true", help="print the entanglement table")
    group.add_argument(
        "--emit-states", metavar="DIR", help="write the reference state fixtures and exit"
    )
    p_ideal.set_defaults(handler=_cmd_run_ideal)

    p_sweep = sub.add_parser("sweep-delta", help="sweep the interference failure weight")
    p_sweep.add_argument("--points", type=int, default=101)
    p_sweep.add_argument("--min", dest="lo", type=float, default=0.0)
    p_sweep.add_argument("--max", dest="hi", type=float, default=0.5)
    p_sweep.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_sweep.add_argument("-o", "--output", metavar="PATH", help="write to a file")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--layout", metavar="PATH", help="layout override file")
    p_sweep.add_argument(
        "--no-figures",
        action="store_true",
        help="skip figure rendering when writing to a file",
    )
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_classify = sub.add_parser("classify", help="classify a three-photon state file")
    p_classify.add_argument("state", metavar="STATE_JSON")
    p_classify.set_defaults(handler=_cmd_classify)

    p_check = sub.add_parser("oracle-check", help="cross-validate against the simulator")
    p_check.add_argument("--tol", type=float, default=1e-12)
    p_check.add_argument("--layout", metavar="PATH", help="layout override file")
    p_check.set_defaults(handler=_cmd_oracle_check)

    return parser


def _pipeline_json(result: ideal.PipelineResult) -> dict:
    pairs = {histories.pair_name(out.pair): out for out in result.outcomes}
    return {
        "survivor_state": state_to_json(result.survivor),
        "probabilities": {
            "no_invasion_retention": result.retention_probability,
            "survivor_arrival": result.survivor_probability,
            "conditional": {name: out.probability for name, out in pairs.items()},
            "unconditional": {
                name: result.survivor_probability * out.probability
                for name, out in pairs.items()
            },
            "quoted_reference": ideal.QUOTED_SUCCESS_PROBABILITY,
            "quoted_reference_reproducible": False,
        },
        "outcomes": [
            {
                "pair": histories.pair_name(out.pair),
                "probability": out.probability,
                "state": state_to_json(out.state),
            }
            for out in result.outcomes
        ],
    }


def _cmd_run_ideal(args) -> int:
    result = ideal.run_pipeline()
    if args.emit_states:
        target = Path(args.emit_states)
        target.mkdir(parents=True, exist_ok=True)
        save_state(entanglement.ghz_sparse(), target / "ghz.json")
        save_state(entanglement.w_sparse(), target / "w.json")
        for out in result.outcomes:
            name = histories.pair_name(out.pair).lower()
            save_state(out.state, target / f"conditional_{name}.json")
        return 0
    if args.table1:
        print("pair    S1      S3      S5      tau     class")
        for out in result.outcomes:
            report = entanglement.classify(entanglement.PureState3.from_sparse(out.state))
            print(
                f"{histories.pair_name(out.pair):<8}"
                f"{report.s1:<8.3f}{report.s3:<8.3f}{report.s5:<8.3f}{report.tau:<8.3f}"
                f"{report.label}"
            )
        return 0
    print(json.dumps(_pipeline_json(result), indent=2))
    return 0


def _sweep_rows_to_csv(rows) -> str:
    lines = ["delta,pair,p_gen,f_postselected,f_single_occupancy"]
    for row in rows:
        lines.append(
            f"{_fmt(row.delta)},{histories.pair_name(row.pair)},"
            f"{_fmt(row.p_gen)},{_fmt(row.f_postselected)},{_fmt(row.f_single_occupancy)}"
        )
    return "\n".join(lines) + "\n"


def _sweep_rows_to_json(rows) -> str:
    payload = [
        {
            "delta": float(_fmt(row.delta)),
            "pair": histories.pair_name(row.pair),
            "p_gen": float(_fmt(row.p_gen)),
            "f_postselected": float(_fmt(row.f_postselected)),
            "f_single_occupancy": float(_fmt(row.f_single_occupancy)),
        }
        for row in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def _cmd_sweep(args) -> int:
    layout = load_layout(args.layout) if args.layout else None
    grid = histories.default_grid(args.points, args.lo, args.hi)
    rows = histories.overlap_curves(grid, layout=layout, workers=max(1, args.workers))
    text = _sweep_rows_to_json(rows) if args.json else _sweep_rows_to_csv(rows)
    if args.output:
        out_path = Path(args.output)
        out_path.write_text(text, encoding="utf-8")
        if not args.no_figures:
            from .plotting import render_sweep_figures

            stem = out_path.with_suffix("") if out_path.suffix else out_path
            render_sweep_figures(rows, stem)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_classify(args) -> int:
    state = load_state(args.state)
    pure = entanglement.PureState3.from_sparse(state, renormalize=True)
    report = entanglement.classify(pure)
    print(json.dumps(report.as_dict(), indent=2))
    return 0


def _cmd_oracle_check(args) -> int:
    layout = load_layout(args.layout) if args.layout else None
    rows = oracle.cross_checks(tol=args.tol, layout=layout)
    width = max(len(r.name) for r in rows)
    print(f"{'check':<{width}}  {'max_abs_dev':>12}  {'tol':>8}  status")
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        if not r.gating:
            status += " (info)"
        print(f"{r.name:<{width}}  {r.deviation:>12.3e}  {r.tolerance:>8.1e}  {status}")
        if r.note:
            print(f"{'':<{width}}  note: {r.note}")
    return 0 if oracle.all_gating_passed(rows) else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help/usage paths
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"ghzgen: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
