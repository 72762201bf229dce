"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 input error, 3 failed internal
consistency check, 4 search budget exceeded. Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import experiments, fixtures
from .attribution import AXIOMS, check_axioms
from .cycles import analyze_cycles, summarize_mixed_cycles
from .errors import (
    BudgetExceededError,
    DegenerateDistributionError,
    DocumentSyntaxError,
    HacError,
    InternalCheckError,
    SchemaError,
    ValidationError,
)
from .estimation import (
    estimate_epistemic_autonomy,
    estimate_executive_autonomy,
    estimate_info_autonomy,
    evaluative_autonomy,
    social_autonomy,
)
from .fileio import (
    format_real,
    parse_attribution_document,
    parse_hac_document,
    parse_scm_document,
    parse_table_document,
    read_action_log,
    read_belief_pairs,
    read_comm_counts,
    read_info_log,
    read_utility_pair,
    write_records,
)
from .horizon import analyze as analyze_hac
from .scm import (
    LinearCyclicScm,
    MixtureCycle,
    contraction_check,
    interaction_residual_closed_form,
    interaction_residual_mc,
    residual_lower_bound,
    verify_dilution,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3
EXIT_BUDGET = 4

OUT_DIR_ENV = "HACGOV_OUT"

HAC_RECORD_HEADER = (
    "index",
    "seed",
    "p",
    "cai",
    "lambda_hat",
    "c_min_size",
    "horizon",
    "combined_horizon",
    "budget",
    "deficit",
    "classification",
)

THETA_HEADER = ("theta", "lambda_hat", "horizon", "budget", "deficit", "classification")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(prog="hacgov", description=__doc__)
    parser.add_argument(
        "--format",
        choices=("text", "records"),
        default="text",
        help="human-readable text or machine-readable CSV records",
    )
    strictness = parser.add_mutually_exclusive_group()
    strictness.add_argument(
        "--strict",
        dest="strict",
        action="store_true",
        default=True,
        help="reject unknown document fields (default)",
    )
    strictness.add_argument(
        "--lenient",
        dest="strict",
        action="store_false",
        help="warn about unknown document fields instead of rejecting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="horizon report for a collective")
    p.add_argument("hac_file")

    p = sub.add_parser("cycles", help="elementary and mixed cycles of a collective")
    p.add_argument("hac_file")
    p.add_argument("--budget", type=int, default=None, help="cap on enumerated circuits")

    p = sub.add_parser("audit", help="axiom audit of an attribution against a table")
    p.add_argument("attr_file")
    p.add_argument("table_file")
    p.add_argument("--tau", type=float, default=0.05)

    p = sub.add_parser("scm", help="structural-model lab")
    scm_sub = p.add_subparsers(dest="scm_command", required=True)
    q = scm_sub.add_parser("check", help="contraction diagnostics")
    q.add_argument("scm_file")
    q = scm_sub.add_parser("residual", help="interaction residual, closed form and sampled")
    q.add_argument("scm_file")
    q.add_argument("--samples", type=int, default=20000)
    q.add_argument("--seed", type=int, default=experiments.SEED_OF_RECORD)
    q = scm_sub.add_parser("dilution", help="epistemic-dilution bound check")
    q.add_argument("scm_file")
    q.add_argument("--samples", type=int, default=200000)
    q.add_argument("--seed", type=int, default=experiments.SEED_OF_RECORD)

    p = sub.add_parser("experiment", help="reproducible synthetic studies")
    p.add_argument("mode", choices=("phase", "weights", "tau", "theta"))
    p.add_argument("--config", default=None, help="experiment config YAML")
    p.add_argument("--seed", type=int, default=None, help="override the master seed")
    p.add_argument("--out", default=None, help="output directory for record files")
    p.add_argument("--hac", default=None, help="fixture file for the theta sweep")
    p.add_argument(
        "--published",
        default=None,
        help="comma-separated compound-autonomy column to validate via the budget identity",
    )

    p = sub.add_parser("estimate", help="autonomy estimation from logs")
    p.add_argument(
        "measure", choices=("epistemic", "executive", "evaluative", "social", "beta")
    )
    p.add_argument("log_file")

    return parser


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError([(path, str(exc))]) from exc


def _emit_warnings(warnings):
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)


def _cmd_analyze(args):
    warnings = []
    hac = parse_hac_document(_read(args.hac_file), strict=args.strict, warnings=warnings)
    _emit_warnings(warnings)
    summary = summarize_mixed_cycles(hac.graph, hac.kinds())
    report = analyze_hac(hac, summary)
    if args.format == "records":
        row = {
            "index": 0,
            "seed": "",
            "p": "",
            "cai": report.cai,
            "lambda_hat": report.lambda_hat,
            "c_min_size": report.c_min_size,
            "horizon": report.horizon,
            "combined_horizon": report.combined_horizon,
            "budget": report.budget,
            "deficit": report.deficit,
            "classification": report.classification,
        }
        from .fileio import render_records

        sys.stdout.write(render_records(HAC_RECORD_HEADER, [row]))
        return EXIT_OK
    humans, machines = hac.humans(), hac.artificials()
    print(f"collective: {len(humans)} human, {len(machines)} artificial agents")
    print(f"collective autonomy index: {format_real(report.cai)}")
    if report.centrality_warning:
        print("warning: all artificial out-degrees are zero; index pinned to 0", file=sys.stderr)
    if report.c_min_size is None:
        print("mixed cycles: none")
        print(f"classification: {report.classification}")
        return EXIT_OK
    print(f"smallest mixed cycle size: {report.c_min_size}")
    print(f"min compound autonomy: {format_real(report.lambda_hat)}")
    print(f"accountability horizon: {format_real(report.horizon)}")
    print(f"combined horizon (tau={format_real(hac.tau)}): {format_real(report.combined_horizon)}")
    print(f"epistemic budget: {format_real(report.budget)}")
    print(f"accountability deficit: {format_real(report.deficit)}")
    print(f"margin to horizon: {format_real(report.horizon - report.lambda_hat)}")
    if report.margin_used > 0.0:
        print(f"classification margin: {format_real(report.margin_used)}")
    print(f"classification: {report.classification}")
    return EXIT_OK


def _cmd_cycles(args):
    warnings = []
    hac = parse_hac_document(_read(args.hac_file), strict=args.strict, warnings=warnings)
    _emit_warnings(warnings)
    kwargs = {}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    report = analyze_cycles(hac.graph, hac.kinds(), **kwargs)
    mixed = set(report.mixed_cycles)
    if args.format == "records":
        from .fileio import render_records

        rows = [
            {
                "cycle": "->".join(c),
                "length": len(c),
                "mixed": str(c in mixed),
            }
            for c in report.all_cycles
        ]
        sys.stdout.write(render_records(("cycle", "length", "mixed"), rows))
        return EXIT_OK
    print(f"elementary cycles: {len(report.all_cycles)}")
    for c in report.all_cycles:
        tag = "mixed" if c in mixed else "pure"
        print(f"  ({', '.join(c)}) [{tag}]")
    print(f"mixed cycles: {report.mixed_count}")
    if report.c_min_size is not None:
        print(f"smallest mixed cycle size: {report.c_min_size}")
        print(f"mixed-cycle agents: {', '.join(sorted(report.m_star))}")
    return EXIT_OK


def _cmd_audit(args):
    warnings = []
    attr = parse_attribution_document(_read(args.attr_file), strict=args.strict, warnings=warnings)
    table = parse_table_document(_read(args.table_file), strict=args.strict, warnings=warnings)
    _emit_warnings(warnings)
    for note in table.faithfulness_warnings():
        print(f"warning: faithfulness: {note}", file=sys.stderr)
    report = check_axioms(attr, table, args.tau)
    if args.format == "records":
        from .fileio import render_records

        rows = []
        for otype in sorted(report.per_type):
            for axiom in AXIOMS:
                check = report.per_type[otype][axiom]
                rows.append(
                    {
                        "outcome_type": otype,
                        "axiom": axiom,
                        "passed": str(check.passed),
                        "witness": check.witness or "",
                    }
                )
        sys.stdout.write(
            render_records(("outcome_type", "axiom", "passed", "witness"), rows)
        )
        return EXIT_OK
    for otype in sorted(report.per_type):
        print(f"outcome type {otype}:")
        for axiom in AXIOMS:
            check = report.per_type[otype][axiom]
            status = "pass" if check.passed else "FAIL"
            suffix = ""
            if not check.passed:
                suffix = f" ({check.witness}: {check.detail})" if check.witness else f" ({check.detail})"
            print(f"  {axiom}: {status}{suffix}")
    print(f"verdict: {'legitimate' if report.legitimate else 'not legitimate'}")
    return EXIT_OK


def _cmd_scm(args):
    warnings = []
    model, extras = parse_scm_document(_read(args.scm_file), strict=args.strict, warnings=warnings)
    _emit_warnings(warnings)
    if args.scm_command == "check":
        if not isinstance(model, LinearCyclicScm):
            raise ValidationError([("model", "contraction check needs a linear model")])
        report = contraction_check(model)
        print(f"matrix inf-norm: {format_real(report.inf_norm)}")
        if report.worst_cycle is not None:
            print(
                f"binding cycle: ({', '.join(report.worst_cycle)}) "
                f"gain {format_real(report.worst_product)}"
            )
        else:
            print("binding cycle: none (no feedback)")
        print(f"contraction: {'pass' if report.passed else 'FAIL'}")
        return EXIT_OK
    if args.scm_command == "residual":
        if not isinstance(model, LinearCyclicScm):
            raise ValidationError([("model", "residual analysis needs a linear model")])
        from .cycles import enumerate_elementary_cycles

        loops = enumerate_elementary_cycles(model.implied_graph())
        if len(loops) != 1 or len(loops[0]) != 3:
            raise ValidationError(
                [("model", "closed-form residual requires a single three-agent loop")]
            )
        cycle = loops[0]
        idx = model.index()
        b = model.matrix()
        gains = [
            b[idx[cycle[(i + 1) % 3]], idx[cycle[i]]] for i in range(3)
        ]
        closed = interaction_residual_closed_form(*gains)
        est = interaction_residual_mc(model, samples=args.samples, seed=args.seed)
        print(f"loop gains: {', '.join(format_real(g) for g in gains)}")
        print(f"closed-form residual: {format_real(closed)}")
        print(
            f"sampled residual: {format_real(est.zeta)} "
            f"(sigma {format_real(est.sigma)}, outcome prob {format_real(est.p_outcome)}, "
            f"arms {format_real(est.arm_high)}/{format_real(est.arm_low)})"
        )
        print(
            "note: the sampled residual subtracts effect magnitudes from a "
            "probability; its value depends on the intervention arms",
            file=sys.stderr,
        )
        if extras.get("lambda_hat") is not None:
            count = extras.get("mixed_cycle_count") or 1
            floor = residual_lower_bound(float(extras["lambda_hat"]), int(count))
            status = "holds" if est.zeta >= floor else "violated"
            print(
                f"reported residual floor: {format_real(floor)} "
                f"(annotation lambda_hat={format_real(float(extras['lambda_hat']))}, "
                f"cycles={count}); comparison {status} (reported, not asserted)"
            )
        return EXIT_OK
    if args.scm_command == "dilution":
        if not isinstance(model, MixtureCycle):
            raise ValidationError([("model", "dilution check needs a mixture_cycle model")])
        report = verify_dilution(model, samples=args.samples, seed=args.seed)
        print(f"min compound autonomy: {format_real(report.lambda_hat)}")
        print(f"dilution bound: {format_real(report.bound)}")
        for name, agent in report.per_agent.items():
            print(
                f"  {name}: max conditional outcome prob {format_real(agent.max_kappa)} "
                f"(sigma {format_real(agent.sigma)}, cells {agent.cells_used}) "
                f"{'pass' if agent.passed else 'FAIL'}"
            )
        print(f"max epistemic access: {format_real(report.max_kappa)}")
        print(f"dilution check: {'pass' if report.passed else 'FAIL'}")
        return EXIT_OK
    raise ValidationError([("scm", f"unknown subcommand {args.scm_command!r}")])


def _load_config(args):
    presets = {
        "phase": experiments.EXPERIMENT1,
        "weights": experiments.EXPERIMENT2,
        "tau": experiments.EXPERIMENT3,
    }
    if args.config is not None:
        import yaml

        from .errors import SchemaError as _SchemaError

        try:
            data = yaml.safe_load(_read(args.config))
        except yaml.YAMLError as exc:
            raise DocumentSyntaxError(f"experiment config: {exc}") from exc
        if not isinstance(data, dict):
            raise _SchemaError("experiment config: expected a mapping")
        data.pop("version", None)
        fields = {
            "n_humans",
            "k_artificials",
            "edge_density",
            "hac_count",
            "profile_sampler",
            "beta_a",
            "beta_b",
            "tau_values",
            "weight_samples",
            "master_seed",
            "hac_tau",
        }
        unknown = sorted(set(data) - fields)
        if unknown:
            raise _SchemaError(f"experiment config: unknown field(s) {unknown}")
        base = presets.get(args.mode, experiments.EXPERIMENT1)
        merged = {f: getattr(base, f) for f in fields}
        merged.update(data)
        if "edge_density" in data:
            merged["edge_density"] = tuple(data["edge_density"])
        if "tau_values" in data:
            merged["tau_values"] = tuple(data["tau_values"])
        config = experiments.ExperimentConfig(**merged)
    else:
        config = presets.get(args.mode, experiments.EXPERIMENT1)
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, master_seed=args.seed)
    return config


def _out_dir(args):
    out = args.out or os.environ.get(OUT_DIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_experiment(args):
    out = _out_dir(args)
    if args.mode == "theta":
        if args.hac is not None:
            hac = parse_hac_document(_read(args.hac), strict=args.strict)
        else:
            hac = fixtures.trading_hac()
        result = experiments.run_theta_sweep(hac)
        path = os.path.join(out, "theta_records.csv")
        write_records(path, THETA_HEADER, result.records)
        print(f"wrote {path}")
        if args.published:
            lams = tuple(float(v) for v in args.published.split(","))
            rows = experiments.budget_deficit_table(lams, result.c_min_size)
            path = os.path.join(out, "theta_published.csv")
            write_records(path, ("lambda_hat", "budget", "deficit"), rows)
            print(f"wrote {path}")
        return EXIT_OK

    config = _load_config(args)
    if args.mode == "phase":
        result = experiments.run_phase_transition(config)
        records_path = os.path.join(out, "phase_records.csv")
        write_records(records_path, HAC_RECORD_HEADER, result.records)
        summary_path = os.path.join(out, "phase_summary.csv")
        write_records(
            summary_path,
            ("p", "hacs", "mixed", "above", "violations", "mean_deficit_above"),
            result.summary,
        )
        print(f"wrote {records_path}")
        print(f"wrote {summary_path}")
        print(f"violations: {result.violations}")
        return EXIT_OK
    if args.mode == "weights":
        result = experiments.run_weight_invariance(config)
        records_path = os.path.join(out, "weights_records.csv")
        write_records(
            records_path,
            HAC_RECORD_HEADER + ("cai_min", "cai_max", "weight_samples", "flips"),
            result.records,
        )
        summary_path = os.path.join(out, "weights_summary.csv")
        write_records(
            summary_path,
            ("hacs", "weight_samples", "invariance_rate"),
            [
                {
                    "hacs": config.total_count,
                    "weight_samples": config.weight_samples,
                    "invariance_rate": result.invariance_rate,
                }
            ],
        )
        print(f"wrote {records_path}")
        print(f"wrote {summary_path}")
        print(f"invariance rate: {format_real(result.invariance_rate)}")
        return EXIT_OK
    if args.mode == "tau":
        result = experiments.run_tau_sweep(config)
        records_path = os.path.join(out, "tau_records.csv")
        write_records(records_path, HAC_RECORD_HEADER, result.records)
        summary_path = os.path.join(out, "tau_summary.csv")
        write_records(
            summary_path,
            ("tau", "n_total", "n_mixed", "n_above", "frac_all", "frac_mixed"),
            result.fractions,
        )
        print(f"wrote {records_path}")
        print(f"wrote {summary_path}")
        for row in result.fractions:
            print(
                f"tau={format_real(row['tau'])}: above={row['n_above']} "
                f"frac_all={format_real(row['frac_all'])} "
                f"frac_mixed={format_real(row['frac_mixed'])}"
            )
        return EXIT_OK
    raise ValidationError([("experiment", f"unknown mode {args.mode!r}")])


def _cmd_estimate(args):
    text = _read(args.log_file)
    if args.measure == "epistemic":
        value = estimate_epistemic_autonomy(read_belief_pairs(text))
    elif args.measure == "executive":
        value = estimate_executive_autonomy(read_action_log(text))
    elif args.measure == "evaluative":
        value = evaluative_autonomy(read_utility_pair(text))
    elif args.measure == "social":
        value = social_autonomy(read_comm_counts(text))
    else:
        actions, sup, own = read_info_log(text)
        value = estimate_info_autonomy(actions, sup, own)
    print(format_real(value))
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "cycles":
            return _cmd_cycles(args)
        if args.command == "audit":
            return _cmd_audit(args)
        if args.command == "scm":
            return _cmd_scm(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        print(f"error: unknown command {args.command!r}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (
        ValidationError,
        SchemaError,
        DocumentSyntaxError,
        DegenerateDistributionError,
    ) as exc:
        kind = type(exc).__name__
        print(f"error ({kind}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
