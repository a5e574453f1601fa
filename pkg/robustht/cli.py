# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
"""
Command line front end for robustht
"""
from __future__ import annotations
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from robustht._error import __ERROR_CLASSES__, ConfigError, RobustHTError
from robustht.adversary import (
    AdversaryModel,
    AdversarySpec,
    TestKind,
    TestSpec,
    empirical_complexity_search,
    oblivious_sources,
    run_adaptive_trial,
    run_oblivious_trial
)
from robustht.complexity import (
    ComplexityEstimate,
    complexity_curve,
    exact_sample_complexity,
    predicted_sample_complexity,
    robust_complexity
)
from robustht.config import (
    CORPUS_ALPHABETS,
    CORPUS_SIZE,
    DEFAULT_DELTA0,
    DEFAULT_EPS_GRID,
    DEFAULT_TARGET_ERROR,
    DEFAULT_TRIALS
)
from robustht.dist import Dist, Model
from robustht.experiments import (
    breakdown_experiment,
    breakdown_onset_scan,
    dirichlet_corpus,
    jump_experiment,
    no_simulation_witnesses,
    privacy_experiment,
    sandwich_certify
)
from robustht.lfd import build_lfds, solve_clips
from robustht.utils.files import dump_json, load_vector, write_csv
from robustht.utils.logger import setup_logging
from robustht.utils.pool import default_jobs
from robustht.version import OUTPUT_SCHEMA_VERSION, ROBUSTHT_VERSION

__all__ = (
    "build_parser",
    "main"
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

# Arguments that never enter the recorded config
_PLUMBING = ("command", "handler", "config", "output", "log_level", "log_file", "jobs")


class Output:
    """This object shows what a command produced

    Attributes
    ----------
        payload: :obj:`dict`
            JSON document body.
        header: :obj:`list` of :obj:`str`, optional
            CSV column names; ``None`` when the command has no table.
        rows: :obj:`list`, optional
            CSV rows.
    """
    __slots__ = (
        "payload",
        "header",
        "rows"
    )

    def __init__(self, payload: Dict[str, Any], header: Optional[Sequence[str]] = None,
                 rows: Optional[List[Sequence[Any]]] = None) -> None:
        self.payload = payload
        self.header = header
        self.rows = rows


def _load(path: str) -> Dist:
    try:
        values = load_vector(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read distribution: {exc}") from None
    return Dist(values, normalize=True)


def _pair(args: argparse.Namespace) -> Tuple[Dist, Dist]:
    if not args.p or not args.q:
        raise ConfigError("--p and --q are required")
    return _load(args.p), _load(args.q)


def _eps_grid(value: Any) -> Tuple[float, ...]:
    if value is None or value == "default":
        return tuple(DEFAULT_EPS_GRID)
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    try:
        return tuple(float(v) for v in str(value).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"eps grid must be 'default' or comma-separated numbers, got {value!r}") from None


def _level(args: argparse.Namespace) -> float:
    if args.eps is None:
        raise ConfigError("--eps is required")
    return args.eps


def cmd_clips(args: argparse.Namespace) -> Output:
    p, q = _pair(args)
    clips = solve_clips(p, q, _level(args), args.model, eps_q=args.eps_q)
    return Output({"clips": clips.to_json()})


def cmd_lfd(args: argparse.Namespace) -> Output:
    p, q = _pair(args)
    lfds = build_lfds(p, q, _level(args), args.model, eps_q=args.eps_q)
    return Output({"lfd": lfds.to_json()},
                  ["index", "p", "q", "p_star", "q_star"],
                  [[i, p[i], q[i], lfds.p_star[i], lfds.q_star[i]] for i in range(p.alphabet_size)])


def cmd_complexity(args: argparse.Namespace) -> Output:
    p, q = _pair(args)
    if args.eps == 0.0:
        exact_n = None
        if args.exact:
            exact_n = exact_sample_complexity(p, q, target_error=args.target_error, n_max=args.n_max, jobs=args.jobs)
        estimate = ComplexityEstimate(1.0 / predicted_sample_complexity(p, q), exact_n=exact_n)
    else:
        estimate = robust_complexity(p, q, args.eps, args.model, exact=args.exact, n_max=args.n_max,
                                     target_error=args.target_error)
    return Output({"complexity": estimate.to_json()})


def cmd_curve(args: argparse.Namespace) -> Output:
    p, q = _pair(args)
    rows = complexity_curve(p, q, args.model, _eps_grid(args.eps_grid))
    header = ["eps", "hel_sq", "predicted_n", "regime"]
    return Output({"curve": rows}, header, [[row[name] for name in header] for row in rows])


def cmd_jump(args: argparse.Namespace) -> Output:
    table = jump_experiment(_eps_grid(args.eps_grid), args.t, args.model)
    return Output({"jump": table.to_json(), "rows": table.rows}, list(table.columns), table.csv_rows())


def cmd_breakdown(args: argparse.Namespace) -> Output:
    if args.scan:
        scan = breakdown_onset_scan(args.t, args.model)
        return Output({"onset_scan": scan}, ["eps", "mean", "sign_ok"],
                      [[row["eps"], row["mean"], row["sign_ok"]] for row in scan["rows"]])
    result = breakdown_experiment(args.eps, args.t, args.model, trials=args.trials, seed=args.seed, jobs=args.jobs)
    return Output({"breakdown": result.to_json()}, ["n", "error", "ci_radius"], result.csv_rows())


def cmd_sandwich(args: argparse.Namespace) -> Output:
    corpus = dirichlet_corpus(args.corpus_size, args.seed, tuple(args.alphabets))
    reports = sandwich_certify(corpus, args.delta0)
    names = sorted({name for report in reports for name in report.checks})
    failed = [report.to_json() for report in reports if not report.passed]
    summary = {
        "instances": len(reports),
        "passed": sum(report.passed for report in reports),
        "failures": failed,
        "max_ratios": {key: max(r.ratios[key] for r in reports if key in r.ratios)
                       for key in sorted({k for r in reports for k in r.ratios})}
    }
    rows = [[r.instance_id, r.eps, r.passed] + [r.checks.get(name, False) for name in names] for r in reports]
    return Output({"sandwich": summary}, ["instance_id", "eps", "passed"] + names, rows)


def cmd_simulate(args: argparse.Namespace) -> Output:
    p, q = _pair(args)
    adversary = AdversarySpec(args.adversary, args.eps, strategy=args.strategy)
    calibration = None if args.calib is None else (adversary.model.base, args.calib)
    test = TestSpec(args.test, calibration=calibration, threshold=args.threshold)
    if args.search:
        n = empirical_complexity_search(p, q, adversary, test, target_error=args.target_error, trials=args.trials,
                                        seed=args.seed, jobs=args.jobs, sub_sampling=args.sub_sampling)
        return Output({"empirical_sample_complexity": n})
    if args.n is None:
        raise ConfigError("--n is required unless --search is given")
    if adversary.model.adaptive:
        report = run_adaptive_trial(p, q, adversary, test, args.n, args.trials, args.seed, jobs=args.jobs)
    else:
        p_src, q_src, retention = oblivious_sources(p, q, adversary, args.sub_sampling)
        report = run_oblivious_trial(p_src, q_src, test, args.n, args.trials, args.seed, nominal=(p, q),
                                     jobs=args.jobs, retention=retention)
    return Output({"report": report.to_json(), "total_error": report.total_error, "total_upper": report.total_upper})


def cmd_privacy(args: argparse.Namespace) -> Output:
    if args.p and args.q:
        example = privacy_experiment(p=_load(args.p), q=_load(args.q), c_priv=args.c_priv)
    elif args.alpha is not None:
        example = privacy_experiment(alpha=args.alpha, c_priv=args.c_priv)
    else:
        raise ConfigError("give --p and --q, or --alpha")
    return Output({"privacy": example.to_json()}, ["curve", "x", "value", "regime"], example.curve.rows())


def cmd_nosim(args: argparse.Namespace) -> Output:
    witnesses = no_simulation_witnesses(args.factors, args.eps)
    rows = [[w.part, w.factor, w.ok] for w in witnesses]
    return Output({"witnesses": [w.to_json() for w in witnesses], "all_ok": all(w.ok for w in witnesses)},
                  ["part", "factor", "ok"], rows)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file whose keys override this command's defaults")
    parser.add_argument("--output", help="write the result here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=int, default=None, help="master seed; drawn and recorded when absent")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (default from ROBUSTHT_JOBS)")
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--log-file", default=None)


def _pair_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", help="JSON array or CSV row for p")
    parser.add_argument("--q", help="JSON array or CSV row for q")


def _model_arg(parser: argparse.ArgumentParser, default: Optional[str] = "tv") -> None:
    parser.add_argument("--model", type=Model.parse, default=default, choices=list(Model),
                        metavar="{hub,tv,sub}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robustht", description="Robust binary hypothesis testing toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {ROBUSTHT_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    commands: List[Tuple[str, Callable[[argparse.Namespace], Output], str]] = [
        ("clips", cmd_clips, "solve the clipping constants"),
        ("lfd", cmd_lfd, "construct the least favourable pair"),
        ("complexity", cmd_complexity, "Hellinger and exact sample complexity"),
        ("curve", cmd_curve, "sample complexity against eps"),
        ("jump", cmd_jump, "jump family sweep with slope fits"),
        ("breakdown", cmd_breakdown, "underestimated contamination"),
        ("sandwich", cmd_sandwich, "certify model comparisons on a random corpus"),
        ("simulate", cmd_simulate, "Monte Carlo errors against an adversary"),
        ("privacy", cmd_privacy, "private and transformation sample complexity curves"),
        ("nosim", cmd_nosim, "no-simulation witnesses")
    ]
    parsers = {}
    for name, handler, help_text in commands:
        cmd = sub.add_parser(name, help=help_text)
        _common(cmd)
        cmd.set_defaults(handler=handler)
        parsers[name] = cmd

    for name in ("clips", "lfd"):
        _pair_args(parsers[name])
        _model_arg(parsers[name])
        parsers[name].add_argument("--eps", type=float, default=None)
        parsers[name].add_argument("--eps-q", type=float, default=None, help="separate level around q (sub only)")

    cmd = parsers["complexity"]
    _pair_args(cmd)
    _model_arg(cmd)
    cmd.add_argument("--eps", type=float, default=0.0)
    cmd.add_argument("--exact", action="store_true")
    cmd.add_argument("--n-max", type=int, default=200)
    cmd.add_argument("--target-error", type=float, default=DEFAULT_TARGET_ERROR)

    cmd = parsers["curve"]
    _pair_args(cmd)
    _model_arg(cmd)
    cmd.add_argument("--eps-grid", default="default")

    cmd = parsers["jump"]
    _model_arg(cmd)
    cmd.add_argument("--t", type=float, default=0.25)
    cmd.add_argument("--eps-grid", default="default")

    cmd = parsers["breakdown"]
    _model_arg(cmd)
    cmd.add_argument("--eps", type=float, default=0.02)
    cmd.add_argument("--t", type=float, default=0.2)
    cmd.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    cmd.add_argument("--scan", action="store_true", help="scan eps downward for the onset instead")

    cmd = parsers["sandwich"]
    cmd.add_argument("--corpus-size", type=int, default=CORPUS_SIZE)
    cmd.add_argument("--alphabets", type=int, nargs=2, default=list(CORPUS_ALPHABETS))
    cmd.add_argument("--delta0", type=float, default=DEFAULT_DELTA0)

    cmd = parsers["simulate"]
    _pair_args(cmd)
    cmd.add_argument("--adversary", type=AdversaryModel.parse, default=AdversaryModel.TV,
                     choices=list(AdversaryModel), metavar="{hub,tv,sub,a-hub,a-tv,a-sub}")
    cmd.add_argument("--eps", type=float, default=0.0)
    cmd.add_argument("--strategy", default=None)
    cmd.add_argument("--test", choices=[kind.value for kind in TestKind], default=TestKind.CLIPPED_LR.value)
    cmd.add_argument("--calib", type=float, default=None, help="calibration level of the clipped test")
    cmd.add_argument("--threshold", type=float, default=None)
    cmd.add_argument("--n", type=int, default=None)
    cmd.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    cmd.add_argument("--sub-sampling", choices=("fixed", "censor"), default="fixed")
    cmd.add_argument("--search", action="store_true", help="search the smallest n meeting --target-error")
    cmd.add_argument("--target-error", type=float, default=DEFAULT_TARGET_ERROR)

    cmd = parsers["privacy"]
    _pair_args(cmd)
    cmd.add_argument("--alpha", type=float, default=None)
    cmd.add_argument("--c-priv", type=float, default=1.0)

    cmd = parsers["nosim"]
    cmd.add_argument("--factors", type=float, nargs="+", default=[2.0, 10.0, 100.0])
    cmd.add_argument("--eps", type=float, default=1e-4)

    parser.set_defaults(_subparsers=parsers)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    """Parse once to find ``--config``, fold its keys into the command defaults, parse again"""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    cmd = args._subparsers[args.command]
    known = {action.dest for action in cmd._actions} - set(_PLUMBING) - {"help"}
    overrides = {key.replace("-", "_"): value for key, value in data.items()}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    for action in cmd._actions:
        if action.dest in overrides and action.type is not None and isinstance(overrides[action.dest], str):
            overrides[action.dest] = action.type(overrides[action.dest])
    cmd.set_defaults(**overrides)
    return parser.parse_args(argv)


def resolved_config(args: argparse.Namespace) -> Dict[str, Any]:
    config = {"command": args.command}
    for key, value in sorted(vars(args).items()):
        if key in _PLUMBING or key.startswith("_") or key == "format":
            continue
        config[key] = value.value if hasattr(value, "value") else value
    return config


def _render(output: Output, config: Dict[str, Any], fmt: str) -> str:
    if fmt == "csv":
        if output.header is None:
            raise ConfigError(f"{config['command']} has no table output; use --format json")
        preamble = "# config=" + json.dumps(config, sort_keys=True, default=str) + "\n"
        return preamble + write_csv(output.header, output.rows)
    document = {"config": config, "schema": OUTPUT_SCHEMA_VERSION, "version": ROBUSTHT_VERSION}
    document.update(output.payload)
    return dump_json(document) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit code"""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except ConfigError as exc:
        print(f"error [ConfigError]: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        setup_logging(args.log_level, args.log_file)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % (1 << 63))
        logger.warning(f"no --seed given; using {args.seed}")
    args.jobs = default_jobs() if args.jobs is None else max(1, args.jobs)

    config = resolved_config(args)
    try:
        output = args.handler(args)
        text = _render(output, config, args.format)
    except ConfigError as exc:
        print(f"error [ConfigError]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RobustHTError as exc:
        name = type(exc).__name__
        label = name if name in __ERROR_CLASSES__ else "RobustHTError"
        print(f"error [{label}]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK
