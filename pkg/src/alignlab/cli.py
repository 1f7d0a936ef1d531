"""Command line front end.

Subcommands: ``sample`` writes an instance file, ``census`` summarizes its
small-tree classes, ``build-perms`` generates a family of edge-preserving
automorphisms, ``experiment`` runs a named Monte Carlo experiment from a
TOML config, and ``report`` re-derives a report from a stored replicate
table. All outputs are byte-deterministic given the same inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

try:
    import tomllib as _toml
except ImportError:  # Python < 3.11
    import tomli as _toml

from .automorphisms import generate_family
from .components import decompose, small_tree_cutoff
from .experiments import EXPERIMENT_NAMES, ExperimentConfig, run_experiment
from .model import ModelParams, sample_instance
from .serialize import (
    evaluate_report_from_csv,
    permutation_to_cycle_string,
    write_census_json,
    write_family_json,
    write_instance_json,
    write_instance_text,
    write_plotdata,
    write_replicates_csv,
    write_report_json,
)
from .trees import build_census


def _add_model_flags(parser, require=False):
    parser.add_argument("--n", type=int, required=require, help="vertex count")
    parser.add_argument("--lambda", dest="lam", type=float, required=require, help="mean degree")
    parser.add_argument("--s", type=float, required=require, help="edge correlation in [0, 1]")
    parser.add_argument("--seed", type=int, required=require, help="root seed")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alignlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="sample one correlated instance to disk")
    _add_model_flags(p_sample, require=True)
    p_sample.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p_census = sub.add_parser("census", help="small-tree class census of an instance file")
    p_census.add_argument("--in", dest="infile", type=Path, required=True)
    p_census.add_argument("--out", type=Path, default=Path("."))

    p_perms = sub.add_parser("build-perms", help="generate an edge-preserving family")
    p_perms.add_argument("--in", dest="infile", type=Path, required=True)
    p_perms.add_argument("--p", type=int, required=True, help="family size")
    p_perms.add_argument("--seed", type=int, required=True)
    p_perms.add_argument("--max-attempts", type=int, default=None)
    p_perms.add_argument("--out", type=Path, default=Path("."))

    p_exp = sub.add_parser("experiment", help="run a named experiment")
    p_exp.add_argument("name", choices=sorted(EXPERIMENT_NAMES))
    p_exp.add_argument("--config", type=Path, default=None, help="TOML config file")
    _add_model_flags(p_exp)
    p_exp.add_argument("--replicates", type=int, default=None)
    p_exp.add_argument("--p", type=int, default=None, help="draws per replicate")
    p_exp.add_argument("--threads", type=int, default=None)
    p_exp.add_argument("--out", type=Path, default=Path("."))

    p_rep = sub.add_parser("report", help="re-derive a report from replicates.csv")
    p_rep.add_argument("--config", type=Path, required=True)
    p_rep.add_argument("--in", dest="infile", type=Path, required=True)
    p_rep.add_argument("--out", type=Path, default=Path("."))
    return parser


def _load_config(path: Path | None, name: str | None, args) -> ExperimentConfig:
    doc: dict = {}
    if path is not None:
        with open(path, "rb") as fh:
            doc = _toml.load(fh)
    model = doc.get("model", {})
    run = doc.get("run", {})
    tolerances = doc.get("tolerances", {})

    def pick(cli_value, table, key, default=None):
        if cli_value is not None:
            return cli_value
        if key in table:
            return table[key]
        return default

    experiment = name or doc.get("experiment")
    if experiment is None:
        raise ValueError("no experiment name given (config key 'experiment' or CLI argument)")
    threads = pick(args.threads, run, "threads", None)
    if threads is None:
        threads = int(os.environ.get("ALIGN_LAB_THREADS", "1"))
    n = pick(args.n, model, "n")
    lam = pick(args.lam, model, "lambda")
    s = pick(args.s, model, "s")
    if n is None or lam is None or s is None:
        raise ValueError("model parameters n, lambda, s must come from the config or flags")
    return ExperimentConfig(
        experiment=str(experiment),
        n=int(n),
        lam=float(lam),
        s=float(s),
        replicates=int(pick(args.replicates, run, "replicates", 1)),
        base_seed=int(pick(args.seed, run, "base_seed", 0)),
        p=int(pick(args.p, run, "p", 1)),
        threads=int(threads),
        condition=str(run.get("condition", "none")),
        tolerances={k: float(v) for k, v in tolerances.items()},
    )


def _cmd_sample(args) -> int:
    params = ModelParams(n=args.n, lam=args.lam, s=args.s)
    inst = sample_instance(params, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    write_instance_text(inst, args.out / "instance.txt")
    write_instance_json(inst, args.out / "instance.json")
    two, blue, red = inst.category_counts()
    print(f"wrote {args.out / 'instance.txt'} (T={two} B={blue} R={red})")
    return 0


def _cmd_census(args) -> int:
    from .serialize import read_instance_text

    inst = read_instance_text(args.infile)
    partition = decompose(inst.intersection, small_tree_cutoff(inst.n))
    census = build_census(partition, inst.intersection)
    args.out.mkdir(parents=True, exist_ok=True)
    write_census_json(census, args.out / "census.json")
    print(f"wrote {args.out / 'census.json'} ({len(census.classes)} classes)")
    return 0


def _cmd_build_perms(args) -> int:
    from .serialize import read_instance_text

    inst = read_instance_text(args.infile)
    family = generate_family(inst, args.p, args.seed, args.max_attempts)
    args.out.mkdir(parents=True, exist_ok=True)
    lines = [permutation_to_cycle_string(block.sigma) for block in family]
    (args.out / "perms.txt").write_text("\n".join(lines) + "\n", encoding="ascii")
    write_family_json(family, args.out / "family.json")
    print(f"wrote {args.out / 'perms.txt'} ({len(family)} permutations)")
    return 0


def _cmd_experiment(args) -> int:
    cfg = _load_config(args.config, args.name, args)
    report = run_experiment(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    write_replicates_csv(report, args.out / "replicates.csv")
    write_report_json(report, args.out / "report.json")
    write_plotdata(report, args.out)
    status = "pass" if report.passed else "FAIL"
    for test in report.tests:
        mark = "pass" if test.passed else "FAIL"
        print(f"  [{mark}] {test.name}: statistic={test.statistic:.6g} "
              f"threshold={test.threshold:.6g} ({test.direction})")
    print(f"{cfg.experiment}: {status} ({len(report.records)} replicates, "
          f"{len(report.failures)} failed)")
    return 0


def _cmd_report(args) -> int:
    class _NoFlags:
        n = lam = s = None
        replicates = p = threads = seed = None

    cfg = _load_config(args.config, None, _NoFlags())
    report_doc = evaluate_report_from_csv(cfg, args.infile)
    args.out.mkdir(parents=True, exist_ok=True)
    out_path = args.out / "report.json"
    out_path.write_text(json.dumps(report_doc, sort_keys=True, indent=2) + "\n", encoding="ascii")
    print(f"wrote {out_path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sample": _cmd_sample,
        "census": _cmd_census,
        "build-perms": _cmd_build_perms,
        "experiment": _cmd_experiment,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
