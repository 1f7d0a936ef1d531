"""File formats: instance text/JSON, census JSON, permutation exports,
replicate CSV, and experiment reports.

All writers are byte-deterministic: row order is canonical, floats are
rendered with repr (shortest round-trip form), and JSON keys are sorted.
Vertices are 1-based in every on-disk format; in-memory objects stay
0-based.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .automorphisms import BlockPermutation
from .experiments import ExperimentConfig, ExperimentReport, evaluate_records
from .model import (
    BLUE_ONLY,
    CATEGORY_CHARS,
    RED_ONLY,
    TWO_COLORED,
    CorrelatedInstance,
    ModelParams,
)
from .permutations import Permutation, random_permutation
from .rng import derived_rng
from .trees import TreeCensus

__all__ = [
    "instance_to_text",
    "write_instance_text",
    "read_instance_text",
    "instance_to_json_dict",
    "write_instance_json",
    "read_instance_json",
    "census_to_json_dict",
    "write_census_json",
    "permutation_to_cycle_string",
    "permutation_to_table",
    "family_to_json_dict",
    "write_family_json",
    "write_replicates_csv",
    "read_replicates_csv",
    "write_report_json",
    "evaluate_report_from_csv",
    "write_plotdata",
]

_CATEGORY_INDEX = {c: i for i, c in enumerate(CATEGORY_CHARS)}


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans have no place in the file formats")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


# ---------------------------------------------------------------------------
# instances


def instance_to_text(inst: CorrelatedInstance) -> str:
    """Line format: header ``n lambda s seed``, then ``u v C`` per sampled
    pair with C in {T, B, R}, vertices 1-based, pairs in canonical order."""
    if inst.seed is None:
        raise ValueError("only sampled instances (with a seed) can be serialized")
    lines = [f"{inst.n} {_fmt(inst.params.lam)} {_fmt(inst.params.s)} {inst.seed}"]
    for (u, v), cat in zip(inst.pairs, inst.categories):
        lines.append(f"{u + 1} {v + 1} {CATEGORY_CHARS[cat]}")
    return "\n".join(lines) + "\n"


def write_instance_text(inst: CorrelatedInstance, path) -> None:
    Path(path).write_text(instance_to_text(inst), encoding="ascii")


def _rebuild_instance(n: int, lam: float, s: float, seed: int, rows) -> CorrelatedInstance:
    params = ModelParams(n=n, lam=lam, s=s)
    pairs = np.empty((len(rows), 2), dtype=np.int64)
    categories = np.empty(len(rows), dtype=np.int8)
    for i, (u, v, cat) in enumerate(rows):
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError("vertex outside range")
        if u == v:
            raise ValueError("self-loop in instance file")
        pairs[i] = (min(u, v) - 1, max(u, v) - 1)
        categories[i] = _CATEGORY_INDEX[cat]
    keys = pairs[:, 0] * n + pairs[:, 1]
    order = np.argsort(keys, kind="stable")
    if np.any(np.diff(keys[order]) == 0):
        raise ValueError("duplicate pair in instance file")
    # the planted permutation is not stored: it is re-derived from the seed,
    # exactly as the sampler drew it
    planted = random_permutation(n, derived_rng(seed, "planted"))
    return CorrelatedInstance(
        params=params,
        pairs=pairs[order],
        categories=categories[order],
        planted=planted,
        seed=seed,
    )


def read_instance_text(path) -> CorrelatedInstance:
    text = Path(path).read_text(encoding="ascii")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty instance file")
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError("header must be: n lambda s seed")
    n, lam, s, seed = int(head[0]), float(head[1]), float(head[2]), int(head[3])
    rows = []
    for ln in lines[1:]:
        u, v, cat = ln.split()
        rows.append((int(u), int(v), cat))
    return _rebuild_instance(n, lam, s, seed, rows)


def instance_to_json_dict(inst: CorrelatedInstance) -> dict:
    if inst.seed is None:
        raise ValueError("only sampled instances (with a seed) can be serialized")
    return {
        "n": inst.n,
        "lambda": float(inst.params.lam),
        "s": float(inst.params.s),
        "seed": int(inst.seed),
        "pairs": [
            [int(u) + 1, int(v) + 1, CATEGORY_CHARS[cat]]
            for (u, v), cat in zip(inst.pairs, inst.categories)
        ],
    }


def write_instance_json(inst: CorrelatedInstance, path) -> None:
    Path(path).write_text(
        json.dumps(instance_to_json_dict(inst), sort_keys=True, indent=2) + "\n",
        encoding="ascii",
    )


def read_instance_json(path) -> CorrelatedInstance:
    doc = json.loads(Path(path).read_text(encoding="ascii"))
    rows = [(int(u), int(v), cat) for u, v, cat in doc["pairs"]]
    return _rebuild_instance(int(doc["n"]), float(doc["lambda"]), float(doc["s"]),
                             int(doc["seed"]), rows)


# ---------------------------------------------------------------------------
# census and permutations


def census_to_json_dict(census: TreeCensus) -> dict:
    classes = {}
    for code, cls in census.classes.items():
        classes[code] = {
            "k": int(cls.k),
            "X": int(cls.count),
            "a": int(cls.automorphisms),
            "member_roots": [int(row[0]) + 1 for row in cls.members],
        }
    return {"n": int(census.n), "cutoff": int(census.cutoff), "classes": classes}


def write_census_json(census: TreeCensus, path) -> None:
    Path(path).write_text(
        json.dumps(census_to_json_dict(census), sort_keys=True, indent=2) + "\n",
        encoding="ascii",
    )


def permutation_to_cycle_string(perm: Permutation) -> str:
    """One-line cycle notation, 1-based, cycles ordered by smallest element."""
    return "".join(
        "(" + " ".join(str(v + 1) for v in cycle) + ")" for cycle in perm.cycles()
    )


def permutation_to_table(perm: Permutation) -> str:
    """Two-column text: vertex and its image, 1-based, one row per vertex."""
    return "\n".join(f"{i + 1} {int(perm.forward[i]) + 1}" for i in range(perm.n)) + "\n"


def family_to_json_dict(family: list[BlockPermutation]) -> dict:
    """Audit bundle: per member, its seed and every per-class member shuffle."""
    members = []
    for block in family:
        members.append(
            {
                "seed": None if block.seed is None else int(block.seed),
                "tree_perms": {
                    code: [int(x) for x in draw] for code, draw in sorted(block.tree_perms.items())
                },
            }
        )
    return {"size": len(family), "members": members}


def write_family_json(family: list[BlockPermutation], path) -> None:
    Path(path).write_text(
        json.dumps(family_to_json_dict(family), sort_keys=True, indent=2) + "\n",
        encoding="ascii",
    )


# ---------------------------------------------------------------------------
# replicate tables and reports


def replicates_csv_text(report_or_records, columns=None) -> str:
    if isinstance(report_or_records, ExperimentReport):
        records = report_or_records.records
        columns = report_or_records.columns
    else:
        records = report_or_records
        if columns is None:
            raise ValueError("columns are required with a bare record list")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec[c]) for c in columns])
    return buf.getvalue()


def write_replicates_csv(report_or_records, path, columns=None) -> None:
    Path(path).write_text(replicates_csv_text(report_or_records, columns), encoding="ascii")


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_replicates_csv(path) -> tuple[list[str], list[dict]]:
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        records = [
            {c: _parse_cell(cell) for c, cell in zip(columns, row)} for row in reader
        ]
    return columns, records


def report_json_text(report: ExperimentReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"


def write_report_json(report: ExperimentReport, path) -> None:
    Path(path).write_text(report_json_text(report), encoding="ascii")


def evaluate_report_from_csv(cfg: ExperimentConfig, csv_path) -> dict:
    """Recompute aggregates and tests from a stored replicate table.

    The aggregates must match the original report's aggregates exactly,
    because repr-formatted cells round-trip floats without loss.
    """
    _, records = read_replicates_csv(csv_path)
    aggregates, tests = evaluate_records(cfg, records)
    return {
        "experiment": cfg.experiment,
        "config": cfg.to_dict(),
        "aggregates": aggregates,
        "tests": [t.to_dict() for t in tests],
        "passed": bool(tests) and all(t.passed for t in tests),
        "provenance": {
            "package": "alignlab",
            "recomputed_from": str(csv_path),
            "replicates_run": len(records),
        },
    }


# ---------------------------------------------------------------------------
# plot-ready tables


def _plotdata_rows(report: ExperimentReport) -> tuple[str, list[str], list[list]]:
    name = report.config.experiment
    agg = report.aggregates
    if name == "poisson-delta":
        counts = agg["bin_counts"]
        draws = max(agg["draws"], 1)
        from .theory import poisson_pmf

        rate = agg["rate_predicted"]
        rows = []
        for value, count in enumerate(counts[:2]):
            rows.append([value, count / draws, poisson_pmf(value, rate)])
        rows.append([2, counts[2] / draws, 1.0 - poisson_pmf(0, rate) - poisson_pmf(1, rate)])
        return "delta_hist", ["delta", "empirical", "model"], rows
    if name == "fix-concentration":
        rows = []
        i = 0
        for rec in report.records:
            for col in report.columns:
                if col.startswith("fix_frac_"):
                    rows.append([i, rec[col]])
                    i += 1
        return "fix_fracs", ["sample", "fix_frac"], rows
    if name == "census-concentration":
        rows = [
            [cls["code"], cls["mean_x"], cls["alpha"], cls["floor"]]
            for cls in agg["classes"]
        ]
        return "class_means", ["code", "mean_x", "alpha", "floor"], rows
    if name in ("small-tree-coverage", "giant-component"):
        rows = [
            [rec["replicate"], rec["giant_frac"], rec["oversize_frac"], rec["small_tree_frac"]]
            for rec in report.records
        ]
        return "fractions", ["replicate", "giant_frac", "oversize_frac", "small_tree_frac"], rows
    if name == "common-fixed-bounds":
        rows = [
            [rec["replicate"], rec["max_pair"], rec["max_triple"], rec["max_quad"]]
            for rec in report.records
        ]
        return "maxima", ["replicate", "max_pair", "max_triple", "max_quad"], rows
    # map-oracle: overlap histogram
    overlaps = [rec["overlap"] for rec in report.records]
    rows = [[v, overlaps.count(v)] for v in sorted(set(overlaps))]
    return "overlap_hist", ["overlap", "count"], rows


def write_plotdata(report: ExperimentReport, out_dir) -> Path:
    """Write the experiment's plot-ready CSV; returns the path."""
    name, header, rows = _plotdata_rows(report)
    path = Path(out_dir) / f"plotdata_{name}.csv"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])
    path.write_text(buf.getvalue(), encoding="ascii")
    return path
