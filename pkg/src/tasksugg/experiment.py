"""Experiment matrices: run a grid of pipeline configurations over one
snapshot store, evaluate every cell, and render a comparison table with
significance markers.

A matrix is a JSON file of blocks x cells. Block and cell overrides are
deep-merged onto the base configuration; a typical grid varies the
generation mode or document-importance estimator across blocks and the
source scope across cells. Cells in later blocks are tested against the
same-label cell of the first block (or, in a single-block matrix, against
its first cell), with daggers marking p < 0.05 and double daggers
p < 0.001 under a two-tailed paired t-test over per-topic scores.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .config import ConfigError, config_from_dict, merge_overrides
from .evaluation import (
    MetricReport,
    evaluate_run,
    paired_ttest,
    significance_marker,
)
from .runs import generate_runs, run_file_lines, write_text_atomic
from .snapshots import SnapshotStore


@dataclass(frozen=True)
class MatrixCell:
    label: str
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MatrixBlock:
    label: str
    cells: tuple[MatrixCell, ...]
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentMatrix:
    name: str
    blocks: tuple[MatrixBlock, ...]
    sort_by: str | None = None  # render cells sorted by this metric, best first

    def __post_init__(self) -> None:
        if not self.blocks or not all(b.cells for b in self.blocks):
            raise ConfigError("matrix needs at least one block with one cell")
        if self.sort_by not in (None, "err_ia", "alpha_ndcg"):
            raise ConfigError(f"cannot sort by {self.sort_by!r}")


def matrix_from_dict(data: dict) -> ExperimentMatrix:
    try:
        blocks = tuple(
            MatrixBlock(
                label=str(block["label"]),
                overrides=dict(block.get("overrides", {})),
                cells=tuple(
                    MatrixCell(
                        label=str(cell["label"]),
                        overrides=dict(cell.get("overrides", {})),
                    )
                    for cell in block["cells"]
                ),
            )
            for block in data["blocks"]
        )
        return ExperimentMatrix(
            name=str(data.get("name", "experiment")),
            blocks=blocks,
            sort_by=data.get("sort_by"),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed matrix: {exc}") from exc


def matrix_from_file(path) -> ExperimentMatrix:
    path = Path(path)
    try:
        return matrix_from_dict(json.loads(path.read_text("utf-8")))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read matrix {path}: {exc}") from exc


@dataclass(frozen=True)
class CellResult:
    block_label: str
    cell_label: str
    report: MetricReport
    run_name: str
    p_err_ia: float | None = None
    p_alpha_ndcg: float | None = None

    @property
    def err_marker(self) -> str:
        return significance_marker(self.p_err_ia) if self.p_err_ia is not None else ""

    @property
    def ndcg_marker(self) -> str:
        return (
            significance_marker(self.p_alpha_ndcg)
            if self.p_alpha_ndcg is not None
            else ""
        )


@dataclass(frozen=True)
class ExperimentResult:
    name: str
    cells: tuple[CellResult, ...]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cells": [
                {
                    "block": c.block_label,
                    "cell": c.cell_label,
                    "run": c.run_name,
                    "err_ia": c.report.mean_err_ia,
                    "alpha_ndcg": c.report.mean_alpha_ndcg,
                    "p_err_ia": c.p_err_ia,
                    "p_alpha_ndcg": c.p_alpha_ndcg,
                    "marker_err_ia": c.err_marker,
                    "marker_alpha_ndcg": c.ndcg_marker,
                }
                for c in self.cells
            ],
        }

    def render_text(self) -> str:
        rows = [("block", "cell", "ERR-IA", "a-NDCG")]
        for c in self.cells:
            rows.append(
                (
                    c.block_label,
                    c.cell_label,
                    f"{c.report.mean_err_ia:.4f}{c.err_marker}",
                    f"{c.report.mean_alpha_ndcg:.4f}{c.ndcg_marker}",
                )
            )
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines) + "\n"


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text).strip("-") or "cell"


def _baseline_index(matrix, block_index, cell_index):
    if block_index == 0:
        if len(matrix.blocks) == 1 and cell_index > 0:
            return 0  # single-block matrices compare against the first cell
        return None
    block0 = matrix.blocks[0]
    wanted = matrix.blocks[block_index].cells[cell_index].label
    for j, cell in enumerate(block0.cells):
        if cell.label == wanted:
            return j
    return cell_index if cell_index < len(block0.cells) else None


def run_experiment(
    matrix: ExperimentMatrix,
    base_config: dict,
    store: SnapshotStore,
    topics,
    qrels: dict,
    out_dir,
    base_dir: Path | None = None,
    jobs: int = 1,
) -> ExperimentResult:
    """Generate, persist, and evaluate a run per matrix cell."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    flat: list[CellResult] = []
    # First pass: produce runs and reports.
    reports: dict[tuple[int, int], MetricReport] = {}
    for bi, block in enumerate(matrix.blocks):
        for ci, cell in enumerate(block.cells):
            merged = merge_overrides(base_config, block.overrides)
            merged = merge_overrides(merged, cell.overrides)
            cfg = config_from_dict(merged, base_dir=base_dir)
            results, _skipped = generate_runs(topics, store, cfg, jobs=jobs)
            run_name = f"{_slug(matrix.name)}__{_slug(block.label)}__{_slug(cell.label)}.run"
            write_text_atomic(
                out_dir / run_name, "\n".join(run_file_lines(results, cfg)) + "\n"
            )
            run = {
                topic: [s.text for s in ranking] for topic, ranking in results.items()
            }
            reports[(bi, ci)] = evaluate_run(
                run, qrels, cutoff=cfg.cutoff, alpha=cfg.alpha, max_grade=cfg.max_grade
            )

    # Second pass: significance against the baseline cell.
    for bi, block in enumerate(matrix.blocks):
        for ci, cell in enumerate(block.cells):
            report = reports[(bi, ci)]
            p_err = p_ndcg = None
            bj = _baseline_index(matrix, bi, ci)
            if bj is not None:
                base_report = reports[(0, bj)]
                if base_report is not report:
                    topics_common = sorted(
                        set(report.per_topic) & set(base_report.per_topic)
                    )
                    if len(topics_common) >= 2:
                        a_err = [report.per_topic[t].err_ia for t in topics_common]
                        b_err = [base_report.per_topic[t].err_ia for t in topics_common]
                        p_err = paired_ttest(a_err, b_err)[1]
                        a_n = [report.per_topic[t].alpha_ndcg for t in topics_common]
                        b_n = [base_report.per_topic[t].alpha_ndcg for t in topics_common]
                        p_ndcg = paired_ttest(a_n, b_n)[1]
            run_name = f"{_slug(matrix.name)}__{_slug(block.label)}__{_slug(cell.label)}.run"
            flat.append(
                CellResult(
                    block_label=block.label,
                    cell_label=cell.label,
                    report=report,
                    run_name=run_name,
                    p_err_ia=p_err,
                    p_alpha_ndcg=p_ndcg,
                )
            )

    if matrix.sort_by:
        # baselines were resolved in matrix order; sorting is cosmetic
        metric = (
            (lambda c: c.report.mean_err_ia)
            if matrix.sort_by == "err_ia"
            else (lambda c: c.report.mean_alpha_ndcg)
        )
        block_order = [b.label for b in matrix.blocks]
        flat.sort(
            key=lambda c: (block_order.index(c.block_label), -metric(c), c.cell_label)
        )

    result = ExperimentResult(name=matrix.name, cells=tuple(flat))
    write_text_atomic(
        out_dir / f"{_slug(matrix.name)}__report.json",
        json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n",
    )
    write_text_atomic(out_dir / f"{_slug(matrix.name)}__report.txt", result.render_text())
    return result
