"""Experiment outputs.

``<name>.csv`` has one row per (algorithm, sweep value) with the columns of
CSV_COLUMNS; floats are written with ``repr`` so they read back exactly.
``<name>_plot.py`` is a standalone matplotlib script over that CSV and
``<name>_guarantees.txt`` holds one guarantee block per sweep point.
"""

import csv
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from block_sparse_mac.analysis.report import GuaranteeReport
from block_sparse_mac.harness.plan import Algorithm, ExperimentPlan, SweepAxis
from block_sparse_mac.harness.runner import PointStats

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "algorithm",
    "axis",
    "axis_value",
    "ser",
    "fer",
    "throughput",
    "mean_iterations",
    "mean_cancelled",
    "trials",
    "flagged_trials",
    "ser_half_width",
    "fer_half_width",
)

_FLOAT_COLUMNS = (
    "axis_value", "ser", "fer", "throughput", "mean_iterations",
    "mean_cancelled", "ser_half_width", "fer_half_width",
)  # fmt: skip
_INT_COLUMNS = ("trials", "flagged_trials")

PLOT_SCRIPT = '''"""Plot {name}: error rates and throughput against {axis}."""

import csv
from collections import defaultdict

import matplotlib.pyplot as plt

CSV_PATH = "{csv_name}"

curves = defaultdict(lambda: defaultdict(list))
with open(CSV_PATH, newline="") as results:
    for row in csv.DictReader(results):
        for column in ("axis_value", "ser", "fer", "throughput"):
            curves[row["algorithm"]][column].append(float(row[column]))

figure, (ser_axes, fer_axes, throughput_axes) = plt.subplots(1, 3, figsize=(15, 4))
for algorithm, curve in curves.items():
    ser_axes.semilogy(curve["axis_value"], curve["ser"], marker="o", label=algorithm)
    fer_axes.semilogy(curve["axis_value"], curve["fer"], marker="o", label=algorithm)
    throughput_axes.plot(curve["axis_value"], curve["throughput"], marker="o", label=algorithm)

for axes, label in ((ser_axes, "SER"), (fer_axes, "FER"), (throughput_axes, "throughput")):
    axes.set_xlabel("{axis_label}")
    axes.set_ylabel(label)
    axes.grid(True, which="both")
    axes.legend()

figure.tight_layout()
figure.savefig("{name}.png")
plt.show()
'''

_AXIS_LABELS = {
    SweepAxis.ES_N0_DB: "Es/N0 (dB)",
    SweepAxis.N_A: "active users N_a",
    SweepAxis.M: "antennas M",
    SweepAxis.T: "frame length T",
    SweepAxis.N: "online users N",
}


class OutputError(OSError):
    pass


@dataclass(frozen=True)
class EmittedFiles:
    csv: Path
    plot_script: Path
    guarantees: Path | None


def _format_cell(point: PointStats, column: str) -> str:
    value = getattr(point, column)
    return str(value) if column in _INT_COLUMNS else repr(float(value))


def write_results_csv(stats: Sequence[PointStats], path: Path) -> None:
    with open(path, "w", newline="") as results:
        writer = csv.writer(results, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for point in stats:
            writer.writerow(
                [point.algorithm.value, point.axis.value]
                + [_format_cell(point, column) for column in CSV_COLUMNS[2:]]
            )


def read_results_csv(path: Path) -> list[PointStats]:
    with open(path, newline="") as results:
        return [
            PointStats(
                algorithm=Algorithm(row["algorithm"]),
                axis=SweepAxis(row["axis"]),
                **{column: float(row[column]) for column in _FLOAT_COLUMNS},
                **{column: int(row[column]) for column in _INT_COLUMNS},
            )
            for row in csv.DictReader(results)
        ]


def render_guarantees(reports: Sequence[tuple[float, GuaranteeReport]], axis: SweepAxis) -> str:
    return "\n".join(
        f"[{axis.value} = {value:g}]\n{report.to_key_value()}" for value, report in reports
    )


def emit_outputs(
    stats: Sequence[PointStats],
    plan: ExperimentPlan,
    reports: Sequence[tuple[float, GuaranteeReport]] | None = None,
) -> EmittedFiles:
    out_dir = plan.out_dir
    csv_path = out_dir / f"{plan.name}.csv"
    plot_path = out_dir / f"{plan.name}_plot.py"
    guarantees_path = out_dir / f"{plan.name}_guarantees.txt" if reports is not None else None
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_results_csv(stats, csv_path)
        plot_path.write_text(
            PLOT_SCRIPT.format(
                name=plan.name,
                axis=plan.axis.value,
                csv_name=csv_path.name,
                axis_label=_AXIS_LABELS[plan.axis],
            )
        )
        if guarantees_path is not None and reports is not None:
            guarantees_path.write_text(render_guarantees(reports, plan.axis))
    except OSError as error:
        raise OutputError(f"Could not write experiment outputs to {out_dir}: {error}") from error
    logger.info("Wrote %s and %s", csv_path, plot_path)
    return EmittedFiles(csv_path, plot_path, guarantees_path)
