"""Rebuild experiment figures from dswap CSV outputs.

Three figure kinds cover the simulator's result files: cost_vs_size reads
sweep summaries (size,policy,final_cost) and draws one line per policy;
cost_vs_time reads run series CSVs and draws the windowed cost over
requests-per-edge with a stddev band; intra_bars compares the final cost of
several runs as bars. Inputs are never modified and rendering is
deterministic, so the same spec and CSVs reproduce the same image bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

KINDS = ("cost_vs_size", "cost_vs_time", "intra_bars")

RUN_COLUMNS = (
    "t", "requests_per_edge", "cost_cum_mean", "cost_cum_std",
    "cost_win_mean", "cost_win_std", "cost_mig_mean", "swaps_mean",
)
SUMMARY_COLUMNS = ("size", "policy", "final_cost")

# reference name -> (legend label, line style)
REFERENCE_LINES = {
    "random_placement": ("random placement", {"color": "#888888", "linestyle": "--"}),
    "perfect_embedding": ("perfect embedding", {"color": "#2a9d2a", "linestyle": ":"}),
    "clique_local_min": ("clique local minimum", {"color": "#b05a7a", "linestyle": "-."}),
}


@dataclass
class FigureSpec:
    """What to draw: figure kind, input CSVs, labels, reference lines."""

    kind: str
    inputs: list[str]
    labels: list[str] | None = None
    reference_lines: dict[str, float] = field(default_factory=dict)
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("figure spec needs at least one input CSV")
        if self.labels is not None and len(self.labels) != len(self.inputs):
            raise ValueError("one label per input CSV required")
        for name in self.reference_lines:
            if name not in REFERENCE_LINES:
                raise ValueError(
                    f"unknown reference line {name!r}; expected one of "
                    f"{tuple(REFERENCE_LINES)}"
                )

    @classmethod
    def from_json(cls, path: str | Path) -> "FigureSpec":
        with open(path) as fh:
            raw = json.load(fh)
        return cls(
            kind=raw.get("kind", ""),
            inputs=list(raw.get("inputs", [])),
            labels=raw.get("labels"),
            reference_lines=dict(raw.get("reference_lines", {})),
            title=raw.get("title"),
        )


def read_columns(path: str | Path, required: tuple[str, ...]) -> dict[str, list[float]]:
    """Load a CSV, checking the schema; errors name the offending column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise ValueError(f"{path}: missing required column {column!r}")
        rows = list(reader)
    out: dict[str, list] = {c: [] for c in required}
    for row in rows:
        for column in required:
            value = row[column]
            out[column].append(value if column == "policy" else float(value))
    return out


def _label(spec: FigureSpec, index: int) -> str:
    if spec.labels is not None:
        return spec.labels[index]
    return Path(spec.inputs[index]).stem


def _draw_references(ax, spec: FigureSpec) -> None:
    for name, value in spec.reference_lines.items():
        label, style = REFERENCE_LINES[name]
        ax.axhline(float(value), label=label, linewidth=1.2, **style)


def build_figure(spec: FigureSpec):
    """Matplotlib figure for a spec; separated from file output for testing."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    if spec.kind == "cost_vs_size":
        series: dict[str, list[tuple[float, float]]] = {}
        for path in spec.inputs:
            table = read_columns(path, SUMMARY_COLUMNS)
            for size, policy, cost in zip(
                table["size"], table["policy"], table["final_cost"]
            ):
                series.setdefault(policy, []).append((size, cost))
        for policy, points in series.items():
            points.sort()
            ax.plot(
                [p[0] for p in points],
                [p[1] for p in points],
                marker="o",
                label=policy,
            )
        ax.set_xlabel("guest graph size (VMs per tenant)")
        ax.set_ylabel("amortized communication cost")
    elif spec.kind == "cost_vs_time":
        for i, path in enumerate(spec.inputs):
            table = read_columns(
                path, ("requests_per_edge", "cost_win_mean", "cost_win_std")
            )
            x = table["requests_per_edge"]
            y = table["cost_win_mean"]
            std = table["cost_win_std"]
            (line,) = ax.plot(x, y, label=_label(spec, i))
            ax.fill_between(
                x,
                [m - s for m, s in zip(y, std)],
                [m + s for m, s in zip(y, std)],
                alpha=0.15,
                color=line.get_color(),
            )
        ax.set_xlabel("requests per guest edge")
        ax.set_ylabel("windowed amortized cost")
    else:  # intra_bars
        labels = []
        finals = []
        for i, path in enumerate(spec.inputs):
            table = read_columns(path, ("cost_cum_mean",))
            labels.append(_label(spec, i))
            finals.append(table["cost_cum_mean"][-1])
        ax.bar(range(len(finals)), finals, color="#4878a8", width=0.6)
        ax.set_xticks(range(len(finals)), labels, rotation=15, ha="right")
        ax.set_ylabel("final amortized cost")
    _draw_references(ax, spec)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, linewidth=0.3, alpha=0.6)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    return fig


def plot(spec: FigureSpec, out_path: str | Path) -> Path:
    """Render the spec to an image file; returns the written path."""
    out_path = Path(out_path)
    fig = build_figure(spec)
    try:
        fig.savefig(out_path, metadata={"Software": "dswap-plot"})
    finally:
        plt.close(fig)
    return out_path
