"""Static plots from CSV datasets.

Rendering is read-only: inputs are never modified, and identical input bytes
produce identical plotted data. Five kinds are supported:

- ``trajectory``       one ``t,mean_blue`` CSV -> single curve
- ``trajectory-fan``   several ``t,mean_blue`` CSVs overlaid
- ``bifurcation-scatter``  ``coordinate,extremum`` CSV -> scatter
- ``mle-curve``        ``nu,mle`` CSV -> curve with a zero reference line
- ``function-overlay`` one CSV; first column is the x axis, every other
                       column is drawn as a labelled curve
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


class MissingColumn(Exception):
    pass


class EmptyDataset(Exception):
    pass


KINDS = ("trajectory", "trajectory-fan", "bifurcation-scatter", "mle-curve",
         "function-overlay")


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; known: {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def read_columns(path: str, required: tuple[str, ...] = ()
                 ) -> dict[str, list[float]]:
    """Read a CSV into named float columns, checking the required headers."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        for col in required:
            if col not in names:
                raise MissingColumn(f"{path}: missing column {col!r} "
                                    f"(found {names})")
        data: dict[str, list[float]] = {name: [] for name in names}
        for row in reader:
            for name in names:
                data[name].append(float(row[name]))
    if not data or not next(iter(data.values())):
        raise EmptyDataset(f"{path}: no data rows")
    return data


def _finish(ax, spec: PlotSpec, default_x: str, default_y: str):
    ax.set_xlabel(spec.xlabel or default_x)
    ax.set_ylabel(spec.ylabel or default_y)
    if spec.title:
        ax.set_title(spec.title)


def render(spec: PlotSpec) -> str:
    """Draw the plot and write it to ``spec.output``; returns the path."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    try:
        if spec.kind == "trajectory":
            data = read_columns(spec.inputs[0], ("t", "mean_blue"))
            ax.plot(data["t"], data["mean_blue"], lw=1.2)
            ax.set_ylim(-0.02, 1.02)
            _finish(ax, spec, "t", "mean fraction of defended nodes")
        elif spec.kind == "trajectory-fan":
            for path in spec.inputs:
                data = read_columns(path, ("t", "mean_blue"))
                ax.plot(data["t"], data["mean_blue"], lw=1.0,
                        label=Path(path).stem)
            ax.set_ylim(-0.02, 1.02)
            ax.legend(fontsize=7, ncol=2)
            _finish(ax, spec, "t", "mean fraction of defended nodes")
        elif spec.kind == "bifurcation-scatter":
            data = read_columns(spec.inputs[0], ("coordinate", "extremum"))
            ax.plot(data["coordinate"], data["extremum"], ".", ms=2.5)
            _finish(ax, spec, "sweep coordinate", "attractor extrema")
        elif spec.kind == "mle-curve":
            data = read_columns(spec.inputs[0], ("nu", "mle"))
            ax.axhline(0.0, color="0.6", lw=0.8)
            ax.plot(data["nu"], data["mle"], "-o", ms=3)
            _finish(ax, spec, "nu", "maximal Lyapunov exponent")
        else:  # function-overlay
            data = read_columns(spec.inputs[0])
            names = list(data)
            if len(names) < 2:
                raise MissingColumn(
                    f"{spec.inputs[0]}: overlay needs an x column plus at "
                    f"least one series (found {names})")
            x = data[names[0]]
            for name in names[1:]:
                ax.plot(x, data[name], lw=1.2, label=name)
            ax.legend(fontsize=8)
            _finish(ax, spec, names[0], "value")
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output
