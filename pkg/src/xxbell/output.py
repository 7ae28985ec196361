"""CSV tables, SVG line plots and the run record written next to them."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

SIG_DIGITS = 12


def format_value(value: Any) -> str:
    """Render one CSV cell: floats to 12 significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        text = f"{value:.{SIG_DIGITS}g}"
        return "0" if text == "-0" else text
    return str(value)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], path: Optional[Path]) -> str:
    text = render_csv(header, rows)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="")
    return text


def read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@dataclass
class RunSpec:
    """Fully resolved parameters of one CLI invocation."""

    command: str
    n_sites: Optional[int] = None
    field: Optional[float] = None
    fields: Optional[list[float]] = None
    couplings: Optional[list[float]] = None
    temperatures: Optional[dict[str, float]] = None
    search: Optional[dict[str, float]] = None
    optimizer: dict[str, Any] = dataclasses.field(default_factory=dict)
    targets: Optional[list[str]] = None
    out: Optional[str] = None
    plot: Optional[str] = None

    def to_json(self) -> str:
        data = {k: v for k, v in asdict(self).items() if v is not None}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunSpec":
        data = json.loads(text)
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown run spec keys: {sorted(unknown)}")
        return cls(**data)


def runspec_path(out: Path) -> Path:
    return out.with_suffix(".runspec.json")


def write_line_plot(
    path: Path,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    *,
    xlabel: str,
    ylabel: str,
    hline: Optional[float] = None,
    title: str = "",
) -> None:
    """Self-contained SVG line plot, with an optional dashed reference line."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, xs, ys in series:
        ax.plot(xs, ys, label=label, linewidth=1.5)
    if hline is not None:
        ax.axhline(hline, color="black", linestyle="--", linewidth=1.0, label=f"bound {hline:g}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
