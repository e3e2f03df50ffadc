"""Figures for filter traces."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .formula import render  # noqa: E402
from .semantic import NEVER, FilterTrace  # noqa: E402


def plot_trace(trace: FilterTrace, path: str | Path, limit: int = 30) -> Path:
    """Stage sizes on the left, per-formula entry stages on the right.

    Formulas that never enter are drawn past the last stage in grey.
    At most ``limit`` formulas are listed, shortest first.
    """
    path = Path(path)
    growth = trace.growth()
    stages = range(1, len(growth) + 1)
    entries = sorted(trace.entry_stage.items(), key=lambda kv: (len(render(kv[0])), render(kv[0])))[:limit]
    never_x = len(growth) + 1

    fig, (left, right) = plt.subplots(1, 2, figsize=(11, max(3.5, 0.28 * len(entries) + 1)),
                                      gridspec_kw={"width_ratios": [1, 1.4]})
    left.step(list(stages), growth, where="post", color="tab:blue")
    left.plot(list(stages), growth, "o", color="tab:blue", markersize=4)
    left.axvline(trace.stabilized_at, color="tab:red", linestyle="--", linewidth=1,
                 label=f"stable from stage {trace.stabilized_at}")
    left.set_xlabel("stage k")
    left.set_ylabel("|T_k|")
    left.set_title(f"closure size {len(trace.closure)}")
    left.legend(loc="lower right", fontsize=8)

    labels = [render(f) for f, _ in entries]
    xs = [never_x if e is NEVER else e for _, e in entries]
    colors = ["lightgrey" if e is NEVER else "tab:green" for _, e in entries]
    ys = range(len(entries))
    right.barh(list(ys), xs, color=colors)
    right.set_yticks(list(ys))
    right.set_yticklabels(labels, fontsize=7, family="monospace")
    right.invert_yaxis()
    right.set_xlabel(f"entry stage (grey: never, drawn at {never_x})")
    right.set_xlim(0, never_x + 0.5)

    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
