"""Figure rendering for CLI reports.

matplotlib is an optional dependency and is imported only when a figure is
actually drawn, always with the non-interactive Agg backend.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError("plotting needs matplotlib; install the 'plot' extra") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_curves(series, path, *, title="", xlabel="erasure probability", ylabel="FER",
                logy=True, markers=True) -> Path:
    """Draw ``series``, a list of ``(label, x, y)``, to ``path``."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for label, x, y in series:
        y = np.asarray(y, dtype=float)
        if logy:
            y = np.where(y > 0, y, np.nan)
        ax.plot(x, y, marker="o" if markers else None, ms=3, lw=1.2, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_spectrum(series, path, *, title="") -> Path:
    """Plot ``log10`` spectra; ``series`` holds ``(label, log10_coeffs)``."""
    drawn = []
    for label, logs in series:
        logs = np.array([v if math.isfinite(v) else np.nan for v in logs])
        drawn.append((label, np.arange(logs.size), logs))
    return plot_curves(drawn, path, title=title, xlabel="weight", ylabel="log10 A_w", logy=False)


_SCRIPT = '''\
"""Plot CSV curves written by becldpc."""
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

FILES = {files!r}
X, Y = {x!r}, {y!r}

fig, ax = plt.subplots(figsize=(6.0, 4.2))
for name in FILES:
    with open(name, newline="") as fh:
        rows = [r for r in csv.DictReader(fh)]
    xs = [float(r[X]) for r in rows]
    ys = [float(r[Y]) if float(r[Y]) > 0 else float("nan") for r in rows]
    ax.plot(xs, ys, marker="o", ms=3, label=name)
ax.set_yscale({scale!r})
ax.set_xlabel(X)
ax.set_ylabel(Y)
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=8)
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else {out!r}
fig.savefig(out, dpi=120)
print(out)
'''


def plot_script(csv_files, x="epsilon", y="fer", logy=True, out="curves.png") -> str:
    """Source of a standalone script that plots ``y`` against ``x`` from CSV files."""
    return _SCRIPT.format(files=[str(f) for f in csv_files], x=x, y=y,
                          scale="log" if logy else "linear", out=out)
