#!/usr/bin/env python3
"""Render PNG plots of a simulation trace CSV: states, controls, sliding
variables and tracking errors."""
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header, data = rows[0], rows[1:]
    cols = {name: [float(r[i]) for r in data] for i, name in enumerate(header)}
    return header, cols


def plot_group(t, cols, names, title, ylabel, out):
    if not names:
        return
    fig, ax = plt.subplots(figsize=(8, 4))
    for n in names:
        ax.plot(t, cols[n], label=n, linewidth=0.9)
    ax.set_xlabel("t [s]")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)


def main():
    if len(sys.argv) != 3:
        print("usage: plot_trace.py TRACE.csv OUTDIR", file=sys.stderr)
        return 2
    header, cols = load(sys.argv[1])
    out = Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    t = cols["t"]
    order = sorted({n.split("_")[1] for n in header if n.startswith("x") and "_" in n})
    for k in order:
        names = [n for n in header if n.startswith("x") and n.endswith("_" + k)]
        plot_group(t, cols, names, f"state component {k}", f"x_{k}", out / f"state_{k}.png")
    plot_group(t, cols, [n for n in header if n.startswith("u")], "control", "u", out / "control.png")
    plot_group(t, cols, [n for n in header if n.startswith("s")], "sliding variable", "s", out / "sliding.png")
    plot_group(t, cols, [n for n in header if n.startswith("err")], "tracking error", "||x_i - x_0||", out / "error.png")
    if "V" in cols:
        plot_group(t, cols, ["V"], "Lyapunov-Krasovskii functional", "V", out / "lyapunov.png")
    return 0


if __name__ == "__main__":
    sys.exit(main())
