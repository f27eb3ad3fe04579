"""Figure rendering for sweep reports.

Writes two PNGs next to the delimited output: the generation-probability
curves and the postselected-fidelity curves, one line per detector pair.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .histories import PAIR_ORDER, CurveRow, pair_name  # noqa: E402

_COLORS = {
    ("D1", "D3"): "tab:blue",
    ("D1", "D4"): "tab:orange",
    ("D2", "D3"): "tab:green",
    ("D2", "D4"): "tab:red",
}


def _by_pair(rows: list[CurveRow]):
    series = {pair: ([], []) for pair in PAIR_ORDER}
    fid = {pair: ([], []) for pair in PAIR_ORDER}
    for row in rows:
        series[row.pair][0].append(row.delta)
        series[row.pair][1].append(row.p_gen)
        fid[row.pair][0].append(row.f_postselected)
        fid[row.pair][1].append(row.f_single_occupancy)
    return series, fid


def render_sweep_figures(rows: list[CurveRow], stem: Path) -> list[Path]:
    """Render <stem>_generation.png and <stem>_fidelity.png; returns paths."""
    stem = Path(stem)
    series, fid = _by_pair(rows)
    written = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for pair in PAIR_ORDER:
        deltas, values = series[pair]
        ax.plot(deltas, values, label=pair_name(pair), color=_COLORS[pair])
    ax.set_xlabel("interference failure weight delta")
    ax.set_ylabel("generation probability")
    ax.legend()
    fig.tight_layout()
    path = stem.with_name(stem.name + "_generation.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for pair in PAIR_ORDER:
        deltas, _ = series[pair]
        f_ps, f_single = fid[pair]
        ax.plot(deltas, f_ps, label=f"{pair_name(pair)} detector-postselected", color=_COLORS[pair])
        ax.plot(
            deltas,
            f_single,
            linestyle="--",
            label=f"{pair_name(pair)} single-occupancy",
            color=_COLORS[pair],
        )
    ax.set_xlabel("interference failure weight delta")
    ax.set_ylabel("fidelity with the target state")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = stem.with_name(stem.name + "_fidelity.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    return written
