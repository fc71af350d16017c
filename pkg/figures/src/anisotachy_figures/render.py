"""Render publication-style figures from the simulation CLI's CSV files.

Five figure ids are supported:

====== ============================ ===========================================
id     input CSV (producing cmd)    content
====== ============================ ===========================================
fig2a  decay                        atomic populations vs time, with individual
                                    (e^-t) and superradiant (e^-2t) gray
                                    reference curves and optional onset lines
fig2b  intensity                    spacetime intensity heatmap with atom
                                    position lines and optional T_L/T_R marks
fig3a  sweep                        directionality heatmap chi(theta, dphi)
                                    with optimum and Bell-state markers,
                                    colorbar symmetric about zero
fig3b  sweep                        same layout for a second coupling value
fig4   decay (long run)             amplitude sign reversals: Re c_1, Re c_2
                                    and populations with zero crossings marked
                                    and absorb/emit intervals shaded
====== ============================ ===========================================

All quantities are in internal units (gamma = 1, positions in units of d),
matching the producing CLI.  Rendering is read-only over the CSVs and embeds
no timestamps, so re-running on the same input reproduces the file
byte-for-byte.
"""

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4")

_PNG_METADATA = {"Software": "anisotachy-figures"}


class SchemaError(Exception):
    """Input CSV does not have the columns or shape the figure needs."""


def _load(path: str, required: tuple) -> np.ndarray:
    with open(path, newline="") as fh:
        header = next(csv.reader(fh), None)
    if header is None:
        raise SchemaError(f"{path}: empty file")
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {', '.join(missing)} "
            f"(found: {', '.join(header)})"
        )
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.shape == ():  # single row
        data = data.reshape(1)
    return data


def _pivot(data, row_key: str, col_key: str, val_key: str, path: str):
    """Long-format (row_key-major) columns -> (rows, cols, matrix)."""
    rows = np.unique(data[row_key])
    cols = np.unique(data[col_key])
    if rows.size * cols.size != data.size:
        raise SchemaError(
            f"{path}: {data.size} rows do not fill a "
            f"{rows.size} x {cols.size} {row_key}/{col_key} grid"
        )
    mat = data[val_key].reshape(rows.size, cols.size)
    return rows, cols, mat


def _pi_axis(ax, which: str, lo: float, hi: float):
    """Tick marks at multiples of pi/8 with fraction labels."""
    names = {0: "0", 1: "π/8", 2: "π/4", 3: "3π/8", 4: "π/2",
             8: "π", -8: "−π", -4: "−π/2", -2: "−π/4"}
    step = np.pi / 8
    ticks = [k * step for k in sorted(names) if lo - 1e-9 <= k * step <= hi + 1e-9]
    labels = [names[int(round(t / step))] for t in ticks]
    (ax.set_xticks if which == "x" else ax.set_yticks)(ticks, labels)


def _onset_lines(ax, t_l, t_r, vertical: bool):
    for t_val, name in ((t_l, "T_L"), (t_r, "T_R")):
        if t_val is None:
            continue
        if vertical:
            ax.axvline(t_val, color="k", ls=":", lw=0.9)
        else:
            ax.axhline(t_val, color="w", ls="-.", lw=0.9)


def _fig2a(path, path2, out, opts):
    data = _load(path, ("t", "pop1", "pop2"))
    t = data["t"]
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    floor = 1e-9
    ax.semilogy(t, np.maximum(data["pop1"], floor), "-", color="tab:blue", label="atom 1")
    ax.semilogy(t, np.maximum(data["pop2"], floor), "-.", color="tab:red", label="atom 2")
    if opts["references"]:
        if path2 is not None:
            ref = _load(path2, ("t", "pop1", "pop2"))
            ax.semilogy(ref["t"], np.maximum(ref["pop1"], floor), ":",
                        color="gray", label="independent run")
        else:
            ax.semilogy(t, np.maximum(0.5 * np.exp(-t), floor), ":",
                        color="gray", label=r"$e^{-\gamma t}/2$")
        ax.semilogy(t, np.maximum(0.5 * np.exp(-2.0 * t), floor), "--",
                    color="gray", label=r"$e^{-2\gamma t}/2$")
    _onset_lines(ax, opts["t_l"], opts["t_r"], vertical=True)
    ax.set_xlim(t[0], t[-1])
    ax.set_ylim(max(floor, 1e-6), 1.0)
    ax.set_xlabel(r"$\gamma t$")
    ax.set_ylabel(r"$|c_i(t)|^2$")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return {"rows": int(t.size), "t_max": float(t[-1])}


def _fig2b(path, path2, out, opts):
    if path2 is not None:
        raise SchemaError("fig2b takes a single input CSV")
    data = _load(path, ("x", "t", "intensity"))
    x, t, grid = _pivot(data, "x", "t", "intensity", path)
    fig, ax = plt.subplots(figsize=(4.6, 3.8))
    im = ax.imshow(
        grid.T,
        origin="lower",
        extent=(x[0], x[-1], t[0], t[-1]),
        aspect="auto",
        cmap=opts["cmap"] or "inferno",
        vmin=0.0,
    )
    for x_atom in (-0.5, 0.5):
        ax.axvline(x_atom, color="w", ls="--", lw=0.9)
    _onset_lines(ax, opts["t_l"], opts["t_r"], vertical=False)
    ax.set_xlabel(r"$x/d$")
    ax.set_ylabel(r"$\gamma t$")
    fig.colorbar(im, ax=ax, label=r"$I/I_0$")
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return {"rows": int(data.size), "nx": int(x.size), "nt": int(t.size),
            "i_max": float(np.max(grid))}


def _fig3(path, path2, out, opts, bell_markers: bool):
    if path2 is not None:
        raise SchemaError("chi heatmaps take a single input CSV")
    data = _load(path, ("theta", "delta_phi", "chi"))
    theta, dphi, chi = _pivot(data, "theta", "delta_phi", "chi", path)
    vmax = float(np.nanmax(np.abs(chi)))
    fig, ax = plt.subplots(figsize=(4.8, 3.8))
    im = ax.imshow(
        chi.T,
        origin="lower",
        extent=(theta[0], theta[-1], dphi[0], dphi[-1]),
        aspect="auto",
        cmap=opts["cmap"] or "RdBu_r",
        vmin=-vmax,
        vmax=vmax,
    )
    # extrema of |chi| sit at (pi/8, pi/2) and its mirror image for full coupling
    for th, dp in ((np.pi / 8, np.pi / 2), (3 * np.pi / 8, -np.pi / 2)):
        ax.plot(th, dp, "x", color="k", ms=7)
    if bell_markers:
        # equal-amplitude states with +/- pi/2 relative phase
        ax.plot([np.pi / 4, np.pi / 4], [np.pi / 2, -np.pi / 2], "o",
                color="gray", ms=5, mec="k")
    _pi_axis(ax, "x", theta[0], theta[-1])
    _pi_axis(ax, "y", dphi[0], dphi[-1])
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$\Delta\phi$")
    fig.colorbar(im, ax=ax, label=r"$\chi$", ticks=[-vmax, 0.0, vmax])
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return {"rows": int(data.size), "vmin": -vmax, "vmax": vmax}


def _crossings(t, y):
    """Linear-interpolated zeros of y(t) at sign changes."""
    s = np.sign(y)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])


def _runs(t, mask):
    """Contiguous True stretches of mask -> list of (t_start, t_end)."""
    padded = np.concatenate(([False], mask, [False]))
    edges = np.nonzero(padded[1:] != padded[:-1])[0]
    return [(t[a], t[min(b, t.size - 1)]) for a, b in zip(edges[::2], edges[1::2])]


def _fig4(path, path2, out, opts):
    if path2 is not None:
        raise SchemaError("fig4 takes a single input CSV")
    data = _load(path, ("t", "re_c1", "re_c2", "pop1", "pop2"))
    t = data["t"]
    dp1 = np.gradient(data["pop1"], t)
    dp2 = np.gradient(data["pop2"], t)
    # yellow: atom 1 absorbing while atom 2 emits; green: roles reversed
    spans = [(_runs(t, (dp1 > 0) & (dp2 < 0)), "gold"),
             (_runs(t, (dp1 < 0) & (dp2 > 0)), "yellowgreen")]
    cross = (_crossings(t, data["re_c1"]), _crossings(t, data["re_c2"]))

    fig, axes = plt.subplots(2, 2, figsize=(7.4, 4.6), sharex=True)
    panels = (
        (axes[0, 0], data["re_c1"], r"$\mathrm{Re}\,c_1$", 0),
        (axes[0, 1], data["re_c2"], r"$\mathrm{Re}\,c_2$", 1),
        (axes[1, 0], data["pop1"], r"$|c_1|^2$", 0),
        (axes[1, 1], data["pop2"], r"$|c_2|^2$", 1),
    )
    for ax, y, label, atom in panels:
        for intervals, color in spans:
            for a, b in intervals:
                ax.axvspan(a, b, color=color, alpha=0.3, lw=0)
        ax.plot(t, y, color="tab:blue" if atom == 0 else "tab:red", lw=1.2)
        for tc in cross[atom]:
            ax.axvline(tc, color="k", ls=":", lw=0.8)
        if label.startswith(r"$\mathrm{Re}"):
            ax.axhline(0.0, color="k", lw=0.6)
        ax.set_ylabel(label)
    for ax in axes[1]:
        ax.set_xlabel(r"$\gamma t$")
    axes[0, 0].set_xlim(t[0], t[-1])
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return {"rows": int(t.size),
            "crossings_c1": int(cross[0].size), "crossings_c2": int(cross[1].size)}


_RENDERERS = {
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3a": lambda p, p2, out, o: _fig3(p, p2, out, o, bell_markers=True),
    "fig3b": lambda p, p2, out, o: _fig3(p, p2, out, o, bell_markers=False),
    "fig4": _fig4,
}


def render(
    figure_id: str,
    csv_path: str,
    out_path: str,
    csv2_path: str = None,
    cmap: str = None,
    references: bool = True,
    t_l: float = None,
    t_r: float = None,
) -> dict:
    """Render one figure from CSV input(s) and return a metadata dict.

    The dict always carries ``figure``, ``out`` and ``rows``; heatmaps add
    their color scale (``vmin``/``vmax`` for chi maps, ``i_max`` for the
    intensity map), fig4 adds zero-crossing counts.  Raises ``SchemaError``
    for unknown ids, missing columns, or rows that do not fill a grid.
    """
    if figure_id not in _RENDERERS:
        raise SchemaError(
            f"unknown figure id {figure_id!r}; expected one of {', '.join(FIGURE_IDS)}"
        )
    opts = {"cmap": cmap, "references": references, "t_l": t_l, "t_r": t_r}
    meta = _RENDERERS[figure_id](csv_path, csv2_path, out_path, opts)
    meta.update(figure=figure_id, out=out_path)
    return meta
