"""Render the four standard figure kinds from rabiholo CSVs.

Rendering never alters or reorders the data; axis extents come from the
data plus explicit style options.  Output files are deterministic
(fixed backend, embedded metadata stripped), so re-rendering a recipe
reproduces the image byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .recipes import REQUIRED, FigureRecipe, Table, load_table

__all__ = ["build_figure", "render"]


def _parity_line_props(label: str, style):
    if label == "e":
        return {"color": style.even_color, "linestyle": style.even_linestyle}
    if label == "o":
        return {"color": style.odd_color, "linestyle": style.odd_linestyle}
    raise ValueError(f"unknown parity label {label!r}; expected 'e' or 'o'")


def _spectrum_axes(ax, table: Table, style) -> None:
    levels = sorted(
        (name for name in table.header if name.startswith("E") and name[1:].isdigit()),
        key=lambda name: int(name[1:]),
    )
    g = table.numeric("g")
    for name in levels:
        parity_col = "p" + name[1:]
        table.require([parity_col])
        labels = table.columns[parity_col]
        # parity is constant along a tracked curve; style by its first label
        props = _parity_line_props(str(labels[0]), style)
        ax.plot(g, table.numeric(name), **props)
    ax.set_xlabel(style.xlabel or "coupling g / cavity frequency")
    ax.set_ylabel(style.ylabel or "dressed energy / cavity frequency")


def _populations_axes(ax, table: Table, prefix: str, xlabel: str, style) -> None:
    t = table.numeric(table.header[0])
    for name in table.header[1:]:
        if name.startswith(prefix):
            ax.plot(t, table.numeric(name), label=name)
    ax.set_xlabel(style.xlabel or xlabel)
    ax.set_ylabel(style.ylabel or "population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="center right", fontsize="small")


def _fidelity_axes(ax, table: Table, style) -> None:
    beta = table.numeric("beta")
    mean = table.numeric("mean_fidelity")
    if "std_fidelity" in table.columns:
        ax.errorbar(beta, mean, yerr=table.numeric("std_fidelity"),
                    fmt="o-", capsize=3)
    else:
        ax.plot(beta, mean, "o-")
    ax.set_xscale("log")
    ax.set_xlabel(style.xlabel or "pulse rate / cavity frequency")
    ax.set_ylabel(style.ylabel or "mean gate fidelity")


def build_figure(recipe: FigureRecipe):
    """Assemble the matplotlib figure for a recipe (no file output)."""
    style = recipe.style
    tables = [load_table(path) for path in recipe.inputs]
    for table in tables:
        table.require(REQUIRED[recipe.kind])

    if recipe.kind == "rabi_panels":
        fig, axes = plt.subplots(len(tables), 1, figsize=(6.0, 2.4 * len(tables)),
                                 sharex=False, squeeze=False)
        for ax, table in zip(axes[:, 0], tables):
            _populations_axes(ax, table, "P", "time / cavity period x 2pi", style)
            ax.set_title(table.path.stem, fontsize="small")
    else:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        table = tables[0]
        if recipe.kind == "spectrum":
            _spectrum_axes(ax, table, style)
        elif recipe.kind == "fidelity":
            _fidelity_axes(ax, table, style)
        else:
            _populations_axes(ax, table, "P", "time / cavity period x 2pi", style)
            if "leakage" in table.columns:
                ax.plot(table.numeric("t"), table.numeric("leakage"),
                        label="leakage", linestyle=":")
                ax.legend(loc="center right", fontsize="small")
    if style.title:
        fig.suptitle(style.title)
    fig.tight_layout()
    return fig


def render(recipe: FigureRecipe) -> Path:
    """Write the recipe's image; returns the output path."""
    fig = build_figure(recipe)
    out = Path(recipe.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    # strip volatile metadata so identical recipes give identical bytes
    suffix = out.suffix.lower()
    metadata = {"Software": None} if suffix == ".png" else {"Date": None}
    fig.savefig(out, dpi=recipe.style.dpi, metadata=metadata)
    plt.close(fig)
    return out
