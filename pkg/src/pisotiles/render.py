"""Plot/serialize helpers shared by the CLI subcommands.

Axis convention for scatter output: when the space has a single non-dominant
real place the x-axis is that coordinate and the y-axis is the Euclidean
model of the first p-adic coordinate; when the Archimedean part is a complex
plane the axes are its real and imaginary parts.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "pisotiles"
import matplotlib.pyplot as plt  # noqa: E402

from .embedding import EmbeddedPoint  # noqa: E402
from .numberfield import FieldElement  # noqa: E402
from .system import PisotSystem  # noqa: E402

_COLORS = ["#5b3794", "#e9c46a", "#2a9d8f", "#e76f51", "#264653",
           "#8ab17d", "#b5179e", "#f4a261", "#457b9d"]

MODEL_DIGITS = 24


def rational_str(q: Fraction) -> str:
    return str(q)


def field_element_json(x: FieldElement) -> dict:
    return {"coeffs": [rational_str(c) for c in x.coeffs], "float": float(x)}


def point_coordinates(system: PisotSystem, z: EmbeddedPoint) -> list[float]:
    """Flat coordinate row: per real place one column, per complex place
    re/im, per p-adic ring the Euclidean model value."""
    row: list[float] = []
    for pl, c in zip(system.space.places, z.arch):
        if pl.kind == "real":
            row.append(c.real)
        else:
            row.extend([c.real, c.imag])
    for ring, c in zip(system.space.rings, z.padic):
        start, digits = ring.alpha_digits(c, MODEL_DIGITS)
        row.append(ring.euclidean_model(start, digits))
    return row


def coordinate_headers(system: PisotSystem) -> list[str]:
    head = []
    for i, pl in enumerate(system.space.places, 1):
        if pl.kind == "real":
            head.append(f"arch{i}_re")
        else:
            head.extend([f"arch{i}_re", f"arch{i}_im"])
    for ring in system.space.rings:
        head.append(f"padic_{ring.p}_model")
    return head


def scatter_axes(system: PisotSystem) -> tuple[int, int, list[str]]:
    """(x column, y column, labels) into a point_coordinates row."""
    head = coordinate_headers(system)
    if system.space.places and system.space.places[0].kind == "complex":
        return 0, 1, head
    if len(head) >= 2:
        return 0, len(head) - len(system.space.rings), head
    return 0, 0, head


def write_points_csv(system: PisotSystem, groups: dict[int, list[EmbeddedPoint]],
                     out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["letter"] + coordinate_headers(system))
    for letter in sorted(groups):
        for z in groups[letter]:
            w.writerow([letter] + [f"{v:.12g}" for v in point_coordinates(system, z)])


def scatter_figure(system: PisotSystem, groups: dict[int, list[EmbeddedPoint]],
                   title: str):
    xi, yi, head = scatter_axes(system)
    fig, ax = plt.subplots(figsize=(7, 5))
    for letter in sorted(groups):
        rows = [point_coordinates(system, z) for z in groups[letter]]
        ax.scatter([r[xi] for r in rows], [r[yi] for r in rows], s=1.2,
                   color=_COLORS[(letter - 1) % len(_COLORS)],
                   label=f"letter {letter}", linewidths=0)
    ax.set_xlabel(head[xi])
    ax.set_ylabel(head[yi] if yi != xi else "")
    ax.set_title(title)
    ax.legend(markerscale=8, fontsize=8)
    fig.tight_layout()
    return fig


def save_figure(fig, path: str, fmt: str) -> None:
    if fmt == "svg":
        fig.savefig(path, format="svg", metadata={"Date": None})
    else:
        fig.savefig(path, format="png", dpi=130)
    plt.close(fig)


def dump_json(data, out) -> None:
    json.dump(data, out, indent=2, sort_keys=True)
    out.write("\n")
