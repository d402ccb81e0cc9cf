"""Staircase diagram rendering: ASCII grids and matplotlib figure files.

Conventions: unit-square grid, step i rises k_i then runs one unit right,
main diagonal through the origin, upper diagonal one unit higher.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.fonttype"] = "none"  # keep annotation text searchable
matplotlib.rcParams["svg.hashsalt"] = "blochpt"

import matplotlib.pyplot as plt

from .coefficients import c_closed, e_closed, format_rational
from .diagrams import BlochSequence, SequenceLike, as_parts, crossing_numbers, is_convex

ASCII_MAIN = "/"
ASCII_UPPER = "."


@dataclass(frozen=True)
class RenderSpec:
    """What to draw and how."""

    sequences: tuple[BlochSequence, ...]
    fmt: str = "svg"  # ascii | svg | png
    annotations: bool = False

    def __post_init__(self):
        seqs = tuple(BlochSequence(as_parts(s)) for s in self.sequences)
        object.__setattr__(self, "sequences", seqs)
        if self.fmt not in ("ascii", "svg", "png"):
            raise ValueError(f"unknown render format {self.fmt!r}")


def render(spec: RenderSpec, out: str | None = None) -> str:
    """Render per spec: ascii returns the text, svg/png write `out` and return its path."""
    if spec.fmt == "ascii":
        text = "\n\n".join(ascii_diagram(s, spec.annotations) for s in spec.sequences)
        if out is not None:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
            return out
        return text
    if out is None:
        raise ValueError(f"--out is required for {spec.fmt} output")
    return render_figure(
        [s.parts for s in spec.sequences], out, fmt=spec.fmt, annotations=spec.annotations
    )


def annotation_lines(s: SequenceLike) -> list[str]:
    """Coefficient and crossing summary attached to a drawn diagram."""
    seq = BlochSequence(as_parts(s))
    return [
        f"sequence {seq}",
        f"c = {format_rational(c_closed(seq))}, e = {format_rational(e_closed(seq))}",
        f"crossing numbers {crossing_numbers(seq)}",
        f"convex: {'yes' if is_convex(seq) else 'no'}",
    ]


def path_points(s: SequenceLike) -> list[tuple[int, int]]:
    """Staircase corner points: step i rises k_i (width 1), then runs right."""
    points = [(0, 0)]
    x = y = 0
    for k in as_parts(s):
        if k:
            y += k
            points.append((x, y))
        x += 1
        points.append((x, y))
    return points


def ascii_diagram(s: SequenceLike, annotations: bool = False) -> str:
    """Character-grid staircase with both diagonals.

    Lattice points map to even grid coordinates; '-' and '|' fill the
    half-steps of the path, '+' marks its corners.  The main diagonal prints
    as '/', the upper diagonal as '.'; the path wins ties.
    """
    parts = as_parts(s)
    n = len(parts)
    size = 2 * n + 1
    grid = [[" "] * size for _ in range(size)]

    def put(x2: int, y2: int, ch: str, force: bool = False) -> None:
        row, col = 2 * n - y2, x2
        if 0 <= row < size and 0 <= col < size and (force or grid[row][col] == " "):
            grid[row][col] = ch

    for j in range(n + 1):
        put(2 * j, 2 * j, ASCII_MAIN)
        if j < n:
            put(2 * j + 1, 2 * j + 1, ASCII_MAIN)
            put(2 * j, 2 * j + 2, ASCII_UPPER)
            put(2 * j + 1, 2 * j + 3, ASCII_UPPER)

    x = y = 0
    put(0, 0, "+", force=True)
    for k in parts:
        for _ in range(k):
            put(2 * x, 2 * y + 1, "|", force=True)
            y += 1
            put(2 * x, 2 * y, "+", force=True)
        put(2 * x + 1, 2 * y, "-", force=True)
        x += 1
        put(2 * x, 2 * y, "+", force=True)

    lines = ["".join(row).rstrip() for row in grid]
    while lines and not lines[0]:
        lines.pop(0)
    if annotations:
        lines.append("")
        lines.extend(annotation_lines(parts))
    return "\n".join(lines)


def render_figure(
    sequences: SequenceLike | list,
    out: str,
    fmt: str = "svg",
    annotations: bool = False,
) -> str:
    """Draw one or more staircases to an SVG or PNG file; returns the path."""
    if isinstance(sequences, (BlochSequence, tuple)) or (
        sequences and isinstance(sequences[0], int)
    ):
        sequences = [sequences]
    parts_list = [as_parts(s) for s in sequences]
    count = len(parts_list)
    fig, axes = plt.subplots(1, count, figsize=(4.2 * count, 4.6), squeeze=False)
    for ax, parts in zip(axes[0], parts_list):
        n = len(parts)
        points = path_points(parts)
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, color="black", lw=2.0, solid_capstyle="round", zorder=3)
        ax.plot([0, n], [0, n], color="tab:blue", lw=1.0, ls="--", zorder=2)
        ax.plot([0, n - 1], [1, n], color="tab:orange", lw=1.0, ls=":", zorder=2)
        ax.set_xticks(range(n + 1))
        ax.set_yticks(range(n + 1))
        ax.grid(True, lw=0.3, color="0.85", zorder=1)
        ax.set_aspect("equal")
        ax.set_xlim(-0.3, n + 0.3)
        ax.set_ylim(-0.3, n + 0.3)
        title = str(BlochSequence(parts))
        if annotations:
            title = "\n".join(annotation_lines(parts))
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    save_kwargs = {}
    if fmt == "svg":
        save_kwargs["metadata"] = {"Date": None}  # drop the timestamp for reproducible bytes
    fig.savefig(out, format=fmt, **save_kwargs)
    plt.close(fig)
    return out
