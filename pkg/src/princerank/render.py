"""DOT graph descriptions and trajectory tables.

Drawing conventions: node area is proportional to power, constructive
stances are solid, destructive ones dashed. A pair with the same sign in both
directions becomes one undirected edge; anything else is drawn as directed
edges. Self-allocation is not drawn.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelParams, PowerStructure, Trajectory, require_valid
from .valuation import color_for, hex_color, princerank

MIN_WIDTH = 0.05  # inches, keeps dead agents visible as dots


@dataclass(frozen=True)
class RenderOptions:
    color_by_princerank: bool = True
    size_scale: float = 1.0  # square inches of node area per unit of power
    show_labels: bool = True

    def __post_init__(self):
        if not self.size_scale > 0:
            raise ValueError(f"size_scale must be positive, got {self.size_scale}")


def node_width(size: float, scale: float) -> float:
    """Diameter of a circle whose area is ``size * scale``."""
    return max(2.0 * math.sqrt(size * scale / math.pi), MIN_WIDTH)


def _edges(T: np.ndarray) -> list[tuple[int, int, str, bool]]:
    """(from, to, style, directed) in (from, to) order."""
    n = T.shape[0]
    sign = np.sign(T)
    out = []
    for a in range(n):
        for b in range(n):
            s = sign[b, a]  # a's stance toward b
            if a == b or s == 0:
                continue
            mutual = sign[a, b] == s
            if mutual and b < a:
                continue  # already emitted as the undirected (b, a) edge
            out.append((a, b, "solid" if s > 0 else "dashed", not mutual))
    return out


def to_dot(ps: PowerStructure, params: ModelParams, opts: RenderOptions = RenderOptions()) -> str:
    require_valid(ps, params)
    fills = [None] * ps.n
    if opts.color_by_princerank:
        pr = princerank(ps, params)
        lo, hi = float(pr.min()), float(pr.max())
        fills = [hex_color(color_for(float(v), lo, hi)) for v in pr]
    lines = [
        "digraph power {",
        "  graph [layout=neato, overlap=false];",
        '  node [shape=circle, fixedsize=true, style=filled, fillcolor="#ffffff"];',
    ]
    for i in range(ps.n):
        attrs = [f"width={node_width(float(ps.sizes[i]), opts.size_scale):.6f}"]
        attrs.append(f'label="{i + 1}"' if opts.show_labels else 'label=""')
        if fills[i] is not None:
            attrs.append(f'fillcolor="{fills[i]}"')
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for a, b, style, directed in _edges(ps.tactics):
        attrs = [f"style={style}"]
        if not directed:
            attrs.append("dir=none")
        lines.append(f"  n{a} -> n{b} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def trajectory_csv(tr: Trajectory) -> str:
    n = tr.states.shape[1]
    rows = ["t," + ",".join(f"agent_{i}" for i in range(n))]
    for t, s in enumerate(tr.states):
        rows.append(f"{t}," + ",".join(f"{v:.9g}" for v in s))
    return "\n".join(rows) + "\n"
