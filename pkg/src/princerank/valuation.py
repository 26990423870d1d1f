"""Instantaneous utility, PrinceRank, preference ordering and node colors."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .core import ModelParams, PowerStructure, structure_growth, weighted_matrix

DEFAULT_TOL = 1e-9
HORIZON_CAP = 10_000


class DivergentDiscount(ArithmeticError):
    """The discounted utility series is not certified to converge."""


class TruncationCapReached(RuntimeError):
    pass


class AlphaBoundaryWarning(UserWarning):
    pass


def _check_alpha(params: ModelParams) -> None:
    if params.alpha == 2:
        warnings.warn(
            "alpha == 2 sits on the boundary; the utility is defined for alpha > 2",
            AlphaBoundaryWarning,
            stacklevel=3,
        )


def utility(sizes, params: ModelParams) -> np.ndarray:
    """u_i = s_i**alpha / sum_j s_j**2, and all zeros for an empty world."""
    s = np.ascontiguousarray(sizes, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("sizes must be non-negative")
    _check_alpha(params)
    return _kernels.utility(s, params.alpha)


@dataclass(frozen=True)
class PrinceRankResult:
    values: np.ndarray
    horizon: int
    tail_bound: float
    growth: float


def _ratio(ps: PowerStructure, params: ModelParams) -> tuple[float, float]:
    if not 0 < params.delta < 1:
        raise DivergentDiscount(f"delta must lie in (0, 1), got {params.delta}")
    if params.discount_ratio >= 1:
        raise DivergentDiscount(
            f"delta * g**(alpha-2) = {params.discount_ratio:.6g} >= 1 for g = {params.growth:.6g}"
        )
    g = structure_growth(ps, params)
    ratio = params.delta * g ** (params.alpha - 2.0)
    if ratio >= 1:
        # only reachable with hand-weighted columns that keep less than rho
        raise DivergentDiscount(
            f"structure growth factor {g:.6g} gives discount ratio {ratio:.6g} >= 1"
        )
    return g, ratio


def princerank_details(
    ps: PowerStructure,
    params: ModelParams,
    tolerance: float = DEFAULT_TOL,
    horizon: int | None = None,
) -> PrinceRankResult:
    """Discounted utility along the constant-tactic trajectory.

    The sum starts at t=1 and stops at the first horizon H whose geometric
    tail bound

        (1 - delta) * S(H)**(alpha-2) * delta**H * r / (1 - r),
        r = delta * g**(alpha-2)

    drops below ``tolerance``. Here S(H) is total power at H and g bounds the
    per-step growth of total power, so S(t) <= g**(t-H) S(H) and each
    u_i(t) <= S(t)**(alpha-2). Passing ``horizon`` sums exactly that many
    terms instead and still reports the bound for the omitted tail.
    """
    _check_alpha(params)
    g, ratio = _ratio(ps, params)
    W = weighted_matrix(ps, params)
    s0 = np.ascontiguousarray(ps.sizes)
    fixed = 0 if horizon is None else int(horizon)
    if horizon is not None and fixed < 1:
        raise ValueError("horizon must be at least 1")
    vals, H, tail, status = _kernels.discounted(
        W, s0, params.alpha, params.delta, ratio, tolerance, HORIZON_CAP, fixed
    )
    if status == _kernels.CAP_REACHED:
        raise TruncationCapReached(
            f"tail bound {tail:.3g} still above {tolerance:.3g} after {HORIZON_CAP} steps"
        )
    vals = np.asarray(vals)
    vals.setflags(write=False)
    return PrinceRankResult(vals, int(H), float(tail), g)


def princerank(ps: PowerStructure, params: ModelParams, tolerance: float = DEFAULT_TOL) -> np.ndarray:
    """Per-agent PrinceRank with |returned - exact| <= tolerance."""
    return princerank_details(ps, params, tolerance).values


def focal_princerank_batch(
    structures: Sequence[PowerStructure],
    focal: int,
    params: ModelParams,
    tolerance: float = DEFAULT_TOL,
) -> np.ndarray:
    """Focal agent's PrinceRank for many same-size structures at once.

    Values agree with :func:`princerank` to within ``tolerance``; callers that
    need the exact solo value should recompute the winner.
    """
    if not structures:
        return np.empty(0)
    _check_alpha(params)
    s0 = np.ascontiguousarray(structures[0].sizes)
    Ws = np.stack([weighted_matrix(ps, params) for ps in structures])
    ratios = np.array([_ratio(ps, params)[1] for ps in structures])
    vals, status = _kernels.discounted_focal_batch(
        Ws, s0, focal, params.alpha, params.delta, ratios, tolerance, HORIZON_CAP
    )
    if status == _kernels.CAP_REACHED:
        raise TruncationCapReached(f"batch did not converge within {HORIZON_CAP} steps")
    return np.asarray(vals)


@dataclass(frozen=True)
class RankReport:
    structures: tuple[str, ...]
    focal_agent: int
    values: tuple[float, ...]
    order: tuple[int, ...]

    def ranked(self) -> list[tuple[str, float]]:
        return [(self.structures[k], self.values[k]) for k in self.order]


def rank_structures(
    candidates: Sequence[PowerStructure],
    focal: int,
    params: ModelParams,
    ids: Sequence[str] | None = None,
    tolerance: float = DEFAULT_TOL,
) -> RankReport:
    """Order candidates by the focal agent's PrinceRank, best first.

    Ties go to the lexicographically smaller identifier. Identifiers default
    to zero-padded candidate positions so that lexicographic and positional
    order agree.
    """
    if ids is None:
        width = len(str(max(len(candidates) - 1, 0)))
        ids = [str(k).zfill(width) for k in range(len(candidates))]
    if len(ids) != len(candidates):
        raise ValueError("one identifier per candidate required")
    values = []
    for ps in candidates:
        if not 0 <= focal < ps.n:
            raise IndexError(f"focal agent {focal} out of range for {ps.n} agents")
        values.append(float(princerank(ps, params, tolerance)[focal]))
    order = sorted(range(len(candidates)), key=lambda k: (-values[k], ids[k]))
    return RankReport(tuple(ids), focal, tuple(values), tuple(order))


BLUE = (0, 114, 178)
GREEN = (0, 158, 115)
YELLOW = (240, 228, 66)


def color_for(value: float, lo: float, hi: float) -> tuple[int, int, int]:
    """Blue-green-yellow ramp over [lo, hi]; green when the range is empty."""
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if hi == lo:
        return GREEN
    x = min(max((value - lo) / (hi - lo), 0.0), 1.0)
    if x <= 0.5:
        a, b, f = BLUE, GREEN, x / 0.5
    else:
        a, b, f = GREEN, YELLOW, (x - 0.5) / 0.5
    return tuple(int(round(ca + (cb - ca) * f)) for ca, cb in zip(a, b))


def hex_color(rgb: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)
