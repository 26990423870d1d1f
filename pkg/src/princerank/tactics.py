"""Discrete tactics and the searches built on them.

A discrete stance is one of ``NEUTRAL`` (0), ``POSITIVE`` (+1) or
``NEGATIVE`` (-1). Enumeration order per slot is neutral < positive <
negative, with the lowest-numbered counterpart as the most significant slot.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import ModelParams, PowerStructure
from .valuation import DEFAULT_TOL, focal_princerank_batch, princerank

NEUTRAL, POSITIVE, NEGATIVE = 0, 1, -1
SLOT_ORDER = (NEUTRAL, POSITIVE, NEGATIVE)
SIGN_CHARS = {NEUTRAL: "0", POSITIVE: "+", NEGATIVE: "-"}
CHAR_SIGNS = {v: k for k, v in SIGN_CHARS.items()}

DEFAULT_CAP = 3**15
_CHUNK = 1 << 14


class SizeLimit(ValueError):
    """An exhaustive enumeration would exceed the configured cap."""


class NoRelation(ValueError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get("PRINCERANK_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class DiscretePattern:
    owner: int
    signs: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.owner < len(self.signs):
            raise ValueError("owner out of range")
        if self.signs[self.owner] != NEUTRAL:
            raise ValueError("self-entry of a discrete pattern must be neutral")
        if any(x not in SLOT_ORDER for x in self.signs):
            raise ValueError(f"signs must be in {SLOT_ORDER}")

    @property
    def n(self) -> int:
        return len(self.signs)

    def with_sign(self, target: int, sign: int) -> "DiscretePattern":
        signs = list(self.signs)
        signs[target] = sign
        return DiscretePattern(self.owner, tuple(signs))

    def __str__(self) -> str:
        return "".join("." if k == self.owner else SIGN_CHARS[x] for k, x in enumerate(self.signs))


def enumerate_patterns(n: int, owner: int = 0, cap: int | None = None) -> list[DiscretePattern]:
    """All 3**(n-1) discrete patterns for ``owner`` in enumeration order."""
    if n < 1:
        raise ValueError("need at least one agent")
    cap = enumeration_cap() if cap is None else cap
    if 3 ** (n - 1) > cap:
        raise SizeLimit(f"3**{n - 1} patterns exceed cap {cap}")
    out = []
    for combo in itertools.product(SLOT_ORDER, repeat=n - 1):
        signs = list(combo)
        signs.insert(owner, NEUTRAL)
        out.append(DiscretePattern(owner, tuple(signs)))
    return out


def weight_pattern(p: DiscretePattern, rho: float) -> np.ndarray:
    """Self keeps ``rho``; the rest splits equally over the active slots."""
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    signs = np.asarray(p.signs, dtype=float)
    active = np.count_nonzero(signs)
    col = np.zeros(p.n)
    if active == 0:
        col[p.owner] = 1.0
        return col
    col = signs * ((1.0 - rho) / active)
    col[p.owner] = rho
    return col


def project_column(column, owner: int) -> DiscretePattern:
    """Discrete stance behind a weighted column (self-entry ignored)."""
    signs = [int(np.sign(x)) for x in column]
    signs[owner] = NEUTRAL
    return DiscretePattern(owner, tuple(signs))


def structure_from_signs(sizes, signs, rho: float) -> PowerStructure:
    """Equal-split structure from a sign matrix; ``signs[i][j]`` is j toward i."""
    S = np.asarray(signs, dtype=int)
    n = S.shape[0]
    T = np.empty((n, n))
    for j in range(n):
        col = S[:, j].copy()
        col[j] = NEUTRAL
        T[:, j] = weight_pattern(DiscretePattern(j, tuple(int(x) for x in col)), rho)
    return PowerStructure(np.asarray(sizes, dtype=float), T)


def restance(ps: PowerStructure, actor: int, target: int, sign: int, rho: float) -> PowerStructure:
    """Unilateral change of ``actor``'s stance toward ``target``; the actor's
    column is re-weighted by the equal-split rule."""
    p = project_column(ps.tactics[:, actor], actor).with_sign(target, sign)
    return ps.with_column(actor, weight_pattern(p, rho))


@dataclass(frozen=True)
class SearchOutcome:
    best: object  # DiscretePattern for best_response, tactic matrix for structural_ideal
    value: float
    evaluated: int
    method: str
    seed: int | None = None
    structure: PowerStructure | None = field(default=None, compare=False)


def _argmax_first(values: np.ndarray) -> int:
    # np.argmax already returns the first maximum
    return int(np.argmax(values))


def best_response(
    ps: PowerStructure,
    focal: int,
    params: ModelParams,
    tolerance: float = DEFAULT_TOL,
    cap: int | None = None,
) -> SearchOutcome:
    """Exhaustive search over the focal agent's discrete patterns, all other
    columns held fixed."""
    if not 0 <= focal < ps.n:
        raise IndexError(f"focal agent {focal} out of range")
    patterns = enumerate_patterns(ps.n, focal, cap)
    candidates = [ps.with_column(focal, weight_pattern(p, params.rho)) for p in patterns]
    values = focal_princerank_batch(candidates, focal, params, tolerance)
    k = _argmax_first(values)
    value = float(princerank(candidates[k], params, tolerance)[focal])
    return SearchOutcome(patterns[k], value, len(patterns), "exhaustive", structure=candidates[k])


def _column_table(n: int, rho: float) -> np.ndarray:
    """cols[j, k] is agent j's k-th weighted pattern column."""
    m = 3 ** (n - 1)
    cols = np.empty((n, m, n))
    for j in range(n):
        for k, p in enumerate(enumerate_patterns(n, j, cap=m)):
            cols[j, k] = weight_pattern(p, rho)
    return cols


def _matrices(cols: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Tactic matrices for per-agent pattern codes of shape (k, n)."""
    n = cols.shape[0]
    k = codes.shape[0]
    T = np.empty((k, n, n))
    for j in range(n):
        T[:, :, j] = cols[j, codes[:, j]]
    return T


def _evaluate_codes(cols, codes, focal, params, tolerance) -> np.ndarray:
    n = cols.shape[0]
    sizes = np.ones(n)
    out = np.empty(codes.shape[0])
    for start in range(0, codes.shape[0], _CHUNK):
        chunk = codes[start:start + _CHUNK]
        Ts = _matrices(cols, chunk)
        structs = [PowerStructure(sizes, T) for T in Ts]
        out[start:start + len(structs)] = focal_princerank_batch(structs, focal, params, tolerance)
    return out


def _slots_to_codes(slots: np.ndarray, n: int) -> np.ndarray:
    """Digit slots (k, n, n-1) in {0,1,2} to pattern codes (k, n)."""
    weights = 3 ** np.arange(n - 2, -1, -1)
    return (slots * weights).sum(axis=-1)


def structural_ideal(
    n: int,
    focal: int,
    params: ModelParams,
    method: str = "auto",
    restarts: int = 32,
    seed: int = 0,
    tolerance: float = DEFAULT_TOL,
    cap: int | None = None,
) -> SearchOutcome:
    """Best whole tactic matrix for ``focal`` among unit-size agents.

    ``method`` is ``"exhaustive"``, ``"hill-climb"`` or ``"auto"`` (exhaustive
    whenever 3**(n(n-1)) fits under the cap).
    """
    if n < 1 or not 0 <= focal < n:
        raise IndexError(f"focal agent {focal} out of range for {n} agents")
    cap = enumeration_cap() if cap is None else cap
    total = 3 ** (n * (n - 1))
    if method == "auto":
        method = "exhaustive" if total <= cap else "hill-climb"
    cols = _column_table(n, params.rho)
    per_agent = 3 ** (n - 1)

    if method == "exhaustive":
        if total > cap:
            raise SizeLimit(f"3**{n * (n - 1)} matrices exceed cap {cap}")
        idx = np.arange(total, dtype=np.int64)
        codes = np.empty((total, n), dtype=np.int64)
        for j in range(n - 1, -1, -1):
            idx, codes[:, j] = np.divmod(idx, per_agent)
        values = _evaluate_codes(cols, codes, focal, params, tolerance)
        best_codes = codes[_argmax_first(values)]
        evaluated = total
        used_seed = None
    elif method == "hill-climb":
        best_codes, evaluated = _hill_climb(cols, n, focal, params, restarts, seed, tolerance)
        used_seed = seed
    else:
        raise ValueError(f"unknown method {method!r}")

    T = _matrices(cols, best_codes[None, :])[0]
    ps = PowerStructure(np.ones(n), T)
    value = float(princerank(ps, params, tolerance)[focal])
    return SearchOutcome(ps.tactics, value, int(evaluated), method, used_seed, structure=ps)


def _hill_climb(cols, n, focal, params, restarts, seed, tolerance):
    rng = np.random.default_rng(seed)
    memo: dict[tuple[int, ...], float] = {}

    def evaluate(code_rows: np.ndarray) -> np.ndarray:
        keys = [tuple(int(c) for c in row) for row in code_rows]
        todo = [k for k in dict.fromkeys(keys) if k not in memo]
        if todo:
            vals = _evaluate_codes(cols, np.array(todo, dtype=np.int64), focal, params, tolerance)
            memo.update(zip(todo, vals))
        return np.array([memo[k] for k in keys])

    best_codes, best_val = None, -np.inf
    for _ in range(max(1, restarts)):
        slots = rng.integers(0, 3, size=(n, n - 1))
        codes = _slots_to_codes(slots, n)
        val = evaluate(codes[None, :])[0]
        while True:
            neighbours = []
            for j in range(n):
                for k in range(n - 1):
                    for alt in range(3):
                        if alt == slots[j, k]:
                            continue
                        cand = slots.copy()
                        cand[j, k] = alt
                        neighbours.append(cand)
            nslots = np.array(neighbours)
            ncodes = _slots_to_codes(nslots, n)
            nvals = evaluate(ncodes)
            k = _argmax_first(nvals)
            if nvals[k] > val:
                slots, codes, val = nslots[k], ncodes[k], nvals[k]
            else:
                break
        if val > best_val:
            best_codes, best_val = codes, val
    return np.asarray(best_codes), len(memo)


def canonical_triad_relations() -> list[tuple[int, int, int]]:
    """The 18 relation triples (e12, e13, e23) unique up to swapping agents 2 and 3.

    Each orbit is represented by its smaller member in enumeration order.
    """
    rank = {s: k for k, s in enumerate(SLOT_ORDER)}
    out = []
    for e12, e13, e23 in itertools.product(SLOT_ORDER, repeat=3):
        key = (rank[e12], rank[e13], rank[e23])
        swapped = (rank[e13], rank[e12], rank[e23])
        if key <= swapped:
            out.append((e12, e13, e23))
    return out


def triad_structure(relations: Sequence[int], rho: float, sizes=(1.0, 1.0, 1.0)) -> PowerStructure:
    e12, e13, e23 = relations
    S = [[0, e12, e13], [e12, 0, e23], [e13, e23, 0]]
    return structure_from_signs(sizes, S, rho)


def triad_id(relations: Sequence[int]) -> str:
    return "triad:" + "".join(SIGN_CHARS[x] for x in relations)


def enumerate_triads(rho: float = 0.9) -> list[PowerStructure]:
    return [triad_structure(r, rho) for r in canonical_triad_relations()]


TENSION_MODES = ("unilateral", "fight")


def latent_tension(
    ps: PowerStructure,
    params: ModelParams,
    tolerance: float = DEFAULT_TOL,
    mode: str = "unilateral",
) -> list[tuple[int, int, float]]:
    """Pairs (aggressor, target, gain) where turning hostile raises the
    aggressor's PrinceRank, largest gain first.

    In ``"unilateral"`` mode only the aggressor's stance changes. In
    ``"fight"`` mode both stances in the pair turn destructive, which is what
    instigating a fight amounts to. Pairs already in that state are skipped.
    """
    if mode not in TENSION_MODES:
        raise ValueError(f"mode must be one of {TENSION_MODES}, got {mode!r}")
    base = princerank(ps, params, tolerance)
    out = []
    for i in range(ps.n):
        if ps.sizes[i] <= 0:
            continue
        for j in range(ps.n):
            if j == i or ps.sizes[j] <= 0:
                continue
            if mode == "fight":
                if ps.tactics[j, i] < 0 and ps.tactics[i, j] < 0:
                    continue
                alt = restance(restance(ps, i, j, NEGATIVE, params.rho), j, i, NEGATIVE, params.rho)
            else:
                if ps.tactics[j, i] < 0:
                    continue
                alt = restance(ps, i, j, NEGATIVE, params.rho)
            gain = float(princerank(alt, params, tolerance)[i] - base[i])
            if gain > 0:
                out.append((i, j, gain))
    out.sort(key=lambda r: (-r[2], r[0], r[1]))
    return out


KEEP = "prefers-to-keep"
DROP = "prefers-to-drop"


def edge_sustainable(
    ps: PowerStructure,
    i: int,
    j: int,
    params: ModelParams,
    tolerance: float = DEFAULT_TOL,
    mode: str = "unilateral",
) -> dict[int, str]:
    """Per-endpoint verdict on the i-j relation.

    ``"unilateral"``: each endpoint compares its PrinceRank as-is against the
    structure where only its own stance toward the other is neutral; an
    endpoint with no stance of its own keeps. ``"reciprocal"``: both compare
    against the structure where the relation is gone in both directions.
    Exact ties keep.
    """
    if mode not in ("unilateral", "reciprocal"):
        raise ValueError(f"mode must be 'unilateral' or 'reciprocal', got {mode!r}")
    if i == j:
        raise ValueError("an edge needs two distinct agents")
    if ps.tactics[j, i] == 0 and ps.tactics[i, j] == 0:
        raise NoRelation(f"agents {i} and {j} are neutral toward each other")
    base = princerank(ps, params, tolerance)
    if mode == "reciprocal":
        cut = ps
        for a, b in ((i, j), (j, i)):
            if cut.tactics[b, a] != 0:
                cut = restance(cut, a, b, NEUTRAL, params.rho)
        alt = princerank(cut, params, tolerance)
        return {a: DROP if alt[a] > base[a] else KEEP for a in (i, j)}
    out = {}
    for a, b in ((i, j), (j, i)):
        if ps.tactics[b, a] == 0:
            out[a] = KEEP
            continue
        dropped = restance(ps, a, b, NEUTRAL, params.rho)
        alt = princerank(dropped, params, tolerance)[a]
        out[a] = DROP if alt > base[a] else KEEP
    return out
