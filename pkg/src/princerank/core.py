"""State types and the law of motion.

Matrix orientation is fixed project-wide: column ``j`` is agent ``j``'s tactic
and entry ``(i, j)`` is what agent ``j`` allocates toward agent ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels

NORM_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """The six global model parameters; defaults are the standard set."""

    beta: float = 2.0      # constructive multiplier
    mu: float = 3.0        # destructive multiplier
    lambda_: float = 1.0   # decay multiplier
    alpha: float = 2.25    # utility exponent
    rho: float = 0.9       # self-allocation fraction (tempo)
    delta: float = 0.9     # discount rate

    @property
    def growth(self) -> float:
        """Largest per-step growth factor of total power for equal-split columns."""
        return self.lambda_ * self.rho + (1.0 - self.rho) * self.beta

    @property
    def discount_ratio(self) -> float:
        return self.delta * self.growth ** (self.alpha - 2.0)

    def violations(self) -> list[str]:
        out = []
        if not self.beta > 1:
            out.append(f"beta must exceed 1 (got {self.beta})")
        if not self.mu > self.beta:
            out.append(f"mu must exceed beta (got mu={self.mu}, beta={self.beta})")
        if not self.lambda_ <= 1:
            out.append(f"lambda must be at most 1 (got {self.lambda_})")
        if not self.alpha >= 2:
            out.append(f"alpha must be at least 2 (got {self.alpha})")
        if not 0 < self.rho <= 1:
            out.append(f"rho must lie in (0, 1] (got {self.rho})")
        if not 0 < self.delta < 1:
            out.append(f"delta must lie in (0, 1) (got {self.delta})")
        if not out and not self.discount_ratio < 1:
            out.append(
                f"convergence guard: delta * g**(alpha-2) = {self.discount_ratio:.6g} must be < 1"
            )
        return out

    def replace(self, **changes) -> "ModelParams":
        from dataclasses import replace

        return replace(self, **changes)


DEFAULT_PARAMS = ModelParams()


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PowerStructure:
    """Agent sizes ``s`` plus the signed tactic matrix ``T``."""

    sizes: np.ndarray
    tactics: np.ndarray

    def __post_init__(self):
        s = _frozen(self.sizes)
        T = _frozen(self.tactics)
        if s.ndim != 1 or T.shape != (s.size, s.size):
            raise ValueError(f"shape mismatch: sizes {s.shape}, tactics {T.shape}")
        object.__setattr__(self, "sizes", s)
        object.__setattr__(self, "tactics", T)

    @property
    def n(self) -> int:
        return self.sizes.size

    @classmethod
    def neutral(cls, sizes: Sequence[float]) -> "PowerStructure":
        n = len(sizes)
        return cls(np.asarray(sizes, dtype=float), np.eye(n))

    def with_column(self, j: int, column) -> "PowerStructure":
        T = self.tactics.copy()
        T[:, j] = column
        return PowerStructure(self.sizes, T)

    def with_sizes(self, sizes) -> "PowerStructure":
        return PowerStructure(np.asarray(sizes, dtype=float), self.tactics)

    def permuted(self, perm: Sequence[int]) -> "PowerStructure":
        """Relabel agents so that new agent ``k`` is old agent ``perm[k]``."""
        p = np.asarray(perm)
        return PowerStructure(self.sizes[p], self.tactics[np.ix_(p, p)])

    def __eq__(self, other):
        if not isinstance(other, PowerStructure):
            return NotImplemented
        return np.array_equal(self.sizes, other.sizes) and np.array_equal(self.tactics, other.tactics)

    __hash__ = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_structure(ps: PowerStructure, params: ModelParams) -> ValidationReport:
    """Check sizes, the per-column norm constraint, diagonals and parameters.

    Violations are returned as data; nothing is raised.
    """
    out: list[str] = [f"params: {v}" for v in params.violations()]
    s, T = ps.sizes, ps.tactics
    for i, v in enumerate(s):
        if not np.isfinite(v):
            out.append(f"non-finite size agent {i}")
        elif v < 0:
            out.append(f"negative size agent {i}")
    for j in range(ps.n):
        col = T[:, j]
        if not np.all(np.isfinite(col)):
            out.append(f"non-finite tactic agent {j}")
            continue
        norm = np.abs(col).sum()
        dead_and_empty = s[j] == 0 and norm == 0
        if abs(norm - 1.0) > NORM_TOL and not dead_and_empty:
            out.append(f"column-norm agent {j}: absolute sum {norm:.12g} != 1")
        if T[j, j] < 0:
            out.append(f"negative self-allocation agent {j}")
    return ValidationReport(tuple(out))


class InvalidStructure(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(report.violations))


def require_valid(ps: PowerStructure, params: ModelParams) -> None:
    report = validate_structure(ps, params)
    if not report.ok:
        raise InvalidStructure(report)


def weighted_matrix(ps: PowerStructure, params: ModelParams) -> np.ndarray:
    """Hadamard product of the tactic matrix and its multiplier matrix."""
    return _kernels.weighted_matrix(
        np.ascontiguousarray(ps.tactics), params.beta, params.mu, params.lambda_
    )


def structure_growth(ps: PowerStructure, params: ModelParams) -> float:
    """Upper bound on total-power growth per step for this tactic matrix.

    Counts only the positive parts of each column's weighted entries, so it
    also bounds steps where clamping occurs. Equals ``params.growth`` for
    equal-split columns with at least one constructive target.
    """
    W = weighted_matrix(ps, params)
    return float(np.clip(W, 0.0, None).sum(axis=0).max(initial=0.0))


def step(ps: PowerStructure, params: ModelParams) -> np.ndarray:
    """One application of the law of motion; negative results clamp to 0."""
    W = weighted_matrix(ps, params)
    return _kernels.step(W, np.ascontiguousarray(ps.sizes))


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray  # (horizon + 1, n)
    params: ModelParams = field(default_factory=ModelParams)

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1


def simulate(ps: PowerStructure, params: ModelParams, horizon: int) -> Trajectory:
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    W = weighted_matrix(ps, params)
    states = np.empty((horizon + 1, ps.n))
    s = np.ascontiguousarray(ps.sizes).copy()
    states[0] = s
    for t in range(1, horizon + 1):
        s = _kernels.step(W, s)
        states[t] = s
    states.setflags(write=False)
    return Trajectory(states, params)
