"""Scenario documents, comparison reports and the unity-under-threat experiment.

A scenario document is UTF-8 JSON::

    {
      "id": "triad-schadenfreude",
      "description": "...",
      "params": {"beta": 2.0, "mu": 3.0, "lambda_": 1.0,
                 "alpha": 2.25, "rho": 0.9, "delta": 0.9},
      "sizes": [1.0, 1.0, 1.0],
      "edges": [{"from": 1, "to": 2, "sign": "-"},
                {"from": 2, "to": 1, "sign": "-", "weight": -0.1}],
      "tags": ["preference"]
    }

Agents are 0-based. An edge is one actor's stance toward one target; a
reciprocal relation is two edges. ``weight`` is optional and signed. An
actor's implicit edges share whatever its explicit edges leave of ``1 - rho``;
an actor with only explicit edges keeps the remainder for itself.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .core import ModelParams, PowerStructure, validate_structure
from .tactics import project_column, structure_from_signs, weight_pattern
from .valuation import princerank

SIGNS = {"+": 1, "-": -1}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.path = path


class ValidationError(ValueError):
    def __init__(self, problems: Sequence[str]):
        self.problems = tuple(problems)
        super().__init__("; ".join(self.problems))


class UnknownScenario(KeyError):
    pass


class AgentCountMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    from_: int
    to: int
    sign: str
    weight: float | None = None

    def to_json(self) -> dict:
        d = {"from": self.from_, "to": self.to, "sign": self.sign}
        if self.weight is not None:
            d["weight"] = self.weight
        return d


@dataclass(frozen=True)
class ScenarioDoc:
    id: str
    description: str
    params: ModelParams
    sizes: tuple[float, ...]
    edges: tuple[Edge, ...] = ()
    tags: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.sizes)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "params": asdict(self.params),
            "sizes": list(self.sizes),
            "edges": [e.to_json() for e in self.edges],
            "tags": list(self.tags),
        }

    def with_params(self, params: ModelParams) -> "ScenarioDoc":
        return ScenarioDoc(self.id, self.description, params, self.sizes, self.edges, self.tags)


def serialize_scenario(doc: ScenarioDoc) -> str:
    return json.dumps(doc.to_json(), indent=2, ensure_ascii=False) + "\n"


_DOC_KEYS = {"id", "description", "params", "sizes", "edges", "tags"}
_EDGE_KEYS = {"from", "to", "sign", "weight"}
_PARAM_KEYS = {f.name for f in fields(ModelParams)}


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", path=path)
    return float(value)


def _index(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer agent index, got {value!r}", path=path)
    return value


def _check_keys(obj, allowed: set, required: set, path: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path=path)
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"unknown field(s) {unknown}", path=path)
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(f"missing field(s) {missing}", path=path)


def doc_from_json(obj) -> ScenarioDoc:
    _check_keys(obj, _DOC_KEYS, _DOC_KEYS - {"edges", "tags", "description"}, "$")
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise ParseError("id must be a non-empty string", path="id")
    description = obj.get("description", "")
    if not isinstance(description, str):
        raise ParseError("description must be a string", path="description")
    _check_keys(obj["params"], _PARAM_KEYS, _PARAM_KEYS, "params")
    params = ModelParams(**{k: _number(v, f"params.{k}") for k, v in obj["params"].items()})
    if not isinstance(obj["sizes"], list) or not obj["sizes"]:
        raise ParseError("sizes must be a non-empty list", path="sizes")
    sizes = tuple(_number(v, f"sizes[{k}]") for k, v in enumerate(obj["sizes"]))
    raw_edges = obj.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("edges must be a list", path="edges")
    edges = []
    for k, e in enumerate(raw_edges):
        path = f"edges[{k}]"
        _check_keys(e, _EDGE_KEYS, {"from", "to", "sign"}, path)
        if e["sign"] not in SIGNS:
            raise ParseError(f"sign must be '+' or '-', got {e['sign']!r}", path=f"{path}.sign")
        weight = _number(e["weight"], f"{path}.weight") if "weight" in e else None
        edges.append(Edge(_index(e["from"], f"{path}.from"), _index(e["to"], f"{path}.to"), e["sign"], weight))
    tags = obj.get("tags", [])
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise ParseError("tags must be a list of strings", path="tags")
    return ScenarioDoc(obj["id"], description, params, sizes, tuple(edges), tuple(tags))


def materialize(doc: ScenarioDoc) -> PowerStructure:
    """Build and validate the power structure a document describes."""
    n = doc.n
    problems = []
    seen = set()
    by_actor: dict[int, list[tuple[int, Edge]]] = {j: [] for j in range(n)}
    for k, e in enumerate(doc.edges):
        path = f"edges[{k}]"
        if not (0 <= e.from_ < n and 0 <= e.to < n):
            problems.append(f"{path}: agent index out of range for {n} agents")
            continue
        if e.from_ == e.to:
            problems.append(f"{path}: self edges are implicit; remove it")
            continue
        if (e.from_, e.to) in seen:
            problems.append(f"{path}: duplicate edge {e.from_}->{e.to}")
            continue
        seen.add((e.from_, e.to))
        if e.weight is not None and (e.weight == 0 or np.sign(e.weight) != SIGNS[e.sign]):
            problems.append(f"{path}: weight {e.weight} inconsistent with sign {e.sign!r}")
            continue
        by_actor[e.from_].append((k, e))

    T = np.zeros((n, n))
    rho = doc.params.rho
    for j, items in by_actor.items():
        explicit = [(k, e) for k, e in items if e.weight is not None]
        implicit = [(k, e) for k, e in items if e.weight is None]
        used = sum(abs(e.weight) for _, e in explicit)
        for _, e in explicit:
            T[e.to, j] = e.weight
        if implicit:
            share = (1.0 - rho - used) / len(implicit)
            if share <= 0:
                problems.append(
                    f"agent {j}: explicit weights ({used:.12g}) leave no share of 1 - rho for its other edges"
                )
                continue
            for _, e in implicit:
                T[e.to, j] = SIGNS[e.sign] * share
            T[j, j] = rho
        elif explicit:
            T[j, j] = 1.0 - used
            if T[j, j] < -1e-12:
                problems.append(
                    f"agent {j}: explicit weights sum to {used:.12g}; absolute column sum with self-remainder must be 1"
                )
                continue
            T[j, j] = max(T[j, j], 0.0)
        else:
            T[j, j] = 1.0
    if problems:
        raise ValidationError(problems)

    ps = PowerStructure(np.asarray(doc.sizes), T)
    report = validate_structure(ps, doc.params)
    if not report.ok:
        raise ValidationError(report.violations)
    return ps


def parse_scenario(text: str) -> tuple[ScenarioDoc, PowerStructure]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    doc = doc_from_json(obj)
    return doc, materialize(doc)


def doc_from_structure(
    id: str,
    ps: PowerStructure,
    params: ModelParams,
    description: str = "",
    tags: Sequence[str] = (),
) -> ScenarioDoc:
    """Document reproducing ``ps``; columns that are not equal-split get
    explicit weights."""
    edges = []
    for j in range(ps.n):
        col = ps.tactics[:, j]
        implicit = np.array_equal(col, weight_pattern(project_column(col, j), params.rho))
        for i in range(ps.n):
            w = float(col[i])
            if i != j and w != 0:
                edges.append(Edge(j, i, "+" if w > 0 else "-", None if implicit else w))
    return ScenarioDoc(id, description, params, tuple(float(x) for x in ps.sizes), tuple(edges), tuple(tags))


@dataclass(frozen=True)
class CompareReport:
    ids: tuple[str, str]
    focal: int
    sizes: tuple[tuple[float, ...], tuple[float, ...]]
    values: tuple[tuple[float, ...], tuple[float, ...]]
    deltas: tuple[float, ...]
    verdict: str  # "first", "second" or "indifferent"

    @property
    def preferred(self) -> str | None:
        return {"first": self.ids[0], "second": self.ids[1]}.get(self.verdict)


def compare(
    a: ScenarioDoc,
    b: ScenarioDoc,
    focal: int,
    params: ModelParams | None = None,
) -> CompareReport:
    """PrinceRank of every agent in both scenarios; deltas are b minus a."""
    if a.n != b.n:
        raise AgentCountMismatch(f"{a.id} has {a.n} agents, {b.id} has {b.n}")
    if not 0 <= focal < a.n:
        raise IndexError(f"focal agent {focal} out of range for {a.n} agents")
    if params is not None:
        a, b = a.with_params(params), b.with_params(params)
    va = princerank(materialize(a), a.params)
    vb = princerank(materialize(b), b.params)
    deltas = tuple(float(y - x) for x, y in zip(va, vb))
    if vb[focal] > va[focal]:
        verdict = "second"
    elif va[focal] > vb[focal]:
        verdict = "first"
    else:
        verdict = "indifferent"
    return CompareReport(
        (a.id, b.id), focal, (a.sizes, b.sizes),
        (tuple(map(float, va)), tuple(map(float, vb))), deltas, verdict,
    )


def compare_csv(report: CompareReport) -> str:
    """One row per (scenario, agent); delta is relative to the first scenario."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "agent", "size", "princerank", "delta"])
    for k, sid in enumerate(report.ids):
        for i, (s, v) in enumerate(zip(report.sizes[k], report.values[k])):
            d = 0.0 if k == 0 else report.deltas[i]
            w.writerow([sid, i + 1, f"{s:.9g}", f"{v:.9g}", f"{d:.9g}"])
    return buf.getvalue()


def compare_table(report: CompareReport) -> str:
    a, b = report.ids
    lines = [f"{'agent':>5}  {a[:24]:>24}  {b[:24]:>24}  {'delta':>12}"]
    for i, (x, y, d) in enumerate(zip(report.values[0], report.values[1], report.deltas)):
        mark = " *" if i == report.focal else ""
        lines.append(f"{i + 1:>5}  {x:>24.9g}  {y:>24.9g}  {d:>12.6g}{mark}")
    who = report.focal + 1
    if report.verdict == "indifferent":
        lines.append(f"agent {who} is indifferent between {a} and {b}")
    else:
        lines.append(f"agent {who} prefers {report.preferred}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# unity under threat
# --------------------------------------------------------------------------

UNITY_AGENTS = 4
DEFENCE_WEIGHT = 0.05


def unity_structures(variant: str, dominant_size: float, rho: float = 0.9) -> list[PowerStructure]:
    """Structures (a)-(d): agents 1-3 unit size, agent 4 unit in (a)/(b) and
    ``dominant_size`` in (c)/(d); agents 1 and 2 cooperate in (b)/(d).

    In the aggression variant agent 4 attacks agents 1 and 2, who hit back
    with a fixed weight so that cooperating never thins their defence.
    """
    n = UNITY_AGENTS
    big = n - 1
    out = []
    for size in (1.0, dominant_size):
        for unite in (False, True):
            sizes = [1.0] * (n - 1) + [size]
            if variant == "presence":
                S = np.zeros((n, n), dtype=int)
                if unite:
                    S[0, 1] = S[1, 0] = 1
                out.append(structure_from_signs(sizes, S, rho))
            elif variant == "aggression":
                T = np.eye(n)
                T[:, big] = 0.0
                T[big, big] = rho
                T[0, big] = T[1, big] = -(1.0 - rho) / 2
                for a, b in ((0, 1), (1, 0)):
                    col = np.zeros(n)
                    col[big] = -DEFENCE_WEIGHT
                    if unite:
                        col[b] = DEFENCE_WEIGHT
                    col[a] = 1.0 - np.abs(col).sum()
                    T[:, a] = col
                out.append(PowerStructure(np.asarray(sizes), T))
            else:
                raise ValueError(f"unknown variant {variant!r}")
    return out


def unification_experiment(
    variant: str, dominant_size: float, params: ModelParams
) -> tuple[float, float]:
    """(U_b / U_a, U_d / U_c) for agent 1."""
    if not dominant_size >= 1:
        raise ValueError("dominant size must be at least the unit size")
    a, b, c, d = (princerank(ps, params)[0] for ps in unity_structures(variant, dominant_size, params.rho))
    return float(b / a), float(d / c)
