"""Command-line entry point.

Agents are numbered from 1 on the command line and in printed reports;
scenario files and the library use 0-based indices.

Exit status: 0 on success, 1 when a structure or parameter set fails
validation, 2 on usage errors (bad flags, unknown scenarios).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .core import InvalidStructure, ModelParams, require_valid, simulate
from .corpus import corpus_get, corpus_ids
from .render import RenderOptions, to_dot, trajectory_csv
from .scenarios import (
    AgentCountMismatch,
    ParseError,
    ScenarioDoc,
    UnknownScenario,
    ValidationError,
    compare,
    compare_csv,
    compare_table,
    doc_from_json,
    materialize,
)
from .tactics import (
    TENSION_MODES,
    SizeLimit,
    canonical_triad_relations,
    enumerate_triads,
    latent_tension,
    structural_ideal,
    triad_id,
)
from .valuation import DivergentDiscount, TruncationCapReached, rank_structures


class UsageError(Exception):
    pass


_PARAM_FLAGS = (
    ("beta", "beta", "constructive multiplier"),
    ("mu", "mu", "destructive multiplier"),
    ("lambda", "lambda_", "decay multiplier"),
    ("alpha", "alpha", "utility exponent"),
    ("rho", "rho", "self-allocation fraction"),
    ("delta", "delta", "discount rate"),
)


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model parameters (default: scenario's own, else the standard set)")
    for flag, dest, text in _PARAM_FLAGS:
        g.add_argument(f"--{flag}", dest=dest, type=float, default=None, help=text)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches (default 0)")


def _overrides(args) -> dict:
    return {dest: getattr(args, dest) for _, dest, _ in _PARAM_FLAGS if getattr(args, dest) is not None}


def _params(args, base: ModelParams | None = None) -> ModelParams:
    params = replace(base or ModelParams(), **_overrides(args))
    bad = params.violations()
    if bad:
        raise ValidationError([f"params: {v}" for v in bad])
    return params


def load_scenario(ref: str) -> ScenarioDoc:
    """``corpus:<id>``, a path to a JSON file, or a bare corpus id."""
    if ref.startswith("corpus:"):
        return corpus_get(ref[len("corpus:"):])
    path = Path(ref)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, line=e.lineno, path=ref) from None
        return doc_from_json(obj)
    try:
        return corpus_get(ref)
    except UnknownScenario:
        raise UnknownScenario(f"{ref!r} is neither a file nor a corpus id") from None


def _agent(value: int, n: int) -> int:
    if not 1 <= value <= n:
        raise UsageError(f"--agent {value} out of range 1..{n}")
    return value - 1


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_simulate(args) -> int:
    doc = load_scenario(args.scenario)
    params = _params(args, doc.params)
    ps = materialize(doc.with_params(params))
    require_valid(ps, params)
    if args.steps < 0:
        raise UsageError("--steps must be non-negative")
    tr = simulate(ps, params, args.steps)
    if args.out_dot_dir:
        out = Path(args.out_dot_dir)
        out.mkdir(parents=True, exist_ok=True)
        width = len(str(args.steps))
        for t, s in enumerate(tr.states):
            (out / f"step_{t:0{width}d}.dot").write_text(to_dot(ps.with_sizes(s), params), encoding="utf-8")
    if args.out_csv or not args.out_dot_dir:
        _write(args.out_csv or "-", trajectory_csv(tr))
    return 0


def cmd_rank(args) -> int:
    docs = [load_scenario(r) for r in args.scenarios]
    structures, params = [], None
    for d in docs:
        p = _params(args, d.params)
        if params is not None and p != params:
            raise UsageError("scenarios use different parameters; pass explicit overrides")
        params = p
        structures.append(materialize(d.with_params(p)))
    if len({ps.n for ps in structures}) > 1:
        raise AgentCountMismatch("all ranked scenarios need the same number of agents")
    focal = _agent(args.agent, structures[0].n)
    report = rank_structures(structures, focal, params, ids=[d.id for d in docs])
    print(f"# ranked by agent {args.agent}'s PrinceRank")
    for k, (sid, v) in enumerate(report.ranked(), 1):
        print(f"{k:>3}  {v:.9f}  {sid}")
    return 0


def cmd_triads(args) -> int:
    params = _params(args)
    rels = canonical_triad_relations()
    ids = [triad_id(r) for r in rels]
    report = rank_structures(enumerate_triads(params.rho), 0, params, ids=ids)
    names = {}
    for cid in corpus_ids():
        if cid.startswith("triad-"):
            names[materialize(corpus_get(cid)).tactics.tobytes()] = cid
    structures = enumerate_triads(params.rho)
    print("# 18 triads ranked by agent 1's PrinceRank; relations are 1-2, 1-3, 2-3")
    for k, idx in enumerate(report.order, 1):
        name = names.get(structures[idx].tactics.tobytes(), "")
        print(f"{k:>3}  {report.values[idx]:.9f}  {ids[idx]}  {name}".rstrip())
    return 0


def cmd_ideal(args) -> int:
    params = _params(args)
    if args.agents < 1:
        raise UsageError("--agents must be at least 1")
    focal = _agent(args.agent, args.agents)
    out = structural_ideal(args.agents, focal, params, method=args.method, restarts=args.restarts, seed=args.seed)
    seed = "" if out.seed is None else f", seed {out.seed}"
    print(f"# structural ideal for agent {args.agent} of {args.agents} ({out.method}{seed})")
    print(f"# PrinceRank {out.value:.9f}; {out.evaluated} tactic matrices evaluated")
    print("# column j is agent j's tactic")
    for row in out.best:
        print("  " + "  ".join(f"{v:+.6f}" for v in row))
    return 0


def cmd_tension(args) -> int:
    doc = load_scenario(args.scenario)
    params = _params(args, doc.params)
    ps = materialize(doc.with_params(params))
    rows = latent_tension(ps, params, mode=args.mode)
    print(f"# {doc.id}: hostile moves that raise the aggressor's PrinceRank ({args.mode})")
    if not rows:
        print("# none")
    for i, j, gain in rows:
        print(f"{i + 1:>3} -> {j + 1:<3}  {gain:+.9f}")
    return 0


def cmd_compare(args) -> int:
    a, b = load_scenario(args.first), load_scenario(args.second)
    overrides = _overrides(args)
    params = _params(args, a.params) if overrides else None
    if params is None:
        for d in (a, b):
            bad = d.params.violations()
            if bad:
                raise ValidationError([f"{d.id} params: {v}" for v in bad])
    focal = _agent(args.agent, a.n)
    report = compare(a, b, focal, params)
    sys.stdout.write(compare_table(report))
    if args.csv:
        _write(args.csv, compare_csv(report))
    return 0


def cmd_render(args) -> int:
    doc = load_scenario(args.scenario)
    params = _params(args, doc.params)
    ps = materialize(doc.with_params(params))
    opts = RenderOptions(not args.no_color, args.size_scale, not args.no_labels)
    _write(args.dot, to_dot(ps, params, opts))
    return 0


def cmd_corpus(args) -> int:
    for cid in corpus_ids():
        doc = corpus_get(cid)
        print(f"{cid:<36} {doc.n:>2}  {doc.description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="princerank", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the law of motion with constant tactics")
    p.add_argument("scenario")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--out-csv", metavar="PATH", help="trajectory CSV ('-' for stdout, the default)")
    p.add_argument("--out-dot-dir", metavar="DIR", help="write one DOT file per step")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rank", help="order scenarios by one agent's PrinceRank")
    p.add_argument("scenarios", nargs="+")
    p.add_argument("--agent", type=int, default=1)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("triads", help="the 18 distinct triads ranked for agent 1")
    p.set_defaults(func=cmd_triads)

    p = sub.add_parser("ideal", help="search for an agent's structural ideal")
    p.add_argument("--agents", type=int, default=3)
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--method", choices=("auto", "exhaustive", "hill-climb"), default="auto")
    p.add_argument("--restarts", type=int, default=32)
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("tension", help="scan for profitable hostile moves")
    p.add_argument("scenario")
    p.add_argument("--mode", choices=TENSION_MODES, default="unilateral")
    p.set_defaults(func=cmd_tension)

    p = sub.add_parser("compare", help="compare two scenarios from one agent's viewpoint")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", help="also write the per-agent CSV ('-' for stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="emit a DOT graph of a scenario")
    p.add_argument("scenario")
    p.add_argument("--dot", metavar="PATH", default="-")
    p.add_argument("--size-scale", type=float, default=1.0)
    p.add_argument("--no-color", action="store_true")
    p.add_argument("--no-labels", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("corpus", help="list builtin scenarios")
    p.set_defaults(func=cmd_corpus)

    for name, sp in sub.choices.items():
        if name != "corpus":
            _add_common(sp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, UnknownScenario, SizeLimit, IndexError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"princerank: error: {msg}", file=sys.stderr)
        return 2
    except (ValidationError, InvalidStructure, ParseError, AgentCountMismatch,
            DivergentDiscount, TruncationCapReached, ValueError) as e:
        print(f"princerank: invalid: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"princerank: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
