"""Builtin scenario corpus.

Sizes are illustrative reconstructions chosen to exhibit each configuration.
Relations are written with 1-based agent numbers, matching the CLI and
printed reports:

    "1~2+"        agents 1 and 2 cooperate (two edges)
    "1~2-"        agents 1 and 2 fight each other
    "3>2-"        agent 3 attacks agent 2 (one edge)
    "1>4+0.025"   agent 1 gives agent 4 an explicit 0.025 of its power

Sequences are stored as chains sharing an id prefix ("conquest/t1", ...).
"""
from __future__ import annotations

import re
from functools import lru_cache

from .core import DEFAULT_PARAMS, ModelParams
from .scenarios import Edge, ScenarioDoc, UnknownScenario, doc_from_structure, unity_structures

_REL = re.compile(r"^(\d+)([~>])(\d+)([+-])(\d*\.?\d+)?$")


def _edges(relations: str) -> tuple[Edge, ...]:
    out = []
    for token in relations.split():
        m = _REL.match(token)
        if not m:
            raise ValueError(f"bad relation {token!r}")
        a, kind, b, sign, w = m.groups()
        a, b = int(a) - 1, int(b) - 1
        weight = None if w is None else (float(w) if sign == "+" else -float(w))
        out.append(Edge(a, b, sign, weight))
        if kind == "~":
            out.append(Edge(b, a, sign, weight))
    return tuple(out)


def _doc(id, description, sizes, relations="", tags=(), params: ModelParams = DEFAULT_PARAMS) -> ScenarioDoc:
    return ScenarioDoc(id, description, params, tuple(float(s) for s in sizes), _edges(relations), tuple(tags))


def _triads():
    yield _doc("triad-neutral", "Three equal agents with no relations.", [1, 1, 1], "", ["preference"])
    yield _doc(
        "triad-schadenfreude",
        "Agents 2 and 3 fight each other while agent 1 stays neutral.",
        [1, 1, 1], "2~3-", ["preference", "most-preferred"],
    )
    yield _doc(
        "triad-hub-inward",
        "Hub and spoke: agents 2 and 3 both cooperate with agent 1.",
        [1, 1, 1], "1~2+ 1~3+", ["preference", "most-preferred"],
    )
    yield _doc("triad-mutual-ally", "Agent 1 has one ally, agent 2.", [1, 1, 1], "1~2+", ["preference", "most-preferred"])
    yield _doc(
        "triad-composite",
        "Agent 1's two allies fight each other.",
        [1, 1, 1], "1~2+ 1~3+ 2~3-", ["preference", "most-preferred"],
    )
    yield _doc("triad-attacked-by-one", "Agent 1 fights agent 2.", [1, 1, 1], "1~2-", ["preference", "least-preferred"])
    yield _doc(
        "triad-attacked-by-both", "Agent 1 fights both others.", [1, 1, 1], "1~2- 1~3-", ["preference", "least-preferred"],
    )
    yield _doc(
        "triad-attacked-by-alliance",
        "Agents 2 and 3 are allied and both fight agent 1.",
        [1, 1, 1], "1~2- 1~3- 2~3+", ["preference", "least-preferred"],
    )


def _hierarchy():
    yield _doc(
        "hub-ideal",
        "Five equal agents; every spoke cooperates with agent 1.",
        [1] * 5, "1~2+ 1~3+ 1~4+ 1~5+", ["preference", "hub"],
    )
    yield _doc(
        "hub-ideal-unreciprocated",
        "Five equal agents; every spoke feeds agent 1, which gives nothing back.",
        [1] * 5, "2>1+ 3>1+ 4>1+ 5>1+", ["preference", "hub"],
    )
    # tributary defense: agent 2 pays tribute to agent 1 and is attacked by 3
    for tag, sizes in (("far", [4, 1, 1]), ("close", [1.2, 1, 1])):
        yield _doc(
            f"tributary-defense/{tag}-nothing",
            "Agent 3 attacks agent 1's tributary; agent 1 does nothing.",
            sizes, "1~2+ 3>2-", ["unipolar", "tributary-defense"],
        )
        yield _doc(
            f"tributary-defense/{tag}-defend",
            "Agent 3 attacks agent 1's tributary; agent 1 attacks agent 3.",
            sizes, "1~2+ 3>2- 1>3-", ["unipolar", "tributary-defense"],
        )
    yield _doc(
        "tributary-coercion/t1",
        "Agents 1 and 2 are aligned; 1 fights 3 while 2 stays allied with 3.",
        [3, 1, 1], "1~2+ 1~3- 2~3+", ["unipolar", "tributary-coercion"],
    )
    yield _doc(
        "tributary-coercion/t2a",
        "Agent 1 withdraws support from agent 2, which keeps its alliance with 3.",
        [3, 1, 1], "2>1+ 1~3- 2~3+", ["unipolar", "tributary-coercion"],
    )
    yield _doc(
        "tributary-coercion/t2b",
        "Agent 2 harmonizes with agent 1 and turns on agent 3.",
        [3, 1, 1], "1~2+ 1~3- 2~3-", ["unipolar", "tributary-coercion"],
    )
    yield _doc(
        "tributary-exclusive/sole",
        "Agent 2 pays tribute to agent 1 only.",
        [3, 1, 3], "1~2+", ["unipolar", "tributary-exclusive"],
    )
    yield _doc(
        "tributary-exclusive/shared",
        "Agent 2 pays tribute to agents 1 and 3.",
        [3, 1, 3], "1~2+ 3~2+", ["unipolar", "tributary-exclusive"],
    )


def _order():
    hub = "1~2+ 1~3+ 1~4+ 1~5+"
    sizes = [4, 1, 1, 1, 1]
    yield _doc("order/hub", "Agent 1 dominates a four-spoke hub.", sizes, hub, ["unipolar", "maintaining-order"])
    yield _doc(
        "order/infighting", "Spokes 2 and 3 fight each other.", sizes, hub + " 2~3-", ["unipolar", "maintaining-order"],
    )
    yield _doc(
        "order/collusion", "Spokes 2 and 3 cooperate with each other.", sizes, hub + " 2~3+",
        ["unipolar", "maintaining-order"],
    )
    yield _doc(
        "order/infighting-withhold",
        "Agent 1 withholds support from the fighting spokes 2 and 3.",
        sizes, "2>1+ 3>1+ 1~4+ 1~5+ 2~3-", ["unipolar", "maintaining-order"],
    )
    yield _doc(
        "order/collusion-ostracism",
        "Agent 1 stops supporting colluders 2 and 3 but keeps 4 and 5 on the same allocation.",
        sizes, "2>1+ 3>1+ 1>4+0.025 1>5+0.025 4>1+ 5>1+ 2~3+", ["unipolar", "maintaining-order"],
    )
    yield _doc(
        "order/discipline",
        "Spoke 2 attacks spoke 3; agent 1 attacks agent 2 in response.",
        sizes, "1>2- 2>1+ 1~3+ 1~4+ 1~5+ 2>3-", ["unipolar", "maintaining-order"],
    )


def _rebellion():
    sizes = [4, 2, 1, 1, 1]
    spokes = ["1~2+", "1~3+", "1~4+", "1~5+"]
    for k in range(5):
        rel = [s.replace("+", "-") if i < k else s for i, s in enumerate(spokes)]
        yield _doc(
            f"rebellion/r{k}",
            f"Hub of agent 1 with {k} of its spokes in revolt." if k else "Hub of agent 1, no rebels.",
            sizes, " ".join(rel), ["unipolar", "rebellion"],
        )
    yield _doc(
        "rebellion/support",
        "All spokes revolt; the smaller rebels also back agent 2.",
        sizes, "1~2- 1~3- 1~4- 1~5- 3~2+ 4~2+ 5~2+", ["unipolar", "rebellion"],
    )
    yield _doc(
        "rebellion/defeated",
        "The former hub is dead; the rebels are diminished and unaligned.",
        [0, 1.2, 0.6, 0.6, 0.6], "", ["unipolar", "rebellion"],
    )
    yield _doc(
        "rebellion/new-order",
        "The victors form a new hierarchy around agent 2.",
        [0, 1.2, 0.6, 0.6, 0.6], "2~3+ 2~4+ 2~5+", ["unipolar", "rebellion"],
    )


def _disintegration():
    rel = "1~2+ 1~3+ 1~4+ 4~5+ 3~4+ 2~6- 5~6+"
    yield _doc(
        "disintegration/t1",
        "Agent 1 is dominant but the smaller agents have ties of their own.",
        [4, 1, 1, 1.5, 1, 1], rel, ["unipolar", "disintegration"],
    )
    yield _doc(
        "disintegration/t2",
        "An outside shock weakens agent 1; agents 1 and 4 become rival poles.",
        [1.5, 1, 1, 1.5, 1, 1], rel, ["unipolar", "disintegration"],
    )
    yield _doc(
        "disintegration/t3",
        "Agent 3 chooses agent 1's side.",
        [1.5, 1, 1, 1.5, 1, 1], "1~2+ 1~3+ 1~4+ 4~5+ 2~6- 5~6+", ["unipolar", "disintegration"],
    )
    yield _doc(
        "disintegration/t4",
        "Agents 4 and 5 withdraw into a separate alliance.",
        [1.5, 1, 1, 1.5, 1, 1], "1~2+ 1~3+ 4~5+ 2~6- 5~6+", ["unipolar", "disintegration"],
    )
    yield _doc(
        "disintegration-growth/t1",
        "Agent 1 is large and central; agent 4 is small but well connected.",
        [4, 1, 1, 1, 1, 1], "1~2+ 1~3+ 1~4+ 4~2+ 4~3+ 4~5+ 4~6+", ["unipolar", "disintegration"],
    )


def _bipolar():
    # poles 1 and 4, tributaries 2,3 and 5,6
    base = "1~2+ 1~3+ 4~5+ 4~6+"
    yield _doc(
        "realignment/join-1", "Agent 3 joins agent 1's alliance.", [3, 1, 1, 3, 1, 1, 1],
        "1~2+ 1~3+ 4~5+ 4~6+ 4~7+", ["multipolar", "realignment"],
    )
    yield _doc(
        "realignment/join-4", "Agent 3 joins agent 4's alliance.", [3, 1, 1, 3, 1, 1, 1],
        "1~2+ 4~3+ 4~5+ 4~6+ 4~7+", ["multipolar", "realignment"],
    )
    yield _doc(
        "realignment/retaliate", "Agent 4 attacks agent 3 for defecting to agent 1.", [3, 1, 1, 3, 1, 1, 1],
        "1~2+ 1~3+ 4~5+ 4~6+ 4~7+ 4>3-", ["multipolar", "realignment"],
    )
    yield _doc(
        "divide-rule/united", "Agents 2, 3 and 4 are allied and all fight agent 1.", [2, 1, 1, 1],
        "2~3+ 2~4+ 3~4+ 1~2- 1~3- 1~4-", ["multipolar", "divide-and-rule"],
    )
    yield _doc(
        "divide-rule/divided", "Agents 2, 3 and 4 fight agent 1 and each other.", [2, 1, 1, 1],
        "2~3- 2~4- 3~4- 1~2- 1~3- 1~4-", ["multipolar", "divide-and-rule"],
    )
    yield _doc(
        "divide-rule/t1", "Agents 2 and 3 are allied; the stronger agent 1 stands apart.", [2, 1, 1],
        "2~3+", ["multipolar", "divide-and-rule"],
    )
    yield _doc(
        "divide-rule/t2", "Agent 1 co-opts agent 2 and attacks agent 3.", [2, 1, 1],
        "2~3+ 1>2+ 1>3-", ["multipolar", "divide-and-rule"],
    )
    yield _doc(
        "divide-rule/t3", "Agent 2 stays with agent 3 and is attacked by agent 1.", [2, 1, 1],
        "2~3+ 1>2- 1>3-", ["multipolar", "divide-and-rule"],
    )
    yield _doc(
        "divide-rule/t4", "Agent 2 betrays agent 3 and aligns with agent 1.", [2, 1, 1],
        "1~2+ 1>3- 2>3- 3>2+", ["multipolar", "divide-and-rule"],
    )
    for tag, pole in (("unequal", 4.5), ("equal", 3)):
        for rel, word in (("", "neutral"), (" 1~4+", "cooperate"), (" 1~4-", "fight")):
            yield _doc(
                f"latent-tension/{tag}-{word}",
                f"Bipolar pair, pole sizes {pole} and 3, poles {word}.",
                [pole, 1, 1, 3, 1, 1], base + rel, ["multipolar", "latent-tension"],
            )
    yield _doc(
        "conquest/t1", "Unequal bipolar pair at peace.", [4.5, 1, 1, 3, 1, 1], base, ["multipolar", "conquest"],
    )
    yield _doc(
        "conquest/t2", "Agent 1 and its proxies fight agent 4.", [4.5, 1, 1, 3, 1, 1],
        base + " 1~4- 2>4- 3>4-", ["multipolar", "conquest"],
    )
    yield _doc(
        "conquest/t5", "Agent 4 is badly diminished by the war.", [4, 0.8, 0.8, 0.8, 1, 1],
        base + " 1~4- 2>4- 3>4-", ["multipolar", "conquest"],
    )
    yield _doc(
        "conquest/t6", "Agent 4 and its former tributaries submit to agent 1.", [4, 0.8, 0.8, 0.8, 1, 1],
        "1~2+ 1~3+ 1~4+ 1~5+ 1~6+", ["multipolar", "conquest"],
    )


def _alliances():
    # hierarchy led by 2 (tributaries 1, 3, 7); rival 6 with tributary 5; 4 independent
    base = "2~1+ 2~3+ 2~7+ 6~5+"
    sizes = [1, 3, 1, 1.5, 1, 3, 1]
    variants = {
        "baseline": ("", "Agent 2's hierarchy faces its rival agent 6."),
        "balance-aggression": (" 2~6-", "Agent 2 balances by fighting agent 6."),
        "balance-alliance": (" 2~4+", "Agent 2 balances by allying with agent 4."),
        "bandwagon": (" 2~6+", "Agent 2 cooperates with its rival agent 6."),
        "buck-pass": (" 7>6-", "Agent 2 lets its tributary 7 fight agent 6."),
    }
    for name, (rel, text) in variants.items():
        yield _doc(f"bbb/{name}", text, sizes, base + rel, ["multipolar", "balancing"])

    base = "1~2+ 1~3+ 4~5+ 4~6+"
    sizes = [3, 1, 1, 3, 1, 1]
    chain = {
        "t1": ("", "Two great powers, each with two tributaries."),
        "t2": (" 3~5-", "Tributaries 3 and 5 start fighting."),
        "t3a": ("", "The hegemons withdraw support from the combatants."),
        "t3b": (" 3~5- 1>5-", "Agent 1 defends agent 3 by attacking agent 5."),
        "t4": (" 3~5- 1>5- 4~1-", "Agent 4 joins in and fights agent 1 directly."),
    }
    for name, (rel, text) in chain.items():
        rels = base + rel
        if name == "t3a":
            rels = "1~2+ 3>1+ 4~6+ 5>4+ 3~5-"
        yield _doc(f"chain-ganging/{name}", text, sizes, rels, ["multipolar", "chain-ganging"])


def _unity():
    for variant, dominant in (("presence", 3.0), ("aggression", 1.5)):
        for label, ps in zip("abcd", unity_structures(variant, dominant, DEFAULT_PARAMS.rho)):
            yield doc_from_structure(
                f"unity/{variant}-{label}", ps, DEFAULT_PARAMS,
                description=(
                    f"Unity under threat, {variant} variant ({label}); dominant agent 4 at "
                    f"size {dominant} in (c) and (d)."
                ),
                tags=("multipolar", "unity-under-threat"),
            )


def _vacuum():
    yield _doc("vacuum/empty", "Six equal agents and no relations.", [1] * 6, "", ["nonpolar", "power-vacuum"])
    yield _doc(
        "vacuum/sparse", "A single alliance and a single conflict.", [1] * 6, "1~2+ 4~5-", ["nonpolar", "power-vacuum"],
    )
    yield _doc(
        "vacuum/pockets", "Small coalitions and scattered conflicts among similar agents.",
        [1, 1.1, 0.9, 1, 1.2, 0.9], "1~2+ 2~3+ 4>5- 5>6- 6~4- 3>6+", ["nonpolar", "power-vacuum"],
    )


@lru_cache(maxsize=1)
def _corpus() -> dict[str, ScenarioDoc]:
    out: dict[str, ScenarioDoc] = {}
    for gen in (_triads, _hierarchy, _order, _rebellion, _disintegration, _bipolar, _alliances, _unity, _vacuum):
        for doc in gen():
            if doc.id in out:
                raise RuntimeError(f"duplicate corpus id {doc.id}")
            out[doc.id] = doc
    return out


def corpus_ids() -> list[str]:
    return list(_corpus())


def corpus_get(id: str) -> ScenarioDoc:
    try:
        return _corpus()[id]
    except KeyError:
        raise UnknownScenario(id) from None
