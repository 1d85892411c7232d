"""Independent brute-force references the tests check the engine against.

Everything here enumerates naively and re-implements the comparison logic
inline, so no engine shortcut can hide a bug in both places at once.
"""

from itertools import combinations, product
from random import Random

from morphshop.model import MorphModel, parse_model


def enumerate_solutions(model: MorphModel, component_ids=None):
    """All full selections over the given components with (w, n) recomputed naively."""
    comps = [
        c for c in model.components if component_ids is None or c.id in component_ids
    ]
    for combo in product(*[c.alternatives for c in comps]):
        w = model.compat_scale_max
        for a, b in combinations(combo, 2):
            w = min(w, model.compatibility.lookup(a.id, b.id))
        n = [0] * model.priority_scale_max
        for da in combo:
            n[da.priority - 1] += 1
        yield {c.id: da.id for c, da in zip(comps, combo)}, w, tuple(n)


def vector_dominates(wa, na, wb, nb):
    if (wa, na) == (wb, nb):
        return False
    if wa < wb:
        return False
    prefix_a = prefix_b = 0
    for x, y in zip(na, nb):
        prefix_a += x
        prefix_b += y
        if prefix_a < prefix_b:
            return False
    return True


def brute_pareto(model: MorphModel, component_ids=None):
    """Feasible, nondominated (selection, w, n) triples by exhaustive enumeration.

    Dominance is only a function of the (w, n) vector, so the pairwise scan
    runs over distinct vectors; the enumeration itself stays exhaustive.
    """
    feasible = [
        (sel, w, n)
        for sel, w, n in enumerate_solutions(model, component_ids)
        if w > 0
    ]
    vectors = {(w, n) for _, w, n in feasible}
    nondominated = {
        (w, n)
        for w, n in vectors
        if not any(vector_dominates(w2, n2, w, n) for w2, n2 in vectors)
    }
    return [(sel, w, n) for sel, w, n in feasible if (w, n) in nondominated]


def brute_knapsack(items, budget):
    """(best profit, best cost) over all subsets; items are (id, cost, profit)."""
    best = (0.0, 0.0)
    for r in range(len(items) + 1):
        for subset in combinations(items, r):
            cost = sum(i[1] for i in subset)
            profit = sum(i[2] for i in subset)
            if cost <= budget and profit > best[0]:
                best = (profit, cost)
    return best[0]


def brute_multi_choice(groups, budget):
    """Best profit picking one (id, cost, profit) per group, or None if infeasible."""
    best = None
    for combo in product(*groups):
        cost = sum(i[1] for i in combo)
        profit = sum(i[2] for i in combo)
        if cost <= budget and (best is None or profit > best):
            best = profit
    return best


def brute_min_cover(items, required_gain):
    """Least profit lost over subsets with total cost >= required_gain, or None."""
    best = None
    for r in range(len(items) + 1):
        for subset in combinations(items, r):
            gain = sum(i[1] for i in subset)
            loss = sum(i[2] for i in subset)
            if gain >= required_gain and (best is None or loss < best):
                best = loss
    return best


def random_model(rng: Random, max_components=5, max_alternatives=5, zero_rate=0.12):
    """Flat random model with priorities in [1,3] and compat values in [0,3]."""
    m = rng.randint(2, max_components)
    components = []
    for ci in range(m):
        cid = f"C{ci}"
        components.append(
            {
                "id": cid,
                "label": cid,
                "alternatives": [
                    {"id": f"{cid}x{j}", "label": f"{cid}x{j}", "priority": rng.randint(1, 3)}
                    for j in range(rng.randint(2, max_alternatives))
                ],
            }
        )
    compat = []
    for i, comp_a in enumerate(components):
        for comp_b in components[i + 1 :]:
            for alt_a in comp_a["alternatives"]:
                for alt_b in comp_b["alternatives"]:
                    if rng.random() < 0.6:
                        value = 0 if rng.random() < zero_rate else rng.randint(1, 3)
                        compat.append({"a": alt_a["id"], "b": alt_b["id"], "value": value})
    return parse_model(
        {
            "priorityScaleMax": 3,
            "compatScaleMax": 3,
            "defaultCompat": 3,
            "tree": {
                "id": "root",
                "label": "root",
                "children": [
                    {"id": f"n{c['id']}", "label": c["id"], "component": c["id"]}
                    for c in components
                ],
            },
            "components": components,
            "compatibility": compat,
        }
    )


def random_knapsack_items(rng: Random, n):
    return [(f"i{j}", rng.randint(0, 8), rng.randint(0, 9)) for j in range(n)]


def random_groups(rng: Random, n_groups, max_items=4):
    return [
        [(f"g{g}i{j}", rng.randint(1, 8), rng.randint(0, 9)) for j in range(rng.randint(1, max_items))]
        for g in range(n_groups)
    ]
