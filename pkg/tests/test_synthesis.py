import random

import pytest

from morphshop.model import UnknownIdError, load_model_file, parse_model
from morphshop.synthesis import (
    DEFAULT_MAX_SOLUTIONS,
    CompositeSolution,
    ExcellenceVector,
    ExplosionError,
    IncompleteSelectionError,
    ScaleMismatchError,
    best_completion,
    compose_node,
    dominates,
    excellence,
    pareto_filter,
)

from conftest import fixture_path
from oracles import brute_pareto, random_model, vector_dominates


def vectors_of(solutions):
    return {(s.excellence.w, s.excellence.n) for s in solutions}


def selections_of(solutions):
    return {tuple(sorted(s.selection.items())) for s in solutions}


# --- excellence -----------------------------------------------------------------


def test_excellence_motor_vehicle(motor_vehicle):
    vec = excellence(motor_vehicle, {"A": "A1", "B": "B1", "C": "C2"})
    assert vec == ExcellenceVector(w=3, n=(2, 1, 0))


def test_excellence_extended_product(extended_product):
    vec = excellence(extended_product, {"A": "A2", "B": "B1", "C": "C2", "D": "D1", "E": "E2"})
    assert vec == ExcellenceVector(w=1, n=(5, 0, 0))


def test_excellence_single_component(motor_vehicle):
    assert excellence(motor_vehicle, {"A": "A1"}) == ExcellenceVector(w=3, n=(1, 0, 0))


def test_excellence_errors(motor_vehicle):
    with pytest.raises(UnknownIdError):
        excellence(motor_vehicle, {"A": "nope"})
    with pytest.raises(IncompleteSelectionError):
        excellence(motor_vehicle, {"A": "A1"}, components=("A", "B"))
    with pytest.raises(IncompleteSelectionError):
        excellence(motor_vehicle, {"A": "B1"}, components=("A",))


# --- dominance ------------------------------------------------------------------


def test_reference_pareto_pair_incomparable():
    a = ExcellenceVector(w=3, n=(2, 1, 0))
    b = ExcellenceVector(w=2, n=(3, 0, 0))
    assert not dominates(a, b)
    assert not dominates(b, a)


def test_better_w_equal_histogram_dominates():
    assert dominates(ExcellenceVector(3, (3, 0, 0)), ExcellenceVector(2, (3, 0, 0)))


def test_dominates_irreflexive():
    v = ExcellenceVector(3, (2, 1, 0))
    assert not dominates(v, v)


def test_scale_mismatch():
    with pytest.raises(ScaleMismatchError):
        dominates(ExcellenceVector(3, (1, 0)), ExcellenceVector(3, (1, 0, 0)))


def test_dominance_strict_partial_order_randomized():
    rng = random.Random(42)

    def vec():
        return ExcellenceVector(w=rng.randint(0, 3), n=tuple(rng.randint(0, 3) for _ in range(3)))

    for _ in range(2000):
        a, b, c = vec(), vec(), vec()
        assert not dominates(a, a)
        assert not (dominates(a, b) and dominates(b, a))
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)


# --- composition golden cases -----------------------------------------------------


def test_compose_motor_vehicle(motor_vehicle):
    solutions = compose_node(motor_vehicle)
    assert vectors_of(solutions) == {(3, (2, 1, 0)), (2, (3, 0, 0))}
    sels = selections_of(solutions)
    assert (("A", "A1"), ("B", "B1"), ("C", "C2")) in sels
    assert (("A", "A1"), ("B", "B1"), ("C", "C1")) in sels


def test_compose_extended_product(extended_product):
    solutions = compose_node(extended_product)
    assert vectors_of(solutions) == {(1, (5, 0, 0)), (3, (4, 1, 0))}
    sels = selections_of(solutions)
    assert (("A", "A2"), ("B", "B1"), ("C", "C2"), ("D", "D1"), ("E", "E2")) in sels
    assert (("A", "A2"), ("B", "B1"), ("C", "C2"), ("D", "D2"), ("E", "E2")) in sels


def test_compose_single_component_tree():
    model = parse_model(
        {
            "priorityScaleMax": 3,
            "compatScaleMax": 3,
            "defaultCompat": 3,
            "tree": {"id": "root", "label": "root", "component": "A"},
            "components": [
                {"id": "A", "label": "A", "alternatives": [
                    {"id": "A1", "label": "A1", "priority": 1},
                    {"id": "A2", "label": "A2", "priority": 2},
                ]},
            ],
            "compatibility": [],
        }
    )
    solutions = compose_node(model)
    assert selections_of(solutions) == {(("A", "A1"),), (("A", "A2"),)}
    assert all(s.excellence.w == 3 for s in solutions)
    # the Pareto subset of those singletons is the priority-1 alternatives
    assert selections_of(pareto_filter(solutions)) == {(("A", "A1"),)}


def test_compose_leaf_node_returns_all_alternatives(motor_vehicle):
    solutions = compose_node(motor_vehicle, "C")
    assert selections_of(solutions) == {(("C", "C1"),), (("C", "C2"),), (("C", "C3"),)}


def test_repair_plan_subsystems():
    finishing = load_model_file(str(fixture_path("repair-plan-finishing.json")))
    assert excellence(finishing, {"U": "U1", "V": "V1"}) == ExcellenceVector(2, (2, 0, 0))
    finishing_vectors = vectors_of(compose_node(finishing))
    assert {(2, (2, 0, 0)), (3, (0, 2, 0))} <= finishing_vectors

    nav = load_model_file(str(fixture_path("repair-plan-nav.json")))
    assert excellence(nav, {"Y": "Y1", "G": "G1"}) == ExcellenceVector(3, (2, 0, 0))
    assert selections_of(compose_node(nav)) == {(("G", "G1"), ("Y", "Y1"))}

    wiring = load_model_file(str(fixture_path("repair-plan-wiring.json")))
    assert selections_of(compose_node(wiring)) == {
        (("L", "L1"), ("O", "O1")),
        (("L", "L2"), ("O", "O1")),
    }


def test_repair_plan_node_b(repair_plan):
    solutions = compose_node(repair_plan, "B")
    assert selections_of(solutions) == {
        (("M", "M1"), ("W", "W1"), ("Z", "Z1")),
        (("M", "M1"), ("W", "W1"), ("Z", "Z6")),
    }
    assert vectors_of(solutions) == {(3, (3, 0, 0))}


def test_repair_plan_node_a(repair_plan):
    solutions = compose_node(repair_plan, "A")
    assert selections_of(solutions) == {(("F", "F2"), ("X", "X1"))}
    assert solutions[0].excellence == ExcellenceVector(3, (2, 0, 0))


def test_repair_plan_root_contains_reference_solutions(repair_plan):
    sels = selections_of(compose_node(repair_plan))
    base = (("F", "F2"), ("H", "H1"), ("M", "M1"), ("W", "W1"), ("X", "X1"))
    for z in ("Z1", "Z6"):
        for q in ("Q1", "Q2"):
            assert tuple(sorted(base + (("Z", z), ("Q", q)))) in sels


def test_hierarchical_consistency_on_repair_plan(repair_plan):
    flat = brute_pareto(repair_plan)
    bottom_up = compose_node(repair_plan)
    assert {(w, n) for _, w, n in flat} == vectors_of(bottom_up)
    assert {tuple(sorted(sel.items())) for sel, _, _ in flat} == selections_of(bottom_up)


def test_computer_stage_one_solutions(computer):
    solutions = compose_node(computer)
    expected_s1 = {"B": "B1", "U": "U1", "E": "E1", "V": "V1", "J": "J1",
                   "O": "O1", "A": "A1", "G": "G2"}
    expected_s2 = dict(expected_s1, O="O2")
    assert selections_of(solutions) == {
        tuple(sorted(expected_s1.items())),
        tuple(sorted(expected_s2.items())),
    }


# --- composition properties -------------------------------------------------------


def test_pareto_matches_brute_force_on_fixtures(motor_vehicle, extended_product, computer):
    for model in (motor_vehicle, extended_product):
        oracle = brute_pareto(model)
        engine = compose_node(model)
        assert {(w, n) for _, w, n in oracle} == vectors_of(engine)
        assert {tuple(sorted(s.items())) for s, _, _ in oracle} == selections_of(engine)


def test_no_returned_solution_is_dominated_by_any_feasible(motor_vehicle):
    from oracles import enumerate_solutions

    engine = compose_node(motor_vehicle)
    candidates = [(w, n) for _, w, n in enumerate_solutions(motor_vehicle) if w > 0]
    for solution in engine:
        for w, n in candidates:
            assert not vector_dominates(w, n, solution.excellence.w, solution.excellence.n)


def test_w_monotone_in_compatibility(motor_vehicle):
    from morphshop.model import save_model

    selection = {"A": "A1", "B": "B1", "C": "C2"}
    base = excellence(motor_vehicle, selection).w
    doc = save_model(motor_vehicle)
    for i, entry in enumerate(doc["compatibility"]):
        if entry["value"] == 0:
            continue
        mutated = {**doc, "compatibility": [dict(e) for e in doc["compatibility"]]}
        mutated["compatibility"][i]["value"] -= 1
        lowered_model = parse_model(mutated)
        assert excellence(lowered_model, selection).w <= base


def test_prefix_sum_totals_equal_at_node(motor_vehicle):
    solutions = compose_node(motor_vehicle, pareto_only=False)
    totals = {sum(s.excellence.n) for s in solutions}
    assert totals == {len(motor_vehicle.components)}


def test_deterministic_order(motor_vehicle):
    first = [s.to_dict() for s in compose_node(motor_vehicle)]
    second = [s.to_dict() for s in compose_node(motor_vehicle)]
    assert first == second
    ws = [s["w"] for s in first]
    assert ws == sorted(ws, reverse=True)


def test_explosion_error(computer):
    with pytest.raises(ExplosionError) as excinfo:
        compose_node(computer, max_solutions=10)
    assert excinfo.value.cap == 10


def test_random_models_match_oracle_small():
    rng = random.Random(99)
    for _ in range(10):
        model = random_model(rng)
        oracle = brute_pareto(model)
        engine = compose_node(model)
        assert {(w, n) for _, w, n in oracle} == vectors_of(engine)


# --- best completion ---------------------------------------------------------------


def test_best_completion_empty_is_top_pareto(motor_vehicle):
    top = compose_node(motor_vehicle)[0]
    completion = best_completion(motor_vehicle, {})
    assert completion is not None
    assert completion.selection == top.selection


def test_best_completion_extends_partial(motor_vehicle):
    completion = best_completion(motor_vehicle, {"A": "A3"})
    assert completion is not None
    assert completion.selection["A"] == "A3"
    assert completion.excellence.w > 0


def test_best_completion_none_when_infeasible(motor_vehicle):
    # A5 and C1 are incompatible, so no completion exists
    assert best_completion(motor_vehicle, {"A": "A5", "C": "C1"}) is None


def test_best_completion_unknown_id(motor_vehicle):
    with pytest.raises(UnknownIdError):
        best_completion(motor_vehicle, {"A": "B1"})


def test_default_cap_is_a_million():
    assert DEFAULT_MAX_SOLUTIONS == 10**6
