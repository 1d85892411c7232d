import math
import random

import pytest

from morphshop.ranking import (
    CriteriaTable,
    Criterion,
    EmptyTableError,
    dominance_layers,
    load_criteria_table,
    outrank_layers,
    parse_criteria_table,
)

from conftest import fixture_path


@pytest.fixture(scope="module")
def table5():
    return load_criteria_table(fixture_path("table5.json").read_bytes())


@pytest.fixture(scope="module")
def table6():
    return load_criteria_table(fixture_path("table6.json").read_bytes())


def make_table(rows, directions=None, weights=None):
    n = len(next(iter(rows.values())))
    directions = directions or ["max"] * n
    weights = weights or [1.0] * n
    return CriteriaTable(
        criteria=tuple(
            Criterion(id=f"k{i}", direction=d, weight=w)
            for i, (d, w) in enumerate(zip(directions, weights))
        ),
        items=tuple((item_id, tuple(est)) for item_id, est in rows.items()),
    )


def test_table5_layers(table5):
    partition = dominance_layers(table5)
    assert partition.layers == (("A1", "A4"), ("A3", "A5"), ("A2",))
    assert [partition.priority_of[f"A{i}"] for i in range(1, 6)] == [1, 3, 2, 1, 2]


def test_single_item_single_layer():
    partition = dominance_layers(make_table({"only": [1, 2]}))
    assert partition.layers == (("only",),)
    assert partition.priority_of["only"] == 1


def test_identical_rows_share_layer_one():
    partition = dominance_layers(make_table({"a": [2, 2], "b": [2, 2]}))
    assert partition.layers == (("a", "b"),)


def test_empty_table_raises():
    table = CriteriaTable(criteria=(Criterion(id="k", direction="max"),), items=())
    with pytest.raises(EmptyTableError):
        dominance_layers(table)
    with pytest.raises(EmptyTableError):
        outrank_layers(table, 1.0)


def test_dominator_exists_in_previous_layer(table5):
    partition = dominance_layers(table5)
    adjusted = table5.adjusted()

    def strictly(a, b):
        return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))

    for j, layer in enumerate(partition.layers[1:], start=2):
        for item in layer:
            previous = partition.layers[j - 2]
            assert any(strictly(adjusted[d], adjusted[item]) for d in previous)


def test_invariance_under_monotone_rescaling(table5):
    base = dominance_layers(table5)
    transforms = [lambda z: z**3, math.exp, lambda z: 5 * z - 2, lambda z: math.atan(z)]
    rescaled = CriteriaTable(
        criteria=table5.criteria,
        items=tuple(
            (item_id, tuple(transforms[i](z) for i, z in enumerate(est)))
            for item_id, est in table5.items
        ),
    )
    assert dominance_layers(rescaled).layers == base.layers


def test_layers_partition_items(table5):
    partition = dominance_layers(table5)
    flattened = [item for layer in partition.layers for item in layer]
    assert sorted(flattened) == sorted(item_id for item_id, _ in table5.items)
    for layer_index, layer in enumerate(partition.layers, start=1):
        for item in layer:
            assert partition.priority_of[item] == layer_index


def test_outrank_threshold_one_matches_dominance(table5, table6):
    rng = random.Random(11)
    tables = [table5, table6]
    for _ in range(25):
        rows = {
            f"i{i}": [rng.randint(1, 5) for _ in range(4)] for i in range(rng.randint(1, 7))
        }
        directions = [rng.choice(["max", "min"]) for _ in range(4)]
        tables.append(make_table(rows, directions))
    for table in tables:
        assert outrank_layers(table, 1.0).layers == dominance_layers(table).layers


def test_table6_concordance(table6):
    partition = outrank_layers(table6, 0.7)
    assert partition.layers == (("A2",), ("A1",))
    assert partition.priority_of == {"A2": 1, "A1": 2}


def test_outrank_single_item():
    assert outrank_layers(make_table({"x": [1]}), 0.7).layers == (("x",),)


def test_outrank_incomparable_items_share_the_top_layer():
    table = make_table({"a": [2, 1], "b": [1, 2], "c": [0, 0]})
    partition = outrank_layers(table, 0.51)
    assert partition.priority_of["c"] == 2
    assert partition.priority_of["a"] == partition.priority_of["b"] == 1


def test_outrank_cycle_collapses_to_one_layer():
    # rock-paper-scissors: each item outranks the next on 2 of 3 criteria
    table = make_table({"a": [3, 1, 2], "b": [2, 3, 1], "c": [1, 2, 3]})
    partition = outrank_layers(table, 0.66)
    assert partition.layers == (("a", "b", "c"),)


def test_outrank_identical_rows_one_layer():
    partition = outrank_layers(make_table({"a": [1, 1], "b": [1, 1]}), 1.0)
    assert partition.layers == (("a", "b"),)


def test_threshold_validation(table5):
    for bad in (0.5, 0.0, 1.2):
        with pytest.raises(ValueError):
            outrank_layers(table5, bad)


def test_zero_weights_rejected():
    table = make_table({"a": [1], "b": [2]}, weights=[0.0])
    with pytest.raises(ValueError, match="sum to a positive"):
        outrank_layers(table, 0.7)


def test_weighted_concordance():
    # weight mass on the criterion where "low" wins pushes it to layer 1
    table = make_table({"hi": [5, 1], "lo": [1, 5]}, weights=[1.0, 9.0])
    partition = outrank_layers(table, 0.9)
    assert partition.priority_of == {"lo": 1, "hi": 2}


def test_parse_rejects_bad_shapes():
    with pytest.raises(ValueError, match="estimates"):
        parse_criteria_table(
            {"criteria": [{"id": "k", "direction": "max", "weight": 1}],
             "items": [{"id": "a", "estimates": [1, 2]}]}
        )
    with pytest.raises(ValueError, match="direction"):
        parse_criteria_table(
            {"criteria": [{"id": "k", "direction": "sideways", "weight": 1}],
             "items": [{"id": "a", "estimates": [1]}]}
        )
    with pytest.raises(ValueError, match="unknown field"):
        parse_criteria_table({"criteria": [], "items": [], "bogus": 1})
