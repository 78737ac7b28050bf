import pytest

from pbpoplus import (GraphMorphism, LabeledGraph, RhsSpec, TruthTable,
                      bdd_lattice, build_decision_tree, complete_rule,
                      unit_lattice)


@pytest.fixture(scope="session")
def unit():
    return unit_lattice()


@pytest.fixture(scope="session")
def lat2():
    return bdd_lattice(["x1", "x2"])


@pytest.fixture(scope="session")
def replace_rule(lat2):
    """Relabel one matched node (anything between bottom and the variable
    class) to the fixed variable x1."""
    pattern = LabeledGraph.build(lat2, {"a": "bot"})
    context = LabeledGraph.build(lat2, {"a": "Var"})
    interface_type = LabeledGraph.build(lat2, {"a": "bot"})
    t_l = GraphMorphism(pattern, context, {"a": "a"}, {})
    l_prime = GraphMorphism(interface_type, context, {"a": "a"}, {})
    return complete_rule(pattern, t_l, l_prime,
                         RhsSpec(node_labels={"a": "x1"}), name="replace-var")


@pytest.fixture(scope="session")
def keep_rule(lat2):
    """Match any single node and leave it untouched."""
    pattern = LabeledGraph.build(lat2, {"a": "bot"})
    context = LabeledGraph.build(lat2, {"a": "top"})
    interface_type = LabeledGraph.build(lat2, {"a": "top"})
    t_l = GraphMorphism(pattern, context, {"a": "a"}, {})
    l_prime = GraphMorphism(interface_type, context, {"a": "a"}, {})
    return complete_rule(pattern, t_l, l_prime, RhsSpec(), name="keep")


@pytest.fixture(scope="session")
def pq_table():
    return TruthTable.from_bits("0001", ["p", "q"])


@pytest.fixture()
def pq_tree(pq_table):
    return build_decision_tree(pq_table)
