import random

import pytest

from pbpoplus import (Cospan, GraphMorphism, LabeledGraph, MorphismError,
                      Span, check_strong_match, compose,
                      enumerate_homomorphisms, find_matches, identity,
                      is_pullback_square, naive_find_matches, unit_lattice,
                      validate_morphism, verify_match_square)

from genhelpers import random_graph, random_host_with_match, random_rule


def two_color_type(unit):
    return LabeledGraph.build(
        unit, {"a": "*", "b": "*"},
        {"ab": ("a", "b", "*"), "ba": ("b", "a", "*")})


def is_two_colorable(g):
    """Direct check: BFS 2-coloring of the underlying undirected graph."""
    color = {}
    neighbors = {n: set() for n in g.nodes}
    for e in g.edges:
        if g.src[e] == g.tgt[e]:
            return False
        neighbors[g.src[e]].add(g.tgt[e])
        neighbors[g.tgt[e]].add(g.src[e])
    for start in g.sorted_nodes:
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            n = queue.pop()
            for nb in neighbors[n]:
                if nb not in color:
                    color[nb] = 1 - color[n]
                    queue.append(nb)
                elif color[nb] == color[n]:
                    return False
    return True


def test_single_node_hom_count(unit):
    dot = LabeledGraph.build(unit, {"p": "*"})
    host = LabeledGraph.build(unit, {f"n{i}": "*" for i in range(5)})
    assert len(enumerate_homomorphisms(dot, host)) == 5


def test_edge_into_three_cycle(unit):
    edge = LabeledGraph.build(unit, {"a": "*", "b": "*"}, {"e": ("a", "b", "*")})
    cycle = LabeledGraph.build(
        unit, {"c0": "*", "c1": "*", "c2": "*"},
        {"e0": ("c0", "c1", "*"), "e1": ("c1", "c2", "*"), "e2": ("c2", "c0", "*")})
    homs = enumerate_homomorphisms(edge, cycle)
    assert len(homs) == 3
    for f in homs:
        assert validate_morphism(f).ok


def test_hom_enumeration_is_sorted_and_exhaustive(unit):
    rng = random.Random(9)
    for _ in range(10):
        g = random_graph(rng, unit, max_nodes=3, max_edges=3)
        h = random_graph(rng, unit, max_nodes=3, max_edges=3)
        homs = enumerate_homomorphisms(g, h)
        keys = [tuple(sorted(f.node_map.items())) + tuple(sorted(f.edge_map.items()))
                for f in homs]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)
        # brute force over all node maps, then all edge maps
        nodes, edges = list(g.sorted_nodes), list(g.sorted_edges)
        count = 0
        import itertools
        for imgs in itertools.product(list(h.sorted_nodes), repeat=len(nodes)):
            nm = dict(zip(nodes, imgs))
            pools = []
            for e in edges:
                pools.append([c for c in h.sorted_edges
                              if h.src[c] == nm[g.src[e]] and h.tgt[c] == nm[g.tgt[e]]])
            for combo in itertools.product(*pools):
                count += 1
        assert count == len(homs)


def test_hom_existence_matches_bipartiteness(unit):
    rng = random.Random(10)
    t = two_color_type(unit)
    for _ in range(60):
        g = random_graph(rng, unit, max_nodes=6, max_edges=7)
        homs = enumerate_homomorphisms(g, t)
        assert bool(homs) == is_two_colorable(g)


def test_injective_flag(unit):
    two = LabeledGraph.build(unit, {"a": "*", "b": "*"})
    one = LabeledGraph.build(unit, {"x": "*"})
    assert len(enumerate_homomorphisms(two, one)) == 1
    assert enumerate_homomorphisms(two, one, injective=True) == []


def test_strong_match_identity_typing(unit):
    pattern = LabeledGraph.build(unit, {"p": "*", "q": "*"}, {"e": ("p", "q", "*")})
    host = pattern.rename({"p": "g1", "q": "g2"}, {"e": "ge"})
    alpha = GraphMorphism(host, pattern, {"g1": "p", "g2": "q"}, {"ge": "e"})
    match = check_strong_match(identity(pattern), alpha)
    assert match is not None
    assert match.m.node_map == {"p": "g1", "q": "g2"}
    assert verify_match_square(match)


def test_strong_match_rejects_collapse(unit):
    pattern = LabeledGraph.build(unit, {"p": "*"})
    lprime = LabeledGraph.build(unit, {"p": "*", "c": "*"})
    t_l = GraphMorphism(pattern, lprime, {"p": "p"}, {})
    host = LabeledGraph.build(unit, {"x": "*", "y": "*"})
    good = GraphMorphism(host, lprime, {"x": "p", "y": "c"}, {})
    bad = GraphMorphism(host, lprime, {"x": "p", "y": "p"}, {})
    match = check_strong_match(t_l, good)
    assert match is not None and match.m.node_map == {"p": "x"}
    assert check_strong_match(t_l, bad) is None


def test_strong_match_requires_injective_typing(unit):
    two = LabeledGraph.build(unit, {"a": "*", "b": "*"})
    one = LabeledGraph.build(unit, {"t": "*"})
    squash = GraphMorphism(two, one, {"a": "t", "b": "t"}, {})
    with pytest.raises(MorphismError, match="not-injective"):
        check_strong_match(squash, identity(one))


def test_strong_match_typing_mismatch(unit, lat2):
    p_unit = LabeledGraph.build(unit, {"a": "*"})
    p_bdd = LabeledGraph.build(lat2, {"a": "top"})
    with pytest.raises(MorphismError, match="typing-mismatch"):
        check_strong_match(identity(p_unit), identity(p_bdd))


def test_find_matches_variable_replacement(replace_rule, lat2):
    host = LabeledGraph.build(lat2, {"g": "x2"})
    matches = find_matches(replace_rule, host)
    assert len(matches) == 1
    assert matches[0].m.node_map == {"a": "g"}
    host_top = LabeledGraph.build(lat2, {"g": "top"})
    assert find_matches(replace_rule, host_top) == []


def test_find_matches_agrees_with_naive(lat2):
    rng = random.Random(21)
    agreements = 0
    for _ in range(15):
        rule = random_rule(rng, lat2)
        host, _ = random_host_with_match(rng, rule)
        fast = find_matches(rule, host, check_rule=False)
        slow = naive_find_matches(rule, host)
        assert [m.sort_key() for m in fast] == [m.sort_key() for m in slow]
        agreements += len(fast)
    assert agreements >= 15  # every constructed host has at least its match


def test_every_match_passes_square_and_injectivity(lat2):
    rng = random.Random(22)
    for _ in range(10):
        rule = random_rule(rng, lat2)
        host, planted = random_host_with_match(rng, rule)
        matches = find_matches(rule, host, check_rule=False)
        keys = [m.sort_key() for m in matches]
        assert planted.sort_key() in keys
        for match in matches:
            assert compose(match.m, match.alpha).node_map == rule.tL.node_map
            assert compose(match.m, match.alpha).edge_map == rule.tL.edge_map
            assert match.m.is_injective()
            assert is_pullback_square(Cospan(match.alpha, rule.tL),
                                      Span(match.m, identity(rule.L)))


def test_distinct_adherences_over_one_match_are_distinct(unit):
    # same m, two ways to type the context node: two matches
    from pbpoplus import RhsSpec, complete_rule

    pattern = LabeledGraph.build(unit, {"a": "*"})
    lprime = LabeledGraph.build(unit, {"a": "*", "c1": "*", "c2": "*"})
    t_l = GraphMorphism(pattern, lprime, {"a": "a"}, {})
    rule = complete_rule(pattern, t_l, identity(lprime), RhsSpec())
    host = LabeledGraph.build(unit, {"x": "*", "y": "*"})
    matches = find_matches(rule, host)
    by_m = {}
    for match in matches:
        by_m.setdefault(tuple(sorted(match.m.node_map.items())), []).append(match)
    assert len(matches) == 4  # two m's, two adherences each
    assert all(len(v) == 2 for v in by_m.values())


def test_one_point_identity_typing_degenerates_to_iso_search(unit):
    pattern = LabeledGraph.build(unit, {"p": "*", "q": "*"}, {"e": ("p", "q", "*")})
    from pbpoplus import RhsSpec, complete_rule

    rule = complete_rule(pattern, identity(pattern), identity(pattern), RhsSpec())
    same = pattern.rename({"p": "u", "q": "v"}, {"e": "w"})
    assert len(find_matches(rule, same)) == 1
    bigger = LabeledGraph.build(unit, {"p": "*", "q": "*", "r": "*"},
                                {"e": ("p", "q", "*")})
    assert find_matches(rule, bigger) == []
