"""Seeded random generators for graphs, (co)spans, rules, and matches.

Everything takes an explicit ``random.Random`` so test corpora are
reproducible.  Candidate builders derive competing cospans/spans from a
computed limit; they are the raw material for the universal-property
checks."""

from __future__ import annotations

import random

from pbpoplus import (Cospan, GraphMorphism, LabeledGraph, LabelLattice,
                      Match, RhsSpec, Span, bdd_lattice, complete_rule,
                      compose, identity, preimage, unit_lattice)


def diamond_lattice() -> LabelLattice:
    return LabelLattice.from_order(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        top="top", bottom="bot")


def corpus_lattices() -> list[LabelLattice]:
    return [unit_lattice(), diamond_lattice(), bdd_lattice(["p", "q"])]


def labels_leq(lat: LabelLattice, upper: str) -> list[str]:
    return [x for x in lat.sorted_elements() if lat.leq(x, upper)]


def labels_geq(lat: LabelLattice, lower: str) -> list[str]:
    return [x for x in lat.sorted_elements() if lat.leq(lower, x)]


def random_graph(rng: random.Random, lat: LabelLattice, max_nodes: int = 4,
                 max_edges: int = 6, prefix: str = "n",
                 min_nodes: int = 0) -> LabeledGraph:
    labels = lat.sorted_elements()
    n = rng.randint(min_nodes, max_nodes)
    nodes = {f"{prefix}{i}": rng.choice(labels) for i in range(n)}
    edges = {}
    if n:
        ids = sorted(nodes)
        for j in range(rng.randint(0, max_edges)):
            edges[f"{prefix}e{j}"] = (rng.choice(ids), rng.choice(ids),
                                      rng.choice(labels))
    return LabeledGraph.build(lat, nodes, edges)


def random_morphism_into(rng: random.Random, cod: LabeledGraph,
                         max_nodes: int = 4, max_edges: int = 6,
                         prefix: str = "a") -> GraphMorphism:
    """A fresh graph together with a valid morphism into ``cod``."""
    lat = cod.lattice
    cod_nodes = list(cod.sorted_nodes)
    nodes: dict[str, str] = {}
    node_map: dict[str, str] = {}
    if cod_nodes:
        for i in range(rng.randint(0, max_nodes)):
            ident = f"{prefix}{i}"
            target = rng.choice(cod_nodes)
            node_map[ident] = target
            nodes[ident] = rng.choice(labels_leq(lat, cod.node_labels[target]))
    edges: dict[str, tuple[str, str, str]] = {}
    edge_map: dict[str, str] = {}
    cod_edges = list(cod.sorted_edges)
    if nodes and cod_edges:
        for j in range(rng.randint(0, max_edges)):
            target = rng.choice(cod_edges)
            s_opts = sorted(v for v, t in node_map.items() if t == cod.src[target])
            t_opts = sorted(v for v, t in node_map.items() if t == cod.tgt[target])
            if not s_opts or not t_opts:
                continue
            ident = f"{prefix}e{j}"
            edges[ident] = (rng.choice(s_opts), rng.choice(t_opts),
                            rng.choice(labels_leq(lat, cod.edge_labels[target])))
            edge_map[ident] = target
    dom = LabeledGraph.build(lat, nodes, edges)
    return GraphMorphism(dom, cod, node_map, edge_map)


def random_morphism_out_of(rng: random.Random, dom: LabeledGraph,
                           prefix: str = "b", junk: int = 2) -> GraphMorphism:
    """A valid morphism out of ``dom``: merge some nodes, raise some labels,
    merge parallel edges, and append unrelated elements."""
    lat = dom.lattice
    labels = lat.sorted_elements()
    node_map: dict[str, str] = {}
    groups: dict[str, list[str]] = {}
    reps: list[str] = []
    for n in dom.sorted_nodes:
        if reps and rng.random() < 0.3:
            rep = rng.choice(reps)
        else:
            rep = f"{prefix}{len(reps)}"
            reps.append(rep)
            groups[rep] = []
        groups[rep].append(n)
        node_map[n] = rep
    nodes = {}
    for rep, members in groups.items():
        base = lat.join(dom.node_labels[x] for x in members)
        nodes[rep] = rng.choice(labels_geq(lat, base))
    buckets: dict[tuple[str, str, int], list[str]] = {}
    for e in dom.sorted_edges:
        key = (node_map[dom.src[e]], node_map[dom.tgt[e]], rng.randint(0, 1))
        buckets.setdefault(key, []).append(e)
    edges: dict[str, tuple[str, str, str]] = {}
    edge_map: dict[str, str] = {}
    for i, (key, members) in enumerate(sorted(buckets.items())):
        ident = f"{prefix}e{i}"
        base = lat.join(dom.edge_labels[x] for x in members)
        edges[ident] = (key[0], key[1], rng.choice(labels_geq(lat, base)))
        for m in members:
            edge_map[m] = ident
    for k in range(rng.randint(0, junk)):
        nodes[f"{prefix}x{k}"] = rng.choice(labels)
    all_nodes = sorted(nodes)
    if all_nodes:
        for k in range(rng.randint(0, junk)):
            edges[f"{prefix}xe{k}"] = (rng.choice(all_nodes), rng.choice(all_nodes),
                                       rng.choice(labels))
    cod = LabeledGraph.build(lat, nodes, edges)
    return GraphMorphism(dom, cod, node_map, edge_map)


def random_span(rng: random.Random, lat: LabelLattice) -> Span:
    apex = random_graph(rng, lat, max_nodes=2, max_edges=3, prefix="s")
    return Span(random_morphism_out_of(rng, apex, prefix="L"),
                random_morphism_out_of(rng, apex, prefix="R"))


def random_cospan(rng: random.Random, lat: LabelLattice) -> Cospan:
    target = random_graph(rng, lat, max_nodes=4, max_edges=6, prefix="d")
    return Cospan(random_morphism_into(rng, target, prefix="u"),
                  random_morphism_into(rng, target, prefix="v"))


# -------------------------------------------------- candidate builders


def rename_iso(g: LabeledGraph, suffix: str = "~") -> GraphMorphism:
    node_map = {n: n + suffix for n in g.nodes}
    edge_map = {e: e + suffix for e in g.edges}
    return GraphMorphism(g, g.rename(node_map, edge_map), node_map, edge_map)


def merge_two_nodes(g: LabeledGraph, keep: str, drop: str) -> GraphMorphism:
    """Quotient morphism merging ``drop`` into ``keep`` (label join)."""
    lat = g.lattice
    nodes = {n: g.node_labels[n] for n in g.nodes if n != drop}
    nodes[keep] = lat.join([g.node_labels[keep], g.node_labels[drop]])
    remap = lambda n: keep if n == drop else n
    edges = {e: (remap(g.src[e]), remap(g.tgt[e]), g.edge_labels[e])
             for e in g.edges}
    cod = LabeledGraph.build(lat, nodes, edges)
    return GraphMorphism(g, cod, {n: remap(n) for n in g.nodes},
                         {e: e for e in g.edges})


def add_isolated_node(g: LabeledGraph, label: str, ident: str = "extra") -> GraphMorphism:
    nodes = {n: g.node_labels[n] for n in g.nodes}
    nodes[ident] = label
    edges = {e: (g.src[e], g.tgt[e], g.edge_labels[e]) for e in g.edges}
    cod = LabeledGraph.build(g.lattice, nodes, edges)
    return GraphMorphism(g, cod, {n: n for n in g.nodes}, {e: e for e in g.edges})


def add_extra_edge(g: LabeledGraph, src: str, tgt: str, label: str,
                   ident: str = "extraedge") -> GraphMorphism:
    nodes = {n: g.node_labels[n] for n in g.nodes}
    edges = {e: (g.src[e], g.tgt[e], g.edge_labels[e]) for e in g.edges}
    edges[ident] = (src, tgt, label)
    cod = LabeledGraph.build(g.lattice, nodes, edges)
    return GraphMorphism(g, cod, {n: n for n in g.nodes}, {e: e for e in g.edges})


def bump_one_label(g: LabeledGraph, rng: random.Random) -> GraphMorphism | None:
    """Identity-shaped morphism into a copy with one strictly raised label."""
    lat = g.lattice
    strict = []
    for n in g.sorted_nodes:
        ups = [x for x in labels_geq(lat, g.node_labels[n]) if x != g.node_labels[n]]
        if ups:
            strict.append(("node", n, ups))
    for e in g.sorted_edges:
        ups = [x for x in labels_geq(lat, g.edge_labels[e]) if x != g.edge_labels[e]]
        if ups:
            strict.append(("edge", e, ups))
    if not strict:
        return None
    kind, ident, ups = rng.choice(strict)
    nodes = {n: g.node_labels[n] for n in g.nodes}
    edges = {e: (g.src[e], g.tgt[e], g.edge_labels[e]) for e in g.edges}
    if kind == "node":
        nodes[ident] = rng.choice(ups)
    else:
        s, t, _ = edges[ident]
        edges[ident] = (s, t, rng.choice(ups))
    cod = LabeledGraph.build(lat, nodes, edges)
    return GraphMorphism(g, cod, {n: n for n in g.nodes}, {e: e for e in g.edges})


def pushout_candidates(rng: random.Random, span: Span, result) -> list[tuple[Cospan, bool]]:
    """Competing cospans for a computed pushout, tagged with whether the
    candidate corner itself is a pushout of the span."""
    h = result.object
    out: list[tuple[Cospan, bool]] = [
        (Cospan(result.left_leg, result.right_leg), True),
    ]
    iso = rename_iso(h)
    out.append((Cospan(compose(result.left_leg, iso),
                       compose(result.right_leg, iso)), True))
    nodes = list(h.sorted_nodes)
    if len(nodes) >= 2:
        keep, drop = rng.sample(nodes, 2)
        q = merge_two_nodes(h, min(keep, drop), max(keep, drop))
        out.append((Cospan(compose(result.left_leg, q),
                           compose(result.right_leg, q)), False))
    ext = add_isolated_node(h, h.lattice.top or h.lattice.sorted_elements()[0])
    out.append((Cospan(compose(result.left_leg, ext),
                       compose(result.right_leg, ext)), False))
    if nodes:
        lab = h.lattice.top or h.lattice.sorted_elements()[-1]
        ext2 = add_extra_edge(h, rng.choice(nodes), rng.choice(nodes), lab)
        out.append((Cospan(compose(result.left_leg, ext2),
                           compose(result.right_leg, ext2)), False))
    bump = bump_one_label(h, rng)
    if bump is not None:
        out.append((Cospan(compose(result.left_leg, bump),
                           compose(result.right_leg, bump)), False))
    return out


def restrict_to_subgraph(g: LabeledGraph, keep_nodes: set[str],
                         keep_edges: set[str]) -> GraphMorphism:
    nodes = {n: g.node_labels[n] for n in keep_nodes}
    edges = {e: (g.src[e], g.tgt[e], g.edge_labels[e]) for e in keep_edges}
    sub = LabeledGraph.build(g.lattice, nodes, edges)
    return GraphMorphism(sub, g, {n: n for n in keep_nodes},
                         {e: e for e in keep_edges})


def lower_one_label(g: LabeledGraph, rng: random.Random) -> GraphMorphism | None:
    """Identity-shaped morphism from a copy with one strictly lowered label."""
    lat = g.lattice
    strict = []
    for n in g.sorted_nodes:
        downs = [x for x in labels_leq(lat, g.node_labels[n]) if x != g.node_labels[n]]
        if downs:
            strict.append(("node", n, downs))
    for e in g.sorted_edges:
        downs = [x for x in labels_leq(lat, g.edge_labels[e]) if x != g.edge_labels[e]]
        if downs:
            strict.append(("edge", e, downs))
    if not strict:
        return None
    kind, ident, downs = rng.choice(strict)
    nodes = {n: g.node_labels[n] for n in g.nodes}
    edges = {e: (g.src[e], g.tgt[e], g.edge_labels[e]) for e in g.edges}
    if kind == "node":
        nodes[ident] = rng.choice(downs)
    else:
        s, t, _ = edges[ident]
        edges[ident] = (s, t, rng.choice(downs))
    dom = LabeledGraph.build(lat, nodes, edges)
    return GraphMorphism(dom, g, {n: n for n in g.nodes}, {e: e for e in g.edges})


def pullback_candidates(rng: random.Random, cospan: Cospan,
                        result) -> list[tuple[Span, bool]]:
    """Competing spans for a computed pullback, tagged with whether the
    candidate apex itself is a pullback of the cospan."""
    p = result.object
    out: list[tuple[Span, bool]] = [
        (Span(result.left_leg, result.right_leg), True),
    ]
    iso = rename_iso(p)
    inv = GraphMorphism(iso.cod, p,
                        {v: k for k, v in iso.node_map.items()},
                        {v: k for k, v in iso.edge_map.items()})
    out.append((Span(compose(inv, result.left_leg),
                     compose(inv, result.right_leg)), True))
    empty = LabeledGraph.empty(p.lattice)
    empty_left = GraphMorphism(empty, result.left_leg.cod, {}, {})
    empty_right = GraphMorphism(empty, result.right_leg.cod, {}, {})
    out.append((Span(empty_left, empty_right), len(p.nodes) == 0 and len(p.edges) == 0))
    if p.nodes or p.edges:
        if p.edges and rng.random() < 0.5:
            drop_edge = rng.choice(sorted(p.edges))
            keep_nodes, keep_edges = set(p.nodes), set(p.edges) - {drop_edge}
        else:
            drop_node = rng.choice(sorted(p.nodes)) if p.nodes else None
            keep_nodes = set(p.nodes) - {drop_node}
            keep_edges = {e for e in p.edges
                          if p.src[e] in keep_nodes and p.tgt[e] in keep_nodes}
        inc = restrict_to_subgraph(p, keep_nodes, keep_edges)
        out.append((Span(compose(inc, result.left_leg),
                         compose(inc, result.right_leg)), False))
    low = lower_one_label(p, rng)
    if low is not None:
        out.append((Span(compose(low, result.left_leg),
                         compose(low, result.right_leg)), False))
    return out


# ----------------------------------------------------- rules and hosts


def random_rule(rng: random.Random, lat: LabelLattice):
    """A valid rule built from a random typed pattern and type-graph map."""
    l_prime = random_graph(rng, lat, max_nodes=3, max_edges=3, prefix="t",
                           min_nodes=1)
    chosen_nodes = [n for n in l_prime.sorted_nodes if rng.random() < 0.7]
    if not chosen_nodes:
        chosen_nodes = [l_prime.sorted_nodes[0]]
    chosen_edges = [e for e in l_prime.sorted_edges
                    if l_prime.src[e] in chosen_nodes
                    and l_prime.tgt[e] in chosen_nodes and rng.random() < 0.5]
    l_nodes = {f"p_{n}": rng.choice(labels_leq(lat, l_prime.node_labels[n]))
               for n in chosen_nodes}
    l_edges = {f"p_{e}": (f"p_{l_prime.src[e]}", f"p_{l_prime.tgt[e]}",
                          rng.choice(labels_leq(lat, l_prime.edge_labels[e])))
               for e in chosen_edges}
    pattern = LabeledGraph.build(lat, l_nodes, l_edges)
    t_l = GraphMorphism(pattern, l_prime,
                        {f"p_{n}": n for n in chosen_nodes},
                        {f"p_{e}": e for e in chosen_edges})

    # K': zero to two copies per type node, edges per compatible copy pair.
    copies: dict[str, list[str]] = {}
    kp_nodes: dict[str, str] = {}
    lp_node_map: dict[str, str] = {}
    for n in l_prime.sorted_nodes:
        count = rng.choice([0, 1, 1, 1, 2])
        if n in t_l.node_map.values() and count == 0 and rng.random() < 0.7:
            count = 1  # keep most of the pattern alive so matches do something
        copies[n] = []
        for i in range(count):
            ident = f"k_{n}_{i}"
            copies[n].append(ident)
            kp_nodes[ident] = rng.choice(labels_leq(lat, l_prime.node_labels[n]))
            lp_node_map[ident] = n
    kp_edges: dict[str, tuple[str, str, str]] = {}
    lp_edge_map: dict[str, str] = {}
    for e in l_prime.sorted_edges:
        for s_copy in copies[l_prime.src[e]]:
            for t_copy in copies[l_prime.tgt[e]]:
                if rng.random() < 0.7:
                    ident = f"k_{e}_{s_copy}_{t_copy}"
                    kp_edges[ident] = (s_copy, t_copy,
                                       rng.choice(labels_leq(lat, l_prime.edge_labels[e])))
                    lp_edge_map[ident] = e
    k_prime = LabeledGraph.build(lat, kp_nodes, kp_edges)
    l_prime_map = GraphMorphism(k_prime, l_prime, lp_node_map, lp_edge_map)

    interface = preimage(t_l, l_prime_map).graph
    merge_groups = []
    k_node_ids = list(interface.sorted_nodes)
    if len(k_node_ids) >= 2 and rng.random() < 0.5:
        merge_groups.append(tuple(rng.sample(k_node_ids, 2)))
    fresh_nodes = {}
    fresh_edges = {}
    if rng.random() < 0.5:
        fresh_nodes["f0"] = rng.choice(lat.sorted_elements())
        anchors = k_node_ids + ["f0"]
        if rng.random() < 0.5:
            fresh_edges["fe0"] = (rng.choice(anchors), rng.choice(anchors),
                                  rng.choice(lat.sorted_elements()))
    spec = RhsSpec(merge_nodes=tuple(merge_groups),
                   fresh_nodes=fresh_nodes, fresh_edges=fresh_edges)
    return complete_rule(pattern, t_l, l_prime_map, spec, name="random")


def random_host_with_match(rng: random.Random, rule) -> tuple[LabeledGraph, Match]:
    """A host plus a strong match, built by instantiating the typed pattern
    exactly once and hanging context off the context part of the type."""
    lat = rule.L.lattice
    pattern, l_prime, t_l = rule.L, rule.Lp, rule.tL
    nodes: dict[str, str] = {}
    m_nodes: dict[str, str] = {}
    alpha_nodes: dict[str, str] = {}
    for l in pattern.sorted_nodes:
        hid = f"h_{l}"
        lo = pattern.node_labels[l]
        hi = l_prime.node_labels[t_l.node_map[l]]
        options = [x for x in labels_geq(lat, lo) if lat.leq(x, hi)]
        nodes[hid] = rng.choice(options)
        m_nodes[l] = hid
        alpha_nodes[hid] = t_l.node_map[l]
    pattern_node_images = set(t_l.node_map.values())
    ctx_nodes = [n for n in l_prime.sorted_nodes if n not in pattern_node_images]
    for i in range(rng.randint(0, 3)):
        if not ctx_nodes:
            break
        target = rng.choice(ctx_nodes)
        hid = f"hc{i}"
        nodes[hid] = rng.choice(labels_leq(lat, l_prime.node_labels[target]))
        alpha_nodes[hid] = target
    edges: dict[str, tuple[str, str, str]] = {}
    m_edges: dict[str, str] = {}
    alpha_edges: dict[str, str] = {}
    for e in pattern.sorted_edges:
        hid = f"h_{e}"
        lo = pattern.edge_labels[e]
        hi = l_prime.edge_labels[t_l.edge_map[e]]
        options = [x for x in labels_geq(lat, lo) if lat.leq(x, hi)]
        edges[hid] = (m_nodes[pattern.src[e]], m_nodes[pattern.tgt[e]],
                      rng.choice(options))
        m_edges[e] = hid
        alpha_edges[hid] = t_l.edge_map[e]
    pattern_edge_images = set(t_l.edge_map.values())
    ctx_edges = [e for e in l_prime.sorted_edges if e not in pattern_edge_images]
    for j in range(rng.randint(0, 4)):
        if not ctx_edges:
            break
        te = rng.choice(ctx_edges)
        s_opts = sorted(h for h, t in alpha_nodes.items() if t == l_prime.src[te])
        t_opts = sorted(h for h, t in alpha_nodes.items() if t == l_prime.tgt[te])
        if not s_opts or not t_opts:
            continue
        hid = f"hce{j}"
        edges[hid] = (rng.choice(s_opts), rng.choice(t_opts),
                      rng.choice(labels_leq(lat, l_prime.edge_labels[te])))
        alpha_edges[hid] = te
    host = LabeledGraph.build(lat, nodes, edges)
    m = GraphMorphism(pattern, host, m_nodes, m_edges)
    alpha = GraphMorphism(host, l_prime, alpha_nodes, alpha_edges)
    return host, Match(m=m, alpha=alpha, typing=t_l)


def permute_ids(rng: random.Random, g: LabeledGraph) -> GraphMorphism:
    """Isomorphism onto a copy of ``g`` with shuffled ids."""
    node_ids = list(g.sorted_nodes)
    edge_ids = list(g.sorted_edges)
    new_nodes = [f"q{i}" for i in range(len(node_ids))]
    new_edges = [f"qe{i}" for i in range(len(edge_ids))]
    rng.shuffle(new_nodes)
    rng.shuffle(new_edges)
    node_map = dict(zip(node_ids, new_nodes))
    edge_map = dict(zip(edge_ids, new_edges))
    return GraphMorphism(g, g.rename(node_map, edge_map), node_map, edge_map)


def random_truth_table(rng: random.Random, variables: list[str]):
    from pbpoplus import TruthTable

    bits = "".join(rng.choice("01") for _ in range(2 ** len(variables)))
    return TruthTable.from_bits(bits, variables)
