"""Lattice-labeled directed multigraphs and their morphisms.

Graphs are immutable values: node and edge identifiers are opaque strings,
every element carries a label from a shared :class:`~pbpoplus.lattice.LabelLattice`,
and parallel edges are first-class.  A morphism maps nodes to nodes and
edges to edges so that sources and targets commute and labels never
decrease: ``label_dom(x) <= label_cod(f(x))``.  Under this direction the
pattern of a rule gives lower bounds on host labels and the context type
gives upper bounds, pullbacks label elements with meets, and pushouts with
joins.

Unlabeled rewriting is the special case of the one-point lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import LatticeError, MorphismError, Report
from .lattice import LabelLattice


@dataclass(frozen=True)
class LabeledGraph:
    lattice: LabelLattice
    nodes: frozenset[str]
    edges: frozenset[str]
    src: dict[str, str]
    tgt: dict[str, str]
    node_labels: dict[str, str]
    edge_labels: dict[str, str]

    @staticmethod
    def build(lattice: LabelLattice,
              nodes: Mapping[str, str],
              edges: Mapping[str, tuple[str, str, str]] | None = None) -> "LabeledGraph":
        """Convenience constructor: ``nodes`` maps id -> label and ``edges``
        maps id -> (src, tgt, label)."""
        edges = edges or {}
        return LabeledGraph(
            lattice=lattice,
            nodes=frozenset(nodes),
            edges=frozenset(edges),
            src={e: s for e, (s, _, _) in edges.items()},
            tgt={e: t for e, (_, t, _) in edges.items()},
            node_labels=dict(nodes),
            edge_labels={e: lab for e, (_, _, lab) in edges.items()},
        )

    @staticmethod
    def empty(lattice: LabelLattice) -> "LabeledGraph":
        return LabeledGraph.build(lattice, {}, {})

    @cached_property
    def sorted_nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.nodes))

    @cached_property
    def sorted_edges(self) -> tuple[str, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def out_edges(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.sorted_edges:
            s = self.src[e]
            if s in out:
                out[s].append(e)
        return {n: tuple(es) for n, es in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.sorted_edges:
            t = self.tgt[e]
            if t in inc:
                inc[t].append(e)
        return {n: tuple(es) for n, es in inc.items()}

    @cached_property
    def edges_by_endpoints(self) -> dict[tuple[str, str], tuple[str, ...]]:
        by_ends: dict[tuple[str, str], list[str]] = {}
        for e in self.sorted_edges:
            by_ends.setdefault((self.src[e], self.tgt[e]), []).append(e)
        return {k: tuple(v) for k, v in by_ends.items()}

    def edges_between(self, s: str, t: str) -> tuple[str, ...]:
        return self.edges_by_endpoints.get((s, t), ())

    @cached_property
    def incident_edges(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.sorted_edges:
            inc[self.src[e]].append(e)
            if self.tgt[e] != self.src[e]:
                inc[self.tgt[e]].append(e)
        return {n: tuple(es) for n, es in inc.items()}

    def rename(self, node_map: Mapping[str, str],
               edge_map: Mapping[str, str]) -> "LabeledGraph":
        """Rewrite all identifiers through the given bijective maps."""
        nm = {n: node_map.get(n, n) for n in self.nodes}
        em = {e: edge_map.get(e, e) for e in self.edges}
        if len(set(nm.values())) != len(nm) or len(set(em.values())) != len(em):
            raise MorphismError("renaming must be injective")
        return LabeledGraph(
            lattice=self.lattice,
            nodes=frozenset(nm.values()),
            edges=frozenset(em.values()),
            src={em[e]: nm[self.src[e]] for e in self.edges},
            tgt={em[e]: nm[self.tgt[e]] for e in self.edges},
            node_labels={nm[n]: self.node_labels[n] for n in self.nodes},
            edge_labels={em[e]: self.edge_labels[e] for e in self.edges},
        )


@dataclass(frozen=True)
class GraphMorphism:
    dom: LabeledGraph
    cod: LabeledGraph
    node_map: dict[str, str]
    edge_map: dict[str, str]

    def is_injective(self) -> bool:
        return (len(set(self.node_map.values())) == len(self.node_map)
                and len(set(self.edge_map.values())) == len(self.edge_map))

    def node_image(self) -> frozenset[str]:
        return frozenset(self.node_map.values())

    def edge_image(self) -> frozenset[str]:
        return frozenset(self.edge_map.values())


def identity(g: LabeledGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {n: n for n in g.nodes}, {e: e for e in g.edges})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """Apply ``f`` first, then ``g`` (diagrammatic order)."""
    if f.cod != g.dom:
        raise MorphismError("domain-mismatch: cod of first must be dom of second")
    return GraphMorphism(
        dom=f.dom,
        cod=g.cod,
        node_map={n: g.node_map[v] for n, v in f.node_map.items()},
        edge_map={e: g.edge_map[v] for e, v in f.edge_map.items()},
    )


def validate_graph(g: LabeledGraph) -> Report:
    """Report dangling endpoints, missing labels, and foreign labels."""
    report = Report()
    for e in g.sorted_edges:
        if e not in g.src or g.src[e] not in g.nodes:
            report.add("dangling-endpoint", f"edge {e!r} has no source in the graph")
        if e not in g.tgt or g.tgt[e] not in g.nodes:
            report.add("dangling-endpoint", f"edge {e!r} has no target in the graph")
    for n in g.sorted_nodes:
        lab = g.node_labels.get(n)
        if lab is None:
            report.add("missing-label", f"node {n!r} has no label")
        elif lab not in g.lattice.elements:
            report.add("label-domain", f"node {n!r} labeled {lab!r} outside the lattice")
    for e in g.sorted_edges:
        lab = g.edge_labels.get(e)
        if lab is None:
            report.add("missing-label", f"edge {e!r} has no label")
        elif lab not in g.lattice.elements:
            report.add("label-domain", f"edge {e!r} labeled {lab!r} outside the lattice")
    clash = g.nodes & g.edges
    if clash:
        report.add("id-clash", f"ids used for both nodes and edges: {sorted(clash)}")
    return report


def validate_morphism(f: GraphMorphism) -> Report:
    """Report commutation failures and label-condition failures by element."""
    report = Report()
    if f.dom.lattice != f.cod.lattice:
        report.add("lattice-mismatch", "dom and cod use different lattices")
        return report
    leq = f.dom.lattice.leq
    for n in f.dom.sorted_nodes:
        v = f.node_map.get(n)
        if v is None:
            report.add("unmapped-node", f"node {n!r} has no image")
        elif v not in f.cod.nodes:
            report.add("bad-target", f"node {n!r} maps to unknown node {v!r}")
        elif not leq(f.dom.node_labels[n], f.cod.node_labels[v]):
            report.add("label-condition",
                       f"node {n!r}: {f.dom.node_labels[n]!r} is not below "
                       f"{f.cod.node_labels[v]!r} at {v!r}")
    for e in f.dom.sorted_edges:
        img = f.edge_map.get(e)
        if img is None:
            report.add("unmapped-edge", f"edge {e!r} has no image")
            continue
        if img not in f.cod.edges:
            report.add("bad-target", f"edge {e!r} maps to unknown edge {img!r}")
            continue
        s_img = f.node_map.get(f.dom.src[e])
        t_img = f.node_map.get(f.dom.tgt[e])
        if s_img is not None and f.cod.src[img] != s_img:
            report.add("source-commutation",
                       f"edge {e!r}: image source {f.cod.src[img]!r} differs "
                       f"from mapped source {s_img!r}")
        if t_img is not None and f.cod.tgt[img] != t_img:
            report.add("target-commutation",
                       f"edge {e!r}: image target {f.cod.tgt[img]!r} differs "
                       f"from mapped target {t_img!r}")
        if not leq(f.dom.edge_labels[e], f.cod.edge_labels[img]):
            report.add("label-condition",
                       f"edge {e!r}: {f.dom.edge_labels[e]!r} is not below "
                       f"{f.cod.edge_labels[img]!r} at {img!r}")
    extra_nodes = set(f.node_map) - f.dom.nodes
    extra_edges = set(f.edge_map) - f.dom.edges
    if extra_nodes:
        report.add("bad-domain", f"map defined on foreign nodes {sorted(extra_nodes)}")
    if extra_edges:
        report.add("bad-domain", f"map defined on foreign edges {sorted(extra_edges)}")
    return report


def _node_signature(g: LabeledGraph, n: str) -> tuple:
    out_labels = tuple(sorted(g.edge_labels[e] for e in g.out_edges[n]))
    in_labels = tuple(sorted(g.edge_labels[e] for e in g.in_edges[n]))
    return (g.node_labels[n], out_labels, in_labels)


def _label_counts(labels: Iterable[str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    return counts


def is_isomorphic(g: LabeledGraph, h: LabeledGraph) -> Optional[GraphMorphism]:
    """Search for a label-preserving structure-preserving bijection.

    Exhaustive backtracking with label and degree pruning; intended for
    graphs up to a few dozen nodes.  Returns a witness morphism or ``None``.
    """
    if g.lattice != h.lattice:
        raise LatticeError("isomorphism check needs a shared lattice")
    if len(g.nodes) != len(h.nodes) or len(g.edges) != len(h.edges):
        return None
    g_sigs = sorted(_node_signature(g, n) for n in g.nodes)
    h_sigs = sorted(_node_signature(h, n) for n in h.nodes)
    if g_sigs != h_sigs:
        return None

    h_by_sig: dict[tuple, list[str]] = {}
    for n in h.sorted_nodes:
        h_by_sig.setdefault(_node_signature(h, n), []).append(n)
    # Most-constrained first: rarest signature, then id for determinism.
    order = sorted(g.sorted_nodes,
                   key=lambda n: (len(h_by_sig[_node_signature(g, n)]), n))

    assignment: dict[str, str] = {}
    used: set[str] = set()

    def consistent(n: str, cand: str) -> bool:
        for m_node, m_img in assignment.items():
            for (a, b, x, y) in ((n, m_node, cand, m_img), (m_node, n, m_img, cand)):
                g_counts = _label_counts(g.edge_labels[e] for e in g.edges_between(a, b))
                h_counts = _label_counts(h.edge_labels[e] for e in h.edges_between(x, y))
                if g_counts != h_counts:
                    return False
        g_loop = _label_counts(g.edge_labels[e] for e in g.edges_between(n, n))
        h_loop = _label_counts(h.edge_labels[e] for e in h.edges_between(cand, cand))
        return g_loop == h_loop

    def extend(i: int) -> Optional[dict[str, str]]:
        if i == len(order):
            return dict(assignment)
        n = order[i]
        for cand in h_by_sig[_node_signature(g, n)]:
            if cand in used or not consistent(n, cand):
                continue
            assignment[n] = cand
            used.add(cand)
            found = extend(i + 1)
            if found is not None:
                return found
            del assignment[n]
            used.discard(cand)
        return None

    node_map = extend(0)
    if node_map is None:
        return None

    # With the node bijection fixed, parallel edges with equal endpoints and
    # equal label are interchangeable; pair them off in sorted order.
    edge_map: dict[str, str] = {}
    g_groups: dict[tuple[str, str, str], list[str]] = {}
    for e in g.sorted_edges:
        key = (node_map[g.src[e]], node_map[g.tgt[e]], g.edge_labels[e])
        g_groups.setdefault(key, []).append(e)
    h_groups: dict[tuple[str, str, str], list[str]] = {}
    for e in h.sorted_edges:
        key = (h.src[e], h.tgt[e], h.edge_labels[e])
        h_groups.setdefault(key, []).append(e)
    if set(g_groups) != set(h_groups):
        return None
    for key, g_es in g_groups.items():
        h_es = h_groups[key]
        if len(g_es) != len(h_es):
            return None
        edge_map.update(zip(g_es, h_es))
    return GraphMorphism(g, h, node_map, edge_map)


@dataclass(frozen=True)
class DisjointUnion:
    graph: LabeledGraph
    left: GraphMorphism
    right: GraphMorphism


def disjoint_union(g: LabeledGraph, h: LabeledGraph) -> DisjointUnion:
    """Tagged union with fresh ids; the two injections are recorded."""
    if g.lattice != h.lattice:
        raise LatticeError("disjoint union needs a shared lattice")
    tag_g = {n: f"0:{n}" for n in g.nodes}
    tag_ge = {e: f"0:{e}" for e in g.edges}
    tag_h = {n: f"1:{n}" for n in h.nodes}
    tag_he = {e: f"1:{e}" for e in h.edges}
    union = LabeledGraph(
        lattice=g.lattice,
        nodes=frozenset(tag_g.values()) | frozenset(tag_h.values()),
        edges=frozenset(tag_ge.values()) | frozenset(tag_he.values()),
        src={**{tag_ge[e]: tag_g[g.src[e]] for e in g.edges},
             **{tag_he[e]: tag_h[h.src[e]] for e in h.edges}},
        tgt={**{tag_ge[e]: tag_g[g.tgt[e]] for e in g.edges},
             **{tag_he[e]: tag_h[h.tgt[e]] for e in h.edges}},
        node_labels={**{tag_g[n]: g.node_labels[n] for n in g.nodes},
                     **{tag_h[n]: h.node_labels[n] for n in h.nodes}},
        edge_labels={**{tag_ge[e]: g.edge_labels[e] for e in g.edges},
                     **{tag_he[e]: h.edge_labels[e] for e in h.edges}},
    )
    return DisjointUnion(
        graph=union,
        left=GraphMorphism(g, union, tag_g, tag_ge),
        right=GraphMorphism(h, union, tag_h, tag_he),
    )
