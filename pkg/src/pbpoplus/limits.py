"""Pushouts, pullbacks, preimages, and square verification.

The pullback of a cospan is the fibered product computed independently on
nodes and edges: all pairs ``(x, y)`` whose images in the shared target
coincide, labeled with the meet of the component labels.  Constructed ids
render the pair as ``"x|y"``.

The pushout of a span is the disjoint union of the two feet quotiented by
the equivalence generated by identifying the two images of each apex
element, labeled with the join of each class.  Constructed ids are the
smallest tagged member of the class (``"0:x"`` for the left foot, ``"1:y"``
for the right), which keeps results deterministic and traceable.

``is_pullback_square``/``is_pushout_square`` decide the universal property
by building the canonical limit and checking that the forced mediating
morphism to (or from) the given corner is an isomorphism.  The exhaustive
mediator enumeration used by the verification suite is available through
:func:`enumerate_mediators`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import MorphismError, NonCommutingSquareError, SquareError
from .graph import GraphMorphism, LabeledGraph, compose, validate_morphism


@dataclass(frozen=True)
class Span:
    """Two morphisms out of a shared apex."""

    left: GraphMorphism
    right: GraphMorphism

    def __post_init__(self) -> None:
        if self.left.dom != self.right.dom:
            raise SquareError("invalid-span: the two morphisms have different domains")


@dataclass(frozen=True)
class Cospan:
    """Two morphisms into a shared target."""

    left: GraphMorphism
    right: GraphMorphism

    def __post_init__(self) -> None:
        if self.left.cod != self.right.cod:
            raise SquareError("invalid-cospan: the two morphisms have different codomains")


@dataclass(frozen=True)
class LimitResult:
    object: LabeledGraph
    left_leg: GraphMorphism
    right_leg: GraphMorphism
    # Constructed id -> origin: an (x, y) pair for pullbacks, a tuple of
    # (side, id) members for pushout classes.
    node_naming: dict[str, tuple]
    edge_naming: dict[str, tuple]


def _require_valid(kind: str, f: GraphMorphism, name: str) -> None:
    report = validate_morphism(f)
    if not report.ok:
        raise SquareError(f"invalid-{kind}: morphism {name} is invalid: {report}")


def pair_id(x: str, y: str) -> str:
    return f"{x}|{y}"


def pullback(c: Cospan) -> LimitResult:
    """Fibered product of the cospan, with projection legs."""
    f, g = c.left, c.right
    _require_valid("cospan", f, "left")
    _require_valid("cospan", g, "right")
    B, C = f.dom, g.dom
    lat = B.lattice
    meet = lat.meet

    node_naming: dict[str, tuple] = {}
    node_labels: dict[str, str] = {}
    left_nodes: dict[str, str] = {}
    right_nodes: dict[str, str] = {}
    for b in B.sorted_nodes:
        fb = f.node_map[b]
        for cn in C.sorted_nodes:
            if g.node_map[cn] == fb:
                nid = pair_id(b, cn)
                node_naming[nid] = (b, cn)
                node_labels[nid] = meet([B.node_labels[b], C.node_labels[cn]])
                left_nodes[nid] = b
                right_nodes[nid] = cn

    edge_naming: dict[str, tuple] = {}
    edge_labels: dict[str, str] = {}
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    left_edges: dict[str, str] = {}
    right_edges: dict[str, str] = {}
    for eb in B.sorted_edges:
        feb = f.edge_map[eb]
        for ec in C.sorted_edges:
            if g.edge_map[ec] == feb:
                eid = pair_id(eb, ec)
                edge_naming[eid] = (eb, ec)
                edge_labels[eid] = meet([B.edge_labels[eb], C.edge_labels[ec]])
                src[eid] = pair_id(B.src[eb], C.src[ec])
                tgt[eid] = pair_id(B.tgt[eb], C.tgt[ec])
                left_edges[eid] = eb
                right_edges[eid] = ec

    obj = LabeledGraph(
        lattice=lat,
        nodes=frozenset(node_naming),
        edges=frozenset(edge_naming),
        src=src,
        tgt=tgt,
        node_labels=node_labels,
        edge_labels=edge_labels,
    )
    left_leg = GraphMorphism(obj, B, left_nodes, left_edges)
    right_leg = GraphMorphism(obj, C, right_nodes, right_edges)

    # Monomorphisms are stable under pullback; a violation is an engine bug.
    if g.is_injective():
        assert left_leg.is_injective(), "pullback of an injective leg lost injectivity"
    if f.is_injective():
        assert right_leg.is_injective(), "pullback of an injective leg lost injectivity"
    return LimitResult(obj, left_leg, right_leg, node_naming, edge_naming)


class _UnionFind:
    def __init__(self, items) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Keep the smaller tag as root so representatives are canonical.
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _rendered(member: tuple[str, str]) -> str:
    side, ident = member
    return f"{side}:{ident}"


def pushout(s: Span) -> LimitResult:
    """Quotient of the disjoint union of the feet along the shared apex."""
    f, g = s.left, s.right
    _require_valid("span", f, "left")
    _require_valid("span", g, "right")
    A = f.dom
    B, C = f.cod, g.cod
    lat = B.lattice
    join = lat.join

    node_items = [("0", n) for n in B.sorted_nodes] + [("1", n) for n in C.sorted_nodes]
    edge_items = [("0", e) for e in B.sorted_edges] + [("1", e) for e in C.sorted_edges]
    nodes_uf = _UnionFind(node_items)
    edges_uf = _UnionFind(edge_items)
    for a in A.sorted_nodes:
        nodes_uf.union(("0", f.node_map[a]), ("1", g.node_map[a]))
    for e in A.sorted_edges:
        edges_uf.union(("0", f.edge_map[e]), ("1", g.edge_map[e]))

    def label_of(member: tuple[str, str], is_edge: bool) -> str:
        side, ident = member
        foot = B if side == "0" else C
        return foot.edge_labels[ident] if is_edge else foot.node_labels[ident]

    node_rep: dict[tuple[str, str], str] = {}
    node_naming: dict[str, tuple] = {}
    node_labels: dict[str, str] = {}
    for root, members in nodes_uf.classes().items():
        members = sorted(members)
        rep = _rendered(members[0])
        node_naming[rep] = tuple(members)
        node_labels[rep] = join(label_of(m, is_edge=False) for m in members)
        for m in members:
            node_rep[m] = rep

    edge_rep: dict[tuple[str, str], str] = {}
    edge_naming: dict[str, tuple] = {}
    edge_labels: dict[str, str] = {}
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    for root, members in edges_uf.classes().items():
        members = sorted(members)
        rep = _rendered(members[0])
        edge_naming[rep] = tuple(members)
        edge_labels[rep] = join(label_of(m, is_edge=True) for m in members)
        side, ident = members[0]
        foot = B if side == "0" else C
        src[rep] = node_rep[(side, foot.src[ident])]
        tgt[rep] = node_rep[(side, foot.tgt[ident])]
        for m in members:
            edge_rep[m] = rep

    obj = LabeledGraph(
        lattice=lat,
        nodes=frozenset(node_naming),
        edges=frozenset(edge_naming),
        src=src,
        tgt=tgt,
        node_labels=node_labels,
        edge_labels=edge_labels,
    )
    left_leg = GraphMorphism(
        B, obj,
        {n: node_rep[("0", n)] for n in B.nodes},
        {e: edge_rep[("0", e)] for e in B.edges})
    right_leg = GraphMorphism(
        C, obj,
        {n: node_rep[("1", n)] for n in C.nodes},
        {e: edge_rep[("1", e)] for e in C.edges})
    return LimitResult(obj, left_leg, right_leg, node_naming, edge_naming)


@dataclass(frozen=True)
class PreimageResult:
    graph: LabeledGraph
    inclusion: GraphMorphism   # into dom(f), named by dom(f) ids
    projection: GraphMorphism  # onto dom(t)


def preimage(t: GraphMorphism, f: GraphMorphism) -> PreimageResult:
    """Subgraph of ``dom(f)`` that ``f`` maps onto the image of injective ``t``.

    Computed as the pullback of the cospan ``(t, f)``; since ``t`` is
    injective the pairs are keyed by their second component, so the result
    is named by ``dom(f)`` ids.  Labels are meets, which can sit strictly
    below the ``dom(f)`` labels.
    """
    if not t.is_injective():
        raise MorphismError("not-injective: preimage needs an injective typing")
    if t.cod != f.cod:
        raise MorphismError("domain-mismatch: preimage needs a shared codomain")
    pb = pullback(Cospan(t, f))
    node_map = {nid: pb.node_naming[nid][1] for nid in pb.object.nodes}
    edge_map = {eid: pb.edge_naming[eid][1] for eid in pb.object.edges}
    renamed = pb.object.rename(node_map, edge_map)
    inclusion = GraphMorphism(
        renamed, f.dom,
        {v: v for v in renamed.nodes},
        {e: e for e in renamed.edges})
    projection = GraphMorphism(
        renamed, t.dom,
        {node_map[nid]: pb.node_naming[nid][0] for nid in pb.object.nodes},
        {edge_map[eid]: pb.edge_naming[eid][0] for eid in pb.object.edges})
    return PreimageResult(renamed, inclusion, projection)


def _maps_equal(f: GraphMorphism, g: GraphMorphism) -> bool:
    return f.node_map == g.node_map and f.edge_map == g.edge_map


def is_pullback_square(c: Cospan, s: Span) -> bool:
    """Whether the span closes the cospan as a genuine pullback square.

    The span supplies the candidate corner and its two legs ``(A -> B,
    A -> C)``; the cospan is ``(B -> D, C -> D)``.  Raises on a
    non-commuting square, which is distinct from a negative answer.
    """
    p, q = s.left, s.right
    f, g = c.left, c.right
    if p.cod != f.dom or q.cod != g.dom:
        raise SquareError("square legs do not line up with the cospan")
    if not _maps_equal(compose(p, f), compose(q, g)):
        raise NonCommutingSquareError("candidate square does not commute")
    canon = pullback(c)
    pair_index = {v: k for k, v in canon.node_naming.items()}
    pair_eindex = {v: k for k, v in canon.edge_naming.items()}
    A = p.dom
    node_map = {}
    for a in A.nodes:
        node_map[a] = pair_index[(p.node_map[a], q.node_map[a])]
    edge_map = {}
    for e in A.edges:
        edge_map[e] = pair_eindex[(p.edge_map[e], q.edge_map[e])]
    # The forced mediator is always label-compatible; the corner is a
    # pullback exactly when it is bijective and label-exact.
    if len(set(node_map.values())) != len(canon.object.nodes) or len(node_map) != len(A.nodes):
        return False
    if len(set(edge_map.values())) != len(canon.object.edges) or len(edge_map) != len(A.edges):
        return False
    for a, img in node_map.items():
        if A.node_labels[a] != canon.object.node_labels[img]:
            return False
    for e, img in edge_map.items():
        if A.edge_labels[e] != canon.object.edge_labels[img]:
            return False
    return True


def is_pushout_square(s: Span, c: Cospan) -> bool:
    """Whether the cospan closes the span as a genuine pushout square."""
    f, g = s.left, s.right
    p, q = c.left, c.right
    if f.cod != p.dom or g.cod != q.dom:
        raise SquareError("square legs do not line up with the span")
    if not _maps_equal(compose(f, p), compose(g, q)):
        raise NonCommutingSquareError("candidate square does not commute")
    canon = pushout(s)
    D = p.cod

    def forced_image(members: tuple, for_edges: bool) -> Optional[str]:
        value: Optional[str] = None
        for side, ident in members:
            leg = p if side == "0" else q
            img = (leg.edge_map if for_edges else leg.node_map)[ident]
            if value is None:
                value = img
            elif value != img:
                return None
        return value

    node_map = {}
    for rep, members in canon.node_naming.items():
        img = forced_image(members, for_edges=False)
        assert img is not None, "commuting cospan disagrees on a pushout class"
        node_map[rep] = img
    edge_map = {}
    for rep, members in canon.edge_naming.items():
        img = forced_image(members, for_edges=True)
        assert img is not None, "commuting cospan disagrees on a pushout class"
        edge_map[rep] = img

    if len(set(node_map.values())) != len(D.nodes) or len(node_map) != len(D.nodes):
        return False
    if len(set(edge_map.values())) != len(D.edges) or len(edge_map) != len(D.edges):
        return False
    for rep, img in node_map.items():
        if canon.object.node_labels[rep] != D.node_labels[img]:
            return False
    for rep, img in edge_map.items():
        if canon.object.edge_labels[rep] != D.edge_labels[img]:
            return False
    return True


def enumerate_mediators(dom: LabeledGraph,
                        cod: LabeledGraph,
                        pre: list[tuple[GraphMorphism, GraphMorphism]] = (),
                        post: list[tuple[GraphMorphism, GraphMorphism]] = (),
                        limit: Optional[int] = None) -> list[GraphMorphism]:
    """Exhaustively enumerate morphisms ``x : dom -> cod`` under equations.

    ``pre`` entries ``(p, q)`` require ``x . p = q`` (with ``p`` into
    ``dom``); ``post`` entries ``(p, q)`` require ``p . x = q`` (with ``p``
    out of ``cod``).  Used by the verification suite to confirm existence
    and uniqueness of mediating morphisms; the equations prune the search
    without sacrificing exhaustiveness.
    """
    leq = dom.lattice.leq
    forced_nodes: dict[str, str] = {}
    forced_edges: dict[str, str] = {}
    for p_m, q_m in pre:
        for a in p_m.dom.nodes:
            key, val = p_m.node_map[a], q_m.node_map[a]
            if forced_nodes.setdefault(key, val) != val:
                return []
        for e in p_m.dom.edges:
            key, val = p_m.edge_map[e], q_m.edge_map[e]
            if forced_edges.setdefault(key, val) != val:
                return []

    def node_candidates(n: str) -> list[str]:
        if n in forced_nodes:
            cands = [forced_nodes[n]]
        else:
            cands = list(cod.sorted_nodes)
        out = []
        for c in cands:
            if c not in cod.nodes:
                return []
            if not leq(dom.node_labels[n], cod.node_labels[c]):
                continue
            if any(p_m.node_map[c] != q_m.node_map[n] for p_m, q_m in post):
                continue
            out.append(c)
        return out

    def edge_candidates(e: str, node_map: dict[str, str]) -> list[str]:
        s_img, t_img = node_map[dom.src[e]], node_map[dom.tgt[e]]
        if e in forced_edges:
            cands = [forced_edges[e]]
        else:
            cands = list(cod.sorted_edges)
        out = []
        for c in cands:
            if c not in cod.edges:
                return []
            if cod.src[c] != s_img or cod.tgt[c] != t_img:
                continue
            if not leq(dom.edge_labels[e], cod.edge_labels[c]):
                continue
            if any(p_m.edge_map[c] != q_m.edge_map[e] for p_m, q_m in post):
                continue
            out.append(c)
        return out

    results: list[GraphMorphism] = []
    nodes = list(dom.sorted_nodes)
    edges = list(dom.sorted_edges)

    def assign_edges(i: int, node_map: dict[str, str], edge_map: dict[str, str]) -> bool:
        if limit is not None and len(results) >= limit:
            return True
        if i == len(edges):
            results.append(GraphMorphism(dom, cod, dict(node_map), dict(edge_map)))
            return limit is not None and len(results) >= limit
        e = edges[i]
        for c in edge_candidates(e, node_map):
            edge_map[e] = c
            if assign_edges(i + 1, node_map, edge_map):
                return True
            del edge_map[e]
        return False

    def assign_nodes(i: int, node_map: dict[str, str]) -> bool:
        if i == len(nodes):
            return assign_edges(0, node_map, {})
        n = nodes[i]
        for c in node_candidates(n):
            node_map[n] = c
            # Prune: any edge with both endpoints placed needs a target edge.
            ok = True
            for e in edges:
                if dom.src[e] in node_map and dom.tgt[e] in node_map:
                    if not edge_candidates(e, node_map):
                        ok = False
                        break
            if ok and assign_nodes(i + 1, node_map):
                return True
            del node_map[n]
        return False

    assign_nodes(0, {})
    return results


def pushout_mediators(result: LimitResult, candidate: Cospan,
                      limit: Optional[int] = None) -> list[GraphMorphism]:
    """All morphisms from a computed pushout to a competing cospan target."""
    return enumerate_mediators(
        result.object, candidate.left.cod,
        pre=[(result.left_leg, candidate.left), (result.right_leg, candidate.right)],
        limit=limit)


def pullback_mediators(result: LimitResult, candidate: Span,
                       limit: Optional[int] = None) -> list[GraphMorphism]:
    """All morphisms from a competing span apex into a computed pullback."""
    return enumerate_mediators(
        candidate.left.dom, result.object,
        post=[(result.left_leg, candidate.left), (result.right_leg, candidate.right)],
        limit=limit)
