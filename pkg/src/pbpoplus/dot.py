"""DOT export for graphs and rewrite traces.

Nodes show ``id: label``; edges show their label, rendered dashed for the
``0`` decision label so BDD pictures read the usual way.  A trace becomes
one cluster per diagram object with morphism arrows drawn as dotted
inter-cluster edges.
"""

from __future__ import annotations

from .graph import GraphMorphism, LabeledGraph
from .lattice import FALSE
from .rewriting import RewriteTrace


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_stmt(g: LabeledGraph, n: str, prefix: str = "", indent: str = "  ") -> str:
    return (f"{indent}{_quote(prefix + n)} "
            f"[label={_quote(f'{n}: {g.node_labels[n]}')}];")


def _edge_stmt(g: LabeledGraph, e: str, prefix: str = "", indent: str = "  ") -> str:
    style = ", style=dashed" if g.edge_labels[e] == FALSE else ""
    return (f"{indent}{_quote(prefix + g.src[e])} -> {_quote(prefix + g.tgt[e])} "
            f"[label={_quote(g.edge_labels[e])}{style}];")


def graph_to_dot(g: LabeledGraph, name: str = "G") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    for n in g.sorted_nodes:
        lines.append(_node_stmt(g, n))
    for e in g.sorted_edges:
        lines.append(_edge_stmt(g, e))
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_dot(trace: RewriteTrace) -> str:
    """All eight diagram objects as clusters, plus the node maps of the six
    boundary morphisms as dotted arrows."""
    rule = trace.rule
    objects = [
        ("L", rule.L), ("K", rule.K), ("R", rule.R),
        ("Lp", rule.Lp), ("Kp", rule.Kp),
        ("G_L", trace.g_in), ("G_K", trace.g_mid), ("G_R", trace.g_out),
    ]
    lines = ['digraph "trace" {', "  compound=true;"]
    for tag, g in objects:
        lines.append(f"  subgraph {_quote('cluster_' + tag)} {{")
        lines.append(f"    label={_quote(tag)};")
        for n in g.sorted_nodes:
            lines.append(_node_stmt(g, n, prefix=tag + "/", indent="    "))
        for e in g.sorted_edges:
            lines.append(_edge_stmt(g, e, prefix=tag + "/", indent="    "))
        lines.append("  }")
    arrows = [
        ("m", trace.m, "L", "G_L"),
        ("alpha", trace.alpha, "G_L", "Lp"),
        ("g_L", trace.g_l, "G_K", "G_L"),
        ("g_R", trace.g_r, "G_K", "G_R"),
        ("u", trace.u, "K", "G_K"),
        ("u'", trace.u_prime, "G_K", "Kp"),
        ("w", trace.w, "R", "G_R"),
    ]
    for name, mor, dom_tag, cod_tag in arrows:
        for n in sorted(mor.node_map):
            lines.append(
                f"  {_quote(dom_tag + '/' + n)} -> "
                f"{_quote(cod_tag + '/' + mor.node_map[n])} "
                f"[label={_quote(name)}, style=dotted, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(obj: LabeledGraph | RewriteTrace | GraphMorphism, name: str = "G") -> str:
    if isinstance(obj, RewriteTrace):
        return trace_to_dot(obj)
    if isinstance(obj, LabeledGraph):
        return graph_to_dot(obj, name)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")
