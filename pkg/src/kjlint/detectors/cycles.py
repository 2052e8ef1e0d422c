"""Strongly connected components and the circular-reference detector."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from kjlint.dependencies import DependencyEdge, DependencyGraph
from kjlint.detectors.config import DetectorConfig
from kjlint.detectors.findings import Finding, Related, Smell
from kjlint.source import SourceRange


def tarjan_scc(nodes: Iterable[str], adj: Mapping[str, Iterable[str]]) -> list[list[str]]:
    """Strongly connected components, iteratively (no recursion limit).

    Each component is sorted; components come out in reverse topological order
    of the condensation, with nodes visited in sorted order for determinism.
    """
    order = sorted(set(nodes) | set(adj) | {t for ts in adj.values() for t in ts})
    succ = {n: sorted(set(adj.get(n, ()))) for n in order}
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0
    for root in order:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            children = succ[node]
            if i < len(children):
                work.append((node, i + 1))
                child = children[i]
                if child not in index:
                    work.append((child, 0))
                elif child in on_stack:
                    low[node] = min(low[node], index[child])
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    comp.append(top)
                    if top == node:
                        break
                out.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return out


def _edge_range(edge: DependencyEdge) -> SourceRange:
    if edge.location is not None:
        return edge.location
    return SourceRange(0, 0, edge.line, edge.col, edge.line, edge.col)


def detect_circular_references(graph: DependencyGraph,
                               cfg: DetectorConfig | None = None) -> list[Finding]:
    """One finding per same-language SCC of two or more files (or a self-loop)."""
    cfg = cfg or DetectorConfig()
    adj = graph.same_language_adjacency()
    out = []
    for comp in tarjan_scc(graph.nodes, adj):
        members = set(comp)
        if len(comp) < 2 and comp[0] not in adj.get(comp[0], ()):
            continue
        first_edge: dict[str, DependencyEdge] = {}
        for edge in graph.edges:
            if edge.cross_language or edge.from_file not in members or edge.to_file not in members:
                continue
            first_edge.setdefault(edge.from_file, edge)
        anchor = comp[0]
        related = tuple(Related(m, _edge_range(first_edge[m]),
                                f"depends on {first_edge[m].to_file}") for m in comp)
        out.append(Finding(
            smell=Smell.CIRCULAR_REFERENCES,
            severity=cfg.severity(Smell.CIRCULAR_REFERENCES),
            file=anchor,
            range=_edge_range(first_edge[anchor]),
            message=f"dependency cycle between {len(comp)} files: {', '.join(comp)}",
            entities=tuple(comp),
            related=related,
        ))
    return sorted(out, key=Finding.sort_key)
