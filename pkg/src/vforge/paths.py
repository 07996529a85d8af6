"""Dependency-path mining of label-word candidates.

For each sentence we compute two shortest paths over the undirected
dependency tree: the local path between the two entity anchor tokens, and
the global path from the first to the last non-punctuation token. The
candidate phrase is the words lying on both paths, minus entity-span and
punctuation tokens, in surface order, lowercased.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .corpus import ROOT_HEAD, AnnotatedExample, EntitySpan
from .errors import NonTreeParse


@dataclass(frozen=True)
class DependencyGraph:
    num_nodes: int
    adjacency: tuple[tuple[int, ...], ...]  # sorted neighbor lists per node

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


@dataclass(frozen=True)
class PathPair:
    local: tuple[int, ...]
    global_: tuple[int, ...]


@dataclass(frozen=True)
class CandidatePhrase:
    words: tuple[str, ...]
    source_indices: tuple[int, ...]
    example_id: str


def build_graph(example: AnnotatedExample) -> DependencyGraph:
    """Undirected adjacency from head links; edges {t, head(t)} only."""
    n = len(example.tokens)
    neighbors: list[set[int]] = [set() for _ in range(n)]
    roots = 0
    for tok in example.tokens:
        if tok.head == ROOT_HEAD:
            roots += 1
            continue
        if not (0 <= tok.head < n) or tok.head == tok.index:
            raise NonTreeParse(detail=f"bad head {tok.head} for token {tok.index}")
        neighbors[tok.index].add(tok.head)
        neighbors[tok.head].add(tok.index)
    if roots != 1:
        raise NonTreeParse(detail=f"{roots} roots")
    adjacency = tuple(tuple(sorted(s)) for s in neighbors)
    graph = DependencyGraph(num_nodes=n, adjacency=adjacency)
    if graph.num_edges != n - 1:
        raise NonTreeParse(detail="edge count != n-1")
    return graph


def shortest_path(graph: DependencyGraph, src: int, dst: int) -> list[int]:
    """BFS shortest path; neighbors expanded in ascending index order.

    In a tree the shortest path is unique, but the ascending-order rule keeps
    the result deterministic even on general graphs.
    """
    if not (0 <= src < graph.num_nodes and 0 <= dst < graph.num_nodes):
        raise IndexError(f"path endpoints ({src},{dst}) out of range")
    if src == dst:
        return [src]
    parent: dict[int, int] = {src: src}
    queue = deque([src])
    while queue:
        node = queue.popleft()
        for nb in graph.adjacency[node]:
            if nb in parent:
                continue
            parent[nb] = node
            if nb == dst:
                path = [dst]
                while path[-1] != src:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(nb)
    raise NonTreeParse(detail=f"no path {src}->{dst} (disconnected graph)")


def anchor_token(example: AnnotatedExample, span: EntitySpan) -> int:
    """Representative token of a (possibly multi-token) entity span.

    The unique span token whose head lies outside the span; falls back to the
    last span token when none or several qualify.
    """
    outside = [
        i for i in span.indices()
        if example.tokens[i].head == ROOT_HEAD or example.tokens[i].head not in span
    ]
    if len(outside) == 1:
        return outside[0]
    return span.end - 1


def compute_paths(example: AnnotatedExample) -> PathPair:
    graph = build_graph(example)
    local = shortest_path(graph, anchor_token(example, example.e1),
                          anchor_token(example, example.e2))
    non_punct = [t.index for t in example.tokens if not t.is_punct]
    if non_punct:
        global_ = shortest_path(graph, non_punct[0], non_punct[-1])
    else:
        global_ = []
    return PathPair(local=tuple(local), global_=tuple(global_))


def mine_candidates(example: AnnotatedExample) -> list[CandidatePhrase]:
    """Extract at most one candidate phrase from the path intersection."""
    pair = compute_paths(example)
    shared = set(pair.local) & set(pair.global_)
    kept = sorted(
        i for i in shared
        if i not in example.e1 and i not in example.e2
        and not example.tokens[i].is_punct
    )
    if not kept:
        return []
    phrase = CandidatePhrase(
        words=tuple(example.tokens[i].text.lower() for i in kept),
        source_indices=tuple(kept),
        example_id=example.id,
    )
    return [phrase]
