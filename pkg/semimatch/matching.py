"""Permutation and involution matchings over a finite set with an inverse relation.

A permutation matching sends every element to one of its inverses bijectively;
an involution matching is one that is its own inverse. Existence of the first
is a bipartite matching problem (Hall's condition), of the second a matching
problem in a general graph.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np
from networkx.algorithms import bipartite

from semimatch.transform import Transformation, h_class_key, inverses_of

logger = logging.getLogger(__name__)

DEFAULT_FULL_SWEEP_LIMIT = 22
DEFAULT_SUBSET_BUDGET = 2**21
DEFAULT_BACKTRACKING_LIMIT = 300
DEFAULT_PERMANENT_LIMIT = 20


class Relation(str, Enum):
    MUTUAL_INVERSE = "mutual-inverse"
    STRONG_INVERSE = "strong-inverse"


class MatchingKind(str, Enum):
    PERMUTATION = "permutation"
    INVOLUTION = "involution"


class HallCheckTooLargeError(ValueError):
    """Raised when an exact Hall sweep would enumerate too many subsets."""


class UnsupportedComponentError(ValueError):
    """Raised when a component is not a loop, a pair or a loopless cycle."""


class SearchLimitError(ValueError):
    """Raised when a component is too large for backtracking search or counting."""


@dataclass(frozen=True)
class InverseGraph:
    """Elements joined to their inverses; ``loops`` holds the self-inverse ones."""

    elements: Tuple[Any, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    loops: FrozenSet[int]
    index_of: Dict[Any, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.adjacency) != len(self.elements):
            raise ValueError(
                f"{len(self.elements)} elements but {len(self.adjacency)} adjacency rows"
            )
        for i, row in enumerate(self.adjacency):
            for j in row:
                if i not in self.adjacency[j]:
                    raise ValueError(f"Inverse relation is not symmetric: {i} -> {j}")
            if (i in row) != (i in self.loops):
                raise ValueError(f"Loop set disagrees with adjacency at {i}")
        object.__setattr__(self, "index_of", {e: i for i, e in enumerate(self.elements)})

    @property
    def size(self) -> int:
        return len(self.elements)

    def neighbourhood(self, indices: Iterable[int]) -> FrozenSet[int]:
        """V(A): the union of the inverse sets of the given elements."""
        return frozenset(j for i in indices for j in self.adjacency[i])

    def edge_graph(self) -> nx.Graph:
        """Undirected graph of distinct inverse pairs, every element a node."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.size))
        for i, row in enumerate(self.adjacency):
            graph.add_edges_from((i, j) for j in row if i < j)
        return graph


@dataclass(frozen=True)
class Matching:
    """A total map on element indices; ``mapping[i]`` is the partner of i."""

    kind: MatchingKind
    mapping: Tuple[int, ...]

    def verify(self, g: InverseGraph) -> bool:
        if len(self.mapping) != g.size:
            return False
        if any(j not in g.adjacency[i] for i, j in enumerate(self.mapping)):
            return False
        if len(set(self.mapping)) != len(self.mapping):
            return False
        if self.kind is MatchingKind.INVOLUTION:
            return all(self.mapping[j] == i for i, j in enumerate(self.mapping))
        return True

    def to_report(self) -> Dict[str, Any]:
        if self.kind is MatchingKind.INVOLUTION:
            pairs = [[i, j] for i, j in enumerate(self.mapping) if i < j]
            fixed = [i for i, j in enumerate(self.mapping) if i == j]
            return {"kind": self.kind.value, "pairs": pairs, "fixed": fixed}
        return {"kind": self.kind.value, "map": list(self.mapping)}


@dataclass(frozen=True)
class HallWitness:
    """A set A of element indices with |A| > |V(A)|."""

    deficient: Tuple[int, ...]
    neighbourhood: Tuple[int, ...]

    @property
    def deficiency(self) -> int:
        return len(self.deficient) - len(self.neighbourhood)

    def to_report(self) -> Dict[str, Any]:
        return {
            "kind": "hall-witness",
            "deficient": list(self.deficient),
            "neighbourhood": list(self.neighbourhood),
        }


@dataclass(frozen=True)
class InvolutionObstruction:
    """Vertices no involution matching can cover, with their components."""

    uncovered: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]
    odd_cycles: Tuple[Tuple[int, ...], ...]

    def to_report(self) -> Dict[str, Any]:
        return {
            "kind": "no-involution",
            "uncovered": list(self.uncovered),
            "components": [list(c) for c in self.components],
            "odd_cycles": [list(c) for c in self.odd_cycles],
        }


@dataclass(frozen=True)
class ComponentShape:
    kind: str
    size: int

    @property
    def label(self) -> str:
        return f"{self.kind}-{self.size}" if self.kind in ("cycle", "other") else self.kind


PermutationResult = Union[Matching, HallWitness]
InvolutionResult = Union[Matching, InvolutionObstruction]


def inverse_graph_from_adjacency(
    elements: Sequence[Any], adjacency: Sequence[Iterable[int]]
) -> InverseGraph:
    rows = tuple(tuple(sorted(set(row))) for row in adjacency)
    loops = frozenset(i for i, row in enumerate(rows) if i in row)
    return InverseGraph(elements=tuple(elements), adjacency=rows, loops=loops)


def inverse_graph_from_relation(
    elements: Sequence[Any], inverses: Callable[[Any], Iterable[Any]]
) -> InverseGraph:
    """Restrict an inverse-set function to ``elements``; outside inverses are dropped."""
    index = {e: i for i, e in enumerate(elements)}
    adjacency = []
    for e in elements:
        adjacency.append([index[b] for b in inverses(e) if b in index])
    return inverse_graph_from_adjacency(elements, adjacency)


def build_inverse_graph(
    elements: Sequence[Transformation], relation: Relation = Relation.MUTUAL_INVERSE
) -> InverseGraph:
    """Graph of a set of transformations under V (mutual inverses) or S (strong inverses)."""
    relation = Relation(relation)
    if relation is Relation.STRONG_INVERSE:
        from semimatch.strong_inverse import strong_inverses

        inverse_fn: Callable[[Any], Iterable[Any]] = strong_inverses
    else:
        inverse_fn = inverses_of
    logger.debug(f"Building {relation.value} graph on {len(elements)} elements")
    return inverse_graph_from_relation(list(elements), inverse_fn)


def find_permutation_matching(g: InverseGraph) -> PermutationResult:
    """Perfect matching of the bipartite doubling, or a Hall-deficient set.

    Left copy i is joined to right copy j for j in V(i). Hopcroft-Karp finds a
    maximum matching; when it is not perfect the left vertices outside a
    minimum vertex cover (Konig) form a deficient set.
    """
    left = [("L", i) for i in range(g.size)]
    doubling = nx.Graph()
    doubling.add_nodes_from(left, bipartite=0)
    doubling.add_nodes_from((("R", j) for j in range(g.size)), bipartite=1)
    for i, row in enumerate(g.adjacency):
        doubling.add_edges_from((("L", i), ("R", j)) for j in row)

    matched = bipartite.hopcroft_karp_matching(doubling, top_nodes=left)
    if all(node in matched for node in left):
        mapping = tuple(matched[("L", i)][1] for i in range(g.size))
        return Matching(kind=MatchingKind.PERMUTATION, mapping=mapping)

    cover = bipartite.to_vertex_cover(doubling, matched, top_nodes=left)
    deficient = tuple(sorted(i for _, i in left if ("L", i) not in cover))
    witness = HallWitness(
        deficient=deficient, neighbourhood=tuple(sorted(g.neighbourhood(deficient)))
    )
    logger.info(
        f"No permutation matching: |A| = {len(witness.deficient)} > "
        f"|V(A)| = {len(witness.neighbourhood)}"
    )
    return witness


def _odd_cycles(g: InverseGraph, components: Iterable[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    shapes = []
    for component in components:
        shape = _component_shape(g, component)
        if shape.kind == "cycle" and shape.size % 2 == 1:
            shapes.append(component)
    return shapes


def find_involution_matching(g: InverseGraph) -> InvolutionResult:
    """Pair elements with mutual partners and fix self-inverse ones, covering everything.

    Every looped vertex gets a private pendant vertex. Partner edges weigh 2 and
    pendant edges 1, so a maximum-weight matching covers as many original
    vertices as possible; all are covered exactly when the weight equals the
    vertex count. Pendant-matched vertices become fixed points.
    """
    n = g.size
    graph = g.edge_graph()
    mapping: List[Optional[int]] = [None] * n
    uncovered: List[int] = []

    for component in sorted(
        (tuple(sorted(c)) for c in nx.connected_components(graph)), key=lambda c: c[0]
    ):
        gadget = nx.Graph()
        gadget.add_nodes_from(component)
        for i in component:
            gadget.add_edges_from((i, j, {"weight": 2}) for j in g.adjacency[i] if i < j)
            if i in g.loops:
                gadget.add_edge(i, n + i, weight=1)

        for u, v in nx.max_weight_matching(gadget):
            if u >= n:
                mapping[v] = v
            elif v >= n:
                mapping[u] = u
            else:
                mapping[u] = v
                mapping[v] = u
        uncovered.extend(i for i in component if mapping[i] is None)

    if uncovered:
        components = tuple(
            sorted(
                {tuple(sorted(nx.node_connected_component(graph, i))) for i in uncovered},
                key=lambda c: c[0],
            )
        )
        logger.info(f"No involution matching: {len(uncovered)} vertices cannot be covered")
        return InvolutionObstruction(
            uncovered=tuple(uncovered),
            components=components,
            odd_cycles=tuple(_odd_cycles(g, components)),
        )
    return Matching(kind=MatchingKind.INVOLUTION, mapping=tuple(int(j) for j in mapping))


def find_involution_matching_backtracking(
    g: InverseGraph, limit: int = DEFAULT_BACKTRACKING_LIMIT
) -> InvolutionResult:
    """Component-wise backtracking search; vertices with fewest options go first."""
    graph = g.edge_graph()
    mapping: Dict[int, int] = {}
    uncovered: List[int] = []
    failed: List[Tuple[int, ...]] = []

    def options(v: int, free: set) -> List[int]:
        choices = [v] if v in g.loops else []
        choices.extend(j for j in g.adjacency[v] if j != v and j in free)
        return choices

    def solve(free: set) -> bool:
        if not free:
            return True
        v = min(free, key=lambda u: (len(options(u, free)), u))
        for partner in options(v, free):
            free.discard(v)
            free.discard(partner)
            mapping[v] = partner
            mapping[partner] = v
            if solve(free):
                return True
            del mapping[v]
            mapping.pop(partner, None)
            free.add(v)
            free.add(partner)
        return False

    for component in sorted(
        (tuple(sorted(c)) for c in nx.connected_components(graph)), key=lambda c: c[0]
    ):
        if len(component) > limit:
            raise SearchLimitError(
                f"Component of {len(component)} vertices exceeds backtracking limit {limit}"
            )
        if not solve(set(component)):
            failed.append(component)
            uncovered.extend(component)

    if failed:
        return InvolutionObstruction(
            uncovered=tuple(uncovered),
            components=tuple(failed),
            odd_cycles=tuple(_odd_cycles(g, failed)),
        )
    return Matching(
        kind=MatchingKind.INVOLUTION, mapping=tuple(mapping[i] for i in range(g.size))
    )


def _subset_witness(g: InverseGraph, subset: Sequence[int]) -> Optional[HallWitness]:
    neighbourhood = g.neighbourhood(subset)
    if len(neighbourhood) < len(subset):
        return HallWitness(
            deficient=tuple(sorted(subset)), neighbourhood=tuple(sorted(neighbourhood))
        )
    return None


def hall_check_exact(
    g: InverseGraph,
    max_size: Optional[int] = None,
    blocks: Optional[Sequence[Sequence[int]]] = None,
    full_sweep_limit: int = DEFAULT_FULL_SWEEP_LIMIT,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> Optional[HallWitness]:
    """Check |A| <= |V(A)| by enumeration; returns the first violating A or None.

    Without ``blocks`` every subset of up to ``max_size`` elements is tried,
    smallest first. With ``blocks`` only unions of blocks are tried, which is
    exhaustive whenever V(a) depends only on the block of a (H-classes).
    """
    if blocks is None:
        if g.size >= full_sweep_limit:
            raise HallCheckTooLargeError(
                f"Full subset sweep over {g.size} elements exceeds limit {full_sweep_limit}"
            )
        top = g.size if max_size is None else min(max_size, g.size)
        for size in range(1, top + 1):
            for subset in itertools.combinations(range(g.size), size):
                witness = _subset_witness(g, subset)
                if witness is not None:
                    return witness
        return None

    family = [tuple(block) for block in blocks]
    if 2 ** len(family) > subset_budget:
        raise HallCheckTooLargeError(
            f"{len(family)} blocks give 2^{len(family)} unions, over budget {subset_budget}"
        )
    for count in range(1, len(family) + 1):
        for chosen in itertools.combinations(family, count):
            subset = sorted({i for block in chosen for i in block})
            if max_size is not None and len(subset) > max_size:
                continue
            witness = _subset_witness(g, subset)
            if witness is not None:
                return witness
    return None


def _component_shape(g: InverseGraph, component: Sequence[int]) -> ComponentShape:
    size = len(component)
    looped = [i for i in component if i in g.loops]
    degrees = [len([j for j in g.adjacency[i] if j != i]) for i in component]
    if size == 1:
        return ComponentShape("loop" if looped else "isolated", 1)
    if size == 2 and not looped:
        return ComponentShape("pair", 2)
    if size >= 3 and not looped and all(d == 2 for d in degrees):
        return ComponentShape("cycle", size)
    return ComponentShape("other", size)


def component_shapes(g: InverseGraph) -> List[ComponentShape]:
    """Shape of every connected component, ordered by smallest member."""
    components = sorted(
        (tuple(sorted(c)) for c in nx.connected_components(g.edge_graph())), key=lambda c: c[0]
    )
    return [_component_shape(g, c) for c in components]


def count_strong_inverse_permutation_matchings(g: InverseGraph) -> int:
    """Number of cycle orientations: loops and pairs contribute 1, cycles 2."""
    total = 1
    for shape in component_shapes(g):
        if shape.kind in ("loop", "pair"):
            continue
        if shape.kind == "cycle":
            total *= 2
            continue
        raise UnsupportedComponentError(f"Cannot count matchings on a {shape.kind} component")
    return total


def permanent(matrix: Any) -> int:
    """Permanent of a square 0/1 matrix by Ryser's inclusion-exclusion formula."""
    a = np.asarray(matrix, dtype=np.int64)
    size = a.shape[0]
    if size == 0:
        return 1
    total = 0
    for count in range(1, size + 1):
        sign = -1 if (size - count) % 2 else 1
        for columns in itertools.combinations(range(size), count):
            row_sums = a[:, list(columns)].sum(axis=1)
            total += sign * math.prod(int(s) for s in row_sums)
    return total


def component_permutation_counts(
    g: InverseGraph, limit: int = DEFAULT_PERMANENT_LIMIT
) -> List[Tuple[Tuple[int, ...], int]]:
    """Each component with its number of permutation matchings (cycle covers).

    A permutation matching restricts to every component, so the count of a
    component is the permanent of its adjacency matrix, loops on the diagonal.
    """
    counts = []
    for component in sorted(
        (tuple(sorted(c)) for c in nx.connected_components(g.edge_graph())), key=lambda c: c[0]
    ):
        if len(component) > limit:
            raise SearchLimitError(
                f"Component of {len(component)} vertices exceeds permanent limit {limit}"
            )
        position = {v: k for k, v in enumerate(component)}
        matrix = np.zeros((len(component), len(component)), dtype=np.int64)
        for v in component:
            for j in g.adjacency[v]:
                matrix[position[v], position[j]] = 1
        counts.append((component, permanent(matrix)))
    return counts


def count_permutation_matchings(g: InverseGraph, limit: int = DEFAULT_PERMANENT_LIMIT) -> int:
    """Number of permutation matchings: the product of the component counts."""
    return math.prod(count for _, count in component_permutation_counts(g, limit))


def green_blocks(elements: Sequence[Transformation]) -> List[Tuple[int, ...]]:
    """Indices grouped by H-class (equal kernel and range)."""
    groups: Dict[Any, List[int]] = {}
    for i, a in enumerate(elements):
        groups.setdefault(h_class_key(a), []).append(i)
    return sorted((tuple(members) for members in groups.values()), key=lambda b: b[0])


def h_preservation_witness(
    elements: Sequence[Transformation],
    matching: Union[Matching, Callable[[Transformation], Transformation]],
) -> Optional[Tuple[int, int]]:
    """A pair a H b whose images are not H-related, or None if H is preserved."""
    if isinstance(matching, Matching):
        images = [elements[j] for j in matching.mapping]
    else:
        images = [matching(a) for a in elements]
    for block in green_blocks(elements):
        first = block[0]
        for other in block[1:]:
            if h_class_key(images[first]) != h_class_key(images[other]):
                return first, other
    return None
