"""Strong inverses in T_n and the censuses built on them.

b is a strong inverse of a when b is an inverse of a and the subsemigroup
<a, b> is an inverse semigroup. S(a) denotes the set of strong inverses.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
)

import networkx as nx
import numpy as np
from pydantic import BaseModel

from semimatch.matching import (
    DEFAULT_FULL_SWEEP_LIMIT,
    HallWitness,
    InverseGraph,
    Matching,
    MatchingKind,
    component_permutation_counts,
    component_shapes,
    hall_check_exact,
    find_permutation_matching,
    inverse_graph_from_relation,
)
from semimatch.transform import (
    DegreeMismatchError,
    Transformation,
    compose,
    digraph_profile,
    fixed_points,
    full_transformation_monoid,
    grasp,
    inverses_of,
    inverses_with_transversals,
    is_idempotent,
    max_depth_preimages,
    range_of,
    rank,
    to_one_indexed,
)

logger = logging.getLogger(__name__)

Chooser = Callable[[int, Tuple[int, ...]], int]


@dataclass(frozen=True)
class GeneratedSubsemigroup:
    generators: Tuple[Transformation, ...]
    elements: Tuple[Transformation, ...]
    cayley: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)


class StrongInverseCensus(BaseModel):
    """Classification of every element of T_n by its strong inverses."""

    n: int
    idempotent_count: int
    self_inverse_nonidempotent_count: int
    unique_distinct_strong_count: int
    two_strong_count: int
    other_count: int = 0
    components: Dict[str, int]

    @property
    def total(self) -> int:
        return (
            self.idempotent_count
            + self.self_inverse_nonidempotent_count
            + self.unique_distinct_strong_count
            + self.two_strong_count
            + self.other_count
        )


class UniquenessReport(BaseModel):
    n: int
    total: int
    unique_count: int
    chain_pairs_ok: bool
    violations: List[List[int]]


class WitnessReport(BaseModel):
    """Three maps U of T_n whose strong inverses S(U) number only two."""

    n: int
    maps: Dict[str, List[int]]
    maps_one_indexed: Dict[str, List[int]]
    strong_inverses: Dict[str, List[List[int]]]
    expected_strong_inverses: bool
    deficient: List[str]
    neighbourhood: List[str]
    exhaustive_deficient: List[str] = []

    @property
    def hall_violated(self) -> bool:
        return len(self.deficient) > len(self.neighbourhood)


class RankTwoComponent(BaseModel):
    """A strong-inverse component of the type A and B maps of T_4.

    Edge, chord and cycle entries are positions in ``vertices``.
    """

    fixed_points: List[int]
    vertices: List[List[int]]
    types: List[str]
    degrees: List[int]
    edges: List[Tuple[int, int]]
    chords: List[Tuple[int, int]]
    hamiltonian_cycle: Optional[List[int]] = None
    permutation_matchings: int
    involution_cover: int


def closure(gens: Sequence[Transformation], with_table: bool = False) -> GeneratedSubsemigroup:
    """Breadth-first closure under composition, right-multiplying by generators."""
    generators = tuple(gens)
    if not generators:
        return GeneratedSubsemigroup(generators=(), elements=())
    degree = generators[0].n
    for g in generators:
        if g.n != degree:
            raise DegreeMismatchError(f"Degree mismatch: {degree} and {g.n}")

    seen = set(generators)
    frontier = list(dict.fromkeys(generators))
    while frontier:
        following = []
        for x in frontier:
            for g in generators:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    following.append(y)
        frontier = following

    elements = tuple(sorted(seen))
    table = None
    if with_table:
        index = {e: i for i, e in enumerate(elements)}
        table = np.array(
            [[index[compose(x, y)] for y in elements] for x in elements], dtype=np.int32
        )
    return GeneratedSubsemigroup(generators=generators, elements=elements, cayley=table)


def _commute(e: Transformation, f: Transformation) -> bool:
    ei, fi = e.images, f.images
    return all(fi[ei[x]] == ei[fi[x]] for x in range(len(ei)))


def _has_inverse_within(a: Transformation, pool: Iterable[Transformation]) -> bool:
    ai = a.images
    return any(all(ai[b.images[ai[x]]] == ai[x] for x in range(len(ai))) for b in pool)


def is_inverse_subsemigroup(s: GeneratedSubsemigroup) -> bool:
    """Regular with pairwise commuting idempotents; the empty set qualifies."""
    return _is_inverse_set(s.elements)


def _is_inverse_set(elements: Sequence[Transformation]) -> bool:
    idempotents = [e for e in elements if is_idempotent(e)]
    for e, f in itertools.combinations(idempotents, 2):
        if not _commute(e, f):
            return False
    return all(_has_inverse_within(a, elements) for a in elements)


@lru_cache(maxsize=None)
def _generates_inverse(gens: FrozenSet[Transformation]) -> bool:
    generators = sorted(gens)
    seen = set(generators)
    idempotents: List[Transformation] = []
    for g in generators:
        if is_idempotent(g):
            if not all(_commute(g, e) for e in idempotents):
                return False
            idempotents.append(g)

    frontier = list(generators)
    while frontier:
        following = []
        for x in frontier:
            for g in generators:
                y = compose(x, g)
                if y in seen:
                    continue
                if is_idempotent(y):
                    if not all(_commute(y, e) for e in idempotents):
                        return False
                    idempotents.append(y)
                seen.add(y)
                following.append(y)
        frontier = following

    elements = list(seen)
    return all(_has_inverse_within(a, elements) for a in elements)


def generates_inverse_subsemigroup(gens: Iterable[Transformation]) -> bool:
    """Same verdict as ``is_inverse_subsemigroup(closure(gens))``, stopping at the
    first pair of non-commuting idempotents."""
    return _generates_inverse(frozenset(gens))


def _endpoint_condition(a: Transformation, b: Transformation, depth, heights) -> bool:
    # endpoints x: y = xb satisfies y a^(h+1) = x a^h and g(y) >= g(x) + 1
    for x in range(a.n):
        if depth[x] != 0:
            continue
        h = heights[x]
        y = b.images[x]
        target = x
        for _ in range(h):
            target = a.images[target]
        walk = y
        for _ in range(h + 1):
            walk = a.images[walk]
        if walk != target:
            return False
        if grasp(a, b, y) < grasp(a, b, x) + 1:
            return False
    return True


def strong_inverses(a: Transformation, prune: bool = True) -> FrozenSet[Transformation]:
    """S(a), filtered from V(a).

    With ``prune`` the candidates are first cut down by two necessary
    conditions: range points go to preimages of maximal depth, and endpoints
    obey the height/grasp condition. The inverse-subsemigroup test runs last.
    """
    if prune:
        profile = digraph_profile(a)
        choices = max_depth_preimages(a)
        candidates: Iterable[Transformation] = (
            b
            for b in inverses_with_transversals(a, choices)
            if _endpoint_condition(a, b, profile.depth, profile.height)
        )
    else:
        candidates = inverses_of(a)
    return frozenset(b for b in candidates if generates_inverse_subsemigroup((a, b)))


def _smallest(_: int, candidates: Tuple[int, ...]) -> int:
    return min(candidates)


def construct_strong_inverse(
    a: Transformation, chooser: Optional[Chooser] = None
) -> Transformation:
    """Build one strong inverse of a.

    Each range point r goes to a preimage of maximal depth picked by
    ``chooser(r, candidates)``. Each endpoint x then follows its dipath for
    h(x) steps to u and is sent to u b^(h+1).
    """
    chooser = chooser or _smallest
    profile = digraph_profile(a)
    images: List[Optional[int]] = [None] * a.n

    for r, candidates in sorted(max_depth_preimages(a).items()):
        chosen = chooser(r, candidates)
        if chosen not in candidates:
            raise ValueError(f"Chooser picked {chosen} for {r}, expected one of {candidates}")
        images[r] = chosen

    for x in range(a.n):
        if profile.depth[x] != 0:
            continue
        h = int(profile.height[x])
        u = x
        for _ in range(h):
            u = a.images[u]
        for _ in range(h + 1):
            u = images[u]  # type: ignore[index]
        images[x] = u

    return Transformation(tuple(int(y) for y in images))  # type: ignore[arg-type]


def all_constructed_strong_inverses(a: Transformation) -> FrozenSet[Transformation]:
    """Outputs of ``construct_strong_inverse`` over every chooser branch."""
    options = sorted(max_depth_preimages(a).items())
    results = set()
    for picks in itertools.product(*(candidates for _, candidates in options)):
        table = {r: y for (r, _), y in zip(options, picks)}
        results.add(construct_strong_inverse(a, lambda r, _c, t=table: t[r]))
    return frozenset(results)


def satisfies_commuting_identity(a: Transformation, b: Transformation) -> bool:
    """x ba a^(g+1) b^(g+1) = x a^(g+1) b^(g+1) ba for every x, with g = g(x)."""

    def walk(x: int, word: Iterable[Transformation]) -> int:
        for step in word:
            x = step.images[x]
        return x

    for x in range(a.n):
        g = grasp(a, b, x) + 1
        left = walk(x, [b, a] + [a] * g + [b] * g)
        right = walk(x, [a] * g + [b] * g + [b, a])
        if left != right:
            return False
    return True


def strong_graph(elements: Sequence[Transformation]) -> InverseGraph:
    return inverse_graph_from_relation(list(elements), strong_inverses)


def strong_inverse_rows(
    n: int, first_images: Optional[Iterable[int]] = None
) -> List[Tuple[Transformation, Tuple[Transformation, ...]]]:
    """(a, sorted S(a)) for the maps of T_n whose image of 0 is in ``first_images``."""
    allowed = set(range(n) if first_images is None else first_images)
    rows = []
    for a in full_transformation_monoid(n):
        if a.images[0] in allowed:
            rows.append((a, tuple(sorted(strong_inverses(a)))))
    return rows


def census_from_rows(
    n: int, rows: Iterable[Tuple[Transformation, Tuple[Transformation, ...]]]
) -> StrongInverseCensus:
    table = dict(rows)
    if len(table) != n**n:
        raise ValueError(f"Census of T_{n} needs {n ** n} rows, got {len(table)}")
    counts: Counter = Counter()
    for a, partners in table.items():
        if is_idempotent(a):
            counts["idempotent"] += 1
        elif partners == (a,):
            counts["self"] += 1
        elif len(partners) == 1:
            counts["unique"] += 1
        elif len(partners) == 2:
            counts["two"] += 1
        else:
            counts["other"] += 1

    elements = sorted(table)
    graph = inverse_graph_from_relation(elements, lambda a: table[a])
    shapes = Counter(shape.label for shape in component_shapes(graph))
    census = StrongInverseCensus(
        n=n,
        idempotent_count=counts["idempotent"],
        self_inverse_nonidempotent_count=counts["self"],
        unique_distinct_strong_count=counts["unique"],
        two_strong_count=counts["two"],
        other_count=counts["other"],
        components=dict(shapes),
    )
    logger.info(f"Strong-inverse census of T_{n}: {census.model_dump()}")
    return census


def strong_census(n: int) -> StrongInverseCensus:
    if n > 5:
        raise ValueError(f"Full strong-inverse census is limited to n <= 5, got {n}")
    return census_from_rows(n, strong_inverse_rows(n))


def t4_census() -> StrongInverseCensus:
    return strong_census(4)


def classify_rank_two_type(a: Transformation) -> Optional[str]:
    """'A' for the Y-shaped maps (c,c,d,d), 'B' for (b,d,d,d), else None.

    Both are rank-2 non-group maps of T_4 with a single fixed point d whose
    other range point maps to d. Type A maps have four strong inverses, type B
    maps two.
    """
    if a.n != 4 or rank(a) != 2 or len(fixed_points(a)) != 1:
        return None
    d = fixed_points(a)[0]
    (other,) = [r for r in range_of(a) if r != d]
    if a.images[other] != d:
        return None
    preimages = [x for x in range(4) if a.images[x] == other]
    return {2: "A", 1: "B"}.get(len(preimages))


def t4_rank_two_maps() -> List[Transformation]:
    """The 36 type A and type B maps of T_4, sorted."""
    return [a for a in full_transformation_monoid(4) if classify_rank_two_type(a) is not None]


def t4_rank_two_components() -> List[RankTwoComponent]:
    """Strong-inverse components of the type A and B maps of T_4, one per fixed point.

    Each has nine vertices: three type A maps joined in a triangle, each also
    joined to two type B maps, and three pairs of type B maps joined to each
    other. Without the triangle the edges form a Hamiltonian cycle.
    """
    members = t4_rank_two_maps()
    graph = strong_graph(members)
    edge_graph = graph.edge_graph()
    counts = dict(component_permutation_counts(graph))
    reports = []
    for component, matchings in counts.items():
        position = {v: k for k, v in enumerate(component)}
        types = [classify_rank_two_type(members[v]) or "" for v in component]
        sub = edge_graph.subgraph(component)
        edges = sorted(tuple(sorted((position[u], position[v]))) for u, v in sub.edges())
        chords = [(u, v) for u, v in edges if types[u] == types[v] == "A"]

        ring = nx.Graph()
        ring.add_nodes_from(range(len(component)))
        ring.add_edges_from(e for e in edges if e not in chords)
        try:
            cycle = [u for u, _ in nx.find_cycle(ring, source=0)]
        except nx.NetworkXNoCycle:
            cycle = []

        reports.append(
            RankTwoComponent(
                fixed_points=sorted({fixed_points(members[v])[0] for v in component}),
                vertices=[members[v].to_list() for v in component],
                types=types,
                degrees=[sub.degree(v) for v in component],
                edges=edges,
                chords=chords,
                hamiltonian_cycle=cycle if len(cycle) == len(component) else None,
                permutation_matchings=matchings,
                involution_cover=2 * len(nx.max_weight_matching(sub, maxcardinality=True)),
            )
        )
    logger.info(
        f"T_4 rank-two components: {[len(r.vertices) for r in reports]} vertices, "
        f"{[r.permutation_matchings for r in reports]} permutation matchings"
    )
    return reports


def t4_involution_from_strong() -> Tuple[List[Transformation], Matching]:
    """An involution matching of T_4 by mutual inverses, repaired from strong inverses.

    Loops and strong pairs are kept. In each nine-vertex component one type A
    map is paired with an unused idempotent inverse instead, and a perfect
    matching of the other eight by strong inverses pairs the rest.
    """
    elements = list(full_transformation_monoid(4))
    graph = strong_graph(elements)
    edge_graph = graph.edge_graph()
    index = {a: i for i, a in enumerate(elements)}
    mapping: Dict[int, int] = {}
    used_idempotents = set()

    for component in nx.connected_components(edge_graph):
        if len(component) <= 2:
            continue
        for v in sorted(component):
            if classify_rank_two_type(elements[v]) != "A":
                continue
            partner = next(
                (
                    e
                    for e in sorted(inverses_of(elements[v]))
                    if is_idempotent(e) and e not in used_idempotents
                ),
                None,
            )
            if partner is None:
                continue
            rest = edge_graph.subgraph(component - {v})
            pairs = nx.max_weight_matching(rest, maxcardinality=True)
            if 2 * len(pairs) == len(component) - 1:
                break
        else:
            raise RuntimeError(f"No repair for the component of {elements[min(component)]}")
        used_idempotents.add(partner)
        mapping[v] = index[partner]
        mapping[index[partner]] = v
        for u, w in pairs:
            mapping[u] = w
            mapping[w] = u

    for i in range(len(elements)):
        if i in mapping:
            continue
        if i in graph.loops:
            mapping[i] = i
        else:
            (j,) = graph.adjacency[i]
            mapping[i] = j
            mapping[j] = i

    return elements, Matching(
        kind=MatchingKind.INVOLUTION, mapping=tuple(mapping[i] for i in range(len(elements)))
    )


ALPHA_1 = (1, 2, 3, 4, 4, 2, 7, 3)
ALPHA_2 = (1, 2, 3, 4, 4, 7, 2, 3)
BETA = (1, 2, 3, 4, 4, 7, 7, 3)
BETA_1 = (4, 0, 1, 2, 4, 0, 0, 6)
BETA_2 = (4, 0, 1, 2, 4, 0, 0, 5)


def _embed(images: Tuple[int, ...], n: int) -> Transformation:
    return Transformation(images + tuple(range(len(images), n)))


def t8_witness(n: int = 8, full_sweep_limit: int = DEFAULT_FULL_SWEEP_LIMIT) -> WitnessReport:
    """Three maps of T_n (n >= 8) whose strong inverses are only two maps.

    Points 8..n-1 are fixed by every map, so the witness carries over to
    every larger degree. The deficient set is found twice: from a maximum
    matching and by a smallest-first subset sweep bounded by ``full_sweep_limit``.
    """
    if n < 8:
        raise ValueError(f"Witness needs degree at least 8, got {n}")
    maps = {
        "alpha_1": _embed(ALPHA_1, n),
        "alpha_2": _embed(ALPHA_2, n),
        "beta": _embed(BETA, n),
    }
    beta_1, beta_2 = _embed(BETA_1, n), _embed(BETA_2, n)
    strong = {name: sorted(strong_inverses(a)) for name, a in maps.items()}
    expected = {"alpha_1": [beta_1], "alpha_2": [beta_2], "beta": sorted([beta_1, beta_2])}

    names = {a: name for name, a in maps.items()}
    for a in strong["beta"]:
        names.setdefault(a, "beta_1" if a == beta_1 else "beta_2" if a == beta_2 else str(a))
    union = list(maps.values()) + sorted({b for bs in strong.values() for b in bs})
    graph = strong_graph(union)
    result = find_permutation_matching(graph)
    if isinstance(result, HallWitness):
        deficient = [names[union[i]] for i in result.deficient]
        neighbourhood = [names.get(union[i], str(union[i])) for i in result.neighbourhood]
    else:
        deficient, neighbourhood = [], []
    exhaustive = hall_check_exact(graph, full_sweep_limit=full_sweep_limit)

    report = WitnessReport(
        n=n,
        maps={name: a.to_list() for name, a in maps.items()},
        maps_one_indexed={name: to_one_indexed(a) for name, a in maps.items()},
        strong_inverses={name: [b.to_list() for b in bs] for name, bs in strong.items()},
        expected_strong_inverses=strong == expected,
        deficient=deficient,
        neighbourhood=neighbourhood,
        exhaustive_deficient=(
            [names.get(union[i], str(union[i])) for i in exhaustive.deficient]
            if exhaustive is not None
            else []
        ),
    )
    logger.info(
        f"T_{n} witness: |U| = {len(report.deficient)}, |S(U)| = {len(report.neighbourhood)}"
    )
    return report


def abc_map(a: int, b: int, c: int) -> Transformation:
    """The T_3 map a -> b -> c -> c, written (a b c)."""
    images = [0, 0, 0]
    images[a], images[b], images[c] = b, c, c
    return Transformation(tuple(images))


def t3_unique_strong_inverses() -> UniquenessReport:
    """Every map of T_3 has exactly one strong inverse, and (a b c) pairs with (b a c)."""
    violations = []
    unique = 0
    total = 0
    for a in full_transformation_monoid(3):
        total += 1
        partners = strong_inverses(a)
        if len(partners) == 1:
            unique += 1
        else:
            violations.append(a.to_list())

    chains_ok = all(
        strong_inverses(abc_map(a, b, c)) == frozenset({abc_map(b, a, c)})
        for a, b, c in itertools.permutations(range(3))
    )
    return UniquenessReport(
        n=3, total=total, unique_count=unique, chain_pairs_ok=chains_ok, violations=violations
    )

