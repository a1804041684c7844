"""Abstract finite semigroups given by Cayley tables.

Covers Green's relations, E-solidity, the 0-rectangular bands of the regular
D-classes, and the decision whether a finite regular E-solid semigroup has a
permutation matching: it does exactly when, in every D-class, the maximal
rectangular blocks of group H-classes all have the same shape ratio.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel

from semimatch.matching import (
    HallWitness,
    InverseGraph,
    Matching,
    find_involution_matching,
    find_permutation_matching,
    inverse_graph_from_adjacency,
)
from semimatch.strong_inverse import closure
from semimatch.transform import Transformation

logger = logging.getLogger(__name__)

Classes = Tuple[Tuple[int, ...], ...]


class InvalidCayleyTableError(ValueError):
    """Raised for tables that are not square or hold out-of-range entries."""


class AssociativityError(ValueError):
    """Raised with a triple (x, y, z) for which (xy)z != x(yz)."""

    def __init__(self, message: str, triple: Tuple[int, int, int]):
        super().__init__(message)
        self.triple = triple


class NonRegularDClassError(ValueError):
    """Raised when a D-class lacks an idempotent in some row or column."""


@dataclass(frozen=True)
class FiniteSemigroup:
    table: np.ndarray = field(repr=False, compare=False)
    labels: Tuple[str, ...]
    elements: Optional[Tuple[Transformation, ...]] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def product(self, x: int, y: int) -> int:
        return int(self.table[x, y])


@dataclass(frozen=True)
class GreenStructure:
    l_classes: Classes
    r_classes: Classes
    h_classes: Classes
    d_classes: Classes
    l_of: Tuple[int, ...]
    r_of: Tuple[int, ...]


@dataclass(frozen=True)
class EggboxBand:
    """Group H-classes of one D-class laid out by R-class (rows) and L-class (columns)."""

    group_cell: Tuple[Tuple[bool, ...], ...]
    r_members: Classes = ()
    l_members: Classes = ()

    @property
    def r_count(self) -> int:
        return len(self.group_cell)

    @property
    def l_count(self) -> int:
        return len(self.group_cell[0]) if self.group_cell else 0


@dataclass(frozen=True)
class RectBlock:
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)


@dataclass(frozen=True)
class BlockDecomposition:
    """Maximal rectangular blocks, or the first component that is not a full rectangle."""

    blocks: Tuple[RectBlock, ...]
    witness: Optional[RectBlock] = None

    @property
    def success(self) -> bool:
        return self.witness is None


class DClassSummary(BaseModel):
    size: int
    blocks: List[List[int]]
    similar: bool
    rectangular: bool


class DecisionReport(BaseModel):
    order: int
    regular: bool
    e_solid: bool
    applicable: bool
    reason: Optional[str] = None
    d_classes: List[DClassSummary] = []
    decision: Optional[bool] = None
    consistency_alarm: bool = False
    oracle: bool
    oracle_agreement: Optional[bool] = None
    hall_witness: Optional[List[str]] = None
    involution: Optional[bool] = None


def from_cayley_table(
    table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None
) -> FiniteSemigroup:
    """Validate a product table (rows are left factors) and wrap it.

    Raises:
        InvalidCayleyTableError: On a non-square table or out-of-range entries
        AssociativityError: On the first triple violating associativity
    """
    matrix = np.asarray(table)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise InvalidCayleyTableError(
            f"Cayley table must be square and nonempty, got shape {matrix.shape}"
        )
    if not np.issubdtype(matrix.dtype, np.integer):
        raise InvalidCayleyTableError(f"Cayley table entries must be integers, got {matrix.dtype}")
    order = matrix.shape[0]
    if matrix.min() < 0 or matrix.max() >= order:
        raise InvalidCayleyTableError(f"Cayley table entries must lie in [0, {order})")
    matrix = matrix.astype(np.int32)

    for x in range(order):
        # rows y, columns z
        left = matrix[matrix[x], :]
        right = matrix[x][matrix]
        bad = np.argwhere(left != right)
        if bad.size:
            y, z = (int(v) for v in bad[0])
            raise AssociativityError(
                f"({x}*{y})*{z} = {left[y, z]} but {x}*({y}*{z}) = {right[y, z]}", (x, y, z)
            )

    names = tuple(labels) if labels is not None else tuple(str(i) for i in range(order))
    if len(names) != order:
        raise InvalidCayleyTableError(f"{len(names)} labels for a table of order {order}")
    return FiniteSemigroup(table=matrix, labels=names)


def from_transformations(gens: Sequence[Transformation]) -> FiniteSemigroup:
    generated = closure(gens, with_table=True)
    semigroup = from_cayley_table(
        generated.cayley, labels=[str(e) for e in generated.elements]  # type: ignore[arg-type]
    )
    return FiniteSemigroup(
        table=semigroup.table, labels=semigroup.labels, elements=generated.elements
    )


def _group_by(keys: Sequence[object]) -> Classes:
    groups: Dict[object, List[int]] = {}
    for i, key in enumerate(keys):
        groups.setdefault(key, []).append(i)
    return tuple(sorted((tuple(g) for g in groups.values()), key=lambda c: c[0]))


def _class_index(classes: Classes, order: int) -> Tuple[int, ...]:
    index = [0] * order
    for c, members in enumerate(classes):
        for x in members:
            index[x] = c
    return tuple(index)


def green_structure(s: FiniteSemigroup) -> GreenStructure:
    """L, R and H from principal one-sided ideals of S^1; D as the join of L and R."""
    order = s.order
    left_ideals = [frozenset(s.table[:, a].tolist()) | {a} for a in range(order)]
    right_ideals = [frozenset(s.table[a, :].tolist()) | {a} for a in range(order)]
    l_classes = _group_by(left_ideals)
    r_classes = _group_by(right_ideals)
    l_of = _class_index(l_classes, order)
    r_of = _class_index(r_classes, order)
    h_classes = _group_by(list(zip(l_of, r_of)))

    graph = nx.Graph()
    graph.add_nodes_from(range(order))
    for members in l_classes + r_classes:
        graph.add_edges_from(zip(members, members[1:]))
    d_classes = tuple(
        sorted((tuple(sorted(c)) for c in nx.connected_components(graph)), key=lambda c: c[0])
    )
    return GreenStructure(
        l_classes=l_classes,
        r_classes=r_classes,
        h_classes=h_classes,
        d_classes=d_classes,
        l_of=l_of,
        r_of=r_of,
    )


def idempotents(s: FiniteSemigroup) -> Tuple[int, ...]:
    diagonal = s.table[np.arange(s.order), np.arange(s.order)]
    return tuple(int(x) for x in np.nonzero(diagonal == np.arange(s.order))[0])


def inverse_table(s: FiniteSemigroup) -> List[Tuple[int, ...]]:
    """V(a) for every element, by checking aba = a and bab = b across the table."""
    everything = np.arange(s.order)
    result = []
    for a in range(s.order):
        aba = s.table[s.table[a, :], a]
        bab = s.table[s.table[:, a], everything]
        result.append(tuple(int(b) for b in np.nonzero((aba == a) & (bab == everything))[0]))
    return result


def is_regular(s: FiniteSemigroup) -> bool:
    return all(bool(np.any(s.table[s.table[a, :], a] == a)) for a in range(s.order))


def is_e_solid(s: FiniteSemigroup, green: Optional[GreenStructure] = None) -> bool:
    """Regular, and e L f R g among idempotents always admits h in E with e R h L g."""
    if not is_regular(s):
        return False
    green = green or green_structure(s)
    es = idempotents(s)
    for e in es:
        for f in es:
            if green.l_of[e] != green.l_of[f]:
                continue
            for g in es:
                if green.r_of[f] != green.r_of[g]:
                    continue
                if not any(
                    green.r_of[h] == green.r_of[e] and green.l_of[h] == green.l_of[g] for h in es
                ):
                    logger.debug(f"E-solidity fails at e={e}, f={f}, g={g}")
                    return False
    return True


def is_orthodox(s: FiniteSemigroup) -> bool:
    """Regular, with every product of idempotents again idempotent."""
    if not is_regular(s):
        return False
    es = list(idempotents(s))
    products = s.table[np.ix_(es, es)]
    return bool(np.all(s.table[products, products] == products))


def is_inverse(s: FiniteSemigroup) -> bool:
    es = list(idempotents(s))
    block = s.table[np.ix_(es, es)]
    return is_regular(s) and bool(np.array_equal(block, block.T))


def inverse_graph_of(s: FiniteSemigroup) -> InverseGraph:
    return inverse_graph_from_adjacency(s.labels, inverse_table(s))


def principal_factor_band(
    s: FiniteSemigroup, d_class: Sequence[int], green: Optional[GreenStructure] = None
) -> EggboxBand:
    """Eggbox of a regular D-class; a cell is marked when its H-class holds an idempotent."""
    green = green or green_structure(s)
    members = set(d_class)
    rows = tuple(c for c in green.r_classes if c[0] in members)
    cols = tuple(c for c in green.l_classes if c[0] in members)
    row_index = {r: i for i, c in enumerate(rows) for r in c}
    col_index = {x: j for j, c in enumerate(cols) for x in c}

    cells = [[False] * len(cols) for _ in rows]
    for e in idempotents(s):
        if e in members:
            cells[row_index[e]][col_index[e]] = True

    if not all(any(row) for row in cells) or not all(any(col) for col in zip(*cells)):
        raise NonRegularDClassError(
            f"D-class of {s.labels[min(d_class)]} has a row or column without idempotents"
        )
    return EggboxBand(
        group_cell=tuple(tuple(row) for row in cells), r_members=rows, l_members=cols
    )


def maximal_rect_blocks(b: EggboxBand) -> BlockDecomposition:
    """Components of the row/column graph linked through group cells.

    The band is block-diagonalisable exactly when every component fills its
    full rows x columns rectangle.
    """
    graph = nx.Graph()
    graph.add_nodes_from(("r", i) for i in range(b.r_count))
    graph.add_nodes_from(("c", j) for j in range(b.l_count))
    for i, row in enumerate(b.group_cell):
        graph.add_edges_from((("r", i), ("c", j)) for j, cell in enumerate(row) if cell)

    blocks = []
    for component in nx.connected_components(graph):
        rows = tuple(sorted(i for side, i in component if side == "r"))
        cols = tuple(sorted(j for side, j in component if side == "c"))
        blocks.append(RectBlock(rows=rows, cols=cols))
    blocks.sort(key=lambda blk: (blk.rows[:1], blk.cols[:1]))

    for block in blocks:
        if not all(b.group_cell[i][j] for i in block.rows for j in block.cols):
            return BlockDecomposition(blocks=tuple(blocks), witness=block)
    return BlockDecomposition(blocks=tuple(blocks))


def blocks_pairwise_similar(blocks: Sequence[RectBlock]) -> bool:
    """m_1 * n_2 == m_2 * n_1 for every pair of block shapes."""
    if not blocks:
        raise ValueError("Similarity needs at least one block")
    m0, n0 = blocks[0].shape
    return all(m * n0 == m0 * n for m, n in (block.shape for block in blocks[1:]))


def decide_permutation_matching(s: FiniteSemigroup) -> DecisionReport:
    """Decide permutation matchings from D-class block shapes, checked against matching.

    The decision applies to finite regular E-solid semigroups; otherwise the
    report says why it does not apply but still carries the matching oracle.
    """
    graph = inverse_graph_of(s)
    oracle_result = find_permutation_matching(graph)
    oracle = isinstance(oracle_result, Matching)
    hall_witness = (
        [s.labels[i] for i in oracle_result.deficient]
        if isinstance(oracle_result, HallWitness)
        else None
    )

    regular = is_regular(s)
    green = green_structure(s)
    e_solid = is_e_solid(s, green) if regular else False
    base = dict(
        order=s.order, regular=regular, e_solid=e_solid, oracle=oracle, hall_witness=hall_witness
    )
    if not regular:
        return DecisionReport(applicable=False, reason="semigroup is not regular", **base)
    if not e_solid:
        return DecisionReport(applicable=False, reason="semigroup is not E-solid", **base)

    summaries = []
    alarm = False
    for d_class in green.d_classes:
        decomposition = maximal_rect_blocks(principal_factor_band(s, d_class, green))
        if not decomposition.success:
            alarm = True
            logger.error(
                f"D-class of {s.labels[d_class[0]]} is E-solid but not block-diagonalisable"
            )
        summaries.append(
            DClassSummary(
                size=len(d_class),
                blocks=[list(block.shape) for block in decomposition.blocks],
                similar=blocks_pairwise_similar(decomposition.blocks),
                rectangular=decomposition.success,
            )
        )

    decision = all(summary.similar for summary in summaries) and not alarm
    involution = None
    if decision:
        involution = isinstance(find_involution_matching(graph), Matching)

    report = DecisionReport(
        applicable=True,
        d_classes=summaries,
        decision=decision,
        consistency_alarm=alarm,
        oracle_agreement=decision == oracle,
        involution=involution,
        **base,
    )
    logger.info(
        f"Order {s.order}: decision={decision}, oracle={oracle}, "
        f"agreement={report.oracle_agreement}"
    )
    return report
