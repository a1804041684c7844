"""Builders for small semigroups used as a test and verification corpus."""

import itertools
from typing import Callable, Dict, List, Sequence, Tuple

from semimatch.esolid import FiniteSemigroup, from_cayley_table, from_transformations
from semimatch.transform import Transformation


def _from_rule(labels: Sequence[str], rule: Callable[[int, int], int]) -> FiniteSemigroup:
    size = len(labels)
    return from_cayley_table(
        [[rule(x, y) for y in range(size)] for x in range(size)], labels=list(labels)
    )


def left_zero_band(size: int) -> FiniteSemigroup:
    return _from_rule([f"l{x}" for x in range(size)], lambda x, y: x)


def right_zero_band(size: int) -> FiniteSemigroup:
    return _from_rule([f"r{x}" for x in range(size)], lambda x, y: y)


def rectangular_band(rows: int, cols: int) -> FiniteSemigroup:
    """(i, j)(k, l) = (i, l)."""
    cells = list(itertools.product(range(rows), range(cols)))
    index = {cell: x for x, cell in enumerate(cells)}
    return _from_rule(
        [f"e{i}{j}" for i, j in cells], lambda x, y: index[(cells[x][0], cells[y][1])]
    )


def cyclic_group(order: int) -> FiniteSemigroup:
    return _from_rule([f"g{x}" for x in range(order)], lambda x, y: (x + y) % order)


def direct_product(s: FiniteSemigroup, t: FiniteSemigroup) -> FiniteSemigroup:
    pairs = list(itertools.product(range(s.order), range(t.order)))
    index = {pair: x for x, pair in enumerate(pairs)}
    return _from_rule(
        [f"({s.labels[a]},{t.labels[b]})" for a, b in pairs],
        lambda x, y: index[
            (s.product(pairs[x][0], pairs[y][0]), t.product(pairs[x][1], pairs[y][1]))
        ],
    )


def adjoin_zero(s: FiniteSemigroup) -> FiniteSemigroup:
    """S with a new zero placed first."""

    def rule(x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return s.product(x - 1, y - 1) + 1

    return _from_rule(["z"] + list(s.labels), rule)


def rees_matrix_zero(sandwich: Sequence[Sequence[int]]) -> FiniteSemigroup:
    """Rees 0-matrix semigroup over the trivial group.

    ``sandwich[lam][i]`` is 1 when (i, lam) is a group cell. Elements are the
    zero ``z`` and ``x{i}{lam}`` with (i, lam)(j, mu) = (i, mu) if
    sandwich[lam][j] else z.
    """
    lambdas = len(sandwich)
    indices = len(sandwich[0])
    cells: List[Tuple[int, int]] = list(itertools.product(range(indices), range(lambdas)))
    index = {cell: x + 1 for x, cell in enumerate(cells)}

    def rule(x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        i, lam = cells[x - 1]
        j, mu = cells[y - 1]
        return index[(i, mu)] if sandwich[lam][j] else 0

    return _from_rule(["z"] + [f"x{i}{lam}" for i, lam in cells], rule)


def brandt_b2() -> FiniteSemigroup:
    return rees_matrix_zero([[1, 0], [0, 1]])


def dissimilar_blocks_band() -> FiniteSemigroup:
    """Orthodox 0-rectangular band whose blocks are 1x1 and 1x2."""
    return rees_matrix_zero([[1, 0], [0, 1], [0, 1]])


def similar_blocks_band() -> FiniteSemigroup:
    """Orthodox 0-rectangular band with two 1x2 blocks."""
    return rees_matrix_zero([[1, 0], [1, 0], [0, 1], [0, 1]])


def brandt_closure() -> FiniteSemigroup:
    """<(0 1 2), (1 0 2)> in T_3: the 5-element combinatorial Brandt semigroup."""
    return from_transformations([Transformation((1, 2, 2)), Transformation((2, 0, 2))])


def full_t3() -> FiniteSemigroup:
    return from_transformations(
        [Transformation((1, 2, 0)), Transformation((1, 0, 2)), Transformation((0, 0, 2))]
    )


def fixture_corpus() -> Dict[str, FiniteSemigroup]:
    return {
        "left-zero-2": left_zero_band(2),
        "right-zero-3": right_zero_band(3),
        "rectangular-2x3": rectangular_band(2, 3),
        "rectangular-3x3": rectangular_band(3, 3),
        "cyclic-2": cyclic_group(2),
        "cyclic-3-with-zero": adjoin_zero(cyclic_group(3)),
        "cyclic-2-x-rectangular-2x2": direct_product(cyclic_group(2), rectangular_band(2, 2)),
        "brandt-b2": brandt_b2(),
        "brandt-closure": brandt_closure(),
        "similar-blocks": similar_blocks_band(),
        "dissimilar-blocks": dissimilar_blocks_band(),
        "full-t3": full_t3(),
    }
