"""Cayley table source: reads a semigroup from a labelled CSV product table."""

import csv
import logging
from pathlib import Path
from typing import List, Sequence, Union

from semimatch.esolid import FiniteSemigroup, InvalidCayleyTableError, from_cayley_table

logger = logging.getLogger(__name__)


def parse_cayley_rows(rows: Sequence[Sequence[str]]) -> FiniteSemigroup:
    """Build a semigroup from CSV rows.

    The first row lists the element labels; row i + 1, column j holds the
    label of element_i * element_j.

    Args:
        rows: Parsed CSV rows, blank rows already removed

    Returns:
        The validated semigroup

    Raises:
        InvalidCayleyTableError: On unknown labels or a ragged table
        AssociativityError: When the table is not associative
    """
    if not rows:
        raise InvalidCayleyTableError("Cayley file is empty")
    labels = [label.strip() for label in rows[0]]
    if len(set(labels)) != len(labels):
        raise InvalidCayleyTableError(f"Duplicate element labels in header: {labels}")
    index = {label: i for i, label in enumerate(labels)}

    body = rows[1:]
    if len(body) != len(labels):
        raise InvalidCayleyTableError(f"Expected {len(labels)} product rows, got {len(body)}")

    table: List[List[int]] = []
    for i, row in enumerate(body):
        cells = [cell.strip() for cell in row]
        if len(cells) != len(labels):
            raise InvalidCayleyTableError(
                f"Row {labels[i]} has {len(cells)} entries, expected {len(labels)}"
            )
        try:
            table.append([index[cell] for cell in cells])
        except KeyError as e:
            raise InvalidCayleyTableError(f"Row {labels[i]} names unknown element {e}")

    return from_cayley_table(table, labels=labels)


def load_cayley_csv(path: Union[str, Path]) -> FiniteSemigroup:
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = [row for row in csv.reader(f) if any(cell.strip() for cell in row)]
    semigroup = parse_cayley_rows(rows)
    logger.info(f"Loaded semigroup of order {semigroup.order} from {path}")
    return semigroup


def dump_cayley_csv(s: FiniteSemigroup, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(s.labels)
        for row in s.table:
            writer.writerow([s.labels[int(v)] for v in row])
