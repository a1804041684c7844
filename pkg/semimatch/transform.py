"""Transformations of X_n = {0, ..., n-1}: composition, digraph parameters and inverses."""

import itertools
import json
import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

INFINITE = math.inf

Depth = Union[int, float]


class InvalidTransformationError(ValueError):
    """Raised when an image list does not describe a total map of X_n."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class DegreeMismatchError(ValueError):
    """Raised when two transformations of different degree are combined."""


@dataclass(frozen=True, order=True)
class Transformation:
    """A total map of X_n given by its list of images.

    Points act on the right, so ``compose(a, b)`` first applies ``a`` then ``b``.
    Construct values through ``make_transformation`` to get validation.
    """

    images: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Transformation") -> "Transformation":
        return compose(self, other)

    def to_list(self) -> List[int]:
        return list(self.images)

    def __str__(self) -> str:
        return json.dumps(self.to_list(), separators=(",", ":"))


@dataclass(frozen=True)
class DigraphProfile:
    """Per-point parameters of the functional digraph G(a)."""

    depth: Tuple[Depth, ...]
    height: Tuple[Depth, ...]
    stable_range: Tuple[int, ...]
    cycle_lengths: Tuple[int, ...]


def make_transformation(n: int, images: Sequence[int]) -> Transformation:
    """Validate an image list and wrap it as a Transformation.

    Args:
        n: Degree of the map
        images: Image of each point 0..n-1

    Returns:
        The validated transformation

    Raises:
        InvalidTransformationError: On a length mismatch or an out-of-range entry
    """
    if n < 1:
        raise InvalidTransformationError(f"Degree must be positive, got {n}")
    if len(images) != n:
        raise InvalidTransformationError(
            f"Expected {n} images, got {len(images)}", index=min(len(images), n)
        )
    for index, value in enumerate(images):
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidTransformationError(
                f"Image at index {index} is not an integer: {value!r}", index=index
            )
        if not 0 <= value < n:
            raise InvalidTransformationError(
                f"Image at index {index} is {value}, outside [0, {n})", index=index
            )
    return Transformation(tuple(images))


def parse_transformation_json(text: str, one_indexed: bool = False) -> Transformation:
    """Parse ``[1,1,2]`` or ``{"images": [...], "one_indexed": true}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidTransformationError(f"Map is not valid JSON: {e}")

    if isinstance(data, dict):
        if "images" not in data:
            raise InvalidTransformationError("Map object needs an 'images' field")
        one_indexed = bool(data.get("one_indexed", one_indexed))
        data = data["images"]
    if not isinstance(data, list):
        raise InvalidTransformationError(f"Map must be a JSON array, got {type(data).__name__}")

    images = list(data)
    if one_indexed:
        images = [v - 1 if isinstance(v, int) and not isinstance(v, bool) else v for v in images]
    return make_transformation(len(images), images)


def to_one_indexed(a: Transformation) -> List[int]:
    return [v + 1 for v in a.images]


def _check_degrees(a: Transformation, b: Transformation) -> None:
    if a.n != b.n:
        raise DegreeMismatchError(f"Degree mismatch: {a.n} and {b.n}")


def compose(a: Transformation, b: Transformation) -> Transformation:
    """Left-to-right product: x(ab) = (xa)b."""
    _check_degrees(a, b)
    return Transformation(tuple(b.images[y] for y in a.images))


def identity(n: int) -> Transformation:
    return Transformation(tuple(range(n)))


def constant_map(n: int, c: int) -> Transformation:
    return make_transformation(n, [c] * n)


def n_cycle(n: int) -> Transformation:
    """The n-cycle x -> x + 1 (mod n)."""
    return Transformation(tuple((x + 1) % n for x in range(n)))


def power(a: Transformation, k: int) -> Transformation:
    if k < 0:
        raise ValueError(f"Power must be non-negative, got {k}")
    result = identity(a.n)
    for _ in range(k):
        result = compose(result, a)
    return result


def rank(a: Transformation) -> int:
    return len(set(a.images))


def range_of(a: Transformation) -> Tuple[int, ...]:
    return tuple(sorted(set(a.images)))


def kernel_partition(a: Transformation) -> List[Tuple[int, ...]]:
    """Kernel classes, each sorted, listed by their minimum element."""
    classes: Dict[int, List[int]] = {}
    for x, y in enumerate(a.images):
        classes.setdefault(y, []).append(x)
    return sorted((tuple(c) for c in classes.values()), key=lambda c: c[0])


def h_class_key(a: Transformation) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
    """Kernel and range together; equal keys mean H-related in T_n."""
    return tuple(kernel_partition(a)), range_of(a)


def is_idempotent(a: Transformation) -> bool:
    return all(a.images[y] == y for y in a.images)


def fixed_points(a: Transformation) -> Tuple[int, ...]:
    return tuple(x for x, y in enumerate(a.images) if x == y)


def is_group_element(a: Transformation) -> bool:
    """True iff a lies in a subgroup of T_n, i.e. Xa = Xa^2."""
    return set(a.images) == {a.images[y] for y in a.images}


def full_transformation_monoid(n: int) -> Iterator[Transformation]:
    """All n^n maps of T_n in lexicographic order of their image lists."""
    for images in itertools.product(range(n), repeat=n):
        yield Transformation(images)


def _depths(a: Transformation) -> Tuple[List[Depth], Tuple[int, ...]]:
    depth: List[Depth] = [0] * a.n
    current = set(range(a.n))
    level = 0
    while True:
        following = {a.images[x] for x in current}
        if following == current:
            break
        for x in current - following:
            depth[x] = level
        current = following
        level += 1
    for x in current:
        depth[x] = INFINITE
    return depth, tuple(sorted(current))


def height(a: Transformation, x: int, depth: Optional[Sequence[Depth]] = None) -> Depth:
    """Least k >= 1 with d(xa^k) >= d(x) + k + 1; infinite on the stable range."""
    if depth is None:
        depth = _depths(a)[0]
    if depth[x] == INFINITE:
        return INFINITE
    y = x
    k = 0
    while True:
        y = a.images[y]
        k += 1
        if depth[y] >= depth[x] + k + 1:
            return k


def digraph_profile(a: Transformation) -> DigraphProfile:
    depth, stable = _depths(a)

    cycle_lengths = []
    seen = set()
    for start in stable:
        if start in seen:
            continue
        length = 0
        y = start
        while y not in seen:
            seen.add(y)
            y = a.images[y]
            length += 1
        cycle_lengths.append(length)

    return DigraphProfile(
        depth=tuple(depth),
        height=tuple(height(a, x, depth) for x in range(a.n)),
        stable_range=stable,
        cycle_lengths=tuple(sorted(cycle_lengths)),
    )


def grasp(a: Transformation, b: Transformation, x: int) -> int:
    """Greatest k <= n with x a^k b^k = x (k = 0 always qualifies)."""
    _check_degrees(a, b)
    best = 0
    forward = x
    for k in range(1, a.n + 1):
        forward = a.images[forward]
        back = forward
        for _ in range(k):
            back = b.images[back]
        if back == x:
            best = k
    return best


def max_depth_preimages(a: Transformation) -> Dict[int, Tuple[int, ...]]:
    """For each range point, its preimages of maximal depth."""
    depth, _ = _depths(a)
    preimages: Dict[int, List[int]] = {}
    for x, y in enumerate(a.images):
        preimages.setdefault(y, []).append(x)
    result = {}
    for r, xs in preimages.items():
        deepest = max(depth[x] for x in xs)
        result[r] = tuple(x for x in xs if depth[x] == deepest)
    return result


def inverses_with_transversals(
    a: Transformation, choices: Dict[int, Sequence[int]]
) -> Iterator[Transformation]:
    # choices[r]: allowed values of rb for each range point r
    n = a.n
    range_points = sorted(choices)
    others = [x for x in range(n) if x not in choices]
    for transversal in itertools.product(*(choices[r] for r in range_points)):
        images = [0] * n
        for r, y in zip(range_points, transversal):
            images[r] = y
        targets = sorted(set(transversal))
        for rest in itertools.product(targets, repeat=len(others)):
            for x, y in zip(others, rest):
                images[x] = y
            yield Transformation(tuple(images))


def inverses_of(a: Transformation) -> FrozenSet[Transformation]:
    """V(a) in T_n, built from kernel transversals instead of scanning T_n."""
    preimages: Dict[int, List[int]] = {}
    for x, y in enumerate(a.images):
        preimages.setdefault(y, []).append(x)
    return frozenset(inverses_with_transversals(a, preimages))


def is_inverse_pair(a: Transformation, b: Transformation) -> bool:
    _check_degrees(a, b)
    ai, bi = a.images, b.images
    return all(ai[bi[ai[x]]] == ai[x] for x in range(a.n)) and all(
        bi[ai[bi[x]]] == bi[x] for x in range(a.n)
    )


def inverses_of_brute(a: Transformation) -> FrozenSet[Transformation]:
    return frozenset(b for b in full_transformation_monoid(a.n) if is_inverse_pair(a, b))
