"""Orientation-preserving and -reversing maps: KRik coordinates, the gamma calculus
and the natural, dual, half-dual and mixed matchings on P_n."""

import itertools
import logging
from bisect import bisect_right
from enum import Enum
from typing import Any, Iterable, Iterator, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from semimatch.transform import (
    Transformation,
    compose,
    digraph_profile,
    rank,
)

logger = logging.getLogger(__name__)


class NotInPnError(ValueError):
    """Raised when a map is neither orientation-preserving nor orientation-reversing."""


class InvalidCoordinatesError(ValueError):
    """Raised for malformed KRik coordinates or maps that carry none."""


class Orientation(str, Enum):
    OP_ONLY = "OP-only"
    OR_ONLY = "OR-only"
    BOTH = "both"
    NEITHER = "neither"


class KRik(BaseModel):
    """Coordinates (K, R, i, k) of a rank >= 2 element of P_n.

    K lists the initial points of the kernel classes, R the range, and the
    class starting at K[j] maps to R[(i + k*j) mod t]. At rank 2 both
    parities give the same map, so k is stored as +1.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    K: Tuple[int, ...]
    R: Tuple[int, ...]
    i: int
    k: int

    @model_validator(mode="before")
    @classmethod
    def _normalise(cls, data: Any) -> Any:
        if isinstance(data, dict):
            data = dict(data)
            t = len(data.get("K") or ())
            if t >= 2 and isinstance(data.get("i"), int):
                data["i"] = data["i"] % t
            if t == 2 and data.get("k") in (1, -1):
                data["k"] = 1
        return data

    @model_validator(mode="after")
    def _check(self) -> "KRik":
        t = len(self.K)
        if t < 2:
            raise ValueError(f"rank must be at least 2, got {t}")
        if len(self.R) != t:
            raise ValueError(f"|K| = {t} but |R| = {len(self.R)}")
        for name, points in (("K", self.K), ("R", self.R)):
            if any(b <= a for a, b in zip(points, points[1:])):
                raise ValueError(f"{name} must be strictly increasing: {list(points)}")
            if points[0] < 0 or points[-1] >= self.n:
                raise ValueError(f"{name} must lie in [0, {self.n}): {list(points)}")
        if self.k not in (1, -1):
            raise ValueError(f"k must be +1 or -1, got {self.k}")
        return self

    @property
    def t(self) -> int:
        return len(self.K)


def make_krik(n: int, K: Iterable[int], R: Iterable[int], i: int, k: int) -> KRik:
    """Build coordinates from unsorted point sets, reducing i mod t."""
    try:
        return KRik(n=n, K=tuple(sorted(K)), R=tuple(sorted(R)), i=i, k=k)
    except ValidationError as e:
        raise InvalidCoordinatesError(str(e))


def is_cyclic(seq: Sequence[int]) -> bool:
    """At most one cyclic descent a_j > a_{j+1}, wrapping at the end."""
    if not seq:
        raise ValueError("Sequence must be nonempty")
    t = len(seq)
    descents = sum(1 for j in range(t) if seq[j] > seq[(j + 1) % t])
    return descents <= 1


def is_anticyclic(seq: Sequence[int]) -> bool:
    return is_cyclic(list(reversed(seq)))


def classify(a: Transformation) -> Orientation:
    cyclic = is_cyclic(a.images)
    anticyclic = is_anticyclic(a.images)
    if cyclic and anticyclic:
        return Orientation.BOTH
    if cyclic:
        return Orientation.OP_ONLY
    if anticyclic:
        return Orientation.OR_ONLY
    return Orientation.NEITHER


def is_in_pn(a: Transformation) -> bool:
    return classify(a) is not Orientation.NEITHER


def is_orientation_preserving(a: Transformation) -> bool:
    return classify(a) in (Orientation.OP_ONLY, Orientation.BOTH)


def _require_pn(a: Transformation) -> None:
    if not is_in_pn(a):
        raise NotInPnError(f"{a} is neither orientation-preserving nor orientation-reversing")


def phi(c: KRik) -> Transformation:
    t = c.t
    images = []
    for x in range(c.n):
        j = (bisect_right(c.K, x) - 1) % t
        images.append(c.R[(c.i + c.k * j) % t])
    return Transformation(tuple(images))


def phi_inv(a: Transformation) -> KRik:
    """Recover (K, R, i, k) from a rank >= 2 element of P_n."""
    _require_pn(a)
    n = a.n
    t = rank(a)
    if t < 2:
        raise InvalidCoordinatesError(f"Constant map {a} carries no KRik coordinates")

    images = a.images
    K = tuple(x for x in range(n) if images[x] != images[(x - 1) % n])
    if len(K) != t:
        raise NotInPnError(f"Kernel classes of {a} are not cyclic intervals")
    R = tuple(sorted(set(images)))
    i = R.index(images[K[0]])
    if t == 2:
        k = 1
    else:
        k = 1 if R.index(images[K[1]]) == (i + 1) % t else -1

    coords = make_krik(n, K, R, i, k)
    if phi(coords) != a:
        raise NotInPnError(f"{a} does not decode from its own coordinates")
    return coords


def rho(a: Transformation) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    c = phi_inv(a)
    return c.K, c.R


def gamma(n: int) -> Transformation:
    """The reflection x -> n - 1 - x."""
    return Transformation(tuple(n - 1 - x for x in range(n)))


def _shifted(points: Iterable[int], d: int, n: int) -> List[int]:
    return sorted((p + d) % n for p in points)


def _reflected(points: Iterable[int], c: int, n: int) -> List[int]:
    # c - p (mod n) for each point
    return sorted((c - p) % n for p in points)


def gamma_right(c: KRik) -> KRik:
    """Coordinates of a*gamma."""
    return make_krik(c.n, c.K, _reflected(c.R, c.n - 1, c.n), -(c.i + 1), -c.k)


def gamma_left(c: KRik) -> KRik:
    """Coordinates of gamma*a."""
    shift = c.i - c.k if 0 in c.K else c.i - 2 * c.k
    return make_krik(c.n, _reflected(c.K, 0, c.n), c.R, shift, -c.k)


def gamma_conj(c: KRik) -> KRik:
    """Coordinates of gamma*a*gamma."""
    shift = c.k - (c.i + 1) if 0 in c.K else 2 * c.k - (c.i + 1)
    return make_krik(c.n, _reflected(c.K, 0, c.n), _reflected(c.R, c.n - 1, c.n), shift, c.k)


def natural_match(a: Transformation) -> Transformation:
    """The involution matching a -> Phi(R, K, -ki, k); constants are fixed."""
    _require_pn(a)
    if rank(a) == 1:
        return a
    c = phi_inv(a)
    return phi(make_krik(c.n, c.R, c.K, -c.k * c.i, c.k))


def dual_case(c: KRik) -> int:
    """Which of the four wrap-around cases of the dual matching applies."""
    zero_in_k = 0 in c.K
    top_in_r = c.n - 1 in c.R
    if not zero_in_k:
        return 2 if top_in_r else 1
    return 4 if top_in_r else 3


def dual_match(a: Transformation) -> Transformation:
    """The dual involution matching a -> Phi(R+1, K-1, i', k); constants are fixed."""
    _require_pn(a)
    if rank(a) == 1:
        return a
    c = phi_inv(a)
    i, k = c.i, c.k
    shift = {
        1: 1 + k * (1 - i),
        2: 1 - k * i,
        3: k * (1 - i),
        4: -k * i,
    }[dual_case(c)]
    return phi(make_krik(c.n, _shifted(c.R, 1, c.n), _shifted(c.K, -1, c.n), shift, k))


def half_dual_match(a: Transformation) -> Transformation:
    """The unique inverse of a with rho = (R, K-1).

    The interval [r_m, r_{m+1} - 1] goes to the terminal point of the kernel
    class mapping onto r_m.
    """
    _require_pn(a)
    if rank(a) == 1:
        return a
    c = phi_inv(a)
    n, t = c.n, c.t
    terminal = {}
    for j in range(t):
        terminal[a.images[c.K[j]]] = (c.K[(j + 1) % t] - 1) % n
    images = []
    for x in range(n):
        m = (bisect_right(c.R, x) - 1) % t
        images.append(terminal[c.R[m]])
    return Transformation(tuple(images))


def other_half_dual_match(a: Transformation) -> Transformation:
    """The unique inverse of a with rho = (R+1, K).

    The interval [r_{m-1} + 1, r_m] goes to the initial point of the kernel
    class mapping onto r_m.
    """
    _require_pn(a)
    if rank(a) == 1:
        return a
    c = phi_inv(a)
    n, t = c.n, c.t
    initial = {a.images[start]: start for start in c.K}
    starts = _shifted(c.R, 1, n)
    images = []
    for x in range(n):
        m = (bisect_right(starts, x) - 1) % t
        # the interval ends at the range point it contains
        images.append(initial[(starts[(m + 1) % t] - 1) % n])
    return Transformation(tuple(images))


def mixed_match(a: Transformation) -> Transformation:
    """Natural matching on OP_n, dual matching on P_n minus OP_n."""
    if is_orientation_preserving(a):
        return natural_match(a)
    return dual_match(a)


def naive_dual_extension(b: Transformation) -> Transformation:
    """Extend the natural matching through b = a*gamma by b -> gamma * a'.

    Applied twice this drifts to the H-class (K+1, R+1) instead of returning b.
    """
    _require_pn(b)
    g = gamma(b.n)
    return compose(g, natural_match(compose(b, g)))


def op_factorize(a: Transformation) -> Tuple[int, Transformation]:
    """Write a non-constant OP map uniquely as (n-cycle)^r * phi with phi order-preserving."""
    if rank(a) == 1:
        raise ValueError(f"Constant map {a} has no unique factorization")
    if not is_orientation_preserving(a):
        raise NotInPnError(f"{a} is not orientation-preserving")
    n = a.n
    for r in range(n):
        candidate = [a.images[(y - r) % n] for y in range(n)]
        if all(u <= v for u, v in zip(candidate, candidate[1:])):
            return r, Transformation(tuple(candidate))
    raise NotInPnError(f"{a} has no order-preserving factor")


def cycle_size(a: Transformation) -> int:
    """The common cycle length c(a) of an orientation-preserving map."""
    if not is_orientation_preserving(a):
        raise NotInPnError(f"{a} is not orientation-preserving")
    lengths = set(digraph_profile(a).cycle_lengths)
    if len(lengths) != 1:
        raise NotInPnError(f"Cycles of {a} have unequal lengths {sorted(lengths)}")
    return lengths.pop()


def h_class_of(a: Transformation) -> List[Transformation]:
    """All members of P_n sharing kernel and range with a, sorted."""
    _require_pn(a)
    if rank(a) == 1:
        return [a]
    c = phi_inv(a)
    parities = (1,) if c.t == 2 else (1, -1)
    return sorted({phi(make_krik(c.n, c.K, c.R, i, k)) for i in range(c.t) for k in parities})


def enumerate_pn_rank(n: int, t: int) -> Iterator[Transformation]:
    """Elements of P_n of rank t; constants for t = 1, coordinates otherwise."""
    if t == 1:
        for c in range(n):
            yield Transformation((c,) * n)
        return
    parities = (1,) if t == 2 else (1, -1)
    for K in itertools.combinations(range(n), t):
        for R in itertools.combinations(range(n), t):
            for i in range(t):
                for k in parities:
                    yield phi(KRik(n=n, K=K, R=R, i=i, k=k))


def enumerate_pn(n: int) -> Iterator[Transformation]:
    """Every element of P_n once, by increasing rank."""
    for t in range(1, n + 1):
        logger.debug(f"Enumerating rank {t} of P_{n}")
        yield from enumerate_pn_rank(n, t)


def enumerate_op(n: int) -> Iterator[Transformation]:
    return (a for a in enumerate_pn(n) if is_orientation_preserving(a))


def enumerate_or(n: int) -> Iterator[Transformation]:
    return (a for a in enumerate_pn(n) if classify(a) in (Orientation.OR_ONLY, Orientation.BOTH))
