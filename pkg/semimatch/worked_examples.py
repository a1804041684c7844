"""Worked examples reproduced as named checks.

Each check returns ``(passed, detail)``; ``run_worked_examples`` collects them
into a report in a fixed order.
"""

import logging
from typing import Callable, List, Tuple

from semimatch.matching import (
    InvolutionObstruction,
    count_permutation_matchings,
    find_involution_matching,
)
from semimatch.orientation import (
    Orientation,
    classify,
    cycle_size,
    dual_case,
    dual_match,
    gamma,
    gamma_conj,
    make_krik,
    natural_match,
    phi,
    phi_inv,
)
from semimatch.reports import RunReport
from semimatch.strong_inverse import (
    closure,
    is_inverse_subsemigroup,
    strong_graph,
    strong_inverses,
    t4_census,
    t4_rank_two_components,
    t8_witness,
)
from semimatch.transform import (
    Transformation,
    compose,
    full_transformation_monoid,
    is_idempotent,
)

logger = logging.getLogger(__name__)

CheckResult = Tuple[bool, str]

DECODE_TEN = Transformation((3, 2, 2, 8, 8, 6, 6, 4, 3, 3))


def alternating_idempotent(half: int) -> Transformation:
    """The idempotent of degree 2*half sending 2j and 2j+1 to 2j+1."""
    return Transformation(tuple(x | 1 for x in range(2 * half)))


def check_decode_ten() -> CheckResult:
    c = phi_inv(DECODE_TEN)
    expected = make_krik(10, [1, 3, 5, 7, 8], [2, 3, 4, 6, 8], 0, -1)
    conj = gamma_conj(c)
    g = gamma(10)
    direct = compose(compose(g, DECODE_TEN), g)
    passed = (
        c == expected
        and classify(DECODE_TEN) is Orientation.OR_ONLY
        and conj == make_krik(10, [2, 3, 5, 7, 9], [1, 3, 5, 6, 7], 2, -1)
        and phi(conj) == direct
        and direct.images == (6, 6, 5, 3, 3, 1, 1, 7, 7, 6)
    )
    return passed, f"coordinates {c.K} {c.R} i={c.i} k={c.k}; conjugate {direct.to_list()}"


def check_natural_reversing() -> CheckResult:
    a = phi(make_krik(8, [0, 2, 4, 6], [1, 3, 5, 7], 3, -1))
    b = natural_match(a)
    passed = a.images == (7, 7, 5, 5, 3, 3, 1, 1) and b.images == (0, 6, 6, 4, 4, 2, 2, 0)
    return passed, f"{a.to_list()} -> {b.to_list()}"


def check_natural_preserving() -> CheckResult:
    a = phi(make_krik(10, [0, 2, 4, 7, 8, 9], [0, 1, 2, 5, 6, 7], 4, 1))
    b = natural_match(a)
    passed = (
        a.images == (6, 6, 7, 7, 0, 0, 0, 1, 2, 5)
        and b.images == (4, 7, 8, 8, 8, 9, 0, 2, 2, 2)
        and phi_inv(b) == make_krik(10, [0, 1, 2, 5, 6, 7], [0, 2, 4, 7, 8, 9], 2, 1)
    )
    return passed, f"{a.to_list()} -> {b.to_list()}"


def check_natural_leaves_groups() -> CheckResult:
    a = Transformation((1, 1, 2))
    b = natural_match(a)
    square = compose(b, b)
    passed = b.images == (2, 0, 2) and square.images == (2, 2, 2) and is_idempotent(a)
    return passed, f"{a.to_list()} -> {b.to_list()}, square {square.to_list()}"


def check_alternating_idempotent(half: int = 4) -> CheckResult:
    a = alternating_idempotent(half)
    b = natural_match(a)
    before, after = cycle_size(a), cycle_size(b)
    return before == 1 and after == half, f"c(a) = {before}, c(a') = {after}"


def _dual_check(coords: Tuple, expected_images: Tuple[int, ...], fixed: bool) -> CheckResult:
    n, K, R, i, k = coords
    a = phi(make_krik(n, K, R, i, k))
    b = dual_match(a)
    passed = b.images == expected_images and dual_match(b) == a and (b == a) == fixed
    return passed, f"case {dual_case(phi_inv(a))}: {a.to_list()} -> {b.to_list()}"


def check_dual_idempotent() -> CheckResult:
    passed, detail = _dual_check(
        (8, [0, 2, 4, 6], [1, 3, 5, 7], 0, 1), (1, 1, 3, 3, 5, 5, 7, 7), True
    )
    natural = natural_match(phi(make_krik(8, [0, 2, 4, 6], [1, 3, 5, 7], 0, 1)))
    return passed and natural.images == (6, 0, 0, 2, 2, 4, 4, 6), detail


def check_dual_reversing_fixed() -> CheckResult:
    passed, detail = _dual_check(
        (8, [0, 2, 4, 6], [1, 3, 5, 7], 3, -1), (7, 7, 5, 5, 3, 3, 1, 1), True
    )
    a = phi(make_krik(8, [0, 2, 4, 6], [1, 3, 5, 7], 3, -1))
    return passed and natural_match(a) != a, detail


def check_dual_case_one() -> CheckResult:
    passed, detail = _dual_check(
        (10, [1, 3, 5, 7, 8], [2, 3, 4, 6, 8], 4, -1), (0, 0, 0, 7, 6, 4, 4, 2, 2, 0), False
    )
    a = phi(make_krik(10, [1, 3, 5, 7, 8], [2, 3, 4, 6, 8], 4, -1))
    return passed and dual_case(phi_inv(a)) == 1, detail


def check_dual_cases_two_three() -> CheckResult:
    passed, detail = _dual_check(
        (10, [1, 2, 5, 7, 8, 9], [0, 4, 5, 6, 7, 9], 4, 1), (6, 7, 7, 7, 7, 8, 0, 1, 4, 4), False
    )
    a = phi(make_krik(10, [1, 2, 5, 7, 8, 9], [0, 4, 5, 6, 7, 9], 4, 1))
    b = dual_match(a)
    cases = (dual_case(phi_inv(a)), dual_case(phi_inv(b)))
    return passed and cases == (2, 3) and phi_inv(b).i == 3, detail


def check_t3_closures() -> CheckResult:
    a = Transformation((1, 2, 2))
    partner = Transformation((2, 0, 2))
    brandt = closure([a, partner])
    seven = closure([a, Transformation((0, 0, 1))])
    reflection = Transformation((2, 0, 0))
    passed = (
        strong_inverses(a) == frozenset({partner})
        and brandt.order == 5
        and is_inverse_subsemigroup(brandt)
        and seven.order == 7
        and not is_inverse_subsemigroup(seven)
        and strong_inverses(reflection) == frozenset({reflection})
    )
    return passed, f"orders {brandt.order} and {seven.order}"


def check_t4_census() -> CheckResult:
    census = t4_census()
    graph = strong_graph(list(full_transformation_monoid(4)))
    involution = find_involution_matching(graph)
    matchings = count_permutation_matchings(graph)
    components = t4_rank_two_components()
    passed = (
        (
            census.idempotent_count,
            census.self_inverse_nonidempotent_count,
            census.unique_distinct_strong_count,
            census.two_strong_count,
            census.other_count,
        )
        == (41, 69, 110, 24, 12)
        and census.components == {"loop": 110, "pair": 55, "other-9": 4}
        and isinstance(involution, InvolutionObstruction)
        and len(involution.uncovered) == 4
        and matchings == 16**4
        and all(c.hamiltonian_cycle is not None for c in components)
    )
    return passed, f"{census.model_dump()}; {matchings} permutation matchings"


def check_t8_witness() -> CheckResult:
    report = t8_witness()
    passed = (
        report.expected_strong_inverses
        and report.hall_violated
        and len(report.deficient) == 3
        and len(report.neighbourhood) == 2
    )
    return passed, f"|U| = {len(report.deficient)}, |S(U)| = {len(report.neighbourhood)}"


WORKED_EXAMPLES: List[Tuple[str, Callable[[], CheckResult]]] = [
    ("coordinates and gamma conjugate of a reversing map of degree 10", check_decode_ten),
    ("natural inverse of a reversing map of degree 8", check_natural_reversing),
    ("natural inverse of a preserving map of degree 10", check_natural_preserving),
    ("natural inverse of an idempotent leaves every subgroup", check_natural_leaves_groups),
    ("natural inverse of the alternating idempotent is a full cycle", check_alternating_idempotent),
    ("dual inverse fixes an idempotent (wrap-around at both ends)", check_dual_idempotent),
    ("dual inverse fixes a reversing map the natural one moves", check_dual_reversing_fixed),
    ("dual inverse without wrap-around", check_dual_case_one),
    ("dual inverse swaps the one-sided wrap-around cases", check_dual_cases_two_three),
    ("strong inverses and closures in T_3", check_t3_closures),
    ("strong-inverse census of T_4", check_t4_census),
    ("Hall violation by strong inverses in T_8", check_t8_witness),
]


def run_worked_examples(report: RunReport) -> RunReport:
    for name, check in WORKED_EXAMPLES:
        try:
            passed, detail = check()
        except Exception as e:
            logger.error(f"Worked example '{name}' raised: {e}")
            passed, detail = False, f"{type(e).__name__}: {e}"
        report.add_check(name, passed, detail)
    report.results["examples"] = len(WORKED_EXAMPLES)
    return report
