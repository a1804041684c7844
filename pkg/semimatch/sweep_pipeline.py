"""Sweep pipeline: exhaustive P_n and T_n sweeps split into chunks and merged."""

import asyncio
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from math import comb
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from semimatch.config import RuntimeConfig
from semimatch.matching import h_preservation_witness
from semimatch.orientation import (
    KRik,
    Orientation,
    classify,
    dual_case,
    dual_match,
    enumerate_pn_rank,
    gamma,
    gamma_conj,
    gamma_left,
    gamma_right,
    half_dual_match,
    mixed_match,
    natural_match,
    phi,
    phi_inv,
)
from semimatch.strong_inverse import census_from_rows, strong_inverse_rows
from semimatch.transform import Transformation, compose, h_class_key, is_inverse_pair, rank

MATCH_METHODS: Dict[str, Callable[[Transformation], Transformation]] = {
    "natural": natural_match,
    "dual": dual_match,
    "half": half_dual_match,
    "mixed": mixed_match,
}

DUAL_CASE_PAIRS = {1: 1, 2: 3, 3: 2, 4: 4}

SCAN_COLUMNS = {Orientation.OP_ONLY: 0, Orientation.OR_ONLY: 1, Orientation.BOTH: 2}


def _shift(points: Sequence[int], d: int, n: int) -> Tuple[int, ...]:
    return tuple(sorted((p + d) % n for p in points))


def _coordinate_failure(method: str, a: Transformation, b: Transformation) -> bool:
    """True when b = f(a) lands in the wrong H-class for the method."""
    c = phi_inv(a)
    d = phi_inv(b)
    n = c.n
    if method == "natural":
        return (d.K, d.R) != (c.R, c.K) or d.k != c.k
    if method == "dual":
        moved = (d.K, d.R) != (_shift(c.R, 1, n), _shift(c.K, -1, n))
        return moved or dual_case(d) != DUAL_CASE_PAIRS[dual_case(c)]
    if method == "half":
        second = phi_inv(half_dual_match(b))
        return (d.K, d.R) != (c.R, _shift(c.K, -1, n)) or (second.K, second.R) != (
            _shift(c.K, -1, n),
            _shift(c.R, -1, n),
        )
    return False


def match_sweep_chunk(method: str, n: int, t: int) -> Dict[str, Any]:
    """Check one rank of P_n under a matching method.

    Runs in worker processes, so it only takes and returns plain values.
    """
    f = MATCH_METHODS[method]
    elements = list(enumerate_pn_rank(n, t))
    images = [f(a) for a in elements]
    involution_failures = sum(1 for a, b in zip(elements, images) if f(b) != a)
    inverse_failures = sum(1 for a, b in zip(elements, images) if not is_inverse_pair(a, b))
    coordinate_failures = 0
    if t >= 2:
        coordinate_failures = sum(
            1 for a, b in zip(elements, images) if _coordinate_failure(method, a, b)
        )
    witness = h_preservation_witness(elements, f)
    return {
        "rank": t,
        "elements": len(elements),
        "images": [b.images for b in images],
        "involution_failures": involution_failures,
        "inverse_failures": inverse_failures,
        "coordinate_failures": coordinate_failures,
        "h_witness": None if witness is None else [elements[i].to_list() for i in witness],
    }


def gamma_sweep_chunk(n: int, t: int) -> Dict[str, Any]:
    """Compare the gamma formulas with direct composition on rank t of P_n."""
    g = gamma(n)
    failures = {"right": 0, "left": 0, "conjugate": 0, "right-twice": 0, "left-twice": 0}
    count = 0
    for a in enumerate_pn_rank(n, t):
        count += 1
        c: KRik = phi_inv(a)
        if phi(gamma_right(c)) != compose(a, g):
            failures["right"] += 1
        if phi(gamma_left(c)) != compose(g, a):
            failures["left"] += 1
        if phi(gamma_conj(c)) != compose(compose(g, a), g):
            failures["conjugate"] += 1
        if gamma_right(gamma_right(c)) != c:
            failures["right-twice"] += 1
        if gamma_left(gamma_left(c)) != c:
            failures["left-twice"] += 1
    return {"rank": t, "elements": count, "failures": failures}


def pn_rank_count(n: int, t: int) -> int:
    """|P_n| restricted to rank t: n constants, 2 C(n, 2)^2 at rank 2, else 2 t C(n, t)^2."""
    if t == 1:
        return n
    if t == 2:
        return 2 * comb(n, 2) ** 2
    return 2 * t * comb(n, t) ** 2


def pn_h_class_count(n: int) -> int:
    return n + sum(comb(n, t) ** 2 for t in range(2, n + 1))


def _expected_h_tally(t: int) -> Tuple[int, int, int]:
    return (t, t, 0) if t >= 3 else (0, 0, t)


def rank_scan_chunk(n: int, first: int) -> Dict[str, Any]:
    """Classify every map of T_n sending 0 to ``first``; tally P_n by rank and H-class.

    Works from ``classify`` alone, never from coordinates. H-class tallies are
    [OP-only, OR-only, both] counts keyed by kernel and range.
    """
    ranks: Dict[int, int] = {}
    h_classes: Dict[Any, List[int]] = {}
    for rest in itertools.product(range(n), repeat=n - 1):
        a = Transformation((first,) + rest)
        orientation = classify(a)
        if orientation is Orientation.NEITHER:
            continue
        t = rank(a)
        ranks[t] = ranks.get(t, 0) + 1
        h_classes.setdefault(h_class_key(a), [0, 0, 0])[SCAN_COLUMNS[orientation]] += 1
    return {"first": first, "ranks": ranks, "h_classes": h_classes}


def census_chunk(n: int, first: int) -> List[Tuple[Transformation, Tuple[Transformation, ...]]]:
    return strong_inverse_rows(n, [first])


class SweepPipeline:
    """Runs exhaustive sweeps over P_n and T_n, optionally on a process pool."""

    def __init__(self, config: Optional[RuntimeConfig] = None):
        """Initialize the pipeline.

        Args:
            config: Runtime configuration; defaults apply when omitted
        """
        self.config = config or RuntimeConfig()
        self.logger = logging.getLogger(__name__)

    async def _run_chunks(self, fn: Callable[..., Any], jobs: Sequence[Tuple[Any, ...]]) -> List:
        workers = self.config.workers
        if workers <= 1 or len(jobs) <= 1:
            return [fn(*job) for job in jobs]

        loop = asyncio.get_running_loop()
        try:
            pool = ProcessPoolExecutor(max_workers=workers)
        except (OSError, NotImplementedError) as e:
            self.logger.warning(
                f"Process pool unavailable ({e}), running {len(jobs)} chunks inline"
            )
            return [fn(*job) for job in jobs]
        with pool:
            futures = [loop.run_in_executor(pool, fn, *job) for job in jobs]
            return list(await asyncio.gather(*futures))

    def _check_bound(self, n: int) -> None:
        if n > self.config.sweep_bound:
            raise ValueError(f"n = {n} exceeds the sweep bound {self.config.sweep_bound}")
        if n < 2:
            raise ValueError(f"Sweeps need n >= 2, got {n}")

    async def run_match_sweep(self, method: str, n: int) -> Dict[str, Any]:
        """Verify a matching method on every element of P_n.

        Args:
            method: One of natural, dual, half, mixed
            n: Degree, at most the configured sweep bound

        Returns:
            Dictionary with totals, checks and the H-preservation status
        """
        self.logger.info(f"Starting {method} sweep of P_{n}")
        start_time = datetime.now()

        try:
            if method not in MATCH_METHODS:
                raise ValueError(f"Unknown matching method: {method}")
            self._check_bound(n)
            chunks = await self._run_chunks(
                match_sweep_chunk, [(method, n, t) for t in range(1, n + 1)]
            )

            total = sum(chunk["elements"] for chunk in chunks)
            images = {tuple(images) for chunk in chunks for images in chunk["images"]}
            involution_failures = sum(chunk["involution_failures"] for chunk in chunks)
            inverse_failures = sum(chunk["inverse_failures"] for chunk in chunks)
            coordinate_failures = sum(chunk["coordinate_failures"] for chunk in chunks)
            witness = next((c["h_witness"] for c in chunks if c["h_witness"] is not None), None)

            checks: List[Tuple[str, bool, str]] = [
                ("inverse law", inverse_failures == 0, f"{inverse_failures} violations"),
                ("bijection", len(images) == total, f"{len(images)} images of {total}"),
                ("coordinates", coordinate_failures == 0, f"{coordinate_failures} violations"),
            ]
            if method == "half":
                if n >= 3:
                    checks.append(
                        (
                            "not an involution",
                            involution_failures > 0,
                            f"{involution_failures} elements with f(f(a)) != a",
                        )
                    )
            else:
                detail = f"{involution_failures} violations"
                checks.append(("involution law", involution_failures == 0, detail))
            if method == "natural":
                checks.append(("H-class preserved", witness is None, str(witness)))
            if method == "mixed" and n >= 4:
                checks.append(("H-class not preserved", witness is not None, str(witness)))

            duration = (datetime.now() - start_time).total_seconds()
            self.logger.info(f"{method} sweep of P_{n}: {total} elements in {duration:.2f}s")
            return {
                "method": method,
                "n": n,
                "elements": total,
                "per_rank": {str(chunk["rank"]): chunk["elements"] for chunk in chunks},
                "h_preserving": witness is None,
                "h_witness": witness,
                "checks": checks,
                "success": True,
            }

        except Exception as e:
            self.logger.error(f"Error during {method} sweep of P_{n}: {e}")
            return {"method": method, "n": n, "error": str(e), "success": False}

    async def run_gamma_sweep(self, n: int) -> Dict[str, Any]:
        """Check the gamma formulas against composition on every rank >= 2 element of P_n."""
        self.logger.info(f"Starting gamma sweep of P_{n}")
        try:
            self._check_bound(n)
            chunks = await self._run_chunks(gamma_sweep_chunk, [(n, t) for t in range(2, n + 1)])
            failures: Dict[str, int] = {}
            for chunk in chunks:
                for name, count in chunk["failures"].items():
                    failures[name] = failures.get(name, 0) + count
            total = sum(chunk["elements"] for chunk in chunks)
            self.logger.info(f"Gamma sweep of P_{n}: {total} elements, failures {failures}")
            return {
                "n": n,
                "elements": total,
                "checks": [
                    (f"gamma {name}", count == 0, f"{count} violations")
                    for name, count in sorted(failures.items())
                ],
                "success": True,
            }
        except Exception as e:
            self.logger.error(f"Error during gamma sweep of P_{n}: {e}")
            return {"n": n, "error": str(e), "success": False}

    async def run_rank_counts(self, n: int) -> Dict[str, Any]:
        """Count P_n by rank and H-class from a scan of T_n.

        Rank counts are compared with ``pn_rank_count``. An H-class of rank
        t >= 3 holds t OP-only and t OR-only maps; lower ranks hold only maps
        that are both.
        """
        self.logger.info(f"Starting rank scan of T_{n}")
        try:
            self._check_bound(n)
            chunks = await self._run_chunks(rank_scan_chunk, [(n, first) for first in range(n)])
            counts: Dict[int, int] = {}
            tallies: Dict[Any, List[int]] = {}
            for chunk in chunks:
                for t, count in chunk["ranks"].items():
                    counts[t] = counts.get(t, 0) + count
                for key, tally in chunk["h_classes"].items():
                    merged = tallies.setdefault(key, [0, 0, 0])
                    for column, value in enumerate(tally):
                        merged[column] += value

            full = {t: counts.get(t, 0) for t in range(1, n + 1)}
            checks = [
                (f"rank {t} count", count == pn_rank_count(n, t), str(count))
                for t, count in full.items()
            ]
            off = [
                key
                for key, tally in tallies.items()
                if tuple(tally) != _expected_h_tally(len(key[1]))
            ]
            checks.append(("H-class count", len(tallies) == pn_h_class_count(n), str(len(tallies))))
            checks.append(("H-class sizes", not off, f"{len(off)} H-classes off"))
            self.logger.info(f"Rank scan of T_{n}: {sum(counts.values())} elements of P_{n}")
            return {
                "n": n,
                "counts": {str(t): count for t, count in full.items()},
                "h_classes": len(tallies),
                "checks": checks,
                "success": True,
            }
        except Exception as e:
            self.logger.error(f"Error counting ranks of P_{n}: {e}")
            return {"n": n, "error": str(e), "success": False}

    async def run_strong_census(self, n: int) -> Dict[str, Any]:
        """Strong-inverse census of T_n, one chunk per image of 0."""
        self.logger.info(f"Starting strong-inverse census of T_{n}")
        start_time = datetime.now()
        try:
            if n > 5:
                raise ValueError(f"Full strong-inverse census is limited to n <= 5, got {n}")
            chunks = await self._run_chunks(census_chunk, [(n, first) for first in range(n)])
            rows = [row for chunk in chunks for row in chunk]
            census = census_from_rows(n, rows)
            duration = (datetime.now() - start_time).total_seconds()
            self.logger.info(f"Census of T_{n} finished in {duration:.2f}s")
            return {"n": n, "census": census, "success": True}
        except Exception as e:
            self.logger.error(f"Error during census of T_{n}: {e}")
            return {"n": n, "error": str(e), "success": False}


async def main() -> None:
    """Run the natural and dual sweeps of P_5 and print their checks."""
    logging.basicConfig(level=logging.INFO)
    pipeline = SweepPipeline()
    for method in ("natural", "dual"):
        result = await pipeline.run_match_sweep(method, 5)
        for name, passed, detail in result.get("checks", []):
            print(f"{method:8} {name:20} {'ok' if passed else 'FAIL'} {detail}")


if __name__ == "__main__":
    asyncio.run(main())
