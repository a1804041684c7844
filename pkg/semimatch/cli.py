"""Command-line entry point: coordinates, matchings, censuses and the E-solid decision."""

import argparse
import asyncio
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from semimatch.config import RuntimeConfig, load_runtime_config
from semimatch.esolid import decide_permutation_matching
from semimatch.matching import (
    InvolutionObstruction,
    Matching,
    count_permutation_matchings,
    find_involution_matching,
    find_involution_matching_backtracking,
    find_permutation_matching,
)
from semimatch.orientation import (
    classify,
    make_krik,
    phi,
    phi_inv,
)
from semimatch.reports import RunReport
from semimatch.sources.cayley import load_cayley_csv
from semimatch.strong_inverse import (
    strong_graph,
    t3_unique_strong_inverses,
    t4_rank_two_components,
    t8_witness,
)
from semimatch.sweep_pipeline import MATCH_METHODS, SweepPipeline
from semimatch.transform import (
    Transformation,
    full_transformation_monoid,
    is_inverse_pair,
    parse_transformation_json,
    rank,
    to_one_indexed,
)
from semimatch.worked_examples import run_worked_examples

logger = logging.getLogger(__name__)

T4_EXPECTED = {
    "idempotent_count": 41,
    "self_inverse_nonidempotent_count": 69,
    "unique_distinct_strong_count": 110,
    "two_strong_count": 24,
    "other_count": 12,
    "total": 256,
}
T4_COMPONENTS = {"loop": 110, "pair": 55, "other-9": 4}
T4_COMPONENT_MATCHINGS = 16
T4_PERMUTATION_MATCHINGS = T4_COMPONENT_MATCHINGS**4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semimatch",
        description="Permutation and involution matchings of finite transformation semigroups",
    )
    parser.add_argument("--json", action="store_true", help="Emit canonical JSON")
    parser.add_argument(
        "--one-indexed", action="store_true", help="Read and print maps on 1..n instead of 0..n-1"
    )
    parser.add_argument("--config", help="Path to a runtime YAML file")
    parser.add_argument("--sweep-bound", type=int, help="Largest n allowed for full sweeps")
    parser.add_argument("--workers", type=int, help="Worker processes for sweeps (0 = inline)")
    parser.add_argument("--log-level", help="Logging level, e.g. DEBUG or WARNING")

    commands = parser.add_subparsers(dest="command")

    coords = commands.add_parser("coords", help="Encode or decode KRik coordinates")
    coords.set_defaults(subhelp=coords.format_help)
    coords_actions = coords.add_subparsers(dest="action")
    encode = coords_actions.add_parser("encode", help="Coordinates to a map")
    encode.add_argument("--n", type=int, required=True)
    encode.add_argument("--K", required=True, help="JSON list of kernel initial points")
    encode.add_argument("--R", required=True, help="JSON list of range points")
    encode.add_argument("--i", type=int, required=True)
    encode.add_argument("--k", type=int, required=True)
    decode = coords_actions.add_parser("decode", help="A map to its coordinates")
    decode.add_argument("--map", required=True, help="JSON image list")
    sweep = coords_actions.add_parser("sweep", help="Check the gamma formulas and rank counts")
    sweep.add_argument("--n", type=int, required=True)

    match = commands.add_parser("match", help="Apply or sweep a matching of P_n")
    match.add_argument("--method", choices=sorted(MATCH_METHODS), required=True)
    scope = match.add_mutually_exclusive_group(required=True)
    scope.add_argument("--map", help="JSON image list of a single map")
    scope.add_argument("--n", type=int, help="Sweep all of P_n")

    census = commands.add_parser("census", help="Strong-inverse censuses and witnesses")
    census.set_defaults(subhelp=census.format_help)
    targets = census.add_subparsers(dest="target")
    targets.add_parser("t4-strong", help="Census of T_4 with its component structure")
    targets.add_parser("t3-unique", help="Every map of T_3 has one strong inverse")
    witness = targets.add_parser("t8-witness", help="Hall violation by strong inverses")
    witness.add_argument("--n", type=int, default=8)
    strong = targets.add_parser("strong", help="Census of T_n for n <= 5")
    strong.add_argument("--n", type=int, required=True)

    esolid = commands.add_parser("esolid", help="Decide permutation matchings from a Cayley table")
    esolid.add_argument("--cayley", required=True, help="CSV Cayley table")

    verify = commands.add_parser("verify", help="Reproduce the worked examples")
    verify.add_argument("suite", choices=["worked-examples"])
    return parser


def _render(a: Transformation, one_indexed: bool) -> List[int]:
    return to_one_indexed(a) if one_indexed else a.to_list()


def _read_map(text: str, one_indexed: bool) -> Transformation:
    return parse_transformation_json(text, one_indexed=one_indexed)


def cmd_coords(args: argparse.Namespace, report: RunReport) -> None:
    if args.action == "encode":
        coords = make_krik(args.n, json.loads(args.K), json.loads(args.R), args.i, args.k)
        a = phi(coords)
        report.inputs.update(coords.model_dump())
        report.results["map"] = _render(a, args.one_indexed)
        report.results["orientation"] = classify(a).value
        report.add_check("round trip", phi_inv(a) == coords, coords.model_dump())
    else:
        a = _read_map(args.map, args.one_indexed)
        report.inputs["map"] = _render(a, args.one_indexed)
        report.results["orientation"] = classify(a).value
        coords = phi_inv(a)
        report.results["coordinates"] = coords.model_dump()
        report.add_check("round trip", phi(coords) == a, _render(phi(coords), args.one_indexed))


async def cmd_coords_sweep(
    args: argparse.Namespace, report: RunReport, pipeline: SweepPipeline
) -> None:
    report.inputs["n"] = args.n
    for result in (await pipeline.run_gamma_sweep(args.n), await pipeline.run_rank_counts(args.n)):
        _absorb(report, result)


def _absorb(report: RunReport, result: Dict[str, Any]) -> None:
    """Copy a pipeline result into the report; a failed run becomes a failed check."""
    if not result["success"]:
        report.add_check("error", False, result["error"])
        return
    for name, passed, detail in result.pop("checks", []):
        report.add_check(name, passed, detail)
    result.pop("success")
    report.results.update(result)


async def cmd_match(args: argparse.Namespace, report: RunReport, pipeline: SweepPipeline) -> None:
    report.inputs["method"] = args.method
    f = MATCH_METHODS[args.method]
    if args.map is not None:
        a = _read_map(args.map, args.one_indexed)
        b = f(a)
        report.inputs["map"] = _render(a, args.one_indexed)
        report.results["image"] = _render(b, args.one_indexed)
        if rank(b) >= 2:
            report.results["coordinates"] = phi_inv(b).model_dump()
        report.add_check("inverse", is_inverse_pair(a, b))
        if args.method != "half":
            report.add_check("involution", f(b) == a)
        return

    report.inputs["n"] = args.n
    _absorb(report, await pipeline.run_match_sweep(args.method, args.n))


async def cmd_census(args: argparse.Namespace, report: RunReport, pipeline: SweepPipeline) -> None:
    config = pipeline.config
    report.inputs["target"] = args.target
    if args.target == "t4-strong":
        result = await pipeline.run_strong_census(4)
        if not result["success"]:
            report.add_check("error", False, result["error"])
            return
        census = result["census"]
        observed = dict(census.model_dump(), total=census.total)
        comparison = [
            {"quantity": key, "expected": expected, "observed": observed[key]}
            for key, expected in T4_EXPECTED.items()
        ]
        report.results["census"] = census.model_dump()
        report.results["comparison"] = comparison
        for row in comparison:
            report.add_check(row["quantity"], row["expected"] == row["observed"], row["observed"])
        report.add_check("components", census.components == T4_COMPONENTS, census.components)

        graph = strong_graph(list(full_transformation_monoid(4)))
        involution = find_involution_matching(graph)
        obstructed = isinstance(involution, InvolutionObstruction)
        uncovered = len(involution.uncovered) if obstructed else 0
        odd_components = obstructed and all(len(c) % 2 == 1 for c in involution.components)
        report.add_check(
            "no involution matching by strong inverses",
            odd_components and uncovered == len(involution.components),
            f"{uncovered} uncovered vertices in odd components",
        )
        searched = find_involution_matching_backtracking(graph, limit=config.backtracking_limit)
        report.add_check(
            "backtracking agrees",
            obstructed
            and isinstance(searched, InvolutionObstruction)
            and searched.components == involution.components,
            f"limit {config.backtracking_limit}",
        )
        report.add_check(
            "permutation matching by strong inverses",
            isinstance(find_permutation_matching(graph), Matching),
        )
        matchings = count_permutation_matchings(graph)
        report.add_check(
            "permutation matching count", matchings == T4_PERMUTATION_MATCHINGS, matchings
        )

        components = t4_rank_two_components()
        report.results["rank_two_components"] = [c.model_dump() for c in components]
        report.add_check(
            "rank-two components",
            len(components) == 4
            and all(
                c.permutation_matchings == T4_COMPONENT_MATCHINGS
                and c.hamiltonian_cycle is not None
                and len(c.fixed_points) == 1
                for c in components
            ),
            [len(c.vertices) for c in components],
        )
    elif args.target == "t3-unique":
        uniqueness = t3_unique_strong_inverses()
        report.results["uniqueness"] = uniqueness.model_dump()
        report.add_check("unique strong inverse", uniqueness.unique_count == 27, uniqueness.total)
        report.add_check("(a b c) pairs with (b a c)", uniqueness.chain_pairs_ok)
    elif args.target == "t8-witness":
        report.inputs["n"] = args.n
        witness = t8_witness(args.n, full_sweep_limit=config.hall_full_sweep_limit)
        report.results["witness"] = witness.model_dump()
        report.add_check("strong inverses as expected", witness.expected_strong_inverses)
        report.add_check(
            "Hall violation",
            witness.hall_violated,
            f"|U| = {len(witness.deficient)}, |S(U)| = {len(witness.neighbourhood)}",
        )
        report.add_check(
            "exhaustive Hall sweep agrees",
            sorted(witness.exhaustive_deficient) == sorted(witness.deficient),
            witness.exhaustive_deficient,
        )
    else:
        report.inputs["n"] = args.n
        result = await pipeline.run_strong_census(args.n)
        if not result["success"]:
            report.add_check("error", False, result["error"])
            return
        census = result["census"]
        report.results["census"] = census.model_dump()
        report.add_check("total", census.total == args.n**args.n, census.total)


def cmd_esolid(args: argparse.Namespace, report: RunReport) -> None:
    report.inputs["cayley"] = args.cayley
    s = load_cayley_csv(args.cayley)
    decision = decide_permutation_matching(s)
    report.results["decision"] = decision.model_dump()
    if decision.applicable:
        report.add_check("oracle agreement", bool(decision.oracle_agreement))
        report.add_check("blocks diagonalisable", not decision.consistency_alarm)
        if decision.decision:
            report.add_check("involution matching", bool(decision.involution))


async def run_command(args: argparse.Namespace, config: RuntimeConfig) -> RunReport:
    keys = ("action", "target", "suite", "method")
    qualifier = next((getattr(args, key) for key in keys if getattr(args, key, None)), None)
    name = f"{args.command} {qualifier}" if qualifier else args.command
    report = RunReport(command=name)
    pipeline = SweepPipeline(config)
    try:
        if args.command == "coords" and args.action == "sweep":
            await cmd_coords_sweep(args, report, pipeline)
        elif args.command == "coords":
            cmd_coords(args, report)
        elif args.command == "match":
            await cmd_match(args, report, pipeline)
        elif args.command == "census":
            await cmd_census(args, report, pipeline)
        elif args.command == "esolid":
            cmd_esolid(args, report)
        else:
            run_worked_examples(report)
    except Exception as e:
        logger.error(f"{name} failed: {e}")
        report.fail(e)
    return report


def _load_config(args: argparse.Namespace) -> RuntimeConfig:
    config = load_runtime_config(args.config)
    overrides = {
        key: value
        for key, value in (
            ("sweep_bound", args.sweep_bound),
            ("workers", args.workers),
            ("log_level", args.log_level),
        )
        if value is not None
    }
    if overrides:
        config = RuntimeConfig.model_validate({**config.model_dump(), **overrides})
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    if args.command in ("coords", "census") and not (
        getattr(args, "action", None) or getattr(args, "target", None)
    ):
        print(args.subhelp(), file=sys.stderr)
        return 2

    try:
        config = _load_config(args)
    except Exception as e:
        print(f"Invalid configuration: {e}", file=sys.stderr)
        return 2

    logging.basicConfig(
        level=config.log_level.upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )

    report = asyncio.run(run_command(args, config))
    print(report.to_json() if args.json else report.to_text())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
