# main.py
import asyncio
import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Tuple

from core.character import ModuleSpec
from core.rootsys import FamilyRank, format_weight, parse_weight
from nu_engine import NuEngine, translate_b_to_c
from utils.logger import get_logger

logger = get_logger("main")


def _int_list(text: str) -> List[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Minimal eigenspace codimension nu_G(V) for classical groups")
    parser.add_argument("--config", help="Path to configuration file")
    parser.add_argument("--root-of-unity-order", type=int, default=None,
                        help="Largest prime order swept by the semisimple search")
    parser.add_argument("--max-block-shapes", type=int, default=None,
                        help="Cap on canonical exponent tuples per prime (0 = no cap)")
    parser.add_argument("--witness-catalog-only", action="store_true",
                        help="Evaluate catalog witnesses only, skipping the sweep")
    parser.add_argument("--output-dir", help="Directory for result files")

    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="Compute nu for one module")
    compute.add_argument("--family", required=True, choices=["A", "B", "C", "D"])
    compute.add_argument("--rank", required=True, type=int)
    compute.add_argument("--weight", required=True, help="Coordinates (0,0,1) or om-notation (om1+om3)")
    compute.add_argument("--char", type=int, default=0, help="Characteristic p (0 or a prime)")
    compute.add_argument("--json", action="store_true", help="Print the result as JSON")

    verify = sub.add_parser("verify-tables", help="Compare computed values with the golden tables")
    verify.add_argument("--table", type=int, action="append", choices=[1, 2, 3, 4],
                        help="Table to verify (repeatable; default all)")
    verify.add_argument("--max-rank", type=int, default=None)
    verify.add_argument("--chars", type=_int_list, default=None, help="Comma separated characteristics")

    slambda = sub.add_parser("slambda", help="Lower bound s_lambda")
    slambda.add_argument("--family", required=True, choices=["A", "B", "C", "D"])
    slambda.add_argument("--rank", required=True, type=int)
    slambda.add_argument("--weight", required=True)

    translate = sub.add_parser("translate", help="B to C weight translation in characteristic 2")
    translate.add_argument("--rank", required=True, type=int)
    translate.add_argument("--weight", required=True)

    oracle = sub.add_parser("oracle-check", help="Cross-check formulas against explicit matrices")
    oracle.add_argument("--case", action="append", default=None, help="Case id (repeatable; default all)")

    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[Tuple[str, ...], Any]:
    overrides: Dict[Tuple[str, ...], Any] = {}
    if args.root_of_unity_order is not None:
        overrides[("search", "max_prime_order")] = args.root_of_unity_order
    if args.max_block_shapes is not None:
        overrides[("search", "max_block_shapes")] = args.max_block_shapes
    if args.witness_catalog_only:
        overrides[("search", "witness_catalog_only")] = True
    if args.output_dir:
        overrides[("output", "results_dir")] = args.output_dir
    return overrides


async def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        Exit code (0 for success, 1 on any failed table cell or fatal error)
    """
    args = build_parser().parse_args(argv)
    engine = NuEngine(args.config, overrides_from_args(args))

    try:
        if args.command == "compute":
            fr = FamilyRank.parse(f"{args.family}{args.rank}")
            spec = ModuleSpec.parse(fr, parse_weight(args.weight, args.rank), args.char)
            result = engine.compute_nu(spec)
            engine.reporter.save_results([result], engine.run_id)
            if args.json:
                print(json.dumps(result.model_dump(), sort_keys=True))
            else:
                print(f"{spec}: dim={result.dim_v} max_s={result.max_s} ({result.max_s_witness}) "
                      f"max_u={result.max_u} ({result.max_u_witness}) nu={result.nu} "
                      f"s_lambda={result.bound_s_lambda}")
            return 0

        if args.command == "verify-tables":
            reports = await engine.verify_tables(args.table, args.max_rank, args.chars)
            failed = [r for r in reports if r.status in ("fail", "error")]
            for report in failed:
                logger.error(f"{report.cell_id}: {report.status} {report.error or ''}".rstrip())
            passed = sum(1 for r in reports if r.status == "pass")
            corrected = sum(1 for r in reports if r.status == "erratum")
            unsupported = sum(1 for r in reports if r.status == "unsupported")
            logger.info(f"Verification complete. {passed} passed, {corrected} passed with errata, "
                        f"{len(failed)} failed, {unsupported} unsupported")
            return 1 if failed else 0

        if args.command == "slambda":
            fr = FamilyRank.parse(f"{args.family}{args.rank}")
            weight = parse_weight(args.weight, args.rank)
            print(f"s_lambda({fr}, {format_weight(weight)}) = {engine.s_lambda(fr, weight)}")
            return 0

        if args.command == "translate":
            translation = translate_b_to_c(args.rank, parse_weight(args.weight, args.rank), 2)
            print(json.dumps(translation.to_dict(), sort_keys=True))
            return 0

        if args.command == "oracle-check":
            results = await engine.oracle_check(args.case)
            bad = [r for r in results if r.status in ("mismatch", "error")]
            for r in results:
                print(f"{r.case_id}: {r.status}" + (f" ({r.message})" if r.message else ""))
            return 1 if bad else 0

        return 1

    except Exception as e:
        logger.error(f"Error in {args.command}: {str(e)}")
        return 1

    finally:
        engine.shutdown()


if __name__ == "__main__":
    try:
        exit_code = asyncio.run(main())
        sys.exit(exit_code)
    except KeyboardInterrupt:
        logger.info("Process interrupted by user")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Unhandled exception: {str(e)}")
        sys.exit(1)
