"""
Command-line front end.

    python cli.py burn path:16
    python cli.py pf 13,1,1 --m 4
    python cli.py pf verify --n 3 --m 3..8
    python cli.py ds 3,3/3 --m 3
    python cli.py chain 17,15,4
    python cli.py ln --n 3

Exit codes: 0 completed with a verdict, 2 inconclusive or out of budget,
1 usage or parse error.
"""

import argparse
import logging
import sys

from dotenv import load_dotenv

from models.domain import DoubleSpider, NodeStatus, PathForest, Verdict
from models.schemas import Report, RunConfig
from src.budget import SearchBudget
from src.cache import DeficiencyCache
from src.chainlab import certify_threshold, compute_threshold, expand_prec_tree, square_forest
from src.errors import BudgetExceeded, DeadlineUnattainable, NoWitnessInBudget
from src.graph import parse_graph_spec
from src.pathforest import (
    decide,
    exceptional_clause,
    predict,
    verify_linear_bounds,
    verify_path_forest_bound,
)
from src.reports import render, save_evidence, verification_rows
from src.solver import burning_number, is_m_burnable
from src.spider import decide_double_spider, head_deadline_witness, verify_double_spiders
from src.utils import Settings, parse_lengths, parse_range

logger = logging.getLogger("graphburn")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2


class Inconclusive(Exception):
    def __init__(self, report: Report, table: str):
        self.report = report
        self.table = table
        super().__init__(report.result.get("reason", "inconclusive"))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_spider(text: str) -> DoubleSpider:
    side_a, _, side_b = text.partition("/")
    arms_a = parse_lengths(side_a) if side_a.strip() else []
    arms_b = parse_lengths(side_b) if side_b.strip() else []
    return DoubleSpider(arms_a=arms_a, arms_b=arms_b)


def _budget(config: RunConfig) -> SearchBudget:
    return SearchBudget(nodes=config.node_budget, seconds=config.time_budget)


def _report(config: RunConfig, result: dict, rows=None, status="completed") -> Report:
    return Report(config=config, status=status, result=result, rows=rows or [])


def cmd_burn(args, config: RunConfig) -> tuple[Report, str]:
    g = parse_graph_spec(args.graph)
    budget = _budget(config)
    try:
        if args.m is not None:
            decision = is_m_burnable(g, int(args.m), budget)
            result = {"graph": args.graph, "m": decision.m, "burnable": decision.burnable}
        else:
            decision = burning_number(g, budget)
            result = {"graph": args.graph, "burning_number": decision.m}
    except BudgetExceeded as e:
        result = {"graph": args.graph, "reason": str(e), "lower": e.lower, "upper": e.upper}
        raise Inconclusive(_report(config, result, status="inconclusive"), "burn") from e
    result["witness"] = list(decision.witness.sources) if decision.witness else None
    row = {
        "graph": args.graph,
        "m": args.m,
        "burnable": result.get("burnable", True),
        "burning_number": result.get("burning_number"),
        "witness": " ".join(map(str, result["witness"] or [])),
    }
    return _report(config, result, [row]), "burn"


def cmd_pf(args, config: RunConfig) -> tuple[Report, str]:
    if args.target == "verify":
        if args.n is None or args.m is None:
            raise ValueError("pf verify needs --n and --m")
        report = verify_path_forest_bound(
            args.n, parse_range(args.m), jobs=config.jobs, budget_nodes=config.node_budget
        )
        return _verification(config, report), "verify"
    if args.target == "linear":
        report = verify_linear_bounds(args.n or 8)
        return _verification(config, report), "verify"

    if args.m is None:
        raise ValueError("pf needs --m")
    forest = PathForest(lengths=tuple(parse_lengths(args.target)))
    m = int(args.m)
    try:
        decision = decide(forest, m, _budget(config))
    except BudgetExceeded as e:
        result = {"forest": str(forest), "m": m, "reason": str(e)}
        raise Inconclusive(_report(config, result, status="inconclusive"), "pf") from e
    n = forest.path_count
    clause = exceptional_clause(forest, m).value if 2 <= n <= m else "n/a"
    prediction = predict(forest, m).burnable_by
    sets = [list(part) for part in decision.assignment.sets] if decision.assignment else None
    result = {
        "forest": str(forest),
        "m": m,
        "burnable": decision.burnable,
        "clause": clause,
        "prediction": prediction,
        "assignment": sets,
    }
    row = {**result, "assignment": " | ".join(",".join(map(str, s)) for s in sets or [])}
    return _report(config, result, [row]), "pf"


def cmd_ds(args, config: RunConfig) -> tuple[Report, str]:
    settings = Settings.from_env()
    if args.target == "verify":
        if args.n is None or args.m is None:
            raise ValueError("ds verify needs --n and --m")
        report = verify_double_spiders(
            int(args.m),
            args.n,
            mode=args.mode,
            samples=args.samples,
            seed=config.seed,
            jobs=config.jobs,
            budget_nodes=config.node_budget,
        )
        return _verification(config, report), "verify"

    if args.m is None:
        raise ValueError("ds needs --m")
    spider = _parse_spider(args.target)
    m = int(args.m)
    budget = _budget(config)
    try:
        decision = decide_double_spider(spider, m, budget, settings.witness_max_order)
        deadline = None
        if args.witness:
            try:
                deadline = head_deadline_witness(spider, m, budget)
            except DeadlineUnattainable as e:
                logger.error("%s", e)
    except (BudgetExceeded, NoWitnessInBudget) as e:
        result = {"spider": str(spider), "m": m, "reason": str(e)}
        raise Inconclusive(_report(config, result, status="inconclusive"), "ds") from e
    result = {
        "spider": str(spider),
        "m": m,
        "burnable": decision.burnable,
        "reason": decision.reason,
        "witness": list(decision.witness.sources) if decision.witness else None,
    }
    if args.witness:
        result["rounds_after_heads"] = deadline.rounds_after_heads if deadline else None
        result["deadline_witness"] = list(deadline.sequence.sources) if deadline else None
    row = {
        **result,
        "witness": " ".join(map(str, result["witness"] or [])),
        "rounds_after_heads": result.get("rounds_after_heads"),
    }
    return _report(config, result, [row]), "ds"


def cmd_chain(args, config: RunConfig) -> tuple[Report, str]:
    settings = Settings.from_env()
    root = square_forest(parse_lengths(args.lengths))
    cache = DeficiencyCache(config.cache_path)
    try:
        tree = expand_prec_tree(
            root,
            node_budget=args.tree_nodes or settings.chain_nodes,
            m_budget=args.max_m or settings.chain_max_m,
            budget=_budget(config),
            cache=cache,
        )
    except BudgetExceeded as e:
        result = {"forest": str(root.forest), "reason": str(e)}
        raise Inconclusive(_report(config, result, status="inconclusive"), "chain") from e

    rows = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        rows.append(
            {
                "forest": str(node.forest.forest),
                "m": node.forest.m,
                "status": node.status.value,
                "children": ";".join(str(child.forest.forest) for child in node.children),
            }
        )
        stack.extend(reversed(node.children))
    leaves = [row for row in rows if row["status"] != NodeStatus.EXPANDED.value]
    result = {
        "forest": str(root.forest),
        "m": root.m,
        "node_count": tree.node_count,
        "max_m": tree.max_m,
        "open_leaves": tree.open_count,
        "closed_leaves": len(leaves) - tree.open_count,
        "finite": tree.finite,
    }
    report = _report(config, result, rows, status="completed" if tree.finite else "inconclusive")
    if not tree.finite:
        raise Inconclusive(report, "chain")
    return report, "chain"


def cmd_ln(args, config: RunConfig) -> tuple[Report, str]:
    settings = Settings.from_env()
    cache = DeficiencyCache(config.cache_path)
    budget = _budget(config)
    if args.L is not None:
        outcome = certify_threshold(
            args.n, args.L, settings.chain_nodes, settings.chain_max_m, budget, cache, expand=args.expand
        )
        verdict, L, witness, evidence = outcome.verdict, args.L, outcome.witness, outcome.evidence  # noqa: N806
    else:
        outcome = compute_threshold(
            args.n, settings.chain_nodes, settings.chain_max_m, budget, cache, expand=args.expand
        )
        verdict, L, witness, evidence = outcome.verdict, outcome.L, outcome.witness, outcome.evidence  # noqa: N806

    result = {
        "n": args.n,
        "L": L,
        "verdict": verdict.value,
        "witness": list(witness.lengths) if witness else None,
        "evidence": evidence.model_dump(mode="json") if evidence else None,
    }
    row = {
        "n": args.n,
        "L": L,
        "verdict": verdict.value,
        "witness": ",".join(map(str, witness.lengths)) if witness else "",
        "threshold_m": evidence.threshold_m if evidence else None,
    }
    status = "inconclusive" if verdict is Verdict.INCONCLUSIVE else "completed"
    report = _report(config, result, [row], status=status)
    if args.evidence:
        save_evidence(report, args.evidence)
    if verdict is Verdict.INCONCLUSIVE:
        raise Inconclusive(report, "ln")
    return report, "ln"


def _verification(config: RunConfig, report) -> Report:
    result = {
        "kind": report.kind,
        "params": report.params,
        "checked": report.checked,
        "violations": len(report.violations),
        "counts": report.counts,
    }
    return _report(config, result, verification_rows(report))


COMMANDS = {"burn": cmd_burn, "pf": cmd_pf, "ds": cmd_ds, "chain": cmd_chain, "ln": cmd_ln}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
    common.add_argument("--budget-nodes", type=int, default=None, help="search node budget")
    common.add_argument("--budget-secs", type=float, default=None, help="wall-clock budget")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--cache", default=None, help="deficiency cache file")
    common.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="graphburn", description="Exact graph burning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    burn = sub.add_parser("burn", parents=[common], help="burning number or m-burnability of a graph")
    burn.add_argument("graph", help="path:16, spider:5,5,6, dspider:5,5/6 or an edge-list file")
    burn.add_argument("--m", type=int, default=None)

    pf = sub.add_parser("pf", parents=[common], help="path forests")
    pf.add_argument("target", help="comma list of path orders, `verify` or `linear`")
    pf.add_argument("--m", default=None, help="rounds, or an inclusive range a..b for verify")
    pf.add_argument("--n", type=int, default=None)

    ds = sub.add_parser("ds", parents=[common], help="double spiders")
    ds.add_argument("target", help="arms as `5,5/6` (head A / head B) or `verify`")
    ds.add_argument("--m", default=None)
    ds.add_argument("--n", type=int, default=None)
    ds.add_argument("--witness", action="store_true", help="also find a head-deadline witness")
    ds.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    ds.add_argument("--samples", type=int, default=1000)

    chain = sub.add_parser("chain", parents=[common], help="extension tree of a deficient forest")
    chain.add_argument("lengths")
    chain.add_argument("--tree-nodes", type=int, default=None)
    chain.add_argument("--max-m", type=int, default=None)

    ln = sub.add_parser("ln", parents=[common], help="threshold L_n")
    ln.add_argument("--n", type=int, required=True)
    ln.add_argument("--L", type=int, default=None, help="certify this L only")
    ln.add_argument("--expand", action="store_true", help="expand extension trees of counterexamples")
    ln.add_argument("--evidence", default=None, help="write the JSON report here")
    return parser


def make_config(args, settings: Settings) -> RunConfig:
    arguments = {
        key: value
        for key, value in vars(args).items()
        if key not in {"command", "jobs", "budget_nodes", "budget_secs", "seed", "format", "cache", "verbose"}
    }
    return RunConfig(
        command=args.command,
        arguments=arguments,
        node_budget=args.budget_nodes or settings.node_budget,
        time_budget=args.budget_secs or settings.time_budget,
        seed=settings.seed if args.seed is None else args.seed,
        jobs=args.jobs or settings.jobs,
        output_format=args.format,
        cache_path=args.cache or settings.cache_path,
    )


def main(argv=None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = make_config(args, Settings.from_env())
        report, table = COMMANDS[args.command](args, config)
    except Inconclusive as e:
        print(render(e.report, e.table))
        return EXIT_INCONCLUSIVE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(render(report, table))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
