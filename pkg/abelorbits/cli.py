#!/usr/bin/env python3
"""
Command-line front end for abelorbits

Usage:
    python -m abelorbits.cli enumerate --family C --rank 2
    python -m abelorbits.cli enumerate --family B --rank 3 --matrices
    python -m abelorbits.cli poset --family D --rank 4 --order overlay
    python -m abelorbits.cli verify --check lengths --family D --rank 4
    python -m abelorbits.cli lengths --family A --rank 3 --format ascii
    python -m abelorbits.cli replay --report reports.jsonl --line 3

Exit codes: 0 pass, 1 counterexample, 2 usage.
"""
import sys
import json
import argparse
import logging
from typing import Optional

import pandas as pd
from pydantic import ValidationError

from .config import settings
from .errors import IntegrityError
from .linkpattern import (
    disjoint_sets,
    length_formula,
    pattern_of,
    render_ascii,
    serialize,
    shape_counts,
    stat_b,
    stat_c,
    stat_r,
)
from .matrixrep import dump, representative
from .models import CliConfig, LengthRow, OrbitRow
from .orbits import (
    build_poset,
    disagreement_edges,
    enumerate_orbits,
    poset_document,
    poset_to_dot,
    poset_to_json,
    predicted_coadjoint_dimension,
    predicted_dimension,
)
from .verify import ReportSink, replay, run_suite
from .weyl import disjoint_reflection_decomposition, involution_from_roots, length

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.INFO if verbose else getattr(logging, settings.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _table(rows: list, fmt: str) -> str:
    records = [row.model_dump(exclude_none=True) for row in rows]
    if fmt == "json":
        return json.dumps(records, sort_keys=True, indent=2) + "\n"
    return pd.DataFrame(records).to_csv(sep="\t", index=False)


def cmd_enumerate(config: CliConfig) -> int:
    """One row per orbit label with its involution, lengths and predicted dimensions"""
    nid = config.nilradical_id()
    t = nid.type
    rows = []
    grids = []
    for label in enumerate_orbits(nid):
        arcs = pattern_of(disjoint_reflection_decomposition(label.involution), t).size
        grid = dump(representative(t, label.roots)) if config.matrices else None
        rows.append(OrbitRow(
            label=str(label),
            cardinality=label.cardinality,
            arcs=arcs,
            involution=str(label.involution),
            length_sigma=length(label.involution, t),
            length_conjugate=length(label.conjugate, t),
            dimension=predicted_dimension(label),
            coadjoint_dimension=predicted_coadjoint_dimension(label),
            matrix=grid.splitlines() if grid is not None and config.format == "json" else None,
        ))
        if grid is not None:
            grids.append(f"# {label}\n{grid}\n")
    logger.info(f"{nid}: {len(rows)} orbits")
    text = _table(rows, config.format)
    if grids and config.format == "tsv":
        # matrix blocks follow the table, one per label
        text += "\n" + "\n".join(grids)
    _emit(text, config.out)
    return EXIT_PASS


def cmd_poset(config: CliConfig) -> int:
    """Hasse diagram of one order, or the geometric diagram with disagreement edges overlaid"""
    nid = config.nilradical_id()
    if config.order != "overlay":
        order = "geometric" if config.order == "geometric" else "bruhat_predicted"
        poset = build_poset(nid, order)
        text = poset_to_json(poset) + "\n" if config.format == "json" else poset_to_dot(poset)
        _emit(text, config.out)
        return EXIT_PASS

    geometric = build_poset(nid, "geometric")
    bruhat = build_poset(nid, "bruhat_predicted")
    disagreements = disagreement_edges(geometric, bruhat)
    if config.format == "json":
        text = json.dumps(
            {
                "geometric": poset_document(geometric).model_dump(),
                "bruhat_predicted": poset_document(bruhat).model_dump(),
                "disagreements": [list(edge) for edge in disagreements],
            },
            sort_keys=True,
            indent=2,
        ) + "\n"
    else:
        text = poset_to_dot(geometric, disagreements)
    _emit(text, config.out)
    if disagreements:
        logger.error(f"{nid}: {len(disagreements)} disagreement edges")
        return EXIT_FAIL
    return EXIT_PASS


def cmd_verify(config: CliConfig) -> int:
    """Run the selected checks; JSON-lines reports go to --out (appended) or stdout"""
    families = [config.family] if config.family else None
    ranks = [config.rank] if config.rank else None
    kwargs = dict(
        checks=[config.check],
        ranks=ranks,
        fault="flip" if config.inject_fault else None,
        workers=config.workers,
        nilradical=config.nilradical,
        oracle_max_rank=config.max_rank_bruhat_oracle,
    )
    if families:
        kwargs["families"] = families
    sink = ReportSink(path=config.out) if config.out else ReportSink(stream=sys.stdout)
    with sink:
        reports = run_suite(sink=sink, **kwargs)
    failed = [r for r in reports if not r.passed]
    if failed:
        for r in failed:
            logger.error(f"FAIL {r.check} {r.nilradical or f'{r.family}{r.rank}'}")
        return EXIT_FAIL
    return EXIT_PASS


def cmd_lengths(config: CliConfig) -> int:
    """Every disjoint shape of the type with its statistics, closed form and inversion count"""
    t = config.root_system()
    rows, pictures = [], []
    for S in sorted(disjoint_sets(t), key=lambda s: (len(s), sorted(s))):
        roots = sorted(S)
        p = pattern_of(roots, t)
        formula = length_formula(t.family, roots)
        brute = length(involution_from_roots(roots, t.dimension, t.family), t)
        row = LengthRow(
            roots=",".join(str(r) for r in roots) or "0",
            arcs=p.size,
            a=shape_counts(roots).a,
            c=stat_c(p),
            r=stat_r(p),
            b=stat_b(p),
            formula=formula,
            brute_force=brute,
            verdict="ok" if formula == brute else "mismatch",
        )
        rows.append(row)
        pictures.append(
            f"{row.roots}  {serialize(p)}  length={brute} formula={formula} {row.verdict}\n"
            f"{render_ascii(p)}\n"
        )
    if config.format == "ascii":
        _emit("\n".join(pictures), config.out)
    else:
        _emit(_table(rows, config.format), config.out)
    mismatches = sum(1 for row in rows if row.verdict != "ok")
    if mismatches:
        logger.error(f"{t}: {mismatches} length mismatches")
        return EXIT_FAIL
    return EXIT_PASS


def cmd_replay(config: CliConfig) -> int:
    """Re-run the checks recorded in a JSON-lines report file"""
    with open(config.report) as f:
        lines = [line for line in f.read().splitlines() if line.strip()]
    if config.line is not None:
        if config.line > len(lines):
            raise ValueError(f"{config.report} has {len(lines)} reports, not {config.line}")
        lines = [lines[config.line - 1]]
    sink = ReportSink(path=config.out) if config.out else ReportSink(stream=sys.stdout)
    failed = 0
    with sink:
        for line in lines:
            report = replay(line)
            sink.write(report)
            failed += not report.passed
    return EXIT_FAIL if failed else EXIT_PASS


COMMANDS = {
    "enumerate": cmd_enumerate,
    "poset": cmd_poset,
    "verify": cmd_verify,
    "lengths": cmd_lengths,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abelorbits",
        description="B-orbits in abelian nilradicals: enumeration, posets, length tables and verification",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    def scoped(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--family", type=str.upper, help="Root system family: A, B, C or D")
        p.add_argument("--rank", type=int, help="Rank of the root system")
        p.add_argument("--nilradical", help="Deleted simple root, e.g. e3-e2, 2e1, e2+e1")
        p.add_argument("--format", help="Output format: json, tsv, dot or ascii")
        p.add_argument("--out", help="Output path (default stdout)")
        p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="Log at INFO level")
        return p

    enumerate_parser = scoped("enumerate", "List orbit labels with lengths and dimensions")
    enumerate_parser.add_argument("--matrices", action="store_true", help="Also print the representative matrix of each label")
    poset = scoped("poset", "Write the Hasse diagram of an orbit poset")
    poset.add_argument("--order", default="geometric", choices=["geometric", "bruhat", "overlay"])
    verify = scoped("verify", "Run verification checks")
    verify.add_argument(
        "--check", default="all",
        choices=["all", "lengths", "conjecture", "witnesses", "coadjoint", "bruhat"],
    )
    verify.add_argument("--workers", type=int, help=f"Worker threads (default {settings.workers})")
    verify.add_argument("--max-rank-bruhat-oracle", type=int, help="Override the cover-graph oracle ceiling")
    verify.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    scoped("lengths", "Tabulate link-pattern statistics and lengths")

    replay_parser = sub.add_parser("replay", help="Re-run the checks of a report file")
    replay_parser.add_argument("--report", required=True, help="JSON-lines report file")
    replay_parser.add_argument("--line", type=int, help="1-based report line (default all)")
    replay_parser.add_argument("--out", help="Output path (default stdout)")
    replay_parser.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="Log at INFO level")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    values = {k: v for k, v in vars(args).items() if k != "verbose" and v is not None}
    try:
        config = CliConfig(**values)
    except ValidationError as e:
        error = e.errors()[0]
        where = ".".join(str(x) for x in error["loc"])
        print(f"abelorbits: {where + ': ' if where else ''}{error['msg']}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[config.command](config)
    except IntegrityError as e:
        logger.error(f"Integrity check failed: {e}")
        print(f"abelorbits: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as e:
        print(f"abelorbits: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
