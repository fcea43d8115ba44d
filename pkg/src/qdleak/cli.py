"""Command-line interface.

Three subcommands:

* ``run``: execute one protocol dialogue and show the transcript plus what
  each party decodes.
* ``analyze``: enumerate every reachable transcript and report the
  eavesdropper's per-transcript posterior and the leakage totals.
* ``table1``: print the coding-operation table for the Bell-pair dialogue
  with initial state psi+.

Exit codes: 0 on success, 1 on inconsistent/corrupted protocol data, 2 on
usage errors.  Output is deterministic: the same command line (including
``--seed``, default 0) produces byte-identical output.  Diagnostics go to
stderr, results to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import report as report_mod
from .leakage import leakage_report
from .protocols import (
    Protocol,
    TranscriptError,
    as_bits,
    jz_secrets,
    mxn_secrets,
    nba_secrets,
    run_jz,
    run_mxn,
    run_nba,
)
from .qstate import KET_LABELS, BellLabel, make_rng


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdleak",
        description="Simulate bidirectional quantum dialogues and audit "
        "what their public transcripts leak.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one dialogue")
    run.add_argument("--protocol", required=True, choices=["nba", "jz", "mxn"])
    run.add_argument("--alice", help="party 0 bits (2 for nba/mxn, 1 for jz)")
    run.add_argument("--bob", help="party 1 bits (nba: 2, jz: 1)")
    run.add_argument(
        "--others", help="mxn: comma-separated single bits for parties 1..N-1"
    )
    run.add_argument("--parties", type=int, help="mxn: total party count, 3..6")
    run.add_argument(
        "--initial", help="nba: phi+/phi-/psi+/psi-; jz: 0/1/+/-"
    )
    run.add_argument("--seed", type=int, default=0, help="rng seed (default 0)")
    run.add_argument("--format", choices=["text", "json"], default="text")
    run.add_argument("--verbose", action="store_true", help="show encodings")

    analyze = sub.add_parser("analyze", help="audit transcript leakage")
    analyze.add_argument(
        "--protocol", required=True, choices=["nba", "jz", "mxn", "otp"]
    )
    analyze.add_argument("--parties", type=int, help="mxn: total party count, 3..6")
    analyze.add_argument("--format", choices=["text", "json"], default="text")

    sub.add_parser("table1", help="coding table for the Bell-pair dialogue")

    return parser


def _reject(condition: bool, message: str) -> None:
    if condition:
        raise UsageError(message)


def _parse_bits(value: str | None, width: int, flag: str):
    _reject(value is None, f"{flag} is required for this protocol")
    try:
        return as_bits(value, width)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _cmd_run(args: argparse.Namespace) -> int:
    protocol = Protocol(args.protocol)
    if protocol is Protocol.NBA:
        _reject(args.others is not None, "--others does not apply to nba")
        _reject(args.parties is not None, "--parties does not apply to nba")
        alice = _parse_bits(args.alice, 2, "--alice")
        bob = _parse_bits(args.bob, 2, "--bob")
        _reject(args.initial is None, "--initial is required for nba")
        try:
            initial = BellLabel.from_text(args.initial)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        record = run_nba(nba_secrets(alice, bob), initial)
    elif protocol is Protocol.JZ:
        _reject(args.others is not None, "--others does not apply to jz")
        _reject(args.parties is not None, "--parties does not apply to jz")
        alice = _parse_bits(args.alice, 1, "--alice")
        bob = _parse_bits(args.bob, 1, "--bob")
        _reject(args.initial is None, "--initial is required for jz")
        _reject(
            args.initial not in KET_LABELS,
            f"--initial must be one of {'/'.join(KET_LABELS)}",
        )
        record = run_jz(jz_secrets(alice[0], bob[0]), args.initial)
    else:
        _reject(args.bob is not None, "--bob does not apply to mxn (use --others)")
        _reject(args.initial is not None, "--initial does not apply to mxn")
        _reject(args.parties is None, "--parties is required for mxn")
        _reject(
            not 3 <= args.parties <= 6, f"--parties must be in 3..6, got {args.parties}"
        )
        alice = _parse_bits(args.alice, 2, "--alice")
        _reject(args.others is None, "--others is required for mxn")
        raw = args.others.split(",")
        _reject(
            len(raw) != args.parties - 1,
            f"--others needs {args.parties - 1} comma-separated bits",
        )
        others = [_parse_bits(r, 1, "--others")[0] for r in raw]
        record = run_mxn(mxn_secrets(alice, others), make_rng(args.seed))

    # The seed only matters where sampling happens; elsewhere it would be
    # noise in otherwise deterministic output.
    shown_seed = args.seed if protocol is Protocol.MXN else None
    if args.format == "json":
        doc = report_mod.run_document(record, seed=shown_seed)
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(report_mod.run_text(record, seed=shown_seed, verbose=args.verbose))
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    protocol = Protocol(args.protocol)
    if protocol is Protocol.MXN:
        _reject(args.parties is None, "--parties is required for mxn")
        _reject(
            not 3 <= args.parties <= 6, f"--parties must be in 3..6, got {args.parties}"
        )
        rep = leakage_report(protocol, args.parties)
    else:
        _reject(
            args.parties is not None, f"--parties does not apply to {protocol.text}"
        )
        rep = leakage_report(protocol)
    if args.format == "json":
        print(json.dumps(report_mod.leakage_document(rep), indent=2, sort_keys=True))
    else:
        print(report_mod.leakage_text(rep))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        print(report_mod.operation_table_text())
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TranscriptError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
