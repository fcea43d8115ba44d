#!/usr/bin/env python3
"""Audit every supported protocol and print a leakage summary table.

Usage:
    python scripts/leakage_audit.py [--json]

For each protocol (and each MXN party count) this enumerates all reachable
transcripts exactly and reports total, secure, and leaked bits, plus the
per-transcript entropy (constant across transcripts for all of these
protocols, which the table makes visible).
"""

import argparse
import json

from qdleak.leakage import leakage_report
from qdleak.protocols import Protocol
from qdleak.report import leakage_document


def audit_rows():
    jobs = [
        (Protocol.NBA, None),
        (Protocol.JZ, None),
        (Protocol.OTP, None),
        (Protocol.MXN, 3),
        (Protocol.MXN, 4),
        (Protocol.MXN, 5),
        (Protocol.MXN, 6),
    ]
    for protocol, parties in jobs:
        yield leakage_report(protocol, parties)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit full reports as JSON")
    args = parser.parse_args()

    if args.json:
        docs = [leakage_document(rep) for rep in audit_rows()]
        print(json.dumps(docs, indent=2, sort_keys=True))
        return 0

    header = f"{'protocol':<10}{'parties':>8}{'total':>7}{'secure':>9}{'leaked':>9}{'transcripts':>13}{'entropy/t':>11}"
    print(header)
    print("-" * len(header))
    for rep in audit_rows():
        entropies = {round(e.entropy_bits, 9) for e in rep.per_transcript}
        shown = f"{entropies.pop():.3f}" if len(entropies) == 1 else "varies"
        print(
            f"{rep.protocol.text:<10}"
            f"{rep.parties if rep.parties is not None else '-':>8}"
            f"{rep.total_bits:>7}"
            f"{rep.secure_bits:>9.3f}"
            f"{rep.leaked_bits:>9.3f}"
            f"{len(rep.per_transcript):>13}"
            f"{shown:>11}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
