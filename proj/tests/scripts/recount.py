#!/usr/bin/env python3
"""Recount failure classes in kcfg ledgers, independently of the C++ report code.

Prints the summary CSV for the given ledgers, one row per file.
"""
import collections
import csv
import json
import pathlib
import sys

COLUMNS = [
    ("Crash(0)", "crashO0"),
    ("Crash(3)", "crashO3"),
    ("Crash(both)", "crashBoth"),
    ("Total Crash", None),
    ("Timeout(0)", "timeoutO0"),
    ("Timeout(3)", "timeoutO3"),
    ("Timeout(both)", "timeoutBoth"),
    ("Total Timeout", None),
    ("Miscompilation", "miscompilation"),
    ("Generator error", "generatorError"),
    ("Compile error(both)", "compileErrorBoth"),
    ("Run divergence timeout", "runDivergenceTimeout"),
]


def recount(path):
    counts = collections.Counter()
    trials = 0
    with open(path, encoding="utf-8") as f:
        for line in f:
            record = json.loads(line)
            if record.get("kind") != "trial":
                continue
            trials += 1
            counts[record["failureClass"]] += 1
    row = [pathlib.Path(path).stem, trials]
    for title, cls in COLUMNS:
        if title == "Total Crash":
            row.append(counts["crashO0"] + counts["crashO3"] + counts["crashBoth"])
        elif title == "Total Timeout":
            row.append(counts["timeoutO0"] + counts["timeoutO3"] + counts["timeoutBoth"])
        else:
            row.append(counts[cls])
    return row


def main(paths):
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["Experiment ID", "Test input"] + [title for title, _ in COLUMNS])
    for path in paths:
        out.writerow(recount(path))


if __name__ == "__main__":
    main(sys.argv[1:])
