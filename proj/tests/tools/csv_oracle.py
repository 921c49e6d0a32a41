#!/usr/bin/env python3
"""Reads every dataset CSV listed in <dir>/expected.json with Python's csv
module and compares the rows to the expected values."""
import csv
import json
import sys
from pathlib import Path

HEADER = ["claim", "rating", "sentiment", "origin", "source_url", "record_id"]


def check(path, rows):
    with open(path, newline="", encoding="utf-8") as fh:
        got = list(csv.reader(fh, strict=True))
    if not got or got[0] != HEADER:
        return f"{path}: bad header {got[:1]}"
    got = got[1:]
    if len(got) != len(rows):
        return f"{path}: {len(got)} rows, expected {len(rows)}"
    for i, (g, want) in enumerate(zip(got, rows), start=1):
        if len(g) != 6:
            return f"{path}: row {i} has {len(g)} fields"
        claim, rating, sentiment, origin, url, record_id = want
        if [g[0], g[1], g[3], g[4]] != [claim, rating, origin, url]:
            return f"{path}: row {i} text mismatch"
        if float(g[2]) != sentiment:
            return f"{path}: row {i} sentiment {g[2]!r} != {sentiment!r}"
        if int(g[5]) != record_id:
            return f"{path}: row {i} record_id {g[5]!r} != {record_id}"
    return None


def main():
    root = Path(sys.argv[1])
    cases = json.loads((root / "expected.json").read_text(encoding="utf-8"))
    for case in cases:
        try:
            err = check(root / case["file"], case["rows"])
        except (csv.Error, ValueError, UnicodeDecodeError) as e:
            err = f"{case['file']}: {e}"
        if err:
            print(err)
            return 1
    print(f"{len(cases)} files ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
