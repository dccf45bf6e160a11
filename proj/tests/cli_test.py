#!/usr/bin/env python3
"""End-to-end checks of the funtf command line tool."""

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = 0


def run(*args, expect=0):
    global failures
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        failures += 1
        print(f"FAIL {' '.join(args)}: exit {proc.returncode} (wanted {expect})")
        print(proc.stdout, proc.stderr)
    else:
        print(f"ok   {' '.join(args)}")
    return proc


def main():
    global failures
    tmp = Path(tempfile.mkdtemp(prefix="funtf_cli_"))

    s32 = math.sqrt(3.0) / 2.0
    mercedes = {
        "field": "real",
        "d": 2,
        "N": 3,
        "columns": [[[0, 0], [1, 0]], [[-s32, 0], [-0.5, 0]], [[s32, 0], [-0.5, 0]]],
    }
    (tmp / "mercedes.json").write_text(json.dumps(mercedes))

    od = {
        "field": "real",
        "d": 2,
        "N": 4,
        "columns": [[[1, 0], [0, 0]], [[1, 0], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [1, 0]]],
    }
    (tmp / "od.json").write_text(json.dumps(od))

    onb_table = {"N": 4, "d": 2, "rows": [[0, 0], [1, 0], [1, 1], [2, 1], [2, 2]]}
    (tmp / "onb_table.json").write_text(json.dumps(onb_table))

    # verify / eigensteps on the Mercedes-Benz frame
    run("verify", "--input", str(tmp / "mercedes.json"))
    out = run("eigensteps", "--input", str(tmp / "mercedes.json")).stdout.strip().splitlines()
    rows = [[float(v) for v in line.split(",")] for line in out]
    expect = [[0, 0], [1, 0], [1.5, 0.5], [1.5, 1.5]]
    for got, want in zip(rows, expect):
        if any(abs(g - w) > 1e-9 for g, w in zip(got, want)):
            failures += 1
            print(f"FAIL eigensteps rows: {rows}")
            break

    # sample -> synthesize -> verify -> lift to the two-ONB table
    run("sample", "--N", "4", "--d", "2", "--seed", "3", "--output", str(tmp / "t.json"))
    run("synthesize", "--input", str(tmp / "t.json"), "--seed", "1", "--output", str(tmp / "f.json"))
    run("verify", "--input", str(tmp / "f.json"))
    run("lift", "--input", str(tmp / "f.json"), "--target", str(tmp / "onb_table.json"),
        "--steps", "32", "--output", str(tmp / "lift.csv"))
    header = (tmp / "lift.csv").read_text().splitlines()[0]
    if not header.startswith("t,funtf_residual,od_margin"):
        failures += 1
        print(f"FAIL lift csv header: {header}")

    # connect two random complex frames
    run("sample", "--N", "5", "--d", "2", "--seed", "8", "--output", str(tmp / "t2.json"))
    run("synthesize", "--input", str(tmp / "t2.json"), "--seed", "2", "--output", str(tmp / "g1.json"))
    run("synthesize", "--input", str(tmp / "t2.json"), "--seed", "9", "--output", str(tmp / "g2.json"))
    run("connect", str(tmp / "g1.json"), str(tmp / "g2.json"), "--steps", "16")
    run("connect-nod", str(tmp / "g1.json"), str(tmp / "g2.json"), "--steps", "16")

    # structure commands
    out = run("spark", "--input", str(tmp / "mercedes.json")).stdout
    if "spark 3" not in out or "full_spark true" not in out:
        failures += 1
        print(f"FAIL spark output: {out}")
    out = run("od", "--input", str(tmp / "od.json")).stdout
    if "od true" not in out:
        failures += 1
        print(f"FAIL od output: {out}")
    run("naimark", "--input", str(tmp / "mercedes.json"), "--output", str(tmp / "nm.json"))
    if json.loads((tmp / "nm.json").read_text())["d"] != 1:
        failures += 1
        print("FAIL naimark dimension")
    run("od-perturb", "--input", str(tmp / "od.json"), "--delta", "0.001")

    # motion demos
    run("morph", "--d", "3", "--steps", "32", "--output", str(tmp / "morph.csv"))
    run("swap", "--d", "3", "--steps", "64")
    # a union of two ONBs: boundary synthesis from the two-ONB table
    run("synthesize", "--input", str(tmp / "onb_table.json"), "--base", "identity",
        "--field", "real", "--output", str(tmp / "two_onb.json"))
    run("verify", "--input", str(tmp / "two_onb.json"))
    run("swap", "--input", str(tmp / "two_onb.json"), "--i", "0", "--j", "2", "--steps", "12")

    # failure modes: quantitative fail is exit 1, structural error is exit 2
    bad = dict(mercedes)
    bad["columns"] = [[[0.5, 0], [0, 0]]] + mercedes["columns"][1:]
    (tmp / "notfuntf.json").write_text(json.dumps(bad))
    run("verify", "--input", str(tmp / "notfuntf.json"), expect=1)
    (tmp / "garbage.json").write_text("{this is not json")
    run("verify", "--input", str(tmp / "garbage.json"), expect=2)
    run("connect", str(tmp / "mercedes.json"), str(tmp / "mercedes.json"), expect=2)  # N < d+2
    run("eigensteps", "--input", str(tmp / "missing.json"), expect=2)

    print("CLI test:", "FAIL" if failures else "PASS")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
