#!/usr/bin/env python3
"""Solve LP files with HiGHS and print one objective per line.

Usage: highs_batch.py [--time-limit S] FILE...
Each output line is "<path> <status> <objective>".
"""

import argparse
import sys

import highspy


def solve(path, time_limit):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    h.setOptionValue("time_limit", float(time_limit))
    if h.readModel(path) != highspy.HighsStatus.kOk:
        return "read_error", float("nan")
    h.run()
    status = h.modelStatusToString(h.getModelStatus()).lower().replace(" ", "_")
    return status, h.getInfo().objective_function_value


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--time-limit", type=float, default=600.0)
    parser.add_argument("files", nargs="+")
    args = parser.parse_args()
    for path in args.files:
        status, value = solve(path, args.time_limit)
        print(f"{path} {status} {value!r}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
