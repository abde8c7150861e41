#!/usr/bin/env python3
"""Sweep the EPC prior variance over a grid and report mean accuracy.

Uses the built `fusegrow` tool. Scenes come from FUSEGROW_MIDDLEBURY_DIR
(<scene>/{view1,view5,disp1,disp5}.png) when set, otherwise from synthetic
scenes written by the test helper `make_scene`.
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import tempfile
from pathlib import Path

GRID = [0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]


def run(*args):
    subprocess.run([str(a) for a in args], check=True, stdout=subprocess.DEVNULL)


def synthetic_scenes(build, work, count, width, height):
    scenes = []
    for i in range(count):
        d = work / f"synthetic{i}"
        weak = "1" if i % 2 == 0 else "0.5"
        run(build / "tests" / "make_scene", d, width, height, 101 + i, weak)
        scenes.append((d.name, d / "left.png", d / "right.png", d / "gt_left.pfm", d / "gt_right.pfm", 1.0))
    return scenes


def middlebury_scenes(root, scale):
    scenes = []
    for d in sorted(p for p in Path(root).iterdir() if (p / "disp1.png").exists()):
        scenes.append((d.name, d / "view1.png", d / "view5.png", d / "disp1.png", d / "disp5.png", scale))
    return scenes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--build", type=Path, default=Path(__file__).resolve().parent.parent / "build")
    ap.add_argument("--scenes", type=int, default=4, help="synthetic scene count")
    ap.add_argument("--width", type=int, default=450)
    ap.add_argument("--height", type=int, default=375)
    ap.add_argument("--step", type=int, default=10)
    args = ap.parse_args()

    tool = args.build / "fusegrow"
    with tempfile.TemporaryDirectory() as tmp:
        work = Path(tmp)
        root = os.environ.get("FUSEGROW_MIDDLEBURY_DIR")
        if root:
            scale = float(os.environ.get("FUSEGROW_MIDDLEBURY_GT_SCALE", "1"))
            scenes = middlebury_scenes(root, scale)
        else:
            scenes = synthetic_scenes(args.build, work, args.scenes, args.width, args.height)
        if not scenes:
            sys.exit("no scenes found")

        results = {}
        for name, left, right, gt_l, gt_r, scale in scenes:
            seeds = work / f"{name}.csv"
            run(tool, "simulate-tof", "--gt", gt_l, "--scale", scale, "--step", args.step, "--out", seeds)
            for sp in GRID:
                est = work / f"{name}_{sp}.pfm"
                report = work / f"{name}_{sp}.jsonl"
                run(tool, "grow", "--left", left, "--right", right, "--seeds", seeds, "--stat", "epc",
                    "--sigma-p-sq", sp, "--out", est)
                run(tool, "evaluate", "--est", est, "--gt-left", gt_l, "--gt-right", gt_r,
                    "--gt-scale", scale, "--scene", name, "--variant", f"epc@{sp}", "--out", report)
                acc = json.loads(report.read_text().splitlines()[0])["accuracy_percent"]
                results.setdefault(sp, []).append(acc)
                print(f"{name:14s} sigma_p^2={sp:<6g} {acc:6.2f}%", flush=True)

    print("\nsigma_p^2   mean accuracy")
    best = max(GRID, key=lambda sp: statistics.mean(results[sp]))
    for sp in GRID:
        mark = "  <- best" if sp == best else ""
        print(f"{sp:<10g}  {statistics.mean(results[sp]):6.2f}%{mark}")


if __name__ == "__main__":
    main()
