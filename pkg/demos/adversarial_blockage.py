"""Adversarial obstacles: steering around them, and being shut in by them.

Run:  python3 demos/adversarial_blockage.py [--out DIR]
"""

import argparse
from pathlib import Path

from onthego import build_labels, cell_of_point, discretize, execute, load_scenario

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--out", type=Path, default=Path("demo_output"))
args = parser.parse_args()

# Open layout: the boxes random-walk every distortion but never onto the path
# already flown or the agent's own cell, so the agent gets through.
sc = load_scenario("case4_2d")
rep = execute(sc, frames_dir=args.out / "case4_2d")
print(f"{sc.name}: {rep.status.value} after {rep.steps} steps and {rep.replans} plans")
for env in rep.outcome.env_history:
    adv = [ob for ob in env.obstacles if ob.kind.value == "adversarial"]
    print(f"  v{env.version}:", [tuple(round(c, 2) for c in ob.box.center) for ob in adv])

# Enclosed start: four walls ring the agent's region. The wavefront from the
# goal never reaches the start cell, so the very first plan fails and the run
# reports the road as blocked (exit code 2 from the CLI).
sc = load_scenario("case4_blocked_2d")
env = sc.environment()
grid = discretize(env.workspace, sc.eta)
lg = build_labels(env, grid, cell_of_point(grid, sc.goal))
start = cell_of_point(grid, sc.start)
print(f"\n{sc.name}: start cell {start} has label {lg[start]} (0 = unreachable)")
rep = execute(sc, frames_dir=args.out / "case4_blocked_2d")
print(f"{sc.name}: {rep.status.value}, exit code {rep.exit_code}, events {rep.events}")
