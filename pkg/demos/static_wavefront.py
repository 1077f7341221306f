"""Wavefront labelling and label descent on the static 2-D bar layout.

Run:  python3 demos/static_wavefront.py [--out DIR]
"""

import argparse
from pathlib import Path

import numpy as np

from onthego import build_labels, cell_of_point, discretize, load_scenario, plan, render_frame

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--out", type=Path, default=Path("demo_output"))
args = parser.parse_args()
args.out.mkdir(parents=True, exist_ok=True)

sc = load_scenario("static2d")
env = sc.environment()
grid = discretize(env.workspace, sc.eta)
print(f"workspace {env.workspace.lower} -> {env.workspace.upper}, eta {sc.eta}: grid {grid.shape}")

# Labels spread outward from the goal: 1 marks obstacle cells, 2 the goal, and
# every other reachable cell gets 2 + its Moore hop count.
goal = cell_of_point(grid, sc.goal)
lg = build_labels(env, grid, goal)
print(f"goal cell {goal}, largest label {lg.labels.max()}, unreachable cells {np.sum(lg.labels == 0)}")

# Rows of the matrix are x indices, so transpose and flip to see the map the
# usual way up (y grows upward).
print("\nlabel map (top row is the top of the workspace):")
for row in lg.labels.T[::-1]:
    print(" ".join(f"{v:2d}" for v in row))

# Descent walks from the start cell to a neighbour one label lower until it
# reaches the goal; the trajectory is the start point plus cell centres.
tr = plan(env, sc.start, sc.goal, sc.eta)
labels = [lg[c] for c in tr.cells]
print(f"\n{len(tr)} states, labels {labels[0]} -> {labels[-1]}")
print("first hops:", [tuple(round(v, 2) for v in s) for s in tr.states[:5]])

svg = render_frame(env, tr.states, start=sc.start, goal=sc.goal, title="static wavefront plan")
path = args.out / "static_wavefront.svg"
path.write_text(svg)
print(f"wrote {path}")
