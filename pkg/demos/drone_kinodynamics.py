"""The six-state drone model: integration accuracy, steering and a full plan.

Run:  python3 demos/drone_kinodynamics.py [--out DIR]
"""

import argparse
import math
from pathlib import Path

import numpy as np

from onthego import DroneState, SteeringSpec, integrate, load_scenario, plan, render_frame, steer
from onthego.geometry import discretize
from onthego.kinodynamics import PSI_MAX, THETA_MAX, V_MAX

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--out", type=Path, default=Path("demo_output"))
args = parser.parse_args()
args.out.mkdir(parents=True, exist_ok=True)

# Straight flight at top speed covers v * 0.3 s; RK4 is exact for this motion.
s = DroneState(1.0, 1.0, 1.0, 0.0, 0.0, 0.5)
end = integrate(s, (0.0, 0.0, 0.0), SteeringSpec())
print(f"straight line: dx = {end.x - s.x:.15f}")

# A turning, climbing, accelerating segment. Halving the step should cut the
# error by about 2**4 = 16.
s = DroneState(2.0, 2.0, 2.0, -0.2, 0.1, 0.2)
u = (1.0, -0.8, 0.6)
ref = np.array(integrate(s, u, SteeringSpec(rk4_substeps=1024)))
print("\nsubsteps  max error  ratio")
prev = None
for n in (1, 2, 4, 8, 16):
    err = np.abs(np.array(integrate(s, u, SteeringSpec(rk4_substeps=n))) - ref).max()
    ratio = f"{prev / err:6.1f}" if prev else ""
    print(f"{n:8d}  {err:.3e}  {ratio}")
    prev = err

# Saturation: pushing yaw, pitch and speed past their limits pins them there.
s = DroneState(5.0, 5.0, 5.0, 0.4, 0.4, 0.45)
for _ in range(3):
    s = integrate(s, (math.pi / 2, math.pi / 2, 1.0), SteeringSpec())
print(f"\nafter three full-input segments: psi {s.psi:.4f} (max {PSI_MAX:.4f}), "
      f"theta {s.theta:.4f} (max {THETA_MAX:.4f}), v {s.v:.3f} (max {V_MAX})")

# Steering picks, from a 5 x 5 x 5 grid of constant inputs, the one landing
# closest to the target cell centre without touching obstacle cells.
sc = load_scenario("case1_3d_kino")
env = sc.environment()
grid = discretize(env.workspace, sc.eta)
s = DroneState(*sc.start)
target = grid.cell((3, 10, 10))
res = steer(s, target, env, sc.steering, grid)
print(f"\nsteer from rest toward {target.center}: input {tuple(round(c, 3) for c in res.control)}, "
      f"reached {res.reached}, now at {tuple(round(c, 3) for c in res.state.position)}")

# A whole kinodynamic plan through the slotted walls.
tr = plan(env, sc.start, sc.goal, sc.eta, sc.plan_mode())
speeds = [st[5] for st in tr.states]
print(f"\nkinodynamic plan: {len(tr)} segments, top speed {max(speeds):.3f}, "
      f"final position {tuple(round(c, 2) for c in tr.states[-1][:3])}")
path = args.out / "drone_plan.svg"
path.write_text(render_frame(env, tr.states, start=sc.start, goal=sc.goal, title="drone plan"))
print(f"wrote {path}")
