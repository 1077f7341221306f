"""Wavefront labelling on the grid and label-descent path extraction.

Labels: 0 unreached, 1 obstacle, 2 goal, and ``n >= 3`` for free cells ``n - 2``
Moore hops away from the goal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from .environment import Environment, blocked_cells
from .geometry import CellIndex, GridSpec, Vector, cell_of_point, discretize, neighbors
from .kinodynamics import DroneState, Rollout, SteeringFailed, SteeringSpec

UNLABELED = 0
OBSTACLE = 1
GOAL = 2

# kinodynamic extraction gives up after this many segments without reaching a
# lower-labelled cell
STALL_SEGMENTS = 40


class PlanningError(RuntimeError):
    pass


class GoalBlocked(PlanningError):
    pass


class StartUnreachable(PlanningError):
    pass


@dataclass(frozen=True)
class LabelGrid:
    grid: GridSpec
    labels: np.ndarray
    goal: CellIndex

    def __getitem__(self, idx: CellIndex) -> int:
        return int(self.labels[idx])

    def to_text(self) -> str:
        """Integer matrix, one line per first-axis index; 3-D slices separated by a blank line."""
        if self.labels.ndim == 1:
            return " ".join(map(str, self.labels)) + "\n"
        if self.labels.ndim == 2:
            return "".join(" ".join(map(str, row)) + "\n" for row in self.labels)
        return "\n".join(LabelGrid(self.grid, sl, self.goal).to_text() for sl in self.labels)


@dataclass(frozen=True)
class PlanMode:
    kind: str = "geometric"
    steering: SteeringSpec | None = None

    def __post_init__(self):
        if self.kind not in ("geometric", "kinodynamic"):
            raise ValueError(f"unknown plan mode {self.kind!r}")
        if self.kind == "kinodynamic" and self.steering is None:
            object.__setattr__(self, "steering", SteeringSpec())

    @property
    def kinodynamic(self) -> bool:
        return self.kind == "kinodynamic"


GEOMETRIC = PlanMode("geometric")


@dataclass(frozen=True)
class Trajectory:
    states: tuple[Vector, ...]
    cells: tuple[CellIndex, ...]
    env_version: int = 0
    controls: tuple[tuple[float, ...], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.states)


def build_labels(
    env: Environment,
    grid: GridSpec,
    goal_cell: CellIndex,
    blocked: np.ndarray | None = None,
) -> LabelGrid:
    if blocked is None:
        blocked = blocked_cells(env, grid)
    goal_cell = tuple(goal_cell)
    if blocked[goal_cell]:
        raise GoalBlocked(f"goal cell {goal_cell} touches an obstacle")

    labels = np.zeros(grid.shape, dtype=np.int64)
    labels[blocked] = OBSTACLE
    labels[goal_cell] = GOAL
    free = ~blocked
    reached = np.zeros(grid.shape, dtype=bool)
    reached[goal_cell] = True
    front = reached.copy()
    moore = np.ones((3,) * grid.dim, dtype=bool)
    n = GOAL
    while True:
        # one Moore ring outward per wave, restricted to unreached free cells
        front = ndimage.binary_dilation(front, structure=moore) & free & ~reached
        if not front.any():
            break
        n += 1
        labels[front] = n
        reached |= front
    return LabelGrid(grid, labels, goal_cell)


def descent_options(lg: LabelGrid, cur: CellIndex) -> list[CellIndex]:
    """Neighbours of ``cur`` labelled one less, nearest the goal cell first, then lexicographic."""
    want = lg[cur] - 1
    opts = [nb for nb in neighbors(lg.grid, cur) if lg[nb] == want]
    opts.sort(key=lambda nb: (sum((a - b) ** 2 for a, b in zip(nb, lg.goal)), nb))
    return opts


def _descend(lg: LabelGrid, cur: CellIndex) -> CellIndex:
    opts = descent_options(lg, cur)
    if not opts:
        raise StartUnreachable(f"no descending neighbour from {cur}")
    return opts[0]


def plan(
    env: Environment,
    x0: Sequence[float],
    xg: Sequence[float],
    eta: Sequence[float] | float,
    mode: PlanMode = GEOMETRIC,
    grid: GridSpec | None = None,
) -> Trajectory:
    """Plan from ``x0`` to the goal cell containing ``xg`` on the current environment.

    Geometric mode returns the start followed by representative points of a
    strictly label-descending cell chain. Kinodynamic mode (3-D only) steers the
    drone hop by hop; ``x0`` may then be a position or a full six-state vector.
    """
    if grid is None:
        grid = discretize(env.workspace, eta)
    dim = grid.dim
    blocked = blocked_cells(env, grid)
    goal = cell_of_point(grid, tuple(xg[:dim]))
    lg = build_labels(env, grid, goal, blocked)

    start = cell_of_point(grid, tuple(x0[:dim]))
    if lg[start] in (UNLABELED, OBSTACLE):
        raise StartUnreachable(f"start cell {start} has no path to the goal (label {lg[start]})")

    if not mode.kinodynamic:
        states = [tuple(float(v) for v in x0[:dim])]
        cells = [start]
        cur = start
        while cur != goal:
            cur = _descend(lg, cur)
            states.append(grid.rep(cur))
            cells.append(cur)
        return Trajectory(tuple(states), tuple(cells), env.version)

    if dim != 3:
        raise ValueError("kinodynamic planning needs a 3-D workspace")
    spec = mode.steering
    s = DroneState(*(float(v) for v in tuple(x0) + (0.0,) * (6 - len(x0))))
    states = [tuple(s)]
    cells = [start]
    controls = [(0.0, 0.0, 0.0)]
    cur = start
    best = lg[start]
    stalled = 0
    while cur != goal:
        # any label-descending neighbour is a valid waypoint; take the first one
        # some sampled input actually reaches, else creep toward the preferred one
        opts = descent_options(lg, cur)
        if not opts:
            raise StartUnreachable(f"no descending neighbour from {cur}")
        roll = Rollout(s, env, spec, grid, blocked)
        res = None
        for target in opts:
            res = roll.toward(grid.cell(target), strict=True)
            if res is not None:
                break
        if res is None:
            res = roll.toward(grid.cell(opts[0]))
        s = res.state
        cur = cell_of_point(grid, s.position)
        if lg[cur] in (UNLABELED, OBSTACLE):
            raise SteeringFailed(f"drone drifted into unusable cell {cur}")
        states.append(tuple(s))
        cells.append(cur)
        controls.append(tuple(res.control))
        if lg[cur] < best:
            best, stalled = lg[cur], 0
        else:
            stalled += 1
            if stalled > STALL_SEGMENTS:
                raise SteeringFailed(f"no progress past label {best} in {STALL_SEGMENTS} segments")
    return Trajectory(tuple(states), tuple(cells), env.version, tuple(controls))
