"""Periodic plan / execute / distort loop.

The agent plans against the current environment, executes a window of motion
steps while the environment holds still, then the environment distorts and the
agent replans from wherever it stopped. Window lengths follow either the literal
growing schedule (``T, T, 2T, 6T, ...``, i.e. ``T * (i - 1)!`` at iteration ``i``)
or a constant one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .environment import DistortionCase, Environment, RandomSource, distort, is_obstacle
from .geometry import GridSpec, Vector, cell_of_point, discretize
from .kinodynamics import SteeringFailed
from .wavefront import GEOMETRIC, PlanMode, PlanningError, Trajectory, plan

DEFAULT_MAX_REPLANS = 100


class ConfigError(ValueError):
    pass


class Status(str, enum.Enum):
    REACHED_GOAL = "ReachedGoal"
    ROAD_BLOCKED = "RoadBlocked"
    REPLAN_CAP = "ReplanCapExceeded"


class Schedule(str, enum.Enum):
    LITERAL = "literal"
    CONSTANT = "constant"


@dataclass(frozen=True)
class RunConfig:
    case: DistortionCase
    eta: tuple[float, ...]
    T: int = 1
    max_replans: int = DEFAULT_MAX_REPLANS
    mode: PlanMode = GEOMETRIC
    seed: int = 0
    schedule: Schedule = Schedule.LITERAL

    def __post_init__(self):
        object.__setattr__(self, "schedule", Schedule(self.schedule))
        if self.T < 1:
            raise ConfigError("distortion time T must be at least 1")
        if self.max_replans < 1:
            raise ConfigError("max_replans must be at least 1")


@dataclass(frozen=True)
class StepRecord:
    step: int
    env_version: int
    state: Vector


@dataclass(frozen=True)
class PlanRecord:
    """One planning call: the environment it saw and what it produced."""

    steps_done: int
    env: Environment
    trajectory: Trajectory | None
    error: str | None = None


@dataclass
class RunOutcome:
    status: Status
    log: list[StepRecord]
    env_history: list[Environment]
    plans: list[PlanRecord]
    grid: GridSpec
    events: list[str] = field(default_factory=list)

    @property
    def covered(self) -> list[Vector]:
        return [r.state for r in self.log]

    @property
    def replans(self) -> int:
        return len(self.plans)

    @property
    def steps(self) -> int:
        return len(self.log) - 1


def _check_endpoints(env: Environment, x0: Sequence[float], xg: Sequence[float]) -> None:
    dim = env.dim
    for name, p, region in (("start", x0, env.start_region), ("goal", xg, env.goal_region)):
        pos = tuple(p[:dim])
        if not env.workspace.contains_point(pos):
            raise ConfigError(f"{name} {pos} lies outside the workspace")
        if region is not None and not region.contains_point(pos):
            raise ConfigError(f"{name} {pos} lies outside its {name} region")
        if env.point_blocked(pos):
            raise ConfigError(f"{name} {pos} lies inside an obstacle")


def run(x0: Sequence[float], xg: Sequence[float], env: Environment, cfg: RunConfig) -> RunOutcome:
    """Drive the agent from ``x0`` to ``xg`` while the environment distorts.

    A plan is recomputed when the environment changed since the last one or when
    nothing is left to execute; re-planning an unchanged environment would
    reproduce the unexecuted remainder exactly.
    """
    _check_endpoints(env, x0, xg)
    try:
        cfg.case.check_environment(env)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    grid = discretize(env.workspace, cfg.eta)
    dim = grid.dim
    goal_cell = cell_of_point(grid, tuple(xg[:dim]))
    rs = RandomSource(cfg.seed)

    x_c: Vector = tuple(float(v) for v in x0)
    if cfg.mode.kinodynamic:
        x_c = x_c + (0.0,) * (6 - len(x_c))
    log = [StepRecord(0, env.version, x_c)]
    history = [env]
    plans: list[PlanRecord] = []
    events: list[str] = []

    def outcome(status: Status) -> RunOutcome:
        return RunOutcome(status, log, history, plans, grid, events)

    def at_goal() -> bool:
        return cell_of_point(grid, x_c[:dim]) == goal_cell

    window = cfg.T
    i = 1
    current: list[Vector] = []  # unexecuted remainder of the active plan
    planned_for = env.obstacles
    n_calls = 0
    while True:
        if at_goal():
            return outcome(Status.REACHED_GOAL)

        if not current or env.obstacles != planned_for:
            if n_calls >= cfg.max_replans:
                return outcome(Status.REPLAN_CAP)
            n_calls += 1
            try:
                traj = plan(env, x_c, xg, cfg.eta, cfg.mode, grid)
            except (PlanningError, SteeringFailed) as exc:
                plans.append(PlanRecord(len(log) - 1, env, None, f"{type(exc).__name__}: {exc}"))
                if cfg.case.tag.adversarial:
                    events.append(f"step {len(log) - 1}: road blocked ({type(exc).__name__})")
                    return outcome(Status.ROAD_BLOCKED)
                # unprotected regimes: wait in place for the next distortion
                current = []
                planned_for = env.obstacles
            else:
                plans.append(PlanRecord(len(log) - 1, env, traj))
                current = list(traj.states[1:])
                planned_for = env.obstacles

        for state in current[:window]:
            x_c = tuple(state)
            log.append(StepRecord(len(log), env.version, x_c))
        current = current[window:]
        if at_goal():
            return outcome(Status.REACHED_GOAL)

        env = distort(env, cfg.case, [r.state for r in log], rs, grid, current)
        history.append(env)
        if is_obstacle(env, grid.cell(cell_of_point(grid, x_c[:dim]))):
            events.append(f"step {len(log) - 1}: CollisionAtDistortion at version {env.version}")
            return outcome(Status.ROAD_BLOCKED)

        if cfg.schedule is Schedule.LITERAL:
            window *= i
        i += 1

