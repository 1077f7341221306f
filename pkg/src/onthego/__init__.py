"""Grid path planning with periodic replanning in distorting environments."""

from .environment import (
    CaseTag,
    DistortionCase,
    Environment,
    Obstacle,
    ObstacleKind,
    RandomSource,
    adversarial_step,
    distort,
    is_obstacle,
    uniform,
)
from .geometry import GridSpec, HyperInterval, ball, cell_of_point, discretize, intersects, neighbors, shift
from .kinodynamics import ControlInput, DroneState, SteeringFailed, SteeringSpec, integrate, steer, steer_to_cell
from .render import render_frame
from .replan import ConfigError, RunConfig, RunOutcome, Schedule, Status, run
from .scenario import RunReport, Scenario, ScenarioError, execute, load_scenario
from .wavefront import (
    GEOMETRIC,
    GoalBlocked,
    LabelGrid,
    PlanMode,
    PlanningError,
    StartUnreachable,
    Trajectory,
    build_labels,
    plan,
)

__version__ = "0.1.0"
