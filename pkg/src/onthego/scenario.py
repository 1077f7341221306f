"""Scenario files, batch execution and run artefacts.

A scenario is a JSON document; see README.md for the schema. ``execute`` runs
one scenario and optionally writes:

* ``<name>.log.jsonl``   one record per motion step
* ``<name>.envs.jsonl``  one obstacle snapshot per environment version
* ``<name>.summary.json`` terminal status and path metrics
* ``<name>_frame_NNN.svg`` one frame per planning call plus a final frame
"""

from __future__ import annotations

import json
import math
import re
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .environment import CaseTag, DistortionCase, Environment, Obstacle, ObstacleKind
from .geometry import HyperInterval, Vector, as_vector, cell_of_point, discretize, intersects
from .kinodynamics import SteeringSpec
from .render import render_frame
from .replan import DEFAULT_MAX_REPLANS, RunConfig, RunOutcome, Schedule, Status, run
from .wavefront import PlanMode

EXIT_CODES = {Status.REACHED_GOAL: 0, Status.ROAD_BLOCKED: 2, Status.REPLAN_CAP: 3}

_TOP_KEYS = {
    "name", "description", "workspace", "eta", "start", "goal", "start_region",
    "goal_region", "spawn_region", "obstacles", "case", "T", "schedule", "seed",
    "mode", "steering", "max_replans",
}
_CASE_KEYS = {"tag", "count", "half_extent", "step", "protect_planned"}
_STEER_KEYS = {"horizon", "rk4_substeps", "control_grid"}


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    workspace: HyperInterval
    eta: Vector
    start: Vector
    goal: Vector
    obstacles: tuple[tuple[HyperInterval, ObstacleKind], ...] = ()
    start_region: HyperInterval | None = None
    goal_region: HyperInterval | None = None
    spawn_region: HyperInterval | None = None
    case: DistortionCase = field(default_factory=lambda: DistortionCase(CaseTag.STATIC))
    T: int = 5
    schedule: Schedule = Schedule.LITERAL
    seed: int = 0
    mode: str = "geometric"
    steering: SteeringSpec | None = None
    max_replans: int = DEFAULT_MAX_REPLANS
    description: str = ""

    @property
    def dim(self) -> int:
        return self.workspace.dim

    def environment(self) -> Environment:
        return Environment(
            self.workspace,
            tuple(Obstacle(i, box, kind) for i, (box, kind) in enumerate(self.obstacles)),
            self.start_region,
            self.goal_region,
            self.spawn_region,
        )

    def plan_mode(self) -> PlanMode:
        return PlanMode(self.mode, self.steering)

    def run_config(self, seed: int | None = None, schedule: str | None = None) -> RunConfig:
        return RunConfig(
            case=self.case,
            eta=self.eta,
            T=self.T,
            max_replans=self.max_replans,
            mode=self.plan_mode(),
            seed=self.seed if seed is None else seed,
            schedule=Schedule(schedule) if schedule is not None else self.schedule,
        )


# -- parsing -----------------------------------------------------------------


def _err(where: str, msg: str) -> ScenarioError:
    return ScenarioError(f"{where}: {msg}")


def _vec(raw: Any, where: str, dim: int | None = None) -> Vector:
    if isinstance(raw, bool) or not isinstance(raw, (list, tuple, int, float)):
        raise _err(where, f"expected a number or list of numbers, got {raw!r}")
    if isinstance(raw, (list, tuple)) and not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
    ):
        raise _err(where, f"expected numbers, got {raw!r}")
    try:
        return as_vector(raw, dim)
    except ValueError as exc:
        raise _err(where, str(exc)) from None


def _box(raw: Any, where: str, dim: int | None = None) -> HyperInterval:
    if not isinstance(raw, dict) or set(raw) - {"lower", "upper", "kind"} or not {"lower", "upper"} <= set(raw):
        raise _err(where, f"expected {{'lower': [...], 'upper': [...]}}, got {raw!r}")
    lo = _vec(raw["lower"], f"{where}.lower", dim)
    hi = _vec(raw["upper"], f"{where}.upper", dim)
    try:
        return HyperInterval(lo, hi)
    except ValueError as exc:
        raise _err(where, str(exc)) from None


def _int(raw: Any, where: str, minimum: int) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise _err(where, f"expected an integer, got {raw!r}")
    if raw < minimum:
        raise _err(where, f"must be >= {minimum}, got {raw}")
    return raw


def _unknown(raw: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(raw) - allowed)
    if extra:
        raise _err(where, f"unknown field(s) {', '.join(extra)}")


def scenario_from_dict(raw: dict, source: str = "<scenario>") -> Scenario:
    """Validate a parsed scenario document and fill defaults."""
    if not isinstance(raw, dict):
        raise _err(source, "top level must be a JSON object")
    _unknown(raw, _TOP_KEYS, source)
    for key in ("name", "workspace", "eta", "start", "goal"):
        if key not in raw:
            raise _err(source, f"missing required field '{key}'")
    name = raw["name"]
    if not isinstance(name, str) or not name or any(c in name for c in "/\\"):
        raise _err(f"{source}.name", f"expected a plain non-empty string, got {name!r}")

    ws = _box(raw["workspace"], f"{source}.workspace")
    if ws.is_degenerate():
        raise _err(f"{source}.workspace", "workspace must have positive extent on every axis")
    dim = ws.dim
    eta = _vec(raw["eta"], f"{source}.eta", dim)
    if any(e <= 0 for e in eta):
        raise _err(f"{source}.eta", "must be strictly positive")
    start = _vec(raw["start"], f"{source}.start", dim)
    goal = _vec(raw["goal"], f"{source}.goal", dim)

    regions = {}
    for key in ("start_region", "goal_region", "spawn_region"):
        val = raw.get(key)
        regions[key] = None if val is None else _box(val, f"{source}.{key}", dim)
        if regions[key] is not None and not ws.contains_box(regions[key]):
            raise _err(f"{source}.{key}", "region must lie inside the workspace")

    obstacles = []
    raw_obs = raw.get("obstacles", [])
    if not isinstance(raw_obs, list):
        raise _err(f"{source}.obstacles", "expected a list")
    for k, ob in enumerate(raw_obs):
        where = f"{source}.obstacles[{k}]"
        box = _box(ob, where, dim)
        try:
            kind = ObstacleKind(ob.get("kind", "static"))
        except ValueError:
            raise _err(f"{where}.kind", f"unknown obstacle kind {ob.get('kind')!r}") from None
        if box.is_degenerate():
            raise _err(where, "obstacle box must have positive extent on every axis")
        if not ws.contains_box(box):
            raise _err(where, "obstacle must lie inside the workspace")
        obstacles.append((box, kind))

    raw_case = raw.get("case", {"tag": "static"})
    if not isinstance(raw_case, dict):
        raise _err(f"{source}.case", "expected an object")
    _unknown(raw_case, _CASE_KEYS, f"{source}.case")
    try:
        case = DistortionCase(
            tag=CaseTag(raw_case.get("tag", "static")),
            count=_int(raw_case.get("count", 3), f"{source}.case.count", 0),
            half_extent=_vec(raw_case.get("half_extent", 0.4), f"{source}.case.half_extent", dim),
            step=float(_vec(raw_case.get("step", eta[0]), f"{source}.case.step", 1)[0]),
            protect_planned=bool(raw_case.get("protect_planned", False)),
        )
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise _err(f"{source}.case", str(exc)) from None

    mode = raw.get("mode", "geometric")
    if mode not in ("geometric", "kinodynamic"):
        raise _err(f"{source}.mode", f"expected 'geometric' or 'kinodynamic', got {mode!r}")
    steering = None
    if mode == "kinodynamic":
        if dim != 3:
            raise _err(f"{source}.mode", "kinodynamic mode needs a 3-D workspace")
        raw_steer = raw.get("steering") or {}
        if not isinstance(raw_steer, dict):
            raise _err(f"{source}.steering", "expected an object")
        _unknown(raw_steer, _STEER_KEYS, f"{source}.steering")
        try:
            steering = SteeringSpec(
                horizon=float(_vec(raw_steer.get("horizon", 0.3), f"{source}.steering.horizon", 1)[0]),
                rk4_substeps=_int(raw_steer.get("rk4_substeps", 4), f"{source}.steering.rk4_substeps", 1),
                control_grid=_int(raw_steer.get("control_grid", 5), f"{source}.steering.control_grid", 2),
            )
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise _err(f"{source}.steering", str(exc)) from None
    elif raw.get("steering") is not None:
        raise _err(f"{source}.steering", "only valid with mode 'kinodynamic'")

    try:
        schedule = Schedule(raw.get("schedule", "literal"))
    except ValueError:
        raise _err(f"{source}.schedule", f"expected 'literal' or 'constant', got {raw.get('schedule')!r}") from None
    seed = _int(raw.get("seed", 0), f"{source}.seed", 0)
    if seed >= 2**64:
        raise _err(f"{source}.seed", "must fit in 64 bits")
    description = raw.get("description", "")
    if not isinstance(description, str):
        raise _err(f"{source}.description", "expected a string")

    sc = Scenario(
        name=name,
        workspace=ws,
        eta=eta,
        start=start,
        goal=goal,
        obstacles=tuple(obstacles),
        start_region=regions["start_region"],
        goal_region=regions["goal_region"],
        spawn_region=regions["spawn_region"],
        case=case,
        T=_int(raw.get("T", 5), f"{source}.T", 1),
        schedule=schedule,
        seed=seed,
        mode=mode,
        steering=steering,
        max_replans=_int(raw.get("max_replans", DEFAULT_MAX_REPLANS), f"{source}.max_replans", 1),
        description=description,
    )
    _check_invariants(sc, source)
    return sc


def _check_invariants(sc: Scenario, source: str) -> None:
    env = sc.environment()
    grid = discretize(sc.workspace, sc.eta)
    for key, p, region in (("start", sc.start, sc.start_region), ("goal", sc.goal, sc.goal_region)):
        if not sc.workspace.contains_point(p):
            raise _err(f"{source}.{key}", f"{p} lies outside the workspace")
        if region is not None and not region.contains_point(p):
            raise _err(f"{source}.{key}", f"{p} lies outside {key}_region")
        if env.point_blocked(p):
            raise _err(f"{source}.{key}", f"{p} lies inside an obstacle")
    goal_cell = grid.cell(cell_of_point(grid, sc.goal))
    if any(intersects(goal_cell, box) for box, _ in sc.obstacles):
        raise _err(f"{source}.goal", "the goal's grid cell touches an obstacle")
    try:
        sc.case.check_environment(env)
    except ValueError as exc:
        raise _err(f"{source}.case", str(exc)) from None


def _box_dict(box: HyperInterval | None) -> dict | None:
    if box is None:
        return None
    return {"lower": list(box.lower), "upper": list(box.upper)}


def scenario_to_dict(sc: Scenario) -> dict:
    """Canonical document: every field present, defaults spelled out."""
    return {
        "name": sc.name,
        "description": sc.description,
        "workspace": _box_dict(sc.workspace),
        "eta": list(sc.eta),
        "start": list(sc.start),
        "goal": list(sc.goal),
        "start_region": _box_dict(sc.start_region),
        "goal_region": _box_dict(sc.goal_region),
        "spawn_region": _box_dict(sc.spawn_region),
        "obstacles": [{**_box_dict(box), "kind": kind.value} for box, kind in sc.obstacles],
        "case": {
            "tag": sc.case.tag.value,
            "count": sc.case.count,
            "half_extent": list(sc.case.half_extent),
            "step": sc.case.step,
            "protect_planned": sc.case.protect_planned,
        },
        "T": sc.T,
        "schedule": sc.schedule.value,
        "seed": sc.seed,
        "mode": sc.mode,
        "steering": None
        if sc.steering is None
        else {
            "horizon": sc.steering.horizon,
            "rk4_substeps": sc.steering.rk4_substeps,
            "control_grid": sc.steering.control_grid,
        },
        "max_replans": sc.max_replans,
    }


_NUMBER_LIST = re.compile(r"\[\s+([-0-9.e+,\s]+?)\s+\]")


def dumps_scenario(sc: Scenario) -> str:
    """Canonical text: two-space indented JSON with numeric arrays kept on one line."""
    text = json.dumps(scenario_to_dict(sc), indent=2)
    return _NUMBER_LIST.sub(lambda m: "[" + " ".join(m.group(1).split()) + "]", text) + "\n"


def bundled_names() -> list[str]:
    root = resources.files("onthego") / "scenarios"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("onthego") / "scenarios" / f"{name}.json"))


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario file. A bare bundled name such as ``static2d`` also works."""
    p = Path(path)
    if not p.exists() and p.suffix == "" and str(path) in bundled_names():
        p = bundled_path(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario ({exc.strerror})") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{p}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return scenario_from_dict(raw, str(p))


# -- execution ---------------------------------------------------------------


@dataclass
class RunReport:
    scenario: str
    status: Status
    steps: int
    replans: int
    wall_clock: float
    path_length: float
    env_versions: int
    seed: int
    schedule: str
    events: list[str]
    start: Vector
    final: Vector
    outcome: RunOutcome | None = field(repr=False)
    files: list[Path] = field(default_factory=list, repr=False)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def summary(self) -> dict:
        """Deterministic summary document (wall-clock time is deliberately left out)."""
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "schedule": self.schedule,
            "status": self.status.value,
            "exit_code": self.exit_code,
            "start": list(self.start),
            "final": list(self.final),
            "steps": self.steps,
            "replans": self.replans,
            "path_length": self.path_length,
            "env_versions": self.env_versions,
            "events": self.events,
        }


def path_length(states, dim: int) -> float:
    total = 0.0
    for p, q in zip(states, states[1:]):
        total += math.dist(p[:dim], q[:dim])
    return total


def log_lines(outcome: RunOutcome) -> str:
    """One record per motion step; the start state lives in the summary."""
    return "".join(
        json.dumps({"step": r.step, "env_version": r.env_version, "state": list(r.state)}) + "\n"
        for r in outcome.log[1:]
    )


def env_lines(outcome: RunOutcome) -> str:
    return "".join(
        json.dumps(
            {
                "env_version": env.version,
                "obstacles": [
                    {"id": ob.id, "kind": ob.kind.value, **_box_dict(ob.box)} for ob in env.obstacles
                ],
            }
        )
        + "\n"
        for env in outcome.env_history
    )


def frames(sc: Scenario, outcome: RunOutcome) -> list[str]:
    """One SVG per planning call, then the final state."""
    covered = outcome.covered
    docs = []
    for k, rec in enumerate(outcome.plans):
        planned = rec.trajectory.states if rec.trajectory is not None else ()
        title = f"{sc.name} plan {k} env v{rec.env.version} step {rec.steps_done}"
        docs.append(render_frame(rec.env, covered[: rec.steps_done + 1], planned, sc.start, sc.goal, title))
    final_env = outcome.env_history[-1]
    title = f"{sc.name} final {outcome.status.value} env v{final_env.version}"
    docs.append(render_frame(final_env, covered, (), sc.start, sc.goal, title))
    return docs


def execute(
    sc: Scenario,
    out_dir: str | Path | None = None,
    frames_dir: str | Path | None = None,
    seed: int | None = None,
    schedule: str | None = None,
) -> RunReport:
    t0 = time.perf_counter()
    cfg = sc.run_config(seed, schedule)
    outcome = run(sc.start, sc.goal, sc.environment(), cfg)
    report = RunReport(
        scenario=sc.name,
        status=outcome.status,
        steps=outcome.steps,
        replans=outcome.replans,
        wall_clock=0.0,
        path_length=path_length(outcome.covered, sc.dim),
        env_versions=len(outcome.env_history),
        seed=cfg.seed,
        schedule=cfg.schedule.value,
        events=list(outcome.events),
        start=outcome.log[0].state,
        final=outcome.log[-1].state,
        outcome=outcome,
    )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for suffix, text in (
            (".log.jsonl", log_lines(outcome)),
            (".envs.jsonl", env_lines(outcome)),
            (".summary.json", json.dumps(report.summary(), indent=2) + "\n"),
        ):
            path = out / f"{sc.name}{suffix}"
            path.write_text(text)
            report.files.append(path)
    if frames_dir is not None:
        fdir = Path(frames_dir)
        fdir.mkdir(parents=True, exist_ok=True)
        for k, doc in enumerate(frames(sc, outcome)):
            path = fdir / f"{sc.name}_frame_{k:03d}.svg"
            path.write_text(doc)
            report.files.append(path)
    report.wall_clock = time.perf_counter() - t0
    return report
