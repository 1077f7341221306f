"""Workspace, obstacles and the distortion regimes that evolve them.

Every distortion returns a fresh :class:`Environment` with ``version`` bumped by
one; the input snapshot is never touched.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .geometry import GridSpec, HyperInterval, ball, cell_of_point, clamp_box, intersects, shift

SPAWN_RETRIES = 100


class RandomSource:
    """Seeded uniform draws backed by numpy's PCG64 bit generator.

    PCG64 output and ``Generator.random`` are specified bit-for-bit by numpy, so a
    seed reproduces the same sequence on every platform.
    """

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, a: float, b: float) -> float:
        if a > b:
            raise ValueError(f"empty interval [{a}, {b}]")
        u = float(self._gen.random())
        return a + (b - a) * u


def uniform(rs: RandomSource, a: float, b: float) -> float:
    return rs.uniform(a, b)


class ObstacleKind(str, enum.Enum):
    STATIC = "static"
    RANDOM = "random-spawned"
    ADVERSARIAL = "adversarial"


@dataclass(frozen=True)
class Obstacle:
    id: int
    box: HyperInterval
    kind: ObstacleKind = ObstacleKind.STATIC

    def __post_init__(self):
        object.__setattr__(self, "kind", ObstacleKind(self.kind))
        if self.box.is_degenerate():
            raise ValueError(f"obstacle {self.id} has a degenerate box {self.box}")


@dataclass(frozen=True)
class Environment:
    workspace: HyperInterval
    obstacles: tuple[Obstacle, ...] = ()
    start_region: HyperInterval | None = None
    goal_region: HyperInterval | None = None
    spawn_region: HyperInterval | None = None
    version: int = 0

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for name in ("start_region", "goal_region", "spawn_region"):
            region = getattr(self, name)
            if region is not None and not self.workspace.contains_box(region):
                raise ValueError(f"{name} {region} is not inside the workspace")
        for ob in self.obstacles:
            if not self.workspace.contains_box(ob.box):
                raise ValueError(f"obstacle {ob.id} {ob.box} is not inside the workspace")

    @property
    def dim(self) -> int:
        return self.workspace.dim

    def point_blocked(self, x: Sequence[float]) -> bool:
        return any(ob.box.contains_point(x[: self.dim]) for ob in self.obstacles)

    def next_obstacle_id(self) -> int:
        return max((ob.id for ob in self.obstacles), default=-1) + 1

    def boxes_array(self) -> tuple[np.ndarray, np.ndarray]:
        """Obstacle bounds stacked as ``(lower, upper)`` arrays of shape (N, dim)."""
        if not self.obstacles:
            empty = np.zeros((0, self.dim))
            return empty, empty
        lo = np.array([ob.box.lower for ob in self.obstacles])
        hi = np.array([ob.box.upper for ob in self.obstacles])
        return lo, hi


def is_obstacle(env: Environment, probe: HyperInterval) -> bool:
    return any(intersects(probe, ob.box) for ob in env.obstacles)


class CaseTag(str, enum.Enum):
    STATIC = "static"
    CASE1 = "case1"
    CASE2A = "case2a"
    CASE2B = "case2b"
    CASE3 = "case3"
    CASE4 = "case4"

    @property
    def adversarial(self) -> bool:
        """Whether a dead end ends the run (the protected-path regimes)."""
        return self in (CaseTag.CASE3, CaseTag.CASE4)


@dataclass(frozen=True)
class DistortionCase:
    tag: CaseTag
    count: int = 3
    half_extent: tuple[float, ...] = (0.4, 0.4)
    step: float = 0.2
    # also keep new obstacles off the unexecuted part of the current plan (Cases 3, 4)
    protect_planned: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tag", CaseTag(self.tag))
        object.__setattr__(self, "half_extent", tuple(float(v) for v in self.half_extent))
        if self.count < 0:
            raise ValueError("spawn count must be non-negative")
        if any(v <= 0 for v in self.half_extent):
            raise ValueError("obstacle half-extent must be strictly positive")
        if self.tag is CaseTag.CASE4 and self.step <= 0:
            raise ValueError("case4 needs a strictly positive step amplitude")

    def check_environment(self, env: Environment) -> None:
        if self.tag in (CaseTag.CASE1, CaseTag.CASE2A, CaseTag.CASE2B) and env.spawn_region is None:
            raise ValueError(f"{self.tag.value} needs a spawn_region")
        if len(self.half_extent) != env.dim:
            raise ValueError(
                f"half_extent has {len(self.half_extent)} components, workspace is {env.dim}-D"
            )


class _Protected:
    """Boxes new obstacles must stay clear of, tested in one vectorised pass."""

    def __init__(self, boxes: list[HyperInterval], dim: int):
        if boxes:
            self.lo = np.array([b.lower for b in boxes])
            self.hi = np.array([b.upper for b in boxes])
        else:
            self.lo = self.hi = np.zeros((0, dim))

    def hit(self, box: HyperInterval) -> bool:
        lo = np.asarray(box.lower)
        hi = np.asarray(box.upper)
        overlap = (self.lo <= hi) & (lo <= self.hi)
        return bool(np.any(np.all(overlap, axis=1)))


def protected_boxes(
    grid: GridSpec,
    covered: Sequence[Sequence[float]],
    planned: Sequence[Sequence[float]] = (),
) -> list[HyperInterval]:
    """Covered (and optionally planned) positions inflated by one cell, plus the agent's cell."""
    dim = grid.dim
    boxes = [ball(tuple(p[:dim]), grid.eta) for p in covered]
    boxes += [ball(tuple(p[:dim]), grid.eta) for p in planned]
    if covered:
        boxes.append(grid.cell(cell_of_point(grid, tuple(covered[-1][:dim]))))
    return boxes


def _spawn_box(rs: RandomSource, region: HyperInterval, half: Sequence[float], ws: HyperInterval):
    center = tuple(rs.uniform(a, b) for a, b in zip(region.lower, region.upper))
    return clamp_box(ball(center, half), ws)


def adversarial_step(ob: Obstacle, h: float, rs: RandomSource, workspace: HyperInterval) -> Obstacle:
    """Random-walk the obstacle's box, then clamp it back inside the workspace.

    In 2-D the horizontal increment is doubled; in 3-D all axes share the same
    amplitude.
    """
    dim = ob.box.dim
    if dim == 2:
        delta = (2.0 * rs.uniform(-h, h), rs.uniform(-h, h))
    elif dim == 3:
        delta = tuple(rs.uniform(-h, h) for _ in range(3))
    else:
        raise ValueError(f"adversarial dynamics are defined for 2-D and 3-D, got {dim}-D")
    return replace(ob, box=clamp_box(shift(delta, ob.box), workspace))


def distort(
    env: Environment,
    case: DistortionCase,
    covered: Sequence[Sequence[float]],
    rs: RandomSource,
    grid: GridSpec,
    planned: Sequence[Sequence[float]] = (),
) -> Environment:
    """Apply one distortion of the given regime and return the next version.

    ``covered`` holds every state visited so far (positions come first in each
    state). Spawns that cannot find a legal spot within ``SPAWN_RETRIES`` draws are
    skipped.
    """
    tag = case.tag
    ws = env.workspace
    obstacles = list(env.obstacles)
    next_id = env.next_obstacle_id()

    def spawn_free(region: HyperInterval, guard: _Protected | None) -> None:
        nonlocal next_id
        for _ in range(case.count):
            for _attempt in range(SPAWN_RETRIES):
                box = _spawn_box(rs, region, case.half_extent, ws)
                if guard is None or not guard.hit(box):
                    obstacles.append(Obstacle(next_id, box, ObstacleKind.RANDOM))
                    next_id += 1
                    break

    if tag is CaseTag.STATIC:
        pass
    elif tag in (CaseTag.CASE1, CaseTag.CASE2B):
        spawn_free(env.spawn_region, None)
    elif tag is CaseTag.CASE2A:
        obstacles = [ob for ob in obstacles if ob.kind is not ObstacleKind.RANDOM]
        spawn_free(env.spawn_region, None)
    elif tag is CaseTag.CASE3:
        guard = _Protected(protected_boxes(grid, covered, planned if case.protect_planned else ()), env.dim)
        spawn_free(ws, guard)
    elif tag is CaseTag.CASE4:
        guard = _Protected(protected_boxes(grid, covered, planned if case.protect_planned else ()), env.dim)
        moved = []
        for ob in obstacles:
            if ob.kind is not ObstacleKind.ADVERSARIAL:
                moved.append(ob)
                continue
            for _attempt in range(SPAWN_RETRIES):
                cand = adversarial_step(ob, case.step, rs, ws)
                if not guard.hit(cand.box):
                    moved.append(cand)
                    break
            else:
                # no legal move: stay put if still clear of the path, otherwise withdraw
                if not guard.hit(ob.box):
                    moved.append(ob)
        obstacles = moved
    else:  # pragma: no cover
        raise ValueError(f"unknown distortion tag {tag}")

    return replace(env, obstacles=tuple(obstacles), version=env.version + 1)


def blocked_cells(env: Environment, grid: GridSpec) -> np.ndarray:
    """Boolean array over the grid: True where the cell box touches an obstacle."""
    mask = np.zeros(grid.shape, dtype=bool)
    los = []
    his = []
    for a in range(grid.dim):
        reps = grid.axis_reps(a)
        # same rounding as ball(rep, eta)
        los.append(reps + -grid.eta[a])
        his.append(reps + grid.eta[a])
    for ob in env.obstacles:
        sel = [
            np.flatnonzero((los[a] <= ob.box.upper[a]) & (ob.box.lower[a] <= his[a]))
            for a in range(grid.dim)
        ]
        if all(s.size for s in sel):
            mask[np.ix_(*sel)] = True
    return mask
