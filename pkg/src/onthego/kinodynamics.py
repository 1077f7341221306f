"""Six-state drone model, fixed-step RK4 and the cell-to-cell steering helper.

State ``(x, y, z, psi, theta, v)``: position, yaw, pitch and linear speed.
Input ``(omega, alpha, a)``: yaw rate, pitch rate and linear acceleration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .environment import Environment, blocked_cells
from .geometry import GridSpec, HyperInterval, cell_of_point

PSI_MAX = math.pi / 6
THETA_MAX = math.pi / 6
V_MAX = 0.5
OMEGA_MAX = math.pi / 2
ALPHA_MAX = math.pi / 2
ACCEL_MAX = 1.0

STATE_LIMITS = np.array([PSI_MAX, THETA_MAX, V_MAX])
INPUT_LIMITS = np.array([OMEGA_MAX, ALPHA_MAX, ACCEL_MAX])


class SteeringFailed(RuntimeError):
    """No sampled control keeps the drone clear of obstacles."""


class DroneState(NamedTuple):
    x: float
    y: float
    z: float
    psi: float = 0.0
    theta: float = 0.0
    v: float = 0.0

    @property
    def position(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


class ControlInput(NamedTuple):
    omega: float = 0.0
    alpha: float = 0.0
    a: float = 0.0


@dataclass(frozen=True)
class SteeringSpec:
    horizon: float = 0.3
    rk4_substeps: int = 4
    control_grid: int = 5

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("steering horizon must be positive")
        if self.rk4_substeps < 1:
            raise ValueError("rk4_substeps must be at least 1")
        if self.control_grid < 2:
            raise ValueError("control_grid needs at least 2 samples per axis")

    def controls(self) -> np.ndarray:
        """Every sampled input, shape (control_grid**3, 3), in scan order."""
        axes = [np.linspace(-m, m, self.control_grid) for m in INPUT_LIMITS]
        return np.array(list(itertools.product(*axes)))


def derivative(s: Sequence[float], u: Sequence[float]) -> np.ndarray:
    """Right-hand side of the drone ODE. Accepts single states or stacked batches."""
    s = np.asarray(s, dtype=float)
    u = np.asarray(u, dtype=float)
    psi, theta, v = s[..., 3], s[..., 4], s[..., 5]
    vel = np.stack(
        [
            v * np.cos(psi) * np.cos(theta),
            v * np.sin(psi) * np.cos(theta),
            v * np.sin(theta),
        ],
        axis=-1,
    )
    rates = np.broadcast_to(u, vel.shape)
    return np.concatenate([vel, rates], axis=-1)


def _saturated_rhs(s: np.ndarray, u: np.ndarray) -> np.ndarray:
    # kinematics see the saturated angles and speed, so intermediate RK4 stages
    # cannot borrow speed beyond the limits; inside the box this is derivative()
    sat = s.copy()
    sat[..., 3:] = np.clip(s[..., 3:], -STATE_LIMITS, STATE_LIMITS)
    return derivative(sat, u)


def _rk4_batch(
    s: np.ndarray,
    u: np.ndarray,
    horizon: float,
    substeps: int,
    bounds: HyperInterval | None,
    saturate: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate N states under constant inputs; returns endpoints and substep positions."""
    dt = horizon / substeps
    f = _saturated_rhs if saturate else derivative
    if bounds is not None:
        lo = np.asarray(bounds.lower)
        hi = np.asarray(bounds.upper)
    x = np.array(s, dtype=float)
    trace = np.empty(x.shape[:-1] + (substeps, 3))
    for k in range(substeps):
        k1 = f(x, u)
        k2 = f(x + 0.5 * dt * k1, u)
        k3 = f(x + 0.5 * dt * k2, u)
        k4 = f(x + dt * k3, u)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if saturate:
            x[..., 3:] = np.clip(x[..., 3:], -STATE_LIMITS, STATE_LIMITS)
        if bounds is not None:
            x[..., :3] = np.clip(x[..., :3], lo, hi)
        trace[..., k, :] = x[..., :3]
    return x, trace


def integrate(
    s: Sequence[float],
    u: Sequence[float],
    spec: SteeringSpec,
    bounds: HyperInterval | None = None,
    saturate: bool = True,
) -> DroneState:
    """Advance ``s`` over ``spec.horizon`` with classic RK4 and constant input ``u``.

    After every substep yaw, pitch and speed are clipped to their limits and, when
    ``bounds`` is given, the position is clamped into it. ``saturate=False`` gives
    plain RK4 on the raw ODE.
    """
    end, _ = _rk4_batch(
        np.asarray(s, dtype=float)[None, :],
        np.asarray(u, dtype=float)[None, :],
        spec.horizon,
        spec.rk4_substeps,
        bounds,
        saturate,
    )
    return DroneState(*(float(c) for c in end[0]))


class SteerResult(NamedTuple):
    state: DroneState
    control: ControlInput
    reached: bool


def _cells_of(points: np.ndarray, grid: GridSpec) -> np.ndarray:
    lo = np.asarray(grid.domain.lower)
    eta = np.asarray(grid.eta)
    k = np.ceil((points - lo) / (2.0 * eta)).astype(int) - 1
    return np.clip(k, 0, np.asarray(grid.shape) - 1)


def _stops_clear(
    end: np.ndarray, spec: SteeringSpec, bounds: HyperInterval, grid: GridSpec, blocked: np.ndarray
) -> np.ndarray:
    """Whether braking straight to rest from each endpoint stays off obstacle cells."""
    x = end
    ok = np.ones(len(end), dtype=bool)
    for _ in range(math.ceil(V_MAX / (ACCEL_MAX * spec.horizon))):
        v = x[:, 5]
        ub = np.zeros((len(x), 3))
        ub[:, 2] = -np.sign(v) * np.minimum(ACCEL_MAX, np.abs(v) / spec.horizon)
        x, trace = _rk4_batch(x, ub, spec.horizon, spec.rk4_substeps, bounds)
        cells = _cells_of(trace.reshape(-1, 3), grid)
        ok &= ~blocked[tuple(cells.T)].reshape(len(x), -1).any(axis=1)
    return ok


class Rollout:
    """Every sampled constant input integrated from one state, with safety flags.

    Rolling out is the expensive part of steering and does not depend on the
    target cell, so one rollout can be scored against several targets.
    """

    def __init__(
        self,
        s: Sequence[float],
        env: Environment,
        spec: SteeringSpec,
        grid: GridSpec,
        blocked: np.ndarray | None = None,
    ):
        if blocked is None:
            blocked = blocked_cells(env, grid)
        self.start = np.asarray(s, dtype=float)
        self.grid = grid
        self.blocked = blocked
        self.u = spec.controls()
        x0 = np.broadcast_to(self.start, (len(self.u), 6))
        self.end, trace = _rk4_batch(x0, self.u, spec.horizon, spec.rk4_substeps, env.workspace)
        cells = _cells_of(trace.reshape(-1, 3), grid)
        self.safe = ~blocked[tuple(cells.T)].reshape(len(self.u), -1).any(axis=1)
        self.stoppable = self.safe & _stops_clear(self.end, spec, env.workspace, grid, blocked)
        self.effort = np.sum((self.u / INPUT_LIMITS) ** 2, axis=1)
        zero = np.flatnonzero(~self.u.any(axis=1))
        # holding needs the zero input in the sample grid and a start off obstacle cells
        self._hold = zero[0] if len(zero) and not blocked[cell_of_point(grid, tuple(self.start[:3]))] else None

    def _pick(self, pool: np.ndarray, dist: np.ndarray, reached: bool) -> SteerResult | None:
        idx = np.flatnonzero(pool)
        # lexsort keys run last-to-first: distance, then effort, then scan order
        for i in idx[np.lexsort((idx, self.effort[idx], dist[idx]))]:
            state = DroneState(*(float(c) for c in self.end[i]))
            if not self.blocked[cell_of_point(self.grid, state.position)]:
                return SteerResult(state, ControlInput(*(float(c) for c in self.u[i])), reached)
        return None

    def toward(self, target: HyperInterval, strict: bool = False) -> SteerResult | None:
        """Best candidate for ``target``.

        ``strict`` only accepts endpoints inside the target that can still brake
        safely, returning None when there is none.
        """
        if self.start[5] == 0.0 and target.contains_point(self.start[:3]) and self._hold is not None:
            # already at rest in the target: holding still needs no input
            return SteerResult(DroneState(*(float(c) for c in self.start)), ControlInput(), True)
        pos = self.end[:, :3]
        inside = np.all((pos >= np.asarray(target.lower)) & (pos <= np.asarray(target.upper)), axis=1)
        dist = np.linalg.norm(pos - np.asarray(target.center), axis=1)
        if strict:
            return self._pick(self.stoppable & inside, dist, True)
        pools = (
            (self.stoppable & inside, True),
            (self.stoppable, False),
            (self.safe & inside, True),
            (self.safe, False),
        )
        for pool, reached in pools:
            res = self._pick(pool, dist, reached)
            if res is not None:
                return res
        raise SteeringFailed(f"every sampled input from {tuple(np.round(self.start, 4))} collides")


def steer(
    s: Sequence[float],
    target: HyperInterval,
    env: Environment,
    spec: SteeringSpec,
    grid: GridSpec,
    blocked: np.ndarray | None = None,
) -> SteerResult:
    """Pick the sampled constant input that best drives ``s`` into ``target``.

    Candidates whose substep positions visit an obstacle cell are discarded. Among
    the rest, endpoints inside ``target`` win; ties on distance to the target
    centre go to the smaller input, then to scan order. With no endpoint inside
    the target, the closest safe endpoint is returned with ``reached=False``.
    Candidates from which the drone can still brake to rest without touching an
    obstacle cell are preferred over those that merely survive this segment.
    """
    return Rollout(s, env, spec, grid, blocked).toward(target)


def steer_to_cell(
    s: Sequence[float],
    target: HyperInterval,
    env: Environment,
    spec: SteeringSpec,
    grid: GridSpec,
    blocked: np.ndarray | None = None,
) -> DroneState:
    return steer(s, target, env, spec, grid, blocked).state
