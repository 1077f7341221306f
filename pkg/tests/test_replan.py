import pytest

from onthego.environment import CaseTag, DistortionCase, Environment, Obstacle, ObstacleKind
from onthego.geometry import HyperInterval, cell_of_point, discretize
from onthego.replan import ConfigError, RunConfig, Schedule, Status, run
from onthego.wavefront import plan

from oracles import bfs_hops, blocked_set, point_in_box

WS = HyperInterval((0.0, 0.0), (10.0, 8.0))
BARS = (
    HyperInterval((2.0, 0.0), (2.6, 5.0)),
    HyperInterval((4.6, 3.0), (5.2, 8.0)),
    HyperInterval((8.0, 0.0), (8.4, 4.4)),
)
SPAWN = HyperInterval((5.8, 2.0), (6.8, 6.0))


def bars_env(*extra):
    obs = tuple(Obstacle(k, b) for k, b in enumerate(BARS))
    obs += tuple(Obstacle(len(BARS) + k, b, kind) for k, (b, kind) in enumerate(extra))
    return Environment(WS, obs, spawn_region=SPAWN)


def steps_per_version(outcome):
    counts = {}
    for rec in outcome.log[1:]:
        counts[rec.env_version] = counts.get(rec.env_version, 0) + 1
    return [counts.get(v, 0) for v in range(len(outcome.env_history))]


def test_static_run_is_a_single_plan():
    env = bars_env()
    cfg = RunConfig(DistortionCase(CaseTag.CASE1, count=0), (0.2, 0.2), T=5)
    out = run((1, 1), (9, 7), env, cfg)
    assert out.status is Status.REACHED_GOAL
    assert out.replans == 1
    assert out.covered == list(plan(env, (1, 1), (9, 7), 0.2).states)


def test_literal_schedule_windows():
    env = bars_env()
    cfg = RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2), T=2)
    out = run((1, 1), (9, 7), env, cfg)
    seg = steps_per_version(out)
    assert seg[:-1] == [2, 2, 4, 12][: len(seg) - 1]
    assert seg[-1] <= [2, 2, 4, 12, 48][len(seg) - 1]


def test_constant_schedule_windows():
    cfg = RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2), T=3, schedule="constant")
    seg = steps_per_version(run((1, 1), (9, 7), bars_env(), cfg))
    assert all(s == 3 for s in seg[:-1])
    assert 0 < seg[-1] <= 3


def test_log_env_versions_follow_history():
    cfg = RunConfig(DistortionCase(CaseTag.CASE2B, count=2, half_extent=(0.3, 0.3)), (0.2, 0.2), T=4, seed=3)
    out = run((1, 1), (9, 7), bars_env(), cfg)
    versions = [r.env_version for r in out.log]
    assert versions == sorted(versions)
    assert [e.version for e in out.env_history] == list(range(len(out.env_history)))
    assert [r.step for r in out.log] == list(range(len(out.log)))


def test_start_inside_obstacle_rejected():
    cfg = RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2))
    with pytest.raises(ConfigError):
        run((2.2, 1.0), (9, 7), bars_env(), cfg)


def test_goal_outside_workspace_rejected():
    cfg = RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2))
    with pytest.raises(ConfigError):
        run((1, 1), (11, 7), bars_env(), cfg)


def test_spawn_case_needs_region():
    cfg = RunConfig(DistortionCase(CaseTag.CASE1), (0.2, 0.2))
    with pytest.raises(ConfigError):
        run((1, 1), (9, 7), Environment(WS), cfg)


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2), T=0)
    with pytest.raises(ConfigError):
        RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2), max_replans=0)
    with pytest.raises(ValueError):
        RunConfig(DistortionCase(CaseTag.STATIC), (0.2, 0.2), schedule="linear")


def test_goal_ringed_by_adversarial_obstacles_blocks():
    ring = [
        HyperInterval((7.0, 5.0), (9.0, 5.4)),
        HyperInterval((7.0, 6.6), (9.0, 7.0)),
        HyperInterval((7.0, 5.0), (7.4, 7.0)),
        HyperInterval((8.6, 5.0), (9.0, 7.0)),
    ]
    env = bars_env(*((b, ObstacleKind.ADVERSARIAL) for b in ring))
    g = discretize(WS, 0.2)
    goal = (7.9, 5.9)
    blocked = blocked_set(g.shape, WS.lower, g.eta, [(ob.box.lower, ob.box.upper) for ob in env.obstacles])
    hops = bfs_hops(g.shape, blocked, cell_of_point(g, goal))
    assert cell_of_point(g, (1, 1)) not in hops
    cfg = RunConfig(DistortionCase(CaseTag.CASE4, step=0.2), (0.2, 0.2), T=3, max_replans=10)
    out = run((1, 1), goal, env, cfg)
    assert out.status is Status.ROAD_BLOCKED
    assert out.replans <= 10
    assert "road blocked" in out.events[-1]


def test_unprotected_case_hits_replan_cap():
    # the spawn region covers the only gap, so the first spawn shuts it for good
    wall = HyperInterval((4.0, 0.0), (4.4, 7.4))
    env = Environment(WS, (Obstacle(0, wall),), spawn_region=HyperInterval((4.0, 7.0), (4.4, 8.0)))
    case = DistortionCase(CaseTag.CASE1, count=1, half_extent=(0.2, 0.5))
    cfg = RunConfig(case, (0.2, 0.2), T=1, max_replans=6, seed=0, schedule=Schedule.CONSTANT)
    out = run((1, 1), (9, 1), env, cfg)
    assert out.status is Status.REPLAN_CAP
    assert out.replans == 6
    # cases 1 and 2 wait in place after a failed plan instead of giving up
    assert all(p.error.startswith("StartUnreachable") for p in out.plans[1:])


def test_collision_at_distortion_reported():
    # case 1 obstacles ignore the agent, so one can appear right on top of it
    env = Environment(WS, (), spawn_region=HyperInterval((0.6, 0.6), (1.4, 1.4)))
    case = DistortionCase(CaseTag.CASE1, count=1, half_extent=(0.6, 0.6))
    cfg = RunConfig(case, (0.2, 0.2), T=1, schedule="constant")
    out = run((1, 1), (9, 7), env, cfg)
    assert out.status is Status.ROAD_BLOCKED
    assert "CollisionAtDistortion" in out.events[-1]


def test_plans_recorded_with_env():
    cfg = RunConfig(DistortionCase(CaseTag.CASE3, count=4, half_extent=(0.3, 0.3)), (0.2, 0.2), T=4, seed=4)
    out = run((1, 1), (9, 7), bars_env(), cfg)
    for rec in out.plans:
        if rec.trajectory is not None:
            assert rec.trajectory.env_version == rec.env.version
            # a plan starts where the agent stood when it was computed
            assert rec.trajectory.states[0] == tuple(out.log[rec.steps_done].state)


@pytest.mark.parametrize("seed", range(5))
def test_agent_never_inside_obstacles(seed):
    cfg = RunConfig(DistortionCase(CaseTag.CASE2A, count=4, half_extent=(0.3, 0.3)), (0.2, 0.2), T=4, seed=seed)
    out = run((1, 1), (9, 7), bars_env(), cfg)
    for rec in out.log:
        env = out.env_history[rec.env_version]
        assert not any(point_in_box(rec.state, ob.box.lower, ob.box.upper) for ob in env.obstacles)
