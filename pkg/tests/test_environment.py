import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onthego.environment import (
    CaseTag,
    DistortionCase,
    Environment,
    Obstacle,
    ObstacleKind,
    RandomSource,
    adversarial_step,
    blocked_cells,
    distort,
    is_obstacle,
    protected_boxes,
    uniform,
)
from onthego.geometry import HyperInterval, ball, discretize, intersects

from oracles import blocked_set

WS = HyperInterval((0.0, 0.0), (10.0, 8.0))
SPAWN = HyperInterval((4.0, 2.0), (6.0, 6.0))
GRID = discretize(WS, 0.2)


class FixedDraw:
    """Stand-in RandomSource returning a fixed fraction of every interval."""

    def __init__(self, frac):
        self.frac = frac

    def uniform(self, a, b):
        return a + (b - a) * self.frac


def box(lo, hi):
    return HyperInterval(tuple(map(float, lo)), tuple(map(float, hi)))


def env_with(*obstacles, spawn=SPAWN):
    return Environment(WS, tuple(obstacles), spawn_region=spawn)


def test_uniform_degenerate_and_range():
    rs = RandomSource(3)
    assert uniform(rs, 0.0, 0.0) == 0.0
    vals = [uniform(rs, -0.2, 0.2) for _ in range(2)]
    assert all(-0.2 <= v <= 0.2 for v in vals)
    assert vals[0] != vals[1]


def test_uniform_reproducible():
    a, b = RandomSource(42), RandomSource(42)
    assert [a.uniform(0, 1) for _ in range(5)] == [b.uniform(0, 1) for _ in range(5)]
    assert RandomSource(43).uniform(0, 1) != RandomSource(42).uniform(0, 1)


def test_uniform_matches_pcg64_stream():
    # the documented stream: a + (b - a) * Generator(PCG64(seed)).random()
    ref = np.random.Generator(np.random.PCG64(7)).random(3)
    rs = RandomSource(7)
    assert [rs.uniform(1.0, 3.0) for _ in range(3)] == list(1.0 + 2.0 * ref)


def test_random_source_seed_range():
    with pytest.raises(ValueError):
        RandomSource(-1)
    with pytest.raises(ValueError):
        RandomSource(2**64)


def test_is_obstacle_examples():
    assert not is_obstacle(Environment(WS), box((0, 0), (1, 1)))
    env = env_with(Obstacle(0, box((2, 2), (3, 3))))
    assert is_obstacle(env, box((1.9, 1.9), (2.3, 2.3)))
    assert not is_obstacle(env, box((0, 0), (0.4, 0.4)))
    assert is_obstacle(env, box((3, 3), (3.4, 3.4)))  # touching counts


def test_environment_rejects_outside_obstacle():
    with pytest.raises(ValueError):
        Environment(WS, (Obstacle(0, box((9, 0), (11, 1))),))


def test_obstacle_rejects_degenerate_box():
    with pytest.raises(ValueError):
        Obstacle(0, box((1, 1), (1, 2)))


def test_blocked_cells_matches_oracle():
    obs = [box((2, 0), (2.6, 5)), box((4.6, 3), (5.2, 8)), box((7.1, 1.1), (7.3, 1.3))]
    env = env_with(*(Obstacle(k, b) for k, b in enumerate(obs)))
    got = {tuple(int(v) for v in idx) for idx in np.argwhere(blocked_cells(env, GRID))}
    expect = blocked_set(GRID.shape, WS.lower, GRID.eta, [(b.lower, b.upper) for b in obs])
    assert got == expect


def test_case1_zero_count_only_bumps_version():
    env = env_with(Obstacle(0, box((2, 2), (3, 3))))
    out = distort(env, DistortionCase(CaseTag.CASE1, count=0), [(1.0, 1.0)], RandomSource(0), GRID)
    assert out.obstacles == env.obstacles
    assert out.version == env.version + 1


def test_case1_spawns_inside_region():
    env = env_with()
    case = DistortionCase(CaseTag.CASE1, count=5, half_extent=(0.3, 0.3))
    out = distort(env, case, [(1.0, 1.0)], RandomSource(1), GRID)
    assert len(out.obstacles) == 5
    for ob in out.obstacles:
        assert ob.kind is ObstacleKind.RANDOM
        assert SPAWN.contains_point(ob.box.center)
        assert WS.contains_box(ob.box)
    # ids are fresh and unique
    assert len({ob.id for ob in out.obstacles}) == 5


def test_case2a_resets_random_obstacles():
    static = Obstacle(0, box((2, 2), (3, 3)))
    env = env_with(static)
    case = DistortionCase(CaseTag.CASE2A, count=3, half_extent=(0.3, 0.3))
    rs = RandomSource(2)
    first = distort(env, case, [(1.0, 1.0)], rs, GRID)
    second = distort(first, case, [(1.0, 1.0)], rs, GRID)
    for e in (first, second):
        assert sum(ob.kind is ObstacleKind.RANDOM for ob in e.obstacles) == 3
        assert static in e.obstacles
    ids1 = {ob.id for ob in first.obstacles if ob.kind is ObstacleKind.RANDOM}
    ids2 = {ob.id for ob in second.obstacles if ob.kind is ObstacleKind.RANDOM}
    assert not ids1 & ids2


def test_case2b_accumulates():
    env = env_with()
    case = DistortionCase(CaseTag.CASE2B, count=2, half_extent=(0.3, 0.3))
    rs = RandomSource(3)
    counts = []
    for _ in range(4):
        env = distort(env, case, [(1.0, 1.0)], rs, GRID)
        counts.append(len(env.obstacles))
    assert counts == [2, 4, 6, 8]


def test_case3_keeps_clear_of_covered_path():
    covered = [(0.2 + 0.4 * k, 4.2) for k in range(25)]
    env = Environment(WS)
    case = DistortionCase(CaseTag.CASE3, count=30, half_extent=(0.4, 0.4))
    out = distort(env, case, covered, RandomSource(4), GRID)
    assert out.obstacles
    for ob in out.obstacles:
        for p in covered:
            assert not intersects(ob.box, ball(p, GRID.eta))


def test_case3_skips_spawns_without_room():
    # every spawn centre lands on protected ground, so nothing can appear
    covered = [GRID.rep(idx) for idx in GRID.indices()]
    out = distort(Environment(WS), DistortionCase(CaseTag.CASE3, count=3), covered, RandomSource(5), GRID)
    assert out.obstacles == ()
    assert out.version == 1


def test_case3_protect_planned():
    planned = [(0.2 + 0.4 * k, 6.2) for k in range(25)]
    case = DistortionCase(CaseTag.CASE3, count=30, half_extent=(0.4, 0.4), protect_planned=True)
    out = distort(Environment(WS), case, [(0.2, 0.2)], RandomSource(6), GRID, planned)
    for ob in out.obstacles:
        assert not any(intersects(ob.box, ball(p, GRID.eta)) for p in planned)


def test_adversarial_step_zero_draw():
    ob = Obstacle(0, box((4, 4), (5, 5)), ObstacleKind.ADVERSARIAL)
    moved = adversarial_step(ob, 0.2, FixedDraw(0.5), WS)
    assert moved.box.lower == pytest.approx((4, 4))
    assert moved.box.upper == pytest.approx((5, 5))


def test_adversarial_step_max_draw_2d():
    ob = Obstacle(0, box((4, 4), (5, 5)), ObstacleKind.ADVERSARIAL)
    moved = adversarial_step(ob, 0.2, FixedDraw(1.0), WS)
    assert moved.box.center == pytest.approx((4.5 + 0.4, 4.5 + 0.2))


def test_adversarial_step_3d_equal_axes():
    ws3 = HyperInterval((0, 0, 0), (10, 10, 10))
    ob = Obstacle(0, box((4, 4, 4), (5, 5, 5)), ObstacleKind.ADVERSARIAL)
    moved = adversarial_step(ob, 0.2, FixedDraw(0.0), ws3)
    assert moved.box.center == pytest.approx((4.3, 4.3, 4.3))


def test_adversarial_step_clamped_flush():
    ob = Obstacle(0, box((9.5, 7.5), (9.9, 7.9)), ObstacleKind.ADVERSARIAL)
    moved = adversarial_step(ob, 0.2, FixedDraw(1.0), WS)
    assert moved.box.upper == pytest.approx((10.0, 8.0))
    assert moved.box.extent == pytest.approx((0.4, 0.4))


def test_case4_moves_only_adversarial():
    static = Obstacle(0, box((2, 2), (3, 3)))
    adv = Obstacle(1, box((6, 6), (6.8, 6.8)), ObstacleKind.ADVERSARIAL)
    env = env_with(static, adv)
    out = distort(env, DistortionCase(CaseTag.CASE4, step=0.2), [(1.0, 1.0)], RandomSource(7), GRID)
    assert out.obstacles[0] == static
    assert out.obstacles[1].box != adv.box
    assert out.obstacles[1].box.extent == pytest.approx(adv.box.extent)


def test_case4_withdraws_obstacle_that_cannot_escape():
    # the obstacle already sits on the covered path and every move stays on it
    covered = [GRID.rep(idx) for idx in GRID.indices()]
    adv = Obstacle(1, box((6, 6), (6.8, 6.8)), ObstacleKind.ADVERSARIAL)
    out = distort(env_with(adv), DistortionCase(CaseTag.CASE4), covered, RandomSource(8), GRID)
    assert out.obstacles == ()


def test_protected_boxes_include_agent_cell():
    boxes = protected_boxes(GRID, [(1.0, 1.0), (1.5, 1.3)])
    assert boxes[-1] == GRID.cell((3, 3))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 4))
def test_case4_never_touches_covered(seed, n_steps):
    rs = RandomSource(seed)
    advs = [Obstacle(k, box((1 + 2 * k, 5), (1.8 + 2 * k, 5.8)), ObstacleKind.ADVERSARIAL) for k in range(4)]
    env = env_with(*advs)
    covered = [(0.2 + 0.4 * k, 4.2) for k in range(n_steps * 5 + 1)]
    case = DistortionCase(CaseTag.CASE4, step=0.4)
    for _ in range(3):
        env = distort(env, case, covered, rs, GRID)
        for ob in env.obstacles:
            assert not any(intersects(ob.box, ball(p, GRID.eta)) for p in covered)
            assert WS.contains_box(ob.box)
