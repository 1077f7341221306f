"""Reference implementations used only by the tests.

Written in plain Python with dicts and loops, independent of the numpy code
paths they check.
"""

from __future__ import annotations

import itertools
import math
from collections import deque


def cell_bounds(lower, eta, idx):
    """Closed bounds of cell ``idx`` on a grid anchored at ``lower``."""
    return [(lo + 2 * e * k, lo + 2 * e * (k + 1)) for lo, e, k in zip(lower, eta, idx)]


def boxes_touch(a, b):
    """Closed-interval overlap of two boxes given as per-axis (lo, hi) pairs."""
    return all(alo <= bhi and blo <= ahi for (alo, ahi), (blo, bhi) in zip(a, b))


def blocked_set(shape, lower, eta, boxes):
    """Cells whose closed bounds touch any obstacle box."""
    out = set()
    for idx in itertools.product(*(range(n) for n in shape)):
        cb = cell_bounds(lower, eta, idx)
        if any(boxes_touch(cb, list(zip(b[0], b[1]))) for b in boxes):
            out.add(idx)
    return out


def bfs_hops(shape, blocked, goal):
    """Moore-neighbour BFS distance from ``goal`` over free cells."""
    dist = {goal: 0}
    queue = deque([goal])
    steps = [d for d in itertools.product((-1, 0, 1), repeat=len(shape)) if any(d)]
    while queue:
        cur = queue.popleft()
        for d in steps:
            nb = tuple(c + o for c, o in zip(cur, d))
            if any(not 0 <= c < n for c, n in zip(nb, shape)):
                continue
            if nb in blocked or nb in dist:
                continue
            dist[nb] = dist[cur] + 1
            queue.append(nb)
    return dist


def point_in_box(p, lower, upper):
    return all(lo <= x <= hi for x, lo, hi in zip(p, lower, upper))


def segment_hits_rect(p, q, lower, upper):
    """Whether segment pq meets the closed rectangle (Liang-Barsky clipping)."""
    t0, t1 = 0.0, 1.0
    for axis in range(2):
        d = q[axis] - p[axis]
        # each face constraint reads  den * t <= num
        for den, num in ((-d, p[axis] - lower[axis]), (d, upper[axis] - p[axis])):
            if den == 0:
                if num < 0:
                    return False
            elif den < 0:
                t0 = max(t0, num / den)
            else:
                t1 = min(t1, num / den)
            if t0 > t1:
                return False
    return True


def factorial_window(T, i):
    return T * math.factorial(i - 1)
