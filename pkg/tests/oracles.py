"""Independent reference implementations used to check the package.

Everything here is deliberately simple and separate from the library's
fast paths: plain loops, sets, and scalar math.  The flood oracle never
touches the spatial index, and the chain oracle re-iterates the edge
recurrence from scratch.
"""

from __future__ import annotations

import math

import numpy as np

from sectorcast.geometry import Point2D, Sector, in_sector
from sectorcast.scenario import Scenario

TWO_PI = 2.0 * math.pi


def polar_in_sector(p: Point2D, s: Sector) -> bool:
    """Sector membership via explicit polar-coordinate comparison."""
    dx = p.x - s.apex.x
    dy = p.y - s.apex.y
    q = dx * dx + dy * dy
    if q == 0.0 or q > s.radius * s.radius:
        return False
    ang = math.atan2(dy, dx)
    diff = abs((ang - s.axis + math.pi) % TWO_PI - math.pi)
    return diff <= s.half_angle


def chain_oracle(d: float, r: float, theta: float):
    """Scripted iteration of the edge recurrence and area sum.

    Returns (d_seq, areas, total_area); areas use the outgoing edge of each
    triangle, the total doubles the one-sided sum.
    """
    phi = theta / 2.0
    seq = [d]
    while True:
        prev = seq[-1]
        nxt = (prev * prev + r * r - 2.0 * r * prev * math.cos(phi)) ** 0.5
        seq.append(nxt)
        if nxt <= r or nxt >= prev or (prev - nxt) < 1e-6 * r:
            break
    areas = [0.5 * r * v * math.sin(phi) for v in seq[1:]]
    return seq, areas, 2.0 * sum(areas)


def shoelace(a, b, c) -> float:
    """Unsigned triangle area from coordinates."""
    return abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) / 2.0


def brute_force_flood(scenario: Scenario, rng: np.random.Generator | None = None):
    """Reference flood: direct in_sector scans, no index, set bookkeeping.

    Returns a dict with the same accounting as BroadcastOutcome.
    """
    cfg = scenario.config
    n = len(scenario.nodes)
    points = [Point2D(float(x), float(y)) for x, y in scenario.nodes]
    points.append(scenario.destination)  # id n
    dest = scenario.destination

    eps = cfg.direction_error_bound
    if eps > 0.0:
        deltas = rng.uniform(-eps, eps, size=n + 1)
    else:
        deltas = np.zeros(n + 1)

    covered: set[int] = set()
    transmitted: set[int] = set()
    implicated: list[int] = []
    per_round: list[int] = []
    first_hop = None

    frontier: list[tuple[int, Point2D]] = [(-1, scenario.source)]
    round_no = 0
    while frontier:
        per_round.append(len(frontier))
        implicated.extend(tid for tid, _ in frontier)
        newly: set[int] = set()
        for tid, pos in frontier:
            if pos.x == dest.x and pos.y == dest.y:
                base = 0.0
            else:
                base = math.atan2(dest.y - pos.y, dest.x - pos.x) % TWO_PI
            sector = Sector(apex=pos, axis=(base + deltas[tid + 1]) % TWO_PI,
                            half_angle=cfg.theta / 2.0, radius=cfg.radius)
            for idx, p in enumerate(points):
                if in_sector(p, sector):
                    newly.add(idx)
        if first_hop is None and n in newly:
            first_hop = round_no + 1
        fresh = {i for i in newly if i < n and i not in covered and i not in transmitted}
        covered |= newly
        transmitted |= fresh
        frontier = [(i, points[i]) for i in sorted(fresh)]
        round_no += 1

    return {
        "success": n in covered,
        "first_delivery_hop": first_hop,
        "implicated": frozenset(implicated),
        "covered": frozenset(covered),
        "rounds": len(per_round),
        "per_round_transmitters": tuple(per_round),
    }
