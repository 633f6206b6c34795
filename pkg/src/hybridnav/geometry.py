"""Planar geometry helpers: segment crossings and point-in-polygon tests.

Conventions are chosen for determinism: a wall crossing only counts when
the two open segments properly cross (endpoint touches and collinear
overlaps count as zero), and polygon membership uses the even-odd rule
with boundary points counted as inside.
"""

from .geo import MapPoint


def orientation(a: MapPoint, b: MapPoint, c: MapPoint) -> float:
    """Signed area of the parallelogram spanned by (b-a) and (c-a)."""
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def segments_properly_intersect(
    p1: MapPoint, p2: MapPoint, q1: MapPoint, q2: MapPoint
) -> bool:
    """True when the open segments p1-p2 and q1-q2 cross at an interior point.

    Touches at endpoints and collinear overlaps return False.
    """
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    return d1 * d2 < 0.0 and d3 * d4 < 0.0


def point_on_segment(p: MapPoint, a: MapPoint, b: MapPoint) -> bool:
    """True when p lies on the closed segment a-b (exact arithmetic)."""
    if orientation(a, b, p) != 0.0:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def point_in_polygon(p: MapPoint, vertices) -> bool:
    """Even-odd membership test; points on an edge count as inside."""
    n = len(vertices)
    for i in range(n):
        if point_on_segment(p, vertices[i], vertices[(i + 1) % n]):
            return True
    inside = False
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < x_cross:
                inside = not inside
    return inside


def polygon_is_simple(vertices) -> bool:
    """Reject self-intersecting or degenerate polygons.

    Checks that no vertex repeats its predecessor and that no two
    non-adjacent edges properly cross.  Collinear overlaps between
    adjacent edges are tolerated (they do not change the even-odd test).
    """
    n = len(vertices)
    if n < 3:
        return False
    for i in range(n):
        if vertices[i] == vertices[(i + 1) % n]:
            return False
    for i in range(n):
        a1 = vertices[i]
        a2 = vertices[(i + 1) % n]
        for j in range(i + 1, n):
            # Skip edges sharing a vertex (adjacent, or first/last pair).
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            b1 = vertices[j]
            b2 = vertices[(j + 1) % n]
            if segments_properly_intersect(a1, a2, b1, b2):
                return False
    return True
