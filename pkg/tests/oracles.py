"""Independent reference implementations used by the tests.

Everything here is written in plain Python, one query at a time, without
touching the package kernels, so agreement is a genuine cross-check.
"""

import math

# values computed by hand and frozen
AGF_AT_1_0 = 0.8824969025845955  # exp(-1/8)
AGF_AT_0_3 = 0.07955950871822769  # exp(-81/32)
FRONTAL_EXTENT_DEFAULT = math.sqrt(2.0 * 2.0**2 * math.log(1.0 / 0.2))  # 3.58824...


def wrap(a):
    while a > math.pi:
        a -= 2 * math.pi
    while a <= -math.pi:
        a += 2 * math.pi
    return a


def agf_straight(px, py, theta, x, y, sh=2.0, ss=4.0 / 3.0, sr=1.0):
    """Line-by-line evaluation of the asymmetric Gaussian personal-space function."""
    dx, dy = x - px, y - py
    alpha = math.atan2(dy, dx) - theta + math.pi / 2
    alpha = wrap(alpha)
    sigma = sr if alpha <= 0 else sh
    a = math.cos(theta) ** 2 / (2 * sigma**2) + math.sin(theta) ** 2 / (2 * ss**2)
    b = math.sin(2 * theta) / (4 * sigma**2) - math.sin(2 * theta) / (4 * ss**2)
    c = math.sin(theta) ** 2 / (2 * sigma**2) + math.cos(theta) ** 2 / (2 * ss**2)
    return math.exp(-(a * dx * dx + 2 * b * dx * dy + c * dy * dy))


def fk(q, L1, L2, offsets):
    x, y, p1, p2 = q
    l1 = (x + L1 * math.cos(p1), y + L1 * math.sin(p1))
    l2 = (l1[0] + L2 * math.cos(p1 + p2), l1[1] + L2 * math.sin(p1 + p2))
    c, s = math.cos(p1 + p2), math.sin(p1 + p2)
    objs = [(l2[0] + c * ox - s * oy, l2[1] + s * ox + c * oy) for ox, oy in offsets]
    return [(x, y), l1, l2, *objs]


def dist(a, b, w_ang=1.0):
    return math.sqrt(
        (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + w_ang * wrap(a[2] - b[2]) ** 2 + w_ang * wrap(a[3] - b[3]) ** 2
    )


def midpoint_line_integral(f, a, b, n=100_000):
    """Midpoint Riemann sum of ``f`` along the straight segment ``a -> b`` (planar, arc length)."""
    L = math.hypot(b[0] - a[0], b[1] - a[1])
    h = L / n
    total = 0.0
    for i in range(n):
        t = (i + 0.5) / n
        total += f(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
    return total * h


def quartiles_sorted(values):
    """min, Q1, median, Q3, max using rank (n-1)p with linear interpolation."""
    v = sorted(values)
    n = len(v)

    def q(p):
        h = (n - 1) * p
        lo = math.floor(h)
        hi = min(lo + 1, n - 1)
        return v[lo] + (h - lo) * (v[hi] - v[lo])

    return (v[0], q(0.25), q(0.5), q(0.75), v[-1])


def scan_nearest(nodes, q, w_ang=1.0):
    best, best_d = 0, math.inf
    for i, n in enumerate(nodes):
        d = dist(n, q, w_ang)
        if d < best_d:
            best, best_d = i, d
    return best


def point_in_rect(x, y, r):
    return r[0] <= x <= r[2] and r[1] <= y <= r[3]
