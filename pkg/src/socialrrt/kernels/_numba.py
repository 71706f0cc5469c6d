"""Loop-style kernels compiled with numba.

Every function here mirrors one in ``_numpy.py``; the two are checked
against each other in the test suite.

Array layouts shared by both backends:

- configuration ``q``: ``(4,)`` as ``x, y, psi1, psi2``
- ``geom``: ``(4,)`` as ``link1_length, link2_length, base_radius, inflation``
- ``offsets``: ``(V, 2)`` object polyline in the end-effector frame
- ``weights``: ``(3 + V,)`` for ``base, link1_tip, link2_tip, object_0..``
- ``persons``: ``(H, 8)`` as ``x, y, theta, sigma_h, sigma_s, sigma_r, tau, body_radius``
- ``bounds``: ``(4,)`` as ``xmin, ymin, xmax, ymax``
- ``rects``: ``(R, 4)`` same layout as bounds; ``discs``: ``(D, 3)`` as ``x, y, r``
"""

import math

import numpy as np
from numba import njit

PI = math.pi
TWO_PI = 2.0 * math.pi


@njit(cache=True)
def wrap_angle(a):
    return a - TWO_PI * math.ceil((a - PI) / TWO_PI)


@njit(cache=True)
def wrap_positive(a):
    r = a - TWO_PI * math.floor(a / TWO_PI)
    if r >= TWO_PI:
        r = 0.0
    return r


@njit(cache=True)
def config_distance(a, b, w_ang):
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    d1 = wrap_angle(b[2] - a[2])
    d2 = wrap_angle(b[3] - a[3])
    return math.sqrt(dx * dx + dy * dy + w_ang * d1 * d1 + w_ang * d2 * d2)


@njit(cache=True)
def config_distances(Q, q, w_ang):
    n = Q.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = config_distance(Q[i], q, w_ang)
    return out


@njit(cache=True)
def n_steps(dist, resolution):
    n = int(math.ceil(dist / resolution)) + 1
    return max(2, n)


@njit(cache=True)
def _interp_row(qa, qb, t, out):
    out[0] = qa[0] + t * (qb[0] - qa[0])
    out[1] = qa[1] + t * (qb[1] - qa[1])
    out[2] = wrap_positive(qa[2] + t * wrap_angle(qb[2] - qa[2]))
    out[3] = wrap_positive(qa[3] + t * wrap_angle(qb[3] - qa[3]))


@njit(cache=True)
def interpolate(qa, qb, n):
    out = np.empty((n, 4))
    for k in range(n):
        if k == 0:
            out[k, :] = qa
        elif k == n - 1:
            out[k, :] = qb
        else:
            _interp_row(qa, qb, k / (n - 1), out[k])
    return out


@njit(cache=True)
def _points_into(q, geom, offsets, pts):
    x = q[0]
    y = q[1]
    c1 = math.cos(q[2])
    s1 = math.sin(q[2])
    c12 = math.cos(q[2] + q[3])
    s12 = math.sin(q[2] + q[3])
    x1 = x + geom[0] * c1
    y1 = y + geom[0] * s1
    x2 = x1 + geom[1] * c12
    y2 = y1 + geom[1] * s12
    pts[0, 0] = x
    pts[0, 1] = y
    pts[1, 0] = x1
    pts[1, 1] = y1
    pts[2, 0] = x2
    pts[2, 1] = y2
    for k in range(offsets.shape[0]):
        dx = offsets[k, 0]
        dy = offsets[k, 1]
        pts[3 + k, 0] = x2 + c12 * dx - s12 * dy
        pts[3 + k, 1] = y2 + s12 * dx + c12 * dy


@njit(cache=True)
def forward_points(Q, geom, offsets):
    n = Q.shape[0]
    out = np.empty((n, 3 + offsets.shape[0], 2))
    for i in range(n):
        _points_into(Q[i], geom, offsets, out[i])
    return out


@njit(cache=True)
def _agf_raw(p, x, y):
    dx = x - p[0]
    dy = y - p[1]
    th = p[2]
    if dx == 0.0 and dy == 0.0:
        bearing = 0.0
    else:
        bearing = math.atan2(dy, dx)
    alpha = wrap_angle(bearing - th + PI / 2.0)
    sig = p[5] if alpha <= 0.0 else p[3]
    ss = p[4]
    ct = math.cos(th)
    st = math.sin(th)
    s2 = math.sin(2.0 * th)
    a = ct * ct / (2.0 * sig * sig) + st * st / (2.0 * ss * ss)
    b = s2 / (4.0 * sig * sig) - s2 / (4.0 * ss * ss)
    c = st * st / (2.0 * sig * sig) + ct * ct / (2.0 * ss * ss)
    return math.exp(-(a * dx * dx + 2.0 * b * dx * dy + c * dy * dy))


@njit(cache=True)
def agf_values(persons, xs, ys, thresholded):
    """AGF of every person at every query point, shape ``(H, M)``."""
    h = persons.shape[0]
    m = xs.shape[0]
    out = np.empty((h, m))
    for i in range(h):
        for j in range(m):
            v = _agf_raw(persons[i], xs[j], ys[j])
            if thresholded and v <= persons[i, 6]:
                v = 0.0
            out[i, j] = v
    return out


@njit(cache=True)
def _social_from_points(pts, weights, persons):
    s = 0.0
    for i in range(persons.shape[0]):
        for j in range(pts.shape[0]):
            w = weights[j]
            if w == 0.0:
                continue
            v = _agf_raw(persons[i], pts[j, 0], pts[j, 1])
            if v > persons[i, 6]:
                s += w * v
    return s


@njit(cache=True)
def social_costs(Q, geom, offsets, weights, persons):
    n = Q.shape[0]
    out = np.empty(n)
    pts = np.empty((3 + offsets.shape[0], 2))
    for i in range(n):
        _points_into(Q[i], geom, offsets, pts)
        out[i] = _social_from_points(pts, weights, persons)
    return out


@njit(cache=True)
def motion_social_cost(qa, qb, w_ang, resolution, geom, offsets, weights, persons):
    dist = config_distance(qa, qb, w_ang)
    if dist == 0.0 or persons.shape[0] == 0:
        return 0.0
    n = n_steps(dist, resolution)
    step = dist / (n - 1)
    pts = np.empty((3 + offsets.shape[0], 2))
    row = np.empty(4)
    total = 0.0
    prev = 0.0
    for k in range(n):
        if k == 0:
            row[:] = qa
        elif k == n - 1:
            row[:] = qb
        else:
            _interp_row(qa, qb, k / (n - 1), row)
        _points_into(row, geom, offsets, pts)
        s = _social_from_points(pts, weights, persons)
        if k > 0:
            total += 0.5 * step * (s + prev)
        prev = s
    return total


@njit(cache=True)
def edge_social_costs(Q, qb, w_ang, resolution, geom, offsets, weights, persons):
    n = Q.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = motion_social_cost(Q[i], qb, w_ang, resolution, geom, offsets, weights, persons)
    return out


# ---------------------------------------------------------------- geometry


@njit(cache=True)
def _seg_hits_box(ax, ay, bx, by, xmin, ymin, xmax, ymax):
    # Liang-Barsky clip against a closed box
    dx = bx - ax
    dy = by - ay
    t0 = 0.0
    t1 = 1.0
    for e in range(4):
        if e == 0:
            p = -dx
            qq = ax - xmin
        elif e == 1:
            p = dx
            qq = xmax - ax
        elif e == 2:
            p = -dy
            qq = ay - ymin
        else:
            p = dy
            qq = ymax - ay
        if p == 0.0:
            if qq < 0.0:
                return False
        else:
            r = qq / p
            if p < 0.0:
                if r > t1:
                    return False
                if r > t0:
                    t0 = r
            else:
                if r < t0:
                    return False
                if r < t1:
                    t1 = r
    return True


@njit(cache=True)
def _seg_point_dist2(ax, ay, bx, by, px, py):
    dx = bx - ax
    dy = by - ay
    l2 = dx * dx + dy * dy
    t = 0.0
    if l2 > 0.0:
        t = ((px - ax) * dx + (py - ay) * dy) / l2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    ex = ax + t * dx - px
    ey = ay + t * dy - py
    return ex * ex + ey * ey


@njit(cache=True)
def _seg_hits_rect(ax, ay, bx, by, rect, infl):
    xmin = rect[0]
    ymin = rect[1]
    xmax = rect[2]
    ymax = rect[3]
    if infl == 0.0:
        return _seg_hits_box(ax, ay, bx, by, xmin, ymin, xmax, ymax)
    # rounded box = two expanded boxes + four corner discs
    if _seg_hits_box(ax, ay, bx, by, xmin - infl, ymin, xmax + infl, ymax):
        return True
    if _seg_hits_box(ax, ay, bx, by, xmin, ymin - infl, xmax, ymax + infl):
        return True
    i2 = infl * infl
    if _seg_point_dist2(ax, ay, bx, by, xmin, ymin) <= i2:
        return True
    if _seg_point_dist2(ax, ay, bx, by, xmax, ymin) <= i2:
        return True
    if _seg_point_dist2(ax, ay, bx, by, xmin, ymax) <= i2:
        return True
    return _seg_point_dist2(ax, ay, bx, by, xmax, ymax) <= i2


@njit(cache=True)
def _disc_hits_rect(cx, cy, r, rect):
    px = min(max(cx, rect[0]), rect[2])
    py = min(max(cy, rect[1]), rect[3])
    dx = cx - px
    dy = cy - py
    return dx * dx + dy * dy <= r * r


@njit(cache=True)
def _valid_points(pts, geom, bounds, rects, discs, persons):
    rb = geom[2]
    infl = geom[3]
    bx = pts[0, 0]
    by = pts[0, 1]
    if bx - rb < bounds[0] or bx + rb > bounds[2] or by - rb < bounds[1] or by + rb > bounds[3]:
        return False
    for k in range(1, pts.shape[0]):
        px = pts[k, 0]
        py = pts[k, 1]
        if px - infl < bounds[0] or px + infl > bounds[2] or py - infl < bounds[1] or py + infl > bounds[3]:
            return False
    for i in range(rects.shape[0]):
        if _disc_hits_rect(bx, by, rb, rects[i]):
            return False
    for i in range(discs.shape[0]):
        dx = bx - discs[i, 0]
        dy = by - discs[i, 1]
        rr = rb + discs[i, 2]
        if dx * dx + dy * dy <= rr * rr:
            return False
    for i in range(persons.shape[0]):
        dx = bx - persons[i, 0]
        dy = by - persons[i, 1]
        rr = rb + persons[i, 7]
        if dx * dx + dy * dy <= rr * rr:
            return False
    # segments: base->l1, l1->l2, l2->object_0, object_k->object_k+1
    for s in range(pts.shape[0] - 1):
        ax = pts[s, 0]
        ay = pts[s, 1]
        ex = pts[s + 1, 0]
        ey = pts[s + 1, 1]
        for i in range(rects.shape[0]):
            if _seg_hits_rect(ax, ay, ex, ey, rects[i], infl):
                return False
        for i in range(discs.shape[0]):
            rr = discs[i, 2] + infl
            if _seg_point_dist2(ax, ay, ex, ey, discs[i, 0], discs[i, 1]) <= rr * rr:
                return False
        for i in range(persons.shape[0]):
            rr = persons[i, 7] + infl
            if _seg_point_dist2(ax, ay, ex, ey, persons[i, 0], persons[i, 1]) <= rr * rr:
                return False
    return True


@njit(cache=True)
def valid_configs(Q, geom, offsets, bounds, rects, discs, persons):
    n = Q.shape[0]
    out = np.empty(n, dtype=np.bool_)
    pts = np.empty((3 + offsets.shape[0], 2))
    for i in range(n):
        _points_into(Q[i], geom, offsets, pts)
        out[i] = _valid_points(pts, geom, bounds, rects, discs, persons)
    return out


@njit(cache=True)
def collision_free(qa, qb, w_ang, resolution, geom, offsets, bounds, rects, discs, persons):
    n = n_steps(config_distance(qa, qb, w_ang), resolution)
    pts = np.empty((3 + offsets.shape[0], 2))
    row = np.empty(4)
    for k in range(n):
        if k == 0:
            row[:] = qa
        elif k == n - 1:
            row[:] = qb
        else:
            _interp_row(qa, qb, k / (n - 1), row)
        _points_into(row, geom, offsets, pts)
        if not _valid_points(pts, geom, bounds, rects, discs, persons):
            return False
    return True
