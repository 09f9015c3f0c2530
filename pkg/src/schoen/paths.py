"""Loop planning around singularities: polygonal loops with exact rational
vertices, certified enclosure (winding numbers computed exactly) and
clearance from all foreign singularity discs.
"""

import math
import random

from gmpy2 import mpq

from .ball import PrecisionError
from .exact import GaussQ
from .roots import Disc, _sqrt_lb


def _q_round(x, bits=16):
    return mpq(round(float(x) * (1 << bits)), 1 << bits)


def _gauss_round(x, y, bits=16):
    return GaussQ(_q_round(x, bits), _q_round(y, bits))


def dist2(a: GaussQ, b: GaussQ):
    return (a - b).norm2()


def seg_dist2(a: GaussQ, b: GaussQ, p: GaussQ):
    """Exact squared distance from segment [a, b] to point p."""
    ab = b - a
    ap = p - a
    den = ab.norm2()
    if den == 0:
        return ap.norm2()
    t = (ap.re * ab.re + ap.im * ab.im) / den
    if t <= 0:
        return ap.norm2()
    if t >= 1:
        return (p - b).norm2()
    proj = GaussQ(a.re + t * ab.re, a.im + t * ab.im)
    return (p - proj).norm2()


def winding_number(polyline, p: GaussQ):
    """Exact winding number of a closed polyline around p (must not pass
    through p)."""
    w = 0
    n = len(polyline)
    for k in range(n - 1):
        a, b = polyline[k], polyline[k + 1]
        # crossing test on the horizontal ray to the right of p
        ay, by = a.im - p.im, b.im - p.im
        if (ay <= 0) == (by <= 0):
            continue
        # x coordinate of the crossing
        t = ay / (ay - by)
        x = a.re + t * (b.re - a.re)
        if x > p.re:
            w += 1 if by > 0 else -1
    return w


class Loop:
    """Closed polyline from the basepoint around one singularity disc."""

    __slots__ = ("polyline", "target", "ring_radius")

    def __init__(self, polyline, target, ring_radius):
        self.polyline = polyline
        self.target = target
        self.ring_radius = ring_radius

    def __repr__(self):
        return "Loop(target %d, %d vertices)" % (self.target, len(self.polyline))


class LoopSystem:
    """Ordered loops ell_1..ell_r around pairwise disjoint discs; the
    composition ell_r ... ell_1 is homotopic to a simple anticlockwise loop
    around all of them (certified by star-shape plus argument ordering)."""

    __slots__ = ("basepoint", "loops", "discs")

    def __init__(self, basepoint, loops, discs):
        self.basepoint = basepoint
        self.loops = loops
        self.discs = discs

    def __repr__(self):
        return "LoopSystem(base %s, %d loops)" % (self.basepoint, len(self.loops))


def _arg_key(v: GaussQ):
    """Sort key for exact argument in (-pi, pi]: (half-plane class, slope)."""
    x, y = v.re, v.im
    if y < 0:
        half = 0
    elif y > 0:
        half = 2
    else:
        half = 1 if x > 0 else 3  # positive reals before positive imag part
    # within a half plane the angle increases with -x/y (y != 0)
    if y:
        slope = -x / y if y > 0 else -x / y
        return (half, slope)
    return (half, mpq(0))


def _cross(a: GaussQ, b: GaussQ):
    return a.re * b.im - a.im * b.re


def plan_loops(singularities, basepoint_hint=None, obstacles=(), seed=0):
    """Plan a loop system around the given discs.

    obstacles are additional discs the polylines must avoid (apparent
    singularities of operators to be continued along the loops); they do
    not receive loops and may end up enclosed.
    """
    discs = list(singularities)
    r = len(discs)
    if r == 0:
        raise ValueError("no singularities to encircle")
    centers = [d.center for d in discs]
    # personal space: at most a quarter of the nearest foreign distance
    personal = []
    for i in range(r):
        gaps = []
        for j in range(r):
            if j != i:
                gaps.append(_sqrt_lb(dist2(centers[i], centers[j])) - discs[j].radius)
        for ob in obstacles:
            gaps.append(_sqrt_lb(dist2(centers[i], ob.center)) - ob.radius)
        g = min(gaps) if gaps else mpq(1)
        if g <= 0:
            raise PrecisionError("singularity discs not separable")
        rad = min(g / 4, max(g / 8, mpq(1)))
        if discs[i].radius * 3 >= rad:
            raise PrecisionError("singularity disc too large for clearance")
        personal.append(rad)
    spread = mpq(1)
    for i in range(r):
        for j in range(i + 1, r):
            d = _sqrt_lb(dist2(centers[i], centers[j])) + 1
            if d > spread:
                spread = d
    cx = sum((c.re for c in centers), mpq(0)) / r
    cy = sum((c.im for c in centers), mpq(0)) / r

    rng = random.Random(seed)
    candidates = []
    if basepoint_hint is not None:
        candidates.append(basepoint_hint if isinstance(basepoint_hint, GaussQ)
                          else GaussQ(mpq(basepoint_hint), 0))
    angles = list(range(16))
    rng.shuffle(angles)
    for mult in (2, 3, 5, 8):
        for k in angles:
            th = 2 * math.pi * (k + 0.35) / 16
            candidates.append(GaussQ(
                _q_round(float(cx) + mult * float(spread) * math.cos(th), 12),
                _q_round(float(cy) + mult * float(spread) * math.sin(th), 12)))

    for b in candidates:
        if _basepoint_ok(b, centers, discs, personal, obstacles):
            loops = _build_loops(b, centers, discs, personal, obstacles)
            if loops is not None:
                order = sorted(range(r), key=lambda i: _arg_key(centers[i] - b))
                ordered = [loops[i] for i in order]
                return LoopSystem(b, ordered, [discs[i] for i in order])
    raise PrecisionError("no admissible basepoint found")


def _basepoint_ok(b, centers, discs, personal, obstacles):
    r = len(centers)
    for i in range(r):
        if dist2(b, centers[i]) <= (2 * personal[i]) ** 2:
            return False
    for ob in obstacles:
        if dist2(b, ob.center) <= (2 * ob.radius + mpq(1, 64)) ** 2:
            return False
    # legs must clear all foreign discs; arguments pairwise distinct
    for i in range(r):
        for j in range(r):
            if j != i and seg_dist2(b, centers[i], centers[j]) <= personal[j] ** 2:
                return False
        for ob in obstacles:
            lim = (ob.radius + personal[i] / 4) ** 2
            if seg_dist2(b, centers[i], ob.center) <= lim:
                return False
    for i in range(r):
        for j in range(i + 1, r):
            if _cross(centers[i] - b, centers[j] - b) == 0:
                return False
    return True


def _build_loops(b, centers, discs, personal, obstacles):
    loops = []
    for i, c in enumerate(centers):
        rad = personal[i]
        d = b - c
        dn = math.sqrt(float(d.norm2()))
        th0 = math.atan2(float(d.im), float(d.re))
        verts = []
        ok = True
        for k in range(8):
            th = th0 + 2 * math.pi * k / 8
            v = GaussQ(c.re + _q_round(float(rad) * math.cos(th), 14),
                       c.im + _q_round(float(rad) * math.sin(th), 14))
            dd = dist2(v, c)
            if not ((mpq(81, 100) * rad * rad) <= dd <= (mpq(121, 100) * rad * rad)):
                ok = False
                break
            verts.append(v)
        if not ok:
            return None
        # anticlockwise orientation
        if _cross(verts[0] - c, verts[1] - c) < 0:
            verts = [verts[0]] + verts[1:][::-1]
        poly = [b] + verts + [verts[0], b]
        # clearance of every segment from every foreign disc
        for k in range(len(poly) - 1):
            for j, cj in enumerate(centers):
                if j == i:
                    continue
                if seg_dist2(poly[k], poly[k + 1], cj) <= personal[j] ** 2:
                    return None
            for ob in obstacles:
                lim = (ob.radius + min(personal[i], mpq(1, 16)) / 4) ** 2
                if seg_dist2(poly[k], poly[k + 1], ob.center) <= lim:
                    return None
        # chords must stay clear of the target disc itself
        for k in range(1, 9):
            if seg_dist2(poly[k], poly[k + 1], c) <= (discs[i].radius * 2 + rad / 4) ** 2:
                return None
        # certified enclosure: winding 1 around the target, 0 elsewhere
        if winding_number(poly, c) != 1:
            return None
        for j, cj in enumerate(centers):
            if j != i and winding_number(poly, cj) != 0:
                return None
        loops.append(Loop(poly, i, rad))
    return loops


def segment_path(a: GaussQ, b: GaussQ):
    return [a, b]
