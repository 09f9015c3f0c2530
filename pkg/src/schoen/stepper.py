"""Certified analytic continuation of scalar operators and small
first-order systems along polygonal paths with rational vertices.

Validated Taylor method: at each step the local series recurrence is run
in ball arithmetic and the truncation tail is bounded rigorously by a
Cauchy majorant derived from coefficient bounds of the companion system on
the step disc. Transition matrices map solution jets
(y, y', ..., y^(r-1)) at the segment start to the segment end.
"""

import math

from gmpy2 import mpq

from .ball import BallMatrix, ComplexBall, PrecisionError, _rad_add, _q_to_rad_ub
from .diffop import DiffOp
from .exact import GaussQ, UPoly
from .roots import isolate_roots, _sqrt_lb, _sqrt_ub

_pole_cache = {}

# step length and majorant disc as fractions of the clearance radius
_STEP_NUM, _STEP_DEN = 3, 10
_RHO_NUM, _RHO_DEN = 4, 5


class TransitionResult:
    __slots__ = ("matrix", "path", "precision", "certified")

    def __init__(self, matrix, path, precision, certified=True):
        self.matrix = matrix
        self.path = path
        self.precision = precision
        self.certified = certified


def pole_discs(L: DiffOp, precision_bits=64):
    key = (L, precision_bits)
    if key not in _pole_cache:
        lead = L.leading()
        _pole_cache[key] = isolate_roots(lead, precision_bits) if lead.degree >= 1 else []
    return _pole_cache[key]


def _clearance(z: GaussQ, discs):
    """Rational lower bound of the distance from z to the pole discs."""
    best = None
    for d in discs:
        dist = _sqrt_lb((z - d.center).norm2()) - d.radius
        if best is None or dist < best:
            best = dist
    return best


def _abs_ub_gauss(g: GaussQ):
    return _sqrt_ub(g.norm2())


def _sup_poly(p: UPoly, rho):
    """Upper bound of |p| on |tau| <= rho for GaussQ/mpq coefficients."""
    acc = mpq(0)
    pw = mpq(1)
    for c in p.coeffs:
        cc = _abs_ub_gauss(c) if isinstance(c, GaussQ) else abs(mpq(c))
        acc += cc * pw
        pw *= rho
    return acc


def _inf_leading(L: DiffOp, z: GaussQ, rho, discs):
    """Lower bound of |p_r(z + tau)| on |tau| <= rho via the root discs."""
    lead = L.leading()
    lc = abs(mpq(lead.leading())) if not isinstance(lead.leading(), GaussQ) \
        else _sqrt_lb(lead.leading().norm2())
    acc = mpq(lc)
    for d in discs:
        gap = _sqrt_lb((z - d.center).norm2()) - d.radius - rho
        if gap <= 0:
            return mpq(0)
        acc *= gap ** d.multiplicity
    return acc


def _log2_ub(q):
    """Upper bound of log2 of a positive mpq."""
    f = float(q)
    if f > 0 and f < float("inf"):
        return math.log2(f) + 1e-9
    return (q.numerator.bit_length() - q.denominator.bit_length()) + 1


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def step_matrix(L: DiffOp, z: GaussQ, h: GaussQ, tail_bits, discs, work=None):
    """Transition jets(z) -> jets(z+h), certified, h within the validated
    step size for the clearance at z.

    The series is truncated so the rigorous tail is below 2^-tail_bits;
    ball arithmetic runs at `work` bits (the recurrence loses relative
    precision at the majorant rate, so callers escalate `work` while
    keeping tail_bits fixed)."""
    r = L.order
    R = _clearance(z, discs)
    habs = _sqrt_ub(h.norm2())
    if R is not None and habs * 5 > R * 2:
        raise PrecisionError("step exceeds validated length")
    # majorant disc: a fixed multiple of the step, capped by the clearance
    rho = habs * mpq(8, 3)
    if R is not None and rho > R * _RHO_NUM / _RHO_DEN:
        rho = R * _RHO_NUM / _RHO_DEN
    # majorant: infinity norm of the companion matrix on the rho-disc
    Ls = L.shifted(z)
    inf_pr = _inf_leading(L, z, rho, discs)
    if inf_pr <= 0:
        raise PrecisionError("leading coefficient bound failed")
    sup_sum = mpq(0)
    for i in range(r):
        sup_sum += _sup_poly(Ls.coeffs[i], rho)
    alpha = 1 + sup_sum / inf_pr
    m_log2 = float(alpha * rho) * 1.4427 + 1.0
    if m_log2 != m_log2 or m_log2 > 1e7:
        raise PrecisionError("majorant bound overflow")
    x = habs / rho
    inv_log = 1.0 / (-_log2_ub(x)) if x < 1 else None
    if inv_log is None or inv_log <= 0:
        raise PrecisionError("step ratio not contracting")
    K = int((tail_bits + 16 + m_log2 + 4 * r) * inv_log) + r + 8
    prec = work if work is not None else tail_bits + 64
    layers = _ball_layers(Ls, prec)
    hball = ComplexBall.from_q(h.re, h.im, prec)
    cols = []
    for b in range(r):
        seeds = [ComplexBall.zero(prec) for _ in range(r)]
        seeds[b] = ComplexBall.from_q(mpq(1, _fact(b)), 0, prec)
        coeffs = _run_recurrence(layers, seeds, K, prec)
        cols.append(_evaluate_jets(coeffs, hball, r, prec))
    # rigorous truncation tails
    xq = habs / rho
    mq = mpq(2) ** int(m_log2 + 2)
    tails = []
    for j in range(r):
        xstar = xq * mpq(K + 2, K + 2 - j)
        if xstar >= 1:
            raise PrecisionError("tail ratio not contracting")
        t = mq * _fact(j) * _binom(K + 1, j) * xq ** (K + 1) / (1 - xstar)
        if j:
            t = t / (habs ** j) if habs > 0 else t
        tails.append(t)
    entries = []
    for j in range(r):
        rm, re = _q_to_rad_ub(tails[j])
        row = []
        for b in range(r):
            e = cols[b][j]
            nm, ne = _rad_add(e.rm, e.re, rm, re)
            row.append(ComplexBall(e.ar, e.ai, e.ex, nm, ne, prec))
        entries.append(row)
    return BallMatrix(entries)


def _ball_layers(Lshifted: DiffOp, prec):
    """Theta-form layers of the shifted operator as ball-coefficient
    polynomials (lists of ComplexBall, lowest theta power first)."""
    th = Lshifted.theta_form()
    v = None
    for bpoly in th:
        if not bpoly.is_zero():
            val = next(i for i, c in enumerate(bpoly.coeffs) if c)
            v = val if v is None else min(v, val)
    maxdeg = max(bpoly.degree for bpoly in th)
    layers = []
    for m in range(v, maxdeg + 1):
        coeffs = []
        for bpoly in th:
            c = bpoly[m]
            if isinstance(c, GaussQ):
                coeffs.append(ComplexBall.from_q(c.re, c.im, prec))
            else:
                coeffs.append(ComplexBall.from_q(mpq(c), 0, prec))
        layers.append(coeffs)
    return layers


def _eval_layer(layer, n, prec):
    acc = layer[-1]
    for c in reversed(layer[:-1]):
        acc = acc * n + c
    return acc


def _run_recurrence(layers, seeds, K, prec):
    """Ball coefficients c_0..c_K of the solution with the given seed
    coefficients (c_i = y^(i)(0)/i! for i < r)."""
    r = len(seeds)
    W = len(layers)
    chi = layers[0]
    coeffs = list(seeds)
    zero = ComplexBall.zero(prec)
    for n in range(r, K + 1):
        acc = None
        for m in range(1, min(n, W - 1) + 1):
            c = coeffs[n - m]
            if c.ar == 0 and c.ai == 0 and c.rm == 0:
                continue
            val = _eval_layer(layers[m], n - m, prec)
            term = val * c
            acc = term if acc is None else acc + term
        if acc is None:
            coeffs.append(zero)
            continue
        den = _eval_layer(chi, n, prec)
        coeffs.append(-(acc * den.inverse()))
    return coeffs


def _evaluate_jets(coeffs, hball, r, prec):
    """y^(j)(h) for j < r from ball Taylor coefficients at the origin."""
    K = len(coeffs) - 1
    out = []
    for j in range(r):
        acc = ComplexBall.zero(prec)
        # Horner over k from K down to j on coefficients ff(k, j) c_k
        ff = _fact(K) // _fact(K - j) if K >= j else 0
        acc = coeffs[K] * ff if K >= j else acc
        for k in range(K - 1, j - 1, -1):
            ffk = _fact(k) // _fact(k - j)
            acc = acc * hball + coeffs[k] * ffk
        out.append(acc)
    return out


def transition_operator(L: DiffOp, path, prec, max_escalations=6,
                        discs=None, cache=None):
    """Certified transition matrix of L along a polyline of GaussQ points.

    The working precision is escalated (informed by the achieved radius)
    until the result radius is below 2^(-prec/2); the truncation orders
    stay tied to the target precision."""
    if discs is None:
        discs = pole_discs(L)
    key = None
    if cache is not None:
        key = cache.key_for(L, path, prec)
        hit = cache.load(key, prec)
        if hit is not None:
            return TransitionResult(hit, path, prec)
    tail_bits = prec + 48
    work = prec + 128
    target = mpq(2) ** (-(prec // 2))
    for attempt in range(max_escalations + 1):
        try:
            T = _transition_once(L, path, tail_bits, work, discs)
        except PrecisionError:
            work *= 2
            continue
        rad = T.max_radius()
        if rad <= target:
            out = TransitionResult(T, path, prec)
            if cache is not None:
                cache.store(key, T, prec)
            return out
        # informed escalation: add the observed deficit plus margin
        deficit = _log2_ub(rad / target)
        if deficit != deficit or deficit < 0 or deficit > 1e7:
            work *= 2
        else:
            work = int(work + deficit + 96)
    raise PrecisionError("transition radius did not reach target")


def _transition_once(L, path, tail_bits, work, discs):
    r = L.order
    T = BallMatrix.identity(r, work)
    for a, b in zip(path, path[1:]):
        if a == b:
            continue
        T = _segment_transition(L, a, b, tail_bits, work, discs) * T
    return T


def _segment_transition(L, a, b, tail_bits, work, discs):
    r = L.order
    T = BallMatrix.identity(r, work)
    cur = a
    guard = 0
    while cur != b:
        guard += 1
        if guard > 4000:
            raise PrecisionError("segment subdivision did not terminate")
        R = _clearance(cur, discs)
        if R is None:
            R = _sqrt_ub((b - cur).norm2()) + 1
        if R <= 0:
            raise PrecisionError("path clearance violated")
        seg = b - cur
        seglen = _sqrt_ub(seg.norm2())
        maxstep = R * _STEP_NUM / _STEP_DEN
        if seglen <= maxstep:
            nxt = b
        else:
            t = maxstep / seglen
            tq = mpq(int(t * (1 << 16)), 1 << 16)
            if tq <= 0:
                raise PrecisionError("step underflow against clearance")
            nxt = GaussQ(cur.re + tq * seg.re, cur.im + tq * seg.im)
        h = nxt - cur
        T = step_matrix(L, cur, h, tail_bits, discs, work=work) * T
        cur = nxt
    return T


def monodromy_operator(L: DiffOp, loop_system, prec, cache=None):
    """Transition matrices along each loop of the system, base-pointed at
    the loop system's basepoint."""
    out = []
    discs = pole_discs(L)
    for loop in loop_system.loops:
        res = transition_operator(L, loop.polyline, prec, discs=discs, cache=cache)
        out.append(res.matrix)
    return out
