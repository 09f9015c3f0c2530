"""Monodromy representations and matching of continued solutions to local
Frobenius bases at regular singular points."""

from gmpy2 import mpq

from .ball import BallMatrix, ComplexBall, PrecisionError, _rad_add, _q_to_rad_ub
from .ball_const import log_q
from .diffop import DiffOp
from .exact import GaussQ, RatFunc, UPoly
from .frobenius import frobenius_basis
from .paths import LoopSystem, plan_loops
from .roots import Disc, _sqrt_lb
from .stepper import (TransitionResult, pole_discs, step_matrix,
                      transition_operator)


class ODESystem:
    """First-order system Y' = A(t) Y; when built from a scalar operator
    the fast scalar engine is used for continuation."""

    __slots__ = ("dimension", "A", "operator", "_discs")

    def __init__(self, A, operator=None):
        self.A = A
        self.dimension = len(A)
        self.operator = operator
        self._discs = None

    @staticmethod
    def from_operator(L: DiffOp):
        from .diffop import companion_system
        return ODESystem(companion_system(L), operator=L)

    def poles(self, precision_bits=64):
        if self._discs is None:
            if self.operator is not None:
                self._discs = pole_discs(self.operator, precision_bits)
            else:
                den = UPoly([mpq(1)])
                from .exact import poly_lcm
                for row in self.A:
                    for e in row:
                        den = poly_lcm(den, e.den)
                from .roots import isolate_roots
                self._discs = isolate_roots(den, precision_bits) if den.degree >= 1 else []
        return self._discs


def transition(system, path, precision_bits, cache=None):
    """Certified transition matrix of a system or scalar operator along a
    polyline of GaussQ vertices."""
    if isinstance(system, DiffOp):
        return transition_operator(system, path, precision_bits, cache=cache)
    if isinstance(system, ODESystem) and system.operator is not None:
        return transition_operator(system.operator, path, precision_bits, cache=cache)
    return _transition_matrix_system(system, path, precision_bits)


def _transition_matrix_system(system, path, prec, max_escalations=6):
    discs = system.poles()
    tail_bits = prec + 48
    work = prec + 128
    for _ in range(max_escalations + 1):
        try:
            T = _system_once(system, path, tail_bits, work, discs)
        except PrecisionError:
            work *= 2
            continue
        if T.max_radius() <= mpq(2) ** (-(prec // 2)):
            return TransitionResult(T, path, prec)
        work *= 2
    raise PrecisionError("system transition did not converge")


def _system_once(system, path, tail_bits, work, discs):
    from .stepper import _clearance, _sqrt_ub
    n = system.dimension
    T = BallMatrix.identity(n, work)
    for a, b in zip(path, path[1:]):
        cur = a
        guard = 0
        while cur != b:
            guard += 1
            if guard > 4000:
                raise PrecisionError("segment subdivision did not terminate")
            R = _clearance(cur, discs)
            seg = b - cur
            seglen = _sqrt_ub(seg.norm2())
            maxstep = seglen if R is None else R * mpq(3, 10)
            if seglen <= maxstep:
                nxt = b
            else:
                tq = mpq(int(maxstep / seglen * (1 << 16)), 1 << 16)
                if tq <= 0:
                    raise PrecisionError("step underflow")
                nxt = GaussQ(cur.re + tq * seg.re, cur.im + tq * seg.im)
            T = _system_step(system, cur, nxt - cur, tail_bits, discs, work) * T
            cur = nxt
    return T


def _system_step(system, z, h, tail_bits, discs, work):
    prec = work
    """One validated Taylor step for a general system, denominators
    cleared: d(t) Y' = N(t) Y."""
    from .exact import poly_lcm
    from .stepper import (_inf_leading, _sup_poly, _log2_ub, _fact)
    from .roots import _sqrt_ub
    n = system.dimension
    den = UPoly([mpq(1)])
    for row in system.A:
        for e in row:
            den = poly_lcm(den, e.den)
    N = [[e.num * den.exact_div(e.den) for e in row] for row in system.A]
    dsh = den.shift(z) if z != GaussQ(0, 0) else den
    Nsh = [[p.shift(z) for p in row] for row in N]
    habs = _sqrt_ub(h.norm2())
    rho = habs * mpq(8, 3)
    from .stepper import _clearance
    R = _clearance(z, discs)
    if R is not None:
        if habs * 5 > R * 2:
            raise PrecisionError("step exceeds validated length")
        cap = R * mpq(4, 5)
        if rho > cap:
            rho = cap
    # majorant
    infd = _den_inf(dsh, z, rho, discs, den)
    if infd <= 0:
        raise PrecisionError("denominator bound failed")
    alpha = mpq(0)
    for row in Nsh:
        s = mpq(0)
        for p in row:
            s += _sup_poly(p, rho)
        if s > alpha:
            alpha = s
    alpha = alpha / infd + 1
    m_log2 = float(alpha * rho) * 1.4427 + 1.0
    x = habs / rho
    K = int((tail_bits + 16 + m_log2 + 8) / (-_log2_ub(x))) + 8
    db = [_ball_of(c, prec) for c in dsh.coeffs]
    Nb = [[[_ball_of(c, prec) for c in p.coeffs] for p in row] for row in Nsh]
    hball = ComplexBall.from_q(h.re, h.im, prec)
    cols = []
    for b0 in range(n):
        C = [[ComplexBall.zero(prec) for _ in range(n)]]
        C[0][b0] = ComplexBall.one(prec)
        inv_d0 = db[0].inverse()
        for k in range(K):
            vec = [ComplexBall.zero(prec) for _ in range(n)]
            for i in range(n):
                acc = None
                for jj in range(n):
                    row_poly = Nb[i][jj]
                    for dgr, cf in enumerate(row_poly):
                        if k - dgr >= 0:
                            src = C[k - dgr][jj]
                            if src.ar == 0 and src.ai == 0 and src.rm == 0:
                                continue
                            term = cf * src
                            acc = term if acc is None else acc + term
                for dgr in range(1, len(db)):
                    if k + 1 - dgr >= 0 and k + 1 - dgr <= k:
                        src = C[k + 1 - dgr][i]
                        if src.ar == 0 and src.ai == 0 and src.rm == 0:
                            continue
                        term = db[dgr] * src * (k + 1 - dgr)
                        acc = (acc - term) if acc is not None else -term
                if acc is None:
                    vec[i] = ComplexBall.zero(prec)
                else:
                    vec[i] = acc * inv_d0 * ComplexBall.from_q(mpq(1, k + 1), 0, prec)
            C.append(vec)
        # evaluate at h with tail
        xq = habs / rho
        mq = mpq(2) ** int(m_log2 + 2)
        tail = mq * xq ** (K + 1) / (1 - xq)
        rm, re = _q_to_rad_ub(tail)
        col = []
        for i in range(n):
            acc = C[K][i]
            for k in range(K - 1, -1, -1):
                acc = acc * hball + C[k][i]
            nm, ne = _rad_add(acc.rm, acc.re, rm, re)
            col.append(ComplexBall(acc.ar, acc.ai, acc.ex, nm, ne, prec))
        cols.append(col)
    return BallMatrix([[cols[b0][i] for b0 in range(n)] for i in range(n)])


def _ball_of(c, prec):
    if isinstance(c, GaussQ):
        return ComplexBall.from_q(c.re, c.im, prec)
    return ComplexBall.from_q(mpq(c), 0, prec)


def _den_inf(dsh, z, rho, discs, den_orig):
    """Lower bound of |den(z+tau)| on the rho-disc via root discs."""
    if den_orig.degree < 1:
        return abs(mpq(den_orig[0]))
    from .roots import isolate_roots
    rdiscs = isolate_roots(den_orig)
    lc = abs(mpq(den_orig.leading()))
    acc = mpq(lc)
    for d in rdiscs:
        gap = _sqrt_lb((z - d.center).norm2()) - d.radius - rho
        if gap <= 0:
            return mpq(0)
        acc *= gap ** d.multiplicity
    return acc


def monodromy(system, loop_system: LoopSystem, precision_bits, cache=None):
    """One transition per loop, base-pointed at the system basepoint."""
    out = []
    for loop in loop_system.loops:
        res = transition(system, loop.polyline, precision_bits, cache=cache)
        out.append(res.matrix)
    return out


def ordered_product(mats):
    """Product M_r ... M_1 for loops listed first-to-last."""
    out = None
    for m in mats:
        out = m if out is None else m * out
    return out


def product_contains_identity(mats):
    P = ordered_product(mats)
    n = P.rows
    for i in range(n):
        for j in range(n):
            if not P[(i, j)].contains_q(1 if i == j else 0):
                return False
    return True


class FrobeniusMatch:
    __slots__ = ("matrix", "certified", "eval_point", "nterms")

    def __init__(self, matrix, certified, eval_point, nterms):
        self.matrix = matrix
        self.certified = certified
        self.eval_point = eval_point
        self.nterms = nterms


def match_frobenius(L: DiffOp, singular_point, base_point, precision_bits,
                    scaled=False, nterms=None, eval_point=None, cache=None):
    """Change of basis from jets at base_point to the Frobenius basis at
    singular_point: returns C with (coordinates in Frobenius basis) =
    C . (jet vector at base_point).

    The evaluation point is taken on the straight segment toward the
    singularity at distance <= (nearest other singularity)/4; series tails
    are heuristic (last-term ratio, safety 2^16), so certified is False.
    """
    r = L.order
    prec = precision_bits
    sp = mpq(singular_point)
    bp = mpq(base_point)
    if eval_point is None:
        discs, _ = L.singular_points()
        nearest = None
        for d in discs:
            if d.center == GaussQ(sp, 0) and d.radius == 0:
                continue
            gap = _sqrt_lb((d.center - GaussQ(sp, 0)).norm2()) - d.radius
            if gap > 0 and (nearest is None or gap < nearest):
                nearest = gap
        if nearest is None:
            nearest = abs(bp - sp) * 4
        direction = bp - sp
        scalelim = nearest / (4 * abs(direction))
        s = min(mpq(1, 4), scalelim)
        # snap to a simple rational
        s = mpq(int(s * 4096), 4096)
        if s <= 0:
            raise PrecisionError("no admissible evaluation point")
        eval_point = sp + s * direction
    if nterms is None:
        # series gains ~ -log2(eval distance / nearest) bits per term
        nterms = max(200, 4 * prec)
    res = transition_operator(L, [GaussQ(bp, 0), GaussQ(eval_point, 0)],
                              prec, cache=cache)
    fb = frobenius_basis(L, sp, nterms, scaled=scaled)
    C1 = _match_at(fb, L, sp, eval_point, res.matrix, prec)
    fb2 = frobenius_basis(L, sp, nterms + nterms // 2, scaled=scaled)
    C2 = _match_at(fb2, L, sp, eval_point, res.matrix, prec)
    # self-consistency: doubled truncation must agree within radii
    for i in range(r):
        for j in range(r):
            if not C1[(i, j)].overlaps(C2[(i, j)]):
                raise PrecisionError("Frobenius tail estimate unstable")
    merged = BallMatrix([[C1[(i, j)].union(C2[(i, j)]) for j in range(r)]
                         for i in range(r)])
    return FrobeniusMatch(merged, False, eval_point, nterms)


def _match_at(fb, L, sp, eval_point, T, prec):
    r = L.order
    s_loc = eval_point - sp
    if s_loc <= 0:
        raise PrecisionError("evaluation point must approach from the "
                             "positive real direction")
    sball = ComplexBall.from_q(s_loc, 0, prec)
    logball = log_q(s_loc, prec)
    phi = []
    for sol in fb.solutions:
        ders = [sol]
        for _ in range(r - 1):
            ders.append(ders[-1].derivative())
        phi.append([d.evaluate(sball, logball, prec) for d in ders])
    # jets at eval of the continued basis solutions are the columns of T;
    # solve Phi^T a = jet for each column
    phiT = BallMatrix(phi).transpose()
    return phiT.solve(T)
