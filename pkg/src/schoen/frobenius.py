"""Frobenius log-series solutions at regular singular points, holomorphic
power-series solutions, and the residue-based normalization of the
holomorphic form multiplier.

Solutions at a point with local coordinate s are stored as
s^rho * sum_{j, k} c[j][k] s^j log(s)^k with exact field coefficients
(mpq, or NFElem over the singularity's number field).
"""

from gmpy2 import mpq

from .exact import NumberField, UPoly, field_solve, squarefree_decomposition
from .diffop import DiffOp, pullback
from .exact import RatFunc


class LogSeries:
    """Truncated local solution s^exponent * sum c[j][k] s^j log^k(s)."""

    __slots__ = ("exponent", "coeffs", "logdim", "nterms")

    def __init__(self, exponent, coeffs, logdim, nterms):
        self.exponent = exponent
        self.coeffs = coeffs  # list over j of lists (length logdim)
        self.logdim = logdim
        self.nterms = nterms

    def log_degree(self):
        d = -1
        for row in self.coeffs:
            for k in range(self.logdim - 1, -1, -1):
                if row[k]:
                    d = max(d, k)
                    break
        return d

    def coeff(self, j, k):
        if 0 <= j < len(self.coeffs) and 0 <= k < self.logdim:
            return self.coeffs[j][k]
        return mpq(0)

    def series_at_log_power(self, k):
        """Power-series coefficients (lowest first) multiplying log^k."""
        return [row[k] if k < self.logdim else mpq(0) for row in self.coeffs]

    def derivative(self):
        """d/ds, exponent drops by one."""
        rho = self.exponent
        out = []
        for j, row in enumerate(self.coeffs):
            new = []
            for k in range(self.logdim):
                v = row[k] * (rho + j)
                if k + 1 < self.logdim and row[k + 1]:
                    v = v + row[k + 1] * (k + 1)
                new.append(v)
            out.append(new)
        return LogSeries(rho - 1, out, self.logdim, self.nterms)

    def scalar_mul(self, c):
        return LogSeries(self.exponent,
                         [[v * c for v in row] for row in self.coeffs],
                         self.logdim, self.nterms)

    def add(self, other):
        if other.exponent != self.exponent:
            raise ValueError("exponent mismatch in LogSeries.add")
        n = max(len(self.coeffs), len(other.coeffs))
        K = max(self.logdim, other.logdim)
        out = []
        for j in range(n):
            out.append([self.coeff(j, k) + other.coeff(j, k) for k in range(K)])
        return LogSeries(self.exponent, out, K, max(self.nterms, other.nterms))

    def evaluate(self, s0, log_s0, prec, tail_safety_bits=16):
        """Evaluate at a ball point with a supplied ball for log(s0).

        The truncation tail is estimated heuristically from the last
        retained terms (geometric extrapolation, inflated by
        2^tail_safety_bits); the result is NOT fully certified.
        """
        from .ball import ComplexBall, _rad_add, _q_to_rad_ub
        from .ball_const import pow_q
        n = len(self.coeffs)
        # s0^rho: rho rational, s0 a ball around a positive real
        mr, mi = s0.mid_q()
        rho = mpq(self.exponent)
        if rho == 0:
            spow = ComplexBall.one(prec)
        elif rho.denominator == 1:
            spow = s0 ** int(rho)
        else:
            if mi != 0 or mr <= 0 or not s0.is_exact():
                raise ValueError("rational-power evaluation needs exact positive real point")
            spow = pow_q(mr, rho, prec)
        logpows = [ComplexBall.one(prec)]
        for _ in range(1, self.logdim):
            logpows.append(logpows[-1] * log_s0)
        acc = ComplexBall.zero(prec)
        pw = ComplexBall.one(prec)
        s0abs = s0.abs_ub_q()
        term_mags = []
        for j in range(n):
            rowval = ComplexBall.zero(prec)
            nz = False
            for k in range(self.logdim):
                c = self.coeffs[j][k]
                if c:
                    rowval = rowval + logpows[k] * ComplexBall.from_q(mpq(c), 0, prec)
                    nz = True
            if nz:
                acc = acc + rowval * pw
                term_mags.append(rowval.abs_ub_q() * s0abs ** j)
            else:
                term_mags.append(mpq(0))
            pw = pw * s0
        # heuristic geometric tail from the trailing terms; a run of zero
        # rows at the end indicates a terminating series
        tailq = mpq(0)
        trailing = [m for m in term_mags[-6:] if m]
        if trailing:
            if s0abs >= mpq(3, 4):
                raise ValueError("evaluation point too far out for the "
                                 "heuristic series tail")
            m = max(trailing)
            tailq = m * s0abs / (1 - s0abs) * (mpq(2) ** tail_safety_bits)
        acc = acc * spow
        rm, re = _q_to_rad_ub(tailq * spow.abs_ub_q())
        rm, re = _rad_add(acc.rm, acc.re, rm, re)
        return ComplexBall(acc.ar, acc.ai, acc.ex, rm, re, prec)


class FrobeniusBasis:
    """Basis of local solutions at one point, optionally MUM-scaled."""

    __slots__ = ("point", "solutions", "scaled", "operator")

    def __init__(self, point, solutions, scaled, operator):
        self.point = point
        self.solutions = solutions
        self.scaled = scaled
        self.operator = operator


def theta_layers(L: DiffOp):
    """C_m(theta) layers with t^order L = sum_m t^m C_m(theta), m >= 0,
    normalized so that C_0 is the indicial polynomial (valuation shifted
    out). Returns (layers, valuation_shift)."""
    th = L.theta_form()
    v = None
    for b in th:
        if not b.is_zero():
            val = next(i for i, c in enumerate(b.coeffs) if c)
            v = val if v is None else min(v, val)
    maxdeg = max(b.degree for b in th)
    layers = []
    for m in range(v, maxdeg + 1):
        layers.append(UPoly([b[m] for b in th]))
    return layers, v


def _poly_matrix(q: UPoly, alpha, K):
    """Matrix of q(alpha I + N) on the log-power basis x^0..x^{K-1}, where
    N x^k = k x^{k-1}; entry (k-i, k) = q^(i)(alpha)/i! * k!/(k-i)!."""
    taylor = q.shift(alpha).coeffs  # q(alpha + h) coefficients
    zero = alpha * 0
    M = [[zero for _ in range(K)] for _ in range(K)]
    for k in range(K):
        ff = 1
        for i in range(0, k + 1):
            if i < len(taylor) and taylor[i]:
                M[k - i][k] = M[k - i][k] + taylor[i] * ff
            ff *= (k - i)
    return M


def _mat_vec(M, v):
    K = len(v)
    out = []
    for r in range(K):
        acc = v[0] * 0
        for c in range(K):
            if M[r][c] and v[c]:
                acc = acc + M[r][c] * v[c]
        out.append(acc)
    return out


def _integer_roots_with_mult(chi: UPoly, bound=400):
    """Integer roots of an indicial polynomial over mpq or a number field."""
    roots = []
    mult = {}
    # deflate by repeated division at integer roots found by scanning
    work = chi
    for k in range(-bound, bound + 1):
        m = 0
        while True:
            if work.degree < 1:
                break
            val = work(_embed_like(chi, k))
            if val:
                break
            lin = UPoly([-_embed_like(chi, k), _one_of(chi)])
            work = work.exact_div(lin)
            m += 1
        if m:
            mult[k] = m
            roots.extend([k] * m)
    return sorted(mult.items())


def _one_of(p: UPoly):
    c = p.leading()
    if hasattr(c, "one_like"):
        return c.one_like()
    return mpq(1)


def _embed_like(p: UPoly, k):
    c = p.leading()
    if hasattr(c, "one_like"):
        return c.one_like() * k
    return mpq(k)


def frobenius_solutions_integer_coset(L: DiffOp, nterms):
    """Log-series solutions of L at 0 whose exponents are integers.

    Works over whatever coefficient field L carries. Returns a list of
    LogSeries based at the smallest integer exponent."""
    layers, _ = theta_layers(L)
    chi = layers[0]
    if chi.degree != L.order:
        raise ValueError("irregular singular point")
    int_roots = _integer_roots_with_mult(chi)
    if not int_roots:
        return []
    K = sum(m for _, m in int_roots)
    rho0 = int_roots[0][0]
    sing_offsets = {r - rho0: m for r, m in int_roots}
    return _coset_solutions(layers, rho0, sing_offsets, K, nterms)


def _coset_solutions(layers, rho0, sing_offsets, K, nterms):
    """Run the Frobenius recurrence for one exponent coset.

    layers: C_m(theta) polynomials; rho0: base exponent; sing_offsets:
    offset -> multiplicity of indicial roots in the coset; K: log budget.
    """
    chi = layers[0]
    sols = []  # each: list over j of coefficient vectors (length K)
    for j in range(nterms):
        alpha = _embed_like(chi, rho0 + j)
        Mj = _poly_matrix(chi, alpha, K)
        # right-hand sides for existing solutions
        for sol in sols:
            rhs = [chi.leading() * 0] * K
            for m in range(1, min(j + 1, len(layers))):
                if layers[m].is_zero():
                    continue
                cm = sol[j - m]
                if any(cm):
                    beta = alpha - m
                    Mm = _poly_matrix(layers[m], beta, K)
                    mv = _mat_vec(Mm, cm)
                    rhs = [a + b for a, b in zip(rhs, mv)]
            rhs = [-x for x in rhs]
            cj = field_solve([list(r) for r in Mj], rhs)
            if cj is None:
                raise RuntimeError("inconsistent Frobenius recurrence")
            sol.append(cj)
        # spawn new solutions at singular offsets: kernel of Mj is spanned
        # by x^0..x^{mu-1}
        if j in sing_offsets:
            mu = sing_offsets[j]
            for knew in range(mu):
                seed = [chi.leading() * 0] * K
                seed[knew] = _one_of(chi)
                sol = [[chi.leading() * 0] * K for _ in range(j)]
                sol.append(seed)
                sols.append(sol)
    out = []
    for sol in sols:
        out.append(LogSeries(rho0, sol, K, nterms))
    return out


def frobenius_basis(L: DiffOp, point, nterms, scaled=False):
    """Frobenius basis at a rational point (or None for infinity).

    In scaled mode (MUM point required) the j-th returned series S_j
    represents (2 pi i)^j varpi_j, i.e. sum_k binom(j,k) f_k log^{j-k}."""
    Lloc = L if point == 0 else (L.inverted() if point is None else L.shifted(mpq(point)))
    layers, _ = theta_layers(Lloc)
    chi = layers[0]
    if chi.degree != Lloc.order:
        raise ValueError("irregular singular point")
    r = Lloc.order
    if scaled:
        # MUM: indicial polynomial must be c * theta^r
        if any(chi[i] for i in range(r)):
            raise ValueError("scaled basis requested at a non-MUM point")
        sols = _coset_solutions(layers, 0, {0: r}, r, nterms)
        return FrobeniusBasis(point, sols, True, L)
    # all rational-exponent cosets
    from .roots import _rational_roots
    sols = []
    seen = []
    rational = []
    for fac, mult in squarefree_decomposition(chi):
        roots, rest = _rational_roots(fac)
        for rr in roots:
            rational.extend([rr] * mult)
        if rest.degree >= 1:
            raise ValueError("non-rational exponents; integer-coset API required")
    for rho in sorted(set(rational)):
        coset_key = mpq(rho.numerator % rho.denominator, rho.denominator)
        if any(coset_key == c for c in seen):
            continue
        seen.append(coset_key)
        coset = sorted(rr for rr in set(rational) if (rr - rho).denominator == 1)
        K = sum(rational.count(rr) for rr in coset)
        rho0 = coset[0]
        offsets = {int(rr - rho0): rational.count(rr) for rr in coset}
        sols.extend(_coset_solutions(layers, rho0, offsets, K, nterms))
    return FrobeniusBasis(point, sols, False, L)


def scaled_frobenius_f_series(L: DiffOp, nterms):
    """The rational series f_0..f_{r-1} of the scaled Frobenius basis at a
    MUM point at 0: (2 pi i)^j varpi_j = sum_k binom(j,k) f_k log^{j-k}."""
    fb = frobenius_basis(L, 0, nterms, scaled=True)
    r = L.order
    top = fb.solutions[r - 1]
    from math import comb
    fs = []
    for k in range(r):
        # f_k multiplies log^{r-1-k} in S_{r-1} with binomial weight
        m = r - 1 - k
        series = [row[m] / comb(r - 1, m) for row in top.coeffs]
        fs.append(series)
    return fs


def holomorphic_series(L: DiffOp, nterms):
    """Power-series solution with constant term 1 at t = 0, which must be
    an exponent-0 point with no other nonnegative-integer exponent issues
    (chi(k) != 0 for k >= 1)."""
    layers, _ = theta_layers(L)
    chi = layers[0]
    if chi(mpq(0)) != 0:
        raise ValueError("0 is not an indicial root")
    out = [mpq(1)]
    for j in range(1, nterms):
        cj = chi(mpq(j))
        if not cj:
            raise ValueError("exponent collision at offset %d" % j)
        acc = mpq(0)
        for m in range(1, min(j + 1, len(layers))):
            lm = layers[m]
            if not lm.is_zero():
                acc += lm(mpq(j - m)) * out[j - m]
        out.append(-acc / cj)
    return out


def compose_with_function(L: DiffOp, h: RatFunc) -> DiffOp:
    """Operator L o h (acting by g -> L(h g)), via Leibniz."""
    from math import comb
    r = L.order
    hders = [h]
    for _ in range(r):
        hders.append(hders[-1].derivative())
    new = [RatFunc(0) for _ in range(r + 1)]
    for i, p in enumerate(L.coeffs):
        if p.is_zero():
            continue
        rp = RatFunc(p)
        for k in range(i + 1):
            new[k] = new[k] + rp * comb(i, k) * hders[i - k]
    # clear denominators
    from .exact import poly_lcm
    lcm = UPoly([mpq(1)])
    for c in new:
        lcm = poly_lcm(lcm, c.den)
    return DiffOp([c.num * lcm.exact_div(c.den) for c in new])


def _occupied_positions(L: DiffOp, shift_point, nf_minpoly=None, nterms=80):
    """Set of integer positions p where some integer-exponent local
    solution of L at the point has a nonzero coefficient on s^p log^k."""
    if nf_minpoly is not None:
        field = NumberField(nf_minpoly)
        alpha = field.gen()
        Lloc = DiffOp([c.shift(alpha) for c in L.coeffs], normalize=False)
    elif shift_point is None:
        Lloc = L.inverted()
    elif shift_point == 0:
        Lloc = L
    else:
        Lloc = L.shifted(mpq(shift_point))
    sols = frobenius_solutions_integer_coset(Lloc, nterms)
    occ = set()
    for s in sols:
        base = int(s.exponent)
        for j, row in enumerate(s.coeffs):
            if any(row):
                occ.add(base + j)
    return occ


def normalize_holomorphic(L: DiffOp) -> RatFunc:
    """Rational multiplier f(t) such that f * (solutions of L) have no
    residue at any finite singularity nor at infinity, with minimal
    correction exponents. All finite singularities must be regular."""
    lead = L.leading()
    points = []  # (kind, data): ('q0',) for t=0; ('rat', a); ('nf', minpoly)
    has_zero = False
    for fac, _ in squarefree_decomposition(lead):
        from .roots import _rational_roots
        roots, rest = _rational_roots(fac)
        for a in roots:
            if a == 0:
                has_zero = True
            else:
                points.append(("rat", a))
        if rest.degree >= 1:
            points.append(("nf", rest.monic()))
    f = RatFunc(1)
    t_poly = UPoly.x()

    def current_op():
        return L if f == RatFunc(1) else compose_with_function(L, RatFunc(1) / f)

    # settle finite nonzero singularities
    for _ in range(60):
        Lf = current_op()
        changed = False
        for kind, data in points:
            if kind == "rat":
                occ = _occupied_positions(Lf, data)
            else:
                occ = _occupied_positions(Lf, None, nf_minpoly=data)
            if -1 in occ:
                delta = _minimal_shift(occ, -1)
                base = UPoly([-data, mpq(1)]) if kind == "rat" else data
                f = f * _ratfunc_power(base, delta)
                changed = True
                break
        if not changed:
            break
    else:
        raise ValueError("holomorphic normalization did not stabilize")
    # settle t = 0 and infinity jointly through the power of t
    Lf = current_op()
    occ0 = _occupied_positions(Lf, 0)
    occ_inf = _occupied_positions(Lf, None)
    e = None
    for cand in _by_abs(40):
        ok0 = (-1 - cand) not in occ0
        # multiplying by t^cand shifts the infinity-side expansion of f*s
        # down by cand; the residue there sits at position +1
        okinf = (1 + cand) not in occ_inf
        if ok0 and okinf:
            e = cand
            break
    if e is None:
        raise ValueError("no t-power fixes residues at 0 and infinity; "
                         "positions at 0: %r, at infinity: %r"
                         % (sorted(occ0)[:10], sorted(occ_inf)[:10]))
    if e:
        f = f * _ratfunc_power(t_poly, e)
    # final verification: all residues vanish for f as built
    Lf = compose_with_function(L, RatFunc(1) / f) if f != RatFunc(1) else L
    bad = []
    for kind, data in points:
        occ = _occupied_positions(Lf, data if kind == "rat" else None,
                                  nf_minpoly=None if kind == "rat" else data)
        if -1 in occ:
            bad.append((kind, data))
    if -1 in _occupied_positions(Lf, 0):
        bad.append(("rat", 0))
    if 1 in _occupied_positions(Lf, None):
        bad.append(("inf", None))
    if bad:
        raise ValueError("residues persist after normalization at %r" % (bad,))
    return f


def _minimal_shift(occ, target):
    """Smallest |d| with target - d not in occ (prefer nonnegative d)."""
    for d in _by_abs(40):
        if (target - d) not in occ:
            return d
    raise ValueError("no admissible exponent shift found; occupied=%r" % (sorted(occ)[:10],))


def _by_abs(bound):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def _ratfunc_power(p: UPoly, e: int) -> RatFunc:
    if e >= 0:
        return RatFunc(p ** e)
    return RatFunc(UPoly([mpq(1)]), p ** (-e))
