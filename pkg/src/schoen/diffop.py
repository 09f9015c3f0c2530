"""Linear differential operators over Q(t): singular point analysis,
closure operations (symmetric product, pullback, antiderivative) and
companion systems.

A DiffOp stores the coefficient polynomials of d/dt powers, denominators
cleared and integer content removed. The theta form (theta = t d/dt) is
derived on demand for indicial computations.
"""

from gmpy2 import mpq, mpz

from .exact import (RatFunc, UPoly, gcd_int, poly_gcd, poly_lcm, qq)
from .roots import isolate_roots


class DiffOp:
    """Sum_i coeffs[i] * d^i, coeffs[i] in Z[t], primitive as a whole."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, normalize=True):
        cs = [c if isinstance(c, UPoly) else UPoly.const(qq(c)) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise ValueError("zero operator")
        if normalize:
            cs = _clear(cs)
        self.coeffs = tuple(cs)

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def degree(self):
        return max(c.degree for c in self.coeffs)

    def leading(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "DiffOp(order %d, degree %d)" % (self.order, self.degree)

    # ---- construction helpers ------------------------------------------

    @staticmethod
    def from_theta(theta_coeffs):
        """Operator Sum_k q_k(t) theta^k rewritten in d/dt powers."""
        cs = [c if isinstance(c, UPoly) else UPoly.const(qq(c)) for c in theta_coeffs]
        t = UPoly.x()
        cur = [UPoly([mpq(1)])]  # theta^0 on the d^j basis
        acc = [cs[0]]
        for k in range(1, len(cs)):
            # theta o (a_j d^j) = t a_j' d^j + t a_j d^{j+1}
            nxt = [UPoly() for _ in range(len(cur) + 1)]
            for j, aj in enumerate(cur):
                if not aj.is_zero():
                    nxt[j] = nxt[j] + t * aj.derivative()
                    nxt[j + 1] = nxt[j + 1] + t * aj
            cur = nxt
            if not cs[k].is_zero():
                acc = _op_add(acc, [cs[k] * c for c in cur])
        return DiffOp(acc)

    def theta_form(self):
        """Coefficients b_k(t) with t^order * self = Sum_k b_k(t) theta^k."""
        r = self.order
        # t^r p_i(t) d^i = p_i t^{r-i} (t^i d^i) and
        # t^i d^i = theta (theta - 1) ... (theta - i + 1)
        out = [UPoly() for _ in range(r + 1)]
        for i, p in enumerate(self.coeffs):
            if p.is_zero():
                continue
            ff = [mpq(1)]  # falling factorial theta^(i) as theta-poly
            for m in range(i):
                # multiply by (theta - m)
                ff = [mpq(0)] + ff
                for j in range(len(ff) - 1):
                    ff[j] -= m * ff[j + 1]
            pt = p * UPoly.x(r - i, 1) if r > i else p
            for k, c in enumerate(ff):
                if c:
                    out[k] = out[k] + pt * c
        return out

    # ---- application ----------------------------------------------------

    def apply_ratfunc(self, f: RatFunc) -> RatFunc:
        acc = RatFunc(0)
        d = f
        for c in self.coeffs:
            if not c.is_zero():
                acc = acc + RatFunc(c) * d
            d = d.derivative()
        return acc

    def apply_series(self, series, nterms):
        """Apply to a truncated power series (list of field coefficients at
        t = 0, lowest first); result truncated where fully determined."""
        r = self.order
        out_len = max(0, nterms - r)
        out = [series[0] * 0 for _ in range(nterms)]
        d = list(series)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                for j in range(min(c.degree + 1, nterms)):
                    cj = c[j]
                    if cj:
                        for k in range(nterms - j):
                            if d[k]:
                                out[k + j] = out[k + j] + cj * d[k]
            # differentiate the series
            d = [d[k + 1] * (k + 1) for k in range(len(d) - 1)]
            d.append(series[0] * 0)
        return out[:out_len]

    # ---- singular point analysis ----------------------------------------

    def shifted(self, a):
        """Operator in the local coordinate s = t - a (so t = s + a)."""
        return DiffOp([c.shift(a) for c in self.coeffs], normalize=False)

    def inverted(self):
        """Operator in w = 1/t annihilating y(1/w) for solutions y."""
        return pullback(self, RatFunc(UPoly([mpq(1)]), UPoly([mpq(0), mpq(1)])))

    def indicial_polynomial(self, point=None):
        """Indicial polynomial at a finite point (None means infinity)."""
        if point is None:
            L = self.inverted()
            return L.indicial_polynomial(mpq(0))
        L = self if point == 0 else self.shifted(point)
        th = L.theta_form()
        v = None
        for b in th:
            if not b.is_zero():
                val = next(i for i, c in enumerate(b.coeffs) if c)
                v = val if v is None else min(v, val)
        chi = UPoly([b[v] for b in th])
        return chi

    def is_regular_point(self, point=None):
        """Ordinary or regular singular (Fuchs criterion via theta form)."""
        chi = self.indicial_polynomial(point)
        return chi.degree == self.order

    def indicial_exponents(self, point=None):
        """Rational roots of the indicial polynomial with multiplicity,
        plus irreducible non-rational factors as (poly, multiplicity).

        Raises ValueError at an irregular singular point."""
        chi = self.indicial_polynomial(point)
        if chi.degree < self.order:
            raise ValueError("irregular singular point")
        from .exact import squarefree_decomposition
        from .roots import _rational_roots
        rational = []
        irreducible = []
        for fac, mult in squarefree_decomposition(chi):
            roots, rest = _rational_roots(fac)
            for r in roots:
                rational.extend([r] * mult)
            if rest.degree >= 1:
                irreducible.append((rest.monic(), mult))
        return sorted(rational), irreducible

    def singular_points(self, precision_bits=64):
        """(discs of finite singular points, infinity_is_singular)."""
        lead = self.leading()
        discs = isolate_roots(lead, precision_bits) if lead.degree >= 1 else []
        inf_singular = True
        Linf = self.inverted()
        chi = Linf.indicial_polynomial(mpq(0))
        if chi.degree == Linf.order:
            try:
                exps, irr = Linf.indicial_exponents(mpq(0))
            except ValueError:
                exps, irr = [], [(UPoly([mpq(1)]), 1)]
            if not irr and all(e.denominator == 1 and e >= 0 for e in exps):
                # candidate ordinary point; also require the full local
                # solution basis to be power series (no log), which holds
                # when exponents are distinct
                if len(set(exps)) == len(exps):
                    inf_singular = False
        return discs, inf_singular

    # ---- algebra ---------------------------------------------------------

    def monic_ratfunc_coeffs(self):
        lead = RatFunc(self.leading())
        return [RatFunc(c) / lead for c in self.coeffs]

    def companion(self):
        """Matrix C with d(basis_i) = sum_j C[i][j] basis_j for the basis
        (y, y', ..., y^(r-1)) of the solution module."""
        r = self.order
        mc = self.monic_ratfunc_coeffs()
        C = [[RatFunc(0) for _ in range(r)] for _ in range(r)]
        for i in range(r - 1):
            C[i][i + 1] = RatFunc(1)
        for k in range(r):
            C[r - 1][k] = -mc[k]
        return C


def _clear(cs):
    den = mpz(1)
    for c in cs:
        for co in c.coeffs:
            den = den * co.denominator // gcd_int(den, co.denominator)
    out = [c * mpq(den) for c in cs]
    content = mpz(0)
    for c in out:
        for co in c.coeffs:
            content = gcd_int(content, co.numerator)
    if out[-1].leading() < 0:
        content = -content
    if content not in (0, 1):
        out = [c * mpq(1, content) for c in out]
    return out


def _op_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else UPoly()
        y = b[i] if i < len(b) else UPoly()
        out.append(x + y)
    return out


def companion_system(L: DiffOp):
    """First-order system Y' = A(t) Y with A the companion matrix of L
    normalized monic; Y = (y, y', ..., y^(r-1)) as a column."""
    r = L.order
    if r <= 0:
        raise ValueError("positive order required")
    mc = L.monic_ratfunc_coeffs()
    A = [[RatFunc(0) for _ in range(r)] for _ in range(r)]
    for i in range(r - 1):
        A[i][i + 1] = RatFunc(1)
    for k in range(r):
        A[r - 1][k] = -mc[k]
    return A


def _field_solve_dependency(vectors):
    """First linear dependency among successive row vectors over RatFunc:
    returns coefficients lam with sum lam_k vectors[k] = 0, lam[-1] = 1,
    or None if independent."""
    rows = [list(v) for v in vectors]
    m = len(rows)
    n = len(rows[0])
    # Gaussian elimination tracking the combination matrix
    comb = [[RatFunc(1) if i == j else RatFunc(0) for j in range(m)] for i in range(m)]
    piv_cols = {}
    for i in range(m):
        # reduce row i by previous pivots
        for c, pi in piv_cols.items():
            f = rows[i][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[pi])]
                comb[i] = [a - f * b for a, b in zip(comb[i], comb[pi])]
        lead = None
        for c in range(n):
            if rows[i][c]:
                lead = c
                break
        if lead is None:
            return comb[i][:i + 1]
        inv = RatFunc(1) / rows[i][lead]
        rows[i] = [a * inv for a in rows[i]]
        comb[i] = [a * inv for a in comb[i]]
        piv_cols[lead] = i
    return None


def module_annihilator(C, start):
    """Minimal operator annihilating the module element with coordinate
    row vector `start`, where the module connection is d(basis_i) =
    sum_j C[i][j] basis_j and coordinates are functions: for f = w . basis,
    f' = (w' + w C) . basis."""
    n = len(C)
    w = [RatFunc(x) if not isinstance(x, RatFunc) else x for x in start]
    vectors = [w]
    for k in range(n + 1):
        lam = _field_solve_dependency(vectors)
        if lam is not None:
            # sum lam_k f^(k) = 0 with lam[-1] = 1
            lcm = UPoly([mpq(1)])
            for l in lam:
                lcm = poly_lcm(lcm, l.den)
            coeffs = [l.num * lcm.exact_div(l.den) for l in lam]
            return DiffOp(coeffs)
        last = vectors[-1]
        nxt = [f.derivative() for f in last]
        for j in range(n):
            acc = nxt[j]
            for i in range(n):
                if last[i] and C[i][j]:
                    acc = acc + last[i] * C[i][j]
            nxt[j] = acc
        vectors.append(nxt)
    raise RuntimeError("no dependency found below module dimension bound")


def symmetric_product(L1: DiffOp, L2: DiffOp) -> DiffOp:
    """Operator annihilating all products y1*y2 of solutions, by the
    cyclic-vector construction on the tensor module."""
    C1 = L1.companion()
    C2 = L2.companion()
    r1, r2 = L1.order, L2.order
    n = r1 * r2

    def idx(i, j):
        return i * r2 + j

    C = [[RatFunc(0) for _ in range(n)] for _ in range(n)]
    for i in range(r1):
        for j in range(r2):
            row = idx(i, j)
            for k in range(r1):
                if C1[i][k]:
                    C[row][idx(k, j)] = C[row][idx(k, j)] + C1[i][k]
            for l in range(r2):
                if C2[j][l]:
                    C[row][idx(i, l)] = C[row][idx(i, l)] + C2[j][l]
    start = [RatFunc(0)] * n
    start[idx(0, 0)] = RatFunc(1)
    return module_annihilator(C, start)


def antiderivative_operator(L: DiffOp) -> DiffOp:
    """L o d/dt: annihilates antiderivatives of solutions of L."""
    return DiffOp([UPoly()] + list(L.coeffs), normalize=False)


def pullback(L: DiffOp, subst: RatFunc) -> DiffOp:
    """Operator annihilating y(subst(t)) for all solutions y of L."""
    if not isinstance(subst, RatFunc):
        subst = RatFunc(subst)
    if subst.derivative().is_zero():
        raise ValueError("constant substitution")
    r = L.order
    mc = L.monic_ratfunc_coeffs()
    phi_prime = subst.derivative()
    # basis m_k = y^(k) o subst; d m_k = phi' m_{k+1}, top via the ODE
    C = [[RatFunc(0) for _ in range(r)] for _ in range(r)]
    for i in range(r - 1):
        C[i][i + 1] = phi_prime
    for k in range(r):
        C[r - 1][k] = -phi_prime * mc[k].compose(subst)
    start = [RatFunc(0)] * r
    start[0] = RatFunc(1)
    return module_annihilator(C, start)
