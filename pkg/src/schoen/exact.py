"""Exact arithmetic: rationals, Gaussian rationals, univariate polynomials,
rational functions and dense linear algebra over Q.

Rationals are gmpy2.mpq (always normalized, positive denominator). All
containers here are immutable after construction and safe to share.
"""

from gmpy2 import mpq, mpz

QQ = mpq


def qq(x, y=None):
    """Coerce to mpq. Accepts int, mpq, Fraction, or a pair."""
    if y is not None:
        return mpq(x, y)
    return mpq(x)


class GaussQ:
    """Gaussian rational re + im*i with exact mpq parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def __add__(self, other):
        other = _gauss(other)
        return GaussQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _gauss(other)
        return GaussQ(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _gauss(other).__sub__(self)

    def __mul__(self, other):
        other = _gauss(other)
        return GaussQ(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _gauss(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussQ")
        return GaussQ((self.re * other.re + self.im * other.im) / n,
                      (self.im * other.re - self.re * other.im) / n)

    def __rtruediv__(self, other):
        return _gauss(other).__truediv__(self)

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __eq__(self, other):
        other = _gauss(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self):
        return GaussQ(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return "GaussQ(%s, %s)" % (self.re, self.im)


def _gauss(x):
    if isinstance(x, GaussQ):
        return x
    return GaussQ(mpq(x), 0)


class UPoly:
    """Dense univariate polynomial, coefficients lowest degree first.

    Coefficients are mpq by default; GaussQ is also supported (same API).
    The zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c):
        return UPoly([c]) if c else UPoly()

    @staticmethod
    def x(deg=1, coeff=1):
        return UPoly([mpq(0)] * deg + [mpq(coeff)])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return mpq(0)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly(out)

    def __sub__(self, other):
        out = list(self.coeffs) + [mpq(0)] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] = out[i] - c
        return UPoly(out)

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, UPoly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return UPoly()
            out = [mpq(0)] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca:
                    for j, cb in enumerate(b):
                        if cb:
                            out[i + j] += ca * cb
            return UPoly(out)
        return UPoly([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = list(self.coeffs)
        den = other.coeffs
        lead = den[-1]
        dd = len(den) - 1
        if len(num) - 1 < dd:
            return UPoly(), self
        q = [mpq(0)] * (len(num) - dd)
        for k in range(len(num) - 1, dd - 1, -1):
            c = num[k]
            if c:
                c = c / lead
                q[k - dd] = c
                for j in range(dd + 1):
                    num[k - dd + j] -= c * den[j]
        return UPoly(q), UPoly(num[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = UPoly([mpq(1)])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UPoly([c / lead for c in self.coeffs])

    def derivative(self):
        return UPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return mpq(0) if not isinstance(x, GaussQ) else GaussQ()
        return acc

    def shift(self, a):
        """p(t) -> p(t + a), exact Taylor shift."""
        out = UPoly()
        for c in reversed(self.coeffs):
            out = out * UPoly([a, _one_like(c)]) + UPoly.const(c)
        return out

    def reverse(self, n=None):
        """Coefficient reversal t^n p(1/t); n defaults to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal order below degree")
        out = [mpq(0)] * (n + 1)
        for i, c in enumerate(self.coeffs):
            out[n - i] = c
        return UPoly(out)

    def content_den_lcm(self):
        """lcm of coefficient denominators (mpq coefficients only)."""
        l = mpz(1)
        for c in self.coeffs:
            l = l * c.denominator // gcd_int(l, c.denominator)
        return l

    def primitive(self):
        """Integer-primitive associate (positive leading coefficient)."""
        if self.is_zero():
            return self
        l = self.content_den_lcm()
        ints = [c * l for c in self.coeffs]
        g = mpz(0)
        for c in ints:
            g = gcd_int(g, c.numerator)
        if ints[-1] < 0:
            g = -g
        return UPoly([c / g for c in ints])

    def __repr__(self):
        if self.is_zero():
            return "UPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append("%s*t^%d" % (c, i))
        return "UPoly(%s)" % " + ".join(terms)


def _one_like(c):
    if hasattr(c, "one_like"):
        return c.one_like()
    if isinstance(c, GaussQ):
        return GaussQ(1)
    return mpq(1)


def gcd_int(a, b):
    a, b = abs(mpz(a)), abs(mpz(b))
    while b:
        a, b = b, a % b
    return a


def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd by the Euclidean algorithm over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: UPoly, b: UPoly):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = UPoly([mpq(1)]), UPoly()
    t0, t1 = UPoly(), UPoly([mpq(1)])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead = r0.leading()
    inv = 1 / lead
    return r0.monic(), s0 * inv, t0 * inv


def poly_lcm(a: UPoly, b: UPoly) -> UPoly:
    if a.is_zero() or b.is_zero():
        return UPoly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def squarefree_part(p: UPoly) -> UPoly:
    """Monic product of the distinct irreducible factors of p."""
    if p.degree <= 0:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def squarefree_decomposition(p: UPoly):
    """Yun's algorithm: list of (factor, multiplicity), factors monic."""
    out = []
    p = p.monic()
    if p.degree <= 0:
        return out
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    m = 1
    while b.degree > 0:
        d = c - b.derivative()
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, m))
        b = b.exact_div(f)
        c = d.exact_div(f)
        m += 1
    return out


class RatFunc:
    """Rational function num/den over Q; den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, UPoly):
            num = UPoly.const(mpq(num))
        if den is None:
            den = UPoly([mpq(1)])
        elif not isinstance(den, UPoly):
            den = UPoly.const(mpq(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lead = den.leading()
        if lead != 1:
            num = num * (1 / lead)
            den = den.monic()
        self.num = num
        self.den = den

    @staticmethod
    def t():
        return RatFunc(UPoly.x())

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return RatFunc(other).__sub__(self)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc(other).__truediv__(self)

    def derivative(self):
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def compose(self, other):
        """self(other(t)) for a RatFunc argument."""
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        n = max(self.num.degree, self.den.degree, 0)
        num = UPoly()
        den = UPoly()
        on, od = other.num, other.den
        odpow = [UPoly([mpq(1)])]
        for _ in range(n):
            odpow.append(odpow[-1] * od)
        acc = UPoly([mpq(1)])
        for i in range(n + 1):
            if i <= self.num.degree and self.num[i]:
                num = num + acc * self.num[i] * odpow[n - i]
            if i <= self.den.degree and self.den[i]:
                den = den + acc * self.den[i] * odpow[n - i]
            if i < n:
                acc = acc * on
        return RatFunc(num, den)

    def __repr__(self):
        return "RatFunc(%r, %r)" % (self.num, self.den)


class QMatrix:
    """Dense exact matrix over Q (mpq entries), immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = tuple(tuple(mpq(e) for e in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def identity(n):
        return QMatrix([[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r, c):
        return QMatrix([[mpq(0)] * c for _ in range(r)])

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        return QMatrix([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return QMatrix([[a - b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.entries, other.entries)])

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            ot = list(zip(*other.entries))
            return QMatrix([[sum((a * b for a, b in zip(row, col)), mpq(0)) for col in ot]
                            for row in self.entries])
        return QMatrix([[a * other for a in row] for row in self.entries])

    __rmul__ = __mul__

    def transpose(self):
        return QMatrix(list(zip(*self.entries))) if self.rows else QMatrix([])

    def hstack(self, other):
        return QMatrix([list(r1) + list(r2) for r1, r2 in zip(self.entries, other.entries)])

    def apply(self, vec):
        return [sum((a * b for a, b in zip(row, vec)), mpq(0)) for row in self.entries]

    def __repr__(self):
        return "QMatrix(%r)" % (list(map(list, self.entries)),)


def _bareiss(rows, ncols):
    """One-sided fraction-free elimination on integer rows (in place).

    Returns the list of pivot column indices. Rows end up in echelon form
    with row i pivoted at pivots[i]; entries stay integral throughout.
    """
    pivots = []
    prev = mpz(1)
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            fi = rows[i][c]
            ri, rr = rows[i], rows[r]
            for j in range(c, ncols):
                ri[j] = (ri[j] * piv - fi * rr[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def _to_int_rows(m: QMatrix, extra=None):
    rows = []
    for i in range(m.rows):
        row = list(m.entries[i]) + (list(extra.entries[i]) if extra is not None else [])
        l = mpz(1)
        for e in row:
            l = l * e.denominator // gcd_int(l, e.denominator)
        rows.append([mpz(e * l) for e in row])
    return rows


def solve_exact(m: QMatrix, rhs: QMatrix):
    """Exact solution of m * x = rhs by fraction-free elimination.

    Returns a QMatrix solution, or None when the system is inconsistent.
    For underdetermined consistent systems one particular solution is
    returned (free variables set to zero).
    """
    if rhs.rows != m.rows:
        raise ValueError("dimension mismatch: %d rows vs rhs %d" % (m.rows, rhs.rows))
    rows = _to_int_rows(m, rhs)
    pivots = _bareiss(rows, m.cols + rhs.cols)
    ncols = m.cols
    for c in pivots:
        if c >= ncols:
            return None  # pivot in the rhs block: inconsistent
    # rows without a pivot are all-zero in the matrix block; a nonzero rhs
    # entry there certifies inconsistency
    for i in range(len(pivots), len(rows)):
        if any(rows[i][ncols:]):
            return None
    sol = [[mpq(0)] * rhs.cols for _ in range(ncols)]
    for idx in range(len(pivots) - 1, -1, -1):
        c = pivots[idx]
        piv = rows[idx][c]
        for k in range(rhs.cols):
            num = mpq(rows[idx][ncols + k])
            for c2 in range(c + 1, ncols):
                if rows[idx][c2]:
                    num -= rows[idx][c2] * sol[c2][k]
            sol[c][k] = num / piv
    return QMatrix(sol)


def nullspace(m: QMatrix):
    """Basis of the right kernel of m over Q, as a list of mpq vectors."""
    rows = _to_int_rows(m)
    pivots = _bareiss(rows, m.cols)
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    basis = []
    for fc in free:
        v = [mpq(0)] * m.cols
        v[fc] = mpq(1)
        for idx in range(len(pivots) - 1, -1, -1):
            c = pivots[idx]
            num = mpq(0)
            for c2 in range(c + 1, m.cols):
                if rows[idx][c2] and v[c2]:
                    num += rows[idx][c2] * v[c2]
            v[c] = -num / rows[idx][c]
        basis.append(v)
    return basis


def mat_rank(m: QMatrix):
    rows = _to_int_rows(m)
    return len(_bareiss(rows, m.cols))


def mat_det(m: QMatrix):
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    if m.rows == 0:
        return mpq(1)
    rows = []
    scale = mpq(1)
    for i in range(m.rows):
        row = list(m.entries[i])
        l = mpz(1)
        for e in row:
            l = l * e.denominator // gcd_int(l, e.denominator)
        scale = scale / l
        rows.append([mpz(e * l) for e in row])
    # Bareiss with sign tracking; the last pivot is the integer determinant
    sign = 1
    prev = mpz(1)
    n = m.rows
    for c in range(n):
        p = None
        for i in range(c, n):
            if rows[i][c]:
                p = i
                break
        if p is None:
            return mpq(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        piv = rows[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                rows[i][j] = (rows[i][j] * piv - rows[i][c] * rows[c][j]) // prev
            rows[i][c] = mpz(0)
        prev = piv
    return scale * sign * prev


def mat_inverse(m: QMatrix):
    sol = solve_exact(m, QMatrix.identity(m.rows))
    if sol is None or m.rows != m.cols:
        raise ValueError("matrix not invertible")
    return sol


class NumberField:
    """Q[x]/(minpoly) for a monic irreducible minpoly over Q."""

    __slots__ = ("minpoly",)

    def __init__(self, minpoly: UPoly):
        if minpoly.degree < 1 or minpoly.leading() != 1:
            raise ValueError("monic minimal polynomial of positive degree required")
        self.minpoly = minpoly

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def gen(self):
        return NFElem(self, UPoly.x())

    def elem(self, x):
        if isinstance(x, NFElem):
            return x
        if isinstance(x, UPoly):
            return NFElem(self, x)
        return NFElem(self, UPoly.const(mpq(x)))

    def degree(self):
        return self.minpoly.degree


class NFElem:
    """Element of a NumberField, stored as a reduced polynomial."""

    __slots__ = ("field", "poly")

    def __init__(self, field, poly):
        self.field = field
        self.poly = poly % field.minpoly if poly.degree >= field.minpoly.degree else poly

    def _co(self, other):
        if isinstance(other, NFElem):
            return other
        if isinstance(other, UPoly):
            return NFElem(self.field, other)
        return NFElem(self.field, UPoly.const(mpq(other)))

    def __add__(self, other):
        return NFElem(self.field, self.poly + self._co(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return NFElem(self.field, self.poly - self._co(other).poly)

    def __rsub__(self, other):
        return self._co(other).__sub__(self)

    def __neg__(self):
        return NFElem(self.field, -self.poly)

    def __mul__(self, other):
        return NFElem(self.field, self.poly * self._co(other).poly)

    __rmul__ = __mul__

    def inverse(self):
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        g, s, _ = poly_xgcd(self.poly, self.field.minpoly)
        if g.degree != 0:
            raise ZeroDivisionError("minimal polynomial not irreducible")
        return NFElem(self.field, s * (1 / g[0]))

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __eq__(self, other):
        try:
            return self.poly == self._co(other).poly
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.poly))

    def __bool__(self):
        return bool(self.poly)

    def one_like(self):
        return NFElem(self.field, UPoly([mpq(1)]))

    def __repr__(self):
        return "NFElem(%r)" % (self.poly,)


def field_solve(rows, rhs):
    """Solve a small linear system over an arbitrary field by Gaussian
    elimination. rows: list of row lists; rhs: vector. Returns a solution
    vector or None when inconsistent; free variables are set to zero."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = None
        for i in range(r, m):
            if a[i][c]:
                p = i
                break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if a[i][n]:
            return None
    zero = rows[0][0] * 0 if m else mpq(0)
    sol = [zero] * n
    for idx, c in enumerate(pivots):
        sol[c] = a[idx][n]
    return sol
