"""Midpoint-radius complex ball arithmetic on dyadic numbers.

A ball is (ar + ai*i)*2^ex with a radius rm*2^re bounding the distance to
the represented exact value. Midpoint mantissas are Python integers, the
radius mantissa is kept below 2^32 and always rounded up, so every
operation returns a ball containing the exact image of its input balls.
Rounding is deterministic (truncation toward -inf at a fixed precision),
making results reproducible across runs and thread schedules.
"""

from gmpy2 import mpq, isqrt

RAD_BITS = 32


class PrecisionError(Exception):
    """Raised when a computation cannot be certified at the working
    precision; callers retry at doubled precision."""


def _rad_norm(rm, re):
    if rm <= 0:
        return 0, 0
    bl = rm.bit_length()
    if bl > RAD_BITS:
        s = bl - RAD_BITS
        lost = rm & ((1 << s) - 1)
        rm = rm >> s
        if lost:
            rm += 1
        re += s
    return rm, re


def _rad_add(am, ae, bm, be):
    if am == 0:
        return bm, be
    if bm == 0:
        return am, ae
    if ae < be:
        d = be - ae
        if d >= am.bit_length():
            am, ae = 1, be
        else:
            lost = am & ((1 << d) - 1)
            am = (am >> d) + (1 if lost else 0)
            ae = be
    elif be < ae:
        d = ae - be
        if d >= bm.bit_length():
            bm, be = 1, ae
        else:
            lost = bm & ((1 << d) - 1)
            bm = (bm >> d) + (1 if lost else 0)
            be = ae
    return _rad_norm(am + bm, ae)


def _rad_mul(am, ae, bm, be):
    if am == 0 or bm == 0:
        return 0, 0
    return _rad_norm(am * bm, ae + be)


def _rad_cmp(am, ae, bm, be):
    """Sign of am*2^ae - bm*2^be."""
    if am == 0:
        return -1 if bm else 0
    if bm == 0:
        return 1
    d = ae - be
    if d >= 0:
        lhs, rhs = am << d, bm
    else:
        lhs, rhs = am, bm << (-d)
    return (lhs > rhs) - (lhs < rhs)


class ComplexBall:
    """Complex ball; immutable. Binary operations work at the larger of the
    two operand precisions."""

    __slots__ = ("ar", "ai", "ex", "rm", "re", "prec")

    def __init__(self, ar, ai, ex, rm, re, prec):
        self.ar = ar
        self.ai = ai
        self.ex = ex
        self.rm = rm
        self.re = re
        self.prec = prec

    # ---- constructors -------------------------------------------------

    @staticmethod
    def from_q(re_q, im_q=0, prec=64):
        """Exactly round a (Gaussian) rational into a ball at prec bits."""
        re_q = mpq(re_q)
        im_q = mpq(im_q)
        ex = -(prec + 8)
        ar, lr = _q_fix(re_q, -ex)
        ai, li = _q_fix(im_q, -ex)
        rm, rexp = (2, ex) if (lr or li) else (0, 0)
        return ComplexBall(ar, ai, ex, rm, rexp, prec)._rounded()

    @staticmethod
    def from_gauss(g, prec=64):
        return ComplexBall.from_q(g.re, g.im, prec)

    @staticmethod
    def exact_int(n, prec=64):
        return ComplexBall(int(n), 0, 0, 0, 0, prec)

    @staticmethod
    def zero(prec=64):
        return ComplexBall(0, 0, 0, 0, 0, prec)

    @staticmethod
    def one(prec=64):
        return ComplexBall(1, 0, 0, 0, 0, prec)

    @staticmethod
    def i_unit(prec=64):
        return ComplexBall(0, 1, 0, 0, 0, prec)

    # ---- internal helpers ---------------------------------------------

    def _rounded(self, prec=None):
        p = self.prec if prec is None else prec
        bl = max(self.ar.bit_length() if self.ar else 0,
                 self.ai.bit_length() if self.ai else 0)
        s = bl - p
        if s <= 0:
            if prec is None or prec == self.prec:
                return self
            return ComplexBall(self.ar, self.ai, self.ex, self.rm, self.re, p)
        ar = self.ar >> s
        ai = self.ai >> s
        rm, re = _rad_add(self.rm, self.re, 2, self.ex + s)
        return ComplexBall(ar, ai, self.ex + s, rm, re, p)

    def at_prec(self, prec):
        return self._rounded(prec)

    # ---- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other, self.prec)
        p = max(self.prec, other.prec)
        a, b = self, other
        if a.ex > b.ex:
            a, b = b, a
        d = b.ex - a.ex
        if d > 4 * p + 64:
            # b dwarfs a's exponent range only if a is tiny; cap the shift
            # by absorbing a into the radius
            am, ae = _abs_ub(a)
            rm, re = _rad_add(b.rm, b.re, am, ae)
            rm, re = _rad_add(rm, re, a.rm, a.re)
            return ComplexBall(b.ar, b.ai, b.ex, rm, re, p)._rounded()
        ar = a.ar + (b.ar << d)
        ai = a.ai + (b.ai << d)
        rm, re = _rad_add(a.rm, a.re, b.rm, b.re)
        return ComplexBall(ar, ai, a.ex, rm, re, p)._rounded()

    def __neg__(self):
        return ComplexBall(-self.ar, -self.ai, self.ex, self.rm, self.re, self.prec)

    def __sub__(self, other):
        return self.__add__(-_coerce(other, self.prec))

    def __rsub__(self, other):
        return (-self).__add__(_coerce(other, self.prec))

    __radd__ = __add__

    def __mul__(self, other):
        other = _coerce(other, self.prec)
        p = max(self.prec, other.prec)
        a, b = self, other
        ar = a.ar * b.ar - a.ai * b.ai
        ai = a.ar * b.ai + a.ai * b.ar
        rm, re = 0, 0
        if b.rm:
            am, ae = _abs_ub(a)
            rm, re = _rad_mul(am, ae, b.rm, b.re)
        if a.rm:
            bm, be = _abs_ub(b)
            t1, t2 = _rad_mul(a.rm, a.re, bm, be)
            rm, re = _rad_add(rm, re, t1, t2)
            if b.rm:
                t1, t2 = _rad_mul(a.rm, a.re, b.rm, b.re)
                rm, re = _rad_add(rm, re, t1, t2)
        return ComplexBall(ar, ai, a.ex + b.ex, rm, re, p)._rounded()

    __rmul__ = __mul__

    def mul_i(self):
        return ComplexBall(-self.ai, self.ar, self.ex, self.rm, self.re, self.prec)

    def conj(self):
        return ComplexBall(self.ar, -self.ai, self.ex, self.rm, self.re, self.prec)

    def inverse(self):
        lo_m, lo_e = _abs_lb(self)
        if lo_m == 0 or _rad_cmp(lo_m, lo_e, self.rm, self.re) <= 0:
            raise PrecisionError("inverse of a ball containing zero")
        p = self.prec
        n = self.ar * self.ar + self.ai * self.ai  # |mid|^2 * 2^{-2ex}
        # mid^{-1} = conj(mid)/|mid|^2, computed at p+16 guard bits
        shift = n.bit_length() + p + 16
        ar = (self.ar << shift) // n
        ai = (-self.ai << shift) // n
        ex = -shift - self.ex
        # rounding error of the two floor divisions
        rm, re = 2, ex
        # propagated radius: r / (|z|(|z| - r)) with |z| lower bounds
        dm, de = _rad_sub_lb(lo_m, lo_e, self.rm, self.re)
        den_m, den_e = lo_m * dm, lo_e + de
        num_m, num_e = self.rm, self.re
        if num_m:
            # ceil-divide num/den in radius format
            s = den_m.bit_length() + RAD_BITS
            q = ((num_m << s) + den_m - 1) // den_m
            t1, t2 = _rad_norm(q, num_e - den_e - s)
            rm, re = _rad_add(rm, re, t1, t2)
        return ComplexBall(ar, ai, ex, rm, re, p)._rounded()

    def __truediv__(self, other):
        other = _coerce(other, self.prec)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other, self.prec) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ComplexBall.one(self.prec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale_2exp(self, k):
        return ComplexBall(self.ar, self.ai, self.ex + k, self.rm,
                           self.re + k if self.rm else 0, self.prec)

    # ---- queries -------------------------------------------------------

    def radius(self):
        """Radius as mpq (exact value of the stored upper bound)."""
        return mpq(self.rm) * mpq(2) ** self.re if self.rm else mpq(0)

    def mid_q(self):
        """Exact midpoint as a pair of mpq."""
        two = mpq(2) ** self.ex
        return mpq(self.ar) * two, mpq(self.ai) * two

    def abs_ub_q(self):
        m, e = _abs_ub(self)
        r = mpq(m) * mpq(2) ** e if m else mpq(0)
        return r + self.radius()

    def abs_lb_q(self):
        m, e = _abs_lb(self)
        lo = mpq(m) * mpq(2) ** e if m else mpq(0)
        lo -= self.radius()
        return lo if lo > 0 else mpq(0)

    def contains_q(self, re_q, im_q=0):
        mr, mi = self.mid_q()
        d2 = (mr - mpq(re_q)) ** 2 + (mi - mpq(im_q)) ** 2
        return d2 <= self.radius() ** 2

    def contains_zero(self):
        return self.contains_q(0, 0)

    def overlaps(self, other):
        mr, mi = self.mid_q()
        orr, oi = other.mid_q()
        d2 = (mr - orr) ** 2 + (mi - oi) ** 2
        return d2 <= (self.radius() + other.radius()) ** 2

    def contains_ball(self, other):
        """True when every point of other lies in self (sufficient test)."""
        mr, mi = self.mid_q()
        orr, oi = other.mid_q()
        d2 = (mr - orr) ** 2 + (mi - oi) ** 2
        gap = self.radius() - other.radius()
        if gap < 0:
            return False
        return d2 <= gap ** 2

    def union(self, other):
        """A ball containing both operands (midpoint kept from self)."""
        mr, mi = self.mid_q()
        orr, oi = other.mid_q()
        d2 = (mr - orr) ** 2 + (mi - oi) ** 2
        d_ub = _q_sqrt_ub(d2)
        r = d_ub + other.radius()
        if r < self.radius():
            r = self.radius()
        rm, re = _q_to_rad_ub(r)
        return ComplexBall(self.ar, self.ai, self.ex, rm, re, self.prec)

    def accuracy_bits(self):
        """Bits of certified absolute accuracy (-log2 radius), or a large
        sentinel for exact balls."""
        if self.rm == 0:
            return 1 << 30
        return -(self.re + self.rm.bit_length())

    def is_exact(self):
        return self.rm == 0

    def real_part(self):
        return ComplexBall(self.ar, 0, self.ex, self.rm, self.re, self.prec)

    def imag_part(self):
        return ComplexBall(self.ai, 0, self.ex, self.rm, self.re, self.prec)

    def __repr__(self):
        mr, mi = self.mid_q()
        return "ComplexBall(%.12g%+.12gj, rad~2^%d)" % (
            float(mr), float(mi),
            self.re + self.rm.bit_length() if self.rm else -(1 << 30))

    def __complex__(self):
        mr, mi = self.mid_q()
        return complex(float(mr), float(mi))


def _q_fix(q, shift):
    """Round q*2^shift to an integer (floor); second value flags error."""
    num = q.numerator << shift
    den = q.denominator
    m = num // den
    return int(m), (num % den) != 0


def _coerce(x, prec):
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, int):
        return ComplexBall(x, 0, 0, 0, 0, prec)
    if isinstance(x, mpq) or type(x).__name__ == "mpq":
        return ComplexBall.from_q(x, 0, prec)
    from .exact import GaussQ
    if isinstance(x, GaussQ):
        return ComplexBall.from_q(x.re, x.im, prec)
    raise TypeError("cannot coerce %r to ComplexBall" % (x,))


def _abs_ub(b):
    """Upper bound of the midpoint modulus in radius format (1-norm)."""
    m = abs(b.ar) + abs(b.ai)
    if m == 0:
        return 0, 0
    return _rad_norm(m, b.ex)


def _abs_lb(b):
    """Lower bound of the midpoint modulus as (mantissa, exponent)."""
    n = b.ar * b.ar + b.ai * b.ai
    if n == 0:
        return 0, 0
    r = int(isqrt(n))
    return r, b.ex  # floor sqrt: r*2^ex <= |mid|


def _rad_sub_lb(am, ae, bm, be):
    """Lower bound of am*2^ae - bm*2^be in the same format; positive input
    difference required."""
    if bm == 0:
        return am, ae
    d = ae - be
    if d >= 0:
        diff = (am << d) - bm
        e = be
    else:
        diff = am - (bm << -d)
        e = ae
    if diff <= 0:
        return 0, 0
    # rounding down is fine for a lower bound
    bl = diff.bit_length()
    if bl > RAD_BITS:
        s = bl - RAD_BITS
        diff >>= s
        e += s
    return diff, e


def _q_sqrt_ub(q):
    """Rational upper bound of sqrt(q) for q >= 0."""
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return mpq(0)
    num, den = q.numerator, q.denominator
    # scale to integer, take isqrt + 1
    s = int(isqrt(num * den)) + 1
    return mpq(s, den)


def _q_to_rad_ub(q):
    """Round a nonnegative mpq up into radius format."""
    if q <= 0:
        return 0, 0
    num, den = q.numerator, q.denominator
    e = -(int(den).bit_length() + RAD_BITS)
    m = ((num << -e) + den - 1) // den
    return _rad_norm(int(m), e)


class BallMatrix:
    """Dense matrix of ComplexBall entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0

    @staticmethod
    def identity(n, prec):
        return BallMatrix([[ComplexBall.one(prec) if i == j else ComplexBall.zero(prec)
                            for j in range(n)] for i in range(n)])

    @staticmethod
    def from_int_matrix(m, prec):
        return BallMatrix([[ComplexBall.exact_int(e, prec) for e in row]
                           for row in m.entries])

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __mul__(self, other):
        if isinstance(other, BallMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            ot = list(zip(*other.entries))
            out = []
            for row in self.entries:
                orow = []
                for col in ot:
                    acc = row[0] * col[0]
                    for a, b in zip(row[1:], col[1:]):
                        acc = acc + a * b
                    orow.append(acc)
                out.append(orow)
            return BallMatrix(out)
        return BallMatrix([[e * other for e in row] for row in self.entries])

    def __add__(self, other):
        return BallMatrix([[a + b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return BallMatrix([[a - b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return BallMatrix([[-e for e in row] for row in self.entries])

    def apply(self, vec):
        out = []
        for row in self.entries:
            acc = row[0] * vec[0]
            for a, b in zip(row[1:], vec[1:]):
                acc = acc + a * b
            out.append(acc)
        return out

    def transpose(self):
        return BallMatrix(list(zip(*self.entries)))

    def solve(self, rhs):
        """Gaussian elimination with modulus pivoting; raises
        PrecisionError when a pivot ball contains zero."""
        n = self.rows
        a = [list(row) + list(rrow) for row, rrow in zip(self.entries, rhs.entries)]
        w = self.cols + rhs.cols
        for c in range(n):
            piv, best = None, None
            for i in range(c, n):
                lb = a[i][c].abs_lb_q()
                if lb > 0 and (best is None or lb > best):
                    piv, best = i, lb
            if piv is None:
                raise PrecisionError("singular ball matrix (pivot contains 0)")
            a[c], a[piv] = a[piv], a[c]
            inv = a[c][c].inverse()
            a[c] = [e * inv for e in a[c]]
            for i in range(n):
                if i != c:
                    f = a[i][c]
                    if not (f.ar == 0 and f.ai == 0 and f.rm == 0):
                        a[i] = [e - f * g for e, g in zip(a[i], a[c])]
        return BallMatrix([row[self.cols:] for row in a])

    def inverse(self):
        return self.solve(BallMatrix.identity(self.rows, self.entries[0][0].prec))

    def det(self):
        n = self.rows
        a = [list(row) for row in self.entries]
        acc = ComplexBall.one(a[0][0].prec if n else 64)
        for c in range(n):
            piv, best = None, None
            for i in range(c, n):
                lb = a[i][c].abs_lb_q()
                if lb > 0 and (best is None or lb > best):
                    piv, best = i, lb
            if piv is None:
                # no certified-nonzero pivot: enclose the remaining block's
                # determinant by its Hadamard row bound (contains zero)
                had = mpq(1)
                for i in range(c, n):
                    rownorm = mpq(0)
                    for j in range(c, n):
                        rownorm += a[i][j].abs_ub_q()
                    had *= rownorm
                rm, re = _q_to_rad_ub(had)
                return acc * ComplexBall(0, 0, 0, rm, re, acc.prec)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                acc = -acc
            acc = acc * a[c][c]
            inv = a[c][c].inverse()
            for i in range(c + 1, n):
                f = a[i][c] * inv
                a[i] = [e - f * g for e, g in zip(a[i], a[c])]
        return acc

    def max_radius(self):
        r = mpq(0)
        for row in self.entries:
            for e in row:
                if e.radius() > r:
                    r = e.radius()
        return r

    def __repr__(self):
        return "BallMatrix(%dx%d, rad<=%s)" % (self.rows, self.cols, float(self.max_radius()))
