"""Certified isolation of the complex roots of rational polynomials.

Approximations come from Durand-Kerner iteration polished by Newton steps
at dyadic precision; certification only uses the exact inclusion bound
min_i |z - r_i| <= deg(p) |p(z)/p'(z)| evaluated in exact rational
arithmetic, so the returned discs are rigorous: pairwise disjoint, one
simple root of the squarefree part in each.
"""

from gmpy2 import mpq, isqrt, mpz

from .ball import PrecisionError
from .exact import GaussQ, UPoly, squarefree_decomposition


class Disc:
    """Closed disc with exact rational center and radius."""

    __slots__ = ("center", "radius", "multiplicity")

    def __init__(self, center, radius, multiplicity=1):
        if not isinstance(center, GaussQ):
            center = GaussQ(center, 0)
        radius = mpq(radius)
        if radius < 0:
            raise ValueError("negative radius")
        self.center = center
        self.radius = radius
        self.multiplicity = multiplicity

    def dist_lb(self, other):
        """Rational lower bound of the distance between the two discs."""
        d2 = (self.center - other.center).norm2()
        d = _sqrt_lb(d2)
        return d - self.radius - other.radius

    def point_dist_lb(self, z):
        d2 = (self.center - z).norm2()
        return _sqrt_lb(d2) - self.radius

    def is_disjoint(self, other):
        d2 = (self.center - other.center).norm2()
        s = self.radius + other.radius
        return d2 > s * s

    def contains_point(self, z):
        d2 = (self.center - z).norm2()
        return d2 <= self.radius * self.radius

    def inflate(self, factor):
        return Disc(self.center, self.radius * factor, self.multiplicity)

    def __repr__(self):
        return "Disc(%s%+sj, r=%s, m=%d)" % (
            float(self.center.re), float(self.center.im),
            float(self.radius), self.multiplicity)


_SQRT_SCALE = 1 << 48


def _sqrt_lb(q):
    """Tight rational lower bound of sqrt(q), q >= 0."""
    if q <= 0:
        return mpq(0)
    num, den = q.numerator, q.denominator
    return mpq(int(isqrt(num * den * _SQRT_SCALE * _SQRT_SCALE)), den * _SQRT_SCALE)


def _sqrt_ub(q):
    """Tight rational upper bound of sqrt(q), q >= 0."""
    if q <= 0:
        return mpq(0)
    num, den = q.numerator, q.denominator
    return mpq(int(isqrt(num * den * _SQRT_SCALE * _SQRT_SCALE)) + 1, den * _SQRT_SCALE)


def _rational_roots(p: UPoly):
    """Exact rational roots with the corresponding deflated polynomial."""
    roots = []
    while p.degree >= 1:
        if not p[0]:
            roots.append(mpq(0))
            p = UPoly(p.coeffs[1:])
            continue
        prim = p.primitive()
        c0 = abs(mpz(prim[0].numerator))
        cd = abs(mpz(prim.leading().numerator))
        num_divs = _small_divisors(c0)
        den_divs = _small_divisors(cd)
        if num_divs is None or den_divs is None:
            break
        found = None
        for a in num_divs:
            for b in den_divs:
                for cand in (mpq(a, b), mpq(-a, b)):
                    if p(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        p = p.exact_div(UPoly([-found, mpq(1)]))
    return roots, p


def _small_divisors(n, limit=120):
    n = int(abs(n))
    if n == 0:
        return None
    divs = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            divs.append(d)
            if d != n // d:
                divs.append(n // d)
            if len(divs) > limit:
                return None
        d += 1
    return sorted(divs)


def _durand_kerner(fcoeffs):
    """Float Durand-Kerner; fcoeffs low-first, monic-normalized inside."""
    d = len(fcoeffs) - 1
    lead = fcoeffs[-1]
    cs = [c / lead for c in fcoeffs]
    # Cauchy bound for initial circle
    bound = 1.0 + max(abs(c) for c in cs[:-1]) if d > 0 else 1.0
    import cmath
    zs = [bound * 0.7 * cmath.exp(2j * cmath.pi * (k + 0.25) / d) for k in range(d)]
    for _ in range(400):
        moved = 0.0
        for k in range(d):
            pk = 0j
            for c in reversed(cs):
                pk = pk * zs[k] + c
            q = complex(1.0)
            for j in range(d):
                if j != k:
                    q *= zs[k] - zs[j]
            if q == 0:
                q = 1e-300
            delta = pk / q
            zs[k] -= delta
            moved = max(moved, abs(delta))
        if moved < 1e-13 * max(1.0, bound):
            break
    return zs


def _round_gauss(z, prec):
    scale = 1 << prec
    return GaussQ(mpq(round(z.re * scale), scale), mpq(round(z.im * scale), scale))


def _newton_polish(p, dp, z, prec, steps):
    for _ in range(steps):
        pv = p(z)
        dv = dp(z)
        if not dv:
            return None
        z = z - pv / dv
        z = _round_gauss(z, prec)
    return z


def isolate_roots(p: UPoly, precision_bits=64):
    """Certified discs for the distinct complex roots of p.

    Returns a list of Disc, pairwise disjoint, each containing exactly one
    distinct root; multiplicities from the squarefree decomposition.
    Raises PrecisionError when certification keeps failing (caller retries
    at doubled precision).
    """
    if p.is_zero():
        raise ValueError("root isolation of the zero polynomial")
    if p.degree == 0:
        return []
    prec = precision_bits
    for _ in range(5):
        discs = _try_isolate(p, prec)
        if discs is not None:
            return discs
        prec *= 2
    raise PrecisionError("root discs could not be separated")


def _try_isolate(p, prec):
    discs = []
    for factor, mult in squarefree_decomposition(p):
        rational, reduced = _rational_roots(factor)
        for r in rational:
            discs.append(Disc(GaussQ(r, 0), mpq(0), mult))
        if reduced.degree >= 1:
            sub = _isolate_squarefree(reduced, mult, prec)
            if sub is None:
                return None
            discs.extend(sub)
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            if not _disjoint_allow_exact(discs[i], discs[j]):
                return None
    return discs


def _disjoint_allow_exact(a, b):
    if a.radius == 0 and b.radius == 0:
        return a.center != b.center
    d2 = (a.center - b.center).norm2()
    s = a.radius + b.radius
    return d2 > s * s


def _isolate_squarefree(p, mult, precision_bits):
    d = p.degree
    dp = p.derivative()
    scale = max(abs(c) for c in p.coeffs)
    fcoeffs = [float(c / scale) for c in p.coeffs]
    if not all(_finite(c) for c in fcoeffs):
        return None
    approx = _durand_kerner(fcoeffs)
    zs = [_round_gauss(GaussQ(_f2q(z.real), _f2q(z.imag)), 64) for z in approx]
    prec = 64
    result = None
    for _ in range(14):
        polished = []
        for z in zs:
            z2 = _newton_polish(p, dp, z, prec, 2)
            if z2 is None:
                polished = None
                break
            polished.append(z2)
        if polished is not None:
            zs = polished
            result = _certify(p, dp, zs, d, mult)
            if result is not None and prec >= precision_bits:
                return result
        prec *= 2
    return None


def _f2q(x):
    if x != x or x in (float("inf"), float("-inf")):
        return mpq(0)
    return mpq(x)


def _finite(c):
    return c == c and c not in (float("inf"), float("-inf"))


def _certify(p, dp, zs, d, mult):
    discs = []
    for z in zs:
        pv = p(z)
        dv = dp(z)
        if not dv:
            return None
        num_ub = _sqrt_ub(pv.norm2())
        den_lb = _sqrt_lb(dv.norm2())
        if den_lb <= 0:
            return None
        r = mpq(d) * num_ub / den_lb
        discs.append(Disc(z, r, mult))
    for i in range(d):
        for j in range(i + 1, d):
            if not discs[i].is_disjoint(discs[j]):
                return None
    return discs
