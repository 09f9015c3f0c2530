"""Mathematical constants as certified balls: pi, zeta(3), lambda =
zeta(3)/(2 pi i)^3, and logarithms of positive rationals.

All series are summed by binary splitting on exact rationals with explicit
tail bounds, so the returned radii are rigorous.
"""

from gmpy2 import mpq, iroot, mpz

from .ball import ComplexBall, _q_to_rad_ub

_cache = {}


def _binsplit(ratio, a, b):
    """(U, V) with U = sum_{j=a}^{b-1} t_j/t_a and V = t_b/t_a for a series
    with consecutive term ratio t_k/t_{k-1} = ratio(k)."""
    if b - a == 1:
        return mpq(1), ratio(a + 1)
    m = (a + b) // 2
    u1, v1 = _binsplit(ratio, a, m)
    u2, v2 = _binsplit(ratio, m, b)
    return u1 + v1 * u2, v1 * v2


def _series_sum(first_term, ratio, nterms):
    u, _ = _binsplit(ratio, 0, nterms)
    return first_term * u


def _ball_from_q_with_tail(value_q, tail_q, prec):
    b = ComplexBall.from_q(value_q, 0, prec)
    rm, re = _q_to_rad_ub(tail_q)
    from .ball import _rad_add
    rm, re = _rad_add(b.rm, b.re, rm, re)
    return ComplexBall(b.ar, b.ai, b.ex, rm, re, prec)


def _atan_inv(q, prec):
    """atan(1/q) for integer q >= 2, alternating Gregory series."""
    # |term_N| = 1/((2N+1) q^(2N+1)) <= 2^-(prec+16)
    import math
    n = 1
    while (2 * n + 1) * math.log2(q) < prec + 16:
        n += 1
    q2 = mpz(q) * mpz(q)

    def ratio(k):
        return mpq(-(2 * k - 1), (2 * k + 1) * q2)

    s = _series_sum(mpq(1, q), ratio, n)
    tail = mpq(1, (2 * n + 1) * mpz(q) ** (2 * n + 1))
    return _ball_from_q_with_tail(s, tail, prec)


def pi_ball(prec):
    """pi by Machin's formula 16 atan(1/5) - 4 atan(1/239)."""
    key = ("pi", prec)
    if key not in _cache:
        a = _atan_inv(5, prec + 8)
        b = _atan_inv(239, prec + 8)
        _cache[key] = (a * 16 - b * 4).at_prec(prec)
    return _cache[key]


def zeta3_ball(prec):
    """zeta(3) = 5/2 sum_{n>=1} (-1)^(n-1) / (n^3 binom(2n, n))."""
    key = ("zeta3", prec)
    if key not in _cache:
        n = (prec + 32) // 2 + 4  # terms decay like 4^-n

        def ratio(k):
            # t_k/t_{k-1} with t_k = (-1)^(k-1) (k!)^2/(k^3 (2k)!), k>=1
            kk = k
            return mpq(-(kk - 1) ** 3, kk * (2 * kk) * (2 * kk - 1))

        # first term t_1 = 1/(1*2) = 1/2; the ratio function gets k = a+1
        # with a starting at 0 representing t_1
        def ratio0(k):
            kk = k + 1  # shift: series index starts at 1
            return mpq(-(kk - 1) ** 3, kk * (2 * kk) * (2 * kk - 1))

        s = _series_sum(mpq(1, 2), ratio0, n)
        # alternating with |ratio| < 1/4: tail bounded by the next term
        tail = mpq(1, 2) * mpq(1, 4) ** n * 2
        val = mpq(5, 2) * s
        tailq = mpq(5, 2) * tail
        _cache[key] = _ball_from_q_with_tail(val, tailq, prec)
    return _cache[key]


def lambda_ball(prec):
    """lambda = zeta(3)/(2 pi i)^3 = i zeta(3)/(8 pi^3), purely imaginary."""
    key = ("lambda", prec)
    if key not in _cache:
        z = zeta3_ball(prec + 16)
        p = pi_ball(prec + 16)
        lam = z * (p ** 3 * 8).inverse()
        _cache[key] = lam.mul_i().at_prec(prec)
    return _cache[key]


def constants(precision_bits):
    """Balls for pi, zeta(3) and lambda at radius <= 2^(8 - precision_bits)."""
    if precision_bits < 64:
        raise ValueError("precision too small")
    return {
        "pi": pi_ball(precision_bits),
        "zeta3": zeta3_ball(precision_bits),
        "lambda": lambda_ball(precision_bits),
    }


def two_pi_i_cube(prec):
    """(2 pi i)^3 = -8 pi^3 i as a ball."""
    p = pi_ball(prec + 8)
    return (-(p ** 3) * 8).mul_i().at_prec(prec)


def _atanh_q(r, prec):
    """atanh(r) for rational |r| < 1/2, positive-ratio series."""
    if r == 0:
        return ComplexBall.zero(prec)
    import math
    r2 = r * r
    lr = -math.log2(float(r2))
    n = 1
    while (2 * n + 1) * lr / 2 < prec + 16 + math.log2(2 * n + 1):
        n += 1

    def ratio(k):
        return mpq(2 * k - 1, 2 * k + 1) * r2

    s = _series_sum(mpq(r), ratio, n)
    # tail <= r^(2n+1)/((2n+1)(1-r^2))
    tail = abs(mpq(r)) ** (2 * n + 1) / ((2 * n + 1) * (1 - r2))
    return _ball_from_q_with_tail(s, tail, prec)


def log2_ball(prec):
    key = ("log2", prec)
    if key not in _cache:
        _cache[key] = (_atanh_q(mpq(1, 3), prec + 8) * 2).at_prec(prec)
    return _cache[key]


def log_q(x, prec):
    """log of a positive rational as a real ball."""
    x = mpq(x)
    if x <= 0:
        raise ValueError("log of nonpositive rational")
    # scale x into [3/4, 3/2) by powers of two
    k = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / mpq(2) ** k
    if y < mpq(3, 4):
        y, k = y * 2, k - 1
    elif y >= mpq(3, 2):
        y, k = y / 2, k + 1
    r = (y - 1) / (y + 1)
    val = _atanh_q(r, prec + 8) * 2
    if k:
        val = val + log2_ball(prec + 8) * k
    return val.at_prec(prec)


def root_q(x, n, prec):
    """x^(1/n) for positive rational x and integer n >= 1, as a real ball."""
    x = mpq(x)
    if x <= 0:
        raise ValueError("root of nonpositive rational")
    s = prec + 16
    scaled = (x.numerator << (n * s)) // x.denominator
    r, exact = iroot(scaled, n)
    lo = mpq(int(r), 1 << s)
    if exact and (x.numerator << (n * s)) % x.denominator == 0:
        return ComplexBall.from_q(lo, 0, prec)
    hi = mpq(int(r) + 1, 1 << s)
    mid = (lo + hi) / 2
    b = ComplexBall.from_q(mid, 0, prec + 8)
    from .ball import _rad_add
    rm, re = _q_to_rad_ub((hi - lo) / 2)
    rm, re = _rad_add(b.rm, b.re, rm, re)
    return ComplexBall(b.ar, b.ai, b.ex, rm, re, prec)


def pow_q(x, a, prec):
    """x^a for positive rational x and rational a, as a real ball."""
    a = mpq(a)
    num, den = int(a.numerator), int(a.denominator)
    base = root_q(x, den, prec + 8) if den > 1 else ComplexBall.from_q(x, 0, prec + 8)
    return (base ** num).at_prec(prec)
