import random

import pytest
from gmpy2 import mpq

from schoen.ball import BallMatrix, ComplexBall, PrecisionError
from schoen.ball_const import constants, lambda_ball, log_q, pi_ball, pow_q, root_q, two_pi_i_cube, zeta3_ball
from schoen.exact import GaussQ, UPoly
from schoen.roots import Disc, isolate_roots


def q(a, b=1):
    return mpq(a, b)


class TestBallArithmetic:
    def test_exact_ints(self):
        a = ComplexBall.exact_int(3, 64)
        b = ComplexBall.exact_int(-2, 64)
        c = a * b + a
        assert c.is_exact()
        assert c.contains_q(-3)

    def test_soundness_random_compound(self):
        # exact rational result of a compound expression lies in the ball
        random.seed(101)
        for _ in range(1000):
            prec = random.choice([64, 96, 128])
            xs = [mpq(random.randint(-99, 99), random.randint(1, 99)) for _ in range(4)]
            ys = [mpq(random.randint(-99, 99), random.randint(1, 99)) for _ in range(4)]
            balls = [ComplexBall.from_q(x, y, prec) for x, y in zip(xs, ys)]
            gs = [GaussQ(x, y) for x, y in zip(xs, ys)]
            b = (balls[0] * balls[1] - balls[2]) * balls[3] + balls[0]
            g = (gs[0] * gs[1] - gs[2]) * gs[3] + gs[0]
            if not gs[3]:
                continue
            b = b / balls[3]
            g = g / gs[3]
            assert b.contains_q(g.re, g.im)

    def test_division_by_zero_ball(self):
        z = ComplexBall.from_q(0, 0, 64)
        with pytest.raises(PrecisionError):
            z.inverse()

    def test_pow(self):
        b = ComplexBall.from_q(q(1, 3), q(1, 7), 128)
        g = GaussQ(q(1, 3), q(1, 7))
        p = b ** 5
        gp = g * g * g * g * g
        assert p.contains_q(gp.re, gp.im)

    def test_monotone_precision(self):
        x = mpq(355, 113)
        b1 = (ComplexBall.from_q(x, 0, 64) * ComplexBall.from_q(x, 0, 64)).inverse()
        b2 = (ComplexBall.from_q(x, 0, 128) * ComplexBall.from_q(x, 0, 128)).inverse()
        assert b2.radius() <= b1.radius()
        assert b1.overlaps(b2)


class TestConstants:
    def test_pi_reference(self):
        b = pi_ball(128)
        mid, _ = b.mid_q()
        ref = q(3141592653589793238462643383279502884197, 10 ** 39)
        assert abs(mid - ref) <= q(1, 10 ** 35)

    def test_zeta3_against_direct_summation(self):
        # oracle: S_N <= zeta(3) <= S_N + 1/(2 N^2), S_N = sum_{n<=N} n^-3
        n = 4000
        s = mpq(0)
        for k in range(1, n + 1):
            s += mpq(1, k ** 3)
        lo, hi = s, s + mpq(1, 2 * n * n)
        b = zeta3_ball(128)
        mid, _ = b.mid_q()
        assert lo - b.radius() <= mid <= hi + b.radius()
        assert b.radius() <= mpq(2) ** (-120)
        # frozen reference digits
        ref = q(1202056903159594285399738161511449990765, 10 ** 39)
        assert abs(mid - ref) <= q(1, 10 ** 35)

    def test_lambda_purely_imaginary(self):
        lam = lambda_ball(128)
        assert lam.real_part().contains_zero()
        assert not lam.imag_part().contains_zero()

    def test_lambda_times_cube_is_zeta3(self):
        lam = lambda_ball(160)
        z = lam * two_pi_i_cube(160)
        z3 = zeta3_ball(160)
        mid, _ = z3.mid_q()
        assert z.contains_q(mid)

    def test_constants_api_radius(self):
        out = constants(128)
        for k in ("pi", "zeta3", "lambda"):
            assert out[k].radius() <= mpq(2) ** (-120)

    def test_doubling_shrinks(self):
        a = pi_ball(96)
        b = pi_ball(192)
        assert b.radius() < a.radius()
        assert a.overlaps(b)


class TestLogRoot:
    def test_log_one(self):
        assert log_q(1, 128).contains_zero()

    def test_log2_reference(self):
        b = log_q(2, 128)
        mid, _ = b.mid_q()
        ref = q(6931471805599453094172321214581765680755, 10 ** 40)
        assert abs(mid - ref) <= q(1, 10 ** 35)

    def test_log_multiplicative(self):
        a = log_q(6, 160)
        bc = log_q(2, 160) + log_q(3, 160)
        mid, _ = bc.mid_q()
        widened = a.union(bc)
        assert widened.contains_q(mid)
        assert a.overlaps(bc)

    def test_root(self):
        s = root_q(2, 2, 128)
        sq = s * s
        assert sq.contains_q(2)

    def test_pow_q(self):
        p = pow_q(q(4), q(3, 2), 128)
        assert p.contains_q(8)


class TestRoots:
    def test_quadratic_pm_i(self):
        p = UPoly([mpq(1), mpq(0), mpq(1)])
        discs = isolate_roots(p, 64)
        assert len(discs) == 2
        for d in discs:
            assert d.center.re == 0 or abs(float(d.center.re)) < 1e-9
        ims = sorted(float(d.center.im) for d in discs)
        assert abs(ims[0] + 1) < 1e-6 and abs(ims[1] - 1) < 1e-6

    def test_cubic_exact_rationals(self):
        p = UPoly([mpq(0), mpq(-1), mpq(0), mpq(1)])  # t^3 - t
        discs = isolate_roots(p, 64)
        assert len(discs) == 3
        centers = sorted(d.center.re for d in discs)
        assert centers == [mpq(-1), mpq(0), mpq(1)]
        assert all(d.radius == 0 for d in discs)

    def test_multiplicities(self):
        p = UPoly([mpq(1), mpq(2), mpq(1)]) * UPoly([mpq(-2), mpq(1)])  # (t+1)^2 (t-2)
        discs = isolate_roots(p, 64)
        ms = sorted((d.center.re, d.multiplicity) for d in discs)
        assert ms == [(mpq(-1), 2), (mpq(2), 1)]

    def test_residual_bound(self):
        # |p(mid)| <= (derivative bound near disc) * radius, consistent with
        # one enclosed root
        p = UPoly([mpq(-2), mpq(0), mpq(0), mpq(0), mpq(0), mpq(1)])  # t^5 - 2
        discs = isolate_roots(p, 96)
        assert len(discs) == 5
        dp = p.derivative()
        for d in discs:
            pv = p(d.center)
            dv = dp(d.center)
            lhs = pv.norm2()
            rhs = (d.radius * 2) ** 2 * dv.norm2()
            if d.radius:
                assert lhs <= rhs

    def test_disjointness(self):
        p = UPoly([mpq(1, 10 ** 6), mpq(0), mpq(1)]) * UPoly([mpq(-1), mpq(1)])
        discs = isolate_roots(p, 96)
        assert len(discs) == 3
        for i in range(3):
            for j in range(i + 1, 3):
                assert discs[i].radius + discs[j].radius == 0 or discs[i].is_disjoint(discs[j])


class TestBallMatrix:
    def test_solve_and_inverse(self):
        prec = 128
        m = BallMatrix([[ComplexBall.from_q(2, 0, prec), ComplexBall.from_q(1, 0, prec)],
                        [ComplexBall.from_q(1, 0, prec), ComplexBall.from_q(1, 0, prec)]])
        inv = m.inverse()
        prod = m * inv
        assert prod[(0, 0)].contains_q(1)
        assert prod[(0, 1)].contains_q(0)
        assert prod[(1, 0)].contains_q(0)
        assert prod[(1, 1)].contains_q(1)

    def test_det(self):
        prec = 96
        m = BallMatrix([[ComplexBall.from_q(2, 0, prec), ComplexBall.from_q(0, 1, prec)],
                        [ComplexBall.from_q(0, -1, prec), ComplexBall.from_q(3, 0, prec)]])
        # det = 6 - (i)(-i) = 6 - 1 = 5
        assert m.det().contains_q(5)
