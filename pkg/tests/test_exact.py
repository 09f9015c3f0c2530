import random

import pytest
from gmpy2 import mpq

from schoen.exact import (GaussQ, QMatrix, RatFunc, UPoly, mat_det,
                          mat_inverse, mat_rank, nullspace, poly_gcd,
                          solve_exact, squarefree_decomposition,
                          squarefree_part)


def P(*coeffs):
    return UPoly([mpq(c) for c in coeffs])


class TestUPoly:
    def test_arithmetic(self):
        p = P(1, 2, 1)          # (1+t)^2
        q = P(-1, 0, 1)         # t^2 - 1
        assert p * q == P(-1, -2, 0, 2, 1)
        assert (p + q) == P(0, 2, 2)
        assert p.derivative() == P(2, 2)
        assert p(mpq(3)) == 16

    def test_divmod(self):
        p = P(-1, 0, 1)
        d, r = divmod(p, P(-1, 1))
        assert d == P(1, 1) and r.is_zero()
        d, r = divmod(P(1, 1, 1), P(0, 1))
        assert d == P(1, 1) and r == P(1)

    def test_shift_and_reverse(self):
        p = P(0, 0, 1)
        assert p.shift(mpq(1)) == P(1, 2, 1)
        assert p.reverse(3) == P(0, 1)
        g = UPoly([GaussQ(0), GaussQ(1)])
        assert g.shift(GaussQ(0, 1))[0] == GaussQ(0, 1)

    def test_gcd_common_root(self):
        assert poly_gcd(P(-1, 0, 1), P(-1, 1)) == P(-1, 1)

    def test_gcd_zero(self):
        p = P(2, 4)
        assert poly_gcd(p, UPoly()) == p.monic()

    def test_gcd_constructed_common_factor(self):
        # random degree-6 products sharing exactly one factor
        random.seed(7)
        f = P(random.randint(1, 9), random.randint(1, 9), 1)
        while squarefree_part(f) != f.monic():
            f = P(random.randint(1, 9), random.randint(1, 9), 1)
        a = f * P(1, 3, 1, 1, 1)
        b = f * P(2, 1, 7, 5, 1)
        g = poly_gcd(a, b)
        assert g == f.monic()
        assert (a % g).is_zero() and (b % g).is_zero()

    def test_squarefree_decomposition(self):
        p = P(-1, 1) * P(-1, 1) * P(1, 1) ** 1 * P(0, 1) ** 3
        decomp = squarefree_decomposition(p)
        got = {(tuple(f.coeffs), m) for f, m in decomp}
        assert ((mpq(1), mpq(1)), 1) in got
        assert ((mpq(-1), mpq(1)), 2) in got
        assert ((mpq(0), mpq(1)), 3) in got


class TestRatFunc:
    def test_normalization(self):
        r = RatFunc(P(0, 2), P(0, 0, 4))
        assert r.num == P(mpq(1, 2)) and r.den == P(0, 1)

    def test_compose(self):
        r = RatFunc(P(0, 1))           # t
        s = RatFunc(P(1), P(0, 1))     # 1/t
        assert r.compose(s) == s
        f = RatFunc(P(0, 0, 1), P(1, 1))   # t^2/(1+t)
        g = f.compose(RatFunc(P(1, 1)))    # substitute t+1
        assert g == RatFunc(P(1, 2, 1), P(2, 1))

    def test_derivative(self):
        f = RatFunc(P(1), P(0, 1))
        assert f.derivative() == RatFunc(P(-1), P(0, 0, 1))


class TestSolveExact:
    def test_identity(self):
        m = QMatrix.identity(3)
        rhs = QMatrix([[1], [2], [3]])
        assert solve_exact(m, rhs) == rhs

    def test_singular_inconsistent(self):
        m = QMatrix([[1, 1], [2, 2]])
        rhs = QMatrix([[1], [3]])
        assert solve_exact(m, rhs) is None

    def test_random_invertible_multiply_back(self):
        random.seed(11)
        for _ in range(5):
            m = QMatrix([[random.randint(-9, 9) for _ in range(5)] for _ in range(5)])
            if mat_det(m) == 0:
                continue
            rhs = QMatrix([[random.randint(-9, 9)] for _ in range(5)])
            x = solve_exact(m, rhs)
            assert m * x == rhs

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_exact(QMatrix.identity(2), QMatrix([[1], [2], [3]]))

    def test_underdetermined_consistent(self):
        m = QMatrix([[1, 1, 0]])
        rhs = QMatrix([[5]])
        x = solve_exact(m, rhs)
        assert m * x == rhs

    def test_nullspace_rank(self):
        m = QMatrix([[1, 1, 0], [0, 0, 0]])
        ns = nullspace(m)
        assert len(ns) == 2
        assert mat_rank(m) == 1
        for v in ns:
            assert sum(a * b for a, b in zip(m.row(0), v)) == 0

    def test_inverse(self):
        m = QMatrix([[2, 1], [1, 1]])
        assert m * mat_inverse(m) == QMatrix.identity(2)


def test_rational_normalization_invariant():
    random.seed(3)
    for _ in range(50):
        p = random.randint(-50, 50)
        q = random.randint(1, 50)
        k = random.choice([-7, -1, 2, 9])
        assert mpq(p, q) == mpq(k * p, k * q)
        assert mpq(p, q).denominator > 0
