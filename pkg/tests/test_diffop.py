from gmpy2 import mpq

import pytest

from schoen.diffop import (DiffOp, antiderivative_operator, companion_system,
                           module_annihilator, pullback, symmetric_product)
from schoen.exact import RatFunc, UPoly
from schoen.frobenius import (compose_with_function, frobenius_basis,
                              holomorphic_series, normalize_holomorphic,
                              scaled_frobenius_f_series)


def P(*cs):
    return UPoly([mpq(c) for c in cs])


D = DiffOp([P(0), P(1)])                      # d/dt
D2 = DiffOp([P(0), P(0), P(1)])               # d^2/dt^2
THETA2 = DiffOp.from_theta([P(0), P(0), P(1)])  # (t d/dt)^2
D_MINUS_1 = DiffOp([P(-1), P(1)])             # d - 1


def gauss_hypergeometric(a, b, c):
    """theta(theta + c - 1) - t (theta + a)(theta + b)."""
    th0 = P(0, 0, 1) + P(c - 1) * P(0, 1)
    # encode as polynomials in theta with UPoly-in-t coefficients
    # theta^2 coefficient: 1 - t ; theta: (c-1) - (a+b) t ; const: -ab t
    return DiffOp.from_theta([UPoly([mpq(0), mpq(-a * b)]),
                              UPoly([mpq(c - 1), mpq(-(a + b))]),
                              UPoly([mpq(1), mpq(-1)])])


class TestBasics:
    def test_theta_form_roundtrip(self):
        assert THETA2 == DiffOp([P(0), P(0, 1), P(0, 0, 1)])

    def test_indicial_theta2(self):
        exps, irr = THETA2.indicial_exponents(mpq(0))
        assert exps == [0, 0] and not irr

    def test_indicial_ordinary(self):
        exps, irr = D2.indicial_exponents(mpq(0))
        assert exps == [0, 1] and not irr

    def test_singular_points_t_dtheta(self):
        L = DiffOp([P(-1), P(0, 1)])  # t d/dt - 1
        discs, inf_sing = L.singular_points()
        assert len(discs) == 1 and discs[0].center.re == 0
        assert inf_sing

    def test_singular_points_d2(self):
        discs, inf_sing = D2.singular_points()
        assert discs == []
        assert inf_sing  # exponents {0,-1} at infinity

    def test_companion(self):
        A = companion_system(D2)
        assert A[0][1] == RatFunc(1) and A[1][0].is_zero() and A[1][1].is_zero()
        A = companion_system(THETA2)
        assert A[1][1] == RatFunc(P(-1), P(0, 1))


class TestClosures:
    def test_symmetric_product_airy_like(self):
        L = symmetric_product(D2, D2)
        assert L.order == 3
        # solutions 1, t, t^2: apply to t^2
        out = L.apply_ratfunc(RatFunc(P(0, 0, 1)))
        assert out.is_zero()

    def test_symmetric_product_exp(self):
        L = symmetric_product(D_MINUS_1, D_MINUS_1)
        assert L.order == 1
        # annihilates e^{2t}: series test
        series = [mpq(2) ** k / _fact(k) for k in range(12)]
        res = L.apply_series(series, 12)
        assert all(c == 0 for c in res)

    def test_symmetric_product_series_oracle(self):
        La = gauss_hypergeometric(mpq(1, 2), mpq(1, 2), 1)
        Lb = gauss_hypergeometric(mpq(1, 3), mpq(2, 3), 1)
        L = symmetric_product(La, Lb)
        n = 40
        sa = holomorphic_series(La, n)
        sb = holomorphic_series(Lb, n)
        prod = [sum(sa[i] * sb[k - i] for i in range(k + 1)) for k in range(n)]
        res = L.apply_series(prod, n)
        assert all(c == 0 for c in res)

    def test_antiderivative(self):
        assert antiderivative_operator(D).coeffs == D2.coeffs
        L = antiderivative_operator(D_MINUS_1)
        series = [mpq(7)] + [mpq(1) / _fact(k) for k in range(1, 12)]  # e^t + 6... constant shifted
        series[0] = mpq(8)
        res = L.apply_series(series, 12)
        assert all(c == 0 for c in res)

    def test_pullback_scaling(self):
        L = pullback(D_MINUS_1, RatFunc(P(0, 2)))
        # y(2t) for y' = y satisfies y' = 2y
        assert L == DiffOp([P(-2), P(1)])

    def test_pullback_inversion_exponents(self):
        L = pullback(THETA2, RatFunc(P(1), P(0, 1)))
        exps, irr = L.indicial_exponents(mpq(0))
        assert exps == [0, 0] and not irr

    def test_pullback_root_images(self):
        # singularities of the pullback by u0/t are u0/(original roots)
        L = DiffOp([P(1), P(-6, 5, -1)])  # (t-2)(t-3) d - 1  => sing {2,3}
        u0 = mpq(1, 2)
        Lp = pullback(L, RatFunc(P(0, 0, 0), P(0, 1)) + RatFunc(P(u0), P(0, 1)))
        lead = Lp.leading()
        for root in (u0 / 2, u0 / 3):
            assert lead(root) == 0

    def test_pullback_involution_solution_space(self):
        inv = RatFunc(P(1), P(0, 1))
        L2 = pullback(pullback(THETA2, inv), inv)
        n = 12
        # both annihilate 1 and any solution series of THETA2 at t=1 side;
        # compare by mutual annihilation of the holomorphic solution of the
        # other at a generic expansion (use series of log-free sol = const)
        assert L2.apply_ratfunc(RatFunc(1)).is_zero()
        # and t^0, log t structure is preserved: exponents at 0 stay {0,0}
        exps, _ = L2.indicial_exponents(mpq(0))
        assert exps == [0, 0]


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


class TestFrobenius:
    def test_theta2_basis(self):
        fb = frobenius_basis(THETA2, 0, 8)
        assert len(fb.solutions) == 2
        degs = sorted(s.log_degree() for s in fb.solutions)
        assert degs == [0, 1]
        for s in fb.solutions:
            assert s.exponent == 0

    def test_ordinary_point_basis(self):
        fb = frobenius_basis(D2, 0, 8)
        assert len(fb.solutions) == 2
        assert all(s.log_degree() == 0 for s in fb.solutions)

    def test_hypergeometric_series(self):
        L = gauss_hypergeometric(mpq(1, 2), mpq(1, 2), 1)
        s = holomorphic_series(L, 6)
        # 2F1(1/2,1/2;1;t) coefficients ((1/2)_k / k!)^2
        expect = [mpq(1), mpq(1, 4), mpq(9, 64), mpq(25, 256)]
        assert s[:4] == expect

    def test_apply_series_annihilation(self):
        L = gauss_hypergeometric(mpq(1, 3), mpq(1, 5), 1)
        s = holomorphic_series(L, 30)
        res = L.apply_series(s, 30)
        assert all(c == 0 for c in res)

    def test_scaled_basis_log_degrees(self):
        # theta^2 at 0 is a MUM point of order 2
        fb = frobenius_basis(THETA2, 0, 6, scaled=True)
        assert [s.log_degree() for s in fb.solutions] == [0, 1]

    def test_solution_satisfies_operator(self):
        # substitute each log series back into the operator (exact check)
        L = gauss_hypergeometric(mpq(1, 2), mpq(1, 2), 1)  # MUM at 0
        fb = frobenius_basis(L, 0, 12, scaled=True)
        for sol in fb.solutions:
            assert _logseries_residual_zero(L, sol)


def _logseries_residual_zero(L, sol):
    """Apply L to a log series exactly and test vanishing to truncation."""
    from schoen.frobenius import theta_layers
    layers, _ = theta_layers(L)
    K = sol.logdim
    n = len(sol.coeffs)
    from schoen.frobenius import _poly_matrix, _mat_vec
    for j in range(n - len(layers) - 1):
        acc = [mpq(0)] * K
        for m in range(min(j + 1, len(layers))):
            if layers[m].is_zero():
                continue
            alpha = mpq(sol.exponent + j - m)
            Mv = _mat_vec(_poly_matrix(layers[m], alpha, K), sol.coeffs[j - m])
            acc = [a + b for a, b in zip(acc, Mv)]
        if any(acc):
            return False
    return True


class TestNormalize:
    def test_no_residue_possible(self):
        # exponents {0,1} everywhere finite: f = 1... use d^2 (entire solutions)
        f = normalize_holomorphic(D2)
        # solutions 1, t: residue at infinity of y dt demands a correction
        # by a power of t; accept any pure power of t
        assert f.num.degree <= 0 or f.num.coeffs.count(mpq(0)) == f.num.degree

    def test_forced_zero_at_pole(self):
        # L with solution 1/(t-2): (t-2) y' + y = 0
        L = DiffOp([P(1), P(-2, 1)])
        f = normalize_holomorphic(L)
        # f must vanish at t = 2
        assert f.num(mpq(2)) == 0

    def test_theta2_normalization(self):
        f = normalize_holomorphic(THETA2)
        # solutions 1, log t; residues only via dt at infinity: t-power fix
        assert isinstance(f, RatFunc)


class TestComposeFunction:
    def test_gauge(self):
        # L = d - 1 annihilates e^t; L o (1/t) annihilates t e^t
        L = compose_with_function(D_MINUS_1, RatFunc(P(1), P(0, 1)))
        series = [mpq(0)] + [mpq(1) / _fact(k - 1) for k in range(1, 12)]  # t e^t
        res = L.apply_series(series, 12)
        assert all(c == 0 for c in res)
