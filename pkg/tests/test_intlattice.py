import itertools
import random

from schoen.intlattice import (IntMatrix, Lattice, PairingForm, hnf, kernel,
                               lll_reduce, orth_complement,
                               quotient_presentation, snf)


def brute_snf_2x2(m):
    """Smith invariants of a 2x2 integer matrix by gcd formulas."""
    a, b = m.entries[0]
    c, d = m.entries[1]
    import math
    g1 = math.gcd(math.gcd(abs(a), abs(b)), math.gcd(abs(c), abs(d)))
    det = abs(a * d - b * c)
    if g1 == 0:
        return (0, 0)
    if det == 0:
        return (g1, 0)
    return (g1, det // g1)


class TestNormalForms:
    def test_snf_examples(self):
        d, u, v = snf(IntMatrix([[2, 0], [0, 4]]))
        assert (d[(0, 0)], d[(1, 1)]) == (2, 4)
        d, u, v = snf(IntMatrix([[2, 1], [0, 2]]))
        assert (d[(0, 0)], d[(1, 1)]) == (1, 4)

    def test_snf_transforms_and_chain(self):
        random.seed(5)
        for _ in range(25):
            m = IntMatrix([[random.randint(-9, 9) for _ in range(3)] for _ in range(4)])
            d, u, v = snf(m)
            assert u * m * v == d
            assert abs(u.det()) == 1 and abs(v.det()) == 1
            diag = [d[(i, i)] for i in range(3)]
            for x, y in zip(diag, diag[1:]):
                if y:
                    assert x and y % x == 0

    def test_snf_vs_brute_2x2(self):
        random.seed(9)
        for _ in range(40):
            m = IntMatrix([[random.randint(-6, 6) for _ in range(2)] for _ in range(2)])
            d, u, v = snf(m)
            assert (d[(0, 0)], d[(1, 1)]) == brute_snf_2x2(m)

    def test_hnf_idempotent(self):
        m = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        h = hnf(m)
        assert hnf(h) == h


class TestLattice:
    def test_kernel_saturated(self):
        k = kernel(IntMatrix([[1, 1, 0]]))
        assert k.rank == 2
        assert k.is_saturated()
        for row in k.basis.entries:
            assert row[0] + row[1] == 0

    def test_saturation(self):
        lat = Lattice.spanned_by(2, [[2, 0], [0, 3]])
        assert lat.saturation() == Lattice.full(2)

    def test_saturation_idempotent_and_contains(self):
        random.seed(2)
        for _ in range(20):
            rows = [[random.randint(-5, 5) for _ in range(4)] for _ in range(2)]
            lat = Lattice.spanned_by(4, rows)
            sat = lat.saturation()
            assert sat.saturation() == sat
            for row in lat.basis.entries:
                assert sat.contains(row)
            if lat.rank == sat.rank and lat.rank > 0:
                assert lat.index_in(sat) >= 1

    def test_intersection(self):
        a = Lattice.spanned_by(2, [[2, 0], [0, 1]])
        b = Lattice.spanned_by(2, [[3, 0], [0, 1]])
        c = a.intersect(b)
        assert c.contains([6, 0]) and not c.contains([2, 0]) and not c.contains([3, 0])

    def test_quotient(self):
        big = Lattice.full(3)
        sub = Lattice.spanned_by(3, [[1, 0, 0]])
        lifted, tors = quotient_presentation(big, sub)
        assert len(lifted) == 2 and tors == []
        sub2 = Lattice.spanned_by(2, [[2, 0]])
        lifted, tors = quotient_presentation(Lattice.full(2), sub2)
        assert len(lifted) == 1 and tors == [2]


AC_GRAM = IntMatrix([[0, 0, 1, 0], [0, 0, 0, 3], [-1, 0, 0, 0], [0, -3, 0, 0]])


class TestOrthComplement:
    def test_nondegenerate_full(self):
        form = PairingForm(AC_GRAM, "antisymmetric")
        assert orth_complement(Lattice.full(4), form).rank == 0

    def test_paper_gram_complement(self):
        form = PairingForm(AC_GRAM, "antisymmetric")
        lat = Lattice.spanned_by(4, [[1, 0, 0, 0]])
        comp = orth_complement(lat, form)
        assert comp.rank == 3
        assert comp.contains([1, 0, 0, 0])
        assert comp.contains([0, 1, 0, 0])
        assert comp.contains([0, 0, 0, 1])
        assert not comp.contains([0, 0, 1, 0])

    def test_double_complement_brute(self):
        random.seed(4)
        form = PairingForm(AC_GRAM, "antisymmetric")
        for _ in range(10):
            rows = [[random.randint(-3, 3) for _ in range(4)] for _ in range(2)]
            lat = Lattice.spanned_by(4, rows).saturation()
            if lat.rank == 0:
                continue
            dd = orth_complement(orth_complement(lat, form), form)
            assert dd == lat

    def test_pairing_zero_block(self):
        form = PairingForm(AC_GRAM, "antisymmetric")
        lat = Lattice.spanned_by(4, [[0, 1, 0, 0]])
        comp = orth_complement(lat, form)
        for row in comp.basis.entries:
            assert form.pair(row, [0, 1, 0, 0]) == 0


class TestLLL:
    def test_identity(self):
        assert lll_reduce(IntMatrix.identity(3)) == IntMatrix.identity(3)

    def test_skewed_basis_short_vector(self):
        basis = IntMatrix([[1, 10 ** 6], [0, 1]])
        red = lll_reduce(basis)
        # same lattice
        assert hnf(red) == hnf(basis)
        # brute-force shortest vector in rank 2 within a window
        best = None
        for x, y in itertools.product(range(-3, 4), repeat=2):
            if (x, y) == (0, 0):
                continue
            v = [x * 1 + y * 0, x * 10 ** 6 + y * 1]
            n = v[0] * v[0] + v[1] * v[1]
            if best is None or n < best:
                best = n
        shortest_red = min(sum(c * c for c in row) for row in red.entries)
        assert shortest_red <= 2 * best  # 2^((n-1)/2) = sqrt(2) margin, squared


def test_unimodular_inverse():
    m = IntMatrix([[1, 1], [0, 1]])
    assert m.inverse_unimodular() == IntMatrix([[1, -1], [0, 1]])
