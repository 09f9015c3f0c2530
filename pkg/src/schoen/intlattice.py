"""Exact integer lattice algebra: Hermite and Smith normal forms, kernels,
saturation, orthogonal complements under a pairing, quotients and LLL
reduction. Everything is exact; matrices are immutable tuples of ints.
"""

from gmpy2 import mpq

from .exact import QMatrix, nullspace


class IntMatrix:
    """Dense integer matrix (arbitrary size entries), immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = tuple(tuple(int(e) for e in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def identity(n):
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r, c):
        return IntMatrix([[0] * c for _ in range(r)])

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        return IntMatrix([[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return IntMatrix([[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return IntMatrix([[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            ot = list(zip(*other.entries))
            return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                              for row in self.entries])
        return IntMatrix([[a * other for a in row] for row in self.entries])

    def __rmul__(self, k):
        return self.__mul__(k)

    def transpose(self):
        return IntMatrix(list(zip(*self.entries))) if self.rows else IntMatrix([])

    def apply(self, vec):
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def to_qmatrix(self):
        return QMatrix(self.entries)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        rows = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for c in range(n):
            p = None
            for i in range(c, n):
                if rows[i][c]:
                    p = i
                    break
            if p is None:
                return 0
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                sign = -sign
            piv = rows[c][c]
            for i in range(c + 1, n):
                fi = rows[i][c]
                for j in range(c, n):
                    rows[i][j] = (rows[i][j] * piv - fi * rows[c][j]) // prev
            prev = piv
        return sign * prev

    def inverse_unimodular(self):
        """Exact inverse; requires det = +-1."""
        d = self.det()
        if d not in (1, -1):
            raise ValueError("matrix is not unimodular (det %s)" % d)
        sol = QMatrix(self.entries)
        from .exact import mat_inverse
        inv = mat_inverse(sol)
        return IntMatrix([[int(e) for e in row] for row in inv.entries])

    def trace(self):
        return sum(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def __repr__(self):
        return "IntMatrix(%r)" % (list(map(list, self.entries)),)


def _hnf_rows(rows, ncols, transform=False, n=None):
    """Row HNF of a list of int rows (destructive). Returns (rows, pivots, U)
    with U the unimodular record of row operations when transform is set."""
    m = len(rows)
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transform else None
    r = 0
    pivots = []
    for c in range(ncols):
        # gcd-reduce column c below row r
        p = None
        for i in range(r, m):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        if U:
            U[r], U[p] = U[p], U[r]
        i = r + 1
        while i < m:
            if rows[i][c]:
                a, b = rows[r][c], rows[i][c]
                if b % a == 0:
                    x, y, g = 1, 0, a
                else:
                    g, x, y = _xgcd(a, b)
                # new row r = x*row_r + y*row_i  (pivot g)
                # new row i = -(b//g)*row_r + (a//g)*row_i  (zero at c)
                rr, ri = rows[r], rows[i]
                nr = [x * u + y * v for u, v in zip(rr, ri)]
                ni = [-(b // g) * u + (a // g) * v for u, v in zip(rr, ri)]
                rows[r], rows[i] = nr, ni
                if U:
                    ur, ui = U[r], U[i]
                    nur = [x * u + y * v for u, v in zip(ur, ui)]
                    nui = [-(b // g) * u + (a // g) * v for u, v in zip(ur, ui)]
                    U[r], U[i] = nur, nui
            i += 1
        if rows[r][c] < 0:
            rows[r] = [-v for v in rows[r]]
            if U:
                U[r] = [-v for v in U[r]]
        # reduce entries above the pivot
        piv = rows[r][c]
        for i in range(r):
            q = rows[i][c] // piv
            if q:
                rows[i] = [u - q * v for u, v in zip(rows[i], rows[r])]
                if U:
                    U[i] = [u - q * v for u, v in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots, U


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(m: IntMatrix) -> IntMatrix:
    """Row Hermite normal form: echelon basis of the row lattice, positive
    pivots, entries above each pivot reduced into [0, pivot). Zero rows are
    dropped."""
    rows, pivots, _ = _hnf_rows([list(r) for r in m.entries], m.cols)
    return IntMatrix(rows[:len(pivots)]) if pivots else IntMatrix.zero(0, m.cols)


def snf(m: IntMatrix):
    """Smith normal form. Returns (D, U, V) with U m V = D, U and V
    unimodular, and the diagonal of D satisfying d1 | d2 | ..."""
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_op(i, j, x, y, u, v):
        # (row_i, row_j) <- (x*row_i + y*row_j, u*row_i + v*row_j)
        for arr in (a, U):
            ri, rj = arr[i], arr[j]
            arr[i] = [x * p + y * q for p, q in zip(ri, rj)]
            arr[j] = [u * p + v * q for p, q in zip(ri, rj)]

    def col_op(i, j, x, y, u, v):
        for arr in (a, V):
            for row in arr:
                p, q = row[i], row[j]
                row[i] = x * p + y * q
                row[j] = u * p + v * q

    def clear_position(t):
        # alternately gcd-clear column t and row t until both are clean;
        # dividing entries are removed by plain reductions, the rest by
        # unimodular gcd steps which strictly shrink |a[t][t]|
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    at, ai = a[t][t], a[i][t]
                    if ai % at == 0:
                        row_op(t, i, 1, 0, -(ai // at), 1)
                    else:
                        g, x, y = _xgcd(at, ai)
                        row_op(t, i, x, y, -(ai // g), at // g)
                    done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    at, aj = a[t][t], a[t][j]
                    if aj % at == 0:
                        col_op(t, j, 1, 0, -(aj // at), 1)
                    else:
                        g, x, y = _xgcd(at, aj)
                        col_op(t, j, x, y, -(aj // g), at // g)
                    done = False
            if done:
                return

    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot
        p = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j]:
                    p = (i, j)
                    break
            if p:
                break
        if p is None:
            break
        i, j = p
        if i != t:
            a[t], a[i] = a[i], a[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            for row in V:
                row[t], row[j] = row[j], row[t]
        clear_position(t)
        t += 1
    # enforce divisibility chain
    rank = 0
    while rank < min(nr, nc) and a[rank][rank]:
        rank += 1
    changed = True
    while changed:
        changed = False
        for k in range(rank - 1):
            if a[k + 1][k + 1] % a[k][k]:
                # fold d_{k+1} into row k, then re-diagonalise the block
                row_op(k, k + 1, 1, 1, 0, 1)
                clear_position(k)
                clear_position(k + 1)
                changed = True
    for k in range(rank):
        if a[k][k] < 0:
            a[k] = [-v for v in a[k]]
            U[k] = [-v for v in U[k]]
    return IntMatrix(a), IntMatrix(U), IntMatrix(V)


class Lattice:
    """Sublattice of Z^n given by an independent basis (rows)."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient, basis):
        if not isinstance(basis, IntMatrix):
            basis = IntMatrix(basis)
        if basis.cols not in (ambient, 0):
            if basis.rows == 0:
                basis = IntMatrix.zero(0, ambient)
            else:
                raise ValueError("basis does not live in Z^%d" % ambient)
        h = hnf(basis)
        if h.rows != basis.rows:
            raise ValueError("basis rows are dependent")
        self.ambient = ambient
        self.basis = h

    @staticmethod
    def spanned_by(ambient, vectors):
        """Lattice generated by possibly dependent integer vectors."""
        h = hnf(IntMatrix(list(vectors))) if vectors else IntMatrix.zero(0, ambient)
        return Lattice(ambient, h)

    @staticmethod
    def full(n):
        return Lattice(n, IntMatrix.identity(n))

    @staticmethod
    def zero(n):
        return Lattice(n, IntMatrix.zero(0, n))

    @property
    def rank(self):
        return self.basis.rows

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def contains(self, vec):
        return self.coordinates(vec) is not None

    def coordinates(self, vec):
        """Integer coordinates of vec on the basis, or None."""
        v = list(vec)
        coords = [0] * self.rank
        for i in range(self.rank):
            row = self.basis.row(i)
            c = next(j for j in range(self.ambient) if row[j])
            if v[c] % row[c]:
                return None
            q = v[c] // row[c]
            coords[i] = q
            if q:
                v = [u - q * w for u, w in zip(v, row)]
        if any(v):
            return None
        return coords

    def rational_coordinates(self, vec):
        """mpq coordinates of vec on the basis, or None if outside the span."""
        from .exact import solve_exact
        bt = QMatrix(self.basis.entries).transpose()
        rhs = QMatrix([[mpq(x)] for x in vec])
        sol = solve_exact(bt, rhs)
        if sol is None:
            return None
        return [sol[(i, 0)] for i in range(self.rank)]

    def saturation(self):
        """Smallest saturated lattice containing self."""
        if self.rank == 0:
            return self
        d, u, v = snf(self.basis)
        vinv = v.inverse_unimodular()
        return Lattice(self.ambient, IntMatrix(vinv.entries[:self.rank]))

    def is_saturated(self):
        return self == self.saturation()

    def index_in(self, other):
        """Index [other : self] when self has finite index in other."""
        if self.rank != other.rank:
            raise ValueError("infinite index (rank mismatch)")
        coords = [other.coordinates_q_cleared(row) for row in self.basis.entries]
        mat = IntMatrix(coords)
        d = mat.det()
        if d == 0:
            raise ValueError("not a sublattice of matching rank")
        return abs(d)

    def coordinates_q_cleared(self, vec):
        cs = self.rational_coordinates(vec)
        if cs is None:
            raise ValueError("vector outside the rational span")
        out = []
        for c in cs:
            if c.denominator != 1:
                raise ValueError("vector not in the lattice")
            out.append(int(c))
        return out

    def intersect(self, other):
        """Lattice intersection via the kernel of the stacked bases."""
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        if self.rank == 0 or other.rank == 0:
            return Lattice.zero(self.ambient)
        stacked = QMatrix([list(r) for r in self.basis.entries]
                          + [list(r) for r in other.basis.entries]).transpose()
        kern = nullspace(stacked)
        vecs = []
        for k in kern:
            coeffs = k[:self.rank]
            den = 1
            for c in coeffs:
                den = den * c.denominator // _gcdi(den, c.denominator)
            vec = [0] * self.ambient
            for c, row in zip(coeffs, self.basis.entries):
                ci = int(c * den)
                for j in range(self.ambient):
                    vec[j] += ci * row[j]
            vecs.append(vec)
        return Lattice.spanned_by(self.ambient, vecs)

    def __repr__(self):
        return "Lattice(rank %d in Z^%d)" % (self.rank, self.ambient)


def _gcdi(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def kernel(m: IntMatrix) -> Lattice:
    """Saturated lattice {x : m x = 0} in Z^cols."""
    kern = nullspace(QMatrix(m.entries))
    vecs = []
    for k in kern:
        den = 1
        for c in k:
            den = den * c.denominator // _gcdi(den, c.denominator)
        vecs.append([int(c * den) for c in k])
    return Lattice.spanned_by(m.cols, vecs).saturation()


def saturation(lat: Lattice) -> Lattice:
    return lat.saturation()


class PairingForm:
    """Integer bilinear form with a declared symmetry."""

    __slots__ = ("gram", "symmetry")

    def __init__(self, gram: IntMatrix, symmetry: str):
        if symmetry not in ("symmetric", "antisymmetric"):
            raise ValueError("symmetry must be symmetric|antisymmetric")
        gt = gram.transpose()
        if symmetry == "symmetric" and gt != gram:
            raise ValueError("gram is not symmetric")
        if symmetry == "antisymmetric" and gt != -gram:
            raise ValueError("gram is not antisymmetric")
        self.gram = gram
        self.symmetry = symmetry

    def pair(self, x, y):
        return sum(a * b for a, b in zip(self.gram.apply(y), x))

    def restrict(self, basis_rows):
        b = IntMatrix(basis_rows)
        return PairingForm(b * self.gram * b.transpose(), self.symmetry)

    def __repr__(self):
        return "PairingForm(%s, %r)" % (self.symmetry, list(map(list, self.gram.entries)))


def orth_complement(lat: Lattice, form: PairingForm, ambient=None) -> Lattice:
    """Saturated lattice of ambient vectors pairing to zero with all of lat."""
    n = lat.ambient if ambient is None else ambient
    if form.gram.rows != n:
        raise ValueError("gram size does not match ambient")
    if lat.rank == 0:
        return Lattice.full(n)
    bg = lat.basis * form.gram
    return kernel(bg)


def quotient_presentation(big: Lattice, sub: Lattice):
    """Quotient big/sub: returns (lifted_basis, invariants) where
    lifted_basis rows generate a complement of sub (images form a basis of
    the free part) and invariants lists the nontrivial torsion orders."""
    if sub.rank == 0:
        return [list(r) for r in big.basis.entries], []
    coords = IntMatrix([big.coordinates_q_cleared(row) for row in sub.basis.entries])
    d, u, v = snf(coords)
    vinv = v.inverse_unimodular()
    invariants = [d[(i, i)] for i in range(min(d.rows, d.cols)) if d[(i, i)] not in (0, 1)]
    r = sub.rank
    lift_coords = vinv.entries[r:]
    lifted = [IntMatrix([list(c)]) * big.basis for c in lift_coords]
    rows = [list(l.entries[0]) for l in lifted]
    h = hnf(IntMatrix(rows)) if rows else IntMatrix.zero(0, big.ambient)
    return [list(r) for r in h.entries], invariants


def lll_reduce(basis: IntMatrix, delta=mpq(3, 4)) -> IntMatrix:
    """LLL-reduced basis of the same row lattice (Lovasz parameter delta)."""
    b = [list(map(int, row)) for row in basis.entries]
    n = len(b)
    if n == 0:
        return basis

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    # rational Gram-Schmidt data
    def gso():
        mu = [[mpq(0)] * n for _ in range(n)]
        bstar_sq = [mpq(0)] * n
        gs = []
        for i in range(n):
            vi = [mpq(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = _qdot(b[i], gs[j]) / bstar_sq[j] if bstar_sq[j] else mpq(0)
                vi = [x - mu[i][j] * y for x, y in zip(vi, gs[j])]
            gs.append(vi)
            bstar_sq[i] = sum(x * x for x in vi)
        return mu, bstar_sq, gs

    def _qdot(u, gsv):
        return sum(mpq(x) * y for x, y in zip(u, gsv))

    mu, bsq, gs = gso()
    k = 1
    while k < n:
        # size reduction
        for j in range(k - 1, -1, -1):
            q = _round_q(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, bsq, gs = gso()
        if bsq[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bsq[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, bsq, gs = gso()
            k = max(k - 1, 1)
    return IntMatrix(b)


def _round_q(q):
    # nearest integer, ties toward zero
    n, d = q.numerator, q.denominator
    if d == 1:
        return int(n)
    t = (2 * n + d) // (2 * d) if n >= 0 else -((2 * (-n) + d) // (2 * d))
    return int(t)
