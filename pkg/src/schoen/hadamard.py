"""Hadamard product of differential operators by ansatz plus verification.

The coefficientwise product series of the two holomorphic solutions is
annihilated by an operator found through a nullspace ansatz; the scan runs
over increasing order then degree (first hit wins). Candidate nullspaces
are located modulo large primes and reconstructed rationally; the returned
operator is verified exactly against a stated horizon of extra series
coefficients.
"""

from gmpy2 import mpq, invert, mpz

from .diffop import DiffOp
from .exact import UPoly
from .frobenius import holomorphic_series

_PRIMES = [
    (1 << 61) - 1,
    2305843009213693967,
    2305843009213694033,
    2305843009213694381,
    2305843009213694653,
]


class HadamardResult(DiffOp):
    """DiffOp with the verification horizon recorded."""

    __slots__ = ("verified_terms",)

    def __init__(self, coeffs, verified_terms, normalize=True):
        super().__init__(coeffs, normalize=normalize)
        self.verified_terms = verified_terms


def hadamard_series(L1: DiffOp, L2: DiffOp, nterms):
    a = holomorphic_series(L1, nterms)
    b = holomorphic_series(L2, nterms)
    return [x * y for x, y in zip(a, b)]


def hadamard_product(L1: DiffOp, L2: DiffOp, order_bound=6, degree_bound=20,
                     verify_terms=100) -> HadamardResult:
    """Minimal annihilator of the Hadamard product of the holomorphic
    solutions within the scanned (order, degree) box."""
    probe = max((order_bound + 1) * (degree_bound + 1) + 30, 80)
    nterms = probe + verify_terms + order_bound + degree_bound
    h = hadamard_series(L1, L2, nterms)
    for order in range(1, order_bound + 1):
        found = _find_for_order(h, order, degree_bound, probe)
        if found is None:
            continue
        coeffs = found
        op = DiffOp(coeffs)
        res = op.apply_series(h, nterms)
        if all(c == 0 for c in res):
            return HadamardResult(coeffs, len(h) - op.order)
        # reconstruction artifact; try more primes via a fresh search
        found = _find_for_order(h, order, degree_bound, probe, extra_primes=True)
        if found is not None:
            op = DiffOp(found)
            res = op.apply_series(h, nterms)
            if all(c == 0 for c in res):
                return HadamardResult(found, len(h) - op.order)
    raise ValueError("no annihilator within order %d degree %d"
                     % (order_bound, degree_bound))


def _find_for_order(h, order, degree_bound, probe, extra_primes=False):
    """Minimal-degree candidate operator of the given order, or None."""
    ncols = (order + 1) * (degree_bound + 1)
    neqs = probe
    primes = _PRIMES if extra_primes else _PRIMES[:2]
    # columns ordered degree-major so that echelonizing the nullspace
    # exposes the minimal-degree vector: column (j, i) = t^j d^i
    cols = [(j, i) for j in range(degree_bound + 1) for i in range(order + 1)]
    sols_mod = []
    used = []
    for p in primes:
        hm = [_q_mod(c, p) for c in h]
        rows = _ansatz_rows_mod(hm, order, degree_bound, neqs, p, cols)
        ns = _nullspace_mod(rows, ncols, p)
        if not ns:
            return None
        vec = _min_degree_vector_mod(ns, cols, order, p)
        sols_mod.append(vec)
        used.append(p)
        cand = _reconstruct(sols_mod, used, cols, order, degree_bound)
        if cand is not None:
            return cand
    return None


def _ansatz_rows_mod(hm, order, degree_bound, neqs, p, cols):
    """Row n: coefficient of t^n of sum c_{j,i} t^j h^{(i)}, reduced mod p."""
    # derivatives of h mod p
    ders = [hm]
    for _ in range(order):
        prev = ders[-1]
        ders.append([(prev[k + 1] * (k + 1)) % p for k in range(len(prev) - 1)])
    rows = []
    for n in range(neqs):
        row = []
        for (j, i) in cols:
            k = n - j
            v = ders[i][k] if 0 <= k < len(ders[i]) else 0
            row.append(v)
        rows.append(row)
    return rows


def _q_mod(q, p):
    num = mpz(q.numerator) % p
    den = mpz(q.denominator) % p
    if den == 0:
        raise ZeroDivisionError("denominator divisible by modulus")
    return int(num * invert(den, p) % p)


def _nullspace_mod(rows, ncols, p):
    m = len(rows)
    a = [list(r) for r in rows]
    piv_of_col = {}
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = int(invert(a[r][c], p))
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                ar = a[r]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], ar)]
        piv_of_col[c] = r
        r += 1
        if r == m:
            break
    basis = []
    for c in range(ncols):
        if c in piv_of_col:
            continue
        v = [0] * ncols
        v[c] = 1
        for c2, rr in piv_of_col.items():
            v[c2] = (-a[rr][c]) % p
        basis.append(v)
    return basis


def _min_degree_vector_mod(ns, cols, order, p):
    """Echelonize the nullspace from the high-degree end and return the
    vector supported on the smallest leading degree block."""
    vecs = [list(v) for v in ns]
    n = len(cols)
    # eliminate on columns from highest degree down
    r = 0
    for c in range(n - 1, -1, -1):
        piv = None
        for i in range(r, len(vecs)):
            if vecs[i][c]:
                piv = i
                break
        if piv is None:
            continue
        vecs[r], vecs[piv] = vecs[piv], vecs[r]
        inv = int(invert(vecs[r][c], p))
        vecs[r] = [(x * inv) % p for x in vecs[r]]
        for i in range(len(vecs)):
            if i != r and vecs[i][c]:
                f = vecs[i][c]
                vr = vecs[r]
                vecs[i] = [(x - f * y) % p for x, y in zip(vecs[i], vr)]
        r += 1
    # the last processed rows have the lowest-degree leading support
    best, best_deg = None, None
    for v in vecs:
        deg = -1
        for idx in range(n - 1, -1, -1):
            if v[idx]:
                deg = cols[idx][0]
                break
        if deg >= 0 and (best_deg is None or deg < best_deg):
            best, best_deg = v, deg
    # normalize: make the leading coefficient of the leading degree 1
    return best


def _reconstruct(sols_mod, primes, cols, order, degree_bound):
    """CRT + rational reconstruction of the candidate coefficient vector."""
    n = len(cols)
    M = 1
    residues = [0] * n
    for vec, p in zip(sols_mod, primes):
        if vec is None:
            return None
        if M == 1:
            residues = list(vec)
            M = p
        else:
            # align scalings: normalize both vectors at the first common
            # nonzero coordinate
            idx = next((i for i in range(n) if residues[i] or vec[i]), None)
            if idx is None:
                return None
            if residues[idx] == 0 or vec[idx] == 0:
                return None
            vprev = residues
            sc = int(invert(vec[idx], p)) * (vprev[idx] % p) % p
            vec = [(x * sc) % p for x in vec]
            residues = [_crt(a, M, b, p) for a, b in zip(vprev, vec)]
            M *= p
    out = []
    for rdu in residues:
        q = _rat_recon(rdu, M)
        if q is None:
            return None
        out.append(q)
    # assemble UPoly coefficients per derivative order
    polys = []
    for i in range(order + 1):
        cs = [mpq(0)] * (degree_bound + 1)
        for (j, ii), val in zip(cols, out):
            if ii == i:
                cs[j] = val
        polys.append(UPoly(cs))
    if polys[-1].is_zero():
        return None
    return polys


def _crt(a, m, b, p):
    # x = a mod m, x = b mod p
    d = (b - a) % p
    x = a + m * (d * int(invert(m % p, p)) % p)
    return x % (m * p)


def _rat_recon(a, m):
    """Rational reconstruction of a mod m with |num|, den <= sqrt(m/2)."""
    if a == 0:
        return mpq(0)
    bound = _isqrt(m // 2)
    r0, r1 = mpz(m), mpz(a)
    s0, s1 = mpz(0), mpz(1)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if _gcd(r1, abs(s1)) != 1:
        return None
    return mpq(int(r1), int(s1))


def _isqrt(n):
    from gmpy2 import isqrt
    return mpz(isqrt(n))


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a
